#include "pusnec/ffield.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pusnec {

namespace {

// primitive polynomials for F_{2^w}, bit i = coefficient of x^i
constexpr uint32_t kPrimPoly[11] = {
    0,      // unused
    0x3,    // x + 1
    0x7,    // x^2 + x + 1
    0xB,    // x^3 + x + 1
    0x13,   // x^4 + x + 1
    0x25,   // x^5 + x^2 + 1
    0x43,   // x^6 + x + 1
    0x89,   // x^7 + x^3 + 1
    0x11D,  // x^8 + x^4 + x^3 + x^2 + 1
    0x211,  // x^9 + x^4 + 1
    0x409,  // x^10 + x^3 + 1
};

bool is_prime(int m) {
    if (m < 2) return false;
    for (int d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

}  // namespace

OpCounts& op_counts() {
    thread_local OpCounts counts;
    return counts;
}

GroundField::GroundField(unsigned w) : w_(w), q_(1u << w) {
    if (w < 1 || w > 10) throw UnsupportedPair("ground field width out of range: w=" + std::to_string(w));
    exp_.assign(2 * (q_ - 1), 0);
    log_.assign(q_, 0);
    uint32_t poly = kPrimPoly[w];
    uint32_t x = 1;
    for (uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = static_cast<uint16_t>(x);
        exp_[i + q_ - 1] = static_cast<uint16_t>(x);
        log_[x] = static_cast<uint16_t>(i);
        x <<= 1;
        if (x & q_) x ^= poly;
    }
}

Field::Field(GroundField gf, int n) : gf_(std::move(gf)), n_(n) {
    if (n < 2 || n > kMaxN) throw UnsupportedPair("extension degree out of range: n=" + std::to_string(n));
}

Elem Field::basis_elem(int j) const {
    Elem e;
    e.c[((j % n_) + n_) % n_] = 1;
    return e;
}

Elem Field::from_coords(const std::vector<uint16_t>& coords) const {
    if (static_cast<int>(coords.size()) != n_) throw FieldError("coordinate length mismatch");
    Elem e;
    for (int i = 0; i < n_; ++i) e.c[i] = coords[i];
    return e;
}

bool Field::is_zero(const Elem& a) const {
    for (int i = 0; i < n_; ++i)
        if (a.c[i]) return false;
    return true;
}

Elem Field::add(const Elem& a, const Elem& b) const {
    ++op_counts().add;
    Elem r;
    for (int i = 0; i < n_; ++i) r.c[i] = a.c[i] ^ b.c[i];
    return r;
}

Elem Field::scale(const Elem& a, uint16_t c) const {
    Elem r;
    if (c == 0) return r;
    for (int i = 0; i < n_; ++i) r.c[i] = gf_.mul(a.c[i], c);
    return r;
}

Elem Field::mul(const Elem& a, const Elem& b) const {
    ++op_counts().mul;
    Elem r;
    for (const Entry& e : sparse_) {
        int i0 = e.i, j0 = e.j;
        for (int v = 0; v < n_; ++v) {
            int ia = i0 + v;
            if (ia >= n_) ia -= n_;
            int jb = j0 + v;
            if (jb >= n_) jb -= n_;
            uint16_t p = gf_.mul(a.c[ia], b.c[jb]);
            if (e.t != 1) p = gf_.mul(p, e.t);
            r.c[v] ^= p;
        }
    }
    return r;
}

Elem Field::fast_mul(const Elem& b, int j) const {
    ++op_counts().fast_mul;
    j = ((j % n_) + n_) % n_;
    Elem r;
    for (int v = 0; v < n_; ++v) {
        int j0 = j - v;
        if (j0 < 0) j0 += n_;
        uint16_t acc = 0;
        for (const Entry& e : by_col_[j0]) {
            int ib = e.i + v;
            if (ib >= n_) ib -= n_;
            uint16_t p = b.c[ib];
            if (e.t != 1) p = gf_.mul(p, e.t);
            acc ^= p;
        }
        r.c[v] = acc;
    }
    return r;
}

Elem Field::qpow(const Elem& x, int i) const {
    ++op_counts().qpow;
    i = ((i % n_) + n_) % n_;
    if (i == 0) return x;
    Elem r;
    for (int j = 0; j < n_; ++j) {
        int src = j - i;
        if (src < 0) src += n_;
        r.c[j] = x.c[src];
    }
    return r;
}

uint16_t Field::trace(const Elem& a) const {
    uint16_t t = 0;
    for (int i = 0; i < n_; ++i) t ^= a.c[i];
    return t;
}

Elem Field::inv(const Elem& x) const {
    if (is_zero(x)) throw DivisionByZero("F_{q^n} inverse of zero");
    // one counted inversion; the internal multiply/shift chain is the
    // inversion's own cost, not the caller's
    OpCounts outer = op_counts();
    struct Restore {
        OpCounts saved;
        ~Restore() {
            saved.inv += 1;
            op_counts() = saved;
        }
    } restore{outer};
    // Itoh: x^{-1} = y^{q-2} z^q with y = x^{(q^n-1)/(q-1)}, z = x^{(q^{n-1}-1)/(q-1)}
    Elem z = one_;
    Elem zp = x;
    int np = n_ - 1;
    int i = -1;  // -1 stands for -inf, shift of 0
    int k = 0;
    bool z_is_one = true;
    while (np > 1) {
        if (np & 1) {
            if (i >= 0) zp = qpow(zp, 1 << i);
            z = z_is_one ? zp : mul(zp, z);
            z_is_one = false;
            i = k;
            np -= 1;
        }
        zp = mul(qpow(zp, 1 << k), zp);
        np /= 2;
        k += 1;
    }
    {
        Elem t = (i >= 0) ? qpow(zp, 1 << i) : zp;
        z = z_is_one ? t : mul(t, z);
    }
    z = qpow(z, 1);
    Elem y = mul(x, z);
    // y sits in the subfield: all coordinates equal
    uint16_t ys = y.c[0];
    for (int v = 1; v < n_; ++v)
        if (y.c[v] != ys) throw FieldError("Itoh invariant violated: norm not in F_q");
    if (ys == 0) throw FieldError("Itoh invariant violated: zero norm for nonzero input");
    return scale(z, gf_.inv(ys));
}

Elem Field::random_elem(Rng& rng) const {
    Elem e;
    for (int i = 0; i < n_; ++i) e.c[i] = static_cast<uint16_t>(rng.below(q()));
    return e;
}

Elem Field::random_nonzero(Rng& rng) const {
    for (;;) {
        Elem e = random_elem(rng);
        if (!is_zero(e)) return e;
    }
}

bool Field::pair_supported(unsigned w, int n) {
    if (w < 1 || w > 10 || n < 2 || n > kMaxN) return false;
    int p = 2 * n + 1;
    if (!is_prime(p)) return false;
    // <q, -1> must be the whole multiplicative group mod 2n+1
    uint32_t qm = (1u << w) % static_cast<uint32_t>(p);
    if (qm == 0) return false;
    std::vector<char> seen(p, 0);
    std::vector<int> stack = {1};
    seen[1] = 1;
    int count = 0;
    while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        ++count;
        int b1 = static_cast<int>((static_cast<uint64_t>(a) * qm) % p);
        int b2 = p - a;
        for (int b : {b1, b2}) {
            if (!seen[b]) {
                seen[b] = 1;
                stack.push_back(b);
            }
        }
    }
    return count == p - 1;
}

Field Field::build(unsigned w, int n, const std::string& cache_dir) {
    namespace fs = std::filesystem;
    std::string cache_path;
    if (!cache_dir.empty()) {
        cache_path = cache_dir + "/basis_w" + std::to_string(w) + "_n" + std::to_string(n) + ".txt";
        if (fs::exists(cache_path)) return load(cache_path);
    }
    if (!pair_supported(w, n))
        throw UnsupportedPair("no self-dual normal basis construction for (n=" + std::to_string(n) +
                              ", w=" + std::to_string(w) + ")");

    // Gauss-period type-II table: beta = zeta + zeta^{-1} with zeta a
    // (2n+1)-th root of unity. Products of basis elements reduce to index
    // arithmetic mod 2n+1.
    int p = 2 * n + 1;
    uint32_t qm = (1u << w) % static_cast<uint32_t>(p);
    std::vector<int> idx(p, -1);
    {
        uint64_t a = 1;
        for (int i = 0; i < n; ++i) {
            idx[a] = i;
            idx[p - a] = i;
            a = (a * qm) % p;
        }
        for (int v = 1; v < p; ++v)
            if (idx[v] < 0) throw FieldError("index map incomplete for Gauss-period basis");
    }
    GroundField gf(w);
    Field f(gf, n);
    f.t0_.assign(static_cast<size_t>(n) * n, 0);
    std::vector<uint64_t> qp(n);
    {
        uint64_t a = 1;
        for (int i = 0; i < n; ++i) {
            qp[i] = a;
            a = (a * qm) % p;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            uint16_t& cell = f.t0_[size_t(i) * n + j];
            if (i == j) {
                if (idx[(2 * qp[i]) % p] == 0) cell ^= 1;
            } else {
                if (idx[(qp[i] + qp[j]) % p] == 0) cell ^= 1;
                uint64_t d = (qp[i] + p - qp[j]) % p;
                if (idx[d] == 0) cell ^= 1;
            }
        }
    }
    f.finalize();
    if (!f.self_dual_) throw FieldError("constructed basis failed the self-duality check");
    if (f.ct_ != 2 * n - 1) throw FieldError("constructed basis is not optimal: C_T != 2n-1");
    if (!cache_path.empty()) {
        fs::create_directories(cache_dir);
        f.save(cache_path);
    }
    return f;
}

Field Field::from_table(unsigned w, int n, std::vector<uint16_t> t0) {
    GroundField gf(w);
    Field f(gf, n);
    if (t0.size() != static_cast<size_t>(n) * n) throw FieldError("T0 size mismatch");
    f.t0_ = std::move(t0);
    f.finalize();
    return f;
}

void Field::finalize() {
    sparse_.clear();
    by_col_.assign(n_, {});
    ct_ = 0;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            uint16_t t = t0_[size_t(i) * n_ + j];
            if (t) {
                ++ct_;
                Entry e{static_cast<uint8_t>(i), static_cast<uint8_t>(j), t};
                sparse_.push_back(e);
                by_col_[j].push_back(e);
            }
        }
    }
    // identity element of a self-dual normal basis is the all-ones vector;
    // verify it acts as identity on the basis
    Elem cand;
    for (int i = 0; i < n_; ++i) cand.c[i] = 1;
    one_ = cand;
    for (int j = 0; j < n_; ++j) {
        if (!(mul(cand, basis_elem(j)) == basis_elem(j)))
            throw FieldError("multiplication table does not admit the all-ones identity");
    }
    // exhaustive duality check, Tr(beta^[i] beta^[j]) = delta_ij
    self_dual_ = true;
    for (int i = 0; i < n_ && self_dual_; ++i) {
        for (int j = 0; j < n_; ++j) {
            uint16_t tr = trace(mul(basis_elem(i), basis_elem(j)));
            if (tr != (i == j ? 1 : 0)) {
                self_dual_ = false;
                break;
            }
        }
    }
}

void Field::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FieldError("cannot write basis cache: " + path);
    out << "pusnec-basis v1\n";
    out << "w " << gf_.w() << " n " << n_ << " ct " << ct_ << "\n";
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) out << t0_[size_t(i) * n_ + j] << (j + 1 == n_ ? '\n' : ' ');
    }
}

Field Field::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldError("cannot read basis cache: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "pusnec-basis" || version != "v1") throw FieldError("bad basis cache header: " + path);
    std::string kw;
    unsigned w = 0;
    int n = 0, ct = 0;
    in >> kw >> w >> kw >> n >> kw >> ct;
    std::vector<uint16_t> t0(static_cast<size_t>(n) * n, 0);
    for (auto& v : t0) {
        int x;
        in >> x;
        v = static_cast<uint16_t>(x);
    }
    if (!in) throw FieldError("truncated basis cache: " + path);
    Field f = from_table(w, n, std::move(t0));
    if (f.complexity() != ct) throw FieldError("basis cache corrupt: C_T mismatch");
    if (!f.self_dual()) throw FieldError("basis cache corrupt: duality check failed");
    return f;
}

}  // namespace pusnec
