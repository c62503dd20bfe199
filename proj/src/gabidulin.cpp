#include "pusnec/gabidulin.hpp"

#include <algorithm>

namespace pusnec {

ExtMat ext_mul(const Field& f, const ExtMat& x, const ExtMat& y) {
    ExtMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int kk = 0; kk < x.cols; ++kk) {
            const Elem& v = x.at(i, kk);
            if (f.is_zero(v)) continue;
            for (int j = 0; j < y.cols; ++j) {
                if (f.is_zero(y.at(kk, j))) continue;
                r.at(i, j) = f.add(r.at(i, j), f.mul(v, y.at(kk, j)));
            }
        }
    }
    return r;
}

namespace {

// Gauss-Jordan over F_{q^n}; returns pivot columns. rhs optional.
std::vector<int> ext_gauss(const Field& f, ExtMat& m, ExtMat* rhs) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pr = -1;
        for (int i = r; i < m.rows; ++i) {
            if (!f.is_zero(m.at(i, c))) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        if (pr != r) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
            if (rhs)
                for (int j = 0; j < rhs->cols; ++j) std::swap(rhs->at(pr, j), rhs->at(r, j));
        }
        Elem piv_inv = f.inv(m.at(r, c));
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), piv_inv);
        if (rhs)
            for (int j = 0; j < rhs->cols; ++j) rhs->at(r, j) = f.mul(rhs->at(r, j), piv_inv);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || f.is_zero(m.at(i, c))) continue;
            Elem fac = m.at(i, c);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = f.add(m.at(i, j), f.mul(fac, m.at(r, j)));
            if (rhs)
                for (int j = 0; j < rhs->cols; ++j) rhs->at(i, j) = f.add(rhs->at(i, j), f.mul(fac, rhs->at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::optional<ExtMat> ext_inverse(const Field& f, const ExtMat& m) {
    if (m.rows != m.cols) return std::nullopt;
    ExtMat work = m;
    ExtMat rhs(m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) rhs.at(i, i) = f.one();
    auto pivots = ext_gauss(f, work, &rhs);
    if (static_cast<int>(pivots.size()) != m.rows) return std::nullopt;
    return rhs;
}

int ext_rank(const Field& f, ExtMat m) {
    return static_cast<int>(ext_gauss(f, m, nullptr).size());
}

void CodecSpec::validate() const {
    if (k != k0 + mu0) throw FieldError("codec spec: k != k0 + mu0");
    if (n != k1 + n0) throw FieldError("codec spec: n != k1 + n0");
    if (!(k <= n0 && n0 <= n)) throw FieldError("codec spec: need k <= n0 <= n");
    if (k1 != 0 && k1 < k0) throw FieldError("codec spec: withheld prefix needs k1 >= k0");
    if (l < 1) throw FieldError("codec spec: l >= 1");
    if (k < 1 || k > n - 1 + (n0 == n ? 1 : 0)) {
        if (k < 1 || k > n) throw FieldError("codec spec: k out of range");
    }
}

const std::vector<CodecSpec>& codec_registry() {
    static const std::vector<CodecSpec> table = [] {
        std::vector<CodecSpec> v;
        auto row = [&](const char* name, unsigned w, int n, int k, int n0, int k0, int mu0, const char* ckey,
                       bool minimal) {
            CodecSpec s;
            s.name = name;
            s.w = w;
            s.n = n;
            s.k = k;
            s.n0 = n0;
            s.k0 = k0;
            s.mu0 = mu0;
            s.k1 = n - n0;
            s.l = 3;
            s.key_consumption = ckey;
            s.minimal_length = minimal;
            s.validate();
            v.push_back(s);
        };
        row("gab6-3", 5, 6, 3, 5, 1, 2, "5", true);
        row("gab9-3", 8, 9, 3, 5, 3, 0, "5/3", false);
        row("gab9-4", 8, 9, 4, 6, 3, 1, "2", true);
        row("gab11-3", 8, 11, 3, 8, 3, 0, "8/3", true);
        row("gab11-4", 8, 11, 4, 8, 3, 1, "8/3", true);
        row("gab11-5", 8, 11, 5, 8, 3, 2, "8/3", true);
        row("gab14-5", 5, 14, 5, 7, 5, 0, "7/5", false);
        row("gab14-6", 5, 14, 6, 8, 6, 0, "4/3", true);
        return v;
    }();
    return table;
}

std::optional<CodecSpec> find_codec(const std::string& name) {
    for (const CodecSpec& s : codec_registry())
        if (s.name == name) return s;
    return std::nullopt;
}

CodecSpec full_length_spec(unsigned w, int n, int k, int l) {
    CodecSpec s;
    s.name = "full";
    s.w = w;
    s.n = n;
    s.k = k;
    s.n0 = n;
    s.k0 = k;
    s.mu0 = 0;
    s.k1 = 0;
    s.l = l;
    s.validate();
    return s;
}

LinPoly lbma(const Field& f, const std::vector<Elem>& syn) {
    std::vector<Elem> fp = {f.one()};  // current register f'
    std::vector<Elem> fb = {f.one()};  // previous register f
    Elem r = f.one();
    int taup = 0, taub = 0, h = 1;
    const Elem one = f.one();
    for (size_t i = 0; i < syn.size(); ++i) {
        Elem rp = f.zero();
        int jmax = std::min<int>(taup, static_cast<int>(i));
        for (int j = 0; j <= jmax; ++j) {
            const Elem& c = fp[j];
            if (f.is_zero(c) || f.is_zero(syn[i - j])) continue;
            Elem term = f.qpow(syn[i - j], j);
            if (!(c == one)) term = f.mul(c, term);
            rp = f.add(rp, term);
        }
        if (f.is_zero(rp)) {
            ++h;
            continue;
        }
        Elem shifted_rinv = f.qpow(f.inv(r), h);
        Elem factor = (shifted_rinv == one) ? rp : f.mul(rp, shifted_rinv);
        // register update f' <- f' - factor * (f shifted up by h, coefficients q-powered)
        auto apply_update = [&](int j) {
            if (f.is_zero(fb[static_cast<size_t>(j)])) return;
            Elem t = (fb[static_cast<size_t>(j)] == one) ? factor : f.mul(factor, f.qpow(fb[static_cast<size_t>(j)], h));
            fp[static_cast<size_t>(j + h)] = f.add(fp[static_cast<size_t>(j + h)], t);
        };
        if (taup < taub + h) {
            std::vector<Elem> save = fp;
            int tsave = taup;
            fp.resize(static_cast<size_t>(taub + h) + 1, f.zero());
            for (int j = 0; j <= taub; ++j) apply_update(j);
            taup = taub + h;
            fb = std::move(save);
            taub = tsave;
            r = rp;
            h = 1;
        } else {
            for (int j = 0; j <= taub; ++j) apply_update(j);
            ++h;
        }
    }
    return linpoly_from(f, std::move(fp));
}

LinPoly cps_lbma(const Field& f, const std::vector<std::vector<Elem>>& comps) {
    if (comps.empty()) throw FieldError("cps_lbma needs at least one component");
    LinPoly lambda = lbma(f, comps[0]);
    for (size_t i = 1; i < comps.size(); ++i) {
        const std::vector<Elem>& s = comps[i];
        int tau_prev = lambda.degree();
        int len = static_cast<int>(s.size());
        if (tau_prev > len) throw DegreeOverflow("cps_lbma: accumulated degree exceeds syndrome budget");
        std::vector<Elem> mod(static_cast<size_t>(len - tau_prev));
        bool all_zero = true;
        for (int t = 0; t + tau_prev < len; ++t) {
            Elem acc = f.zero();
            for (int j = 0; j <= tau_prev; ++j) {
                if (f.is_zero(lambda.coeffs[j])) continue;
                acc = f.add(acc, f.mul(lambda.coeffs[j], f.qpow(s[static_cast<size_t>(t + tau_prev - j)], j)));
            }
            mod[static_cast<size_t>(t)] = acc;
            if (!f.is_zero(acc)) all_zero = false;
        }
        if (all_zero) continue;  // component adds no new locations
        LinPoly extra = lbma(f, mod);
        lambda = lin_symbolic_product(f, extra, lambda);
    }
    return lambda;
}

SharedGraTables shared_gra_precompute(const Field& f, const std::vector<Elem>& z) {
    SharedGraTables t;
    t.tau = static_cast<int>(z.size());
    if (t.tau == 0) return t;
    t.A.resize(t.tau);
    t.S.resize(t.tau);
    t.R.resize(t.tau);
    t.A[0] = z;
    for (int v = 0;; ++v) {
        const Elem& piv = t.A[v][0];
        if (f.is_zero(piv)) throw SingularSystem("gra: dependent locations");
        t.S[v] = f.inv(piv);
        if (v == t.tau - 1) break;
        t.R[v] = f.mul(piv, f.qpow(t.S[v], -1));
        t.A[v + 1].resize(static_cast<size_t>(t.tau - v - 1));
        for (int j = v + 1; j < t.tau; ++j) {
            const Elem& prev = t.A[v][static_cast<size_t>(j - v)];
            t.A[v + 1][static_cast<size_t>(j - v - 1)] = f.add(prev, f.mul(t.R[v], f.qpow(prev, -1)));
        }
    }
    return t;
}

std::vector<Elem> shared_gra_solve(const Field& f, const SharedGraTables& t, const std::vector<Elem>& s) {
    int tau = t.tau;
    if (static_cast<int>(s.size()) != tau) throw FieldError("gra: |s| != tau");
    if (tau == 0) return {};
    std::vector<Elem> q = s;
    std::vector<Elem> q0(static_cast<size_t>(tau));
    q0[0] = q[0];
    for (int v = 1; v < tau; ++v) {
        for (int i = 0; i + v < tau; ++i) q[static_cast<size_t>(i)] = f.add(q[static_cast<size_t>(i)], f.mul(t.R[v - 1], f.qpow(q[static_cast<size_t>(i + 1)], -1)));
        q0[static_cast<size_t>(v)] = q[0];
    }
    std::vector<Elem> x(static_cast<size_t>(tau));
    x[static_cast<size_t>(tau - 1)] = f.mul(t.S[static_cast<size_t>(tau - 1)], q0[static_cast<size_t>(tau - 1)]);
    for (int v = tau - 2; v >= 0; --v) {
        Elem acc = q0[static_cast<size_t>(v)];
        for (int j = v + 1; j < tau; ++j)
            acc = f.add(acc, f.mul(t.A[static_cast<size_t>(v)][static_cast<size_t>(j - v)], x[static_cast<size_t>(j)]));
        x[static_cast<size_t>(v)] = f.mul(t.S[static_cast<size_t>(v)], acc);
    }
    return x;
}

std::vector<Elem> gra(const Field& f, const std::vector<Elem>& z, const std::vector<Elem>& s) {
    return shared_gra_solve(f, shared_gra_precompute(f, z), s);
}

Codec::Codec(CodecSpec spec, Field field) : spec_(std::move(spec)), field_(std::move(field)) {
    spec_.validate();
    if (field_.n() != spec_.n || field_.w() != spec_.w) throw FieldError("codec: field does not match spec");
    if (!field_.self_dual()) throw FieldError("codec: q-cyclic construction needs a self-dual basis");
}

Codec Codec::make(const CodecSpec& spec, const std::string& cache_dir) {
    return Codec(spec, Field::build(spec.w, spec.n, cache_dir));
}

ExtMat Codec::g_full() const {
    ExtMat g(spec_.k, spec_.n);
    for (int i = 0; i < spec_.k; ++i)
        for (int v = 0; v < spec_.n; ++v) g.at(i, v) = field_.basis_elem(v + i);
    return g;
}

ExtMat Codec::g1() const {
    ExtMat g(spec_.k, spec_.k);
    for (int i = 0; i < spec_.k; ++i)
        for (int v = 0; v < spec_.k; ++v) g.at(i, v) = field_.basis_elem(v + i);
    return g;
}

ExtMat Codec::g2() const {
    ExtMat g(spec_.k, spec_.n0);
    for (int i = 0; i < spec_.k; ++i)
        for (int v = 0; v < spec_.n0; ++v) g.at(i, v) = field_.basis_elem(spec_.k1 + v + i);
    return g;
}

ExtMat Codec::h_mat() const {
    ExtMat h(spec_.n - spec_.k, spec_.n);
    for (int i = 0; i < spec_.n - spec_.k; ++i)
        for (int v = 0; v < spec_.n; ++v) h.at(i, v) = field_.basis_elem(v + spec_.k + i);
    return h;
}

ExtMat Codec::pre_encode(const ExtMat& u, const ExtMat& r) const {
    const Field& f = field_;
    if (u.rows != spec_.l || u.cols != spec_.k0 || r.rows != spec_.l || r.cols != spec_.mu0)
        throw FieldError("pre_encode: dimension mismatch");
    std::vector<Elem> z(static_cast<size_t>(spec_.k));
    for (int v = 0; v < spec_.k; ++v) z[static_cast<size_t>(v)] = f.basis_elem(spec_.k - 1 + v);
    SharedGraTables tables = shared_gra_precompute(f, z);
    ExtMat out(spec_.l, spec_.k);
    std::vector<Elem> s(static_cast<size_t>(spec_.k));
    for (int comp = 0; comp < spec_.l; ++comp) {
        for (int j = 0; j < spec_.k; ++j) {
            int idx = spec_.k - 1 - j;
            const Elem& uv = idx < spec_.k0 ? u.at(comp, idx) : r.at(comp, idx - spec_.k0);
            s[static_cast<size_t>(j)] = f.qpow(uv, j);
        }
        std::vector<Elem> fr = shared_gra_solve(f, tables, s);
        for (int j = 0; j < spec_.k; ++j) out.at(comp, j) = fr[static_cast<size_t>(j)];
    }
    return out;
}

ExtMat Codec::encode_full(const ExtMat& fcoef) const {
    const Field& f = field_;
    if (fcoef.rows != spec_.l || fcoef.cols != spec_.k) throw FieldError("encode: dimension mismatch");
    ExtMat x(spec_.l, spec_.n);
    for (int comp = 0; comp < spec_.l; ++comp) {
        for (int v = 0; v < spec_.n; ++v) {
            Elem acc = f.zero();
            for (int j = 0; j < spec_.k; ++j) {
                if (f.is_zero(fcoef.at(comp, j))) continue;
                acc = f.add(acc, f.fast_mul(fcoef.at(comp, j), v + j));
            }
            x.at(comp, v) = acc;
        }
    }
    return x;
}

ExtMat Codec::encode(const ExtMat& fcoef) const {
    ExtMat full = encode_full(fcoef);
    ExtMat x(spec_.l, spec_.n0);
    for (int comp = 0; comp < spec_.l; ++comp)
        for (int v = 0; v < spec_.n0; ++v) x.at(comp, v) = full.at(comp, spec_.k1 + v);
    return x;
}

std::vector<Elem> Codec::syndromes(const std::vector<Elem>& row) const {
    const Field& f = field_;
    int nk = spec_.n - spec_.k;
    std::vector<Elem> s(static_cast<size_t>(nk), f.zero());
    for (int t = 0; t < nk; ++t) {
        Elem acc = f.zero();
        for (int v = 0; v < spec_.n; ++v) {
            if (f.is_zero(row[static_cast<size_t>(v)])) continue;
            acc = f.add(acc, f.fast_mul(row[static_cast<size_t>(v)], v + spec_.k + t));
        }
        s[static_cast<size_t>(t)] = acc;
    }
    return s;
}

DecodeOutput Codec::decode(const ExtMat& received, const FqMat& erasure_rows) const {
    const Field& f = field_;
    const int n = spec_.n, k = spec_.k, n0 = spec_.n0, k1 = spec_.k1, l = spec_.l;
    const int nk = n - k;
    DecodeOutput out;

    if (received.rows != l || received.cols != n0) throw FieldError("decode: dimension mismatch");
    if (erasure_rows.cols != n0 && erasure_rows.rows != 0) throw FieldError("decode: erasure row width mismatch");

    const int rho_recv = erasure_rows.rows;
    const int rho = k1 + rho_recv;
    out.rho_received = rho_recv;
    if (rho > nk) {
        out.status = DecodeOutput::Status::failure;
        out.reason = "erasure count beyond capability";
        return out;
    }

    // full-length erasure locations: k1 withheld prefix units, then the
    // reported rows shifted past the prefix
    FqMat bhat(rho, n);
    for (int j = 0; j < k1; ++j) bhat.at(j, j) = 1;
    for (int j = 0; j < rho_recv; ++j)
        for (int v = 0; v < n0; ++v) bhat.at(k1 + j, k1 + v) = erasure_rows.at(j, v);

    // 0a) transformed erasure locations d^_j, coords are the rows shifted by k
    std::vector<Elem> dhat(static_cast<size_t>(rho));
    for (int j = 0; j < rho; ++j) {
        Elem e;
        for (int v = 0; v < n; ++v) e.c[(v + k) % n] = bhat.at(j, v);
        dhat[static_cast<size_t>(j)] = e;
    }

    // 0b) erasure locator via RPA; a sifted root means dependent locations
    MinimalPolyResult ulp = lin_minimal_poly(f, dhat);
    if (static_cast<int>(ulp.kept.size()) != rho) {
        out.status = DecodeOutput::Status::invalid_erasures;
        out.reason = "erasure locations linearly dependent";
        return out;
    }

    // 1) component syndromes, reversed, filtered
    const int flen = nk - rho;
    std::vector<std::vector<Elem>> filt(static_cast<size_t>(l));
    std::vector<std::vector<Elem>> rev(static_cast<size_t>(l));
    for (int comp = 0; comp < l; ++comp) {
        std::vector<Elem> row(static_cast<size_t>(n), f.zero());
        for (int v = 0; v < n0; ++v) row[static_cast<size_t>(k1 + v)] = received.at(comp, v);
        std::vector<Elem> s = syndromes(row);
        std::vector<Elem>& st = rev[static_cast<size_t>(comp)];
        st.resize(static_cast<size_t>(nk));
        for (int t = 0; t < nk; ++t) st[static_cast<size_t>(t)] = f.qpow(s[static_cast<size_t>(nk - 1 - t)], t - nk + 1);
        std::vector<Elem>& fs = filt[static_cast<size_t>(comp)];
        fs.resize(static_cast<size_t>(flen));
        for (int t = 0; t < flen; ++t) {
            Elem acc = f.zero();
            for (int v = 0; v <= rho; ++v) {
                const Elem& c = ulp.poly.coeffs[static_cast<size_t>(v)];
                if (f.is_zero(c)) continue;
                acc = f.add(acc, f.mul(c, f.qpow(st[static_cast<size_t>(rho + t - v)], v)));
            }
            fs[static_cast<size_t>(t)] = acc;
        }
    }

    // 2) common error locator across the interleaved components
    LinPoly elp;
    try {
        elp = cps_lbma(f, filt);
    } catch (const DegreeOverflow&) {
        out.status = DecodeOutput::Status::failure;
        out.reason = "locator degree overflow";
        return out;
    }
    const int tau = elp.degree();
    out.tau = tau;
    // guaranteed for 2*tau <= flen; interleaving raises the (probabilistic)
    // acceptance window to floor(l*flen/(l+1)), gated by the checks below
    const int tau_cap = std::max(flen / 2, l * flen / (l + 1));
    if (tau > tau_cap) {
        out.status = DecodeOutput::Status::failure;
        out.reason = "LFSR length inconsistent with syndrome budget";
        return out;
    }

    // 3) rootspace and the Psi D = L location system
    std::vector<Elem> roots;
    std::vector<Elem> dloc;
    FqMat dmat(n, tau);
    if (tau > 0) {
        roots = lin_rootspace(f, elp);
        if (static_cast<int>(roots.size()) != tau) {
            out.status = DecodeOutput::Status::failure;
            out.reason = "rootspace dimension mismatch";
            return out;
        }
        FqMat psi(n, n);
        for (int uu = 0; uu < n; ++uu) {
            Elem pu = f.zero();
            for (size_t v = 0; v < ulp.poly.coeffs.size(); ++v) {
                if (f.is_zero(ulp.poly.coeffs[v])) continue;
                pu = f.add(pu, f.fast_mul(ulp.poly.coeffs[v], uu + static_cast<int>(v)));
            }
            for (int i = 0; i < n; ++i) psi.at(i, uu) = pu.c[i];
        }
        FqMat lmat(n, tau);
        for (int j = 0; j < tau; ++j)
            for (int i = 0; i < n; ++i) lmat.at(i, j) = roots[static_cast<size_t>(j)].c[i];
        std::optional<FqMat> sol = fq_solve(f.ground(), psi, lmat);
        if (!sol) {
            out.status = DecodeOutput::Status::failure;
            out.reason = "location system inconsistent";
            return out;
        }
        dmat = *sol;
        dloc.resize(static_cast<size_t>(tau));
        for (int j = 0; j < tau; ++j) {
            Elem e;
            for (int i = 0; i < n; ++i) e.c[i] = dmat.at(i, j);
            dloc[static_cast<size_t>(j)] = e;
        }
    }

    // 4) error values (shared GRA over the common locations), then erasure
    // values from the modified reversed syndromes
    std::vector<std::vector<Elem>> aval(static_cast<size_t>(l));         // a_j per component
    std::vector<std::vector<Elem>> aval_shift(static_cast<size_t>(l));   // a_j^[-n+k+1]
    if (tau > 0) {
        SharedGraTables tables;
        try {
            tables = shared_gra_precompute(f, roots);
        } catch (const SingularSystem&) {
            out.status = DecodeOutput::Status::failure;
            out.reason = "dependent error locations";
            return out;
        }
        std::vector<Elem> s(static_cast<size_t>(tau));
        for (int comp = 0; comp < l; ++comp) {
            for (int t = 0; t < tau; ++t) s[static_cast<size_t>(t)] = filt[static_cast<size_t>(comp)][static_cast<size_t>(t)];
            std::vector<Elem> x = shared_gra_solve(f, tables, s);  // a^[rho-n+k+1]
            std::vector<Elem>& am = aval_shift[static_cast<size_t>(comp)];
            std::vector<Elem>& av = aval[static_cast<size_t>(comp)];
            am.resize(static_cast<size_t>(tau));
            av.resize(static_cast<size_t>(tau));
            for (int j = 0; j < tau; ++j) {
                am[static_cast<size_t>(j)] = f.qpow(x[static_cast<size_t>(j)], -rho);
                av[static_cast<size_t>(j)] = f.qpow(am[static_cast<size_t>(j)], nk - 1);
            }
        }
    }

    std::vector<std::vector<Elem>> ahat(static_cast<size_t>(l));  // erasure values per component
    if (rho > 0) {
        SharedGraTables tables = shared_gra_precompute(f, dhat);
        std::vector<Elem> sbar(static_cast<size_t>(rho));
        for (int comp = 0; comp < l; ++comp) {
            for (int t = 0; t < rho; ++t) {
                Elem acc = rev[static_cast<size_t>(comp)][static_cast<size_t>(t)];
                for (int j = 0; j < tau; ++j)
                    acc = f.add(acc, f.mul(dloc[static_cast<size_t>(j)],
                                           f.qpow(aval_shift[static_cast<size_t>(comp)][static_cast<size_t>(j)], t)));
                sbar[static_cast<size_t>(t)] = acc;
            }
            std::vector<Elem> x = shared_gra_solve(f, tables, sbar);
            std::vector<Elem>& av = ahat[static_cast<size_t>(comp)];
            av.resize(static_cast<size_t>(rho));
            for (int j = 0; j < rho; ++j) av[static_cast<size_t>(j)] = f.qpow(x[static_cast<size_t>(j)], nk - 1);
        }
    }

    // 5) resolve errata; B_{j,v} = D_{j,(v+k) mod n}
    ExtMat xhat(l, n);
    for (int comp = 0; comp < l; ++comp) {
        for (int v = 0; v < n; ++v) {
            Elem acc = comp < received.rows && v >= k1 ? received.at(comp, v - k1) : f.zero();
            for (int j = 0; j < tau; ++j) {
                uint16_t b = dmat.at((v + k) % n, j);
                if (b) acc = f.add(acc, f.scale(aval[static_cast<size_t>(comp)][static_cast<size_t>(j)], b));
            }
            for (int j = 0; j < rho; ++j) {
                uint16_t b = bhat.at(j, v);
                if (b) acc = f.add(acc, f.scale(ahat[static_cast<size_t>(comp)][static_cast<size_t>(j)], b));
            }
            xhat.at(comp, v) = acc;
        }
    }

    // consistency gate: the corrected word must be a codeword
    for (int comp = 0; comp < l; ++comp) {
        std::vector<Elem> row(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) row[static_cast<size_t>(v)] = xhat.at(comp, v);
        std::vector<Elem> s = syndromes(row);
        for (const Elem& e : s) {
            if (!f.is_zero(e)) {
                out.status = DecodeOutput::Status::failure;
                out.reason = "re-encode gate: corrected word is not a codeword";
                return out;
            }
        }
    }

    // 6) restore f^ = x^' H'^T, then u' = f^ G1
    out.u = ExtMat(l, spec_.k0);
    out.r = ExtMat(l, spec_.mu0);
    for (int comp = 0; comp < l; ++comp) {
        std::vector<Elem> fh(static_cast<size_t>(k), f.zero());
        for (int j = 0; j < k; ++j) {
            Elem acc = f.zero();
            for (int v = 0; v < n; ++v) {
                if (f.is_zero(xhat.at(comp, v))) continue;
                acc = f.add(acc, f.fast_mul(xhat.at(comp, v), v + j));
            }
            fh[static_cast<size_t>(j)] = acc;
        }
        for (int j = 0; j < k; ++j) {
            Elem acc = f.zero();
            for (int i = 0; i < k; ++i) {
                if (f.is_zero(fh[static_cast<size_t>(i)])) continue;
                acc = f.add(acc, f.fast_mul(fh[static_cast<size_t>(i)], j + i));
            }
            if (j < spec_.k0) out.u.at(comp, j) = acc;
            else out.r.at(comp, j - spec_.k0) = acc;
        }
    }
    out.status = DecodeOutput::Status::ok;
    return out;
}

ExtMat Codec::random_message(Rng& rng) const {
    ExtMat m(spec_.l, spec_.k0);
    for (Elem& e : m.data) e = field_.random_elem(rng);
    return m;
}

ExtMat Codec::random_mask(Rng& rng) const {
    ExtMat m(spec_.l, spec_.mu0);
    for (Elem& e : m.data) e = field_.random_elem(rng);
    return m;
}

std::vector<uint8_t> Codec::pack_outer(const ExtMat& word) const {
    if (spec_.w > 8) throw FieldError("packed serialization defined for w <= 8");
    if (word.rows != spec_.l || word.cols != spec_.n0) throw FieldError("pack: dimension mismatch");
    std::vector<uint8_t> bytes;
    uint32_t acc = 0;
    int bits = 0;
    for (int col = 0; col < spec_.n0; ++col) {
        for (int row = 0; row < spec_.l; ++row) {
            for (int v = 0; v < spec_.n; ++v) {
                acc |= static_cast<uint32_t>(word.at(row, col).c[v]) << bits;
                bits += static_cast<int>(spec_.w);
                while (bits >= 8) {
                    bytes.push_back(static_cast<uint8_t>(acc & 0xFF));
                    acc >>= 8;
                    bits -= 8;
                }
            }
        }
    }
    if (bits > 0) bytes.push_back(static_cast<uint8_t>(acc & 0xFF));
    return bytes;
}

ExtMat Codec::unpack_outer(const std::vector<uint8_t>& bytes) const {
    if (spec_.w > 8) throw FieldError("packed serialization defined for w <= 8");
    ExtMat word(spec_.l, spec_.n0);
    size_t pos = 0;
    uint32_t acc = 0;
    int bits = 0;
    uint32_t mask = (1u << spec_.w) - 1;
    for (int col = 0; col < spec_.n0; ++col) {
        for (int row = 0; row < spec_.l; ++row) {
            for (int v = 0; v < spec_.n; ++v) {
                while (bits < static_cast<int>(spec_.w)) {
                    if (pos >= bytes.size()) throw FieldError("unpack: truncated buffer");
                    acc |= static_cast<uint32_t>(bytes[pos++]) << bits;
                    bits += 8;
                }
                word.at(row, col).c[v] = static_cast<uint16_t>(acc & mask);
                acc >>= spec_.w;
                bits -= static_cast<int>(spec_.w);
            }
        }
    }
    return word;
}

}  // namespace pusnec
