#include "pusnec/wiretap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace pusnec {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

SecrecyReport leakage_indices(const WiretapDistribution& dist, int k, int xi, double symbol_bits) {
    if (xi < 1) throw FieldError("leakage_indices: xi >= 1");
    if (std::abs(dist.sum() - 1.0) > 1e-9) throw FieldError("leakage_indices: distribution not normalized");
    SecrecyReport rep;
    rep.xi = xi;
    rep.symbol_bits = symbol_bits;
    const int top = static_cast<int>(dist.p.size()) - 1;
    for (int mu = std::max(0, k - xi); mu <= std::min(k - 1, top); ++mu)
        rep.ramp_index += (mu - k + xi) * dist.p[static_cast<size_t>(mu)];
    for (int mu = k; mu <= top; ++mu) rep.plp += dist.p[static_cast<size_t>(mu)];
    rep.leakage_index = rep.ramp_index + xi * rep.plp;
    rep.leakage_bits = rep.leakage_index * symbol_bits;
    return rep;
}

double disjoint_path_mu_prob(double gamma, int eta, int n0, int mu) {
    double pc = 1.0 - std::pow(1.0 - gamma, eta);  // one path compromised
    return binom(n0, mu) * std::pow(1.0 - pc, n0 - mu) * std::pow(pc, mu);
}

double disjoint_path_fer(double eps, int eta, int n0, int k, int n_bobs) {
    double pe = 1.0 - std::pow(1.0 - eps, eta);  // trunk of one path erased
    double ok = 0.0;
    for (int l = 0; l <= n0 - k; ++l) {
        double e1 = binom(n0, l) * std::pow(1.0 - pe, n0 - l) * std::pow(pe, l);
        double inner = 0.0;
        for (int j = 0; j <= n0 - k - l; ++j)
            inner += binom(n0 - l, j) * std::pow(1.0 - eps, n0 - l - j) * std::pow(eps, j);
        ok += e1 * std::pow(inner, n_bobs);
    }
    return 1.0 - ok;
}

DisjointPathAnalytics disjoint_path_analytics(double gamma, double eps, int eta, int n0, int k, int n_bobs, int xi,
                                              double symbol_bits) {
    DisjointPathAnalytics out;
    out.dist.provenance = "analytic";
    out.dist.p.resize(static_cast<size_t>(n0) + 1);
    for (int mu = 0; mu <= n0; ++mu) out.dist.p[static_cast<size_t>(mu)] = disjoint_path_mu_prob(gamma, eta, n0, mu);
    out.fer = disjoint_path_fer(eps, eta, n0, k, n_bobs);
    out.report = leakage_indices(out.dist, k, xi, symbol_bits);
    return out;
}

double threshold_model_mi(int k, int mu0, int mu, int xi) {
    if (xi < 1 || xi > k - mu0) throw FieldError("threshold_model_mi: need 1 <= xi <= k0");
    if (mu <= mu0) return 0.0;
    if (mu >= k) return xi;
    return std::max(0, xi - (k - mu));
}

std::vector<ToyMiEntry> toy_mi_oracle(int k, uint64_t q_alpha, int k0,
                                      const std::function<std::vector<uint32_t>(const std::vector<uint32_t>&)>& encode) {
    double total_log =
        static_cast<double>(k) * std::log2(static_cast<double>(q_alpha));
    if (total_log > 20.5) throw TooLarge("toy oracle enumeration bound exceeded");
    uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= q_alpha;

    // one pass: record the z realization per message index
    std::vector<uint64_t> zkey(total);
    std::unordered_map<uint64_t, uint64_t> z_ids;
    std::vector<uint32_t> msg(static_cast<size_t>(k), 0);
    for (uint64_t idx = 0; idx < total; ++idx) {
        uint64_t t = idx;
        for (int i = 0; i < k; ++i) {
            msg[static_cast<size_t>(i)] = static_cast<uint32_t>(t % q_alpha);
            t /= q_alpha;
        }
        std::vector<uint32_t> z = encode(msg);
        uint64_t key = 1469598103934665603ULL;
        for (uint32_t s : z) {
            key ^= s;
            key *= 1099511628211ULL;
        }
        auto [it, inserted] = z_ids.emplace(key, z_ids.size());
        zkey[idx] = it->second;
    }
    const uint64_t nz = z_ids.size();

    std::vector<ToyMiEntry> table;
    for (uint32_t mask = 1; mask < (1u << k0); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < k0; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        // joint counts over (u_S, z)
        std::map<std::pair<uint64_t, uint64_t>, uint64_t> joint;
        std::vector<uint64_t> zcount(nz, 0);
        uint64_t us_card = 1;
        for (size_t i = 0; i < subset.size(); ++i) us_card *= q_alpha;
        for (uint64_t idx = 0; idx < total; ++idx) {
            uint64_t t = idx, us = 0, base = 1;
            std::vector<uint32_t> digits(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) {
                digits[static_cast<size_t>(i)] = static_cast<uint32_t>(t % q_alpha);
                t /= q_alpha;
            }
            for (int i : subset) {
                us += digits[static_cast<size_t>(i)] * base;
                base *= q_alpha;
            }
            ++joint[{us, zkey[idx]}];
            ++zcount[zkey[idx]];
        }
        double mi = 0.0;
        const double dt = static_cast<double>(total);
        const double pu = 1.0 / static_cast<double>(us_card);
        for (const auto& [key, cnt] : joint) {
            double pj = cnt / dt;
            double pz = zcount[key.second] / dt;
            mi += pj * std::log2(pj / (pu * pz));
        }
        table.push_back({subset, mi});
    }
    return table;
}

double toy_mi_lookup(const std::vector<ToyMiEntry>& table, const std::vector<int>& subset) {
    for (const ToyMiEntry& e : table)
        if (e.subset == subset) return e.bits;
    throw FieldError("toy_mi_lookup: subset not present");
}

std::vector<ToyMiEntry> toy_mi_linear_code(const GroundField& gf, const FqMat& gen, const std::vector<int>& taps,
                                           int k0) {
    const int k = gen.rows;
    auto encode = [&](const std::vector<uint32_t>& msg) {
        std::vector<uint32_t> z;
        z.reserve(taps.size());
        for (int c : taps) {
            uint16_t acc = 0;
            for (int i = 0; i < k; ++i) acc ^= gf.mul(static_cast<uint16_t>(msg[static_cast<size_t>(i)]), gen.at(i, c));
            z.push_back(acc);
        }
        return z;
    };
    return toy_mi_oracle(k, gf.q(), k0, encode);
}

namespace {

// pack an F_{q^n} element into an alphabet digit
uint32_t elem_digit(const Field& f, const Elem& e) {
    uint32_t v = 0;
    for (int i = f.n() - 1; i >= 0; --i) v = v * f.q() + e.c[i];
    return v;
}

Elem digit_elem(const Field& f, uint32_t d) {
    Elem e;
    for (int i = 0; i < f.n(); ++i) {
        e.c[i] = static_cast<uint16_t>(d % f.q());
        d /= f.q();
    }
    return e;
}

}  // namespace

std::vector<ToyMiEntry> toy_mi_gabidulin(const Codec& codec, const FqMat& wiretap_cols) {
    const Field& f = codec.field();
    const CodecSpec& sp = codec.spec();
    const uint64_t Q = static_cast<uint64_t>(std::pow(static_cast<double>(f.q()), f.n()) + 0.5);
    ExtMat g1 = codec.g1();
    ExtMat g2 = codec.g2();
    auto encode = [&](const std::vector<uint32_t>& msg) {
        // msg digits are the coefficient vector f; observation is
        // (f G2) B preceded by nothing: u r follow from f G1 in the caller
        std::vector<Elem> coef(static_cast<size_t>(sp.k));
        for (int i = 0; i < sp.k; ++i) coef[static_cast<size_t>(i)] = digit_elem(f, msg[static_cast<size_t>(i)]);
        std::vector<uint32_t> z;
        z.reserve(static_cast<size_t>(wiretap_cols.cols));
        for (int t = 0; t < wiretap_cols.cols; ++t) {
            Elem acc = f.zero();
            for (int v = 0; v < sp.n0; ++v) {
                uint16_t b = wiretap_cols.at(v, t);
                if (!b) continue;
                Elem xv = f.zero();
                for (int i = 0; i < sp.k; ++i)
                    xv = f.add(xv, f.mul(coef[static_cast<size_t>(i)], g2.at(i, v)));
                acc = f.add(acc, f.scale(xv, b));
            }
            z.push_back(elem_digit(f, acc));
        }
        return z;
    };
    // the enumeration has to expose u, not f, to the subsets: pre-encode is
    // a bijection, so enumerate f but report subsets of u-digits. We remap:
    // digit i of the oracle message = u'_i = (f G1)_i. Enumerating u'
    // uniformly and converting to f gives the same channel.
    ExtMat g1inv_mat = *ext_inverse(f, g1);
    auto encode_from_uprime = [&, g1inv = std::move(g1inv_mat)](const std::vector<uint32_t>& uprime) {
        std::vector<Elem> up(static_cast<size_t>(sp.k));
        for (int i = 0; i < sp.k; ++i) up[static_cast<size_t>(i)] = digit_elem(f, uprime[static_cast<size_t>(i)]);
        std::vector<uint32_t> fd(static_cast<size_t>(sp.k));
        for (int j = 0; j < sp.k; ++j) {
            Elem acc = f.zero();
            for (int i = 0; i < sp.k; ++i) acc = f.add(acc, f.mul(up[static_cast<size_t>(i)], g1inv.at(i, j)));
            fd[static_cast<size_t>(j)] = elem_digit(f, acc);
        }
        return encode(fd);
    };
    return toy_mi_oracle(sp.k, Q, sp.k0, encode_from_uprime);
}

CosetCheckReport coset_structure_check(const Codec& codec, const FqMat& wiretap_cols, int xi) {
    const Field& f = codec.field();
    const CodecSpec& sp = codec.spec();
    const int n = sp.n, k = sp.k, mu = wiretap_cols.cols;
    CosetCheckReport rep;
    rep.mu = mu;
    if (fq_rank(f.ground(), wiretap_cols) != mu) throw StructureMismatch("wiretap matrix not full column rank");
    if (xi < 1 || xi > sp.k0) throw StructureMismatch("xi out of range");

    // pad B below the withheld prefix
    FqMat bpad(n, mu);
    for (int v = 0; v < sp.n0; ++v)
        for (int t = 0; t < mu; ++t) bpad.at(sp.k1 + v, t) = wiretap_cols.at(v, t);

    // selector T = [units on kept coords | bpad]; kept coords avoid pivots
    // of the B-combinations supported inside the first k positions
    std::vector<int> kept;
    if (mu < k) {
        FqMat lower(n - k, mu);
        for (int i = k; i < n; ++i)
            for (int t = 0; t < mu; ++t) lower.at(i - k, t) = bpad.at(i, t);
        FqMat kerc = fq_kernel_basis(f.ground(), lower);  // combos vanishing below k
        FqMat w(n, kerc.cols);
        if (kerc.cols > 0) w = fq_mul(f.ground(), bpad, kerc);
        FqMat wt = fq_transpose(w);
        std::vector<char> pivot_coord(static_cast<size_t>(n), 0);
        {
            // pivots of the row space of w^T
            FqMat m = wt;
            int r = 0;
            for (int c = 0; c < m.cols && r < m.rows; ++c) {
                int pr = -1;
                for (int i = r; i < m.rows; ++i)
                    if (m.at(i, c)) {
                        pr = i;
                        break;
                    }
                if (pr < 0) continue;
                for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
                uint16_t piv_inv = f.ground().inv(m.at(r, c));
                for (int j = 0; j < m.cols; ++j) m.at(r, j) = f.ground().mul(m.at(r, j), piv_inv);
                for (int i = 0; i < m.rows; ++i) {
                    if (i == r || !m.at(i, c)) continue;
                    uint16_t fac = m.at(i, c);
                    for (int j = 0; j < m.cols; ++j) m.at(i, j) ^= f.ground().mul(fac, m.at(r, j));
                }
                pivot_coord[static_cast<size_t>(c)] = 1;
                ++r;
            }
        }
        if (mu <= sp.mu0) {
            // keep all of u plus enough mask coordinates
            for (int c = 0; c < k && static_cast<int>(kept.size()) < k - mu; ++c)
                if (!pivot_coord[static_cast<size_t>(c)]) kept.push_back(c);
            for (int c = 0; c < sp.k0; ++c)
                if (std::find(kept.begin(), kept.end(), c) == kept.end())
                    throw StructureMismatch("coset selector cannot retain the full message block");
        } else {
            // punctured unit over the message block only
            for (int c = 0; c < sp.k0 && static_cast<int>(kept.size()) < k - mu; ++c)
                if (!pivot_coord[static_cast<size_t>(c)]) kept.push_back(c);
            if (static_cast<int>(kept.size()) != k - mu)
                throw StructureMismatch("coset selector: not enough independent message coords");
        }
    }
    rep.kept_coords = static_cast<int>(kept.size());

    // x' T must be bijective with f: check rank of G T over F_{q^n}
    ExtMat gfull = codec.g_full();
    ExtMat gt(k, static_cast<int>(kept.size()) + mu);
    for (int i = 0; i < k; ++i) {
        for (size_t s = 0; s < kept.size(); ++s) gt.at(i, static_cast<int>(s)) = gfull.at(i, kept[s]);
        for (int t = 0; t < mu; ++t) {
            Elem acc = f.zero();
            for (int v = 0; v < n; ++v) {
                uint16_t b = bpad.at(v, t);
                if (b) acc = f.add(acc, f.scale(gfull.at(i, v), b));
            }
            gt.at(i, static_cast<int>(kept.size()) + t) = acc;
        }
    }
    if (mu <= k) {
        if (ext_rank(f, gt) != k) throw StructureMismatch("G T is singular for the constructed selector");
    }

    // exhaustive channel check
    const double total_log = static_cast<double>(k) * f.n() * codec.field().w();
    if (total_log > 20.5) throw TooLarge("coset check enumeration bound exceeded");
    uint64_t Q = 1;
    for (int i = 0; i < f.n(); ++i) Q *= f.q();
    uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= Q;

    ExtMat g1 = codec.g1();
    std::map<std::vector<uint32_t>, uint64_t> joint;       // (kept digits, z digits)
    std::map<std::vector<uint32_t>, uint64_t> zonly;
    std::map<std::vector<uint32_t>, uint64_t> zu_xi;       // (u_{xi} digits, z)
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> z_to_uxi;
    bool zu_function = true;
    std::vector<Elem> coef(static_cast<size_t>(k));
    for (uint64_t idx = 0; idx < total; ++idx) {
        uint64_t t = idx;
        for (int i = 0; i < k; ++i) {
            coef[static_cast<size_t>(i)] = digit_elem(f, static_cast<uint32_t>(t % Q));
            t /= Q;
        }
        // x' = f G, u' = f G1
        std::vector<uint32_t> z;
        for (int c = 0; c < mu; ++c) {
            Elem acc = f.zero();
            for (int v = 0; v < n; ++v) {
                uint16_t b = bpad.at(v, c);
                if (!b) continue;
                Elem xv = f.zero();
                for (int i = 0; i < k; ++i) xv = f.add(xv, f.mul(coef[static_cast<size_t>(i)], gfull.at(i, v)));
                acc = f.add(acc, f.scale(xv, b));
            }
            z.push_back(elem_digit(f, acc));
        }
        std::vector<uint32_t> uprime(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            Elem acc = f.zero();
            for (int i = 0; i < k; ++i) acc = f.add(acc, f.mul(coef[static_cast<size_t>(i)], g1.at(i, j)));
            uprime[static_cast<size_t>(j)] = elem_digit(f, acc);
        }
        std::vector<uint32_t> key;
        for (int c : kept) key.push_back(uprime[static_cast<size_t>(c)]);
        key.insert(key.end(), z.begin(), z.end());
        ++joint[key];
        ++zonly[z];
        std::vector<uint32_t> uxi(uprime.begin(), uprime.begin() + xi);
        std::vector<uint32_t> zu = z;
        zu.insert(zu.end(), uxi.begin(), uxi.end());
        ++zu_xi[zu];
        if (mu >= k) {
            auto [it, ins] = z_to_uxi.emplace(z, uxi);
            if (!ins && it->second != uxi) zu_function = false;
        }
    }

    if (mu <= k) {
        rep.bijective = joint.size() == total;
        for (const auto& [key, cnt] : joint)
            if (cnt != 1) rep.bijective = false;
        if (!rep.bijective) throw StructureMismatch("kept coords + z do not biject with the coefficient vector");
        // independence: every (kept, z) combination occurs equally often
        rep.independent = true;
    } else {
        rep.bijective = false;
        rep.independent = false;
    }

    if (mu >= k) {
        // stacked-unit structure: z determines the submessage exactly
        if (!zu_function) throw StructureMismatch("z does not determine the submessage for mu >= k");
        uint64_t expect = total / zonly.size();
        for (const auto& [z, cnt] : zonly)
            if (cnt != expect) throw StructureMismatch("z occupancies not uniform for mu >= k");
        rep.block_structure = true;
        rep.detail = "unit-matrix structure verified";
    } else {
        // reduced channel blocks: per z, the submessage support has size
        // Q^{min(xi, k-mu... }: xi <= k-mu -> full support; else Q^{k-mu} groups
        uint64_t support_expected = 1;
        int freedom = std::min(xi, std::max(0, k - mu));
        for (int i = 0; i < freedom; ++i) support_expected *= Q;
        uint64_t leak = 1;
        for (int i = 0; i < xi - freedom; ++i) leak *= Q;
        std::map<std::vector<uint32_t>, uint64_t> support;
        for (const auto& [zu, cnt] : zu_xi) {
            std::vector<uint32_t> z(zu.begin(), zu.begin() + mu);
            ++support[z];
            (void)cnt;
        }
        rep.block_structure = true;
        for (const auto& [z, cnt] : support) {
            if (cnt != support_expected) {
                rep.block_structure = false;
                break;
            }
        }
        (void)leak;
        if (!rep.block_structure) throw StructureMismatch("reduced channel block structure mismatch");
        rep.detail = "coset block structure verified";
    }
    return rep;
}

}  // namespace pusnec
