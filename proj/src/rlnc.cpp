#include "pusnec/rlnc.hpp"

namespace pusnec {

Packet zero_packet(int l, int n0) {
    Packet p;
    p.payload.assign(static_cast<size_t>(l), Elem{});
    p.gev.assign(static_cast<size_t>(n0), 0);
    return p;
}

std::vector<Packet> alice_spread(const Field& f, const ExtMat& x, int n1, Rng& rng, bool strict_rank) {
    const int l = x.rows;
    const int n0 = x.cols;
    if (n1 < n0) throw FieldError("alice_spread: n1 < n0");
    const uint32_t q = f.q();
    for (;;) {
        std::vector<Packet> out;
        out.reserve(static_cast<size_t>(n1));
        FqMat ra(n0, n1);
        for (int j = 0; j < n1; ++j) {
            Packet p = zero_packet(l, n0);
            for (int v = 0; v < n0; ++v) {
                uint16_t c = static_cast<uint16_t>(rng.below(q));
                p.gev[static_cast<size_t>(v)] = c;
                ra.at(v, j) = c;
                if (!c) continue;
                for (int comp = 0; comp < l; ++comp)
                    p.payload[static_cast<size_t>(comp)] =
                        f.add(p.payload[static_cast<size_t>(comp)], f.scale(x.at(comp, v), c));
            }
            out.push_back(std::move(p));
        }
        if (!strict_rank || fq_rank(f.ground(), ra) == n0) return out;
    }
}

std::vector<Packet> relay(const Field& f, const std::vector<Packet>& in, int out_degree, int indegree_cap, Rng& rng) {
    const int I = static_cast<int>(in.size());
    if (I >= indegree_cap) throw IndegreeViolation("relay indegree must stay below k");
    if (I == 0 || out_degree <= 0) return {};
    const int l = static_cast<int>(in[0].payload.size());
    const int n0 = static_cast<int>(in[0].gev.size());
    const uint32_t q = f.q();
    std::vector<Packet> out;
    out.reserve(static_cast<size_t>(out_degree));
    for (int o = 0; o < out_degree; ++o) {
        Packet p = zero_packet(l, n0);
        for (int i = 0; i < I; ++i) {
            uint16_t c = static_cast<uint16_t>(rng.below(q));
            if (!c) continue;
            for (int v = 0; v < n0; ++v)
                p.gev[static_cast<size_t>(v)] ^= f.ground().mul(in[static_cast<size_t>(i)].gev[static_cast<size_t>(v)], c);
            for (int comp = 0; comp < l; ++comp)
                p.payload[static_cast<size_t>(comp)] =
                    f.add(p.payload[static_cast<size_t>(comp)], f.scale(in[static_cast<size_t>(i)].payload[static_cast<size_t>(comp)], c));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Packet> relay_passthrough(const std::vector<Packet>& in, int out_degree) {
    std::vector<Packet> out;
    out.reserve(static_cast<size_t>(out_degree));
    for (int o = 0; o < out_degree; ++o) out.push_back(in[static_cast<size_t>(o % std::max<size_t>(in.size(), 1))]);
    return out;
}

InvertResult bob_invert(const Field& f, const std::vector<Packet>& packets, int l) {
    const int n0 = static_cast<int>(packets.size());
    InvertResult res;
    // equations: sum_v A^T_{t,v} x_v = y_t, unknowns are the outer columns
    FqMat m(n0, n0);
    for (int t = 0; t < n0; ++t)
        for (int v = 0; v < n0; ++v) m.at(t, v) = packets[static_cast<size_t>(t)].gev[static_cast<size_t>(v)];
    // eliminate over F_q while applying the same row operations to the
    // extension-field right-hand sides
    std::vector<std::vector<Elem>> rhs(static_cast<size_t>(n0));
    for (int t = 0; t < n0; ++t) rhs[static_cast<size_t>(t)] = packets[static_cast<size_t>(t)].payload;
    const GroundField& gf = f.ground();
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < n0 && r < n0; ++c) {
        int pr = -1;
        for (int i = r; i < n0; ++i) {
            if (m.at(i, c)) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        if (pr != r) {
            for (int j = 0; j < n0; ++j) std::swap(m.at(pr, j), m.at(r, j));
            std::swap(rhs[static_cast<size_t>(pr)], rhs[static_cast<size_t>(r)]);
        }
        uint16_t piv_inv = gf.inv(m.at(r, c));
        for (int j = 0; j < n0; ++j) m.at(r, j) = gf.mul(m.at(r, j), piv_inv);
        for (int comp = 0; comp < l; ++comp)
            rhs[static_cast<size_t>(r)][static_cast<size_t>(comp)] = f.scale(rhs[static_cast<size_t>(r)][static_cast<size_t>(comp)], piv_inv);
        for (int i = 0; i < n0; ++i) {
            if (i == r) continue;
            uint16_t fac = m.at(i, c);
            if (!fac) continue;
            for (int j = 0; j < n0; ++j) m.at(i, j) ^= gf.mul(fac, m.at(r, j));
            for (int comp = 0; comp < l; ++comp)
                rhs[static_cast<size_t>(i)][static_cast<size_t>(comp)] =
                    f.add(rhs[static_cast<size_t>(i)][static_cast<size_t>(comp)],
                          f.scale(rhs[static_cast<size_t>(r)][static_cast<size_t>(comp)], fac));
        }
        pivot_col.push_back(c);
        ++r;
    }
    res.rank = r;
    res.ytilde = ExtMat(l, n0);
    for (int i = 0; i < r; ++i)
        for (int comp = 0; comp < l; ++comp) res.ytilde.at(comp, pivot_col[static_cast<size_t>(i)]) = rhs[static_cast<size_t>(i)][static_cast<size_t>(comp)];
    // unresolved directions: kernel of the transfer system; the true word
    // differs from the partial solution inside this span
    std::vector<char> is_pivot(static_cast<size_t>(n0), 0);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < n0; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
    res.erasure_rows = FqMat(static_cast<int>(free_cols.size()), n0);
    for (size_t kk = 0; kk < free_cols.size(); ++kk) {
        res.erasure_rows.at(static_cast<int>(kk), free_cols[kk]) = 1;
        for (int i = 0; i < r; ++i)
            res.erasure_rows.at(static_cast<int>(kk), pivot_col[static_cast<size_t>(i)]) = m.at(i, free_cols[kk]);
    }
    return res;
}

}  // namespace pusnec
