#include "pusnec/linpoly.hpp"

namespace pusnec {

LinPoly linpoly_from(const Field& f, std::vector<Elem> coeffs) {
    while (!coeffs.empty() && f.is_zero(coeffs.back())) coeffs.pop_back();
    return LinPoly{std::move(coeffs)};
}

LinPoly linpoly_identity(const Field& f) {
    return LinPoly{{f.one()}};
}

Elem lin_eval(const Field& f, const LinPoly& p, const Elem& x) {
    Elem acc = f.zero();
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
        if (f.is_zero(p.coeffs[i])) continue;
        acc = f.add(acc, f.mul(p.coeffs[i], f.qpow(x, static_cast<int>(i))));
    }
    return acc;
}

std::vector<Elem> lin_rootspace(const Field& f, const LinPoly& p) {
    if (p.zero()) throw FieldError("rootspace of the zero polynomial");
    int n = f.n();
    // Phi column j = coordinates of p(beta^[j]); evaluation on basis
    // elements reduces to fast multiplications.
    FqMat phi(n, n);
    for (int j = 0; j < n; ++j) {
        Elem pj = f.zero();
        for (size_t v = 0; v < p.coeffs.size(); ++v) {
            if (f.is_zero(p.coeffs[v])) continue;
            pj = f.add(pj, f.fast_mul(p.coeffs[v], j + static_cast<int>(v)));
        }
        for (int i = 0; i < n; ++i) phi.at(i, j) = pj.c[i];
    }
    FqMat ker = fq_kernel_basis(f.ground(), phi);
    std::vector<Elem> basis;
    basis.reserve(ker.cols);
    for (int k = 0; k < ker.cols; ++k) {
        Elem e;
        for (int i = 0; i < n; ++i) e.c[i] = ker.at(i, k);
        basis.push_back(e);
    }
    return basis;
}

MinimalPolyResult lin_minimal_poly(const Field& f, const std::vector<Elem>& roots) {
    MinimalPolyResult res;
    res.poly = linpoly_identity(f);
    for (const Elem& d : roots) {
        Elem r = lin_eval(f, res.poly, d);
        if (f.is_zero(r)) continue;  // dependent root, sift it out
        res.kept.push_back(d);
        // f <- f - r^{1-q} f^q; r' = r * (r^{-1})^[1]
        Elem rp = f.mul(r, f.qpow(f.inv(r), 1));
        std::vector<Elem>& c = res.poly.coeffs;
        size_t deg = c.size() - 1;
        c.push_back(f.mul(rp, f.qpow(c[deg], 1)));
        for (size_t j = deg; j >= 1; --j) c[j] = f.add(c[j], f.mul(rp, f.qpow(c[j - 1], 1)));
    }
    return res;
}

LinPoly lin_symbolic_product(const Field& f, const LinPoly& g, const LinPoly& p) {
    if (g.zero() || p.zero()) return LinPoly{};
    int dg = g.degree(), dp = p.degree();
    if (dg + dp > f.n()) throw DegreeOverflow("symbolic product degree exceeds n");
    std::vector<Elem> h(static_cast<size_t>(dg + dp) + 1, f.zero());
    for (int u = 0; u <= dg; ++u) {
        if (f.is_zero(g.coeffs[u])) continue;
        for (int v = 0; v <= dp; ++v) {
            if (f.is_zero(p.coeffs[v])) continue;
            h[static_cast<size_t>(u + v)] =
                f.add(h[static_cast<size_t>(u + v)], f.mul(g.coeffs[u], f.qpow(p.coeffs[v], u)));
        }
    }
    return linpoly_from(f, std::move(h));
}

}  // namespace pusnec
