#pragma once

#include <utility>
#include <vector>

#include "pusnec/ffield.hpp"
#include "pusnec/fqmat.hpp"

namespace pusnec {

struct DegreeOverflow : FieldError {
    using FieldError::FieldError;
};

// Linearized polynomial f(x) = sum_i f_i x^[i]. coeffs[i] = f_i; the leading
// coefficient is nonzero unless f is identically zero.
struct LinPoly {
    std::vector<Elem> coeffs;

    bool zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }  // -1 for the zero polynomial
};

LinPoly linpoly_from(const Field& f, std::vector<Elem> coeffs);
LinPoly linpoly_identity(const Field& f);  // f(x) = x

Elem lin_eval(const Field& f, const LinPoly& p, const Elem& x);

// Basis of {x : p(x) = 0} via the Phi matrix and a Gauss-Jordan kernel.
std::vector<Elem> lin_rootspace(const Field& f, const LinPoly& p);

// Richter-Plass synthesis of the minimal linearized polynomial whose
// rootspace is span(roots). Also returns the sifted independent subset.
struct MinimalPolyResult {
    LinPoly poly;
    std::vector<Elem> kept;
};
MinimalPolyResult lin_minimal_poly(const Field& f, const std::vector<Elem>& roots);

// h = g (x) f, h(x) = g(f(x)).
LinPoly lin_symbolic_product(const Field& f, const LinPoly& g, const LinPoly& p);

}  // namespace pusnec
