#pragma once

// Special functions, quadrature rules and dense Hermitian linear algebra
// shared by the rest of the library.

#include <span>
#include <vector>

#include "groenewold/types.hpp"

namespace groenewold::mathkit {

// Modified Bessel function of the first kind, integer order m >= 0, x >= 0.
double bessel_i(int m, double x);

// exp(-x) * I_m(x); finite for every x >= 0.
double bessel_i_scaled(int m, double x);

// Associated Laguerre polynomial L_n^{(k)}(x) by three-term recurrence.
double laguerre_assoc(int n, double k, double x);

// Orthonormal Laguerre functions
//   l_m^{nu}(y) = sqrt(m!/(m+nu)!) y^{nu/2} e^{-y/2} L_m^{(nu)}(y),
// written to out[m] for m = 0 .. out.size()-1. Evaluated in extended
// precision so that large y underflows gracefully instead of overflowing.
void laguerre_functions(int nu, long double y, std::span<double> out);

enum class QuadratureKind { GaussLegendre, GaussLaguerre };

struct QuadratureRule {
  QuadratureKind kind;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  // Gauss-Laguerre only: weights[i] * exp(nodes[i]), kept finite even where
  // weights[i] underflows. Use these when the integrand already carries its
  // own exp(-x) factor.
  std::vector<double> scaled_weights;
};

// Gauss-Legendre on [-1, 1] or Gauss-Laguerre on [0, inf) with weight e^{-x}.
QuadratureRule quadrature(QuadratureKind kind, int order);

// Cached Gauss-Laguerre rule; safe to call concurrently.
const QuadratureRule& gauss_laguerre(int order);
const QuadratureRule& gauss_legendre(int order);

struct HermitianEig {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

// Rejects input with ||A - A^H|| > 1e-10 ||A|| (max-norm).
HermitianEig hermitian_eig(const CMatrix& a);

CMatrix expm(const CMatrix& a);

// max |a_ij|
double max_abs(const CMatrix& a);

}  // namespace groenewold::mathkit
