#pragma once

// Hamiltonians that are polynomials in the oscillator energy,
//   H = E * sum_k b_k (H0/E)^k,
// together with their Weyl quantization
//   H^ = E * sum_k c_k (H0^/E)^k,   H0^ = hbar*omega*(n^ + 1/2).

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace groenewold {

using Rational = boost::multiprecision::cpp_rational;

// Polynomial in u = conj(alpha)*alpha with exact rational coefficients.
// Radial phase-space symbols are closed under the star product, so this is
// enough to carry out the quantization algebra without quadrature error.
class SymbolPolynomial {
 public:
  SymbolPolynomial() = default;
  explicit SymbolPolynomial(std::vector<Rational> coeffs);

  static SymbolPolynomial constant(const Rational& value);
  static SymbolPolynomial monomial(int degree, const Rational& value = 1);

  int degree() const;  // -1 for the zero polynomial
  const Rational& operator[](int k) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  std::vector<double> to_double() const;

  SymbolPolynomial operator+(const SymbolPolynomial& other) const;
  SymbolPolynomial operator-(const SymbolPolynomial& other) const;
  SymbolPolynomial operator*(const Rational& scale) const;
  bool operator==(const SymbolPolynomial& other) const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Moyal product in (alpha, conj alpha):
//   f * g = f exp[(1/2)(<d_a d_ab> - <d_ab d_a>)] g
// restricted to radial polynomials; the result is again radial.
SymbolPolynomial star_product(const SymbolPolynomial& a, const SymbolPolynomial& b);

// Weyl symbol of n^k as a polynomial in u.
SymbolPolynomial number_power_symbol(int k);

// Row k holds the symbol of (n^ + 1/2)^k = (H0^/(hbar omega))^k in powers of
// u; lower-triangular with unit diagonal.
std::vector<SymbolPolynomial> oscillator_power_symbols(int max_degree);

// Exact inverse of the triangular change of basis above: row k expresses u^k
// as a combination of symbols of (n^ + 1/2)^j.
std::vector<std::vector<Rational>> inverse_oscillator_basis(int max_degree);

// b (length K+1, b_K != 0) -> c for a given mu = hbar*omega/E.
std::vector<double> quantize_coefficients(const std::vector<double>& b, int K, double mu);

struct ModelSpec {
  int K = 1;
  std::vector<double> b;
  double mu = 1.0;
  double m = 1.0;
  double omega = 1.0;
  double E = 1.0;
  double hbar = 1.0;      // mu * E / omega
  std::vector<double> c;  // quantum coefficients
};

ModelSpec make_model(std::vector<double> b, double mu, double m = 1.0, double omega = 1.0,
                     double E = 1.0);

// Same Hamiltonian family expressed with a physical hbar instead of mu.
ModelSpec make_model_physical(std::vector<double> b, double hbar, double m, double omega, double E);

// Eigenvalue of H^ on |n>: E * sum_k c_k mu^k (n+1/2)^k.
double eigenvalue(const ModelSpec& model, int n);

// E_{n+nu} - E_n for nu >= 0, evaluated without cancellation.
double eigenvalue_gap(const ModelSpec& model, int n, int nu);

// dH/dH0 as a function of v = H0/E: sum_k k b_k v^{k-1}.
double hamiltonian_slope(const ModelSpec& model, double v);
double hamiltonian_curvature(const ModelSpec& model, double v);

// Coefficients h_j with H^ = sum_j h_j n^j.
std::vector<double> number_polynomial(const ModelSpec& model);

}  // namespace groenewold
