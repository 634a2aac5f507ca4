#include "groenewold/model.hpp"

#include <cmath>

#include "groenewold/error.hpp"

namespace groenewold {

namespace {

// n!/(n-k)!, zero when k > n.
Rational falling(int n, int k) {
  if (k > n) return 0;
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return falling(n, k) / falling(k, k);
}

}  // namespace

SymbolPolynomial::SymbolPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

SymbolPolynomial SymbolPolynomial::constant(const Rational& value) {
  return SymbolPolynomial({value});
}

SymbolPolynomial SymbolPolynomial::monomial(int degree, const Rational& value) {
  std::vector<Rational> c(degree + 1, Rational(0));
  c[degree] = value;
  return SymbolPolynomial(std::move(c));
}

void SymbolPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int SymbolPolynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

const Rational& SymbolPolynomial::operator[](int k) const {
  static const Rational zero = 0;
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : zero;
}

std::vector<double> SymbolPolynomial::to_double() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.convert_to<double>());
  return out;
}

SymbolPolynomial SymbolPolynomial::operator+(const SymbolPolynomial& other) const {
  std::vector<Rational> c(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (*this)[i] + other[i];
  return SymbolPolynomial(std::move(c));
}

SymbolPolynomial SymbolPolynomial::operator-(const SymbolPolynomial& other) const {
  return *this + other * Rational(-1);
}

SymbolPolynomial SymbolPolynomial::operator*(const Rational& scale) const {
  std::vector<Rational> c = coeffs_;
  for (auto& x : c) x *= scale;
  return SymbolPolynomial(std::move(c));
}

bool SymbolPolynomial::operator==(const SymbolPolynomial& other) const {
  return coeffs_ == other.coeffs_;
}

SymbolPolynomial star_product(const SymbolPolynomial& a, const SymbolPolynomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da < 0 || db < 0) return {};
  std::vector<Rational> out(da + db + 1, Rational(0));
  // Term r of the exponential series applied to u^p (left) and u^q (right):
  //   (1/r!) (1/2)^r sum_l C(r,l) (-1)^(r-l)
  //     [d_a^l d_ab^(r-l) u^p] [d_ab^l d_a^(r-l) u^q]
  // and d_a^i d_ab^j (a ab)^p = p!/(p-i)! p!/(p-j)! a^(p-i) ab^(p-j).
  for (int p = 0; p <= da; ++p) {
    if (a[p] == 0) continue;
    for (int q = 0; q <= db; ++q) {
      if (b[q] == 0) continue;
      const int rmax = 2 * std::min(p, q);
      Rational factorial = 1;
      Rational half_power = 1;
      for (int r = 0; r <= rmax; ++r) {
        if (r > 0) {
          factorial *= r;
          half_power /= 2;
        }
        Rational inner = 0;
        for (int l = 0; l <= r; ++l) {
          const Rational sign = ((r - l) % 2 == 0) ? 1 : -1;
          inner += sign * binomial(r, l) * falling(p, l) * falling(p, r - l) * falling(q, l) *
                   falling(q, r - l);
        }
        // Odd r cancels between l and r-l. Both exponents are p + q - r.
        if (inner == 0) continue;
        out[p + q - r] += a[p] * b[q] * half_power / factorial * inner;
      }
    }
  }
  return SymbolPolynomial(std::move(out));
}

SymbolPolynomial number_power_symbol(int k) {
  if (k < 0) throw InvalidArgument("number_power_symbol: negative power");
  const SymbolPolynomial n_symbol({Rational(-1, 2), Rational(1)});
  SymbolPolynomial result = SymbolPolynomial::constant(1);
  for (int i = 0; i < k; ++i) result = star_product(result, n_symbol);
  return result;
}

std::vector<SymbolPolynomial> oscillator_power_symbols(int max_degree) {
  std::vector<SymbolPolynomial> number_powers;
  number_powers.reserve(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) number_powers.push_back(number_power_symbol(k));
  // (n + 1/2)^k = sum_j C(k,j) (1/2)^(k-j) n^j; these operators commute.
  std::vector<SymbolPolynomial> rows;
  rows.reserve(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) {
    SymbolPolynomial row;
    Rational half_power = 1;
    for (int j = k; j >= 0; --j) {
      row = row + number_powers[j] * (binomial(k, j) * half_power);
      half_power /= 2;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<Rational>> inverse_oscillator_basis(int max_degree) {
  const auto rows = oscillator_power_symbols(max_degree);
  const int n = max_degree + 1;
  // rows[k] = sum_j S[k][j] u^j with S lower triangular, S[k][k] = 1.
  // Solve u^k = sum_j T[k][j] rows[j] by forward substitution.
  std::vector<std::vector<Rational>> inverse(n, std::vector<Rational>(n, Rational(0)));
  for (int k = 0; k < n; ++k) {
    inverse[k][k] = 1;
    for (int j = k - 1; j >= 0; --j) {
      Rational acc = 0;
      for (int i = j + 1; i <= k; ++i) acc += inverse[k][i] * rows[i][j];
      inverse[k][j] = -acc / rows[j][j];
    }
  }
  return inverse;
}

std::vector<double> quantize_coefficients(const std::vector<double>& b, int K, double mu) {
  if (K < 1) throw InvalidArgument("quantize_coefficients: K must be at least 1");
  if (static_cast<int>(b.size()) != K + 1) {
    throw InvalidArgument("quantize_coefficients: expected K+1 coefficients");
  }
  if (b[K] == 0.0) throw InvalidArgument("quantize_coefficients: leading coefficient b_K is zero");
  if (!(mu > 0.0)) throw InvalidArgument("quantize_coefficients: mu must be positive");

  const auto rows = oscillator_power_symbols(K);
  // sum_k c_k mu^k rows[k](u) = sum_k b_k mu^k u^k; rows[l] has only powers
  // u^(l-2i), so c_k - b_k is a polynomial in mu^2.
  std::vector<double> c(K + 1, 0.0);
  for (int k = K; k >= 0; --k) {
    double acc = b[k];
    for (int l = k + 1; l <= K; ++l) {
      const double s = rows[l][k].convert_to<double>();
      if (s != 0.0) acc -= c[l] * std::pow(mu, l - k) * s;
    }
    c[k] = acc;
  }
  return c;
}

ModelSpec make_model(std::vector<double> b, double mu, double m, double omega, double E) {
  if (b.size() < 2) throw InvalidArgument("model: need at least b_0 and b_1");
  if (!(mu > 0.0) || !(m > 0.0) || !(omega > 0.0) || !(E > 0.0)) {
    throw InvalidArgument("model: mu, m, omega and E must be positive");
  }
  ModelSpec model;
  model.K = static_cast<int>(b.size()) - 1;
  if (b.back() == 0.0) throw InvalidArgument("model: leading coefficient b_K is zero");
  model.b = std::move(b);
  model.mu = mu;
  model.m = m;
  model.omega = omega;
  model.E = E;
  model.hbar = mu * E / omega;
  model.c = quantize_coefficients(model.b, model.K, mu);
  return model;
}

ModelSpec make_model_physical(std::vector<double> b, double hbar, double m, double omega,
                              double E) {
  if (!(hbar > 0.0)) throw InvalidArgument("model: hbar must be positive");
  if (!(E > 0.0)) throw InvalidArgument("model: E must be positive");
  return make_model(std::move(b), hbar * omega / E, m, omega, E);
}

double eigenvalue(const ModelSpec& model, int n) {
  if (n < 0) throw InvalidArgument("eigenvalue: negative level");
  const double x = model.mu * (n + 0.5);
  double value = 0.0;
  for (int k = model.K; k >= 0; --k) value = value * x + model.c[k];
  return model.E * value;
}

double eigenvalue_gap(const ModelSpec& model, int n, int nu) {
  if (n < 0 || nu < 0) throw InvalidArgument("eigenvalue_gap: negative index");
  const double a = n + nu + 0.5;
  const double bb = n + 0.5;
  // a^k - b^k = (a - b) sum_{j<k} a^j b^(k-1-j)
  double gap = 0.0;
  double mu_power = 1.0;
  for (int k = 1; k <= model.K; ++k) {
    mu_power *= model.mu;
    double sum = 0.0;
    double apow = 1.0;
    for (int j = 0; j < k; ++j) {
      sum += apow * std::pow(bb, k - 1 - j);
      apow *= a;
    }
    gap += model.c[k] * mu_power * sum;
  }
  return model.E * nu * gap;
}

double hamiltonian_slope(const ModelSpec& model, double v) {
  double value = 0.0;
  for (int k = model.K; k >= 1; --k) value = value * v + k * model.b[k];
  return value;
}

double hamiltonian_curvature(const ModelSpec& model, double v) {
  double value = 0.0;
  for (int k = model.K; k >= 2; --k) value = value * v + k * (k - 1) * model.b[k];
  return value;
}

std::vector<double> number_polynomial(const ModelSpec& model) {
  std::vector<double> h(model.K + 1, 0.0);
  double mu_power = 1.0;
  for (int k = 0; k <= model.K; ++k) {
    for (int j = 0; j <= k; ++j) {
      h[j] += model.E * model.c[k] * mu_power * binomial(k, j).convert_to<double>() *
              std::pow(0.5, k - j);
    }
    mu_power *= model.mu;
  }
  return h;
}

}  // namespace groenewold
