#include <doctest.h>

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "groenewold/error.hpp"
#include "groenewold/model.hpp"

using namespace groenewold;

namespace {

// Weyl quantization of u^k = (conj(alpha) alpha)^k is the average over all
// orderings of k creation and k annihilation operators. Diagonal in n; the
// value on |n> is returned for n < 6.
std::vector<double> weyl_power_diagonal(int k) {
  const int dim = 6 + 2 * k + 2;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd ad = a.transpose();

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  long count = 0;
  std::function<void(int, int, Eigen::MatrixXd)> build = [&](int left_a, int left_ad,
                                                             Eigen::MatrixXd product) {
    if (left_a == 0 && left_ad == 0) {
      total += product;
      ++count;
      return;
    }
    if (left_a > 0) build(left_a - 1, left_ad, product * a);
    if (left_ad > 0) build(left_a, left_ad - 1, product * ad);
  };
  build(k, k, Eigen::MatrixXd::Identity(dim, dim));
  std::vector<double> out;
  for (int n = 0; n < 6; ++n) out.push_back(total(n, n) / count);
  return out;
}

// Solve for d_j in weyl(u^k)|n> = sum_j d_j (n + 1/2)^j.
std::vector<double> powers_of_half_shifted_n(const std::vector<double>& diag, int k) {
  Eigen::MatrixXd v(k + 1, k + 1);
  Eigen::VectorXd rhs(k + 1);
  for (int n = 0; n <= k; ++n) {
    for (int j = 0; j <= k; ++j) v(n, j) = std::pow(n + 0.5, j);
    rhs[n] = diag[n];
  }
  const Eigen::VectorXd d = v.fullPivLu().solve(rhs);
  return {d.data(), d.data() + d.size()};
}

}  // namespace

TEST_CASE("quartic quantization shifts the constant by mu^2/4") {
  for (double mu : {0.5, 0.25, 1.0, 0.1}) {
    const auto c = quantize_coefficients({0, 0, 1}, 2, mu);
    REQUIRE(c.size() == 3);
    CHECK(std::abs(c[0] - mu * mu / 4) <= 1e-14);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 1.0);
  }
}

TEST_CASE("sextic quantization adds 5 mu^2/4 to the linear term") {
  for (double mu : {0.5, 0.25, 1.0}) {
    const auto c = quantize_coefficients({0, 0, 0, 1}, 3, mu);
    REQUIRE(c.size() == 4);
    CHECK(std::abs(c[1] - 5 * mu * mu / 4) <= 1e-14);
    CHECK(c[0] == 0.0);
    CHECK(c[2] == 0.0);
    CHECK(c[3] == 1.0);
  }
}

TEST_CASE("quantization agrees with symmetric operator ordering") {
  // H = sum_k b_k mu^k u^k with E = omega = 1, and H^ = sum_j c_j mu^j (n+1/2)^j.
  const std::vector<double> b{0.3, -1.0, 0.5, 2.0, -0.25};
  const double mu = 0.4;
  const int K = 4;
  std::vector<double> expect(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    const auto d = powers_of_half_shifted_n(weyl_power_diagonal(k), k);
    for (int j = 0; j <= k; ++j) expect[j] += b[k] * std::pow(mu, k - j) * d[j];
  }
  const auto c = quantize_coefficients(b, K, mu);
  for (int j = 0; j <= K; ++j) CHECK(c[j] == doctest::Approx(expect[j]).epsilon(1e-10));
}

TEST_CASE("oscillator power symbols") {
  const auto s = oscillator_power_symbols(3);
  // (n+1/2)^2 has symbol u^2 - 1/4
  CHECK(s[2] == SymbolPolynomial({Rational(-1, 4), 0, 1}));
  const auto inv = inverse_oscillator_basis(4);
  for (int k = 0; k <= 4; ++k) CHECK(inv[k][k] == 1);
}

TEST_CASE("star product: constants, commutativity on radial symbols, associativity") {
  const auto one = SymbolPolynomial::constant(1);
  const SymbolPolynomial f({1, 2, Rational(1, 3)});
  const SymbolPolynomial g({0, -1, 0, 5});
  const SymbolPolynomial h({Rational(7, 2), 0, 1});
  CHECK(star_product(one, f) == f);
  CHECK(star_product(f, g) == star_product(g, f));
  CHECK(star_product(star_product(f, g), h) == star_product(f, star_product(g, h)));
  // u * u = u^2 - 1/4
  const auto u = SymbolPolynomial::monomial(1);
  CHECK(star_product(u, u) == SymbolPolynomial({Rational(-1, 4), 0, 1}));
}

TEST_CASE("number power symbols") {
  // n^ = a^dagger a has symbol u - 1/2
  CHECK(number_power_symbol(1) == SymbolPolynomial({Rational(-1, 2), 1}));
  CHECK(number_power_symbol(0) == SymbolPolynomial::constant(1));
}

TEST_CASE("model construction") {
  const auto m = make_model({0, 0, 1}, 0.5, 2.0, 3.0, 4.0);
  CHECK(m.K == 2);
  CHECK(m.hbar == doctest::Approx(0.5 * 4.0 / 3.0));
  const auto p = make_model_physical({0, 0, 1}, m.hbar, 2.0, 3.0, 4.0);
  CHECK(p.mu == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_model({0, 0, 0}, 0.5), InvalidArgument);
  CHECK_THROWS_AS(make_model({0, 1}, -1.0), InvalidArgument);
}

TEST_CASE("eigenvalues and gaps") {
  const auto m = make_model({0, 0.2, -0.1, 1}, 0.3);
  for (int n = 0; n < 40; ++n) {
    double e = 0.0;
    for (int j = 0; j <= m.K; ++j) e += m.c[j] * std::pow(m.mu, j) * std::pow(n + 0.5, j);
    CHECK(eigenvalue(m, n) == doctest::Approx(m.E * e).epsilon(1e-13));
    for (int nu : {0, 1, 3}) {
      CHECK(eigenvalue_gap(m, n, nu) ==
            doctest::Approx(eigenvalue(m, n + nu) - eigenvalue(m, n)).epsilon(1e-11).scale(1.0));
    }
  }
  // quartic: E_n = mu^2 (n+1/2)^2 + mu^2/4 = mu^2 (n^2 + n + 1/2)
  const auto q = make_model({0, 0, 1}, 0.5);
  for (int n = 0; n < 10; ++n) CHECK(eigenvalue(q, n) == doctest::Approx(0.25 * (n * n + n + 0.5)));
}

TEST_CASE("number polynomial reproduces eigenvalues") {
  const auto m = make_model({0.1, 0.5, 0, 1}, 0.25);
  const auto h = number_polynomial(m);
  for (int n = 0; n < 20; ++n) {
    double e = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) e += h[j] * std::pow(n, static_cast<int>(j));
    CHECK(e == doctest::Approx(eigenvalue(m, n)).epsilon(1e-12));
  }
}

TEST_CASE("slope and curvature") {
  const auto m = make_model({0, 1, 0, 1}, 0.5);
  CHECK(hamiltonian_slope(m, 2.0) == doctest::Approx(1 + 3 * 4.0));
  CHECK(hamiltonian_curvature(m, 2.0) == doctest::Approx(6 * 2.0));
}
