#include <doctest.h>

#include <cmath>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/observables.hpp"
#include "groenewold/states.hpp"

using namespace groenewold;

namespace {

// <n|alpha> = e^{-|alpha|^2/2} alpha^n / sqrt(n!)
CMatrix coherent_projector(Complex a, int N) {
  CVector v(N);
  v[0] = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n < N; ++n) v[n] = v[n - 1] * a / std::sqrt(static_cast<double>(n));
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("the minimum-width Groenewold matrix is the coherent projector") {
  for (Complex a : {Complex(0.5, 0.0), Complex(-0.3, 0.8), Complex(1.2, -0.4)}) {
    const auto g = groenewold_from_gaussian(gaussian_state(2.0, a), {64, 8, 1e-10});
    CHECK(mathkit::max_abs(g.entries - coherent_projector(a, 64)) <= 1e-12);
    CHECK(mathkit::max_abs(coherent_density(a, {64, 8, 1e-10}).entries - coherent_projector(a, 64)) <=
          1e-14);
  }
}

TEST_CASE("Groenewold matrices are Hermitian with unit trace") {
  for (double kappa : {0.5, 1.0, 2.0, 3.0}) {
    const auto g = groenewold_from_gaussian(gaussian_state(kappa, Complex(0.4, 0.3)));
    CHECK(hermiticity_error(g.entries) <= 1e-14);
    CHECK(trace_error(g.entries) <= 1e-12);
  }
}

TEST_CASE("purity of a Gaussian Groenewold matrix is kappa/2") {
  // (1/pi) Int (kappa e^{-kappa |alpha - alpha0|^2})^2 d^2alpha = kappa / 2
  for (double kappa : {0.5, 1.0, 2.0, 4.0}) {
    const auto g = groenewold_from_gaussian(gaussian_state(kappa, 0.6));
    CHECK(purity(g.entries) == doctest::Approx(kappa / 2).epsilon(1e-10));
  }
}

TEST_CASE("wide Gaussians are positive, narrow ones are not") {
  const auto wide = groenewold_from_gaussian(gaussian_state(1.0, 0.5));
  CHECK(squared_negativity(wide.entries) <= 1e-20);
  const auto narrow = groenewold_from_gaussian(gaussian_state(4.0, 0.5));
  CHECK(squared_negativity(narrow.entries) > 1e-3);
}

TEST_CASE("second moment of the Gaussian is |alpha0|^2 + 1/kappa") {
  const auto model = make_model({0, 0, 1}, 0.5);
  for (double kappa : {1.0, 2.0, 3.0}) {
    const Complex a0(0.7, -0.2);
    const auto g = groenewold_from_gaussian(gaussian_state(kappa, a0));
    const auto r = moments(g.entries, model);
    CHECK(r.abs2 == doctest::Approx(std::norm(a0) + 1.0 / kappa).epsilon(1e-12));
    CHECK(std::abs(r.mean_alpha - a0) <= 1e-12);
  }
}

TEST_CASE("dyad symbols") {
  const Complex a(0.3, -0.45);
  CHECK(std::abs(wigner_dyad_symbol(0, 0, a) - 2.0 * std::exp(-2.0 * std::norm(a))) <= 1e-15);
  // W(|1><0|) = 2 * 2 conj(alpha) e^{-2|alpha|^2}: the symbol of a^dagger-like dyad
  CHECK(std::abs(wigner_dyad_symbol(1, 0, a) - 4.0 * std::conj(a) * std::exp(-2.0 * std::norm(a))) <=
        1e-14);
  // Hermitian conjugation conjugates the symbol
  CHECK(std::abs(wigner_dyad_symbol(2, 5, a) - std::conj(wigner_dyad_symbol(5, 2, a))) <= 1e-15);
}

TEST_CASE("dyad symbols are orthonormal under the trace pairing") {
  // (1/pi) Int W(|n><m|) W(|m'><n'|) d^2alpha = delta_nn' delta_mm'
  // polar grid: Gauss-Laguerre in s^2 with a trapezoid in angle
  const auto& rule = mathkit::gauss_laguerre(80);
  const int angles = 32;
  auto pair = [&](int n, int m, int mp, int np) {
    Complex s = 0.0;
    for (int i = 0; i < rule.order; ++i) {
      const double r = std::sqrt(rule.nodes[i] / 4.0);  // 4|alpha|^2 = x
      for (int k = 0; k < angles; ++k) {
        const Complex a = std::polar(r, 2 * kPi * k / angles);
        s += rule.scaled_weights[i] * wigner_dyad_symbol(n, m, a) * wigner_dyad_symbol(mp, np, a);
      }
    }
    // d^2alpha = r dr dphi = dx dphi / 8
    return s * (2 * kPi / angles) / 8.0 / kPi;
  };
  CHECK(std::abs(pair(3, 1, 1, 3) - 1.0) <= 1e-12);
  CHECK(std::abs(pair(2, 2, 2, 2) - 1.0) <= 1e-12);
  CHECK(std::abs(pair(3, 1, 2, 3)) <= 1e-12);
  CHECK(std::abs(pair(0, 4, 4, 1)) <= 1e-12);
}

TEST_CASE("physical Gaussian parameters") {
  const auto model = make_model({0, 0, 1}, 0.5, 1.0, 1.0, 1.0);
  const auto s = gaussian_from_physical(0.5, 0.5, 0.0, 1.0, 1.0, model.hbar);
  CHECK(s.kappa == doctest::Approx(model.hbar / 0.25));
  CHECK(std::abs(s.alpha0 - alpha_of(0.5, 0.0, model)) <= 1e-15);
  CHECK(s.alpha0.real() == doctest::Approx(0.5));  // alpha0 = q0 at hbar = 1/2
  const Complex a(0.3, -1.1);
  CHECK(std::abs(alpha_of(q_of(a, model), p_of(a, model), model) - a) <= 1e-15);
}

TEST_CASE("tail mass check") {
  CHECK_THROWS_AS(groenewold_from_gaussian(gaussian_state(1.0, 2.0), {16, 4, 1e-10}),
                  TailMassExceeded);
  // a loose tolerance lets the same state through, and check_tail still sees it
  const auto g = groenewold_from_gaussian(gaussian_state(1.0, 2.0), {16, 4, 1.0});
  CHECK(g.tail_mass > 1e-10);
  CHECK_THROWS_AS(check_tail(g, 1e-10), TailMassExceeded);
  const auto h = groenewold_from_gaussian(gaussian_state(2.0, 0.5), {128, 16, 1e-10});
  CHECK_NOTHROW(check_tail(h, 1e-10));
}
