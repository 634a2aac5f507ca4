#include <doctest.h>

#include <cmath>

#include "groenewold/error.hpp"
#include "groenewold/evolve.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/observables.hpp"

using namespace groenewold;

namespace {

ModelSpec quartic() { return make_model({0, 0, 1}, 0.5); }
ModelSpec sextic() { return make_model({0, 0, 0, 1}, 0.5); }

double block_norm(const DiagonalBlock& b) { return b.coeffs.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("propagation at t = 0 is the identity") {
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5));
  const auto start = extract_block(g0.entries, 1);
  const auto L = classical_block(1, sextic(), 128);
  const auto out = propagate_block(L, start, 0.0);
  CHECK((out.coeffs - start.coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(propagate_block(L, extract_block(g0.entries, 2), 1.0), InvalidArgument);
}

TEST_CASE("group property") {
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5));
  for (auto d : {Dynamics::quantum(), Dynamics::classical(), Dynamics::semiclassical(1)}) {
    const auto L = make_generator(d, 1, sextic(), 128);
    const BlockPropagator p(L);
    const auto start = extract_block(g0.entries, 1);
    const auto two_steps = p.apply(p.apply(start, 0.4), 0.7);
    const auto one_step = p.apply(start, 1.1);
    CHECK((two_steps.coeffs - one_step.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("quantum recurrence: quartic period 2 pi/(mu omega)") {
  const auto model = quartic();
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5));
  const double T = 2 * kPi / (model.mu * model.omega);
  for (int nu : {1, 2, 5}) {
    const auto start = extract_block(g0.entries, nu);
    const auto back = propagate_block(quantum_block(nu, model, 128), start, T);
    CHECK((back.coeffs - start.coeffs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("classical quartic evolution does not recur") {
  const auto model = quartic();
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5));
  const auto start = extract_block(g0.entries, 1);
  const auto after = propagate_block(classical_block(1, model, 128), start, 2 * kPi / model.mu);
  DiagonalBlock diff{1, after.coeffs - start.coeffs};
  CHECK(block_norm(diff) > 0.1 * block_norm(start));
}

TEST_CASE("moment quadrature basics") {
  const auto model = sextic();
  const auto s = gaussian_state(2.0, Complex(0.5, 0.2));
  CHECK(std::abs(classical_moment_quadrature(0, s, model, 1.3) - 1.0) <= 1e-10);
  CHECK(std::abs(classical_moment_quadrature(1, s, model, 0.0) - s.alpha0) <= 1e-12);
  CHECK(std::abs(classical_moment_quadrature(2, s, model, 0.0) - s.alpha0 * s.alpha0) <= 1e-12);
  CHECK_THROWS_AS(classical_moment_quadrature(-1, s, model, 0.0), InvalidArgument);
}

TEST_CASE("quadrature agrees with the Hilbert-space classical evolution") {
  const auto model = quartic();
  const auto s = gaussian_state(2.0, 0.5);
  const auto g0 = groenewold_from_gaussian(s);
  EvolveOptions opt;
  opt.nu_max = 2;
  const auto traj = evolve(g0, Dynamics::classical(), model, {0.0, 1.0, 2.5}, opt);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto r = moments(traj.snapshots[i].entries, model);
    CHECK(std::abs(r.mean_alpha - classical_moment_quadrature(1, s, model, traj.times[i])) <= 1e-6);
    CHECK(std::abs(r.alpha2 - classical_moment_quadrature(2, s, model, traj.times[i])) <= 1e-6);
  }
}

TEST_CASE("spectral classical moments match the dense propagator at equal size") {
  const auto model = quartic();
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5), {64, 8, 1e-10});
  const std::vector<double> times{0.0, 0.5, 2.0};
  for (int m : {1, 2}) {
    const auto spectral = classical_moment_spectral(m, g0.entries, model, times, 64 - m);
    const BlockPropagator p(classical_block_analytic(m, model, 64));
    const auto start = extract_block(g0.entries, m);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto b = p.apply(start, times[i]);
      Complex expect = 0.0;
      for (int r = 0; r < b.dim(); ++r) {
        double w = 1.0;
        for (int k = 1; k <= m; ++k) w *= r + k;
        expect += std::sqrt(w) * b.coeffs[r];
      }
      CHECK(std::abs(spectral[i] - expect) <= 1e-11);
    }
  }
}

TEST_CASE("spectral classical moments converge to the quadrature for the sextic") {
  const auto model = make_model({0, 0, 0, 1}, 0.25);
  const auto s = gaussian_state(1.0, 1.0 / std::sqrt(2.0));
  const auto g0 = groenewold_from_gaussian(s);
  const std::vector<double> times{0.0, 1.0, 2.0};
  const auto r = classical_moment_spectral_converged(1, g0.entries, model, times, 1e-8, 1024, 8192);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(r.values[i] - classical_moment_quadrature(1, s, model, times[i])) <= 1e-7);
  }
}

TEST_CASE("spectral whole-matrix classical evolution") {
  const auto model = quartic();
  const auto s = gaussian_state(2.0, 0.5);
  const auto g0 = groenewold_from_gaussian(s, {64, 8, 1e-10});
  const std::vector<double> times{0.0, 1.0, 2.5};
  const auto r = classical_evolve_spectral_converged(g0.entries, model, times, 1e-10, 256, 4096);
  CHECK(r.change <= 1e-10);
  CHECK(mathkit::max_abs(r.snapshots[0] - g0.entries) <= 1e-12);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CMatrix& g = r.snapshots[i];
    CHECK(mathkit::max_abs(g - g.adjoint()) <= 1e-12);
    CHECK(std::abs(g.trace() - 1.0) <= 1e-10);
    const auto m = moments(g, model, times[i]);
    CHECK(std::abs(m.mean_alpha - classical_moment_quadrature(1, s, model, times[i])) <= 1e-8);
  }
}

TEST_CASE("Riemann-Lebesgue decay of the classical first moment") {
  const auto model = quartic();
  const auto s = gaussian_state(2.0, 0.5);
  double found = -1.0;
  for (double t = 0.0; t <= 400.0; t += 0.5) {
    if (std::abs(classical_moment_quadrature(1, s, model, t)) < 1e-2) {
      found = t;
      break;
    }
  }
  REQUIRE(found > 0.0);
  // and it stays down
  for (double t = 2 * found; t <= 4 * found; t += found / 4) {
    CHECK(std::abs(classical_moment_quadrature(1, s, model, t)) < 1e-2);
  }
}

TEST_CASE("linear Hamiltonian rotates the mean rigidly") {
  const auto model = make_model({0, 1}, 0.5);
  const Complex a0(0.5, 0.1);
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, a0), {48, 8, 1e-10});
  const auto times = time_grid(0.0, kPi, 8);
  for (auto d : {Dynamics::quantum(), Dynamics::classical(), Dynamics::semiquantum(1),
                 Dynamics::semiclassical(1)}) {
    const auto traj = evolve(g0, d, model, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Complex expect = a0 * std::exp(Complex(0.0, -model.omega * times[i]));
      CHECK(std::abs(moments(traj.snapshots[i].entries, model).mean_alpha - expect) <= 1e-10);
    }
  }
}

TEST_CASE("classical purity is conserved") {
  const auto model = quartic();
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5));
  const auto traj = evolve(g0, Dynamics::classical(), model, time_grid(0.0, kPi, 4));
  for (const auto& s : traj.snapshots) {
    CHECK(std::abs(purity(s.entries) - purity(g0.entries)) <= 1e-8);
    CHECK(trace_error(s.entries) <= 1e-10);
  }
}

TEST_CASE("nu_max zeroes the unevolved diagonals") {
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5), {32, 4, 1e-10});
  EvolveOptions opt;
  opt.nu_max = 1;
  const auto traj = evolve(g0, Dynamics::quantum(), quartic(), {0.0, 1.0}, opt);
  CHECK(traj.snapshots[0].entries(3, 0) == Complex(0.0));
  CHECK(traj.snapshots[0].entries(1, 0) == g0.entries(1, 0));
}

TEST_CASE("whorl density") {
  const auto model = quartic();
  const auto s = gaussian_state(2.0, 0.5);
  // origin is a fixed point of the flow
  for (double t : {0.0, 1.0, 3.0}) {
    CHECK(whorl_density(s, model, t, 0.0, 0.0) == doctest::Approx(whorl_density(s, model, 0.0, 0.0, 0.0)));
  }
  // t = 0 is the initial Gaussian (kappa/pi) e^{-kappa|alpha-alpha0|^2} / (2 hbar)
  const Complex a = alpha_of(0.3, -0.2, model);
  CHECK(whorl_density(s, model, 0.0, 0.3, -0.2) ==
        doctest::Approx(2.0 / kPi * std::exp(-2.0 * std::norm(a - s.alpha0)) / (2 * model.hbar)));
  PhaseGrid grid;
  const double m0 = whorl_field(s, model, 0.0, grid).total_mass;
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-8));
  for (double t : {kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) {
    CHECK(std::abs(whorl_field(s, model, t, grid).total_mass - m0) <= 1e-8);
  }
}

TEST_CASE("time grid") {
  const auto t = time_grid(0.0, kPi, 64);
  CHECK(t.size() == 65);
  CHECK(t.back() == kPi);
  CHECK(time_grid(1.0, 1.0, 0).size() == 1);
  CHECK_THROWS_AS(time_grid(1.0, 0.0, 3), InvalidArgument);
}
