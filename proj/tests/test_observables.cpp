#include <doctest.h>

#include <cmath>

#include "groenewold/error.hpp"
#include "groenewold/evolve.hpp"
#include "groenewold/observables.hpp"

using namespace groenewold;

TEST_CASE("coherent state moments") {
  const auto model = make_model({0, 0, 1}, 0.5);
  const Complex a0(0.6, -0.3);
  const auto g = coherent_density(a0);
  const auto r = moments(g.entries, model);
  CHECK(std::abs(r.mean_alpha - a0) <= 1e-12);
  CHECK(std::abs(r.alpha2 - a0 * a0) <= 1e-12);
  CHECK(r.abs2 == doctest::Approx(std::norm(a0) + 0.5).epsilon(1e-12));
  // minimum uncertainty: dq = sqrt(hbar/(2 m omega)), dp = sqrt(hbar m omega / 2)
  CHECK(r.dq == doctest::Approx(std::sqrt(model.hbar / 2)).epsilon(1e-10));
  CHECK(r.dp == doctest::Approx(std::sqrt(model.hbar / 2)).epsilon(1e-10));
  CHECK(r.mean_q == doctest::Approx(std::sqrt(2 * model.hbar) * a0.real()));
}

TEST_CASE("vacuum width") {
  const auto model = make_model({0, 1}, 0.5, 2.0, 3.0, 1.0);
  const auto r = moments(coherent_density(0.0, {16, 4, 1e-10}).entries, model);
  CHECK(std::abs(r.mean_alpha) == 0.0);
  CHECK(r.dq == doctest::Approx(std::sqrt(model.hbar / (2 * model.m * model.omega))));
}

TEST_CASE("moment invariants hold along a trajectory") {
  const auto model = make_model({0, 0, 0, 1}, 0.5);
  const auto g0 = groenewold_from_gaussian(gaussian_state(2.0, 0.5), {64, 8, 1e-10});
  for (auto d : {Dynamics::classical(), Dynamics::semiquantum(1)}) {
    const auto traj = evolve(g0, d, model, time_grid(0.0, 2.0, 4));
    for (const auto& r : trajectory_moments(traj)) {
      CHECK(r.dq >= 0.0);
      CHECK(r.dp >= 0.0);
      CHECK(r.abs2 >= std::norm(r.mean_alpha));
    }
  }
}

TEST_CASE("the printed spread formula is reported as NaN when its radicand is negative") {
  const auto model = make_model({0, 0, 1}, 0.5);
  const auto r = moments(coherent_density(1.0).entries, model);
  // hbar (|a|^2 + 1/2 - a^2) - 2 hbar a^2 < 0 for a = 1
  CHECK(std::isnan(r.dq_paper));
  CHECK(r.dq == doctest::Approx(0.5));
}

TEST_CASE("spectral extremes") {
  CMatrix d = CMatrix::Zero(5, 5);
  d(0, 0) = 1.0;
  const auto e = spectrum_extremes(d, 2);
  CHECK(e.top[0] == doctest::Approx(1.0));
  CHECK(std::abs(e.top[1]) <= 1e-15);
  CHECK(std::abs(e.bottom[0]) <= 1e-15);
  CMatrix bad = d;
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(spectrum_extremes(bad, 2), InvalidArgument);
}

TEST_CASE("quantum evolution of a coherent state stays pure") {
  const auto model = make_model({0, 0, 0, 1}, 0.5);
  const auto g0 = coherent_density(0.5);
  const auto traj = evolve(g0, Dynamics::quantum(), model, {0.5, 2.0});
  for (const auto& s : traj.snapshots) {
    const auto e = spectrum_extremes(s.entries, 2);
    CHECK(std::abs(e.top[0] - 1.0) <= 1e-9);
    CHECK(std::abs(e.top[1]) <= 1e-9);
    CHECK(std::abs(e.bottom[0]) <= 1e-9);
    CHECK(squared_negativity(s.entries) <= 1e-12);
  }
}

TEST_CASE("squared negativity") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.2;
  d(1, 1) = -0.1;
  d(2, 2) = -0.1;
  CHECK(squared_negativity(d) == doctest::Approx(0.02));
  CHECK(squared_negativity(coherent_density(0.7).entries) <= 1e-20);
}

TEST_CASE("break time") {
  const std::vector<double> t{0, 1, 2, 3};
  const std::vector<Complex> a{0.0, 0.0, 0.0, 0.0};
  const std::vector<Complex> b{0.0, 0.05, 0.2, 0.0};
  CHECK(break_time(t, a, a, 0.1) == kNever);
  CHECK(break_time(t, a, b, 0.1) == 2.0);
  CHECK_THROWS_AS(break_time({0, 1}, a, b, 0.1), InvalidArgument);
}
