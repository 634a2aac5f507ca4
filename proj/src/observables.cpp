#include "groenewold/observables.hpp"

#include <algorithm>
#include <cmath>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"

namespace groenewold {

MomentRecord moments(const CMatrix& g, const ModelSpec& model, double t) {
  const int N = static_cast<int>(g.rows());
  MomentRecord r;
  r.t = t;
  // Tr(G a) = sum_k sqrt(k+1) G_{k+1,k}; Tr(G a^2) = sum_k sqrt((k+1)(k+2)) G_{k+2,k}
  for (int k = 0; k + 1 < N; ++k) r.mean_alpha += std::sqrt(k + 1.0) * g(k + 1, k);
  for (int k = 0; k + 2 < N; ++k) r.alpha2 += std::sqrt((k + 1.0) * (k + 2.0)) * g(k + 2, k);
  for (int k = 0; k < N; ++k) r.abs2 += (k + 0.5) * g(k, k).real();

  const double mw = model.m * model.omega;
  const double hbar = model.hbar;
  r.mean_q = std::sqrt(2.0 * hbar / mw) * r.mean_alpha.real();
  r.mean_p = std::sqrt(2.0 * hbar * mw) * r.mean_alpha.imag();
  const double varq = hbar / mw * (r.abs2 + r.alpha2.real()) - r.mean_q * r.mean_q;
  const double varp = hbar * mw * (r.abs2 - r.alpha2.real()) - r.mean_p * r.mean_p;
  r.dq = std::sqrt(std::max(varq, 0.0));
  r.dp = std::sqrt(std::max(varp, 0.0));

  const double first_sq = (r.mean_alpha * r.mean_alpha).real();
  const double pq = hbar * (r.abs2 - first_sq) / mw - r.mean_q * r.mean_q;
  const double pp = hbar * mw * (r.abs2 - first_sq) - r.mean_p * r.mean_p;
  r.dq_paper = pq >= 0.0 ? std::sqrt(pq) : std::nan("");
  r.dp_paper = pp >= 0.0 ? std::sqrt(pp) : std::nan("");
  return r;
}

namespace {

RVector eigenvalues_of(const CMatrix& g) {
  const CMatrix sym = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("spectrum: eigensolver failed");
  return solver.eigenvalues();
}

}  // namespace

SpectrumExtremes spectrum_extremes(const CMatrix& g, int k) {
  if (k < 1) throw InvalidArgument("spectrum_extremes: k must be positive");
  if (hermiticity_error(g) > 1e-8 * std::max(1.0, mathkit::max_abs(g))) {
    throw InvalidArgument("spectrum_extremes: matrix is not Hermitian");
  }
  const RVector values = eigenvalues_of(g);
  const int n = static_cast<int>(values.size());
  SpectrumExtremes out;
  for (int i = 0; i < std::min(k, n); ++i) {
    out.top.push_back(values[n - 1 - i]);
    out.bottom.push_back(values[i]);
  }
  return out;
}

double squared_negativity(const CMatrix& g) {
  const RVector values = eigenvalues_of(g);
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0) sum += v * v;
  }
  return sum;
}

double trace_error(const CMatrix& g) { return std::abs(g.trace() - 1.0); }

double purity(const CMatrix& g) {
  // Tr(G G) = sum_ij G_ij G_ji
  return (g.array() * g.transpose().array()).sum().real();
}

double hermiticity_error(const CMatrix& g) { return mathkit::max_abs(g - g.adjoint()); }

double break_time(const std::vector<double>& times, const std::vector<Complex>& a,
                  const std::vector<Complex>& b, double threshold) {
  if (a.size() != times.size() || b.size() != times.size()) {
    throw InvalidArgument("break_time: mismatched time grids");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(a[i] - b[i]) > threshold) return times[i];
  }
  return kNever;
}

std::vector<MomentRecord> trajectory_moments(const Trajectory& traj) {
  std::vector<MomentRecord> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out.push_back(moments(traj.snapshots[i].entries, traj.model, traj.times[i]));
  }
  return out;
}

double break_time(const Trajectory& a, const Trajectory& b, double threshold) {
  if (a.times != b.times) throw InvalidArgument("break_time: mismatched time grids");
  std::vector<Complex> ma;
  std::vector<Complex> mb;
  for (const auto& r : trajectory_moments(a)) ma.push_back(r.mean_alpha);
  for (const auto& r : trajectory_moments(b)) mb.push_back(r.mean_alpha);
  return break_time(a.times, ma, mb, threshold);
}

}  // namespace groenewold
