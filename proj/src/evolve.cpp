#include "groenewold/evolve.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/parallel.hpp"

namespace groenewold {

BlockPropagator::BlockPropagator(const GeneratorBlock& block) : nu_(block.nu), unitary_(false) {
  const CMatrix& L = block.L;
  if (L.rows() != L.cols()) throw InvalidArgument("propagator: generator is not square");
  const CMatrix h = Complex(0.0, 1.0) * L;
  const double scale = std::max(mathkit::max_abs(L), 1e-300);
  if (mathkit::max_abs(h - h.adjoint()) <= 1e-10 * scale) {
    unitary_ = true;
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("propagator: eigensolver failed");
    rates_ = Complex(0.0, -1.0) * solver.eigenvalues().cast<Complex>();
    vectors_ = solver.eigenvectors();
    inverse_ = vectors_.adjoint();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> solver(L);
    if (solver.info() != Eigen::Success) throw Error("propagator: eigensolver failed");
    rates_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    inverse_ = vectors_.inverse();
  }
}

DiagonalBlock BlockPropagator::apply(const DiagonalBlock& g0, double t) const {
  if (g0.nu != nu_ || g0.dim() != dim()) {
    throw InvalidArgument("propagator: block does not match generator");
  }
  if (t == 0.0) return g0;
  CVector c = inverse_ * g0.coeffs;
  for (int i = 0; i < c.size(); ++i) c[i] *= std::exp(rates_[i] * t);
  return {nu_, vectors_ * c};
}

DiagonalBlock propagate_block(const GeneratorBlock& block, const DiagonalBlock& g0, double t) {
  if (t == 0.0) {
    if (g0.nu != block.nu || g0.dim() != block.L.rows()) {
      throw InvalidArgument("propagator: block does not match generator");
    }
    return g0;
  }
  return BlockPropagator(block).apply(g0, t);
}

std::vector<double> time_grid(double t0, double t1, int steps) {
  if (steps < 0) throw InvalidArgument("time grid: negative step count");
  if (steps == 0) return {t0};
  if (!(t1 > t0)) throw InvalidArgument("time grid: t1 must exceed t0");
  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = t0 + (t1 - t0) * i / steps;
  times.back() = t1;
  return times;
}

Trajectory evolve(const GroenewoldMatrix& g0, const Dynamics& dynamics,
                  const GeneratorFactory& factory, const std::vector<double>& times,
                  int nu_max) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("evolve: times must increase");
  }
  const int N = g0.dim();
  const int top = nu_max < 0 ? N - 1 : std::min(nu_max, N - 1);

  Trajectory traj;
  traj.times = times;
  traj.dynamics = dynamics;
  traj.model = factory.model();
  traj.nu_max = nu_max;
  GroenewoldMatrix empty = g0;
  empty.entries.setZero();
  traj.snapshots.assign(times.size(), empty);

  const int count = 2 * top + 1;
  parallel_for(count, [&](std::size_t index) {
    const int nu = static_cast<int>(index) - top;
    const DiagonalBlock start = extract_block(g0.entries, nu);
    const BlockPropagator propagator(factory.make(dynamics, nu));
    for (std::size_t i = 0; i < times.size(); ++i) {
      insert_block(traj.snapshots[i].entries, propagator.apply(start, times[i]));
    }
  });
  for (auto& s : traj.snapshots) s.tail_mass = tail_mass(s.entries, s.guard);
  return traj;
}

Trajectory evolve(const GroenewoldMatrix& g0, const Dynamics& dynamics, const ModelSpec& model,
                  const std::vector<double>& times, const EvolveOptions& options) {
  const GeneratorFactory factory(model, g0.dim(), options.generator);
  return evolve(g0, dynamics, factory, times, options.nu_max);
}

namespace {

// Gauss-Legendre over uniform panels on [0, r_max].
Complex moment_integral(int m, double kappa, double r0, const ModelSpec& model, double t,
                        double r_max, int panels) {
  const auto& rule = mathkit::gauss_legendre(20);
  const double width = r_max / panels;
  Complex sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * width;
    for (int i = 0; i < rule.order; ++i) {
      const double r = a + 0.5 * width * (rule.nodes[i] + 1.0);
      const double envelope = std::exp(-0.5 * kappa * (r - r0) * (r - r0)) *
                              mathkit::bessel_i_scaled(m, kappa * r * r0) * std::pow(r, m + 1);
      const double phase =
          -m * model.omega * t * hamiltonian_slope(model, 0.5 * model.mu * r * r);
      sum += 0.5 * width * rule.weights[i] * std::polar(envelope, phase);
    }
  }
  return sum;
}

}  // namespace

Complex classical_moment_quadrature(int m, const GaussianState& state, const ModelSpec& model,
                                    double t) {
  if (m < 0) throw InvalidArgument("classical_moment_quadrature: negative order");
  const double kappa = state.kappa;
  const double r0 = state.r0();
  const double r_max = r0 + 10.0 / std::sqrt(kappa);
  // Phase slope m omega t H''(v) mu r at the far end bounds the oscillation.
  const double v_max = 0.5 * model.mu * r_max * r_max;
  const double slope = std::abs(m * model.omega * t) *
                       std::abs(hamiltonian_curvature(model, v_max)) * model.mu * r_max;
  int panels = 8 + static_cast<int>(std::ceil(slope * r_max / 4.0));
  const Complex prefactor = kappa / std::pow(2.0, 0.5 * m) * std::polar(1.0, m * state.phi0());
  Complex coarse = moment_integral(m, kappa, r0, model, t, r_max, panels);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const Complex fine = moment_integral(m, kappa, r0, model, t, r_max, 2 * panels);
    if (std::abs(fine - coarse) <= 1e-9 * std::max(1.0, std::abs(fine)) / std::abs(prefactor)) {
      return prefactor * fine;
    }
    coarse = fine;
    panels *= 2;
  }
  throw QuadratureNotConverged("classical moment quadrature did not converge");
}

double whorl_density(const GaussianState& state, const ModelSpec& model, double t, double q,
                     double p) {
  const Complex alpha = alpha_of(q, p, model);
  const double rate = model.omega * hamiltonian_slope(model, model.mu * std::norm(alpha));
  const Complex start = alpha * std::polar(1.0, rate * t);
  const double d2 = std::norm(start - state.alpha0);
  return state.kappa / kPi * std::exp(-state.kappa * d2) / (2.0 * model.hbar);
}

PhaseField whorl_field(const GaussianState& state, const ModelSpec& model, double t,
                       const PhaseGrid& grid) {
  grid.validate();
  PhaseField field{grid, model.hbar, {}, {}, 0.0};
  field.values.resize(static_cast<std::size_t>(grid.nq) * grid.np);
  for (int j = 0; j < grid.np; ++j) {
    for (int i = 0; i < grid.nq; ++i) {
      field.values[static_cast<std::size_t>(j) * grid.nq + i] =
          whorl_density(state, model, t, grid.q(i), grid.p(j));
    }
  }
  finalize_field(field);
  return field;
}

}  // namespace groenewold

namespace groenewold {

namespace {

// Implicit QL on the symmetric tridiagonal (d, e), e[i] coupling i and i+1.
// On return d holds the eigenvalues and each vector y in ys is replaced by
// V^T y, V the eigenvector matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<std::vector<double>*>& ys) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iterations > 60) throw Error("tridiagonal QL did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      int i;
      bool deflated = false;
      for (i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (auto* y : ys) {
          auto& v = *y;
          const double t = v[i + 1];
          v[i + 1] = s * v[i] + c * t;
          v[i] = c * v[i] - s * t;
        }
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (true);
  }
}

}  // namespace

std::vector<Complex> classical_moment_spectral(int m, const CMatrix& g0, const ModelSpec& model,
                                               const std::vector<double>& times, int dim) {
  if (m < 1) throw InvalidArgument("classical_moment_spectral: order must be at least 1");
  const int N = static_cast<int>(g0.rows());
  if (m >= N) throw InvalidArgument("classical_moment_spectral: order exceeds truncation");
  if (dim < N - m) throw InvalidArgument("classical_moment_spectral: dim below block length");

  // P = X1 + X2 on diagonal m
  std::vector<double> d(dim);
  std::vector<double> e(dim, 0.0);
  for (int n = 0; n < dim; ++n) d[n] = n + (m + 1.0) / 2.0;
  for (int n = 0; n + 1 < dim; ++n) e[n] = std::sqrt((n + 1.0) * (n + m + 1.0)) / 2.0;

  // Tr(G a^m) = sum_r sqrt((r+1)...(r+m)) G_{r+m,r}
  std::vector<double> weight(dim);
  for (int r = 0; r < dim; ++r) {
    double w = 1.0;
    for (int i = 1; i <= m; ++i) w *= r + i;
    weight[r] = std::sqrt(w);
  }
  std::vector<double> re(dim, 0.0);
  std::vector<double> im(dim, 0.0);
  for (int r = 0; r + m < N; ++r) {
    re[r] = g0(r + m, r).real();
    im[r] = g0(r + m, r).imag();
  }
  std::vector<std::vector<double>*> ys{&weight, &re, &im};
  tridiagonal_ql(d, e, ys);

  // L = -i m omega H'(mu P / 2) on this diagonal
  std::vector<double> rate(dim);
  for (int i = 0; i < dim; ++i) {
    rate[i] = m * model.omega * hamiltonian_slope(model, 0.5 * model.mu * d[i]);
  }
  std::vector<Complex> out;
  out.reserve(times.size());
  for (double t : times) {
    Complex sum = 0.0;
    for (int i = 0; i < dim; ++i) {
      sum += weight[i] * std::polar(1.0, -rate[i] * t) * Complex(re[i], im[i]);
    }
    out.push_back(sum);
  }
  return out;
}

std::vector<CMatrix> classical_evolve_spectral(const CMatrix& g0, const ModelSpec& model,
                                               const std::vector<double>& times, int dim) {
  const int N = static_cast<int>(g0.rows());
  if (dim < N) throw InvalidArgument("classical_evolve_spectral: dim below truncation");
  std::vector<CMatrix> out(times.size(), CMatrix::Zero(N, N));
  const double norm = mathkit::max_abs(g0);
  // nu and -nu share P; only the sign of the rate differs
  std::vector<int> order;
  for (int nu = 0; nu < N; ++nu) order.push_back(nu);
  for (int nu = 1; nu < N; ++nu) order.push_back(-nu);
  parallel_for(order.size(), [&](std::size_t index) {
    const int nu = order[index];
    const int a = std::abs(nu);
    const DiagonalBlock block = extract_block(g0, nu);
    if (block.coeffs.cwiseAbs().maxCoeff() <= 1e-17 * norm) return;
    const int keep = block.dim();
    std::vector<double> d0(dim);
    std::vector<double> e0(dim, 0.0);
    for (int n = 0; n < dim; ++n) d0[n] = n + (a + 1.0) / 2.0;
    for (int n = 0; n + 1 < dim; ++n) e0[n] = std::sqrt((n + 1.0) * (n + a + 1.0)) / 2.0;
    std::vector<double> d = d0;
    std::vector<double> e = e0;
    std::vector<double> first(dim, 0.0);
    std::vector<double> re(dim, 0.0);
    std::vector<double> im(dim, 0.0);
    first[0] = 1.0;
    for (int n = 0; n < keep; ++n) {
      re[n] = block.coeffs[n].real();
      im[n] = block.coeffs[n].imag();
    }
    std::vector<std::vector<double>*> ys{&first, &re, &im};
    tridiagonal_ql(d, e, ys);

    // leading eigenvector components from the three-term recurrence
    RMatrix v(keep, dim);
    for (int i = 0; i < dim; ++i) {
      v(0, i) = first[i];
      if (keep > 1) v(1, i) = (d[i] - d0[0]) * first[i] / e0[0];
      for (int n = 1; n + 1 < keep; ++n) {
        v(n + 1, i) = ((d[i] - d0[n]) * v(n, i) - e0[n - 1] * v(n - 1, i)) / e0[n];
      }
    }
    std::vector<double> rate(dim);
    for (int i = 0; i < dim; ++i) {
      rate[i] = nu * model.omega * hamiltonian_slope(model, 0.5 * model.mu * d[i]);
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
      CVector phased(dim);
      for (int i = 0; i < dim; ++i) {
        phased[i] = std::polar(1.0, -rate[i] * times[k]) * Complex(re[i], im[i]);
      }
      DiagonalBlock evolved{nu, v.cast<Complex>() * phased};
      insert_block(out[k], evolved);
    }
  });
  return out;
}

SpectralEvolution classical_evolve_spectral_converged(const CMatrix& g0, const ModelSpec& model,
                                                      const std::vector<double>& times,
                                                      double tol, int start_dim, int max_dim) {
  int dim = std::max<int>(start_dim, static_cast<int>(g0.rows()));
  auto previous = classical_evolve_spectral(g0, model, times, dim);
  while (2 * dim <= max_dim) {
    dim *= 2;
    auto next = classical_evolve_spectral(g0, model, times, dim);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      change = std::max(change, mathkit::max_abs(next[i] - previous[i]));
    }
    if (change <= tol) return {std::move(next), dim, change};
    previous = std::move(next);
  }
  throw TailMassExceeded(std::numeric_limits<double>::quiet_NaN(), tol);
}

SpectralMoments classical_moment_spectral_converged(int m, const CMatrix& g0,
                                                    const ModelSpec& model,
                                                    const std::vector<double>& times, double tol,
                                                    int start_dim, int max_dim) {
  int dim = std::max<int>(start_dim, static_cast<int>(g0.rows()));
  auto previous = classical_moment_spectral(m, g0, model, times, dim);
  while (2 * dim <= max_dim) {
    dim *= 2;
    auto next = classical_moment_spectral(m, g0, model, times, dim);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      change = std::max(change, std::abs(next[i] - previous[i]));
    }
    if (change <= tol) return {std::move(next), dim, change};
    previous = std::move(next);
  }
  throw TailMassExceeded(std::numeric_limits<double>::quiet_NaN(), tol);
}

}  // namespace groenewold
