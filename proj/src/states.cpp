#include "groenewold/states.hpp"

#include <cmath>
#include <vector>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/parallel.hpp"

namespace groenewold {

double GaussianState::r0() const { return std::sqrt(2.0) * std::abs(alpha0); }

double GaussianState::phi0() const { return alpha0 == 0.0 ? 0.0 : std::arg(alpha0); }

GaussianState gaussian_state(double kappa, Complex alpha0) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("gaussian state: kappa must be positive");
  }
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) {
    throw InvalidArgument("gaussian state: alpha0 must be finite");
  }
  return {kappa, alpha0, std::nullopt};
}

GaussianState gaussian_from_physical(double gamma, double q0, double p0, double m, double omega,
                                     double hbar) {
  if (!(gamma > 0.0) || !(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) {
    throw InvalidArgument("gaussian state: gamma, m, omega and hbar must be positive");
  }
  const double root = std::sqrt(m * omega);
  GaussianState state = gaussian_state(
      hbar * omega / (gamma * gamma),
      Complex(root * q0, p0 / root) / std::sqrt(2.0 * hbar));
  state.physical = PhysicalGaussian{gamma, q0, p0, m, omega, hbar};
  return state;
}

Complex alpha_of(double q, double p, const ModelSpec& model) {
  const double root = std::sqrt(model.m * model.omega);
  return Complex(root * q, p / root) / std::sqrt(2.0 * model.hbar);
}

double q_of(Complex alpha, const ModelSpec& model) {
  return std::sqrt(2.0 * model.hbar / (model.m * model.omega)) * alpha.real();
}

double p_of(Complex alpha, const ModelSpec& model) {
  return std::sqrt(2.0 * model.hbar * model.m * model.omega) * alpha.imag();
}

double tail_mass(const CMatrix& g, int guard) {
  const int n = static_cast<int>(g.rows());
  double mass = 0.0;
  for (int i = std::max(0, n - guard); i < n; ++i) mass += std::abs(g(i, i));
  return mass;
}

void check_tail(const GroenewoldMatrix& g, double tail_tol) {
  if (g.tail_mass > tail_tol) throw TailMassExceeded(g.tail_mass, tail_tol);
}

Complex wigner_dyad_symbol(int n, int m, Complex alpha) {
  if (n < 0 || m < 0) throw InvalidArgument("wigner_dyad_symbol: negative index");
  const int low = std::min(n, m);
  const int nu = std::abs(m - n);
  std::vector<double> ell(low + 1);
  const long double s2 = std::norm(alpha);
  mathkit::laguerre_functions(nu, 4.0L * s2, ell);
  const double radial = 2.0 * ((low % 2) ? -1.0 : 1.0) * ell[low];
  if (m == n) return radial;
  const double phi = std::arg(alpha);
  return std::polar(radial, (m - n) * phi);
}

Complex wigner_dyad_symbol(int n, int m, double q, double p, const ModelSpec& model) {
  return wigner_dyad_symbol(n, m, alpha_of(q, p, model));
}

namespace {

void validate_options(const TruncationOptions& options) {
  if (options.N < 2) throw InvalidArgument("truncation: N must be at least 2");
  if (options.guard < 0 || options.guard >= options.N) {
    throw InvalidArgument("truncation: guard must lie in [0, N)");
  }
  if (!(options.tail_tol > 0.0)) throw InvalidArgument("truncation: tail_tol must be positive");
}

}  // namespace

GroenewoldMatrix groenewold_from_gaussian(const GaussianState& state,
                                          const TruncationOptions& options) {
  validate_options(options);
  const int N = options.N;
  const double kappa = state.kappa;
  const double s0 = std::abs(state.alpha0);
  const double phi0 = state.phi0();

  const auto& rule = mathkit::gauss_laguerre(4 * N);
  // x = (kappa + 2) s^2; nodes where the displaced Gaussian has underflowed
  // contribute nothing and are dropped.
  struct Node {
    double s;
    double weight;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < rule.order; ++i) {
    const double s = std::sqrt(rule.nodes[i] / (kappa + 2.0));
    const double exponent = kappa * (s - s0) * (s - s0);
    if (exponent > 745.0) continue;
    nodes.push_back({s, rule.scaled_weights[i] * std::exp(-exponent)});
  }

  CMatrix g = CMatrix::Zero(N, N);
  const double prefactor = 2.0 * kappa / (kappa + 2.0);
  parallel_for(N, [&](std::size_t index) {
    const int nu = static_cast<int>(index);
    const int length = N - nu;
    std::vector<double> sums(length, 0.0);
    std::vector<double> ell(length);
    for (const auto& node : nodes) {
      const double bessel = mathkit::bessel_i_scaled(nu, 2.0 * kappa * node.s * s0);
      const double w = node.weight * bessel;
      if (w == 0.0) continue;
      mathkit::laguerre_functions(nu, 4.0L * node.s * node.s, ell);
      for (int m = 0; m < length; ++m) sums[m] += w * ell[m];
    }
    const Complex phase = std::polar(prefactor, nu * phi0);
    for (int m = 0; m < length; ++m) {
      g(m + nu, m) = ((m % 2) ? -1.0 : 1.0) * sums[m] * phase;
    }
  });
  for (int nu = 1; nu < N; ++nu) {
    for (int m = 0; m + nu < N; ++m) g(m, m + nu) = std::conj(g(m + nu, m));
  }
  for (int n = 0; n < N; ++n) g(n, n) = g(n, n).real();

  GroenewoldMatrix out{std::move(g), MatrixKind::Groenewold, options.guard, 0.0};
  out.tail_mass = tail_mass(out.entries, options.guard);
  check_tail(out, options.tail_tol);
  return out;
}

GroenewoldMatrix coherent_density(Complex alpha0, const TruncationOptions& options) {
  validate_options(options);
  const int N = options.N;
  CVector v(N);
  v[0] = std::exp(-0.5 * std::norm(alpha0));
  for (int n = 1; n < N; ++n) v[n] = v[n - 1] * alpha0 / std::sqrt(static_cast<double>(n));
  GroenewoldMatrix out{v * v.adjoint(), MatrixKind::DensityOperator, options.guard, 0.0};
  out.tail_mass = tail_mass(out.entries, options.guard);
  check_tail(out, options.tail_tol);
  return out;
}

}  // namespace groenewold
