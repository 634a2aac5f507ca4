#include "groenewold/mathkit.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <unsupported/Eigen/MatrixFunctions>

#include "groenewold/error.hpp"

namespace groenewold::mathkit {

namespace {

// Large-argument expansion of exp(-x) I_m(x).
long double bessel_i_scaled_asymptotic(int m, long double x) {
  const long double mu = 4.0L * m * m;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= -(mu - odd * odd) / (k * 8.0L * x);
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0L * static_cast<long double>(kPi) * x);
}

// Power series; every term is positive so there is no cancellation.
long double bessel_i_scaled_series(int m, long double x) {
  const long double half = x / 2.0L;
  long double term = std::exp(m * std::log(half) - std::lgamma(m + 1.0L) - x);
  long double sum = term;
  const long double q = half * half;
  for (int k = 1;; ++k) {
    term *= q / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (k > half && term < 1e-22L * sum) break;
    if (k > 100000) break;
  }
  return sum;
}

}  // namespace

double bessel_i_scaled(int m, double x) {
  if (m < 0) m = -m;  // I_{-m} = I_m for integer order
  if (x < 0.0) throw InvalidArgument("bessel_i: negative argument");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  const long double xl = x;
  if (x > 1000.0 && x > 4.0 * m * m) return static_cast<double>(bessel_i_scaled_asymptotic(m, xl));
  return static_cast<double>(bessel_i_scaled_series(m, xl));
}

double bessel_i(int m, double x) {
  if (m < 0) m = -m;
  if (x < 0.0) throw InvalidArgument("bessel_i: negative argument");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  const long double xl = x;
  const long double scaled = (x > 1000.0 && x > 4.0 * m * m) ? bessel_i_scaled_asymptotic(m, xl)
                                                            : bessel_i_scaled_series(m, xl);
  return static_cast<double>(scaled * std::exp(xl));
}

double laguerre_assoc(int n, double k, double x) {
  if (n < 0) throw InvalidArgument("laguerre_assoc: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_functions(int nu, long double y, std::span<double> out) {
  if (out.empty()) return;
  if (nu < 0) nu = -nu;
  long double prev = 0.0L;
  long double cur;
  if (y <= 0.0L) {
    cur = nu == 0 ? 1.0L : 0.0L;
  } else {
    cur = std::exp(0.5L * nu * std::log(y) - 0.5L * y - 0.5L * std::lgamma(nu + 1.0L));
  }
  out[0] = static_cast<double>(cur);
  for (std::size_t m = 0; m + 1 < out.size(); ++m) {
    const long double mm = static_cast<long double>(m);
    const long double next =
        ((2.0L * mm + 1.0L + nu - y) * cur - std::sqrt(mm * (mm + nu)) * prev) /
        std::sqrt((mm + 1.0L) * (mm + 1.0L + nu));
    prev = cur;
    cur = next;
    out[m + 1] = static_cast<double>(cur);
  }
}

namespace {

// L_n(x), L_{n-1}(x) scaled by exp(-log_scale) to stay finite.
struct LaguerrePair {
  long double value;
  long double previous;
  long double log_scale;
};

LaguerrePair laguerre_pair(int n, long double x) {
  long double p0 = 1.0L;
  long double p1 = 1.0L - x;
  long double log_scale = 0.0L;
  if (n == 0) return {p0, 0.0L, 0.0L};
  for (int k = 1; k < n; ++k) {
    long double p2 = ((2.0L * k + 1.0L - x) * p1 - k * p0) / (k + 1.0L);
    p0 = p1;
    p1 = p2;
    if (std::fabs(p1) > 1e300L) {
      p0 *= 1e-300L;
      p1 *= 1e-300L;
      log_scale += 300.0L * std::log(10.0L);
    }
  }
  return {p1, p0, log_scale};
}

QuadratureRule make_gauss_laguerre(int n) {
  // Golub-Welsch eigenvalues as starting points, then Newton polishing.
  RVector diag(n);
  RVector sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
  for (int i = 0; i + 1 < n; ++i) sub[i] = i + 1.0;
  Eigen::SelfAdjointEigenSolver<RMatrix> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const RVector guesses = jacobi.eigenvalues();

  QuadratureRule rule{QuadratureKind::GaussLaguerre, n, {}, {}, {}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    long double x = guesses[i];
    for (int it = 0; it < 100; ++it) {
      const auto p = laguerre_pair(n, x);
      const long double derivative = n * (p.value - p.previous) / x;
      const long double dx = p.value / derivative;
      x -= dx;
      if (std::fabs(dx) <= 1e-19L * std::max(1.0L, std::fabs(x))) break;
    }
    const auto p = laguerre_pair(n, x);
    const long double next = ((2.0L * n + 1.0L - x) * p.value - n * p.previous) / (n + 1.0L);
    const long double log_w = std::log(x) - 2.0L * std::log(n + 1.0L) -
                              2.0L * (std::log(std::fabs(next)) + p.log_scale);
    rule.nodes[i] = static_cast<double>(x);
    rule.weights[i] = static_cast<double>(std::exp(log_w));
    rule.scaled_weights[i] = static_cast<double>(std::exp(log_w + x));
  }
  return rule;
}

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule rule{QuadratureKind::GaussLegendre, n, {}, {}, {}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    long double derivative = 1.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L;
      long double p1 = x;
      for (int k = 1; k < n; ++k) {
        const long double p2 = ((2.0L * k + 1.0L) * x * p1 - k * p0) / (k + 1.0L);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0L;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / derivative;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - x * x) * derivative * derivative);
    rule.nodes[i] = static_cast<double>(-x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

const QuadratureRule& cached(QuadratureKind kind, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{static_cast<int>(kind), order}];
  if (!slot) slot = std::make_unique<QuadratureRule>(quadrature(kind, order));
  return *slot;
}

}  // namespace

QuadratureRule quadrature(QuadratureKind kind, int order) {
  if (order < 1) throw InvalidArgument("quadrature: order must be positive");
  return kind == QuadratureKind::GaussLaguerre ? make_gauss_laguerre(order)
                                               : make_gauss_legendre(order);
}

const QuadratureRule& gauss_laguerre(int order) {
  return cached(QuadratureKind::GaussLaguerre, order);
}

const QuadratureRule& gauss_legendre(int order) {
  return cached(QuadratureKind::GaussLegendre, order);
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

HermitianEig hermitian_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("hermitian_eig: matrix is not square");
  const double scale = max_abs(a);
  if (max_abs(a - a.adjoint()) > 1e-10 * std::max(scale, 1e-300)) {
    throw InvalidArgument("hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix is not square");
  return a.exp();
}

}  // namespace groenewold::mathkit
