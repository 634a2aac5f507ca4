#pragma once

// Initial states in the number basis and Wigner symbols of Fock dyads.
//
// Phase-plane coordinate: alpha = (sqrt(m w) q + i p / sqrt(m w)) / sqrt(2 hbar).
// Symbols W(A) carry no 2 pi hbar factor, so Tr(A B) = (1/pi) Int W(A) W(B) d^2alpha.

#include <optional>

#include "groenewold/model.hpp"
#include "groenewold/types.hpp"

namespace groenewold {

struct PhysicalGaussian {
  double gamma = 1.0;
  double q0 = 0.0;
  double p0 = 0.0;
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
};

// Liouville density rho(alpha) = (kappa/pi) exp(-kappa |alpha - alpha0|^2)
// with respect to d^2alpha.
struct GaussianState {
  double kappa = 2.0;
  Complex alpha0 = 0.0;
  std::optional<PhysicalGaussian> physical;

  // alpha0 = r0 exp(i phi0) / sqrt(2)
  double r0() const;
  double phi0() const;
};

GaussianState gaussian_state(double kappa, Complex alpha0);
GaussianState gaussian_from_physical(double gamma, double q0, double p0, double m, double omega,
                                     double hbar);

Complex alpha_of(double q, double p, const ModelSpec& model);
double q_of(Complex alpha, const ModelSpec& model);
double p_of(Complex alpha, const ModelSpec& model);

enum class MatrixKind { DensityOperator, Groenewold };

struct GroenewoldMatrix {
  CMatrix entries;
  MatrixKind kind = MatrixKind::Groenewold;
  int guard = 16;
  double tail_mass = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
};

struct TruncationOptions {
  int N = 128;
  int guard = 16;
  double tail_tol = 1e-10;
};

// sum_{n >= N - guard} |G_nn|
double tail_mass(const CMatrix& g, int guard);

// Throws TailMassExceeded when the tail is above tolerance.
void check_tail(const GroenewoldMatrix& g, double tail_tol);

// W(|n><m|)(alpha) = e^{i(m-n)phi} 2 (-1)^min(n,m) l_min^{|m-n|}(4|alpha|^2)
Complex wigner_dyad_symbol(int n, int m, Complex alpha);
Complex wigner_dyad_symbol(int n, int m, double q, double p, const ModelSpec& model);

// G_nm = Tr(G |m><n|) = (kappa/pi) Int exp(-kappa|alpha-alpha0|^2) W(|m><n|) d^2alpha.
// The angular integral is analytic (a Bessel function); the radial one uses
// Gauss-Laguerre with 4N nodes.
GroenewoldMatrix groenewold_from_gaussian(const GaussianState& state,
                                          const TruncationOptions& options = {});

// |alpha0><alpha0| truncated to N levels.
GroenewoldMatrix coherent_density(Complex alpha0, const TruncationOptions& options = {});

}  // namespace groenewold
