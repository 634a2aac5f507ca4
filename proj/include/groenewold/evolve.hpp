#pragma once

// Propagation of diagonal blocks, whole-matrix trajectories, and the two
// independent views of classical dynamics: the radial-rotation flow of the
// Liouville density and its moment integrals.

#include <vector>

#include "groenewold/generators.hpp"
#include "groenewold/render.hpp"
#include "groenewold/sl2.hpp"
#include "groenewold/states.hpp"

namespace groenewold {

// exp(t L) through one eigendecomposition, reusable for many t. When i L is
// Hermitian (to 1e-10 ||L||) the unitary path is used; otherwise a general
// complex eigendecomposition.
class BlockPropagator {
 public:
  explicit BlockPropagator(const GeneratorBlock& block);

  int nu() const { return nu_; }
  int dim() const { return static_cast<int>(vectors_.rows()); }
  bool unitary() const { return unitary_; }

  DiagonalBlock apply(const DiagonalBlock& g0, double t) const;

 private:
  int nu_;
  bool unitary_;
  CVector rates_;  // eigenvalues of L
  CMatrix vectors_;
  CMatrix inverse_;
};

DiagonalBlock propagate_block(const GeneratorBlock& block, const DiagonalBlock& g0, double t);

struct EvolveOptions {
  int nu_max = -1;  // evolve |nu| <= nu_max; -1 evolves every diagonal
  GeneratorOptions generator;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GroenewoldMatrix> snapshots;
  Dynamics dynamics;
  ModelSpec model;
  int nu_max = -1;
};

// Diagonals outside |nu| <= nu_max are zero in every snapshot, including t = 0.
Trajectory evolve(const GroenewoldMatrix& g0, const Dynamics& dynamics, const ModelSpec& model,
                  const std::vector<double>& times, const EvolveOptions& options = {});

// Same, reusing one generator factory.
Trajectory evolve(const GroenewoldMatrix& g0, const Dynamics& dynamics,
                  const GeneratorFactory& factory, const std::vector<double>& times,
                  int nu_max = -1);

// <alpha^m>(t) under the classical flow of the Gaussian density, by
// panel Gauss-Legendre quadrature of the reduced Bessel integral.
Complex classical_moment_quadrature(int m, const GaussianState& state, const ModelSpec& model,
                                    double t);

// <alpha^m>(t), m >= 1, under the classical flow in the number basis. The
// classical generator of diagonal m is a polynomial in the tridiagonal
// P = X1 + X2, so the block is propagated through the spectral resolution of P
// at dimension dim (g0 zero-padded), with only the two vectors the moment
// needs carried through the QL sweeps. Cost O(dim^2), no dim x dim storage.
std::vector<Complex> classical_moment_spectral(int m, const CMatrix& g0, const ModelSpec& model,
                                               const std::vector<double>& times, int dim);

struct SpectralMoments {
  std::vector<Complex> values;
  int dim = 0;          // dimension that met the tolerance
  double change = 0.0;  // max change against the previous doubling
};

// Doubles dim from start_dim until successive results agree within tol;
// throws TailMassExceeded past max_dim.
SpectralMoments classical_moment_spectral_converged(int m, const CMatrix& g0,
                                                    const ModelSpec& model,
                                                    const std::vector<double>& times,
                                                    double tol = 1e-9, int start_dim = 1024,
                                                    int max_dim = 32768);

// The whole matrix under the classical flow, every diagonal propagated through
// the spectral resolution of its P at dimension dim and cropped back to N.
// The dense generator at N sees the discrete spectrum of the truncated P,
// whose recurrences spoil the flow of high diagonals at moderate times.
std::vector<CMatrix> classical_evolve_spectral(const CMatrix& g0, const ModelSpec& model,
                                               const std::vector<double>& times, int dim);

struct SpectralEvolution {
  std::vector<CMatrix> snapshots;
  int dim = 0;
  double change = 0.0;  // max entry change against the previous doubling
};

SpectralEvolution classical_evolve_spectral_converged(const CMatrix& g0, const ModelSpec& model,
                                                      const std::vector<double>& times,
                                                      double tol = 1e-9, int start_dim = 1024,
                                                      int max_dim = 16384);

// Classical density rho(alpha e^{i omega t H'(H0)}) per unit dq dp.
double whorl_density(const GaussianState& state, const ModelSpec& model, double t, double q,
                     double p);
PhaseField whorl_field(const GaussianState& state, const ModelSpec& model, double t,
                       const PhaseGrid& grid);

// steps intervals on [t0, t1]; steps + 1 points.
std::vector<double> time_grid(double t0, double t1, int steps);

}  // namespace groenewold
