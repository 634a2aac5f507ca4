#pragma once

// Per-diagonal generators of the four dynamics. A block g of diagonal nu
// evolves as dg/dt = L g.
//
// Two independent constructions:
//   commutator path    quantum + sum_j a_j C_j, with C_j built from nested
//                      commutators with q^, p^ (the classical limit of the
//                      quantum bracket)
//   Moyal-Galerkin     classical + sum_j D_j, with D_j the Galerkin matrix of
//                      the j-th Moyal term on a radial quadrature grid
// and a closed form for the classical generator in terms of X1 + X2.

#include <limits>
#include <string>
#include <vector>

#include "groenewold/model.hpp"
#include "groenewold/types.hpp"

namespace groenewold {

enum class DynamicsFamily { Quantum, Semiquantum, Classical, Semiclassical };

struct Dynamics {
  DynamicsFamily family = DynamicsFamily::Quantum;
  int order = 0;  // semiquantum / semiclassical only

  static Dynamics quantum() { return {DynamicsFamily::Quantum, 0}; }
  static Dynamics classical() { return {DynamicsFamily::Classical, 0}; }
  static Dynamics semiquantum(int j) { return {DynamicsFamily::Semiquantum, j}; }
  static Dynamics semiclassical(int j) { return {DynamicsFamily::Semiclassical, j}; }

  // "quantum", "classical", "semiquantum1", "semiclassical2", ...
  std::string name() const;
  static Dynamics parse(const std::string& text);

  bool operator==(const Dynamics&) const = default;
};

enum class GeneratorPath { Analytic, Commutator, MoyalGalerkin };

struct GeneratorBlock {
  int nu = 0;
  Dynamics dynamics;
  CMatrix L;
  GeneratorPath path = GeneratorPath::Analytic;
  int guard = 16;
};

struct GeneratorOptions {
  int guard = 16;
  int pad = 0;              // 0: 8K
  bool check_pad = true;    // GuardInsufficient when doubling pad moves entries
  // Radial symbols commute, so every generator vanishes on nu = 0; return the
  // exact zero instead of the rounding left by the correction sums.
  bool structural_zero = true;
  int nodes = 0;            // 0: N + 4j + K + 8, exact for the integrand
  bool check_nodes = true;  // QuadratureNotConverged when doubling nodes moves entries
};

// x/sin(x) = sum_j s_j x^(2j); the j-th classical correction coefficient is
// a_j = s_j (hbar/2)^(2j) / (i hbar), so a_1 = -i hbar/24, a_2 = -7 i hbar^3/5760.
double inverse_sine_coefficient(int j);
Complex hilbert_coefficient(int j, double hbar);

// 1/(4^j (2j+1)!) / (i hbar), the coefficient of the j-th Moyal term in alpha
// variables, where the bracket is H 2 sinh(Lambda/2) W.
Complex moyal_coefficient(int j, double hbar);

// Highest j for which C_j, D_j can be nonzero: K - 1.
int terminating_order(const ModelSpec& model);

// Block length N - |nu|; generators are square of this size.
int block_dim(int nu, int N);

GeneratorBlock quantum_block(int nu, const ModelSpec& model, int N);

// Derivative operators of H in normal order, shared across diagonals.
class HilbertCorrections {
 public:
  // size: Fock dimension of the padded construction space
  HilbertCorrections(const ModelSpec& model, int size);

  int size() const { return size_; }

  // sum_l C(2j,l)(-1)^l [H_{q^(2j-l) p^l}, G_{p^(2j-l) q^l}] restricted to
  // diagonal nu of an N-level truncation.
  CMatrix block(int nu, int N, int j) const;

  // Single term l of the sum above, without the binomial weight.
  CMatrix term(int nu, int N, int j, int l) const;

 private:
  struct Band {
    int order = 0;                // derivative count; bandwidth of the operator
    std::vector<CVector> diags;   // diags[d + order][r] = <r|X|r+d>
  };
  const Band& derivative(int nq, int np) const;
  CMatrix term_unchecked(int nu, int N, int j, int l) const;

  ModelSpec model_;
  int size_;
  double s_q_;
  double s_p_;
  std::vector<std::vector<Band>> bands_;  // [nq][np]
};

CMatrix hilbert_correction_block(int nu, const ModelSpec& model, int N, int j,
                                 const GeneratorOptions& options = {});
CMatrix hilbert_correction_term(int nu, const ModelSpec& model, int N, int j, int l,
                                const GeneratorOptions& options = {});

// D_j, including the coefficient; D_0 is the Poisson generator.
CMatrix moyal_correction_block(int nu, const ModelSpec& model, int N, int j,
                               const GeneratorOptions& options = {});

GeneratorBlock classical_block(int nu, const ModelSpec& model, int N,
                               const GeneratorOptions& options = {});
GeneratorBlock semiquantum_block(int nu, const ModelSpec& model, int N, int order,
                                 const GeneratorOptions& options = {});
GeneratorBlock semiclassical_block(int nu, const ModelSpec& model, int N, int order,
                                   const GeneratorOptions& options = {});

// -i nu omega sum_k k b_k mu^(k-1) ((X1 + X2)/2)^(k-1)
GeneratorBlock classical_block_analytic(int nu, const ModelSpec& model, int N);

GeneratorBlock make_generator(const Dynamics& dynamics, int nu, const ModelSpec& model, int N,
                              const GeneratorOptions& options = {});

// Reuses the Hilbert derivative operators across diagonals.
class GeneratorFactory {
 public:
  GeneratorFactory(ModelSpec model, int N, GeneratorOptions options = {});
  GeneratorBlock make(const Dynamics& dynamics, int nu) const;
  const ModelSpec& model() const { return model_; }

 private:
  CMatrix hilbert_sum(int nu, int up_to) const;

  ModelSpec model_;
  int N_;
  GeneratorOptions options_;
  HilbertCorrections hilbert_;
  HilbertCorrections hilbert_check_;
};

struct ValidationRow {
  std::string check;
  int nu = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool gate = true;  // informational rows never fail

  bool passed() const { return !gate || residual <= tolerance; }
};

struct ValidationReport {
  std::vector<ValidationRow> rows;

  bool passed() const;
  const ValidationRow* worst() const;  // largest residual/tolerance among gates
  void require() const;                // throws ValidationFailed
};

// max |A_ij - B_ij| over the top-left (dim - guard) block
double interior_residual(const CMatrix& a, const CMatrix& b, int guard);

ValidationReport cross_validate(int nu, const ModelSpec& model, int N,
                                const GeneratorOptions& options = {});

}  // namespace groenewold
