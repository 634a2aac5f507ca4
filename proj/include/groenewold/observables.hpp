#pragma once

// Moments, spectra and conservation diagnostics of number-basis matrices.

#include <limits>
#include <vector>

#include "groenewold/evolve.hpp"
#include "groenewold/model.hpp"
#include "groenewold/types.hpp"

namespace groenewold {

struct MomentRecord {
  double t = 0.0;
  Complex mean_alpha = 0.0;  // Tr(G a)
  Complex alpha2 = 0.0;      // Tr(G a^2)
  double abs2 = 0.0;         // Tr(G (n + 1/2)), the Weyl image of |alpha|^2
  double mean_q = 0.0;
  double mean_p = 0.0;
  double dq = 0.0;
  double dp = 0.0;
  // Spread formula with the squared first moment in place of <alpha^2>;
  // NaN where the radicand is negative.
  double dq_paper = 0.0;
  double dp_paper = 0.0;
};

MomentRecord moments(const CMatrix& g, const ModelSpec& model, double t = 0.0);

struct SpectrumExtremes {
  std::vector<double> top;     // descending
  std::vector<double> bottom;  // ascending
};

SpectrumExtremes spectrum_extremes(const CMatrix& g, int k);

// sum of lambda^2 over negative eigenvalues
double squared_negativity(const CMatrix& g);

double trace_error(const CMatrix& g);      // |Tr G - 1|
double purity(const CMatrix& g);           // Tr G^2 (real part of Tr G G)
double hermiticity_error(const CMatrix& g);

inline constexpr double kNever = std::numeric_limits<double>::infinity();

// First t where |a(t) - b(t)| > threshold, kNever if none.
double break_time(const std::vector<double>& times, const std::vector<Complex>& a,
                  const std::vector<Complex>& b, double threshold);
double break_time(const Trajectory& a, const Trajectory& b, double threshold);

std::vector<MomentRecord> trajectory_moments(const Trajectory& traj);

}  // namespace groenewold
