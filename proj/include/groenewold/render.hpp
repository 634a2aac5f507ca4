#pragma once

// Phase-space fields on a rectangular (q, p) grid and their PGM/CSV encodings.
//
// Values are densities with respect to dq dp. Grid points sit at cell
// centres, so total_mass is the midpoint rule over the rectangle.
//
// Gray map (P5, maxval 255): gray = clamp(round(127.5 + 127.5 * v * pi * hbar)),
// so zero is mid-gray and +-1/(pi hbar), the Wigner bound, map to 255 and 0.
// Negative-mask PGMs are 255 where v < 0 and 0 elsewhere.

#include <string>
#include <vector>

#include "groenewold/model.hpp"
#include "groenewold/states.hpp"

namespace groenewold {

struct PhaseGrid {
  double q_min = -4.0;
  double q_max = 4.0;
  double p_min = -4.0;
  double p_max = 4.0;
  int nq = 256;
  int np = 256;

  double dq() const { return (q_max - q_min) / nq; }
  double dp() const { return (p_max - p_min) / np; }
  double q(int i) const { return q_min + (i + 0.5) * dq(); }
  double p(int j) const { return p_min + (j + 0.5) * dp(); }
  void validate() const;
};

struct PhaseField {
  PhaseGrid grid;
  double hbar = 1.0;
  std::vector<double> values;        // values[j * nq + i] at (q(i), p(j))
  std::vector<unsigned char> negative_mask;
  double total_mass = 0.0;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nq + i]; }
  bool any_negative() const;
  double boundary_mass() const;      // mass in the outermost ring of cells
};

// Fills mask and mass from values.
void finalize_field(PhaseField& field);

// W = Re sum G_nm W(|n><m|) / (2 pi hbar)
PhaseField wigner_field(const CMatrix& g, const ModelSpec& model, const PhaseGrid& grid);

unsigned char gray_level(double value, double hbar);

void write_pgm(const PhaseField& field, const std::string& path);
void write_mask_pgm(const PhaseField& field, const std::string& path);
void write_field_csv(const PhaseField& field, const std::string& path,
                     const std::vector<std::string>& header_lines);

}  // namespace groenewold
