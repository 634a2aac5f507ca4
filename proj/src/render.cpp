#include "groenewold/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/parallel.hpp"

namespace groenewold {

void PhaseGrid::validate() const {
  if (nq < 1 || np < 1) throw InvalidArgument("grid: sizes must be positive");
  if (!(q_max > q_min) || !(p_max > p_min)) throw InvalidArgument("grid: empty extent");
}

bool PhaseField::any_negative() const {
  for (auto m : negative_mask) {
    if (m) return true;
  }
  return false;
}

double PhaseField::boundary_mass() const {
  double mass = 0.0;
  for (int j = 0; j < grid.np; ++j) {
    for (int i = 0; i < grid.nq; ++i) {
      if (i == 0 || j == 0 || i == grid.nq - 1 || j == grid.np - 1) mass += std::abs(at(i, j));
    }
  }
  return mass * grid.dq() * grid.dp();
}

void finalize_field(PhaseField& field) {
  field.negative_mask.resize(field.values.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    field.negative_mask[k] = field.values[k] < 0.0 ? 1 : 0;
    sum += field.values[k];
  }
  field.total_mass = sum * field.grid.dq() * field.grid.dp();
}

PhaseField wigner_field(const CMatrix& g, const ModelSpec& model, const PhaseGrid& grid) {
  grid.validate();
  const int N = static_cast<int>(g.rows());
  PhaseField field{grid, model.hbar, {}, {}, 0.0};
  field.values.assign(static_cast<std::size_t>(grid.nq) * grid.np, 0.0);

  // Diagonals that carry nothing are skipped.
  const double scale = mathkit::max_abs(g);
  std::vector<int> active;
  for (int nu = 0; nu < N; ++nu) {
    double largest = 0.0;
    for (int m = 0; m + nu < N; ++m) {
      largest = std::max({largest, std::abs(g(m + nu, m)), std::abs(g(m, m + nu))});
    }
    if (largest > 1e-16 * scale) active.push_back(nu);
  }

  const double norm = 1.0 / (2.0 * kPi * model.hbar);
  parallel_for(grid.np, [&](std::size_t row) {
    const int j = static_cast<int>(row);
    std::vector<double> ell(N);
    for (int i = 0; i < grid.nq; ++i) {
      const Complex alpha = alpha_of(grid.q(i), grid.p(j), model);
      const long double y = 4.0L * std::norm(alpha);
      const double phi = std::arg(alpha);
      double value = 0.0;
      for (int nu : active) {
        const int length = N - nu;
        mathkit::laguerre_functions(nu, y, std::span<double>(ell.data(), length));
        Complex lower = 0.0;
        Complex upper = 0.0;
        for (int m = 0; m < length; ++m) {
          const double r = (m % 2) ? -ell[m] : ell[m];
          lower += g(m + nu, m) * r;
          if (nu > 0) upper += g(m, m + nu) * r;
        }
        if (nu == 0) {
          value += 2.0 * lower.real();
        } else {
          // W(|m+nu><m|) = e^{-i nu phi} R, W(|m><m+nu|) = e^{i nu phi} R
          value += 2.0 * (std::polar(1.0, -nu * phi) * lower + std::polar(1.0, nu * phi) * upper)
                             .real();
        }
      }
      field.values[static_cast<std::size_t>(j) * grid.nq + i] = norm * value;
    }
  });
  finalize_field(field);
  return field;
}

unsigned char gray_level(double value, double hbar) {
  const double g = std::round(127.5 + 127.5 * value * kPi * hbar);
  return static_cast<unsigned char>(std::clamp(g, 0.0, 255.0));
}

namespace {

void write_p5(const PhaseField& field, const std::string& path,
              const std::function<unsigned char(std::size_t)>& level) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "P5\n" << field.grid.nq << ' ' << field.grid.np << "\n255\n";
  // Top row is p_max.
  for (int j = field.grid.np - 1; j >= 0; --j) {
    for (int i = 0; i < field.grid.nq; ++i) {
      out.put(static_cast<char>(level(static_cast<std::size_t>(j) * field.grid.nq + i)));
    }
  }
  if (!out) throw Error("failed writing " + path);
}

}  // namespace

void write_pgm(const PhaseField& field, const std::string& path) {
  write_p5(field, path, [&](std::size_t k) { return gray_level(field.values[k], field.hbar); });
}

void write_mask_pgm(const PhaseField& field, const std::string& path) {
  write_p5(field, path,
           [&](std::size_t k) { return static_cast<unsigned char>(field.negative_mask[k] ? 255 : 0); });
}

void write_field_csv(const PhaseField& field, const std::string& path,
                     const std::vector<std::string>& header_lines) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  for (const auto& line : header_lines) std::fprintf(f, "# %s\n", line.c_str());
  std::fprintf(f, "q,p,value\n");
  for (int j = 0; j < field.grid.np; ++j) {
    for (int i = 0; i < field.grid.nq; ++i) {
      std::fprintf(f, "%.17g,%.17g,%.17g\n", field.grid.q(i), field.grid.p(j), field.at(i, j));
    }
  }
  if (std::fclose(f) != 0) throw Error("failed writing " + path);
}

}  // namespace groenewold
