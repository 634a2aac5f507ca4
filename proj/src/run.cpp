#include "groenewold/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "groenewold/error.hpp"
#include "groenewold/evolve.hpp"
#include "groenewold/observables.hpp"
#include "groenewold/parallel.hpp"

namespace groenewold {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> provenance_header(const ExperimentConfig& config) {
  const ModelSpec& m = config.model;
  std::string b;
  for (double x : m.b) b += (b.empty() ? "" : " ") + format_double(x);
  std::vector<std::string> lines;
  lines.push_back("groenewold-lab " GROENEWOLD_VERSION);
  lines.push_back("config " + config.name + " fnv1a=" + config.hash);
  lines.push_back("model K=" + std::to_string(m.K) + " b=[" + b + "] mu=" + format_double(m.mu) +
                  " hbar=" + format_double(m.hbar) + " m=" + format_double(m.m) +
                  " omega=" + format_double(m.omega) + " E=" + format_double(m.E));
  lines.push_back("state kappa=" + format_double(config.state.kappa) +
                  " alpha0=" + format_double(config.state.alpha0.real()) + "," +
                  format_double(config.state.alpha0.imag()) +
                  (config.coherent ? " coherent" : " groenewold"));
  lines.push_back("truncation N=" + std::to_string(config.truncation.N) +
                  " guard=" + std::to_string(config.truncation.guard) +
                  " tail_tol=" + format_double(config.truncation.tail_tol));
  lines.push_back("tolerances ladder=1e-8 unitary=1e-10 nu0=1e-12 quadrature=1e-9");
  return lines;
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::vector<std::string>& header, const std::string& columns) {
    for (const auto& line : header) out_ << "# " << line << '\n';
    out_ << columns << '\n';
  }

  CsvFile& row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    return *this;
  }

  void write(const fs::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << out_.str();
    if (!f) throw Error("failed writing " + path.string());
  }

 private:
  std::ostringstream out_;
};

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

// Cross-validation over nu = 0..nu_max; false when a gated row fails.
bool validate(const ExperimentConfig& cfg, const GeneratorOptions& gopt,
              const std::vector<std::string>& header, const fs::path& dir, RunResult& result) {
  const int top = std::min(cfg.validate_nu_max, cfg.truncation.N - 1);
  std::vector<ValidationReport> reports(top + 1);
  parallel_for(reports.size(), [&](std::size_t nu) {
    reports[nu] = cross_validate(static_cast<int>(nu), cfg.model, cfg.truncation.N, gopt);
  });
  CsvFile csv(header, "check,nu,residual,tolerance,gate,passed");
  ValidationReport all;
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      csv.row({row.check, std::to_string(row.nu), format_double(row.residual),
               format_double(row.tolerance), row.gate ? "1" : "0", row.passed() ? "1" : "0"});
      all.rows.push_back(row);
    }
  }
  csv.write(dir / "validate.csv");
  result.files.push_back((dir / "validate.csv").string());
  if (all.passed()) return true;
  const auto* w = all.worst();
  result.message = "validation failed: " + w->check + " (nu=" + std::to_string(w->nu) +
                   ") residual " + format_double(w->residual) + " > " +
                   format_double(w->tolerance);
  return false;
}

void write_field(const PhaseField& field, const std::string& stem,
                 std::vector<std::string> header, const fs::path& dir, RunResult& result) {
  header.push_back("field " + stem + " hbar=" + format_double(field.hbar) +
                   " mass=" + format_double(field.total_mass) +
                   " gray=clamp(round(127.5+127.5*value*pi*hbar))");
  const fs::path pgm = dir / (stem + ".pgm");
  const fs::path mask = dir / (stem + "_mask.pgm");
  const fs::path csv = dir / (stem + ".csv");
  write_pgm(field, pgm.string());
  write_mask_pgm(field, mask.string());
  write_field_csv(field, csv.string(), header);
  for (const auto& p : {pgm, mask, csv}) result.files.push_back(p.string());
}

void execute(const ExperimentConfig& cfg, const RunOptions& opt, RunResult& result) {
  auto say = [&](const std::string& s) {
    if (opt.log) *opt.log << s << '\n';
  };
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  const auto header = provenance_header(cfg);
  const int N = cfg.truncation.N;
  GeneratorOptions gopt;
  gopt.guard = cfg.truncation.guard;

  if (cfg.validate || opt.validate_only) {
    say("validating generators for nu <= " + std::to_string(std::min(cfg.validate_nu_max, N - 1)));
    if (!validate(cfg, gopt, header, dir, result)) {
      result.exit_code = kExitValidation;
      return;
    }
  }
  if (opt.validate_only) return;

  const GroenewoldMatrix g0 = cfg.coherent ? coherent_density(cfg.state.alpha0, cfg.truncation)
                                           : groenewold_from_gaussian(cfg.state, cfg.truncation);
  check_tail(g0, cfg.truncation.tail_tol);

  const std::vector<double> grid_times = cfg.times();
  std::vector<double> all_times = grid_times;
  const bool wigner = cfg.field && cfg.field->wigner;
  if (wigner) all_times.insert(all_times.end(), cfg.field->times.begin(), cfg.field->times.end());
  std::sort(all_times.begin(), all_times.end());
  all_times.erase(std::unique(all_times.begin(), all_times.end()), all_times.end());
  auto snapshot_index = [&](double t) {
    return static_cast<std::size_t>(std::lower_bound(all_times.begin(), all_times.end(), t) -
                                    all_times.begin());
  };

  const int k = cfg.spectrum_k;
  std::string spectrum_columns = "t,dynamics";
  for (int i = 1; i <= k; ++i) spectrum_columns += ",lambda_max" + std::to_string(i);
  for (int i = 1; i <= k; ++i) spectrum_columns += ",lambda_min" + std::to_string(i);
  CsvFile moments_csv(header,
                      "t,dynamics,re_alpha,im_alpha,re_alpha2,im_alpha2,abs2,q,p,dq,dp,dq_paper,"
                      "dp_paper,trace_err,purity");
  CsvFile spectrum_csv(header, spectrum_columns);
  CsvFile negativity_csv(header, "t,dynamics,sqneg");

  const bool need_matrices = cfg.moments || k > 0 || cfg.negativity || wigner;
  const GeneratorFactory factory(cfg.model, N, gopt);
  for (const auto& dyn : cfg.dynamics) {
    if (!need_matrices) break;
    say("evolving " + dyn.name());
    const Trajectory traj = evolve(g0, dyn, factory, all_times);
    const std::string name = dyn.name();

    const std::size_t count = grid_times.size();
    std::vector<MomentRecord> records(count);
    std::vector<SpectrumExtremes> spectra(count);
    std::vector<double> sqneg(count);
    std::vector<double> trace(count);
    std::vector<double> pur(count);
    parallel_for(count, [&](std::size_t i) {
      const CMatrix& g = traj.snapshots[snapshot_index(grid_times[i])].entries;
      records[i] = moments(g, cfg.model, grid_times[i]);
      trace[i] = trace_error(g);
      pur[i] = purity(g);
      if (k > 0) spectra[i] = spectrum_extremes(g, k);
      if (cfg.negativity) sqneg[i] = squared_negativity(g);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const std::string t = format_double(grid_times[i]);
      const auto& r = records[i];
      moments_csv.row({t, name, format_double(r.mean_alpha.real()), format_double(r.mean_alpha.imag()),
                       format_double(r.alpha2.real()), format_double(r.alpha2.imag()),
                       format_double(r.abs2), format_double(r.mean_q), format_double(r.mean_p),
                       format_double(r.dq), format_double(r.dp), format_double(r.dq_paper),
                       format_double(r.dp_paper), format_double(trace[i]), format_double(pur[i])});
      if (k > 0) {
        std::vector<std::string> cells{t, name};
        for (int j = 0; j < k; ++j) {
          cells.push_back(j < static_cast<int>(spectra[i].top.size())
                              ? format_double(spectra[i].top[j]) : "nan");
        }
        for (int j = 0; j < k; ++j) {
          cells.push_back(j < static_cast<int>(spectra[i].bottom.size())
                              ? format_double(spectra[i].bottom[j]) : "nan");
        }
        spectrum_csv.row(cells);
      }
      if (cfg.negativity) negativity_csv.row({t, name, format_double(sqneg[i])});
    }

    if (wigner) {
      for (double t : cfg.field->times) {
        const auto& g = traj.snapshots[snapshot_index(t)].entries;
        write_field(wigner_field(g, cfg.model, cfg.field->grid), "field_" + name + "_" + time_tag(t),
                    header, dir, result);
      }
    }
  }

  if (cfg.moments && need_matrices) {
    moments_csv.write(dir / "moments.csv");
    result.files.push_back((dir / "moments.csv").string());
  }
  if (k > 0) {
    spectrum_csv.write(dir / "spectrum.csv");
    result.files.push_back((dir / "spectrum.csv").string());
  }
  if (cfg.negativity) {
    negativity_csv.write(dir / "negativity.csv");
    result.files.push_back((dir / "negativity.csv").string());
  }
  if (cfg.field && cfg.field->whorl) {
    for (double t : cfg.field->times) {
      write_field(whorl_field(cfg.state, cfg.model, t, cfg.field->grid),
                  "field_whorl_" + time_tag(t), header, dir, result);
    }
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  try {
    execute(config, options, result);
  } catch (const ValidationFailed& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const TailMassExceeded& e) {
    result.exit_code = kExitNumerics;
    result.message = e.what();
  } catch (const GuardInsufficient& e) {
    result.exit_code = kExitNumerics;
    result.message = e.what();
  } catch (const QuadratureNotConverged& e) {
    result.exit_code = kExitNumerics;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
  }
  if (options.log && !result.message.empty()) *options.log << result.message << '\n';
  return result;
}

}  // namespace groenewold
