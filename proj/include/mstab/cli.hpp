#pragma once

// `mstab <command> --config <file> [--seed N] [--out DIR]`
//
// Exit status: 0 success, 2 invalid input or unwritable output, 3 a
// statistical check failed, 4 a numerical-accuracy or degenerate-draw error.

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mstab/config.hpp"
#include "mstab/errors.hpp"
#include "mstab/io.hpp"
#include "mstab/series.hpp"
#include "mstab/stable.hpp"
#include "mstab/verification.hpp"

namespace mstab::cli {

enum ExitCode : int { kOk = 0, kInvalid = 2, kStatFailure = 3, kNumericFailure = 4 };

using json = nlohmann::json;

struct Job {
  JobConfig config;
  std::filesystem::path out_dir;

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    if (path.is_absolute() || out_dir.empty()) return path;
    return out_dir / path;
  }

  json header() const {
    const auto& s = config.process;
    return json{{"command", config.command},
                {"kernel", kernel_name(s.kernel)},
                {"seed", s.seed},
                {"n_terms", s.n_terms}};
  }
};

/// Scale of the marginal Y(t): b(t) ||f(t, t, .)||_alpha(t).
inline double marginal_scale(const ProcessSpec& spec, double t, double tol) {
  auto f = [&](double x) {
    return with_kernel(spec.kernel, spec.alpha, t, t, [x](const auto& k) { return k(x); });
  };
  return spec.b(t) * f_alpha_norm(f, spec.alpha(t), spec.measure, tol, breakpoints(spec.kernel, t));
}

inline int run_synth(const Job& job, std::ostream& out) {
  const auto& c = job.config;
  const auto grid = c.grid.values();
  const PathResult path = diagonal_path(c.process, grid, c.mc.threads);
  const auto csv = job.resolve(c.output.csv);
  io::write_csv(csv, path.grid, path.values);
  out << "wrote " << csv.string() << " (" << path.values.size() << " rows)\n";
  if (c.output.write_svg) {
    const auto svg = job.resolve(c.output.svg);
    io::write_svg(svg, path.grid, path.values,
                  kernel_name(c.process.kernel) + ", seed " + std::to_string(c.process.seed) + ", " +
                      std::to_string(c.process.n_terms) + " terms");
    out << "wrote " << svg.string() << "\n";
  }
  return kOk;
}

inline int run_verify_stable(const Job& job, std::ostream& out) {
  const auto& c = job.config;
  if (c.verify.times.size() != 1) throw ConfigError("verify-stable takes a single time verify.t");
  const double t = c.verify.times.front();
  const std::size_t n = c.mc.n_paths;
  const auto series = sample_marginal(c.process, t, n, c.process.seed, c.mc.threads);
  const double a = c.process.alpha(t);
  const double scale = marginal_scale(c.process, t, c.verify.quad_tol);
  const auto oracle = stable_oracle_sample(StableParams(a, scale), n, c.process.seed);
  const KsResult ks = ks_two_sample(series.values, oracle);
  // Default band: the one-sample 99% KS value 1.63 / sqrt(n) plus a 0.01 truncation allowance.
  const double band = c.verify.band.value_or(1.63 / std::sqrt(static_cast<double>(n)) + 0.01);
  const bool pass = ks.statistic < band;

  json r = job.header();
  r["t"] = t;
  r["alpha"] = a;
  r["scale"] = scale;
  r["n_paths"] = n;
  r["redraws"] = series.redraws;
  r["ks_D"] = ks.statistic;
  r["ks_p"] = ks.p_value;
  r["band"] = band;
  r["pass"] = pass;
  const auto path = job.resolve(c.output.json);
  io::write_json(path, r);
  out << "KS D = " << ks.statistic << " (band " << band << "), wrote " << path.string() << "\n";
  return pass ? kOk : kStatFailure;
}

inline int run_verify_cf(const Job& job, std::ostream& out) {
  const auto& c = job.config;
  const std::size_t n = c.mc.n_paths;
  const JointSample js = sample_joint(c.process, c.verify.times, n, c.process.seed, c.mc.threads);
  const double band =
      c.verify.band.value_or(3.0 / std::sqrt(static_cast<double>(n)) + c.verify.quad_tol);

  json values = json::array(), bounds = json::array(), re = json::array(), im = json::array();
  double max_diff = 0.0;
  for (const auto& thetas : c.verify.thetas) {
    const CfQuery q{c.verify.times, thetas};
    const CfResult cf = fdd_cf(c.process, q, c.verify.quad_tol);
    const auto emp = empirical_cf(js, q);
    values.push_back(cf.value);
    bounds.push_back(cf.error_bound);
    re.push_back(emp.real());
    im.push_back(emp.imag());
    max_diff = std::max(max_diff, std::abs(emp.real() - cf.value));
  }
  const bool pass = max_diff <= band;

  json r = job.header();
  r["times"] = c.verify.times;
  r["thetas"] = c.verify.thetas;
  r["n_paths"] = n;
  r["quad_tol"] = c.verify.quad_tol;
  r["cf_value"] = values;
  r["cf_error_bound"] = bounds;
  r["empirical_re"] = re;
  r["empirical_im"] = im;
  r["max_abs_diff"] = max_diff;
  r["band"] = band;
  r["pass"] = pass;
  const auto path = job.resolve(c.output.json);
  io::write_json(path, r);
  out << "max |empirical - quadrature| = " << max_diff << " (band " << band << "), wrote "
      << path.string() << "\n";
  return pass ? kOk : kStatFailure;
}

/// Default scaling exponent: h(u) for the fractional kernel, 1/alpha(u) otherwise.
inline double default_exponent(const ProcessSpec& spec, double u) {
  if (const auto* m = std::get_if<LinearMMM>(&spec.kernel)) return m->h(u);
  return 1.0 / spec.alpha(u);
}

inline int run_scaling(const Job& job, std::ostream& out) {
  const auto& c = job.config;
  const auto& s = c.scaling;
  const double h = s.h.value_or(default_exponent(c.process, s.u));
  const ScalingReport rep =
      scaling_diagnostic(c.process, s.u, h, s.radii, s.t_probe, c.mc.n_paths, c.mc.threads);

  bool pass = true;
  if (s.max_ks)
    for (double d : rep.ks_by_radius) pass = pass && d < *s.max_ks;
  const double target = default_exponent(c.process, s.u);
  if (s.exponent_tolerance) pass = pass && std::abs(rep.fitted_exponent - target) <= *s.exponent_tolerance;

  json r = job.header();
  r.update(io::to_json(rep));
  r["target_exponent"] = target;
  r["pass"] = pass;
  r["note"] = "marginal KS agreement is necessary, not sufficient, for convergence of the finite-dimensional laws";
  const auto path = job.resolve(c.output.json);
  io::write_json(path, r);
  out << "fitted exponent " << rep.fitted_exponent << " (target " << target << "), wrote "
      << path.string() << "\n";
  return pass ? kOk : kStatFailure;
}

inline int run_audit(const Job& job, std::ostream& out) {
  const auto& c = job.config;
  json audits = json::array();
  bool pass = true;
  for (double u : c.audit.u) {
    const ConditionReport rep = condition_audit(c.process, u, c.audit.epsilon, c.audit.quad_tol);
    pass = pass && rep.all_required_finite();
    audits.push_back(io::to_json(rep));
  }
  json r = job.header();
  r["audits"] = audits;
  r["pass"] = pass;
  const auto path = job.resolve(c.output.json);
  io::write_json(path, r);
  out << (pass ? "all required conditions finite" : "some required condition diverges")
      << ", wrote " << path.string() << "\n";
  return pass ? kOk : kStatFailure;
}

inline int run_job(const Job& job, std::ostream& out) {
  const auto& cmd = job.config.command;
  if (cmd == "synth") return run_synth(job, out);
  if (cmd == "verify-stable") return run_verify_stable(job, out);
  if (cmd == "verify-cf") return run_verify_cf(job, out);
  if (cmd == "scaling") return run_scaling(job, out);
  if (cmd == "audit") return run_audit(job, out);
  throw ConfigError("unknown command '" + cmd + "'");
}

/// Parses the command line, runs the job and maps failures to exit codes.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesis and verification of multistable processes"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("command", command, "synth | verify-stable | verify-cf | scaling | audit")
      ->required()
      ->check(CLI::IsMember(job_commands()));
  app.add_option("--config", config_path, "JSON job file")->required();
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out_dir, "directory for relative output paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInvalid;
  }

  try {
    Job job{load_config(config_path), out_dir};
    if (!job.config.command.empty() && job.config.command != command)
      throw ConfigError("config is for '" + job.config.command + "', not '" + command + "'");
    job.config.command = command;
    if (seed) job.config.process.seed = *seed;
    return run_job(job, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kInvalid;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << " (estimate " << e.estimate() << ", bound "
        << e.error_bound() << ")\n";
    return kNumericFailure;
  } catch (const DegenerateDraw& e) {
    err << "degenerate draw: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const NonIntegrableKernel& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace mstab::cli
