#pragma once

// JSON job configuration.
//
// {
//   "command": "synth",
//   "seed": 42,
//   "process": {"kernel": "levy_compact", "T": 1,
//               "alpha": {"type": "linear", "from": 1.02, "to": 1.98, "t0": 0, "t1": 1},
//               "b": 1},
//   "grid": {"start": 0, "end": 1, "points": 2000},
//   "mc": {"n_paths": 20000, "n_terms": 10000, "threads": 1},
//   "output": {"csv": "path.csv", "svg": "path.svg", "json": "report.json"},
//   "verify": {...}, "scaling": {...}, "audit": {...}
// }
//
// A parameter function is a number (constant) or an object with "type" of
// constant {value}, linear {from, to, t0, t1} or sine {min, max, period, phase}.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mstab/errors.hpp"
#include "mstab/kernels.hpp"
#include "mstab/param_fn.hpp"
#include "mstab/series.hpp"

namespace mstab {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> c{"synth", "verify-stable", "verify-cf", "scaling", "audit"};
  return c;
}

struct GridSpec {
  double start = 0.0;
  double end = 1.0;
  std::size_t points = 2000;

  std::vector<double> values() const {
    std::vector<double> g(points);
    if (points == 1) {
      g[0] = start;
      return g;
    }
    const double step = (end - start) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = start + step * static_cast<double>(k);
    g.back() = end;
    return g;
  }
};

struct McSettings {
  std::size_t n_paths = 20000;
  unsigned threads = 1;
};

struct OutputSettings {
  std::string csv = "path.csv";
  std::string svg = "path.svg";
  std::string json = "report.json";
  bool write_svg = true;
};

struct VerifySettings {
  std::vector<double> times{1.0};
  std::vector<std::vector<double>> thetas{{1.0}};
  std::optional<double> band;
  double quad_tol = 1e-6;
};

struct ScalingSettings {
  double u = 0.5;
  std::optional<double> h;
  std::vector<double> radii{0.2, 0.1, 0.05};
  double t_probe = 1.0;
  std::optional<double> max_ks;
  std::optional<double> exponent_tolerance;
};

struct AuditSettings {
  std::vector<double> u{0.5};
  double epsilon = 0.05;
  double quad_tol = 1e-4;
};

struct JobConfig {
  std::string command;
  ProcessSpec process;
  GridSpec grid;
  McSettings mc;
  OutputSettings output;
  VerifySettings verify;
  ScalingSettings scaling;
  AuditSettings audit;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

inline double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

inline std::size_t count(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number_unsigned()) throw ConfigError(where + "." + key + " must be a non-negative integer");
  return j.at(key).get<std::size_t>();
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(where + " must be a number or an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + " must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

inline ParamFn parse_param(const json& j, const std::string& where) {
  if (j.is_number()) return ParamFn::constant(j.get<double>());
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ConfigError(where + " must be a number or an object with a 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") {
    reject_unknown(j, {"type", "value"}, where);
    return Constant{number(j, "value", where)};
  }
  if (type == "linear") {
    reject_unknown(j, {"type", "from", "to", "t0", "t1"}, where);
    return Linear{number(j, "from", where), number(j, "to", where), number_or(j, "t0", 0.0, where),
                  number_or(j, "t1", 1.0, where)};
  }
  if (type == "sine") {
    reject_unknown(j, {"type", "min", "max", "period", "phase"}, where);
    return Sine{number(j, "min", where), number(j, "max", where), number_or(j, "period", 1.0, where),
                number_or(j, "phase", 0.0, where)};
  }
  throw ConfigError("unknown parameter function type '" + type + "' in " + where);
}

inline KernelSpec parse_kernel(const json& p) {
  if (!p.contains("kernel") || !p.at("kernel").is_string()) throw ConfigError("process needs a 'kernel' name");
  const auto name = p.at("kernel").get<std::string>();
  if (name == "levy_compact") return LevyCompact{number_or(p, "T", 1.0, "process")};
  if (name == "levy_half_line") return LevyHalfLine{};
  if (name == "log_fractional") return LogFractional{};
  if (name == "linear_mmm") {
    if (!p.contains("h")) throw ConfigError("linear_mmm needs an 'h' parameter function");
    return LinearMMM{parse_param(p.at("h"), "process.h")};
  }
  if (name == "reverse_ou") return ReverseOU{number_or(p, "lambda", 1.0, "process")};
  throw ConfigError("unknown kernel '" + name + "'");
}

}  // namespace detail

/// Parses and validates a job. Inadmissible processes raise DomainError.
inline JobConfig parse_config(const nlohmann::json& j) {
  using detail::count;
  using detail::number;
  using detail::number_or;
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  detail::reject_unknown(j, {"command", "seed", "process", "grid", "mc", "output", "verify", "scaling", "audit"},
                         "configuration");
  JobConfig c;
  if (j.contains("command")) {
    if (!j.at("command").is_string()) throw ConfigError("'command' must be a string");
    c.command = j.at("command").get<std::string>();
  }

  if (!j.contains("process")) throw ConfigError("configuration needs a 'process' block");
  const auto& p = j.at("process");
  detail::reject_unknown(p, {"kernel", "T", "lambda", "alpha", "b", "h"}, "process");
  const KernelSpec kernel = detail::parse_kernel(p);
  if (!p.contains("alpha")) throw ConfigError("process needs 'alpha'");
  const ParamFn alpha = detail::parse_param(p.at("alpha"), "process.alpha");
  const ParamFn b = p.contains("b") ? detail::parse_param(p.at("b"), "process.b") : ParamFn::constant(1.0);
  c.process = ProcessSpec{kernel, alpha, b, measure_for(kernel), kDefaultTerms, 0};

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.process.seed = j.at("seed").get<std::uint64_t>();
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown(g, {"start", "end", "points"}, "grid");
    c.grid.start = number_or(g, "start", c.grid.start, "grid");
    c.grid.end = number_or(g, "end", c.grid.end, "grid");
    if (g.contains("points")) c.grid.points = count(g, "points", "grid");
    if (c.grid.points < 1) throw ConfigError("grid needs at least one point");
    if (c.grid.points > 1 && !(c.grid.end > c.grid.start)) throw ConfigError("grid needs end > start");
  }

  if (j.contains("mc")) {
    const auto& m = j.at("mc");
    detail::reject_unknown(m, {"n_paths", "n_terms", "threads"}, "mc");
    if (m.contains("n_paths")) c.mc.n_paths = count(m, "n_paths", "mc");
    if (m.contains("n_terms")) c.process.n_terms = count(m, "n_terms", "mc");
    if (m.contains("threads")) c.mc.threads = static_cast<unsigned>(count(m, "threads", "mc"));
    if (c.mc.n_paths < 1) throw ConfigError("mc.n_paths must be at least 1");
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::reject_unknown(o, {"csv", "svg", "json"}, "output");
    auto str = [&](const char* k, std::string& dst) {
      if (!o.contains(k)) return;
      if (o.at(k).is_null()) {
        dst.clear();
        return;
      }
      if (!o.at(k).is_string()) throw ConfigError(std::string("output.") + k + " must be a path");
      dst = o.at(k).get<std::string>();
    };
    str("csv", c.output.csv);
    str("svg", c.output.svg);
    str("json", c.output.json);
    c.output.write_svg = !c.output.svg.empty();
  }

  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    detail::reject_unknown(v, {"t", "times", "thetas", "band", "quad_tol"}, "verify");
    if (v.contains("t")) c.verify.times = {number(v, "t", "verify")};
    if (v.contains("times")) c.verify.times = detail::numbers(v.at("times"), "verify.times");
    if (v.contains("thetas")) {
      c.verify.thetas.clear();
      const auto& th = v.at("thetas");
      if (!th.is_array() || th.empty()) throw ConfigError("verify.thetas must be a non-empty array");
      for (const auto& q : th) c.verify.thetas.push_back(detail::numbers(q, "verify.thetas"));
    }
    if (v.contains("band")) c.verify.band = number(v, "band", "verify");
    c.verify.quad_tol = number_or(v, "quad_tol", c.verify.quad_tol, "verify");
    for (const auto& q : c.verify.thetas)
      if (q.size() != c.verify.times.size())
        throw ConfigError("each verify.thetas entry needs one value per verify time");
  }

  if (j.contains("scaling")) {
    const auto& s = j.at("scaling");
    detail::reject_unknown(s, {"u", "h", "radii", "t_probe", "max_ks", "exponent_tolerance"}, "scaling");
    c.scaling.u = number_or(s, "u", c.scaling.u, "scaling");
    if (s.contains("h")) c.scaling.h = number(s, "h", "scaling");
    if (s.contains("radii")) c.scaling.radii = detail::numbers(s.at("radii"), "scaling.radii");
    c.scaling.t_probe = number_or(s, "t_probe", c.scaling.t_probe, "scaling");
    if (s.contains("max_ks")) c.scaling.max_ks = number(s, "max_ks", "scaling");
    if (s.contains("exponent_tolerance"))
      c.scaling.exponent_tolerance = number(s, "exponent_tolerance", "scaling");
  }

  if (j.contains("audit")) {
    const auto& a = j.at("audit");
    detail::reject_unknown(a, {"u", "epsilon", "quad_tol"}, "audit");
    if (a.contains("u")) c.audit.u = detail::numbers(a.at("u"), "audit.u");
    c.audit.epsilon = number_or(a, "epsilon", c.audit.epsilon, "audit");
    c.audit.quad_tol = number_or(a, "quad_tol", c.audit.quad_tol, "audit");
  }

  validate(c.process);
  return c;
}

inline JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace mstab
