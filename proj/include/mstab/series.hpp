#pragma once

// Truncated series evaluation of the random field
//
//   X(t, u) = b(u) C_a^(1/a) sum_i gamma_i Gamma_i^(-1/a) r(V_i)^(1/a) f(t, u, V_i),  a = alpha(u),
//
// and of the multistable process Y(t) = X(t, t). On the finite space r is the
// constant m(E) = T, so one code path covers both representations.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mstab/errors.hpp"
#include "mstab/kernels.hpp"
#include "mstab/measure.hpp"
#include "mstab/parallel.hpp"
#include "mstab/param_fn.hpp"
#include "mstab/rng.hpp"
#include "mstab/stable.hpp"

namespace mstab {

inline constexpr std::size_t kDefaultTerms = 10'000;

struct ProcessSpec {
  KernelSpec kernel = LevyCompact{};
  ParamFn alpha = ParamFn::constant(1.5);
  ParamFn b = ParamFn::constant(1.0);
  MeasureSpace measure = MeasureSpace::finite(1.0);
  std::size_t n_terms = kDefaultTerms;
  std::uint64_t seed = 0;
};

/// Everything wrong with `spec`, empty when it is usable.
inline std::vector<std::string> process_violations(const ProcessSpec& spec) {
  auto out = admissible_check(spec.kernel, spec.alpha).violations;
  if (spec.b.range().lo < 0.0) out.push_back("b must be non-negative");
  if (spec.n_terms < 1) out.push_back("n_terms must be at least 1");
  if (spec.measure.name() != measure_for(spec.kernel).name())
    out.push_back("measure " + spec.measure.name() + " does not match kernel " +
                  kernel_name(spec.kernel));
  return out;
}

inline void validate(const ProcessSpec& spec) {
  const auto v = process_violations(spec);
  if (v.empty()) return;
  std::string msg = "invalid process:";
  for (const auto& s : v) msg += " " + s + ";";
  throw DomainError(msg);
}

/// Builds a spec with the sampling space its kernel requires, then validates it.
inline ProcessSpec make_process(KernelSpec kernel, ParamFn alpha, ParamFn b,
                                std::size_t n_terms = kDefaultTerms, std::uint64_t seed = 0) {
  ProcessSpec spec{kernel, alpha, b, measure_for(kernel), n_terms, seed};
  validate(spec);
  return spec;
}

/// Per-term log(r(V_i) / Gamma_i), computed once per draw.
class PreparedDraw {
 public:
  PreparedDraw(const SeriesDraw& draw, const MeasureSpace& ms) : draw_(&draw) {
    log_weight_.resize(draw.size());
    for (std::size_t i = 0; i < draw.size(); ++i)
      log_weight_[i] = std::log(r_of(ms, draw.points[i])) - std::log(draw.gammas[i]);
  }

  const SeriesDraw& draw() const { return *draw_; }
  std::span<const double> log_weight() const { return log_weight_; }

  /// r(V_i)^(1/alpha) Gamma_i^(-1/alpha) for every term.
  void weights(double alpha, std::vector<double>& out) const {
    out.resize(log_weight_.size());
    const double inv = 1.0 / alpha;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_weight_[i] * inv);
  }

 private:
  const SeriesDraw* draw_;
  std::vector<double> log_weight_;
};

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct FieldEval {
  double value = 0.0;
  double tail = 0.0;
};

/// X(t, u) and its truncation diagnostic from precomputed term weights.
inline FieldEval evaluate(const ProcessSpec& spec, const PreparedDraw& pd,
                          std::span<const double> weights, double t, double u) {
  const double a = spec.alpha(u);
  const double prefactor = spec.b(u) * std::pow(c_alpha(a), 1.0 / a);
  if (prefactor == 0.0) return {};

  const SeriesDraw& d = pd.draw();
  return with_kernel(spec.kernel, spec.alpha, t, u, [&](const auto& f) {
    CompensatedSum sum;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double fx = f(d.points[i]);
      if (fx == 0.0) continue;
      if (!std::isfinite(fx))
        throw DegenerateDraw(i, "singular kernel hit at term " + std::to_string(i));
      const double g = weights[i] * fx;
      sum.add(d.signs[i] > 0 ? g : -g);
      sum_sq += g * g;
    }
    const double value = prefactor * sum.value();
    if (!std::isfinite(value))
      throw DegenerateDraw(d.size(), "non-finite series sum");

    // Remainder sum_{i>N} is a signed sum; its variance given Gamma_N is
    // E[g^2] * int_{Gamma_N}^inf y^(-2/a) dy.
    const double n = static_cast<double>(d.size());
    const double gamma_n = d.gammas.back();
    const double tail_var =
        std::pow(gamma_n, 1.0 - 2.0 / a) / (2.0 / a - 1.0) * (sum_sq / n);
    return FieldEval{value, std::abs(prefactor) * std::sqrt(tail_var)};
  });
}

inline FieldEval evaluate(const ProcessSpec& spec, const PreparedDraw& pd, double t, double u) {
  std::vector<double> w;
  pd.weights(spec.alpha(u), w);
  return evaluate(spec, pd, w, t, u);
}

}  // namespace detail

/// Truncated X(t, u) for one draw.
inline double field_value(const ProcessSpec& spec, const SeriesDraw& draw, double t, double u) {
  return detail::evaluate(spec, PreparedDraw(draw, spec.measure), t, u).value;
}

/// Heuristic size of the omitted terms sum_{i > N} at (t, t): the standard
/// deviation of the remainder given Gamma_N, with E[g^2] estimated from the
/// drawn terms. A diagnostic, not a bound.
inline double tail_estimate(const ProcessSpec& spec, const SeriesDraw& draw, double t) {
  return detail::evaluate(spec, PreparedDraw(draw, spec.measure), t, t).tail;
}

struct PathResult {
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t n_terms = 0;
  std::uint64_t seed = 0;
  std::vector<double> tail_bound;
};

inline void check_grid(const ProcessSpec& spec, std::span<const double> grid) {
  const Range dom = time_domain(spec.kernel);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= dom.lo && grid[k] <= dom.hi))
      throw DomainError("time " + std::to_string(grid[k]) + " outside the kernel's domain");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw DomainError("time grid must be increasing");
  }
}

/// Y(t) = X(t, t) along `grid` for the single draw seeded by spec.seed.
/// A degenerate draw aborts the path.
inline PathResult diagonal_path(const ProcessSpec& spec, std::span<const double> grid,
                                unsigned threads = 1) {
  validate(spec);
  check_grid(spec, grid);
  PathResult out;
  out.grid.assign(grid.begin(), grid.end());
  out.n_terms = spec.n_terms;
  out.seed = spec.seed;
  out.values.resize(grid.size());
  out.tail_bound.resize(grid.size());
  if (grid.empty()) return out;

  const SeriesDraw draw = draw_series(spec.measure, spec.n_terms, spec.seed);
  const PreparedDraw pd(draw, spec.measure);
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const auto e = detail::evaluate(spec, pd, grid[k], grid[k]);
    out.values[k] = e.value;
    out.tail_bound[k] = e.tail;
  });
  return out;
}

/// Joint samples (Y(t_1), ..., Y(t_m)) over independent paths, row-major.
struct JointSample {
  std::size_t n_paths = 0;
  std::size_t m = 0;
  std::vector<double> values;
  std::vector<double> tails;
  std::size_t redraws = 0;

  double at(std::size_t path, std::size_t j) const { return values[path * m + j]; }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(n_paths);
    for (std::size_t k = 0; k < n_paths; ++k) c[k] = at(k, j);
    return c;
  }
};

/// Allowed share of re-drawn paths before sampling is declared broken.
inline constexpr double kMaxRedrawShare = 1e-3;
inline constexpr std::uint64_t kMaxAttemptsPerPath = 8;

/// Seed of the draw used for path `index` of a Monte Carlo sample.
inline std::uint64_t marginal_path_seed(std::uint64_t seed, std::size_t index,
                                        std::uint64_t attempt = 0) {
  return rng::path_seed(seed, index, attempt);
}

inline JointSample sample_joint(const ProcessSpec& spec, std::span<const double> times,
                                std::size_t n_paths, std::uint64_t seed, unsigned threads = 1) {
  validate(spec);
  if (n_paths < 1) throw DomainError("need at least one path");
  if (times.empty()) throw DomainError("need at least one time");
  const Range dom = time_domain(spec.kernel);
  for (double t : times)
    if (!(t >= dom.lo && t <= dom.hi)) throw DomainError("time outside the kernel's domain");

  JointSample out;
  out.n_paths = n_paths;
  out.m = times.size();
  out.values.resize(n_paths * out.m);
  out.tails.resize(n_paths * out.m);
  std::vector<std::uint8_t> attempts(n_paths, 0);

  parallel_for(n_paths, threads, [&](std::size_t k) {
    std::vector<double> w;
    for (std::uint64_t attempt = 0;; ++attempt) {
      try {
        const SeriesDraw draw =
            draw_series(spec.measure, spec.n_terms, marginal_path_seed(seed, k, attempt));
        const PreparedDraw pd(draw, spec.measure);
        double last_alpha = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < times.size(); ++j) {
          const double a = spec.alpha(times[j]);
          if (a != last_alpha) {
            pd.weights(a, w);
            last_alpha = a;
          }
          const auto e = detail::evaluate(spec, pd, w, times[j], times[j]);
          out.values[k * out.m + j] = e.value;
          out.tails[k * out.m + j] = e.tail;
        }
        attempts[k] = static_cast<std::uint8_t>(attempt);
        return;
      } catch (const DegenerateDraw&) {
        if (attempt + 1 >= kMaxAttemptsPerPath) throw;
      }
    }
  });

  for (auto a : attempts) out.redraws += a;
  if (static_cast<double>(out.redraws) > kMaxRedrawShare * static_cast<double>(n_paths))
    throw DegenerateDraw(0, std::to_string(out.redraws) + " degenerate draws in " +
                                std::to_string(n_paths) + " paths; kernel or measure is broken");
  return out;
}

struct MarginalSample {
  std::vector<double> values;
  std::size_t redraws = 0;
};

/// Y(t) over `n_paths` independent draws seeded by (seed, path index).
inline MarginalSample sample_marginal(const ProcessSpec& spec, double t, std::size_t n_paths,
                                      std::uint64_t seed, unsigned threads = 1) {
  const double times[1] = {t};
  JointSample js = sample_joint(spec, times, n_paths, seed, threads);
  return MarginalSample{std::move(js.values), js.redraws};
}

}  // namespace mstab
