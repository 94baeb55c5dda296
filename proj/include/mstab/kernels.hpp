#pragma once

// Kernel families f(t, u, x) of the multistable processes, each tied to the
// sampling space its series uses and to its admissible alpha window.

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "mstab/errors.hpp"
#include "mstab/measure.hpp"
#include "mstab/param_fn.hpp"

namespace mstab {

/// 1_[0,t](x) on [0, T], uniform sampling.
struct LevyCompact {
  double T = 1.0;
};
/// 1_[0,t](x) on the half line, dyadic blocks.
struct LevyHalfLine {};
/// log|t - x| - log|x|, zeta blocks.
struct LogFractional {};
/// |t - x|^(h(u) - 1/alpha(u)) - |x|^(h(u) - 1/alpha(u)), zeta blocks.
struct LinearMMM {
  ParamFn h;
};
/// exp(-lambda (x - t)) 1_[t,inf)(x), two-sided dyadic blocks.
struct ReverseOU {
  double lambda = 1.0;
};

using KernelSpec = std::variant<LevyCompact, LevyHalfLine, LogFractional, LinearMMM, ReverseOU>;

inline std::string kernel_name(const KernelSpec& k) {
  struct {
    std::string operator()(const LevyCompact&) const { return "levy_compact"; }
    std::string operator()(const LevyHalfLine&) const { return "levy_half_line"; }
    std::string operator()(const LogFractional&) const { return "log_fractional"; }
    std::string operator()(const LinearMMM&) const { return "linear_mmm"; }
    std::string operator()(const ReverseOU&) const { return "reverse_ou"; }
  } name;
  return std::visit(name, k);
}

inline MeasureSpace measure_for(const KernelSpec& k) {
  struct {
    MeasureSpace operator()(const LevyCompact& c) const { return MeasureSpace::finite(c.T); }
    MeasureSpace operator()(const LevyHalfLine&) const {
      return MeasureSpace::blocks(BlockPreset::half_line_dyadic);
    }
    MeasureSpace operator()(const LogFractional&) const {
      return MeasureSpace::blocks(BlockPreset::two_sided_zeta);
    }
    MeasureSpace operator()(const LinearMMM&) const {
      return MeasureSpace::blocks(BlockPreset::two_sided_zeta);
    }
    MeasureSpace operator()(const ReverseOU&) const {
      return MeasureSpace::blocks(BlockPreset::two_sided_dyadic);
    }
  } pick;
  return std::visit(pick, k);
}

/// Open interval that the range of alpha must lie in.
inline Range admissible_alpha(const KernelSpec& k) {
  return std::holds_alternative<LinearMMM>(k) ? Range{0.0, 2.0} : Range{1.0, 2.0};
}

/// Closed interval of admissible times t.
inline Range time_domain(const KernelSpec& k) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* c = std::get_if<LevyCompact>(&k)) return {0.0, c->T};
  if (std::holds_alternative<LevyHalfLine>(k)) return {0.0, inf};
  return {-inf, inf};
}

/// Points where f(t, u, .) may be singular or discontinuous.
inline std::vector<double> breakpoints(const KernelSpec& k, double t) {
  if (std::holds_alternative<ReverseOU>(k)) return {t};
  return {0.0, t};
}

/// True for the Levy-type families whose local form is b(u) L_alpha(u).
inline bool levy_type(const KernelSpec& k) {
  return std::holds_alternative<LevyCompact>(k) || std::holds_alternative<LevyHalfLine>(k) ||
         std::holds_alternative<ReverseOU>(k);
}

namespace detail {

// Kernel evaluators with u frozen. Singular points yield a non-finite value;
// callers decide whether that is an error or a null set. Far from the origin
// the differences are formed through log1p / expm1 to avoid cancellation.

struct IndicatorKernel {
  double t;
  double operator()(double x) const { return (x >= 0.0 && x <= t) ? 1.0 : 0.0; }
};

struct LogFractionalKernel {
  double t;
  double operator()(double x) const {
    if (x == 0.0 || x == t) return std::numeric_limits<double>::quiet_NaN();
    if (std::abs(x) > 2.0 * std::abs(t)) return std::log1p(-t / x);
    return std::log(std::abs(t - x)) - std::log(std::abs(x));
  }
};

/// a^p for a >= 0, with 0^p = 0 for p > 0 and singular for p < 0.
inline double power_or_singular(double a, double p) {
  if (a == 0.0) {
    if (p > 0.0) return 0.0;
    if (p == 0.0) return 1.0;
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::pow(a, p);
}

struct FractionalKernel {
  double t;
  double p;  // h(u) - 1/alpha(u)
  double operator()(double x) const {
    if (p == 0.0) return 0.0;
    if (std::abs(x) > 2.0 * std::abs(t))
      return std::pow(std::abs(x), p) * std::expm1(p * std::log1p(-t / x));
    return power_or_singular(std::abs(t - x), p) - power_or_singular(std::abs(x), p);
  }
};

struct ReverseOUKernel {
  double t;
  double lambda;
  double operator()(double x) const { return x >= t ? std::exp(-lambda * (x - t)) : 0.0; }
};

/// log(a) a^p with its p > 0 limit 0 at a = 0.
inline double log_power_or_singular(double a, double p) {
  if (a == 0.0) return p > 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return std::log(a) * std::pow(a, p);
}

struct FractionalKernelDu {
  double t;
  double p;
  double factor;  // h'(u) + alpha'(u) / alpha(u)^2
  double operator()(double x) const {
    if (factor == 0.0) return 0.0;
    if (std::abs(x) > 2.0 * std::abs(t)) {
      const double la = std::log(std::abs(x));
      const double l = std::log1p(-t / x);
      return factor * std::pow(std::abs(x), p) * (la * std::expm1(p * l) + l * std::exp(p * l));
    }
    return factor *
           (log_power_or_singular(std::abs(t - x), p) - log_power_or_singular(std::abs(x), p));
  }
};

struct ZeroKernel {
  double operator()(double) const { return 0.0; }
};

}  // namespace detail

/// Calls `fn` with a concrete evaluator of x -> f(t, u, x).
template <class Fn>
decltype(auto) with_kernel(const KernelSpec& k, const ParamFn& alpha, double t, double u,
                           Fn&& fn) {
  return std::visit(
      [&](const auto& kk) -> decltype(auto) {
        using K = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<K, LevyCompact> || std::is_same_v<K, LevyHalfLine>) {
          return fn(detail::IndicatorKernel{t});
        } else if constexpr (std::is_same_v<K, LogFractional>) {
          return fn(detail::LogFractionalKernel{t});
        } else if constexpr (std::is_same_v<K, LinearMMM>) {
          return fn(detail::FractionalKernel{t, kk.h(u) - 1.0 / alpha(u)});
        } else {
          return fn(detail::ReverseOUKernel{t, kk.lambda});
        }
      },
      k);
}

/// Calls `fn` with a concrete evaluator of x -> df/du(t, u, x).
template <class Fn>
decltype(auto) with_kernel_du(const KernelSpec& k, const ParamFn& alpha, double t, double u,
                              Fn&& fn) {
  if (const auto* m = std::get_if<LinearMMM>(&k)) {
    const double a = alpha(u);
    const double factor = m->h.derivative(u) + alpha.derivative(u) / (a * a);
    return fn(detail::FractionalKernelDu{t, m->h(u) - 1.0 / a, factor});
  }
  return fn(detail::ZeroKernel{});
}

/// f(t, u, x). Throws SingularEvaluation at a singular point.
inline double eval_kernel(const KernelSpec& k, const ParamFn& alpha, double t, double u,
                          double x) {
  const double v = with_kernel(k, alpha, t, u, [x](const auto& f) { return f(x); });
  if (!std::isfinite(v)) throw SingularEvaluation("kernel evaluated at a singular point");
  return v;
}

/// df/du(t, u, x). Throws SingularEvaluation at a singular point.
inline double eval_kernel_du(const KernelSpec& k, const ParamFn& alpha, double t, double u,
                             double x) {
  const double v = with_kernel_du(k, alpha, t, u, [x](const auto& f) { return f(x); });
  if (!std::isfinite(v)) throw SingularEvaluation("kernel derivative at a singular point");
  return v;
}

struct AdmissibilityReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline AdmissibilityReport admissible_check(const KernelSpec& k, const ParamFn& alpha) {
  AdmissibilityReport rep;
  const Range win = admissible_alpha(k);
  const Range a = alpha.range();
  if (!(a.lo > win.lo && a.hi < win.hi))
    rep.violations.push_back(kernel_name(k) + ": alpha range [" + std::to_string(a.lo) + ", " +
                             std::to_string(a.hi) + "] not inside (" + std::to_string(win.lo) +
                             ", " + std::to_string(win.hi) + ")");
  if (const auto* m = std::get_if<LinearMMM>(&k)) {
    const Range h = m->h.range();
    if (!(h.lo > 0.0 && h.hi < 1.0))
      rep.violations.push_back("linear_mmm: h range [" + std::to_string(h.lo) + ", " +
                               std::to_string(h.hi) + "] not inside (0, 1)");
  }
  if (const auto* c = std::get_if<LevyCompact>(&k); c && !(c->T > 0.0 && std::isfinite(c->T)))
    rep.violations.push_back("levy_compact: T must be positive and finite");
  if (const auto* o = std::get_if<ReverseOU>(&k); o && !(o->lambda > 0.0 && std::isfinite(o->lambda)))
    rep.violations.push_back("reverse_ou: lambda must be positive");
  return rep;
}

}  // namespace mstab
