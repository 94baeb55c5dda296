#pragma once

// C^1 parameter functions alpha(u), b(u), h(u) with closed-form derivatives
// and exact ranges.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "mstab/errors.hpp"

namespace mstab {

struct Constant {
  double value = 0.0;
};

/// Moves from `from` at t0 to `to` at t1; held constant outside [t0, t1].
struct Linear {
  double from = 0.0;
  double to = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
};

/// mid + amp * sin(2 pi u / period + phase), with mid/amp set from [min, max].
struct Sine {
  double min = 0.0;
  double max = 0.0;
  double period = 1.0;
  double phase = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

class ParamFn {
 public:
  using Variant = std::variant<Constant, Linear, Sine>;

  ParamFn() : fn_(Constant{}) {}
  ParamFn(Constant c) : fn_(c) { check(); }
  ParamFn(Linear l) : fn_(l) { check(); }
  ParamFn(Sine s) : fn_(s) { check(); }

  static ParamFn constant(double c) { return Constant{c}; }

  double operator()(double u) const {
    return std::visit([u](const auto& f) { return value(f, u); }, fn_);
  }

  double derivative(double u) const {
    return std::visit([u](const auto& f) { return slope(f, u); }, fn_);
  }

  /// Exact image of the whole real line.
  Range range() const {
    return std::visit([](const auto& f) { return image(f); }, fn_);
  }

  bool is_constant() const { return std::holds_alternative<Constant>(fn_); }

  const Variant& variant() const { return fn_; }

 private:
  void check() const {
    if (const auto* l = std::get_if<Linear>(&fn_); l && !(l->t1 > l->t0))
      throw DomainError("linear parameter function needs t1 > t0");
    if (const auto* s = std::get_if<Sine>(&fn_); s && (!(s->period > 0.0) || s->max < s->min))
      throw DomainError("sine parameter function needs period > 0 and max >= min");
  }

  static double value(const Constant& c, double) { return c.value; }
  static double value(const Linear& l, double u) {
    if (u <= l.t0) return l.from;
    if (u >= l.t1) return l.to;
    return l.from + (l.to - l.from) * (u - l.t0) / (l.t1 - l.t0);
  }
  static double value(const Sine& s, double u) {
    const double mid = 0.5 * (s.min + s.max);
    const double amp = 0.5 * (s.max - s.min);
    return mid + amp * std::sin(2.0 * std::numbers::pi * u / s.period + s.phase);
  }

  static double slope(const Constant&, double) { return 0.0; }
  static double slope(const Linear& l, double u) {
    if (u < l.t0 || u > l.t1) return 0.0;
    return (l.to - l.from) / (l.t1 - l.t0);
  }
  static double slope(const Sine& s, double u) {
    const double amp = 0.5 * (s.max - s.min);
    const double w = 2.0 * std::numbers::pi / s.period;
    return amp * w * std::cos(w * u + s.phase);
  }

  static Range image(const Constant& c) { return {c.value, c.value}; }
  static Range image(const Linear& l) { return {std::min(l.from, l.to), std::max(l.from, l.to)}; }
  static Range image(const Sine& s) { return {s.min, s.max}; }

  Variant fn_;
};

inline double eval_param(const ParamFn& fn, double u) { return fn(u); }
inline double eval_param_deriv(const ParamFn& fn, double u) { return fn.derivative(u); }

}  // namespace mstab
