#pragma once

// Thin layer over Boost.Math's tanh-sinh and Gauss-Kronrod rules.
//
// Integrands are split at caller-supplied cut points so that every piece has
// its singularities (if any) at the endpoints, where tanh-sinh
// converges without special treatment. Non-finite integrand values are taken
// as zero: they only occur when a node rounds onto a singular point, which is
// a null set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mstab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace detail {

template <class F>
auto finite_only(F& f) {
  return [&f](double x) {
    const double y = f(x);
    return std::isfinite(y) ? y : 0.0;
  };
}

// The rules extend their abscissa tables lazily, so each thread owns one.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}


}  // namespace detail

/// Integral over the finite interval [a, b].
template <class F>
Result finite(F&& f, double a, double b, double tol) {
  if (!(b > a)) return {};
  auto g = detail::finite_only(f);
  // The (x, complement) overload; the one-argument path of Boost 1.74 can
  // round interior nodes onto the left endpoint.
  auto g2 = [&g](double x, double) { return g(x); };
  Result r;
  double l1 = 0.0;
  r.value = detail::tanh_sinh_rule().integrate(g2, a, b, tol, &r.error, &l1);
  return r;
}

/// Integral over [a, +inf), mapped onto (0, 1] by x = a + (1 - s) / s.
/// Algebraically decaying tails become integrable endpoint singularities,
/// which tanh-sinh resolves far better than exp-sinh resolves slow decay.
template <class F>
Result upper_tail(F&& f, double a, double tol) {
  auto mapped = [&f, a](double s) {
    const double x = a + (1.0 - s) / s;
    return f(x) / (s * s);
  };
  return finite(mapped, 0.0, 1.0, tol);
}

/// Integral over (-inf, b].
template <class F>
Result lower_tail(F&& f, double b, double tol) {
  auto reflected = [&f, b](double s) { return f(2.0 * b - s); };
  return upper_tail(reflected, b, tol);
}

/// Integral over [lo, hi] (either end may be infinite), split at `cuts`.
template <class F>
Result piecewise(F&& f, double lo, double hi, std::vector<double> cuts, double tol) {
  std::erase_if(cuts, [&](double c) { return !(c > lo && c < hi) || !std::isfinite(c); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> edges;
  edges.reserve(cuts.size() + 2);
  edges.push_back(lo);
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(hi);

  // An unbounded end needs a finite anchor for the tail rule.
  if (std::isinf(lo) && std::isinf(hi) && edges.size() == 2) edges.insert(edges.begin() + 1, 0.0);

  Result total;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k];
    const double b = edges[k + 1];
    if (std::isinf(a))
      total += lower_tail(f, b, tol);
    else if (std::isinf(b))
      total += upper_tail(f, a, tol);
    else
      total += finite(f, a, b, tol);
  }
  return total;
}

/// One 21-point Gauss-Kronrod panel with its embedded error estimate.
template <class F>
Result gauss_kronrod21(F&& f, double a, double b) {
  auto g = detail::finite_only(f);
  Result r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(g, a, b, 0, 0.0,
                                                                            &r.error);
  return r;
}

}  // namespace mstab::quad
