#pragma once

// Symmetric alpha-stable reference machinery.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "mstab/errors.hpp"
#include "mstab/measure.hpp"
#include "mstab/quadrature.hpp"
#include "mstab/rng.hpp"

namespace mstab {

/// S_alpha(sigma, 0, 0). Skewness and shift are always zero.
struct StableParams {
  double alpha = 2.0;
  double sigma = 1.0;

  StableParams() = default;
  StableParams(double a, double s) : alpha(a), sigma(s) {
    if (!(a > 0.0 && a <= 2.0)) throw DomainError("stable alpha must lie in (0, 2]");
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("stable scale must be >= 0");
  }
};

/// Half-width of the window around alpha = 1 where c_alpha uses its series.
inline constexpr double kCAlphaSeriesWindow = 1e-3;

/// C_alpha = (int_0^inf x^-alpha sin x dx)^-1 for alpha in (0, 2).
///
/// Closed form (1 - alpha) / (Gamma(2 - alpha) cos(pi alpha / 2)) away from 1.
/// Near 1 both factors vanish; there we use the expansion in e = alpha - 1
///   log C = log(2/pi) - gamma e - (pi^2/24) e^2 - (zeta(3)/3) e^3 - (7 pi^4/2880) e^4,
/// which equals 2/pi at e = 0.
inline double c_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("c_alpha needs alpha in (0, 2)");
  const double e = alpha - 1.0;
  if (std::abs(e) > kCAlphaSeriesWindow)
    return (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(std::numbers::pi * alpha / 2.0));
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  constexpr double zeta3 = 1.2020569031595942854;
  const double log_c = std::log(2.0 / std::numbers::pi) -
                       e * (std::numbers::egamma +
                            e * (pi2 / 24.0 + e * (zeta3 / 3.0 + e * (7.0 * pi2 * pi2 / 2880.0))));
  return std::exp(log_c);
}

/// exp(-(sigma |theta|)^alpha).
inline double stable_cf(const StableParams& p, double theta) {
  return std::exp(-std::pow(p.sigma * std::abs(theta), p.alpha));
}

/// Exact S_alpha(sigma, 0, 0) sampler (Chambers-Mallows-Stuck transform):
///   V ~ U(-pi/2, pi/2), W ~ Exp(1),
///   X = sin(alpha V) / cos(V)^(1/alpha) * (cos((1 - alpha) V) / W)^((1 - alpha)/alpha),
/// and X = tan V at alpha = 1. Two engine calls per variate, V first.
inline std::vector<double> stable_oracle_sample(const StableParams& p, std::size_t n,
                                                std::uint64_t seed) {
  auto eng = rng::make_engine(rng::stream_seed(seed, rng::Stream::oracle));
  std::vector<double> out(n);
  const double a = p.alpha;
  for (auto& x : out) {
    const double v = std::numbers::pi * (rng::uniform_open(eng) - 0.5);
    const double w = -std::log(rng::uniform_open(eng));
    double s;
    if (a == 1.0) {
      s = std::tan(v);
    } else {
      s = std::sin(a * v) / std::pow(std::cos(v), 1.0 / a) *
          std::pow(std::cos((1.0 - a) * v) / w, (1.0 - a) / a);
    }
    x = p.sigma * s;
  }
  return out;
}

/// Values above this are treated as a divergent norm integral.
inline constexpr double kNormOverflowGuard = 1e100;

/// ||f||_alpha over the support of `measure` (Lebesgue control measure),
/// i.e. (int |f|^alpha dm)^(1/alpha); at alpha = 1 this is int |f| dm.
/// `cuts` lists interior points where f is singular or discontinuous.
inline double f_alpha_norm(const std::function<double(double)>& f, double alpha,
                           const MeasureSpace& measure, double tol,
                           std::vector<double> cuts = {}) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("norm exponent must lie in (0, 2]");
  if (!(tol > 0.0)) throw DomainError("norm tolerance must be positive");
  auto integrand = [&](double x) { return std::pow(std::abs(f(x)), alpha); };
  const auto [lo, hi] = measure.support();
  if (std::isfinite(lo)) cuts.push_back(lo);
  cuts.push_back(0.0);
  const quad::Result r = quad::piecewise(integrand, lo, hi, std::move(cuts), tol);
  if (!std::isfinite(r.value) || r.value > kNormOverflowGuard)
    throw NonIntegrableKernel("kernel is not alpha-integrable over the measure support");
  if (r.value > 0.0 && r.error > r.value)
    throw NonIntegrableKernel("norm quadrature did not converge; kernel looks non-integrable");
  return std::pow(r.value, 1.0 / alpha);
}

}  // namespace mstab
