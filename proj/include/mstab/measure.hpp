#pragma once

// Sampling spaces (E, m) with their probability measure m-hat and the density
// ratio r = dm/dm-hat, plus the three random sequences of the series.
//
// Block families are stored by formula: block j >= 1 covers [j-1, j) on the
// half line, mirrored onto [-j, -j+1) for two-sided spaces. A "profile" d_j is
// the normalised half-line density on block j; a two-sided space puts half of
// its mass on each side.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mstab/errors.hpp"
#include "mstab/rng.hpp"

namespace mstab {

enum class BlockPreset { half_line_dyadic, two_sided_zeta, two_sided_dyadic };

/// Lebesgue measure on [0, T]; m-hat is uniform.
struct FiniteInterval {
  double length = 1.0;
};

struct BlockFamily {
  BlockPreset preset = BlockPreset::half_line_dyadic;
};

struct MeasureSpace {
  std::variant<FiniteInterval, BlockFamily> kind;

  static MeasureSpace finite(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("finite measure space needs T > 0");
    return MeasureSpace{FiniteInterval{T}};
  }
  static MeasureSpace blocks(BlockPreset p) { return MeasureSpace{BlockFamily{p}}; }

  bool is_finite() const { return std::holds_alternative<FiniteInterval>(kind); }

  bool two_sided() const {
    const auto* b = std::get_if<BlockFamily>(&kind);
    return b != nullptr && b->preset != BlockPreset::half_line_dyadic;
  }

  /// m(E): T for the finite space, +inf otherwise.
  double total_mass() const {
    if (const auto* f = std::get_if<FiniteInterval>(&kind)) return f->length;
    return std::numeric_limits<double>::infinity();
  }

  std::pair<double, double> support() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto* f = std::get_if<FiniteInterval>(&kind)) return {0.0, f->length};
    return {two_sided() ? -inf : 0.0, inf};
  }

  bool in_support(double x) const {
    const auto [lo, hi] = support();
    return std::isfinite(x) && x >= lo && x <= hi;
  }

  std::string name() const {
    if (const auto* f = std::get_if<FiniteInterval>(&kind))
      return "finite[0," + std::to_string(f->length) + "]";
    switch (std::get<BlockFamily>(kind).preset) {
      case BlockPreset::half_line_dyadic: return "half_line_dyadic";
      case BlockPreset::two_sided_zeta: return "two_sided_zeta";
      case BlockPreset::two_sided_dyadic: return "two_sided_dyadic";
    }
    return "?";
  }
};

namespace detail {

inline constexpr double kPiSquaredOver6 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr std::size_t kZetaTableSize = 1024;

/// sum_{k >= n} k^-2 by Euler-Maclaurin; accurate to ~n^-9 for large n.
inline double zeta2_tail_asymptotic(double n) {
  const double i1 = 1.0 / n;
  const double i2 = i1 * i1;
  return i1 + i2 * (0.5 + i1 * (1.0 / 6.0 - i2 * (1.0 / 30.0 - i2 / 42.0)));
}

/// tail[n] = sum_{k >= n} k^-2 for n in [1, kZetaTableSize + 1].
inline const std::array<double, kZetaTableSize + 2>& zeta2_tail_table() {
  static const auto table = [] {
    std::array<double, kZetaTableSize + 2> t{};
    t[kZetaTableSize + 1] = zeta2_tail_asymptotic(static_cast<double>(kZetaTableSize + 1));
    for (std::size_t n = kZetaTableSize; n >= 1; --n) {
      const double dn = static_cast<double>(n);
      t[n] = t[n + 1] + 1.0 / (dn * dn);
    }
    return t;
  }();
  return table;
}

inline double zeta2_tail(double n) {
  if (n <= static_cast<double>(kZetaTableSize + 1))
    return zeta2_tail_table()[static_cast<std::size_t>(n)];
  return zeta2_tail_asymptotic(n);
}

/// Normalised half-line density on block j.
inline double profile_density(BlockPreset p, double j) {
  if (p == BlockPreset::two_sided_zeta) return 1.0 / (kPiSquaredOver6 * j * j);
  return std::ldexp(1.0, -static_cast<int>(j));
}

/// Quantile of the normalised half-line profile, v in [0, 1).
inline double profile_quantile(BlockPreset p, double v) {
  const double tau = 1.0 - v;  // remaining mass, in (0, 1]
  if (p != BlockPreset::two_sided_zeta) {
    // Dyadic tail(j) = 2^(1-j); want tail(j+1) < tau <= tail(j).
    int e = 0;
    const double m = std::frexp(tau, &e);
    const int j = (m == 0.5) ? 2 - e : 1 - e;
    return static_cast<double>(j) + 1.0 - std::ldexp(tau, j);
  }

  // Zeta: tail(j) = (6/pi^2) sum_{k >= j} k^-2.
  const double target = tau * kPiSquaredOver6;
  const auto& table = zeta2_tail_table();
  double j = 0.0;
  if (target > table[kZetaTableSize + 1]) {
    // Table is strictly decreasing from index 1; find the last n with table[n] >= target.
    std::size_t lo = 1;
    std::size_t hi = kZetaTableSize + 1;  // table[hi] < target
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (table[mid] >= target)
        lo = mid;
      else
        hi = mid;
    }
    j = static_cast<double>(lo);
  } else {
    j = std::max(static_cast<double>(kZetaTableSize + 1), std::floor(1.0 / target + 0.5));
    while (j > static_cast<double>(kZetaTableSize + 1) && zeta2_tail(j) < target) j -= 1.0;
    while (zeta2_tail(j + 1.0) >= target) j += 1.0;
  }
  const double offset = (zeta2_tail(j) - target) * j * j;
  return (j - 1.0) + std::clamp(offset, 0.0, std::nextafter(1.0, 0.0));
}

/// r on block j of the two-sided zeta family: (pi^2/3) j^2.
inline double r_of_zeta_block(double j) { return 2.0 * kPiSquaredOver6 * j * j; }

/// Block index j of x: [j-1, j) for x >= 0, [-j, -j+1) for x < 0.
inline double block_index(double x) {
  return x >= 0.0 ? std::floor(x) + 1.0 : std::ceil(-x);
}

}  // namespace detail

/// Density of m-hat with respect to Lebesgue measure.
inline double hat_density(const MeasureSpace& ms, double x) {
  if (!ms.in_support(x)) throw DomainError("point outside the measure support");
  if (const auto* f = std::get_if<FiniteInterval>(&ms.kind)) return 1.0 / f->length;
  const auto p = std::get<BlockFamily>(ms.kind).preset;
  const double j = detail::block_index(x);
  if (p == BlockPreset::half_line_dyadic) return std::ldexp(1.0, -static_cast<int>(j));
  if (p == BlockPreset::two_sided_dyadic) return std::ldexp(1.0, -static_cast<int>(j) - 1);
  return 1.0 / detail::r_of_zeta_block(j);
}

/// r(x) = dm/dm-hat. Exact powers of two for the dyadic presets.
inline double r_of(const MeasureSpace& ms, double x) {
  if (!ms.in_support(x)) throw DomainError("r(x) requested outside the measure support");
  if (const auto* f = std::get_if<FiniteInterval>(&ms.kind)) return f->length;
  const auto p = std::get<BlockFamily>(ms.kind).preset;
  const double j = detail::block_index(x);
  switch (p) {
    case BlockPreset::half_line_dyadic: return std::ldexp(1.0, static_cast<int>(j));
    case BlockPreset::two_sided_dyadic: return std::ldexp(1.0, static_cast<int>(j) + 1);
    case BlockPreset::two_sided_zeta: return detail::r_of_zeta_block(j);
  }
  return 0.0;
}

/// x with m-hat((-inf, x]) = u, for u in [0, 1).
inline double inverse_cdf(const MeasureSpace& ms, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("inverse_cdf needs u in [0, 1)");
  if (const auto* f = std::get_if<FiniteInterval>(&ms.kind)) return u * f->length;
  const auto p = std::get<BlockFamily>(ms.kind).preset;
  if (!ms.two_sided()) return detail::profile_quantile(p, u);
  if (u >= 0.5) return detail::profile_quantile(p, 2.0 * u - 1.0);
  if (u == 0.0) throw DomainError("u = 0 maps to -inf on a two-sided space");
  return -detail::profile_quantile(p, 1.0 - 2.0 * u);
}

/// Mass of the two-sided or half-line block j (both sides together).
inline double block_mass(const MeasureSpace& ms, double j) {
  const auto p = std::get<BlockFamily>(ms.kind).preset;
  return detail::profile_density(p, j);
}

/// Points of (lo, hi) where r jumps: the integers for block families.
inline std::vector<double> block_edges(const MeasureSpace& ms, double lo, double hi) {
  std::vector<double> out;
  if (ms.is_finite()) return out;
  for (double e = std::floor(lo) + 1.0; e < hi; e += 1.0) out.push_back(e);
  return out;
}

/// One realisation of the series ingredients, truncated to N terms.
struct SeriesDraw {
  std::vector<double> gammas;
  std::vector<double> points;
  std::vector<int> signs;
  std::uint64_t seed = 0;

  std::size_t size() const { return gammas.size(); }
};

/// Independent stream seeds of a draw.
struct StreamSeeds {
  std::uint64_t arrivals;
  std::uint64_t points;
  std::uint64_t signs;

  static StreamSeeds from(std::uint64_t seed) {
    return {rng::stream_seed(seed, rng::Stream::arrivals),
            rng::stream_seed(seed, rng::Stream::points),
            rng::stream_seed(seed, rng::Stream::signs)};
  }
};

/// Cumulative sums of `n` exponentials pulled from `next_exponential()`.
template <std::invocable ExpSource>
std::vector<double> poisson_arrivals(std::size_t n, ExpSource&& next_exponential) {
  std::vector<double> out(n);
  double acc = 0.0;
  for (auto& g : out) {
    acc += next_exponential();
    g = acc;
  }
  return out;
}

/// Unit-rate Poisson arrival times.
inline std::vector<double> poisson_arrivals(std::size_t n, std::uint64_t seed) {
  auto eng = rng::make_engine(seed);
  return poisson_arrivals(n, [&eng] { return rng::exponential(eng); });
}

inline std::vector<int> rademacher(std::size_t n, std::uint64_t seed) {
  auto eng = rng::make_engine(seed);
  std::vector<int> out(n);
  for (auto& s : out) s = rng::rademacher(eng);
  return out;
}

/// `n` i.i.d. points from m-hat.
inline std::vector<double> sample_points(const MeasureSpace& ms, std::size_t n,
                                         std::uint64_t seed) {
  auto eng = rng::make_engine(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = inverse_cdf(ms, rng::uniform_open(eng));
  return out;
}

inline SeriesDraw draw_series(const MeasureSpace& ms, std::size_t n, const StreamSeeds& s,
                              std::uint64_t seed = 0) {
  if (n == 0) throw DomainError("a series draw needs at least one term");
  return SeriesDraw{poisson_arrivals(n, s.arrivals), sample_points(ms, n, s.points),
                    rademacher(n, s.signs), seed};
}

inline SeriesDraw draw_series(const MeasureSpace& ms, std::size_t n, std::uint64_t seed) {
  return draw_series(ms, n, StreamSeeds::from(seed), seed);
}

}  // namespace mstab
