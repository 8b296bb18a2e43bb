#pragma once

// The Cantor function M(x) (devil's staircase) and the Cantor-bar mass
// distribution it integrates.

#include <cmath>
#include <map>
#include <vector>

#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/error.hpp"
#include "fractalkit/rational.hpp"

namespace fractalkit::cantor_fn {

/// A value of M with power-of-two denominator. When `truncated` is set the
/// true M(x) lies in [value, value + bound].
struct DyadicValue {
  Rational value;
  bool truncated = false;
  Rational bound = 0;
};

/// Digit algorithm: ternary digits of x become binary digits (2 -> 1) up to and
/// including the first ternary 1; everything after it is zero.
inline DyadicValue evaluate(const Rational& x, unsigned depth) {
  if (x < 0 || x > 1) throw InvalidArgument("cantor function: x outside [0,1]");
  if (depth < 1) throw InvalidArgument("cantor function: depth must be >= 1");
  if (x == 1) return {Rational(1)};
  Rational rem = x;
  Rational value = 0;
  Rational weight(1, 2);
  for (unsigned place = 0; place < depth; ++place) {
    if (rem == 0) return {value};
    rem *= 3;
    Rational digit = floor_rat(rem);
    rem -= digit;
    if (digit == 1) return {value + weight};
    if (digit == 2) value += weight;
    weight /= 2;
  }
  if (rem == 0) return {value};
  return {value, true, inv_pow(2, depth)};
}

/// The closed plateau on which M equals the dyadic m = k / 2^n (k odd).
///
/// For m with a non-power-of-two denominator M^-1(m) is a single point; it is
/// returned as a zero-width interval (the binary expansion of m is periodic, so
/// the point is rational).
inline Interval plateau_of(const Rational& m) {
  if (m <= 0 || m >= 1) throw InvalidArgument("plateau_of: m must lie strictly between 0 and 1");
  if (is_power_of_two(m.get_den())) {
    // Binary digits of m; all ones but the last become ternary twos.
    unsigned n = static_cast<unsigned>(mpz_sizeinbase(m.get_den().get_mpz_t(), 2) - 1);
    Rational rem = m;
    Rational lo = 0;
    for (unsigned place = 1; place <= n; ++place) {
      rem *= 2;
      Rational bit = floor_rat(rem);
      rem -= bit;
      Rational scale = inv_pow(3, place);
      if (place == n) lo += scale;
      else if (bit == 1) lo += 2 * scale;
    }
    return {lo, lo + inv_pow(3, n)};
  }
  // Eventually periodic binary expansion: find pre-period and period.
  std::map<Rational, unsigned> first_seen;
  std::vector<unsigned> bits;
  Rational rem = m;
  while (!first_seen.count(rem)) {
    first_seen.emplace(rem, static_cast<unsigned>(bits.size()));
    rem *= 2;
    Rational bit = floor_rat(rem);
    rem -= bit;
    bits.push_back(bit == 1 ? 1u : 0u);
  }
  unsigned start = first_seen[rem];
  auto digits_value = [&](unsigned from, unsigned to) {
    Rational v = 0;
    for (unsigned i = from; i < to; ++i)
      if (bits[i]) v += 2 * inv_pow(3, i - from + 1);
    return v;
  };
  unsigned period = static_cast<unsigned>(bits.size()) - start;
  Rational pre = digits_value(0, start);
  Rational cycle = digits_value(start, static_cast<unsigned>(bits.size()));
  Rational x = pre + inv_pow(3, start) * cycle / (1 - inv_pow(3, period));
  return {x, x};
}

struct Point {
  Rational x;
  Rational y;
};

struct Polyline {
  std::vector<Point> points;
  double length = 0.0;
};

/// Generation-n staircase: surviving triadic segments joined by straight risers,
/// plateaus flat in between. Runs from (0,0) to (1,1).
inline Polyline staircase_polyline(unsigned n) {
  if (n < 1) throw InvalidArgument("staircase_polyline: n must be >= 1");
  if (n > 16) throw CapacityError("staircase_polyline: n above 16");
  IntervalSet segs = generate(CantorSpec::triadic(), n);
  Polyline poly;
  poly.points.reserve(segs.size() * 2);
  Rational step = inv_pow(2, n);
  Rational level = 0;
  for (const auto& iv : segs) {
    poly.points.push_back({iv.lo, level});
    level += step;
    poly.points.push_back({iv.hi, level});
  }
  for (std::size_t i = 1; i < poly.points.size(); ++i) {
    double dx = to_double(poly.points[i].x - poly.points[i - 1].x);
    double dy = to_double(poly.points[i].y - poly.points[i - 1].y);
    poly.length += std::hypot(dx, dy);
  }
  return poly;
}

/// Staircase length without building the polyline: the plateaus cover
/// 1 - (2/3)^n and the 2^n risers are congruent.
inline double staircase_length(unsigned n) {
  if (n < 1) throw InvalidArgument("staircase_length: n must be >= 1");
  double plateaus = 1.0 - std::pow(2.0 / 3.0, n);
  double riser = std::hypot(std::pow(3.0, -static_cast<double>(n)), std::pow(2.0, -static_cast<double>(n)));
  return plateaus + std::ldexp(riser, static_cast<int>(n));
}

struct BarSegment {
  Interval interval;
  Rational mass;
  Rational density;
};

/// Generation-n Cantor bar: 2^n segments of length 3^-n and mass 2^-n.
inline std::vector<BarSegment> bar_distribution(unsigned n) {
  IntervalSet segs = generate(CantorSpec::triadic(), n);
  Rational mass = inv_pow(2, n);
  std::vector<BarSegment> out;
  out.reserve(segs.size());
  for (const auto& iv : segs) out.push_back({iv, mass, mass / iv.length()});
  return out;
}

inline double holder_exponent() { return std::log(2.0) / std::log(3.0); }

/// ln(mu_n) / ln(l_n) measured on an actual generation-n bar segment.
inline double bar_scaling_exponent(unsigned n) {
  if (n < 1) throw InvalidArgument("bar_scaling_exponent: n must be >= 1");
  Rational mass = inv_pow(2, n);
  Rational length = inv_pow(3, n);
  return log_rat(mass) / log_rat(length);
}

}  // namespace fractalkit::cantor_fn
