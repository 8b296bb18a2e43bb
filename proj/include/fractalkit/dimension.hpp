#pragma once

// Empirical dimension estimators: box counting, information, correlation and
// the Renyi spectrum, all fitted by least squares in log-log coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/error.hpp"
#include "fractalkit/grid.hpp"
#include "fractalkit/multifractal.hpp"
#include "fractalkit/sierpinski.hpp"

namespace fractalkit::dim {

using sierpinski::Point2;

struct BoxCountSeries {
  std::vector<double> scales;                     // box side delta, strictly decreasing
  std::vector<double> counts;                     // occupied boxes N(delta)
  std::vector<std::vector<double>> probabilities;  // per scale, per occupied box (optional)
  bool sampled = false;                            // scales not commensurate with the construction

  bool weighted() const { return !probabilities.empty(); }
  std::size_t size() const { return scales.size(); }
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double log_inv_scale_min = 0.0;  // range of ln(1/delta) used
  double log_inv_scale_max = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept.
inline FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("fit_line: need at least two points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw NumericalError("fit_line: all abscissae equal");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (r.slope * x[i] + r.intercept);
    ss_res += e * e;
  }
  r.r2 = syy <= 1e-300 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  r.log_inv_scale_min = *std::min_element(x.begin(), x.end());
  r.log_inv_scale_max = *std::max_element(x.begin(), x.end());
  r.points = n;
  return r;
}

namespace detail {

inline std::vector<double> log_inverse(const std::vector<double>& scales) {
  std::vector<double> x;
  x.reserve(scales.size());
  for (double d : scales) x.push_back(-std::log(d));
  return x;
}

inline void push_scale(BoxCountSeries& s, double delta, const std::vector<double>& masses, double total) {
  s.scales.push_back(delta);
  s.counts.push_back(static_cast<double>(masses.size()));
  std::vector<double> p;
  p.reserve(masses.size());
  for (double m : masses) p.push_back(m / total);
  s.probabilities.push_back(std::move(p));
}

inline void check_decreasing(const std::vector<double>& scales) {
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] < scales[i - 1])) throw InvalidArgument("box_count: scales must be strictly decreasing");
}

}  // namespace detail

/// Box counting on a grid with boxes of `box_sizes` cells (each must divide the
/// side). Box masses are occupied-cell fractions.
inline BoxCountSeries box_count(const Grid2D& g, const std::vector<std::size_t>& box_sizes) {
  const std::size_t total = g.count();
  if (total == 0) throw InvalidArgument("box_count: empty grid");
  if (box_sizes.empty()) throw InvalidArgument("box_count: no scales");
  BoxCountSeries s;
  std::vector<double> deltas;
  for (std::size_t size : box_sizes) {
    if (size == 0 || g.side() % size != 0)
      throw InvalidArgument("box_count: box size " + std::to_string(size) + " does not divide grid side");
    deltas.push_back(static_cast<double>(size) / static_cast<double>(g.side()));
  }
  detail::check_decreasing(deltas);
  for (std::size_t k = 0; k < box_sizes.size(); ++k) {
    const std::size_t size = box_sizes[k];
    const std::size_t boxes = g.side() / size;
    std::vector<double> mass(boxes * boxes, 0.0);
    for (std::size_t r = 0; r < g.side(); ++r)
      for (std::size_t c = 0; c < g.side(); ++c)
        if (g.at(r, c)) mass[(r / size) * boxes + c / size] += 1.0;
    std::vector<double> occupied;
    for (double m : mass)
      if (m > 0) occupied.push_back(m);
    detail::push_scale(s, deltas[k], occupied, static_cast<double>(total));
  }
  return s;
}

/// Boxes of side base^-k for k in [k_min, k_max], in units of the grid side.
inline BoxCountSeries box_count_powers(const Grid2D& g, unsigned base, unsigned k_min, unsigned k_max) {
  std::vector<std::size_t> sizes;
  for (unsigned k = k_min; k <= k_max; ++k) {
    std::size_t per_side = 1;
    for (unsigned i = 0; i < k; ++i) per_side *= base;
    if (per_side == 0 || g.side() % per_side != 0)
      throw InvalidArgument("box_count: scale base^-" + std::to_string(k) + " not commensurate with grid");
    sizes.push_back(g.side() / per_side);
  }
  return box_count(g, sizes);
}

/// Square domain for point clouds.
struct Domain {
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 1.0;
};

/// Box counting of a point cloud with boxes of side domain.side * base^-k.
inline BoxCountSeries box_count(const std::vector<Point2>& pts, unsigned k_min, unsigned k_max, unsigned base = 2,
                                Domain domain = {}) {
  if (pts.empty()) throw InvalidArgument("box_count: empty point set");
  if (k_max < k_min) throw InvalidArgument("box_count: k_max < k_min");
  BoxCountSeries s;
  s.sampled = true;
  for (unsigned k = k_min; k <= k_max; ++k) {
    const double cells = std::pow(static_cast<double>(base), k);
    if (cells > 4e9) throw CapacityError("box_count: scale too fine");
    const auto limit = static_cast<std::int64_t>(cells) - 1;
    std::unordered_map<std::uint64_t, double> mass;
    mass.reserve(pts.size());
    for (const auto& p : pts) {
      auto i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p.x - domain.x0) / domain.side * cells)), 0, limit);
      auto j = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p.y - domain.y0) / domain.side * cells)), 0, limit);
      mass[(static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j)] += 1.0;
    }
    std::vector<double> occupied;
    occupied.reserve(mass.size());
    for (const auto& [key, m] : mass) occupied.push_back(m);
    std::sort(occupied.begin(), occupied.end());
    detail::push_scale(s, domain.side / cells, occupied, static_cast<double>(pts.size()));
  }
  return s;
}

/// A weighted sub-interval of [0, 1].
struct WeightedInterval {
  double lo;
  double hi;
  double weight;
};

/// Generation-n refinement of a two-scale measure: 2^n intervals carrying
/// products of p1, p2 as exact (double) weights.
inline std::vector<WeightedInterval> weighted_refinement(const mfa::TwoScaleMeasure& m, unsigned n) {
  if (n > 24) throw CapacityError("weighted_refinement: generation above 24");
  std::vector<WeightedInterval> cur{{0.0, 1.0, 1.0}};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<WeightedInterval> next;
    next.reserve(cur.size() * 2);
    for (const auto& iv : cur) {
      double w = iv.hi - iv.lo;
      next.push_back({iv.lo, iv.lo + w * m.l1(), iv.weight * m.p1()});
      next.push_back({iv.hi - w * m.l2(), iv.hi, iv.weight * m.p2()});
    }
    cur = std::move(next);
  }
  return cur;
}

/// Box counting of weighted intervals on [0, 1] with boxes base^-k. An interval
/// straddling box boundaries splits its weight by overlap length.
inline BoxCountSeries box_count(const std::vector<WeightedInterval>& ivs, unsigned k_min, unsigned k_max,
                                unsigned base = 2) {
  if (ivs.empty()) throw InvalidArgument("box_count: empty interval set");
  if (k_max < k_min) throw InvalidArgument("box_count: k_max < k_min");
  double total = 0;
  for (const auto& iv : ivs) total += iv.weight;
  BoxCountSeries s;
  s.sampled = true;
  for (unsigned k = k_min; k <= k_max; ++k) {
    const double cells = std::pow(static_cast<double>(base), k);
    const auto limit = static_cast<std::int64_t>(cells) - 1;
    std::unordered_map<std::int64_t, double> mass;
    for (const auto& iv : ivs) {
      auto a = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(iv.lo * cells)), 0, limit);
      auto b = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(iv.hi * cells)), 0, limit);
      if (a == b || iv.hi <= iv.lo) {
        mass[a] += iv.weight;
        continue;
      }
      for (auto box = a; box <= b; ++box) {
        double lo = std::max(iv.lo, box / cells), hi = std::min(iv.hi, (box + 1) / cells);
        if (hi > lo || box == a) mass[box] += iv.weight * std::max(0.0, hi - lo) / (iv.hi - iv.lo);
      }
    }
    std::vector<double> occupied;
    for (const auto& [box, m] : mass)
      if (m > 0) occupied.push_back(m);
    std::sort(occupied.begin(), occupied.end());
    detail::push_scale(s, 1.0 / cells, occupied, total);
  }
  return s;
}

/// Exact box counting of rational intervals with boxes of side b^-k. A box
/// counts when it overlaps an interval in positive length (or holds a point
/// interval), so construction-aligned sets give exact counts. Counts only.
inline BoxCountSeries box_count(const IntervalSet& set, unsigned k_min, unsigned k_max, unsigned base = 3) {
  if (set.empty()) throw InvalidArgument("box_count: empty interval set");
  if (k_max < k_min) throw InvalidArgument("box_count: k_max < k_min");
  if (base < 2) throw InvalidArgument("box_count: base must be >= 2");
  BoxCountSeries s;
  for (unsigned k = k_min; k <= k_max; ++k) {
    const Integer cells = ipow(base, k);
    Integer count = 0, last = -1;  // highest box already counted; intervals are sorted
    for (const auto& iv : set) {
      Rational lo = iv.lo * cells, hi = iv.hi * cells;
      Integer first = floor_rat(lo).get_num();
      Rational hf = floor_rat(hi);
      Integer end = (hf == hi && hi > lo) ? Integer(hf.get_num() - 1) : hf.get_num();
      if (end >= cells) end = cells - 1;
      if (first <= last) first = last + 1;
      if (end >= first) count += end - first + 1;
      if (end > last) last = end;
    }
    s.scales.push_back(std::pow(static_cast<double>(base), -static_cast<double>(k)));
    s.counts.push_back(count.get_d());
  }
  return s;
}

/// Capacity estimate: slope of ln N against ln(1/delta).
inline FitResult fit_dimension(const BoxCountSeries& s) {
  if (s.size() < 3) throw InvalidArgument("fit_dimension: need at least 3 scales");
  if (std::all_of(s.counts.begin(), s.counts.end(), [&](double c) { return c == s.counts.front(); }))
    throw NumericalError("fit_dimension: degenerate series (all counts equal)");
  std::vector<double> y;
  for (double c : s.counts) y.push_back(std::log(c));
  return fit_line(detail::log_inverse(s.scales), y);
}

inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log(v);
  return h;
}

/// Slope of S(delta) = -sum p ln p against ln(1/delta); empty boxes contribute 0.
inline FitResult information_dimension(const BoxCountSeries& s) {
  if (!s.weighted()) throw InvalidArgument("information_dimension: series has no box probabilities");
  if (s.size() < 3) throw InvalidArgument("information_dimension: need at least 3 scales");
  std::vector<double> y;
  for (const auto& p : s.probabilities) y.push_back(shannon_entropy(p));
  return fit_line(detail::log_inverse(s.scales), y);
}

/// Ordered pairs i != j with |r_i - r_j| < delta, divided by N^2, per radius.
inline std::vector<double> correlation_integral(const std::vector<Point2>& pts, const std::vector<double>& radii) {
  if (pts.size() < 2) throw InvalidArgument("correlation_integral: need at least 2 points");
  if (radii.empty()) throw InvalidArgument("correlation_integral: no radii");
  std::vector<double> sorted_r = radii;
  std::sort(sorted_r.begin(), sorted_r.end());
  const double rmax = sorted_r.back();
  std::vector<Point2> p = pts;
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) { return a.x < b.x; });
  // hist[k]: pairs whose distance falls in [sorted_r[k-1], sorted_r[k]).
  std::vector<std::uint64_t> hist(sorted_r.size() + 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size() && p[j].x - p[i].x < rmax; ++j) {
      double d = std::hypot(p[j].x - p[i].x, p[j].y - p[i].y);
      if (d >= rmax) continue;
      auto k = static_cast<std::size_t>(std::upper_bound(sorted_r.begin(), sorted_r.end(), d) - sorted_r.begin());
      ++hist[k];
    }
  const double n2 = static_cast<double>(p.size()) * static_cast<double>(p.size());
  std::vector<double> out;
  for (double r : radii) {
    auto k = static_cast<std::size_t>(std::lower_bound(sorted_r.begin(), sorted_r.end(), r) - sorted_r.begin());
    std::uint64_t pairs = 0;
    for (std::size_t m = 0; m <= k; ++m) pairs += hist[m];
    out.push_back(2.0 * static_cast<double>(pairs) / n2);
  }
  return out;
}

/// Slope of ln I(delta) against ln delta. Radii with no pairs are skipped.
inline FitResult correlation_dimension(const std::vector<Point2>& pts, const std::vector<double>& radii) {
  auto integral = correlation_integral(pts, radii);
  if (std::all_of(integral.begin(), integral.end(), [&](double v) { return v == integral.front(); }))
    throw NumericalError("correlation_dimension: correlation integral is flat (coincident points?)");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (integral[i] > 0) {
      x.push_back(std::log(radii[i]));
      y.push_back(std::log(integral[i]));
    }
  if (x.size() < 3) throw InvalidArgument("correlation_dimension: fewer than 3 radii with pairs");
  FitResult r = fit_line(x, y);
  r.log_inv_scale_min = -std::log(*std::max_element(radii.begin(), radii.end()));
  r.log_inv_scale_max = -std::log(*std::min_element(radii.begin(), radii.end()));
  return r;
}

struct RenyiPoint {
  double q;
  double Dq;
  double r2;
  double tau;      // (1 - q) D_q, the root-equation sign convention
  bool clamped;    // |q| reduced to the empirical limit
};

/// Largest |q| used empirically; beyond it Z(q) under/overflows for real data.
inline constexpr double kMaxEmpiricalMoment = 40.0;

/// Per-q fit of ln Z(q, delta) = ln sum p_i^q against ln delta. The fitted
/// slope s gives D_q = s / (q - 1); q = 1 uses the information dimension.
inline std::vector<RenyiPoint> renyi_spectrum(const BoxCountSeries& s, const std::vector<double>& qs) {
  if (!s.weighted()) throw InvalidArgument("renyi_spectrum: series has no box probabilities");
  if (s.size() < 3) throw InvalidArgument("renyi_spectrum: need at least 3 scales");
  std::vector<double> x;
  for (double d : s.scales) x.push_back(std::log(d));
  std::vector<RenyiPoint> out;
  for (double q_in : qs) {
    double q = std::clamp(q_in, -kMaxEmpiricalMoment, kMaxEmpiricalMoment);
    bool clamped = q != q_in;
    if (q == 1.0) {
      FitResult info = information_dimension(s);
      out.push_back({q_in, info.slope, info.r2, 0.0, clamped});
      continue;
    }
    std::vector<double> y;
    for (const auto& p : s.probabilities) {
      // log-sum-exp of q ln p.
      double hi = -1e300;
      for (double v : p) hi = std::max(hi, q * std::log(v));
      double acc = 0;
      for (double v : p) acc += std::exp(q * std::log(v) - hi);
      y.push_back(hi + std::log(acc));
    }
    FitResult f = fit_line(x, y);
    double dq = f.slope / (q - 1.0);
    out.push_back({q_in, dq, f.r2, (1.0 - q) * dq, clamped});
  }
  return out;
}

/// D_m = 3 - ln(rho_true / rho_avg) / ln L.
inline double mass_dimension(double rho_true, double rho_avg, double L) {
  if (!(rho_true > 0) || !(rho_avg > 0)) throw InvalidArgument("mass_dimension: densities must be positive");
  if (!(L > 1)) throw InvalidArgument("mass_dimension: L must exceed 1");
  return 3.0 - std::log(rho_true / rho_avg) / std::log(L);
}

}  // namespace fractalkit::dim
