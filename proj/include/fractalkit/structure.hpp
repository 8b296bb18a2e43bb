#pragma once

// Texture measures that separate sets of equal dimension: gap and hole
// lacunarity, gliding-box mass variance, and the Kullback-Leibler order
// functional between 256-bin distributions.

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/dimension.hpp"
#include "fractalkit/error.hpp"
#include "fractalkit/grid.hpp"

namespace fractalkit::structure {

inline double gap_lacunarity_1d(const IntervalSet& s) { return to_double(largest_gap(s)); }

/// N pieces of length r: two pieces pushed to the ends of [0,1] (N = 2 only).
inline IntervalSet clustered_pieces(const Rational& r) {
  if (r <= 0 || 2 * r >= 1) throw InvalidArgument("clustered_pieces: need 0 < r < 1/2");
  return IntervalSet({{Rational(0), r}, {1 - r, Rational(1)}});
}

/// N pieces of length r separated by N - 1 equal gaps (1 - N r) / (N - 1).
inline IntervalSet spread_pieces(unsigned N, const Rational& r) {
  if (N < 2) throw InvalidArgument("spread_pieces: need N >= 2");
  if (r <= 0 || N * r >= 1) throw InvalidArgument("spread_pieces: need 0 < N r < 1");
  Rational gap = (1 - N * r) / (N - 1);
  std::vector<Interval> out;
  Rational lo = 0;
  for (unsigned i = 0; i < N; ++i) {
    out.push_back({lo, lo + r});
    lo += r + gap;
  }
  return IntervalSet(std::move(out));
}

struct Hole {
  std::size_t area = 0;
  std::size_t perimeter = 0;  // unit edges shared with occupied cells
};

/// Empty 4-connected components not touching the bounding box border of the
/// occupied region.
inline std::vector<Hole> enclosed_holes(const Grid2D& g) {
  const std::size_t n = g.side();
  std::size_t r0 = n, r1 = 0, c0 = n, c1 = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (g.at(r, c)) r0 = std::min(r0, r), r1 = std::max(r1, r), c0 = std::min(c0, c), c1 = std::max(c1, c);
  std::vector<Hole> holes;
  if (r0 > r1) return holes;
  std::vector<std::uint8_t> seen(n * n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c) {
      if (g.at(r, c) || seen[r * n + c]) continue;
      Hole h;
      bool touches_border = false;
      stack.push_back({r, c});
      seen[r * n + c] = 1;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        ++h.area;
        if (y == r0 || y == r1 || x == c0 || x == c1) touches_border = true;
        const long dy[4] = {-1, 1, 0, 0}, dx[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          long ny = static_cast<long>(y) + dy[k], nx = static_cast<long>(x) + dx[k];
          if (ny < static_cast<long>(r0) || ny > static_cast<long>(r1) || nx < static_cast<long>(c0) ||
              nx > static_cast<long>(c1))
            continue;
          auto uy = static_cast<std::size_t>(ny), ux = static_cast<std::size_t>(nx);
          if (g.at(uy, ux)) {
            ++h.perimeter;
          } else if (!seen[uy * n + ux]) {
            seen[uy * n + ux] = 1;
            stack.push_back({uy, ux});
          }
        }
      }
      if (!touches_border) holes.push_back(h);
    }
  return holes;
}

/// sqrt(S_max) / p_max of the largest enclosed hole.
inline double hole_lacunarity_2d(const Grid2D& g) {
  auto holes = enclosed_holes(g);
  if (holes.empty()) throw InvalidArgument("hole_lacunarity_2d: grid has no enclosed hole");
  const Hole* best = &holes.front();
  for (const auto& h : holes)
    if (h.area > best->area) best = &h;
  return std::sqrt(static_cast<double>(best->area)) / static_cast<double>(best->perimeter);
}

/// Each cell becomes a k x k block.
inline Grid2D upscale(const Grid2D& g, std::size_t k) {
  if (k == 0) throw InvalidArgument("upscale: factor must be positive");
  Grid2D out(g.side() * k, g.base());
  for (std::size_t r = 0; r < out.side(); ++r)
    for (std::size_t c = 0; c < out.side(); ++c) out.set(r, c, g.at(r / k, c / k));
  return out;
}

/// <s^2> - <s>^2 of the occupied-cell count s over every L x L window.
inline double gliding_box_variance(const Grid2D& g, std::size_t L) {
  const std::size_t n = g.side();
  if (L == 0 || L > n) throw InvalidArgument("gliding_box_variance: need 1 <= L <= side");
  // Summed-area table.
  std::vector<long long> sat((n + 1) * (n + 1), 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      sat[(r + 1) * (n + 1) + c + 1] =
          g.at(r, c) + sat[r * (n + 1) + c + 1] + sat[(r + 1) * (n + 1) + c] - sat[r * (n + 1) + c];
  const std::size_t positions = n - L + 1;
  double sum = 0, sum2 = 0;
  for (std::size_t r = 0; r < positions; ++r)
    for (std::size_t c = 0; c < positions; ++c) {
      double s = static_cast<double>(sat[(r + L) * (n + 1) + c + L] - sat[r * (n + 1) + c + L] -
                                     sat[(r + L) * (n + 1) + c] + sat[r * (n + 1) + c]);
      sum += s;
      sum2 += s * s;
    }
  const double count = static_cast<double>(positions) * static_cast<double>(positions);
  double mean = sum / count;
  return std::max(0.0, sum2 / count - mean * mean);
}

struct VarianceLacunarity {
  std::vector<std::size_t> box_sizes;
  std::vector<double> variances;
  dim::FitResult exponent;  // slope of ln variance against ln L
};

inline VarianceLacunarity variance_lacunarity(const Grid2D& g, const std::vector<std::size_t>& box_sizes) {
  if (box_sizes.size() < 2) throw InvalidArgument("variance_lacunarity: need at least 2 box sizes");
  VarianceLacunarity out;
  out.box_sizes = box_sizes;
  std::vector<double> x, y;
  for (std::size_t L : box_sizes) {
    if (L >= g.side()) throw InvalidArgument("variance_lacunarity: box size must be below grid side");
    double v = gliding_box_variance(g, L);
    out.variances.push_back(v);
    if (v > 0) {
      x.push_back(std::log(static_cast<double>(L)));
      y.push_back(std::log(v));
    }
  }
  if (x.size() >= 2) out.exponent = dim::fit_line(x, y);
  return out;
}

struct Histogram256 {
  std::array<double, 256> bins{};

  double total() const {
    double t = 0;
    for (double b : bins) t += b;
    return t;
  }

  void validate() const {
    for (double b : bins)
      if (!(b >= 0) || !std::isfinite(b)) throw InvalidArgument("histogram bins must be finite and non-negative");
    if (!(total() > 0)) throw InvalidArgument("histogram total must be positive");
  }
};

/// Additive smoothing applied to every bin of the normalised distributions.
inline constexpr double kKlEpsilon = 1e-9;

inline std::array<double, 256> smoothed_distribution(const Histogram256& h) {
  h.validate();
  std::array<double, 256> p{};
  const double t = h.total();
  double z = 0;
  for (std::size_t i = 0; i < 256; ++i) z += (p[i] = h.bins[i] / t + kKlEpsilon);
  for (double& v : p) v /= z;
  return p;
}

/// sum_i f1(i) ln(f1(i) / f2(i)) over smoothed, normalised histograms.
inline double kl_order(const Histogram256& f1, const Histogram256& f2) {
  auto p = smoothed_distribution(f1);
  auto q = smoothed_distribution(f2);
  double d = 0;
  for (std::size_t i = 0; i < 256; ++i) d += p[i] * std::log(p[i] / q[i]);
  return std::max(0.0, d);
}

inline void write_histogram_csv(std::ostream& os, const Histogram256& h) {
  os << "bin,count\n";
  for (std::size_t i = 0; i < 256; ++i) os << i << ',' << h.bins[i] << '\n';
}

/// 256 `bin,count` rows; a leading `bin,count` header is optional.
inline Histogram256 read_histogram_csv(std::istream& is) {
  Histogram256 h;
  std::vector<bool> filled(256, false);
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (row == 1 && line == "bin,count")) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("histogram CSV: row " + std::to_string(row) + " lacks ','");
    try {
      std::size_t used = 0;
      long bin = std::stol(line.substr(0, comma), &used);
      double count = std::stod(line.substr(comma + 1));
      if (bin < 0 || bin > 255) throw InvalidArgument("");
      h.bins[static_cast<std::size_t>(bin)] = count;
      filled[static_cast<std::size_t>(bin)] = true;
    } catch (const std::exception&) {
      throw InvalidArgument("histogram CSV: malformed row " + std::to_string(row));
    }
  }
  for (bool f : filled)
    if (!f) throw InvalidArgument("histogram CSV: expected all 256 bins");
  h.validate();
  return h;
}

}  // namespace fractalkit::structure
