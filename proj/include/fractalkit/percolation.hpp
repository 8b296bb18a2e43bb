#pragma once

// Site percolation on Sierpinski-carpet lattices: cell renormalisation over
// the 8-cell generator and Monte Carlo spanning with union-find.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fractalkit/error.hpp"
#include "fractalkit/grid.hpp"
#include "fractalkit/random.hpp"
#include "fractalkit/sierpinski.hpp"

namespace fractalkit::perc {

/// edge: cells sharing a side. hybrid: sides or a common corner.
enum class ConnectivityRule { edge, hybrid };

inline const char* to_string(ConnectivityRule r) { return r == ConnectivityRule::edge ? "edge" : "hybrid"; }

inline ConnectivityRule parse_rule(const std::string& s) {
  if (s == "edge") return ConnectivityRule::edge;
  if (s == "hybrid") return ConnectivityRule::hybrid;
  throw InvalidArgument("unknown connectivity rule '" + s + "' (expected edge|hybrid)");
}

inline bool adjacent(ConnectivityRule rule, long dr, long dc) {
  long ar = std::labs(dr), ac = std::labs(dc);
  if (ar > 1 || ac > 1 || ar + ac == 0) return false;
  return rule == ConnectivityRule::hybrid || ar + ac == 1;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

/// Does some cluster of open cells touch both column 0 and column side - 1?
inline bool spans_left_right(const Grid2D& open, ConnectivityRule rule) {
  const std::size_t n = open.side();
  DisjointSets ds(n * n);
  const long offsets[4][2] = {{0, 1}, {1, -1}, {1, 0}, {1, 1}};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (!open.at(r, c)) continue;
      for (const auto& o : offsets) {
        if (!adjacent(rule, o[0], o[1])) continue;
        long nr = static_cast<long>(r) + o[0], nc = static_cast<long>(c) + o[1];
        if (nr >= static_cast<long>(n) || nc < 0 || nc >= static_cast<long>(n)) continue;
        if (open.at(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)))
          ds.unite(r * n + c, static_cast<std::size_t>(nr) * n + static_cast<std::size_t>(nc));
      }
    }
  std::vector<std::uint8_t> left(n * n, 0);
  for (std::size_t r = 0; r < n; ++r)
    if (open.at(r, 0)) left[ds.find(r * n)] = 1;
  for (std::size_t r = 0; r < n; ++r)
    if (open.at(r, n - 1) && left[ds.find(r * n + n - 1)]) return true;
  return false;
}

/// The generator cells in row-major order, centre excluded.
inline std::array<std::pair<unsigned, unsigned>, 8> generator_cells() {
  return {{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}}};
}

/// Open cells of the generator for bit pattern `mask` (bit i = cell i).
inline Grid2D generator_pattern(unsigned mask) {
  Grid2D g(3, 3);
  auto cells = generator_cells();
  for (unsigned i = 0; i < 8; ++i)
    if (mask >> i & 1u) g.set(cells[i].first, cells[i].second);
  return g;
}

inline bool pattern_spans(unsigned mask, ConnectivityRule rule) { return spans_left_right(generator_pattern(mask), rule); }

/// R(p) = sum_k c_k p^k (1 - p)^(8 - k).
class RGPolynomial {
 public:
  explicit RGPolynomial(std::array<std::uint32_t, 9> counts) : c_(counts) {
    std::uint32_t binom = 1;
    for (unsigned k = 0; k <= 8; ++k) {
      if (c_[k] > binom) throw InvalidArgument("RGPolynomial: c_k exceeds C(8,k)");
      binom = binom * (8 - k) / (k + 1);
    }
    if (c_[8] > 1) throw InvalidArgument("RGPolynomial: c_8 must be 0 or 1");
  }

  const std::array<std::uint32_t, 9>& counts() const { return c_; }

  double operator()(double p) const {
    if (!(p >= 0 && p <= 1)) throw InvalidArgument("rg_apply: p must lie in [0,1]");
    double s = 0;
    for (unsigned k = 0; k <= 8; ++k) s += c_[k] * std::pow(p, k) * std::pow(1 - p, 8 - k);
    return s;
  }

  /// Coefficients a_j of R(p) = sum_j a_j p^j.
  std::array<long long, 9> power_coefficients() const {
    std::array<long long, 9> a{};
    for (unsigned k = 0; k <= 8; ++k) {
      // c_k p^k (1 - p)^(8-k) = c_k sum_i C(8-k, i) (-1)^i p^(k+i)
      long long binom = 1;
      for (unsigned i = 0; i + k <= 8; ++i) {
        a[k + i] += (i % 2 ? -1 : 1) * static_cast<long long>(c_[k]) * binom;
        binom = binom * (8 - k - i) / (i + 1);
      }
    }
    return a;
  }

  /// Exact R'(p) from the power-basis coefficients.
  double derivative(double p) const {
    auto a = power_coefficients();
    double s = 0;
    for (unsigned j = 8; j >= 1; --j) s = s * p + j * static_cast<double>(a[j]);
    return s;
  }

  friend bool operator==(const RGPolynomial& x, const RGPolynomial& y) { return x.c_ == y.c_; }

 private:
  std::array<std::uint32_t, 9> c_;
};

/// Exhaustive scan of the 2^8 generator patterns.
inline RGPolynomial enumerate_rg(ConnectivityRule rule) {
  std::array<std::uint32_t, 9> c{};
  for (unsigned mask = 0; mask < 256; ++mask)
    if (pattern_spans(mask, rule)) ++c[static_cast<unsigned>(__builtin_popcount(mask))];
  return RGPolynomial(c);
}

/// Coefficient table quoted for the hybrid carpet, (c_3..c_8) = (8, 38, 44,
/// 27, 8, 1). Neither adjacency rule reproduces c_4 = 38 under left-right
/// spanning; enumeration gives 31.
inline RGPolynomial quoted_hybrid_polynomial() { return RGPolynomial({0, 0, 0, 8, 38, 44, 27, 8, 1}); }

/// Relevant (R' > 1) fixed point of R in (0, 1).
inline double fixed_point(const RGPolynomial& poly) {
  auto a = poly.power_coefficients();
  a[1] -= 1;
  if (std::all_of(a.begin(), a.end(), [](long long v) { return v == 0; }))
    throw NumericalError("fixed_point: R(p) = p identically, continuum of fixed points");
  auto g = [&](double p) { return poly(p) - p; };
  const double lo_end = 1e-6, hi_end = 1 - 1e-6;
  const int grid = 4096;
  std::optional<double> best;
  double prev_p = lo_end, prev_g = g(lo_end);
  for (int i = 1; i <= grid; ++i) {
    double p = lo_end + (hi_end - lo_end) * i / grid;
    double gp = g(p);
    if (prev_g == 0 || (prev_g < 0) != (gp < 0)) {
      double lo = prev_p, hi = p, glo = prev_g;
      double mid = lo;
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (std::abs(gm) < 1e-12 && hi - lo < 1e-12) break;
        if ((gm < 0) == (glo < 0)) lo = mid, glo = gm;
        else hi = mid;
        if (hi - lo < 1e-15) break;
      }
      if (poly.derivative(mid) > 1 && !best) best = mid;
    }
    prev_p = p, prev_g = gp;
  }
  if (!best) throw NumericalError("fixed_point: no relevant interior fixed point");
  return *best;
}

struct ExponentFamily {
  double p_c;
  double lambda;
  double nu;
  double beta;
  double gamma;
  double alpha_heat;
  double delta_gap;
};

inline double carpet_cluster_dimension() { return std::log(8.0) / std::log(3.0); }

/// Cell-RG exponents with lambda = R'(p_c), nu = ln b / ln lambda and the
/// hyperscaling family built on D = d - beta / nu.
inline ExponentFamily critical_exponents(const RGPolynomial& poly, double b = 3, double D = carpet_cluster_dimension(),
                                         double d = 2) {
  ExponentFamily e{};
  e.p_c = fixed_point(poly);
  e.lambda = poly.derivative(e.p_c);
  if (!(e.lambda > 1)) throw NumericalError("critical_exponents: fixed point is not relevant (lambda <= 1)");
  e.nu = std::log(b) / std::log(e.lambda);
  e.beta = e.nu * (d - D);
  e.gamma = e.nu * d - 2 * e.beta;
  e.alpha_heat = 2 - e.nu * d;
  e.delta_gap = e.nu * d - e.beta;
  return e;
}

/// Generation-G carpet with an open/closed bit for every kept cell.
class CarpetLattice {
 public:
  static constexpr unsigned max_generation = 6;

  explicit CarpetLattice(unsigned G) : G_(G), mask_(check(G)), open_(mask_.side(), 3) {}

  unsigned generation() const { return G_; }
  const Grid2D& mask() const { return mask_; }
  const Grid2D& open() const { return open_; }

  /// One draw per masked cell in row-major order; open iff u < p.
  void occupy(double p, RandomStream& rng) {
    if (!(p >= 0 && p <= 1)) throw InvalidArgument("occupation probability must lie in [0,1]");
    for (std::size_t r = 0; r < mask_.side(); ++r)
      for (std::size_t c = 0; c < mask_.side(); ++c)
        if (mask_.at(r, c)) open_.set(r, c, rng.next_unit() < p);
  }

 private:
  static Grid2D check(unsigned G) {
    if (G > max_generation) throw CapacityError("carpet lattice generation exceeds 6");
    return sierpinski::carpet_generate(sierpinski::CarpetSpec::standard(), G);
  }

  unsigned G_;
  Grid2D mask_;
  Grid2D open_;
};

struct SpanningEstimate {
  double fraction;
  double stderr_;
  std::size_t trials;
};

/// Trial t draws from derived_stream(seed, t), so equal seeds couple runs
/// across p and across rules.
inline SpanningEstimate mc_spanning(unsigned G, ConnectivityRule rule, double p, std::size_t trials,
                                    std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("mc_spanning: p must lie in [0,1]");
  if (trials == 0) throw InvalidArgument("mc_spanning: trials must be positive");
  CarpetLattice lattice(G);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = derived_stream(seed, t);
    lattice.occupy(p, rng);
    hits += spans_left_right(lattice.open(), rule);
  }
  double f = static_cast<double>(hits) / static_cast<double>(trials);
  return {f, std::sqrt(f * (1 - f) / static_cast<double>(trials)), trials};
}

struct ThresholdEstimate {
  double p;
  double uncertainty;
  unsigned iterations;
  bool non_monotone;  // a higher p gave a lower fraction during the search
};

/// Bisection on spanning fraction = 1/2.
inline ThresholdEstimate mc_threshold(unsigned G, ConnectivityRule rule, std::size_t trials, std::uint64_t seed,
                                      unsigned max_iterations = 12) {
  double lo = 0, hi = 1;
  double f_lo = 0, f_hi = 1;
  ThresholdEstimate out{0.5, 0.5, 0, false};
  for (unsigned it = 0; it < max_iterations; ++it) {
    double mid = 0.5 * (lo + hi);
    auto est = mc_spanning(G, rule, mid, trials, seed);
    out.iterations = it + 1;
    if (est.fraction < f_lo || est.fraction > f_hi) out.non_monotone = true;
    if (std::abs(est.fraction - 0.5) < 2 * est.stderr_) {
      lo = hi = mid;
      break;
    }
    if (est.fraction < 0.5) lo = mid, f_lo = est.fraction;
    else hi = mid, f_hi = est.fraction;
  }
  out.p = 0.5 * (lo + hi);
  // A single trial resolves nothing finer than its binomial spread.
  out.uncertainty = std::max(0.5 * (hi - lo), 0.5 / std::sqrt(static_cast<double>(trials)));
  return out;
}

}  // namespace fractalkit::perc
