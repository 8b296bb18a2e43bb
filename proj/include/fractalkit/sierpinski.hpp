#pragma once

// Sierpinski triangle, carpet family, Menger sponge and related analytic
// constants.
//
// The unit equilateral initiator has vertices (0,0), (1,0), (1/2, sqrt(3)/2).
// Triangle rasters live in the skewed frame where that triangle becomes the
// lower-left half of the unit square: raster cell (i, j) at resolution R spans
// u in [i/R, (i+1)/R), v in [j/R, (j+1)/R) with x = u + v/2, y = v sqrt(3)/2.
// A cell is occupied iff its sample point ((i + 1/3)/R, (j + 1/3)/R), the
// centroid of the cell's upward half, lies in a surviving shape. Row 0 of the
// Grid2D is the top (largest v).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/error.hpp"
#include "fractalkit/grid.hpp"
#include "fractalkit/random.hpp"
#include "fractalkit/rational.hpp"

namespace fractalkit::sierpinski {

inline const double kSqrt3 = std::sqrt(3.0);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct AffineMap2D {
  std::array<double, 4> linear{1, 0, 0, 1};  // row-major 2x2
  std::array<double, 2> offset{0, 0};

  Point2 operator()(Point2 p) const {
    return {linear[0] * p.x + linear[1] * p.y + offset[0], linear[2] * p.x + linear[3] * p.y + offset[1]};
  }

  double operator_norm() const {
    // Largest singular value of the linear part.
    double a = linear[0], b = linear[1], c = linear[2], d = linear[3];
    double s1 = a * a + b * b + c * c + d * d;
    double det = a * d - b * c;
    return std::sqrt(0.5 * (s1 + std::sqrt(std::max(0.0, s1 * s1 - 4 * det * det))));
  }

  AffineMap2D then(const AffineMap2D& outer) const {
    AffineMap2D r;
    const auto& A = outer.linear;
    const auto& B = linear;
    r.linear = {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
                A[2] * B[1] + A[3] * B[3]};
    Point2 o = outer({offset[0], offset[1]});
    r.offset = {o.x, o.y};
    return r;
  }

  AffineMap2D inverse() const {
    double det = linear[0] * linear[3] - linear[1] * linear[2];
    if (det == 0) throw InvalidArgument("singular affine map");
    AffineMap2D r;
    r.linear = {linear[3] / det, -linear[1] / det, -linear[2] / det, linear[0] / det};
    r.offset = {-(r.linear[0] * offset[0] + r.linear[1] * offset[1]),
                -(r.linear[2] * offset[0] + r.linear[3] * offset[1])};
    return r;
  }
};

class IFS {
 public:
  explicit IFS(std::vector<AffineMap2D> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw InvalidArgument("IFS needs at least one map");
    for (const auto& m : maps_)
      if (!(m.operator_norm() < 1)) throw InvalidArgument("IFS maps must be contractions");
  }
  const std::vector<AffineMap2D>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }

 private:
  std::vector<AffineMap2D> maps_;
};

/// The three half-scale maps with offsets (0,0), (1/2,0), (1/4, sqrt(3)/4).
inline IFS sierpinski_ifs() {
  auto half = [](double ox, double oy) { return AffineMap2D{{0.5, 0, 0, 0.5}, {ox, oy}}; };
  return IFS({half(0, 0), half(0.5, 0), half(0.25, kSqrt3 / 4)});
}

/// Raster unit square -> plane, for the triangle rasters.
inline AffineMap2D triangle_frame() { return AffineMap2D{{1, 0.5, 0, kSqrt3 / 2}, {0, 0}}; }

inline std::array<Point2, 3> initiator_vertices() { return {Point2{0, 0}, Point2{1, 0}, Point2{0.5, kSqrt3 / 2}}; }

/// Upward triangle of generation `level`: skewed-lattice corner (a, b), side 2^-level.
struct Triangle {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  unsigned level = 0;

  std::array<Point2, 3> vertices() const {
    double s = std::ldexp(1.0, -static_cast<int>(level));
    auto frame = triangle_frame();
    return {frame({a * s, b * s}), frame({(a + 1) * s, b * s}), frame({a * s, (b + 1) * s})};
  }
};

inline std::vector<Triangle> triangle_subdivide(unsigned n) {
  if (n > 13) throw CapacityError("triangle_subdivide: generation above 13");
  std::vector<Triangle> tris{{0, 0, 0}};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<Triangle> next;
    next.reserve(tris.size() * 3);
    for (const auto& t : tris) {
      next.push_back({2 * t.a, 2 * t.b, k + 1});
      next.push_back({2 * t.a + 1, 2 * t.b, k + 1});
      next.push_back({2 * t.a, 2 * t.b + 1, k + 1});
    }
    tris = std::move(next);
  }
  return tris;
}

/// Area of the removed triangles through generation n, in units of the initiator area.
inline Rational removed_area(unsigned n) {
  Rational sum = 0;
  Rational term(1, 4);
  for (unsigned k = 1; k <= n; ++k) {
    sum += term;
    term *= Rational(3, 4);
  }
  return sum;
}

inline Rational removed_area_closed(unsigned n) { return 1 - rpow(Rational(3, 4), n); }

/// Summed perimeter of all removed triangles through generation n (unit side).
inline Rational perimeter_sum(unsigned n) {
  Rational sum = 0;
  for (unsigned k = 1; k <= n; ++k) sum += rpow(Rational(3, 2), k);
  return sum;
}

inline Rational perimeter_closed(unsigned n) { return 3 * (rpow(Rational(3, 2), n) - 1); }

namespace detail {

inline void check_resolution(std::size_t resolution, unsigned n) {
  if (resolution == 0 || (resolution & (resolution - 1)) != 0)
    throw InvalidArgument("resolution must be a power of two");
  if (n >= 63 || resolution < (std::size_t{1} << n))
    throw InvalidArgument("resolution below 2^n undersamples generation " + std::to_string(n));
}

inline void mark(Grid2D& g, std::size_t i, std::size_t j) { g.set(g.side() - 1 - j, i); }

/// Snap to the nearest multiple of 2^-30 when within 1e-12 of it.
inline double snap_dyadic(double v) {
  double scaled = std::ldexp(v, 30);
  double r = std::round(scaled);
  return std::abs(scaled - r) < std::ldexp(1e-12, 30) ? std::ldexp(r, -30) : v;
}

}  // namespace detail

inline Grid2D rasterize(const std::vector<Triangle>& tris, std::size_t resolution) {
  unsigned level = tris.empty() ? 0 : tris.front().level;
  detail::check_resolution(resolution, level);
  Grid2D g(resolution);
  const std::size_t s = resolution >> level;  // cells per triangle side
  for (const auto& t : tris) {
    if (t.level != level) throw InvalidArgument("rasterize: mixed triangle generations");
    std::size_t a = t.a * s, b = t.b * s;
    for (std::size_t i = a; i < a + s; ++i)
      for (std::size_t j = b; j < b + s; ++j)
        if ((3 * (i - a) + 1) + (3 * (j - b) + 1) <= 3 * s) detail::mark(g, i, j);
  }
  return g;
}

/// Union of all length-n compositions of the IFS applied to the seed, where the
/// seed is the unit square of the raster frame.
inline Grid2D ifs_render(const IFS& ifs, unsigned n, std::size_t resolution,
                         const AffineMap2D& frame = triangle_frame()) {
  detail::check_resolution(resolution, n);
  if (n > 12) throw CapacityError("ifs_render: generation above 12");
  AffineMap2D to_plane = frame;
  AffineMap2D to_raster = frame.inverse();
  std::vector<AffineMap2D> local;
  for (const auto& m : ifs.maps()) {
    AffineMap2D c = to_plane.then(m).then(to_raster);
    for (auto& v : c.linear) v = detail::snap_dyadic(v);
    for (auto& v : c.offset) v = detail::snap_dyadic(v);
    local.push_back(c);
  }
  std::vector<AffineMap2D> words{AffineMap2D{}};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<AffineMap2D> next;
    next.reserve(words.size() * local.size());
    for (const auto& w : words)
      for (const auto& m : local) next.push_back(m.then(w));
    words = std::move(next);
  }
  Grid2D g(resolution);
  const double R = static_cast<double>(resolution);
  for (const auto& w : words) {
    std::array<Point2, 4> corners{w({0, 0}), w({1, 0}), w({0, 1}), w({1, 1})};
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (auto c : corners) {
      umin = std::min(umin, c.x), umax = std::max(umax, c.x);
      vmin = std::min(vmin, c.y), vmax = std::max(vmax, c.y);
    }
    AffineMap2D inv = w.inverse();
    auto lo_i = static_cast<long>(std::floor(umin * R)) - 1, hi_i = static_cast<long>(std::ceil(umax * R)) + 1;
    auto lo_j = static_cast<long>(std::floor(vmin * R)) - 1, hi_j = static_cast<long>(std::ceil(vmax * R)) + 1;
    for (long i = std::max(0L, lo_i); i < std::min<long>(hi_i, static_cast<long>(resolution)); ++i)
      for (long j = std::max(0L, lo_j); j < std::min<long>(hi_j, static_cast<long>(resolution)); ++j) {
        Point2 back = inv({(i + 1.0 / 3.0) / R, (j + 1.0 / 3.0) / R});
        if (back.x >= 0 && back.x < 1 && back.y >= 0 && back.y < 1)
          detail::mark(g, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
  }
  return g;
}

/// Random iteration: each step applies a uniformly chosen map
/// (choice = next_u64 mod #maps). The first `transient` iterates are dropped.
inline std::vector<Point2> chaos_game(const IFS& ifs, Point2 start, std::size_t points, std::size_t transient,
                                      std::uint64_t seed) {
  if (points < 1) throw InvalidArgument("chaos_game: need at least one point");
  RandomStream rng(seed);
  std::vector<Point2> out;
  out.reserve(points);
  Point2 p = start;
  for (std::size_t k = 0; k < transient + points; ++k) {
    p = ifs.maps()[rng.next_choice(ifs.size())](p);
    if (k >= transient) out.push_back(p);
  }
  return out;
}

/// Barnsley's midpoint rule over a vertex triple.
inline std::vector<Point2> chaos_game(const std::array<Point2, 3>& vertices, Point2 start, std::size_t points,
                                      std::size_t transient, std::uint64_t seed) {
  std::vector<AffineMap2D> maps;
  for (auto v : vertices) maps.push_back(AffineMap2D{{0.5, 0, 0, 0.5}, {v.x / 2, v.y / 2}});
  return chaos_game(IFS(std::move(maps)), start, points, transient, seed);
}

/// Centroid of the initiator, inside the first removed triangle.
inline Point2 initiator_centroid() { return {0.5, kSqrt3 / 6}; }

/// True when p lies within `tol` (skewed-frame units) of the generation-G subdivision set.
inline bool near_subdivision(Point2 p, unsigned G, double tol = 1e-9) {
  if (G > 30) throw InvalidArgument("near_subdivision: generation above 30");
  double u = p.x - p.y / kSqrt3, v = 2 * p.y / kSqrt3;
  const double scale = std::ldexp(1.0, static_cast<int>(G));
  const long cells = static_cast<long>(scale);
  double su = u * scale, sv = v * scale, st = tol * scale;
  long ci = static_cast<long>(std::floor(su)), cj = static_cast<long>(std::floor(sv));
  for (long i = ci - 1; i <= ci + 1; ++i)
    for (long j = cj - 1; j <= cj + 1; ++j) {
      if (i < 0 || j < 0 || i + j >= cells) continue;
      if ((i & j) != 0) continue;
      double du = su - i, dv = sv - j;
      if (du >= -st && dv >= -st && du + dv <= 1 + st) return true;
    }
  return false;
}

/// One step of the sir-Pinsky game: reflect away from vertex v, p -> 2p - v.
inline Point2 sir_pinsky_step(Point2 p, Point2 v) { return {2 * p.x - v.x, 2 * p.y - v.y}; }

/// Barycentric point (weights of the vertices (0,0), (1,0), (1/2, sqrt3/2)).
struct Barycentric {
  Rational x;
  Rational y;
  Rational z;
};

inline Point2 to_cartesian(const Barycentric& b) {
  double y = to_double(b.y), z = to_double(b.z);
  return {y + z / 2, z * kSqrt3 / 2};
}

/// Iterates the sir-Pinsky game exactly, always expanding from the nearest
/// vertex (the largest barycentric weight). Returns the step at which the
/// point leaves the initiator, or -1 if it stays for all `steps`.
inline long sir_pinsky_escape_step(Barycentric p, unsigned steps) {
  auto inside = [](const Barycentric& b) { return b.x >= 0 && b.y >= 0 && b.z >= 0; };
  if (!inside(p)) return 0;
  for (unsigned s = 1; s <= steps; ++s) {
    if (p.x >= p.y && p.x >= p.z) p = {2 * p.x - 1, 2 * p.y, 2 * p.z};
    else if (p.y >= p.z) p = {2 * p.x, 2 * p.y - 1, 2 * p.z};
    else p = {2 * p.x, 2 * p.y, 2 * p.z - 1};
    if (!inside(p)) return static_cast<long>(s);
  }
  return -1;
}

/// Binary-digit test: at every place exactly one coordinate carries a 1.
/// Dual expansions are followed (as a branch set), so points on sub-triangle
/// edges count as members; verdicts as for Cantor membership.
inline Membership barycentric_membership(const Rational& x, const Rational& y, const Rational& z, unsigned depth) {
  if (x + y + z != 1) throw InvalidArgument("barycentric coordinates must sum to 1");
  if (x < 0 || y < 0 || z < 0) throw InvalidArgument("barycentric coordinates must be non-negative");
  using Triple = std::array<Rational, 3>;
  std::vector<Triple> frontier{{x, y, z}};
  std::set<std::vector<Triple>> seen;
  auto normalise = [](std::vector<Triple>& f) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  };
  for (unsigned place = 0; place < depth; ++place) {
    normalise(frontier);
    if (!seen.insert(frontier).second) return Membership::in;
    std::vector<Triple> next;
    for (const auto& t : frontier)
      for (int k = 0; k < 3; ++k)
        if (2 * t[k] >= 1) {
          Triple c{2 * t[0], 2 * t[1], 2 * t[2]};
          c[k] -= 1;
          next.push_back(c);
        }
    if (next.empty()) return Membership::out;
    frontier = std::move(next);
  }
  normalise(frontier);
  return seen.count(frontier) ? Membership::in : Membership::undecided;
}

/// b x b generator; `kept` holds (row, col) cells, row 0 at the top.
class CarpetSpec {
 public:
  CarpetSpec(unsigned base, std::set<std::pair<unsigned, unsigned>> kept) : base_(base), kept_(std::move(kept)) {
    if (base_ < 2) throw InvalidArgument("carpet base must be >= 2");
    if (kept_.empty() || kept_.size() > base_ * base_) throw InvalidArgument("carpet needs 1..b^2 kept cells");
    for (auto [r, c] : kept_)
      if (r >= base_ || c >= base_) throw InvalidArgument("carpet kept cell outside generator");
  }

  /// 3x3 with the centre removed.
  static CarpetSpec standard() {
    std::set<std::pair<unsigned, unsigned>> k;
    for (unsigned r = 0; r < 3; ++r)
      for (unsigned c = 0; c < 3; ++c)
        if (r != 1 || c != 1) k.insert({r, c});
    return CarpetSpec(3, k);
  }

  /// b x b with the central cell removed (b odd).
  static CarpetSpec centre_removed(unsigned b) {
    if (b % 2 == 0) throw InvalidArgument("centre_removed needs odd base");
    std::set<std::pair<unsigned, unsigned>> k;
    for (unsigned r = 0; r < b; ++r)
      for (unsigned c = 0; c < b; ++c)
        if (r != b / 2 || c != b / 2) k.insert({r, c});
    return CarpetSpec(b, k);
  }

  /// Narrow ring of 4(b - 1) border cells.
  static CarpetSpec ring(unsigned b) {
    std::set<std::pair<unsigned, unsigned>> k;
    for (unsigned r = 0; r < b; ++r)
      for (unsigned c = 0; c < b; ++c)
        if (r == 0 || c == 0 || r == b - 1 || c == b - 1) k.insert({r, c});
    return CarpetSpec(b, k);
  }

  /// b x b with a centred h x h block removed (b - h even).
  static CarpetSpec centre_block_removed(unsigned b, unsigned h) {
    if (h == 0 || h >= b || (b - h) % 2) throw InvalidArgument("centre block must be centred and smaller than b");
    std::set<std::pair<unsigned, unsigned>> k;
    unsigned lo = (b - h) / 2;
    for (unsigned r = 0; r < b; ++r)
      for (unsigned c = 0; c < b; ++c)
        if (r < lo || r >= lo + h || c < lo || c >= lo + h) k.insert({r, c});
    return CarpetSpec(b, k);
  }

  /// b x b with every (odd, odd) cell removed: ((b - 1) / 2)^2 isolated holes.
  static CarpetSpec scattered_holes(unsigned b) {
    if (b < 3 || b % 2 == 0) throw InvalidArgument("scattered_holes needs odd b >= 3");
    std::set<std::pair<unsigned, unsigned>> k;
    for (unsigned r = 0; r < b; ++r)
      for (unsigned c = 0; c < b; ++c)
        if (r % 2 == 0 || c % 2 == 0) k.insert({r, c});
    return CarpetSpec(b, k);
  }

  unsigned base() const { return base_; }
  const std::set<std::pair<unsigned, unsigned>>& kept() const { return kept_; }
  bool keeps(unsigned r, unsigned c) const { return kept_.count({r, c}) != 0; }

 private:
  unsigned base_;
  std::set<std::pair<unsigned, unsigned>> kept_;
};

inline Grid2D carpet_generate(const CarpetSpec& spec, unsigned n) {
  const unsigned b = spec.base();
  std::size_t side = 1;
  for (unsigned k = 0; k < n; ++k) {
    if (side > RasterCaps::max_cells_2d) throw CapacityError("carpet raster exceeds capacity");
    side *= b;
  }
  Grid2D g(side, b);
  std::vector<std::uint8_t> table(b * b);
  for (unsigned r = 0; r < b; ++r)
    for (unsigned c = 0; c < b; ++c) table[r * b + c] = spec.keeps(r, c);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      bool on = true;
      std::size_t rr = r, cc = c;
      for (unsigned k = 0; k < n && on; ++k, rr /= b, cc /= b) on = table[(rr % b) * b + cc % b];
      g.set(r, c, on);
    }
  return g;
}

inline double carpet_dimension(const CarpetSpec& spec) {
  return std::log(static_cast<double>(spec.kept().size())) / std::log(static_cast<double>(spec.base()));
}

/// ln[4(b - 1)] / ln b for the narrow-ring centred carpet.
inline double centred_ring_dimension(unsigned b) {
  if (b < 3) throw InvalidArgument("centred carpet base must exceed 2");
  return std::log(4.0 * (b - 1)) / std::log(static_cast<double>(b));
}

/// ln(b^3 - 1) / ln b, the wide-ring formula exactly as printed. It exceeds 2
/// for b >= 3, so it cannot describe a planar carpet; ln(b^2 - 1) / ln b is the
/// planar-consistent count and is available as wide_ring_dimension_planar.
inline double wide_ring_dimension_as_printed(unsigned b) {
  if (b < 3 || b % 2 == 0) throw InvalidArgument("wide-ring carpet needs odd b > 3");
  double bb = b;
  return std::log(bb * bb * bb - 1) / std::log(bb);
}

inline double wide_ring_dimension_planar(unsigned b) {
  if (b < 3 || b % 2 == 0) throw InvalidArgument("wide-ring carpet needs odd b > 3");
  double bb = b;
  return std::log(bb * bb - 1) / std::log(bb);
}

struct NamedConstant {
  std::string name;
  std::string formula;
  double value;
};

/// Analytic dimensions of the product, carpet, sponge, pyramid and curve constructions.
inline std::vector<NamedConstant> product_dimensions() {
  const double ln2 = std::log(2.0), ln3 = std::log(3.0);
  return {
      {"cantor_dust_CxC", "2 ln2/ln3", 2 * ln2 / ln3},
      {"carpet", "ln8/ln3", std::log(8.0) / ln3},
      {"C4xC4xC4", "3 ln2/ln(8/3)", 3 * ln2 / std::log(8.0 / 3.0)},
      {"C4xC4", "2 ln2/ln(8/3)", 2 * ln2 / std::log(8.0 / 3.0)},
      {"menger_sponge", "ln20/ln3", std::log(20.0) / ln3},
      {"cantor_cheese", "ln26/ln3", std::log(26.0) / ln3},
      {"pyramid", "ln4/ln2", std::log(4.0) / ln2},
      {"triangle", "ln3/ln2", ln3 / ln2},
      {"unit_dimension_dust", "ln4/ln4", 1.0},
      {"koch_curve", "ln4/ln3", std::log(4.0) / ln3},
  };
}

/// ln(3^k - 1)/ln3 for the k-dimensional cheese.
inline double cheese_dimension(unsigned k) {
  if (k < 1) throw InvalidArgument("cheese dimension needs k >= 1");
  return std::log(std::pow(3.0, k) - 1) / std::log(3.0);
}

/// Tetrahedra in the generation-n pyramid: 4^n.
inline std::uint64_t pyramid_count(unsigned n) {
  if (n > 31) throw CapacityError("pyramid_count: n above 31");
  return std::uint64_t{1} << (2 * n);
}

inline double pyramid_dimension() { return std::log(4.0) / std::log(2.0); }

/// Menger sponge: a voxel survives iff no base-3 digit place has two or more
/// coordinates equal to 1.
inline Grid3D sponge_generate(unsigned n) {
  if (n > 4) throw CapacityError("sponge_generate: generation above 4");
  std::size_t side = 1;
  for (unsigned k = 0; k < n; ++k) side *= 3;
  Grid3D g(side, 3);
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y)
      for (std::size_t z = 0; z < side; ++z) {
        bool on = true;
        for (std::size_t a = x, b = y, c = z; on && (a || b || c); a /= 3, b /= 3, c /= 3)
          on = (a % 3 == 1) + (b % 3 == 1) + (c % 3 == 1) < 2;
        g.set(x, y, z, on);
      }
  return g;
}

/// 2D cut of a voxel grid at `index` along `axis` (0 = x, 1 = y, 2 = z); the
/// remaining two axes become (row, col) in their natural order.
inline Grid2D face_slice(const Grid3D& g, unsigned axis, std::size_t index) {
  if (axis > 2) throw InvalidArgument("face_slice: axis must be 0, 1 or 2");
  if (index >= g.side()) throw InvalidArgument("face_slice: index out of range");
  Grid2D s(g.side(), g.base());
  for (std::size_t r = 0; r < g.side(); ++r)
    for (std::size_t c = 0; c < g.side(); ++c) {
      bool on = axis == 0 ? g.at(index, r, c) : axis == 1 ? g.at(r, index, c) : g.at(r, c, index);
      s.set(r, c, on);
    }
  return s;
}

}  // namespace fractalkit::sierpinski
