#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fractalkit/sierpinski.hpp"

namespace fk = fractalkit;
namespace sp = fractalkit::sierpinski;
using fk::Membership;
using fk::Rational;

namespace {

Rational q(long n, unsigned long d) { return fk::make_rational(n, d); }

// Generation-G triangle cell of a point in the skewed frame, or nullopt when
// the point sits too close to a cell edge to attribute unambiguously.
std::pair<long, long> skew_cell(sp::Point2 p, unsigned G) {
  double u = p.x - p.y / sp::kSqrt3, v = 2 * p.y / sp::kSqrt3;
  double s = std::ldexp(1.0, static_cast<int>(G));
  return {static_cast<long>(std::floor(u * s)), static_cast<long>(std::floor(v * s))};
}

}  // namespace

TEST(Sierpinski, IfsMaps) {
  auto ifs = sp::sierpinski_ifs();
  ASSERT_EQ(ifs.size(), 3u);
  EXPECT_EQ(ifs.maps()[0]({1, 1}), (sp::Point2{0.5, 0.5}));
  EXPECT_EQ(ifs.maps()[1]({1, 0}), (sp::Point2{1, 0}));
  auto f3 = ifs.maps()[2]({0, 0});
  EXPECT_DOUBLE_EQ(f3.x, 0.25);
  EXPECT_DOUBLE_EQ(f3.y, std::sqrt(3.0) / 4);
  for (const auto& m : ifs.maps()) EXPECT_NEAR(m.operator_norm(), 0.5, 1e-15);
}

TEST(Sierpinski, SubdivisionCounts) {
  EXPECT_EQ(sp::triangle_subdivide(0).size(), 1u);
  EXPECT_EQ(sp::triangle_subdivide(3).size(), 27u);
  for (unsigned n = 0; n <= 8; ++n) {
    auto g = sp::rasterize(sp::triangle_subdivide(n), std::size_t{1} << n);
    EXPECT_EQ(g.count(), static_cast<std::size_t>(std::pow(3, n)));
  }
}

TEST(Sierpinski, AreaSeries) {
  EXPECT_EQ(sp::removed_area(1), q(1, 4));
  EXPECT_EQ(sp::removed_area(2), q(7, 16));
  for (unsigned n = 0; n <= 20; ++n) EXPECT_EQ(sp::removed_area(n), sp::removed_area_closed(n));
  // Surviving area bookkeeping: 3^n triangles of area 4^-n.
  for (unsigned n = 0; n <= 6; ++n)
    EXPECT_EQ(1 - sp::removed_area(n), Rational(fk::Integer(sp::triangle_subdivide(n).size()), fk::ipow(4, n)));
}

TEST(Sierpinski, PerimeterSeries) {
  EXPECT_EQ(sp::perimeter_sum(1), q(3, 2));
  EXPECT_EQ(sp::perimeter_sum(2), q(15, 4));
  for (unsigned n = 1; n <= 20; ++n) EXPECT_EQ(sp::perimeter_sum(n), sp::perimeter_closed(n));
}

TEST(Sierpinski, IfsRenderMatchesSubdivision) {
  auto ifs = sp::sierpinski_ifs();
  EXPECT_EQ(sp::ifs_render(ifs, 0, 1).count(), 1u);
  EXPECT_EQ(sp::ifs_render(ifs, 0, 8).count(), 64u);
  EXPECT_EQ(sp::ifs_render(ifs, 1, 2).count(), 3u);
  EXPECT_EQ(sp::ifs_render(ifs, 5, 32).count(), 243u);
  for (unsigned n = 0; n <= 8; ++n) {
    std::size_t R = std::size_t{1} << n;
    EXPECT_EQ(sp::ifs_render(ifs, n, R), sp::rasterize(sp::triangle_subdivide(n), R)) << n;
  }
  EXPECT_THROW(sp::ifs_render(ifs, 5, 16), fk::InvalidArgument);
  EXPECT_THROW(sp::ifs_render(ifs, 2, 6), fk::InvalidArgument);
}

TEST(Sierpinski, ChaosGameFromVertexStaysOnAttractor) {
  auto v = sp::initiator_vertices();
  auto pts = sp::chaos_game(v, v[0], 20000, 0, 1);
  for (const auto& p : pts) ASSERT_TRUE(sp::near_subdivision(p, 20, 1e-9));
}

TEST(Sierpinski, ChaosGameMembership) {
  auto pts = sp::chaos_game(sp::initiator_vertices(), sp::initiator_centroid(), 100000, 20, 42);
  ASSERT_EQ(pts.size(), 100000u);
  for (const auto& p : pts) ASSERT_TRUE(sp::near_subdivision(p, 8, std::ldexp(1.0, -8)));
  EXPECT_FALSE(sp::near_subdivision(sp::initiator_centroid(), 8));
}

TEST(Sierpinski, ChaosGameIsReproducible) {
  auto a = sp::chaos_game(sp::sierpinski_ifs(), {0, 0}, 1000, 10, 9);
  auto b = sp::chaos_game(sp::sierpinski_ifs(), {0, 0}, 1000, 10, 9);
  EXPECT_EQ(a, b);
  EXPECT_THROW(sp::chaos_game(sp::sierpinski_ifs(), {0, 0}, 0, 10, 9), fk::InvalidArgument);
}

TEST(Sierpinski, ChaosGameCoversEveryCell) {
  const unsigned G = 6;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::set<std::pair<long, long>> hit;
    for (const auto& p : sp::chaos_game(sp::initiator_vertices(), {0, 0}, 1000000, 0, seed)) {
      auto c = skew_cell(p, G);
      if ((c.first & c.second) == 0) hit.insert(c);
    }
    EXPECT_EQ(hit.size(), 729u) << "seed " << seed;
  }
}

TEST(Sierpinski, SirPinskyGame) {
  auto v = sp::initiator_vertices();
  EXPECT_EQ(sp::sir_pinsky_step(v[1], v[1]), v[1]);
  EXPECT_EQ(sp::sir_pinsky_step({0.5, 0}, v[0]), (sp::Point2{1, 0}));
  EXPECT_EQ(sp::sir_pinsky_escape_step({1, 0, 0}, 100), -1);
  EXPECT_EQ(sp::sir_pinsky_escape_step({q(1, 2), q(1, 2), 0}, 100), -1);
  EXPECT_EQ(sp::sir_pinsky_escape_step({q(1, 3), q(1, 3), q(1, 3)}, 100), 1);
  // A point deeper inside a removed copy escapes later.
  EXPECT_EQ(sp::sir_pinsky_escape_step({q(2, 3), q(1, 6), q(1, 6)}, 100), 2);
}

TEST(Sierpinski, BarycentricMembership) {
  EXPECT_EQ(sp::barycentric_membership(1, 0, 0, 10), Membership::in);
  EXPECT_EQ(sp::barycentric_membership(q(1, 2), q(1, 2), 0, 10), Membership::in);
  EXPECT_EQ(sp::barycentric_membership(q(1, 3), q(1, 3), q(1, 3), 10), Membership::out);
  // (1/2, 1/4, 1/4) is the midpoint of an edge of the first removed triangle,
  // hence on the closed attractor.
  EXPECT_EQ(sp::barycentric_membership(q(1, 2), q(1, 4), q(1, 4), 10), Membership::in);
  EXPECT_TRUE(sp::near_subdivision(sp::to_cartesian({q(1, 2), q(1, 4), q(1, 4)}), 10));
  EXPECT_THROW(sp::barycentric_membership(q(1, 2), q(1, 2), q(1, 2), 5), fk::InvalidArgument);
}

TEST(Sierpinski, BarycentricAgreesWithRaster) {
  // Dyadic points off every cell edge: digit test vs the generation-6 subdivision.
  const unsigned G = 6;
  const long N = 1L << (G + 2);
  for (long a = 0; a <= N; ++a)
    for (long b = 0; a + b <= N; ++b) {
      Rational y = q(4 * a + 1, 4 * N + 3), z = q(4 * b + 1, 4 * N + 3);
      Rational x = 1 - y - z;
      if (x < 0) continue;
      bool in = sp::barycentric_membership(x, y, z, G) != Membership::out;
      ASSERT_EQ(in, sp::near_subdivision(sp::to_cartesian({x, y, z}), G, 1e-12)) << a << ',' << b;
    }
}

TEST(Sierpinski, CarpetCounts) {
  auto s = sp::CarpetSpec::standard();
  EXPECT_EQ(sp::carpet_generate(s, 0).count(), 1u);
  EXPECT_EQ(sp::carpet_generate(s, 1).count(), 8u);
  EXPECT_FALSE(sp::carpet_generate(s, 1).at(1, 1));
  EXPECT_EQ(sp::carpet_generate(s, 4).count(), 4096u);
  EXPECT_EQ(sp::carpet_generate(sp::CarpetSpec::centre_removed(5), 2).count(), 576u);
  EXPECT_EQ(sp::CarpetSpec::ring(5).kept().size(), 16u);
  EXPECT_EQ(sp::CarpetSpec::centre_block_removed(7, 3).kept().size(), 40u);
  EXPECT_EQ(sp::CarpetSpec::scattered_holes(7).kept().size(), 40u);
}

TEST(Sierpinski, CarpetSelfSimilarityAndNesting) {
  for (auto spec : {sp::CarpetSpec::standard(), sp::CarpetSpec::ring(4), sp::CarpetSpec::scattered_holes(5)}) {
    const unsigned b = spec.base();
    for (unsigned n = 0; n <= 2; ++n) {
      auto small = sp::carpet_generate(spec, n), big = sp::carpet_generate(spec, n + 1);
      const std::size_t s = small.side();
      for (auto [R, C] : spec.kept())
        for (std::size_t r = 0; r < s; ++r)
          for (std::size_t c = 0; c < s; ++c) ASSERT_EQ(big.at(R * s + r, C * s + c), small.at(r, c));
      // Nesting: every occupied fine cell lies in an occupied coarse cell.
      for (std::size_t r = 0; r < big.side(); ++r)
        for (std::size_t c = 0; c < big.side(); ++c)
          if (big.at(r, c)) {
            ASSERT_TRUE(small.at(r / b, c / b));
          }
    }
  }
}

TEST(Sierpinski, CarpetDimensions) {
  EXPECT_NEAR(sp::carpet_dimension(sp::CarpetSpec::standard()), 1.892789, 1e-6);
  EXPECT_NEAR(sp::carpet_dimension(sp::CarpetSpec(4, {{0, 0}, {0, 3}, {3, 0}, {3, 3}})), 1.0, 1e-15);
  EXPECT_NEAR(sp::carpet_dimension(sp::CarpetSpec(4, {{1, 2}, {0, 1}, {3, 3}, {2, 0}})), 1.0, 1e-15);
  for (unsigned b : {3u, 5u, 7u}) {
    EXPECT_NEAR(sp::centred_ring_dimension(b), sp::carpet_dimension(sp::CarpetSpec::ring(b)), 1e-12);
    EXPECT_GT(sp::wide_ring_dimension_as_printed(b), 2.0);
    EXPECT_LT(sp::wide_ring_dimension_planar(b), 2.0);
  }
  EXPECT_THROW(sp::CarpetSpec(3, {{3, 0}}), fk::InvalidArgument);
  EXPECT_THROW(sp::CarpetSpec(3, {}), fk::InvalidArgument);
}

TEST(Sierpinski, NamedConstants) {
  std::map<std::string, double> c;
  for (const auto& k : sp::product_dimensions()) c[k.name] = k.value;
  EXPECT_NEAR(c.at("cantor_dust_CxC"), 1.2618595, 1e-7);
  EXPECT_NEAR(c.at("menger_sponge"), 2.726833, 1e-6);
  EXPECT_NEAR(c.at("cantor_cheese"), 2.965647, 1e-6);
  EXPECT_NEAR(c.at("C4xC4xC4"), 2.120085, 1e-6);
  // The commonly printed 1.41339018 is off in its last two digits.
  EXPECT_NEAR(c.at("C4xC4"), 1.41339018, 1e-7);
  EXPECT_NEAR(c.at("C4xC4"), c.at("C4xC4xC4") * 2 / 3, 1e-15);
  EXPECT_NEAR(c.at("triangle"), 1.58496250, 1e-8);
  EXPECT_EQ(c.at("pyramid"), 2.0);
  EXPECT_NEAR(sp::cheese_dimension(3), c.at("cantor_cheese"), 1e-15);
  EXPECT_NEAR(sp::cheese_dimension(2), std::log(8.0) / std::log(3.0), 1e-15);
  EXPECT_EQ(sp::pyramid_count(3), 64u);
}

TEST(Sierpinski, Sponge) {
  EXPECT_EQ(sp::sponge_generate(0).count(), 1u);
  EXPECT_EQ(sp::sponge_generate(1).count(), 20u);
  EXPECT_EQ(sp::sponge_generate(2).count(), 400u);
  EXPECT_EQ(sp::sponge_generate(3).count(), 8000u);
  auto g = sp::sponge_generate(2);
  auto carpet = sp::carpet_generate(sp::CarpetSpec::standard(), 2);
  for (unsigned axis = 0; axis < 3; ++axis) {
    EXPECT_EQ(sp::face_slice(g, axis, 0), carpet);
    EXPECT_EQ(sp::face_slice(g, axis, g.side() - 1), carpet);
  }
  EXPECT_THROW(sp::sponge_generate(5), fk::CapacityError);
  EXPECT_THROW(sp::face_slice(g, 3, 0), fk::InvalidArgument);
}

TEST(Sierpinski, PgmRoundTrip) {
  auto g = sp::carpet_generate(sp::CarpetSpec::standard(), 3);
  std::stringstream ss;
  fk::write_pgm(ss, g);
  EXPECT_EQ(ss.str().substr(0, 12), "P5\n27 27\n255");
  EXPECT_EQ(fk::read_pgm(ss), g);
  std::istringstream bad("P2\n2 2\n255\n");
  EXPECT_THROW(fk::read_pgm(bad), fk::InvalidArgument);
  std::istringstream truncated("P5\n4 4\n255\nab");
  EXPECT_THROW(fk::read_pgm(truncated), fk::InvalidArgument);
}
