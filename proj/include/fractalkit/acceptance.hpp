#pragma once

// The ten reproduction criteria, shared by the acceptance test binary and the
// `reproduce` subcommand. Each criterion collects named sub-checks and passes
// only when all of them do.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fractalkit/cantor_function.hpp"
#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/dimension.hpp"
#include "fractalkit/multifractal.hpp"
#include "fractalkit/percolation.hpp"
#include "fractalkit/random.hpp"
#include "fractalkit/sierpinski.hpp"

namespace fractalkit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

class Checker {
 public:
  explicit Checker(CriterionResult& r) : r_(r) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      r_.pass = false;
      r_.failures.push_back(what);
    }
  }

  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol, os.str());
  }

  void note(const std::string& s) { r_.notes.push_back(s); }

 private:
  CriterionResult& r_;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void analytic_table(Checker& c) {
  using sierpinski::product_dimensions;
  auto named = [](const std::string& name) {
    for (const auto& k : product_dimensions())
      if (k.name == name) return k.value;
    throw InvalidArgument("unknown constant " + name);
  };
  auto digits = [](unsigned b, unsigned keep) {
    std::vector<unsigned> kept;
    for (unsigned d = 0; d < keep; ++d) kept.push_back(d);
    return similarity_dimension(CantorSpec::keep_digits(b, kept));
  };
  struct Row {
    const char* label;
    double computed;
    double printed;
  };
  const Row rows[] = {
      {"ln2/ln3", similarity_dimension(CantorSpec::triadic()), 0.6309},
      {"ln4/ln5", similarity_dimension(CantorSpec::middle_remove(5)), 0.86135},
      {"ln9/ln10", digits(10, 9), 0.9542},
      {"ln8/ln10", digits(10, 8), 0.9031},
      {"ln7/ln10", digits(10, 7), 0.8451},
      {"ln3/ln2", named("triangle"), 1.58496250},
      {"ln8/ln3", sierpinski::carpet_dimension(sierpinski::CarpetSpec::standard()), 1.892789},
      {"2ln2/ln3", named("cantor_dust_CxC"), 1.2618595},
      {"ln20/ln3", named("menger_sponge"), 2.726833},
      {"ln26/ln3", named("cantor_cheese"), 2.965647},
      {"3ln2/ln(8/3)", named("C4xC4xC4"), 2.120085},
      {"2ln2/ln(8/3)", named("C4xC4"), 1.41339018},
      {"ln40/ln7 (one hole)", sierpinski::carpet_dimension(sierpinski::CarpetSpec::centre_block_removed(7, 3)), 1.8957},
      {"ln40/ln7 (nine holes)", sierpinski::carpet_dimension(sierpinski::CarpetSpec::scattered_holes(7)), 1.8957},
      {"ln4/ln3", named("koch_curve"), 1.2618},
  };
  for (const auto& r : rows) c.near(r.computed, r.printed, 1e-4 * r.printed, r.label);
}

inline void measure_identities(Checker& c) {
  for (unsigned n = 0; n <= 20; ++n)
    c.expect(removed_length(CantorSpec::triadic(), n) == 1 - rpow(Rational(2, 3), n),
             "triadic removed length at n = " + std::to_string(n));
  Rational prev = -1;
  for (unsigned n = 1; n <= 8; ++n) {
    Rational r = removed_length(CantorSpec::middle_remove(5), n);
    c.expect(r > prev && r < 1 && r == 1 - rpow(Rational(4, 5), n),
             "middle-fifth removed series at n = " + std::to_string(n));
    prev = r;
  }
  for (unsigned n = 0; n <= 20; ++n) {
    Rational product = 1;
    for (unsigned k = 0; k < n; ++k) product *= 1 - inv_pow(3, 1UL << k);
    c.expect(fat_length(n) == product, "fat length product at n = " + std::to_string(n));
  }
  for (unsigned n = 0; n <= 10; ++n)
    c.expect(total_length(generate(CantorSpec::fat(), n)) == fat_length(n),
             "fat explicit intervals at n = " + std::to_string(n));
  c.near(fat_length_real(30), 0.585187, 1e-5, "fat length at n = 30");
}

inline void cantor_function(Checker& c) {
  namespace cf = cantor_fn;
  RandomStream rng(0);
  const unsigned depth = 40;
  std::vector<Rational> xs;
  for (int i = 0; i < 10000; ++i) {
    unsigned long den = 1 + rng.next_choice(1000000);
    Rational x(static_cast<unsigned long>(rng.next_choice(den + 1)), den);
    x.canonicalize();
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  bool monotone = true, symmetric = true;
  cf::DyadicValue prev = cf::evaluate(xs.front(), depth);
  for (const auto& x : xs) {
    auto v = cf::evaluate(x, depth);
    if (v.value + v.bound < prev.value) monotone = false;
    prev = v;
    auto m = cf::evaluate(1 - x, depth);
    if (abs(m.value - (1 - v.value)) > v.bound + m.bound) symmetric = false;
  }
  c.expect(monotone, "monotone on 10^4 random rationals");
  c.expect(symmetric, "F(1 - x) = 1 - F(x) on 10^4 random rationals");
  const std::pair<Rational, Interval> plateaus[] = {
      {Rational(1, 4), {Rational(1, 9), Rational(2, 9)}},
      {Rational(1, 2), {Rational(1, 3), Rational(2, 3)}},
      {Rational(3, 4), {Rational(7, 9), Rational(8, 9)}},
      {Rational(5, 8), {Rational(19, 27), Rational(20, 27)}},
  };
  for (const auto& [m, want] : plateaus)
    c.expect(cf::plateau_of(m) == want, "plateau of " + m.get_str());
  double last = 0;
  for (unsigned n = 1; n <= 20; ++n) {
    double L = cf::staircase_length(n);
    c.expect(L > last, "staircase length increases at n = " + std::to_string(n));
    last = L;
  }
  c.near(last, 2.0, 1e-3, "staircase length at n = 20");
}

inline void two_scale(Checker& c) {
  mfa::TwoScaleMeasure m(0.25, 0.4, 0.6, 0.4);
  c.near(mfa::support_dimension(m), 0.6110, 1e-4, "D0");
  c.near(mfa::mass_exponent(m, 1.0), 0.0, 1e-12, "tau(1)");
  c.near(mfa::holder_alpha(m, 100.0), 0.3685, 1e-4, "alpha(+100)");
  c.near(mfa::holder_alpha(m, -100.0), 1.0, 1e-4, "alpha(-100)");
  double worst_fd = 0, worst_f = 0;
  for (double q = -10; q <= 10; q += 0.5) {
    const double h = 1e-5;
    double fd = -(mfa::mass_exponent(m, q + h) - mfa::mass_exponent(m, q - h)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(fd - mfa::holder_alpha(m, q)));
    auto pt = mfa::spectrum_point(m, q);
    worst_f = std::max(worst_f, std::abs(pt.f - (pt.q * pt.alpha + pt.tau)));
  }
  c.near(worst_fd, 0.0, 1e-6, "max |alpha - finite-difference(-dtau/dq)|");
  c.near(worst_f, 0.0, 1e-12, "max |f - (q alpha + tau)|");
  bool non_increasing = true;
  double prev = mfa::renyi_dimension(m, -20);
  for (int i = 1; i <= 160; ++i) {
    double d = mfa::renyi_dimension(m, -20 + 0.25 * i);
    if (d > prev + 1e-12) non_increasing = false;
    prev = d;
  }
  c.expect(non_increasing, "D_q non-increasing on [-20, 20]");
}

inline void triadic_closed_form(Checker& c) {
  c.near(mfa::triadic_dq(0.75, 0.25, 0), 0.631, 1e-3, "D0");
  c.near(mfa::triadic_dq(0.75, 0.25, 1), 0.512, 1e-3, "D1");
  c.near(mfa::triadic_dq(0.75, 0.25, 2), 0.428, 1e-3, "D2");
  c.near(mfa::triadic_dq(0.75, 0.25, 1000), 0.262, 1e-3, "D(+1000)");
  c.near(mfa::triadic_dq(0.75, 0.25, -1000), 1.262, 1e-3, "D(-1000)");
  c.note("q -> +-inf limits -ln(3/4)/ln3 = " + fmt(-std::log(0.75) / std::log(3.0)) + ", -ln(1/4)/ln3 = " +
         fmt(-std::log(0.25) / std::log(3.0)));
}

inline std::string counts_text(const perc::RGPolynomial& p) {
  std::string s;
  for (unsigned k = 0; k <= 8; ++k) s += (k ? "," : "") + std::to_string(p.counts()[k]);
  return "[" + s + "]";
}

inline void rg_enumeration(Checker& c) {
  auto hybrid = perc::enumerate_rg(perc::ConnectivityRule::hybrid);
  auto quoted = perc::quoted_hybrid_polynomial();
  c.expect(hybrid == quoted, "hybrid counts c0..c8: enumerated " + counts_text(hybrid) + ", want " +
                                 counts_text(quoted));
  c.note("edge counts c0..c8: " + counts_text(perc::enumerate_rg(perc::ConnectivityRule::edge)));
}

inline void exponents(Checker& c) {
  auto h = perc::critical_exponents(perc::enumerate_rg(perc::ConnectivityRule::hybrid));
  c.near(h.p_c, 0.5093, 5e-4, "hybrid p_c");
  c.near(h.nu, 1.801, 5e-3, "hybrid nu");
  c.near(h.beta, 0.193, 5e-3, "hybrid beta");
  c.near(h.gamma, 3.216, 1e-2, "hybrid gamma");
  c.near(h.alpha_heat, -1.602, 1e-2, "hybrid alpha");
  c.near(h.delta_gap, h.beta + h.gamma, 1e-9, "delta = beta + gamma");
  auto e = perc::critical_exponents(perc::enumerate_rg(perc::ConnectivityRule::edge));
  c.near(e.nu, 2.194, 1e-2, "edge nu");
  c.near(e.beta, 0.234, 5e-3, "edge beta");
  auto q = perc::critical_exponents(perc::quoted_hybrid_polynomial());
  c.note("quoted hybrid table gives p_c " + fmt(q.p_c) + ", nu " + fmt(q.nu) + ", beta " + fmt(q.beta) +
         ", gamma " + fmt(q.gamma) + ", alpha " + fmt(q.alpha_heat));
}

inline void monte_carlo(Checker& c) {
  using perc::ConnectivityRule;
  const double p_c = perc::fixed_point(perc::enumerate_rg(ConnectivityRule::hybrid));
  auto below = perc::mc_spanning(4, ConnectivityRule::hybrid, p_c - 0.05, 2000, 0);
  auto above = perc::mc_spanning(4, ConnectivityRule::hybrid, p_c + 0.05, 2000, 0);
  c.expect(below.fraction < 0.5 && above.fraction > 0.5,
           "hybrid G = 4 crossing inside [p_c - 0.05, p_c + 0.05]: fractions " + fmt(below.fraction) + ", " +
               fmt(above.fraction));
  auto th_h = perc::mc_threshold(4, ConnectivityRule::hybrid, 2000, 0);
  auto th_e = perc::mc_threshold(4, ConnectivityRule::edge, 2000, 0);
  c.expect(th_e.p > th_h.p, "edge threshold " + fmt(th_e.p) + " above hybrid " + fmt(th_h.p));
  auto again = perc::mc_spanning(4, ConnectivityRule::hybrid, p_c - 0.05, 2000, 0);
  c.expect(again.fraction == below.fraction, "bit-exact repeat with equal seed");
}

inline void estimators(Checker& c) {
  auto carpet = sierpinski::carpet_generate(sierpinski::CarpetSpec::standard(), 5);
  c.near(dim::fit_dimension(dim::box_count_powers(carpet, 3, 0, 4)).slope, std::log(8.0) / std::log(3.0), 1e-12,
         "carpet grid slope");
  auto tri = sierpinski::rasterize(sierpinski::triangle_subdivide(8), 256);
  c.near(dim::fit_dimension(dim::box_count_powers(tri, 2, 0, 7)).slope, std::log(3.0) / std::log(2.0), 1e-12,
         "triangle grid slope");
  auto cloud = sierpinski::chaos_game(sierpinski::initiator_vertices(), sierpinski::initiator_centroid(), 1000000,
                                      100, 0);
  c.near(dim::fit_dimension(dim::box_count(cloud, 2, 8)).slope, std::log(3.0) / std::log(2.0), 0.03,
         "chaos-game slope");
  RandomStream rng(0);
  std::vector<sierpinski::Point2> square(1000000);
  for (auto& p : square) p = {rng.next_unit(), rng.next_unit()};
  for (const auto& r : dim::renyi_spectrum(dim::box_count(square, 1, 7), {0, 1, 2}))
    c.near(r.Dq, 2.0, 0.05, "uniform square D_" + fmt(r.q));
  mfa::TwoScaleMeasure m(0.25, 0.4, 0.6, 0.4);
  auto refined = dim::weighted_refinement(m, 22);
  c.near(dim::fit_dimension(dim::box_count(refined, 10, 19)).slope, 0.6110, 0.02, "two-scale refinement D0");
}

inline void geometry(Checker& c) {
  for (unsigned n = 0; n <= 8; ++n) {
    std::size_t R = std::size_t{1} << n;
    auto sub = sierpinski::rasterize(sierpinski::triangle_subdivide(n), R);
    c.expect(sierpinski::ifs_render(sierpinski::sierpinski_ifs(), n, R) == sub,
             "IFS raster = subdivision raster at n = " + std::to_string(n));
  }
  for (unsigned n = 1; n <= 3; ++n) {
    auto sponge = sierpinski::sponge_generate(n);
    auto carpet = sierpinski::carpet_generate(sierpinski::CarpetSpec::standard(), n);
    for (unsigned axis = 0; axis < 3; ++axis)
      c.expect(sierpinski::face_slice(sponge, axis, 0) == carpet,
               "sponge face slice = carpet at n = " + std::to_string(n) + ", axis " + std::to_string(axis));
  }
  c.expect(sierpinski::sponge_generate(1).count() == 20, "sponge voxels at n = 1");
  c.expect(sierpinski::sponge_generate(2).count() == 400, "sponge voxels at n = 2");
  for (unsigned n = 0; n <= 20; ++n)
    c.expect(sierpinski::perimeter_sum(n) == sierpinski::perimeter_closed(n),
             "perimeter closed form at n = " + std::to_string(n));
}

}  // namespace detail

struct Criterion {
  int id;
  const char* group;
  const char* title;
  std::function<void(Checker&)> run;
};

inline std::vector<Criterion> criteria() {
  return {
      {1, "const", "analytic dimension table", detail::analytic_table},
      {2, "cantor", "exact measure identities", detail::measure_identities},
      {3, "cantor", "Cantor function", detail::cantor_function},
      {4, "mfa", "two-scale multifractal spectrum", detail::two_scale},
      {5, "mfa", "triadic closed form D_q", detail::triadic_closed_form},
      {6, "perc", "RG enumeration of hybrid counts", detail::rg_enumeration},
      {7, "perc", "percolation exponents", detail::exponents},
      {8, "perc", "Monte Carlo consistency", detail::monte_carlo},
      {9, "dim", "estimator recovery", detail::estimators},
      {10, "geom", "geometry cross-checks", detail::geometry},
  };
}

/// Empty filter runs everything; otherwise match a group name or criterion number.
inline bool selected(const Criterion& c, const std::string& filter) {
  return filter.empty() || filter == c.group || filter == std::to_string(c.id);
}

inline std::vector<CriterionResult> run(const std::string& filter = "") {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!selected(c, filter)) continue;
    CriterionResult r;
    r.id = c.id, r.group = c.group, r.title = c.title;
    Checker chk(r);
    try {
      c.run(chk);
    } catch (const std::exception& e) {
      chk.expect(false, std::string("exception: ") + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// One line per criterion; failing and informational details follow indented.
inline void print(std::ostream& os, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << " [" << r.group << "] " << r.title << '\n';
    for (const auto& f : r.failures) os << "        - " << f << '\n';
    for (const auto& n : r.notes) os << "        note: " << n << '\n';
  }
}

}  // namespace fractalkit::acceptance
