// fractalkit: command-line front end for the fractalkit headers.
//
// Exit status: 0 success, 2 usage error, 1 computation or file error.
// Every file written with --out gets a <file>.manifest.json next to it.

#include <gmp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fractalkit/acceptance.hpp"
#include "fractalkit/cantor_function.hpp"
#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/dimension.hpp"
#include "fractalkit/grid.hpp"
#include "fractalkit/multifractal.hpp"
#include "fractalkit/percolation.hpp"
#include "fractalkit/sierpinski.hpp"
#include "fractalkit/structure.hpp"
#include "fractalkit/version.hpp"

using json = nlohmann::json;
namespace fk = fractalkit;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::vector<std::string> argv;
};

Globals g;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Rounded to 12 significant digits so JSON output matches the text output.
double r12(double v) { return std::isfinite(v) ? std::strtod(num(v).c_str(), nullptr) : v; }

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::string format_or(const std::string& fallback, std::initializer_list<const char*> allowed) {
  std::string f = g.format.empty() ? fallback : g.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("--format " + f + " is not supported by this command");
}

void emit(const std::string& payload) {
  if (g.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(g.out, std::ios::binary);
  if (!os) throw FileError("cannot write " + g.out);
  os << payload;
  os.close();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(payload)));
  json manifest = {
      {"command_line", g.argv},
      {"seed", g.seed},
      {"versions", {{"fractalkit", fk::kVersion}, {"gmp", gmp_version}, {"compiler", __VERSION__}}},
      {"outputs", json::array({{{"path", g.out}, {"bytes", payload.size()}, {"fnv1a64", hex}}})},
  };
  std::ofstream ms(g.out + ".manifest.json");
  if (!ms) throw FileError("cannot write manifest for " + g.out);
  ms << manifest.dump(2) << '\n';
}

// Reads a file, turning parse failures into file errors (exit 1).
template <class F>
auto read_file(const std::string& path, F parse) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FileError("cannot open " + path);
  try {
    return parse(is);
  } catch (const fk::InvalidArgument& e) {
    throw FileError(path + ": " + e.what());
  }
}

fk::Rational rational_arg(const std::string& s, const char* name) {
  try {
    return fk::parse_rational(s);
  } catch (const std::exception&) {
    throw UsageError(std::string("--") + name + ": expected p/q, integer or decimal, got '" + s + "'");
  }
}

std::string pgm_text(const fk::Grid2D& grid) {
  std::ostringstream os;
  fk::write_pgm(os, grid);
  return os.str();
}

std::vector<fk::sierpinski::Point2> read_points(std::istream& is) {
  std::vector<fk::sierpinski::Point2> pts;
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (row == 1 && line == "x,y")) continue;
    auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("");
      pts.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw fk::InvalidArgument("malformed point row " + std::to_string(row));
    }
  }
  if (pts.empty()) throw fk::InvalidArgument("no points");
  return pts;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

fk::sierpinski::CarpetSpec carpet_variant(const std::string& v) {
  using fk::sierpinski::CarpetSpec;
  auto num_after = [&](std::size_t pos) {
    try {
      return static_cast<unsigned>(std::stoul(v.substr(pos)));
    } catch (const std::exception&) {
      throw UsageError("bad carpet variant '" + v + "'");
    }
  };
  if (v == "standard") return CarpetSpec::standard();
  if (v.rfind("centre:", 0) == 0) return CarpetSpec::centre_removed(num_after(7));
  if (v.rfind("ring:", 0) == 0) return CarpetSpec::ring(num_after(5));
  if (v.rfind("holes:", 0) == 0) return CarpetSpec::scattered_holes(num_after(6));
  if (v.rfind("block:", 0) == 0) {
    auto colon = v.find(':', 6);
    if (colon == std::string::npos) throw UsageError("block variant needs block:<b>:<h>");
    return CarpetSpec::centre_block_removed(static_cast<unsigned>(std::stoul(v.substr(6, colon - 6))),
                                            num_after(colon + 1));
  }
  throw UsageError("unknown carpet variant '" + v + "' (standard|centre:b|ring:b|block:b:h|holes:b)");
}

// Fits below this r2 are flagged rather than silently reported.
constexpr double kMinR2 = 0.99;

json fit_json(const fk::dim::FitResult& f) {
  return {{"dimension", r12(f.slope)}, {"intercept", r12(f.intercept)}, {"r2", r12(f.r2)},
          {"r2_acceptable", f.r2 >= kMinR2}, {"points", f.points}};
}

json series_json(const fk::dim::BoxCountSeries& s) {
  json scales = json::array(), counts = json::array();
  for (double d : s.scales) scales.push_back(r12(d));
  for (double c : s.counts) counts.push_back(r12(c));
  return {{"scales", scales}, {"counts", counts}};
}

// --- dim input --------------------------------------------------------------

struct DimInput {
  std::string input;
  std::string source = "file";
  std::size_t points = 100000;
  unsigned base = 2;
  int k_min = -1;
  int k_max = -1;
  std::string scales;
};

void add_dim_input(CLI::App* app, DimInput& in) {
  app->add_option("--input,--in", in.input, "PGM grid or x,y point CSV");
  app->add_option("--source", in.source, "file | chaos (triangle chaos game) | uniform (unit square)")
      ->check(CLI::IsMember({"file", "chaos", "uniform"}));
  app->add_option("--points", in.points, "Point count for generated sources")->check(CLI::PositiveNumber);
  app->add_option("--base", in.base, "Box subdivision base")->check(CLI::Range(2u, 16u));
  app->add_option("--k-min", in.k_min, "Coarsest scale exponent");
  app->add_option("--k-max", in.k_max, "Finest scale exponent");
  app->add_option("--scales", in.scales, "Scale exponents as k1..k2 (same as --k-min/--k-max)");
}

struct Loaded {
  bool is_grid = false;
  fk::Grid2D grid;
  std::vector<fk::sierpinski::Point2> pts;
};

Loaded load(DimInput& in) {
  if (!in.scales.empty()) {
    auto dots = in.scales.find("..");
    try {
      if (dots == std::string::npos) throw std::invalid_argument("");
      in.k_min = std::stoi(in.scales.substr(0, dots));
      in.k_max = std::stoi(in.scales.substr(dots + 2));
    } catch (const std::exception&) {
      throw UsageError("--scales expects k1..k2");
    }
    if (in.k_min < 0 || in.k_max < in.k_min) throw UsageError("--scales expects 0 <= k1 <= k2");
  }
  Loaded l;
  if (in.source == "chaos") {
    l.pts = fk::sierpinski::chaos_game(fk::sierpinski::initiator_vertices(), fk::sierpinski::initiator_centroid(),
                                       in.points, 100, g.seed);
  } else if (in.source == "uniform") {
    fk::RandomStream rng(g.seed);
    l.pts.resize(in.points);
    for (auto& p : l.pts) p = {rng.next_unit(), rng.next_unit()};
  } else {
    if (in.input.empty()) throw UsageError("--input is required when --source file");
    if (ends_with(in.input, ".pgm")) {
      l.is_grid = true;
      l.grid = read_file(in.input, [](std::istream& is) { return fk::read_pgm(is); });
    } else {
      l.pts = read_file(in.input, read_points);
    }
  }
  return l;
}

fk::dim::BoxCountSeries series(const DimInput& in, const Loaded& l) {
  if (l.is_grid) {
    unsigned levels = 0;
    for (std::size_t s = l.grid.side(); s % in.base == 0 && s > 1; s /= in.base) ++levels;
    unsigned lo = in.k_min < 0 ? 0 : static_cast<unsigned>(in.k_min);
    unsigned hi = in.k_max < 0 ? levels : static_cast<unsigned>(in.k_max);
    return fk::dim::box_count_powers(l.grid, in.base, lo, hi);
  }
  unsigned lo = in.k_min < 0 ? 2 : static_cast<unsigned>(in.k_min);
  unsigned hi = in.k_max < 0 ? 8 : static_cast<unsigned>(in.k_max);
  return fk::dim::box_count(l.pts, lo, hi, in.base);
}

std::string csv_series(const fk::dim::BoxCountSeries& s) {
  std::ostringstream os;
  os << "delta,count\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << num(s.scales[i]) << ',' << num(s.counts[i]) << '\n';
  return os.str();
}

// --- perc report --------------------------------------------------------------

json rg_report(const std::string& rule_name, const fk::perc::RGPolynomial& poly, bool enumerated) {
  auto e = fk::perc::critical_exponents(poly);
  json notes = json::array();
  notes.push_back("delta = nu d - beta = beta + gamma; the value 1.809 quoted alongside this formula is not reproduced");
  if (enumerated && rule_name == "hybrid" && !(poly == fk::perc::quoted_hybrid_polynomial()))
    notes.push_back("enumerated hybrid counts differ from the quoted table [0,0,0,8,38,44,27,8,1]; "
                    "rerun with --counts to evaluate that table");
  if (!enumerated) notes.push_back("counts supplied on the command line, not enumerated");
  return {{"rule", rule_name},
          {"counts", poly.counts()},
          {"p_c", r12(e.p_c)},
          {"lambda", r12(e.lambda)},
          {"nu", r12(e.nu)},
          {"beta", r12(e.beta)},
          {"gamma", r12(e.gamma)},
          {"alpha", r12(e.alpha_heat)},
          {"delta", r12(e.delta_gap)},
          {"notes", notes}};
}

fk::perc::RGPolynomial parse_counts(const std::string& s) {
  std::array<std::uint32_t, 9> c{};
  std::stringstream ss(s);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    if (k >= 9) throw UsageError("--counts needs exactly 9 values c0..c8");
    try {
      c[k++] = static_cast<std::uint32_t>(std::stoul(item));
    } catch (const std::exception&) {
      throw UsageError("--counts: bad value '" + item + "'");
    }
  }
  if (k != 9) throw UsageError("--counts needs exactly 9 values c0..c8");
  try {
    return fk::perc::RGPolynomial(c);
  } catch (const fk::InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  g.argv.assign(argv, argv + argc);
  CLI::App app{"fractalkit: exact fractal constructions, spectra, estimators and carpet percolation"};
  app.set_version_flag("--version", std::string(fk::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Random seed (default 0)");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "csv | json | pgm")->check(CLI::IsMember({"csv", "json", "pgm"}));

  std::function<void()> action;

  // gen ----------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate pre-fractals")->require_subcommand(1);

  std::string cantor_variant = "triadic";
  unsigned n = 2;
  auto* gen_cantor = gen->add_subcommand("cantor", "Cantor set intervals as exact rationals");
  gen_cantor->add_option("--variant", cantor_variant, "triadic | middle:<b> | digits:<b>:<kept> | fat");
  gen_cantor->add_option("--n,--gen", n, "Generation")->required();
  gen_cantor->callback([&] {
    action = [&] {
      format_or("csv", {"csv"});
      fk::CantorSpec spec = [&] {
        try {
          return fk::parse_cantor_variant(cantor_variant);
        } catch (const fk::InvalidArgument& e) {
          throw UsageError(e.what());
        }
      }();
      std::ostringstream os;
      fk::write_csv(os, fk::generate(spec, n));
      emit(os.str());
    };
  });

  std::size_t resolution = 0;
  std::string method = "subdivide";
  std::size_t chaos_points = 100000;
  auto* gen_tri = gen->add_subcommand("triangle", "Sierpinski triangle raster (PGM) or chaos-game points (CSV)");
  gen_tri->add_option("--n,--gen", n, "Generation")->required();
  gen_tri->add_option("--resolution", resolution, "Raster side, a power of two >= 2^n (default 2^n)");
  gen_tri->add_option("--method", method, "subdivide | ifs | chaos")
      ->check(CLI::IsMember({"subdivide", "ifs", "chaos"}));
  gen_tri->add_option("--points", chaos_points, "Chaos-game point count")->check(CLI::PositiveNumber);
  gen_tri->callback([&] {
    action = [&] {
      namespace sp = fk::sierpinski;
      if (method == "chaos") {
        format_or("csv", {"csv"});
        auto pts = sp::chaos_game(sp::initiator_vertices(), sp::initiator_centroid(), chaos_points, 100, g.seed);
        std::ostringstream os;
        os << "x,y\n";
        for (const auto& p : pts) os << num(p.x) << ',' << num(p.y) << '\n';
        emit(os.str());
        return;
      }
      format_or("pgm", {"pgm"});
      if (n > 13) throw fk::CapacityError("triangle generation above 13");
      std::size_t R = resolution ? resolution : std::size_t{1} << n;
      auto grid = method == "ifs" ? sp::ifs_render(sp::sierpinski_ifs(), n, R)
                                  : sp::rasterize(sp::triangle_subdivide(n), R);
      emit(pgm_text(grid));
    };
  });

  std::string carpet;
  unsigned carpet_base = 0;
  auto* gen_carpet = gen->add_subcommand("carpet", "Sierpinski carpet raster");
  gen_carpet->add_option("--n,--gen", n, "Generation")->required();
  gen_carpet->add_option("--base", carpet_base, "Odd base b: b x b generator minus its centre cell");
  gen_carpet->add_option("--variant", carpet, "standard | centre:b | ring:b | block:b:h | holes:b");
  gen_carpet->callback([&] {
    action = [&] {
      format_or("pgm", {"pgm"});
      if (!carpet.empty() && carpet_base) throw UsageError("give either --base or --variant");
      auto spec = carpet_base ? carpet_variant("centre:" + std::to_string(carpet_base))
                              : carpet_variant(carpet.empty() ? "standard" : carpet);
      emit(pgm_text(fk::sierpinski::carpet_generate(spec, n)));
    };
  });

  std::string slice;
  auto* gen_sponge = gen->add_subcommand("sponge", "Menger sponge voxels (CSV) or one slice (PGM)");
  gen_sponge->add_option("--n,--gen", n, "Generation (<= 4)")->required();
  gen_sponge->add_option("--slice", slice, "<axis>:<index> slice written as PGM, axis 0-2 or x/y/z");
  gen_sponge->callback([&] {
    action = [&] {
      auto f = format_or(slice.empty() ? "csv" : "pgm", {"csv", "pgm"});
      auto sponge = fk::sierpinski::sponge_generate(n);
      if (f == "pgm") {
        unsigned axis = 0;
        std::size_t index = 0;
        if (!slice.empty()) {
          auto colon = slice.find(':');
          try {
            if (colon == std::string::npos) throw std::invalid_argument("");
            auto a = slice.substr(0, colon);
            if (a == "x" || a == "y" || a == "z")
              axis = static_cast<unsigned>(a[0] - 'x');
            else
              axis = static_cast<unsigned>(std::stoul(a));
            index = std::stoul(slice.substr(colon + 1));
          } catch (const std::exception&) {
            throw UsageError("--slice expects <axis>:<index>");
          }
        }
        if (axis > 2 || index >= sponge.side()) throw UsageError("--slice out of range");
        emit(pgm_text(fk::sierpinski::face_slice(sponge, axis, index)));
        return;
      }
      std::ostringstream os;
      os << "x,y,z\n";
      for (std::size_t x = 0; x < sponge.side(); ++x)
        for (std::size_t y = 0; y < sponge.side(); ++y)
          for (std::size_t z = 0; z < sponge.side(); ++z)
            if (sponge.at(x, y, z)) os << x << ',' << y << ',' << z << '\n';
      emit(os.str());
    };
  });

  // cantor-fn ----------------------------------------------------------------
  auto* cfn = app.add_subcommand("cantor-fn", "Cantor function")->require_subcommand(1);
  std::string x_text;
  unsigned depth = 64;
  auto* cfn_eval = cfn->add_subcommand("eval", "Evaluate M(x) exactly");
  cfn_eval->add_option("--x", x_text, "Point in [0,1] as p/q")->required();
  cfn_eval->add_option("--depth", depth, "Ternary digits examined")->check(CLI::Range(1u, 100000u));
  cfn_eval->callback([&] {
    action = [&] {
      auto f = format_or("json", {"json", "csv"});
      auto x = rational_arg(x_text, "x");
      if (x < 0 || x > 1) throw UsageError("--x must lie in [0,1]");
      auto v = fk::cantor_fn::evaluate(x, depth);
      if (f == "csv") {
        emit("x,value,value_real,truncated,bound\n" + x.get_str() + ',' + v.value.get_str() + ',' +
             num(fk::to_double(v.value)) + ',' + (v.truncated ? "1" : "0") + ',' + v.bound.get_str() + '\n');
        return;
      }
      json j = {{"x", x.get_str()},
                {"value", v.value.get_str()},
                {"value_real", r12(fk::to_double(v.value))},
                {"truncated", v.truncated},
                {"bound", v.bound.get_str()}};
      emit(j.dump(2) + '\n');
    };
  });

  auto* cfn_stair = cfn->add_subcommand("staircase", "Polyline through the generation-n staircase");
  cfn_stair->add_option("--n,--gen", n, "Generation (1..16)")->required();
  cfn_stair->callback([&] {
    action = [&] {
      format_or("csv", {"csv"});
      auto poly = fk::cantor_fn::staircase_polyline(n);
      std::ostringstream os;
      os << "x_num,x_den,y_num,y_den\n";
      for (const auto& p : poly.points)
        os << p.x.get_num().get_str() << ',' << p.x.get_den().get_str() << ',' << p.y.get_num().get_str() << ','
           << p.y.get_den().get_str() << '\n';
      emit(os.str());
      std::cerr << "length " << num(poly.length) << '\n';
    };
  });

  // mfa ------------------------------------------------------------------------
  auto* mfa = app.add_subcommand("mfa", "Analytic multifractal spectra")->require_subcommand(1);
  std::string l1 = "1/4", l2 = "2/5", p1 = "0.6", p2 = "0.4";
  double q_min = -10, q_max = 10, q_step = 0.5;
  auto* spec = mfa->add_subcommand("spectrum", "tau, D_q, alpha, f of the two-scale measure");
  spec->add_option("--l1", l1);
  spec->add_option("--l2", l2);
  spec->add_option("--p1", p1);
  spec->add_option("--p2", p2);
  spec->add_option("--q-min", q_min);
  spec->add_option("--q-max", q_max);
  spec->add_option("--q-step", q_step);
  spec->callback([&] {
    action = [&] {
      auto f = format_or("csv", {"csv", "json"});
      auto m = [&] {
        try {
          return fk::mfa::TwoScaleMeasure(fk::to_double(rational_arg(l1, "l1")), fk::to_double(rational_arg(l2, "l2")),
                                          fk::to_double(rational_arg(p1, "p1")), fk::to_double(rational_arg(p2, "p2")));
        } catch (const fk::InvalidArgument& e) {
          throw UsageError(e.what());
        }
      }();
      auto rows = fk::mfa::spectrum(m, q_min, q_max, q_step);
      if (f == "json") {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"q", r12(r.q)}, {"tau", r12(r.tau)}, {"Dq", r12(r.Dq)}, {"alpha", r12(r.alpha)}, {"f", r12(r.f)}});
        emit(arr.dump(2) + '\n');
        return;
      }
      std::ostringstream os;
      os << "q,tau,Dq,alpha,f\n";
      for (const auto& r : rows)
        os << num(r.q) << ',' << num(r.tau) << ',' << num(r.Dq) << ',' << num(r.alpha) << ',' << num(r.f) << '\n';
      emit(os.str());
    };
  });

  // dim ----------------------------------------------------------------------------
  auto* dimc = app.add_subcommand("dim", "Empirical dimension estimators")->require_subcommand(1);
  DimInput box_in, info_in, corr_in, renyi_in;

  auto* dim_box = dimc->add_subcommand("box", "Box-counting dimension");
  add_dim_input(dim_box, box_in);
  dim_box->callback([&] {
    action = [&] {
      auto f = format_or("json", {"json", "csv"});
      auto s = series(box_in, load(box_in));
      auto fit = fk::dim::fit_dimension(s);
      if (fit.r2 < kMinR2) std::cerr << "warning: fit r2 " << num(fit.r2) << " below " << kMinR2 << '\n';
      if (f == "csv") return emit(csv_series(s));
      json j = fit_json(fit);
      j["series"] = series_json(s);
      emit(j.dump(2) + '\n');
    };
  });

  auto* dim_info = dimc->add_subcommand("info", "Information dimension");
  add_dim_input(dim_info, info_in);
  dim_info->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto s = series(info_in, load(info_in));
      emit(fit_json(fk::dim::information_dimension(s)).dump(2) + '\n');
    };
  });

  std::vector<double> radii;
  auto* dim_corr = dimc->add_subcommand("corr", "Correlation dimension of a point cloud");
  add_dim_input(dim_corr, corr_in);
  dim_corr->add_option("--radii", radii, "Radii (default 2^-7 .. 2^-3)")->delimiter(',');
  dim_corr->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto l = load(corr_in);
      if (l.is_grid) throw UsageError("dim corr needs a point cloud, not a grid");
      if (l.pts.size() > 200000) throw fk::CapacityError("dim corr: more than 200000 points");
      std::vector<double> r = radii;
      if (r.empty())
        for (int k = 7; k >= 3; --k) r.push_back(std::ldexp(1.0, -k));
      auto c = fk::dim::correlation_integral(l.pts, r);
      json j = fit_json(fk::dim::correlation_dimension(l.pts, r));
      json ci = json::array();
      for (double v : c) ci.push_back(r12(v));
      j["radii"] = r;
      j["integral"] = ci;
      emit(j.dump(2) + '\n');
    };
  });

  std::vector<double> qs{-5, -2, 0, 1, 2, 5};
  auto* dim_renyi = dimc->add_subcommand("renyi", "Empirical Renyi spectrum");
  add_dim_input(dim_renyi, renyi_in);
  dim_renyi->add_option("--q", qs, "Moment orders (comma separated)")->delimiter(',');
  dim_renyi->callback([&] {
    action = [&] {
      auto f = format_or("csv", {"csv", "json"});
      auto s = series(renyi_in, load(renyi_in));
      auto spectrum = fk::dim::renyi_spectrum(s, qs);
      if (f == "json") {
        json arr = json::array();
        for (const auto& p : spectrum)
          arr.push_back({{"q", r12(p.q)}, {"Dq", r12(p.Dq)}, {"r2", r12(p.r2)}, {"tau", r12(p.tau)}, {"clamped", p.clamped}});
        return emit(arr.dump(2) + '\n');
      }
      std::ostringstream os;
      os << "q,Dq,r2,tau,clamped\n";
      for (const auto& p : spectrum)
        os << num(p.q) << ',' << num(p.Dq) << ',' << num(p.r2) << ',' << num(p.tau) << ',' << p.clamped << '\n';
      emit(os.str());
    };
  });

  // measure --------------------------------------------------------------------
  auto* meas = app.add_subcommand("measure", "Lacunarity and order measures")->require_subcommand(1);
  auto* lac1 = meas->add_subcommand("lacuna1d", "Largest-gap lacunarity of a Cantor set");
  std::string lac_input;
  lac1->add_option("--variant", cantor_variant, "Cantor variant (see gen cantor)");
  lac1->add_option("--n,--gen", n, "Generation");
  lac1->add_option("--input,--in", lac_input, "Interval CSV instead of a variant");
  lac1->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      fk::IntervalSet s = lac_input.empty() ? fk::generate(fk::parse_cantor_variant(cantor_variant), n)
                                            : read_file(lac_input, [](std::istream& is) { return fk::read_csv(is); });
      auto gap = fk::largest_gap(s);
      emit(json{{"largest_gap", gap.get_str()}, {"lacunarity", r12(fk::to_double(gap))}}.dump(2) + '\n');
    };
  });

  auto* lac2 = meas->add_subcommand("lacuna2d", "Hole lacunarity and gliding-box variance of a PGM grid");
  std::vector<std::size_t> boxes;
  lac2->add_option("--input,--in", lac_input, "PGM file")->required();
  lac2->add_option("--boxes", boxes, "Gliding-box sizes for the variance exponent")->delimiter(',');
  lac2->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto grid = read_file(lac_input, [](std::istream& is) { return fk::read_pgm(is); });
      json j;
      auto holes = fk::structure::enclosed_holes(grid);
      if (holes.empty()) j["hole_lacunarity"] = nullptr;
      else j["hole_lacunarity"] = r12(fk::structure::hole_lacunarity_2d(grid));
      if (!boxes.empty()) {
        auto v = fk::structure::variance_lacunarity(grid, boxes);
        json vars = json::array();
        for (double x : v.variances) vars.push_back(r12(x));
        j["boxes"] = boxes;
        j["variances"] = vars;
        j["variance_exponent"] = r12(v.exponent.slope);
      }
      emit(j.dump(2) + '\n');
    };
  });

  auto* kl = meas->add_subcommand("kl", "Kullback-Leibler order between two 256-bin histograms");
  std::string f1, f2;
  kl->add_option("--f1,--a", f1, "Histogram CSV (bin,count)")->required();
  kl->add_option("--f2,--b", f2, "Histogram CSV (bin,count)")->required();
  kl->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto h1 = read_file(f1, [](std::istream& is) { return fk::structure::read_histogram_csv(is); });
      auto h2 = read_file(f2, [](std::istream& is) { return fk::structure::read_histogram_csv(is); });
      emit(json{{"kl", r12(fk::structure::kl_order(h1, h2))}, {"epsilon", fk::structure::kKlEpsilon}}.dump(2) + '\n');
    };
  });

  // perc -----------------------------------------------------------------------
  auto* perc = app.add_subcommand("perc", "Carpet percolation")->require_subcommand(1);
  std::string rule = "hybrid", counts;
  unsigned gen_G = 4;
  double p = 0.5;
  std::size_t trials = 1000;

  auto* rg = perc->add_subcommand("rg", "Enumerate the RG polynomial and derive exponents");
  rg->add_option("--rule", rule, "hybrid | edge")->check(CLI::IsMember({"hybrid", "edge"}));
  rg->add_option("--counts", counts, "Use c0..c8 (comma separated) instead of enumerating");
  rg->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      bool enumerated = counts.empty();
      auto poly = enumerated ? fk::perc::enumerate_rg(fk::perc::parse_rule(rule)) : parse_counts(counts);
      emit(rg_report(enumerated ? rule : "custom", poly, enumerated).dump(2) + '\n');
    };
  });

  auto add_mc = [&](CLI::App* c) {
    c->add_option("--rule", rule, "hybrid | edge")->check(CLI::IsMember({"hybrid", "edge"}));
    c->add_option("--gen", gen_G, "Carpet generation (<= 6)")->check(CLI::Range(0u, 6u));
    c->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  };
  auto* mc = perc->add_subcommand("mc", "Monte Carlo spanning fraction");
  add_mc(mc);
  mc->add_option("--p", p, "Occupation probability")->required()->check(CLI::Range(0.0, 1.0));
  mc->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto est = fk::perc::mc_spanning(gen_G, fk::perc::parse_rule(rule), p, trials, g.seed);
      emit(json{{"rule", rule}, {"gen", gen_G}, {"p", r12(p)}, {"trials", trials}, {"seed", g.seed},
                {"fraction", r12(est.fraction)}, {"stderr", r12(est.stderr_)}}
               .dump(2) +
           '\n');
    };
  });

  auto* th = perc->add_subcommand("threshold", "Bisection for spanning fraction 1/2");
  add_mc(th);
  th->callback([&] {
    action = [&] {
      format_or("json", {"json"});
      auto est = fk::perc::mc_threshold(gen_G, fk::perc::parse_rule(rule), trials, g.seed);
      json j = {{"rule", rule},         {"gen", gen_G},       {"trials", trials},
                {"seed", g.seed},       {"p", r12(est.p)},    {"uncertainty", r12(est.uncertainty)},
                {"iterations", est.iterations}, {"non_monotone", est.non_monotone}};
      if (est.non_monotone) std::cerr << "warning: non-monotone spanning fractions during bisection\n";
      emit(j.dump(2) + '\n');
    };
  });

  // reproduce --------------------------------------------------------------------
  std::string filter;
  bool reproduce_failed = false;
  auto* repro = app.add_subcommand("reproduce", "Run the acceptance criteria");
  repro->add_option("--filter", filter, "Criterion number or group (const, cantor, mfa, perc, dim, geom)");
  repro->callback([&] {
    action = [&] {
      format_or("csv", {"csv", "json"});
      auto results = fk::acceptance::run(filter);
      if (results.empty()) throw UsageError("--filter matched no criterion");
      std::ostringstream os;
      if (g.format == "json") {
        json arr = json::array();
        for (const auto& r : results)
          arr.push_back({{"id", r.id}, {"group", r.group}, {"title", r.title}, {"pass", r.pass},
                         {"failures", r.failures}, {"notes", r.notes}});
        os << arr.dump(2) << '\n';
      } else {
        fk::acceptance::print(os, results);
      }
      for (const auto& r : results) reproduce_failed |= !r.pass;
      emit(os.str());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return reproduce_failed ? 1 : 0;
}
