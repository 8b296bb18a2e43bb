#pragma once

// Exact construction of one-dimensional Cantor-type sets.
//
// Every generation-n pre-fractal is an IntervalSet: a sorted union of
// pairwise disjoint closed intervals with exact rational endpoints. Touching
// segments produced by the construction are merged, so the set is always in
// canonical form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fractalkit/error.hpp"
#include "fractalkit/rational.hpp"

namespace fractalkit {

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

class IntervalSet {
 public:
  IntervalSet() = default;

  /// Validates ordering, disjointness and [0,1] bounds.
  explicit IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const auto& iv = intervals_[i];
      if (iv.lo > iv.hi) throw InvalidArgument("interval with lo > hi");
      if (iv.lo < 0 || iv.hi > 1) throw InvalidArgument("interval outside [0,1]");
      if (i > 0 && !(intervals_[i - 1].hi < iv.lo))
        throw InvalidArgument("intervals not sorted and pairwise disjoint");
    }
  }

  /// Sorts and merges touching or overlapping segments.
  static IntervalSet from_segments(std::vector<Interval> segments) {
    std::sort(segments.begin(), segments.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.reserve(segments.size());
    for (auto& s : segments) {
      if (!merged.empty() && s.lo <= merged.back().hi) {
        if (s.hi > merged.back().hi) merged.back().hi = std::move(s.hi);
      } else {
        merged.push_back(std::move(s));
      }
    }
    return IntervalSet(std::move(merged));
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  bool contains(const Rational& x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const Rational& v, const Interval& iv) { return v < iv.lo; });
    return it != intervals_.begin() && std::prev(it)->contains(x);
  }

  /// Every interval of *this lies inside some interval of `outer`.
  bool subset_of(const IntervalSet& outer) const {
    return std::all_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
      auto it = std::upper_bound(outer.intervals_.begin(), outer.intervals_.end(), iv.lo,
                                 [](const Rational& v, const Interval& o) { return v < o.lo; });
      return it != outer.intervals_.begin() && std::prev(it)->contains(iv.lo) &&
             std::prev(it)->contains(iv.hi);
    });
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) { return a.intervals_ == b.intervals_; }

 private:
  std::vector<Interval> intervals_;
};

/// Explicit generation limits. Exactness is never traded for size: requests
/// beyond these raise CapacityError.
struct GenerationCaps {
  static constexpr std::size_t max_segments = std::size_t{1} << 20;
  static constexpr std::size_t max_denominator_bits = 8192;
  static constexpr unsigned max_triadic_generation = 64;
};

class CantorSpec {
 public:
  /// Keep the numbers whose first n base-b digits all lie in `kept`.
  struct KeepDigits {
    unsigned base;
    std::vector<unsigned> kept;
  };
  /// Split into b (odd) equal parts and drop the central one, recursively on
  /// every b-adic sub-segment.
  struct MiddleRemove {
    unsigned base;
  };
  /// Two pieces [0, l1] and [1 - l2, 1].
  struct TwoScale {
    Rational l1;
    Rational l2;
  };
  /// Step k removes a centred piece of relative length 3^-(2^k).
  struct Fat {};

  using Variant = std::variant<KeepDigits, MiddleRemove, TwoScale, Fat>;

  static CantorSpec triadic() { return keep_digits(3, {0, 2}); }

  static CantorSpec keep_digits(unsigned base, std::vector<unsigned> kept) {
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (base < 2) throw InvalidArgument("KeepDigits: base must be >= 2");
    if (kept.size() < 2 || kept.size() >= base)
      throw InvalidArgument("KeepDigits: need 2 <= |kept| < base");
    if (kept.back() >= base) throw InvalidArgument("KeepDigits: kept digit out of range");
    return CantorSpec(KeepDigits{base, std::move(kept)});
  }

  static CantorSpec middle_remove(unsigned base) {
    if (base < 3 || base % 2 == 0) throw InvalidArgument("MiddleRemove: base must be odd and >= 3");
    return CantorSpec(MiddleRemove{base});
  }

  static CantorSpec two_scale(Rational l1, Rational l2) {
    if (l1 <= 0 || l2 <= 0 || l1 + l2 >= 1) throw InvalidArgument("TwoScale: need l1, l2 > 0 and l1 + l2 < 1");
    return CantorSpec(TwoScale{std::move(l1), std::move(l2)});
  }

  static CantorSpec fat() { return CantorSpec(Fat{}); }

  const Variant& variant() const { return variant_; }

  /// Digit description for the equal-ratio variants: (base, kept digits).
  std::optional<std::pair<unsigned, std::vector<unsigned>>> digit_rule() const {
    if (auto* k = std::get_if<KeepDigits>(&variant_)) return std::pair{k->base, k->kept};
    if (auto* m = std::get_if<MiddleRemove>(&variant_)) {
      std::vector<unsigned> kept;
      for (unsigned d = 0; d < m->base; ++d)
        if (d != m->base / 2) kept.push_back(d);
      return std::pair{m->base, kept};
    }
    return std::nullopt;
  }

  std::string describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, KeepDigits>) {
            os << "digits:" << v.base << ':';
            for (unsigned d : v.kept) os << d;
          } else if constexpr (std::is_same_v<T, MiddleRemove>) {
            os << "middle:" << v.base;
          } else if constexpr (std::is_same_v<T, TwoScale>) {
            os << "twoscale:" << v.l1 << ':' << v.l2;
          } else {
            os << "fat";
          }
        },
        variant_);
    return os.str();
  }

 private:
  explicit CantorSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Parses the CLI variant syntax: triadic | middle:<b> | digits:<b>:<kept> | fat.
/// Kept digits are listed as single characters (0-9, then a-z for bases above 10).
inline CantorSpec parse_cantor_variant(const std::string& text) {
  if (text == "triadic") return CantorSpec::triadic();
  if (text == "fat") return CantorSpec::fat();
  auto parse_base = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      long b = std::stol(s, &used);
      if (used != s.size() || b < 2 || b > 36) throw InvalidArgument("");
      return static_cast<unsigned>(b);
    } catch (const std::exception&) {
      throw InvalidArgument("bad base in variant: " + text);
    }
  };
  if (text.rfind("middle:", 0) == 0) return CantorSpec::middle_remove(parse_base(text.substr(7)));
  if (text.rfind("digits:", 0) == 0) {
    auto rest = text.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidArgument("digits variant needs digits:<b>:<kept>");
    unsigned base = parse_base(rest.substr(0, colon));
    std::vector<unsigned> kept;
    for (char c : rest.substr(colon + 1)) {
      if (c == ',') continue;
      unsigned d;
      if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'z') d = static_cast<unsigned>(c - 'a' + 10);
      else throw InvalidArgument("bad digit in variant: " + text);
      kept.push_back(d);
    }
    return CantorSpec::keep_digits(base, std::move(kept));
  }
  throw InvalidArgument("unknown Cantor variant: " + text);
}

namespace detail {

inline void check_capacity(std::size_t segments, const Integer& denominator) {
  if (segments > GenerationCaps::max_segments)
    throw CapacityError("generation exceeds segment capacity (" + std::to_string(GenerationCaps::max_segments) + ")");
  if (mpz_sizeinbase(denominator.get_mpz_t(), 2) > GenerationCaps::max_denominator_bits)
    throw CapacityError("generation exceeds exact denominator capacity");
}

/// Number of segments (before merging) the construction yields at generation n,
/// or nullopt when it overflows size_t.
inline std::optional<std::size_t> segment_count(std::size_t per_step, unsigned n) {
  std::size_t c = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (c > GenerationCaps::max_segments) return std::nullopt;
    c *= per_step;
  }
  return c;
}

}  // namespace detail

/// Generation-n pre-fractal of `spec`. Generation 0 is [0, 1].
inline IntervalSet generate(const CantorSpec& spec, unsigned n) {
  std::vector<Interval> segs{{Rational(0), Rational(1)}};
  if (auto rule = spec.digit_rule()) {
    const auto& [base, kept] = *rule;
    if (base == 3 && n > GenerationCaps::max_triadic_generation)
      throw CapacityError("triadic generation above 64");
    auto count = detail::segment_count(kept.size(), n);
    if (!count) throw CapacityError("generation exceeds segment capacity");
    detail::check_capacity(*count, ipow(base, n));
    for (unsigned step = 0; step < n; ++step) {
      std::vector<Interval> next;
      next.reserve(segs.size() * kept.size());
      for (const auto& s : segs) {
        Rational width = s.length() / base;
        for (unsigned d : kept) {
          Rational lo = s.lo + width * d;
          next.push_back({lo, lo + width});
        }
      }
      segs = std::move(next);
    }
    return IntervalSet::from_segments(std::move(segs));
  }
  auto count = detail::segment_count(2, n);
  if (!count) throw CapacityError("generation exceeds segment capacity");
  if (const auto* ts = std::get_if<CantorSpec::TwoScale>(&spec.variant())) {
    Integer den = 1;
    for (unsigned i = 0; i < n; ++i) den *= ts->l1.get_den() * ts->l2.get_den();
    detail::check_capacity(*count, den);
    for (unsigned step = 0; step < n; ++step) {
      std::vector<Interval> next;
      next.reserve(segs.size() * 2);
      for (const auto& s : segs) {
        Rational w = s.length();
        next.push_back({s.lo, s.lo + w * ts->l1});
        next.push_back({s.hi - w * ts->l2, s.hi});
      }
      segs = std::move(next);
    }
    return IntervalSet::from_segments(std::move(segs));
  }
  // Fat: step k removes the centred fraction 3^-(2^k) of every segment.
  if (n > 31) throw CapacityError("fat generation above 31");
  detail::check_capacity(*count, ipow(3, (1UL << n) - 1));
  for (unsigned step = 0; step < n; ++step) {
    Rational removed = inv_pow(3, 1UL << step);
    Rational keep_half = (1 - removed) / 2;
    std::vector<Interval> next;
    next.reserve(segs.size() * 2);
    for (const auto& s : segs) {
      Rational piece = s.length() * keep_half;
      next.push_back({s.lo, s.lo + piece});
      next.push_back({s.hi - piece, s.hi});
    }
    segs = std::move(next);
  }
  return IntervalSet::from_segments(std::move(segs));
}

inline Rational total_length(const IntervalSet& s) {
  Rational sum = 0;
  for (const auto& iv : s) sum += iv.length();
  return sum;
}

inline Rational removed_length(const CantorSpec& spec, unsigned n) { return 1 - total_length(generate(spec, n)); }

/// Exact length of the generation-n fat Cantor set without materialising its
/// segments: all 2^n surviving segments share one length, tracked step by step.
inline Rational fat_length(unsigned n) {
  Rational segment = 1;
  for (unsigned k = 0; k < n; ++k) segment = segment * (1 - inv_pow(3, 1UL << k)) / 2;
  Rational total(ipow(2, n));
  return total * segment;
}

/// The fat-set length in double precision, usable for any n.
inline double fat_length_real(unsigned n) {
  double len = 1.0;
  for (unsigned k = 0; k < n; ++k) len *= 1.0 - std::pow(3.0, -std::ldexp(1.0, static_cast<int>(k)));
  return len;
}

/// ln N / ln(1/r) for the equal-ratio variants.
inline double similarity_dimension(const CantorSpec& spec) {
  auto rule = spec.digit_rule();
  if (!rule) throw Unsupported("similarity_dimension: only equal-ratio variants (KeepDigits, MiddleRemove)");
  return std::log(static_cast<double>(rule->second.size())) / std::log(static_cast<double>(rule->first));
}

enum class Membership { in, out, undecided };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::in: return "in";
    case Membership::out: return "out";
    default: return "undecided";
  }
}

/// Digit-by-digit membership of x for the digit variants.
///
/// Both expansions of b-adic endpoints are followed, so endpoints count as
/// members. Returns `out` as soon as every branch hits an excluded digit within
/// `depth` places; `in` when the digit process provably never leaves the kept
/// set (the remainder state repeats); `undecided` when x survives all `depth`
/// places without such a proof. A non-`out` verdict therefore means x lies in
/// generate(spec, depth).
inline Membership contains(const CantorSpec& spec, const Rational& x, unsigned depth) {
  auto rule = spec.digit_rule();
  if (!rule) throw Unsupported("contains: only digit variants");
  if (x < 0 || x > 1) throw InvalidArgument("contains: x outside [0,1]");
  const auto& [base, kept] = *rule;
  std::vector<Rational> frontier{x};
  std::set<std::vector<Rational>> seen;
  for (unsigned place = 0; place < depth; ++place) {
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    if (!seen.insert(frontier).second) return Membership::in;
    std::vector<Rational> next;
    for (const auto& r : frontier) {
      Rational scaled = r * base;
      for (unsigned d : kept) {
        Rational rem = scaled - d;
        if (rem >= 0 && rem <= 1) next.push_back(rem);
      }
    }
    if (next.empty()) return Membership::out;
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  if (seen.count(frontier)) return Membership::in;
  return Membership::undecided;
}

/// Largest gap strictly between consecutive intervals.
inline Rational largest_gap(const IntervalSet& s) {
  if (s.empty()) throw InvalidArgument("largest_gap: empty set");
  Rational best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    Rational gap = s[i].lo - s[i - 1].hi;
    if (gap > best) best = gap;
  }
  return best;
}

/// x -> 1 - x.
inline IntervalSet reflect(const IntervalSet& s) {
  std::vector<Interval> out;
  out.reserve(s.size());
  for (auto it = s.intervals().rbegin(); it != s.intervals().rend(); ++it) out.push_back({1 - it->hi, 1 - it->lo});
  return IntervalSet(std::move(out));
}

inline void write_csv(std::ostream& os, const IntervalSet& s) {
  os << "lo_num,lo_den,hi_num,hi_den\n";
  for (const auto& iv : s)
    os << iv.lo.get_num() << ',' << iv.lo.get_den() << ',' << iv.hi.get_num() << ',' << iv.hi.get_den() << '\n';
}

inline IntervalSet read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("interval CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "lo_num,lo_den,hi_num,hi_den") throw InvalidArgument("interval CSV: bad header '" + line + "'");
  std::vector<Interval> out;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 4) throw InvalidArgument("interval CSV: row " + std::to_string(row) + " needs 4 fields");
    try {
      out.push_back({parse_rational(f[0] + "/" + f[1]), parse_rational(f[2] + "/" + f[3])});
    } catch (const InvalidArgument&) {
      throw InvalidArgument("interval CSV: malformed row " + std::to_string(row));
    }
  }
  return IntervalSet(std::move(out));
}

}  // namespace fractalkit
