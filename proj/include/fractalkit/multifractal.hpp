#pragma once

// Closed-form multifractal spectrum of the two-scale Cantor measure.
//
// Convention: tau(q) is the root of p1^q l1^tau + p2^q l2^tau = 1, so
// tau(0) = D0, tau(1) = 0 and D_q = tau(q) / (1 - q).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fractalkit/error.hpp"

namespace fractalkit::mfa {

class TwoScaleMeasure {
 public:
  TwoScaleMeasure(double l1, double l2, double p1, double p2) : l_{l1, l2}, p_{p1, p2} {
    for (double l : l_)
      if (!(l > 0 && l < 1)) throw InvalidArgument("TwoScaleMeasure: ratios must lie in (0,1)");
    for (double p : p_)
      if (!(p > 0 && p < 1)) throw InvalidArgument("TwoScaleMeasure: weights must lie in (0,1)");
    if (l1 + l2 > 1 + 1e-15) throw InvalidArgument("TwoScaleMeasure: l1 + l2 must not exceed 1");
    if (std::abs(p1 + p2 - 1) > 1e-12) throw InvalidArgument("TwoScaleMeasure: p1 + p2 must equal 1");
  }

  double l1() const { return l_[0]; }
  double l2() const { return l_[1]; }
  double p1() const { return p_[0]; }
  double p2() const { return p_[1]; }
  const std::array<double, 2>& ratios() const { return l_; }
  const std::array<double, 2>& weights() const { return p_; }

  /// Hoelder exponents of the two pure branches, ln p_i / ln l_i.
  double branch_alpha(int i) const { return std::log(p_[i]) / std::log(l_[i]); }
  double alpha_min() const { return std::min(branch_alpha(0), branch_alpha(1)); }
  double alpha_max() const { return std::max(branch_alpha(0), branch_alpha(1)); }

 private:
  std::array<double, 2> l_;
  std::array<double, 2> p_;
};

struct SpectrumPoint {
  double q;
  double tau;
  double Dq;
  double alpha;
  double f;
};

namespace detail {

/// ln(p1^q l1^t + p2^q l2^t), evaluated without overflow.
inline double log_moment(const TwoScaleMeasure& m, double q, double t) {
  double a = q * std::log(m.p1()) + t * std::log(m.l1());
  double b = q * std::log(m.p2()) + t * std::log(m.l2());
  double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

/// Normalised weights w_i = p_i^q l_i^t / sum.
inline std::array<double, 2> moment_weights(const TwoScaleMeasure& m, double q, double t) {
  double a = q * std::log(m.p1()) + t * std::log(m.l1());
  double b = q * std::log(m.p2()) + t * std::log(m.l2());
  double hi = std::max(a, b);
  double ea = std::exp(a - hi), eb = std::exp(b - hi);
  return {ea / (ea + eb), eb / (ea + eb)};
}

/// Root in t of ln(p1^q l1^t + p2^q l2^t) = 0. The left side is strictly
/// decreasing in t, so bisection on an expanding bracket always converges.
inline double solve_exponent(const TwoScaleMeasure& m, double q) {
  if (!std::isfinite(q)) throw InvalidArgument("moment order must be finite");
  double reach = std::abs(q) * m.alpha_max() + 2.0;
  double lo = -reach, hi = reach;
  while (log_moment(m, q, lo) < 0) lo *= 2;
  while (log_moment(m, q, hi) > 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (log_moment(m, q, mid) > 0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  // One Newton step: d/dt log_moment = sum w_i ln l_i.
  auto w = moment_weights(m, q, t);
  double slope = w[0] * std::log(m.l1()) + w[1] * std::log(m.l2());
  double refined = t - log_moment(m, q, t) / slope;
  if (std::abs(log_moment(m, q, refined)) <= std::abs(log_moment(m, q, t))) t = refined;
  return t;
}

}  // namespace detail

/// (p1^q l1^d + p2^q l2^d)^n.
inline double partition_sum(const TwoScaleMeasure& m, double q, double d, unsigned n) {
  double base = std::pow(m.p1(), q) * std::pow(m.l1(), d) + std::pow(m.p2(), q) * std::pow(m.l2(), d);
  double z = std::pow(base, static_cast<double>(n));
  if (!std::isfinite(z) || !std::isfinite(base)) throw NumericalError("partition_sum overflow");
  return z;
}

/// The same sum taken over the C(n,k) sub-segments of each length class.
inline double partition_sum_binomial(const TwoScaleMeasure& m, double q, double d, unsigned n) {
  double a = std::pow(m.p1(), q) * std::pow(m.l1(), d);
  double b = std::pow(m.p2(), q) * std::pow(m.l2(), d);
  double sum = 0.0;
  double binom = 1.0;
  for (unsigned k = 0; k <= n; ++k) {
    sum += binom * std::pow(a, static_cast<double>(k)) * std::pow(b, static_cast<double>(n - k));
    binom = binom * (n - k) / (k + 1);
  }
  if (!std::isfinite(sum)) throw NumericalError("partition_sum overflow");
  return sum;
}

/// Root D of l1^D + l2^D = 1.
inline double support_dimension(const TwoScaleMeasure& m) { return detail::solve_exponent(m, 0.0); }

inline double mass_exponent(const TwoScaleMeasure& m, double q) { return detail::solve_exponent(m, q); }

/// Residual of the defining equation at the computed tau.
inline double mass_exponent_residual(const TwoScaleMeasure& m, double q) {
  double t = mass_exponent(m, q);
  return std::pow(m.p1(), q) * std::pow(m.l1(), t) + std::pow(m.p2(), q) * std::pow(m.l2(), t) - 1.0;
}

/// alpha(q) = -dtau/dq by implicit differentiation of the root equation.
inline double holder_alpha(const TwoScaleMeasure& m, double q) {
  double t = mass_exponent(m, q);
  auto w = detail::moment_weights(m, q, t);
  return (w[0] * std::log(m.p1()) + w[1] * std::log(m.p2())) / (w[0] * std::log(m.l1()) + w[1] * std::log(m.l2()));
}

/// Information dimension: the q -> 1 limit of tau(q) / (1 - q).
inline double information_dimension(const TwoScaleMeasure& m) {
  return (m.p1() * std::log(m.p1()) + m.p2() * std::log(m.p2())) /
         (m.p1() * std::log(m.l1()) + m.p2() * std::log(m.l2()));
}

inline double renyi_dimension(const TwoScaleMeasure& m, double q) {
  if (q == 1.0) return information_dimension(m);
  return mass_exponent(m, q) / (1.0 - q);
}

struct AlphaF {
  double alpha;
  double f;
};

inline AlphaF f_alpha(const TwoScaleMeasure& m, double q) {
  double a = holder_alpha(m, q);
  return {a, q * a + mass_exponent(m, q)};
}

inline SpectrumPoint spectrum_point(const TwoScaleMeasure& m, double q) {
  double tau = mass_exponent(m, q);
  double alpha = holder_alpha(m, q);
  double dq = q == 1.0 ? information_dimension(m) : tau / (1.0 - q);
  return {q, tau, dq, alpha, q * alpha + tau};
}

/// Spectrum on q_min, q_min + step, ... up to q_max (inclusive, up to rounding).
inline std::vector<SpectrumPoint> spectrum(const TwoScaleMeasure& m, double q_min, double q_max, double q_step) {
  if (!(q_step > 0)) throw InvalidArgument("spectrum: q_step must be positive");
  if (q_max < q_min) throw InvalidArgument("spectrum: q_max < q_min");
  std::vector<SpectrumPoint> out;
  auto count = static_cast<long>(std::floor((q_max - q_min) / q_step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    double q = q_min + static_cast<double>(i) * q_step;
    if (std::abs(q) < 1e-12) q = 0.0;
    if (std::abs(q - 1.0) < 1e-12) q = 1.0;
    out.push_back(spectrum_point(m, q));
  }
  return out;
}

/// Equal-cell (size 3^-k) two-weight measure with l1 + l2 = 1:
/// D_q = log_3(l1^q + l2^q) / (1 - q).
inline double triadic_dq(double l1, double l2, double q) {
  if (!(l1 > 0 && l1 < 1) || std::abs(l1 + l2 - 1) > 1e-12)
    throw InvalidArgument("triadic_dq: need 0 < l1 < 1 and l1 + l2 = 1");
  double ln3 = std::log(3.0);
  if (q == 1.0) return -(l1 * std::log(l1) + l2 * std::log(l2)) / ln3;
  double a = q * std::log(l1), b = q * std::log(l2);
  double hi = std::max(a, b);
  double log_sum = hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  return log_sum / ln3 / (1.0 - q);
}

}  // namespace fractalkit::mfa
