#pragma once

// Correlation and regression between dSEM (x) and dXc (y).
//
// p-values use the two-sided t-test for Pearson's r with n - 2 degrees of
// freedom. The Student-t CDF comes from the regularized incomplete beta
// function,
//
//   P(|T| > t) = I_{df / (df + t^2)}(df / 2, 1 / 2),
//
// evaluated with the continued fraction of Numerical Recipes' betacf
// (modified Lentz, relative tolerance 1e-16), switching to the symmetric
// form I_x(a, b) = 1 - I_{1-x}(b, a) where the fraction converges slowly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cccl/error.hpp"
#include "cccl/similarity.hpp"
#include "cccl/types.hpp"

namespace cccl {

struct PairedSeries {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::string> labels;  // optional, empty or one per point

  std::size_t size() const noexcept { return xs.size(); }

  void validate(std::size_t min_points) const {
    if (xs.size() != ys.size())
      throw InputError("paired series lengths differ: " + std::to_string(xs.size()) + " vs " +
                       std::to_string(ys.size()));
    if (!labels.empty() && labels.size() != xs.size()) throw InputError("label count differs from point count");
    if (xs.size() < min_points)
      throw InputError("need at least " + std::to_string(min_points) + " points, got " + std::to_string(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InputError("non-finite value in paired series");
  }
};

/// x = delta_sem, y = delta_xc, label = "concept/language".
inline PairedSeries series_from(std::span<const ConceptResult> results) {
  PairedSeries s;
  for (const auto& r : results) {
    s.xs.push_back(r.delta_sem);
    s.ys.push_back(r.delta_xc);
    std::string label = r.concept_id.str() + "/" + r.language.str();
    if (r.sample_index) label += "#" + std::to_string(*r.sample_index);
    s.labels.push_back(std::move(label));
  }
  return s;
}

namespace detail {

struct Moments {
  double n = 0, mean_x = 0, mean_y = 0, sxx = 0, syy = 0, sxy = 0;
};

// Two-pass centered sums.
inline Moments moments(const PairedSeries& s) {
  Moments m;
  m.n = static_cast<double>(s.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sx.add(s.xs[i]);
    sy.add(s.ys[i]);
  }
  m.mean_x = sx.value() / m.n;
  m.mean_y = sy.value() / m.n;
  CompensatedSum xx, yy, xy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = s.xs[i] - m.mean_x, dy = s.ys[i] - m.mean_y;
    xx.add(dx * dx);
    yy.add(dy * dy);
    xy.add(dx * dy);
  }
  m.sxx = xx.value();
  m.syy = yy.value();
  m.sxy = xy.value();
  return m;
}

inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Two-sided tail probability P(|T| >= |t|) for Student's t with df > 0.
inline double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw InputError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t)), 0.0, 1.0);
}

inline double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

/// Inverse CDF for p in (0, 1), by bracketing and bisection to full precision.
inline double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile needs p in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);
  double lo = 0.0, hi = 1.0;
  while (student_t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error("t quantile bracket overflow");
  }
  for (int i = 0; i < 200 && hi - lo > std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

/// Sample Pearson r. Throws DegenerateError when either axis has zero variance.
inline double pearson(const PairedSeries& s) {
  s.validate(3);
  auto m = detail::moments(s);
  if (m.sxx == 0.0) throw DegenerateError("pearson: x has zero variance");
  if (m.syy == 0.0) throw DegenerateError("pearson: y has zero variance");
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

/// Two-sided p-value for H0: rho = 0, t = r sqrt((n-2)/(1-r^2)), df = n - 2.
inline double p_value(double pcc, std::size_t n) {
  if (n < 3) throw InputError("p-value needs n >= 3");
  if (!(std::abs(pcc) <= 1.0)) throw InputError("|pcc| must be <= 1");
  if (pcc == 0.0) return 1.0;
  if (std::abs(pcc) == 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  // df / (df + t^2) simplifies to 1 - r^2.
  const double one_minus_r2 = (1.0 - pcc) * (1.0 + pcc);
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, one_minus_r2), 0.0, 1.0);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double x) const { return slope * x + intercept; }
};

/// Ordinary least squares. Needs n >= 2 and non-constant xs.
inline LinearFit linear_fit(const PairedSeries& s) {
  s.validate(2);
  auto m = detail::moments(s);
  if (m.sxx == 0.0) throw DegenerateError("linear fit: x is constant");
  LinearFit fit;
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;
  return fit;
}

/// Mean-response confidence band around the least-squares line:
///   half_width(x) = t_{(1+level)/2, n-2} * s * sqrt(1/n + (x - mean_x)^2 / Sxx)
struct RegressionBand {
  LinearFit fit;
  double level = 0.95;
  std::size_t n = 0;
  double mean_x = 0.0;
  double sxx = 0.0;
  double residual_se = 0.0;  // sqrt(SSR / (n - 2))
  double t_quantile = 0.0;
  double x_min = 0.0, x_max = 0.0;

  double half_width(double x) const {
    const double dx = x - mean_x;
    return t_quantile * residual_se * std::sqrt(1.0 / static_cast<double>(n) + dx * dx / sxx);
  }
  double lower(double x) const { return fit(x) - half_width(x); }
  double upper(double x) const { return fit(x) + half_width(x); }
};

inline RegressionBand regression_ci(const PairedSeries& s, double level = 0.95) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must be in (0, 1)");
  s.validate(3);
  RegressionBand band;
  band.fit = linear_fit(s);
  auto m = detail::moments(s);
  band.level = level;
  band.n = s.size();
  band.mean_x = m.mean_x;
  band.sxx = m.sxx;
  CompensatedSum ssr;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s.ys[i] - band.fit(s.xs[i]);
    ssr.add(r * r);
  }
  const double df = static_cast<double>(s.size() - 2);
  band.residual_se = std::sqrt(std::max(0.0, ssr.value()) / df);
  band.t_quantile = student_t_quantile(0.5 + level / 2.0, df);
  auto [lo, hi] = std::minmax_element(s.xs.begin(), s.xs.end());
  band.x_min = *lo;
  band.x_max = *hi;
  return band;
}

// ---------------------------------------------------------------------------

/// One row of the per-(model, language) fit table.
struct FitStats {
  std::string model_id;
  LanguageCode language;
  double pcc = 0.0;
  double p_value = 1.0;
  double slope_m = 0.0;
  double intercept_b = 0.0;
  std::size_t n_points = 0;
  double ci_level = 0.95;
  RegressionBand band;
};

inline FitStats summarize(const PairedSeries& series, std::string model_id, LanguageCode language,
                          double ci_level = 0.95) {
  if (series.size() < 3)
    throw InputError("insufficient points for a fit: " + std::to_string(series.size()) + " < 3");
  FitStats f;
  f.model_id = std::move(model_id);
  f.language = std::move(language);
  f.pcc = pearson(series);
  f.n_points = series.size();
  f.p_value = p_value(f.pcc, f.n_points);
  f.band = regression_ci(series, ci_level);
  f.slope_m = f.band.fit.slope;
  f.intercept_b = f.band.fit.intercept;
  f.ci_level = ci_level;
  return f;
}

inline FitStats summarize(const std::string& model_id, const LanguageCode& language,
                          std::span<const ConceptResult> results, double ci_level = 0.95) {
  return summarize(series_from(results), model_id, language, ci_level);
}

}  // namespace cccl
