#include <gtest/gtest.h>

#include <numbers>
#include <numeric>
#include <random>

#include "cccl/stats.hpp"
#include "support.hpp"

using namespace cccl;

namespace {

PairedSeries series(std::vector<double> xs, std::vector<double> ys) { return {std::move(xs), std::move(ys), {}}; }

// Two-sided tail of Student's t as 1 - 2 * (Simpson integral of the density
// over [0, |t|]); kept separate from the continued-fraction path the library uses.
double t_two_sided_simpson(double t, double df) {
  const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * std::numbers::pi);
  auto pdf = [&](double u) { return std::exp(log_c - (df + 1) / 2 * std::log1p(u * u / df)); };
  const int steps = 200000;
  const double h = std::abs(t) / steps;
  double s = pdf(0.0) + pdf(std::abs(t));
  for (int i = 1; i < steps; ++i) s += pdf(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - 2.0 * s * h / 3.0;
}

double r_to_t(double r, double df) { return r * std::sqrt(df / ((1 - r) * (1 + r))); }

PairedSeries correlated(std::mt19937_64& rng, std::size_t n, double rho) {
  std::normal_distribution<double> z;
  PairedSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    double x = z(rng);
    s.xs.push_back(x);
    s.ys.push_back(rho * x + std::sqrt(1 - rho * rho) * z(rng));
  }
  return s;
}

}  // namespace

TEST(Pearson, SmallIntegerExampleIsExact) {
  // Sxy = 5.5, Sxx = 5, Syy = 35/4 so r = 11 / sqrt(175).
  auto s = series({1, 2, 3, 4}, {1, 3, 2, 5});
  EXPECT_NEAR(pearson(s), 11.0 / std::sqrt(175.0), 1e-15);
}

TEST(Pearson, PerfectLinesGiveUnitMagnitude) {
  EXPECT_EQ(pearson(series({1, 2, 3}, {2, 4, 6})), 1.0);
  EXPECT_EQ(pearson(series({1, 2, 3}, {-2, -4, -6})), -1.0);
}

TEST(Pearson, DegenerateAndShortInputsThrow) {
  EXPECT_THROW(pearson(series({1, 1, 1}, {1, 2, 3})), DegenerateError);
  EXPECT_THROW(pearson(series({1, 2, 3}, {4, 4, 4})), DegenerateError);
  EXPECT_THROW(pearson(series({1, 2}, {1, 2})), InputError);
  EXPECT_THROW(pearson(series({1, 2, 3}, {1, 2})), InputError);
  EXPECT_THROW(pearson(series({1, 2, std::nan("")}, {1, 2, 3})), InputError);
}

TEST(Pearson, AffineInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = correlated(rng, 30, 0.5);
    const double r = pearson(s);
    auto t = s;
    for (auto& x : t.xs) x = 3.5 * x - 2.0;
    for (auto& y : t.ys) y = 0.25 * y + 7.0;
    EXPECT_NEAR(pearson(t), r, 1e-12);
    for (auto& y : t.ys) y = -y;
    EXPECT_NEAR(pearson(t), -r, 1e-12);
    std::swap(t.xs, t.ys);
    EXPECT_NEAR(pearson(t), -r, 1e-12);
  }
}

TEST(Pearson, LargeOffsetDoesNotLosePrecision) {
  auto s = series({1e9 + 1, 1e9 + 2, 1e9 + 3, 1e9 + 4}, {1, 3, 2, 5});
  EXPECT_NEAR(pearson(s), 11.0 / std::sqrt(175.0), 1e-12);
}

// ---------------------------------------------------------------------------

TEST(PValue, MatchesIndependentIntegration) {
  EXPECT_NEAR(p_value(0.734, 24), t_two_sided_simpson(r_to_t(0.734, 22), 22), 1e-12);
  // Arbitrary-precision integration of the same density.
  EXPECT_NEAR(p_value(0.734, 24), 4.455982196285257e-05, 1e-15);
  for (double r : {0.05, 0.2, 0.5, 0.9, -0.3})
    for (std::size_t n : {5, 9, 24, 100}) {
      const double df = static_cast<double>(n - 2);
      EXPECT_NEAR(p_value(r, n), t_two_sided_simpson(r_to_t(r, df), df), 1e-10) << r << " " << n;
    }
}

TEST(PValue, EdgeCases) {
  EXPECT_EQ(p_value(0.0, 10), 1.0);
  EXPECT_EQ(p_value(1.0, 10), 0.0);
  EXPECT_EQ(p_value(-1.0, 10), 0.0);
  EXPECT_THROW(p_value(0.5, 2), InputError);
  EXPECT_THROW(p_value(1.5, 10), InputError);
}

TEST(PValue, MonotoneInMagnitudeAndSampleSize) {
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    const double p = p_value(i / 100.0, 20);
    EXPECT_LE(p, prev);
    EXPECT_EQ(p, p_value(-i / 100.0, 20));
    prev = p;
  }
  EXPECT_GT(p_value(0.3, 10), p_value(0.3, 50));
}

TEST(PValue, AgreesWithPermutationTest) {
  std::mt19937_64 rng(2718);
  auto s = correlated(rng, 20, 0.35);
  const double r = pearson(s);
  const int perms = 20000;
  int extreme = 0;
  auto t = s;
  for (int i = 0; i < perms; ++i) {
    std::shuffle(t.ys.begin(), t.ys.end(), rng);
    if (std::abs(pearson(t)) >= std::abs(r)) ++extreme;
  }
  EXPECT_NEAR(p_value(r, s.size()), static_cast<double>(extreme) / perms, 0.05);
}

TEST(StudentT, QuantilesAndCdf) {
  EXPECT_NEAR(student_t_quantile(0.975, 22), 2.0738730679040147, 1e-9);
  EXPECT_NEAR(student_t_quantile(0.975, 7), 2.3646242515927844, 1e-9);
  EXPECT_NEAR(student_t_quantile(0.025, 7), -2.3646242515927844, 1e-9);
  EXPECT_EQ(student_t_quantile(0.5, 3), 0.0);
  for (double p : {0.6, 0.9, 0.99, 0.9999}) EXPECT_NEAR(student_t_cdf(student_t_quantile(p, 12), 12), p, 1e-10);
  // df = 1 is Cauchy.
  EXPECT_NEAR(student_t_cdf(1.0, 1), 0.75, 1e-14);
  EXPECT_THROW(student_t_quantile(1.0, 5), InputError);
}

TEST(IncompleteBeta, ClosedForms) {
  // I_x(1, 1) = x; I_x(a, 1) = x^a; I_x(1, b) = 1 - (1 - x)^b.
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(regularized_incomplete_beta(1, 1, x), x, 1e-14);
    EXPECT_NEAR(regularized_incomplete_beta(3.5, 1, x), std::pow(x, 3.5), 1e-14);
    EXPECT_NEAR(regularized_incomplete_beta(1, 2.5, x), 1 - std::pow(1 - x, 2.5), 1e-14);
  }
  EXPECT_THROW(regularized_incomplete_beta(0, 1, 0.5), InputError);
  EXPECT_THROW(regularized_incomplete_beta(1, 1, 1.5), InputError);
}

// ---------------------------------------------------------------------------

TEST(LinearFit, SmallIntegerExampleIsExact) {
  auto f = linear_fit(series({1, 2, 3, 4}, {1, 3, 2, 5}));
  EXPECT_NEAR(f.slope, 1.1, 1e-15);
  EXPECT_NEAR(f.intercept, 0.0, 1e-15);
}

TEST(LinearFit, RecoversPlantedLine) {
  std::vector<double> xs, ys;
  for (int i = -10; i <= 10; ++i) {
    xs.push_back(i / 100.0);
    ys.push_back(1.5 * (i / 100.0) + 0.01);
  }
  auto f = linear_fit(series(xs, ys));
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, 0.01, 1e-12);
}

TEST(LinearFit, ResidualsAreOrthogonalToXAndOne) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = correlated(rng, 40, 0.6);
    auto f = linear_fit(s);
    double sum = 0, dot = 0, scale = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double e = s.ys[i] - f(s.xs[i]);
      sum += e;
      dot += e * s.xs[i];
      scale += std::abs(s.ys[i] * s.xs[i]);
    }
    EXPECT_NEAR(sum, 0.0, 1e-12);
    EXPECT_NEAR(dot, 0.0, 1e-12 * scale);
    // Slope and pearson agree in sign and through the sd ratio.
    auto m = detail::moments(s);
    EXPECT_NEAR(f.slope, pearson(s) * std::sqrt(m.syy / m.sxx), 1e-12);
  }
}

TEST(LinearFit, ConstantXIsDegenerate) {
  EXPECT_THROW(linear_fit(series({2, 2, 2}, {1, 2, 3})), DegenerateError);
}

// ---------------------------------------------------------------------------

TEST(RegressionBand, ShapeAndWidth) {
  std::mt19937_64 rng(17);
  auto s = correlated(rng, 24, 0.7);
  auto band = regression_ci(s, 0.95);
  EXPECT_NEAR(band.t_quantile, 2.0738730679040147, 1e-9);
  EXPECT_EQ(band.n, 24u);
  // Narrowest at the mean of x, symmetric around it, contains the line.
  const double w0 = band.half_width(band.mean_x);
  for (double dx : {0.1, 0.5, 1.0, 3.0}) {
    EXPECT_GT(band.half_width(band.mean_x + dx), w0);
    EXPECT_NEAR(band.half_width(band.mean_x + dx), band.half_width(band.mean_x - dx), 1e-12);
  }
  for (double x = band.x_min; x <= band.x_max; x += 0.1) {
    EXPECT_LT(band.lower(x), band.fit(x));
    EXPECT_GT(band.upper(x), band.fit(x));
  }
  // Independent computation of the half-width at the mean: t * s / sqrt(n).
  double ssr = 0;
  for (std::size_t i = 0; i < s.size(); ++i) ssr += std::pow(s.ys[i] - band.fit(s.xs[i]), 2);
  EXPECT_NEAR(w0, 2.0738730679040147 * std::sqrt(ssr / 22) / std::sqrt(24.0), 1e-9);
  // Higher level, wider band.
  EXPECT_GT(regression_ci(s, 0.99).half_width(0.0), band.half_width(0.0));
}

TEST(RegressionBand, ExactFitHasZeroWidth) {
  auto band = regression_ci(series({1, 2, 3, 4}, {2, 4, 6, 8}));
  EXPECT_NEAR(band.half_width(2.5), 0.0, 1e-12);
}

TEST(RegressionBand, RejectsBadLevel) {
  auto s = series({1, 2, 3}, {1, 3, 2});
  EXPECT_THROW(regression_ci(s, 1.0), InputError);
  EXPECT_THROW(regression_ci(s, 0.0), InputError);
}

// ---------------------------------------------------------------------------

TEST(Summarize, PlantedFixture) {
  auto planted = support::make_planted(20, 1.5, 0.01, 9, 3);
  auto results = score_concepts(planted.inventory, planted.corrections, planted.images, planted.text, "AD");
  auto f = summarize("AD", LanguageCode("ja"), results);
  EXPECT_NEAR(f.slope_m, 1.5, 1e-9);
  EXPECT_NEAR(f.intercept_b, 0.01, 1e-9);
  EXPECT_NEAR(f.pcc, 1.0, 1e-9);
  EXPECT_EQ(f.n_points, 20u);
  EXPECT_EQ(f.model_id, "AD");
}

TEST(Summarize, NeedsThreePoints) {
  EXPECT_THROW(summarize(series({1, 2}, {1, 2}), "AD", LanguageCode("ja")), InputError);
}

TEST(SeriesFrom, LabelsIncludeSampleIndex) {
  ConceptResult a;
  a.concept_id = ConceptId("rock");
  a.language = LanguageCode("id");
  a.delta_sem = 0.1;
  a.delta_xc = 0.2;
  ConceptResult b = a;
  b.sample_index = 3;
  std::vector<ConceptResult> rs = {a, b};
  auto s = series_from(rs);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"rock/id", "rock/id#3"}));
  EXPECT_EQ(s.xs, (std::vector<double>{0.1, 0.1}));
  EXPECT_EQ(s.ys, (std::vector<double>{0.2, 0.2}));
}
