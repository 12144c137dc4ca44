#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "levygrad/bismut.hpp"
#include "levygrad/estimator.hpp"
#include "levygrad/subordinator.hpp"

using namespace levygrad;

namespace {

// Abscissae can round onto the endpoint singularities; those nodes carry no weight.
template <class F>
double integrate(F g, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(
      [&](double x) {
        const double y = g(x);
        return std::isfinite(y) ? y : 0.0;
      },
      lo, hi, 1e-13);
}

RunningStat laplace_stat(const BernsteinSpec& spec, double t, double eps, double u, std::size_t n, std::uint64_t seed,
                         bool compensate) {
  RunningStat stat;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, i, StreamPurpose::kClock);
    JumpPath p = sample_jump_path(spec, t, eps, rng);
    if (compensate) p = compensate_small_jumps(p, spec, eps);
    stat.add(std::exp(-u * p.value(t)));
  }
  return stat;
}

}  // namespace

TEST(BernsteinSpec, Evaluators) {
  const auto s = BernsteinSpec::alpha_stable(1.2);
  EXPECT_DOUBLE_EQ(s(0.0), 0.0);
  EXPECT_NEAR(s(2.0), std::pow(2.0, 0.6), 1e-15);
  EXPECT_DOUBLE_EQ(s.stable_index(), 0.6);
  EXPECT_DOUBLE_EQ(BernsteinSpec::drift_only(3.0)(2.0), 6.0);
  EXPECT_THROW(BernsteinSpec::alpha_stable(2.0), std::invalid_argument);
  EXPECT_THROW(BernsteinSpec::alpha_stable(0.0), std::invalid_argument);
  EXPECT_THROW(BernsteinSpec::drift_only(0.0), std::invalid_argument);
}

TEST(BernsteinSpec, CustomSpotChecks) {
  EXPECT_NO_THROW(BernsteinSpec::custom([](double u) { return std::log1p(u); }));
  EXPECT_THROW(BernsteinSpec::custom([](double u) { return 1.0 + u; }), std::invalid_argument);
  EXPECT_THROW(BernsteinSpec::custom([](double u) { return -u; }), std::invalid_argument);
}

TEST(JumpPath, ValueAndLimits) {
  const JumpPath p(2.0, {{0.5, 0.6}, {0.8, 0.7}});
  EXPECT_DOUBLE_EQ(p.value(0.0), 0.0);
  EXPECT_DOUBLE_EQ(p.value(0.5), 0.6);
  EXPECT_DOUBLE_EQ(p.value_before(0.5), 0.0);
  EXPECT_DOUBLE_EQ(p.value(0.8) - p.value_before(0.8), 0.7);
  EXPECT_DOUBLE_EQ(p.value(0.7) - p.value_before(0.7), 0.0);
  EXPECT_EQ(p.count_until(0.8), 2u);
  EXPECT_EQ(p.count_until(0.79), 1u);
  EXPECT_DOUBLE_EQ(p.with_drift(0.5).value(2.0), 1.3 + 1.0);
}

TEST(JumpPath, RejectsMalformedInput) {
  EXPECT_THROW(JumpPath(1.0, {{0.5, 0.1}, {0.5, 0.2}}), std::invalid_argument);
  EXPECT_THROW(JumpPath(1.0, {{0.6, 0.1}, {0.5, 0.2}}), std::invalid_argument);
  EXPECT_THROW(JumpPath(1.0, {{1.5, 0.1}}), std::invalid_argument);
  EXPECT_THROW(JumpPath(1.0, {{0.0, 0.1}}), std::invalid_argument);
  EXPECT_THROW(JumpPath(1.0, {{0.5, 0.0}}), std::invalid_argument);
}

TEST(LevyMeasure, ClosedFormsMatchQuadrature) {
  for (double alpha : {0.6, 1.0, 1.5, 1.9}) {
    const double a = alpha / 2.0;
    const double eps = 0.01;
    // Substituting x = eps / w^{1/a} maps [eps, inf) to (0, 1].
    const double tail = integrate(
        [&](double w) { return levy_density(alpha, eps * std::pow(w, -1.0 / a)) * eps / a * std::pow(w, -1.0 / a - 1.0); },
        0.0, 1.0);
    EXPECT_NEAR(levy_tail_mass(alpha, eps) / tail, 1.0, 1e-9) << alpha;
    // x = eps s^k flattens the x^{-a} and x^{1-a} singularities at the origin.
    auto near_zero = [&](double power, double k) {
      // Gauss-Kronrod never samples the endpoint, where eps s^k underflows.
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double s) {
            const double x = eps * std::pow(s, k);
            return std::pow(x, power) * levy_density(alpha, x) * eps * k * std::pow(s, k - 1.0);
          },
          0.0, 1.0, 15, 1e-14);
    };
    const double mean = near_zero(1.0, 1.0 / (1.0 - a));
    EXPECT_NEAR(dropped_mass_mean(alpha, eps, 2.0) / (2.0 * mean), 1.0, 1e-9) << alpha;
    const double second = near_zero(2.0, 1.0 / (2.0 - a));
    EXPECT_NEAR(dropped_mass_variance(alpha, eps, 2.0) / (2.0 * second), 1.0, 1e-9) << alpha;
  }
}

TEST(SampleJumpPath, EdgeCases) {
  const auto spec = BernsteinSpec::alpha_stable(1.0);
  RngStream rng(1, 0, StreamPurpose::kClock);
  EXPECT_TRUE(sample_jump_path(spec, 0.0, 0.01, rng).empty());
  EXPECT_THROW(sample_jump_path(spec, 1.0, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_jump_path(BernsteinSpec::drift_only(1.0), 1.0, 0.1, rng), std::invalid_argument);
  const JumpPath p = sample_jump_path(spec, 1.0, 1e-3, rng);
  EXPECT_EQ(p.compensation_drift(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GE(p.jumps()[i].size, 1e-3);
    EXPECT_GT(p.jumps()[i].time, 0.0);
    EXPECT_LE(p.jumps()[i].time, 1.0);
    if (i > 0) {
      EXPECT_LT(p.jumps()[i - 1].time, p.jumps()[i].time);
    }
  }
}

TEST(SampleJumpPath, MeanJumpCount) {
  const auto spec = BernsteinSpec::alpha_stable(1.0);
  RunningStat count;
  for (std::size_t i = 0; i < 10000; ++i) {
    RngStream rng(42, i, StreamPurpose::kClock);
    count.add(static_cast<double>(sample_jump_path(spec, 1.0, 0.01, rng).size()));
  }
  const double target = std::pow(0.01, -0.5) / std::tgamma(0.5);
  EXPECT_NEAR(target, 5.6419, 1e-4);
  EXPECT_LE(std::abs(count.mean - target), 3.0 * count.std_error());
}

TEST(SampleJumpPath, SizeTail) {
  const auto spec = BernsteinSpec::alpha_stable(1.5);
  const double eps = 0.01;
  std::size_t total = 0, above = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    RngStream rng(3, i, StreamPurpose::kClock);
    const JumpPath path = sample_jump_path(spec, 1.0, eps, rng);
    for (const Jump& j : path.jumps()) {
      ++total;
      above += j.size > 4.0 * eps ? 1 : 0;
    }
  }
  const double p = std::pow(4.0, -0.75);
  const double frac = static_cast<double>(above) / static_cast<double>(total);
  EXPECT_LE(std::abs(frac - p), 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(total)));
}

TEST(LaplaceLaw, TruncatedPathsMatchTruncatedExponent) {
  const auto spec = BernsteinSpec::alpha_stable(1.2);
  const double eps = 0.01, a = 0.6, c = a / std::tgamma(1 - a);
  for (double u : {0.5, 1.0, 2.0}) {
    const double small = integrate([&](double x) { return -std::expm1(-u * x) * c * std::pow(x, -1 - a); }, 0.0, eps);
    const double target = std::exp(-(std::pow(u, a) - small));
    const RunningStat s = laplace_stat(spec, 1.0, eps, u, 40000, 5, false);
    EXPECT_LE(std::abs(s.mean - target), 3.0 * s.std_error()) << u;
  }
}

TEST(LaplaceLaw, CompensatedPathsMatchStableLaw) {
  const std::size_t n = 20000;
  for (double alpha : {0.8, 1.2, 1.7}) {
    const auto spec = BernsteinSpec::alpha_stable(alpha);
    const double eps = eps_for_expected_jumps(alpha, 1.0, 300.0);
    for (double u : {0.5, 1.0, 2.0}) {
      const RunningStat s = laplace_stat(spec, 1.0, eps, u, n, 77, true);
      const double target = std::exp(-std::pow(u, alpha / 2.0));
      EXPECT_LE(std::abs(s.mean - target), 4.0 / std::sqrt(double(n)) * std::sqrt(s.variance())) << alpha << " " << u;
    }
  }
}

TEST(Truncate, Examples) {
  const JumpPath p(3.0, {{1.0, 0.5}, {2.0, 0.05}});
  const JumpPath same = truncate_jumps(p, 0.0);
  ASSERT_EQ(same.size(), 2u);
  EXPECT_EQ(same.jumps()[1].size, 0.05);
  const JumpPath cut = truncate_jumps(p, 0.1);
  ASSERT_EQ(cut.size(), 1u);
  EXPECT_EQ(cut.jumps()[0].time, 1.0);
  EXPECT_EQ(cut.jumps()[0].size, 0.5);
  EXPECT_TRUE(truncate_jumps(p, 1.0).empty());
  EXPECT_THROW(truncate_jumps(p.with_drift(0.1), 0.1), std::invalid_argument);
}

TEST(Truncate, MonotoneAndSupEqualsDroppedSum) {
  RngStream rng(9, 0, StreamPurpose::kClock);
  const JumpPath p = sample_jump_path(BernsteinSpec::alpha_stable(1.3), 1.0, 1e-4, rng);
  double previous_gap = std::numeric_limits<double>::infinity();
  for (double eps : {0.5, 0.1, 0.01, 1e-3, 1e-4}) {
    const JumpPath q = truncate_jumps(p, eps);
    double dropped = 0.0;
    for (const Jump& j : p.jumps()) dropped += j.size < eps ? j.size : 0.0;
    double sup = 0.0;
    for (const Jump& j : p.jumps()) sup = std::max(sup, p.value(j.time) - q.value(j.time));
    sup = std::max(sup, p.value(1.0) - q.value(1.0));
    EXPECT_NEAR(sup, dropped, 1e-12);
    EXPECT_LE(sup, previous_gap + 1e-15);
    previous_gap = sup;
  }
  const JumpPath coarse = truncate_jumps(p, 0.01), fine = truncate_jumps(p, 0.001);
  for (double t = 0.0; t <= 1.0; t += 0.01) EXPECT_GE(fine.value(t), coarse.value(t));
}

TEST(FirstPassage, Examples) {
  auto a = first_passage(JumpPath(1.0, {{0.5, 0.6}, {0.8, 0.7}}), 1.0);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->tau, 0.8);
  EXPECT_DOUBLE_EQ(a->value_before, 0.6);
  EXPECT_DOUBLE_EQ(a->value_at, 1.3);
  auto b = first_passage(JumpPath(1.0, {{0.5, 2.0}}), 1.0);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->tau, 0.5);
  EXPECT_EQ(b->value_at, 2.0);
  EXPECT_FALSE(first_passage(JumpPath(1.0, {{0.5, 0.6}}), 1.0));
  EXPECT_THROW(first_passage(JumpPath(1.0, {{0.5, 0.6}}), 0.0), std::invalid_argument);
}

TEST(FirstPassage, IdempotentOnSampledPaths) {
  const auto spec = BernsteinSpec::alpha_stable(1.5);
  for (std::size_t i = 0; i < 200; ++i) {
    RngStream rng(4, i, StreamPurpose::kClock);
    const JumpPath p = sample_jump_path(spec, 1.0, 1e-3, rng);
    if (auto q = first_passage(p, 0.5)) {
      EXPECT_EQ(p.value(q->tau), q->value_at);
      EXPECT_LT(q->value_before, 0.5);
      EXPECT_GE(q->value_at, 0.5);
    } else {
      EXPECT_LT(p.value(1.0), 0.5);
    }
  }
}

TEST(FirstPassage, DriftCrossing) {
  const JumpPath p = JumpPath(2.0, {{1.5, 0.2}}).with_drift(0.5);
  auto q = first_passage(p, 0.5);
  ASSERT_TRUE(q);
  EXPECT_NEAR(q->tau, 1.0, 1e-12);
  EXPECT_NEAR(q->value_at, 0.5, 1e-12);
}

TEST(InverseMoment, DriftOnly) {
  for (double t : {0.5, 1.0, 3.0}) {
    for (double g : {0.25, 0.5, 1.5}) {
      EXPECT_NEAR(inverse_moment(BernsteinSpec::drift_only(1.0), t, g) / std::pow(t, -g), 1.0, 1e-8);
    }
  }
}

TEST(InverseMoment, StableClosedForm) {
  EXPECT_NEAR(inverse_moment(BernsteinSpec::alpha_stable(1.0), 1.0, 0.5) / (2.0 / std::sqrt(M_PI)), 1.0, 1e-8);
  for (double alpha : {0.5, 1.0, 1.5, 1.9}) {
    for (double g : {0.2, 0.5, 1.0}) {
      for (double t : {0.1, 1.0, 4.0}) {
        const double closed = 2.0 * std::tgamma(2.0 * g / alpha) / (alpha * std::tgamma(g)) * std::pow(t, -2.0 * g / alpha);
        EXPECT_NEAR(inverse_moment(BernsteinSpec::alpha_stable(alpha), t, g) / closed, 1.0, 1e-8)
            << alpha << " " << g << " " << t;
      }
    }
  }
}

TEST(InverseMoment, SelfSimilarScaling) {
  const auto spec = BernsteinSpec::alpha_stable(1.5);
  const double base = inverse_moment(spec, 1.0, 0.5);
  for (double t : {0.02, 0.3, 2.0}) {
    EXPECT_NEAR(inverse_moment(spec, t, 0.5) / base / std::pow(t, -2.0 * 0.5 / 1.5), 1.0, 1e-6);
  }
}

TEST(InverseMoment, CustomGammaSubordinator) {
  // B(u) = log(1 + u) is the Gamma subordinator; E S_1^{-1/2} = Gamma(1/2) = sqrt(pi).
  const auto spec = BernsteinSpec::custom([](double u) { return std::log1p(u); }, "gamma");
  EXPECT_NEAR(inverse_moment(spec, 1.0, 0.5) / std::sqrt(M_PI), 1.0, 1e-8);
  EXPECT_THROW(inverse_moment(spec, 0.25, 0.5), DivergenceError);
}

TEST(InverseMoment, MonteCarloCrossCheck) {
  const auto spec = BernsteinSpec::alpha_stable(1.5);
  const double eps = 1e-3;
  RunningStat s;
  for (std::size_t i = 0; i < 40000; ++i) {
    RngStream rng(12, i, StreamPurpose::kClock);
    s.add(std::pow(compensate_small_jumps(sample_jump_path(spec, 1.0, eps, rng), spec, eps).value(1.0), -0.5));
  }
  EXPECT_LE(std::abs(s.mean - inverse_moment(spec, 1.0, 0.5)), 3.0 * s.std_error());
}

TEST(EpsCut, DefaultPolicy) {
  const auto spec = BernsteinSpec::alpha_stable(0.8);
  const EpsCutChoice c = default_eps_cut(spec, 1.0);
  EXPECT_TRUE(c.mass_rule_met);
  EXPECT_LE(c.relative_dropped, 1e-3 * (1 + 1e-9));
  EXPECT_LE(c.expected_jumps, 1000.0);
  const EpsCutChoice d = default_eps_cut(BernsteinSpec::alpha_stable(1.5), 1.0);
  EXPECT_FALSE(d.mass_rule_met);
  EXPECT_NEAR(d.expected_jumps, 1000.0, 1e-6);
  EXPECT_NEAR(2.0 * levy_tail_mass(1.5, eps_for_expected_jumps(1.5, 2.0, 50.0)), 50.0, 1e-9);
  EXPECT_THROW(default_eps_cut(BernsteinSpec::drift_only(1.0), 1.0), std::invalid_argument);
}

TEST(Rng, StreamsAreKeyedAndReproducible) {
  RngStream a(5, 7, StreamPurpose::kClock), b(5, 7, StreamPurpose::kClock), c(5, 7, StreamPurpose::kIncrements),
      d(5, 8, StreamPurpose::kClock);
  const double x = a.normal(), y = b.normal();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, c.normal());
  EXPECT_NE(x, d.normal());
  RngStream e(1, 0, StreamPurpose::kClock);
  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform_open_left();
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
}
