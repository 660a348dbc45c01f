#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"
#include "oracles.hpp"

using namespace netstab;

namespace {

ModelParams with_b(double b) {
  ModelParams p;
  p.a = 1.5;
  p.b = b;
  return p;
}

const CapacityLaw kAvq = CapacityLaw::affine(5.0, 1.0);

}  // namespace

TEST(Margin, AgreesWithLongDoubleOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(0.05, 4.9);
  for (double b : {0.2, 0.8, 1.5}) {
    const ModelParams p = with_b(b);
    const Equilibrium eq = solve_equilibrium(p, kAvq);
    oracle::ModelSpec spec;
    spec.b = b;
    for (int i = 0; i < 500; ++i) {
      const double x = xs(rng);
      if (std::abs(x - eq.x_star) < 1e-3) continue;
      const double ref = static_cast<double>(oracle::margin(spec, x, eq.x_star));
      EXPECT_NEAR(theorem2_margin(x, p, kAvq, eq), ref, 1e-10 * std::max(1.0, std::abs(ref)))
          << "b = " << b << " x = " << x;
    }
  }
}

TEST(Margin, SmallExponentChangesSignNearOnePointTwoFive) {
  const ModelParams p = with_b(0.2);
  const Equilibrium eq = solve_equilibrium(p, kAvq);
  EXPECT_GT(theorem2_margin(1.25, p, kAvq, eq), 0.0);
  EXPECT_LT(theorem2_margin(1.26, p, kAvq, eq), 0.0);
  for (double x = 0.3; x < 1.25; x += 0.01) EXPECT_GT(theorem2_margin(x, p, kAvq, eq), 0.0) << x;
}

TEST(Margin, LargeExponentIsNegativeNearEquilibrium) {
  const ModelParams p = with_b(0.8);
  const Equilibrium eq = solve_equilibrium(p, kAvq);
  EXPECT_LT(theorem2_margin_limit(p, kAvq, eq), 0.0);
  EXPECT_LT(theorem2_margin(1.5, p, kAvq, eq), 0.0);
}

TEST(Margin, BandReturnsLimitAndSeamIsContinuous) {
  for (double b : {0.2, 0.8}) {
    const ModelParams p = with_b(b);
    const Equilibrium eq = solve_equilibrium(p, kAvq);
    const double limit = theorem2_margin_limit(p, kAvq, eq);
    EXPECT_EQ(theorem2_margin(eq.x_star, p, kAvq, eq), limit);
    EXPECT_EQ(theorem2_margin(eq.x_star * (1.0 + 0.5e-6), p, kAvq, eq), limit);
    for (double side : {-1.0, 1.0}) {
      const double outside = eq.x_star * (1.0 + side * 1.01e-6);
      EXPECT_NEAR(theorem2_margin(outside, p, kAvq, eq), limit, 1e-3);
    }
  }
}

TEST(Margin, LimitMatchesSymmetricQuotient) {
  for (double b : {0.2, 0.8, 2.0}) {
    const ModelParams p = with_b(b);
    const Equilibrium eq = solve_equilibrium(p, kAvq);
    oracle::ModelSpec spec;
    spec.b = b;
    const long double d = 1e-5L;
    const long double xs = eq.x_star;
    const long double avg = (oracle::margin(spec, xs - d, xs) + oracle::margin(spec, xs + d, xs)) / 2;
    EXPECT_NEAR(theorem2_margin_limit(p, kAvq, eq), static_cast<double>(avg), 1e-8) << "b = " << b;
  }
}

TEST(Margin, DomainErrors) {
  const ModelParams p = with_b(0.2);
  const Equilibrium eq = solve_equilibrium(p, kAvq);
  EXPECT_THROW(theorem2_margin(0.0, p, kAvq, eq), DomainError);
  EXPECT_THROW(theorem2_margin(-1.0, p, kAvq, eq), DomainError);
  EXPECT_THROW(theorem2_margin(5.0, p, kAvq, eq), CapacityExhausted);
}

TEST(CheckTheorem2, ProfileShape) {
  const ModelParams p = with_b(0.2);
  const auto report = check_theorem2(p, kAvq, {0.5, 3.0}, 256);
  ASSERT_EQ(report.margin_profile.size(), 257u);
  for (std::size_t k = 1; k < report.margin_profile.size(); ++k) {
    EXPECT_LT(report.margin_profile[k - 1].x, report.margin_profile[k].x);
  }
  int limits = 0;
  for (const auto& m : report.margin_profile) limits += m.limit;
  EXPECT_EQ(limits, 1);
  EXPECT_EQ(report.margin_profile.front().x, 0.5);
  EXPECT_EQ(report.margin_profile.back().x, 3.0);

  const auto outside = check_theorem2(p, kAvq, {2.0, 3.0}, 64);
  EXPECT_EQ(outside.margin_profile.size(), 64u);
}

TEST(CheckTheorem2, VerdictFollowsMinimum) {
  const ModelParams p = with_b(0.2);
  const auto narrow = check_theorem2(p, kAvq, {0.9, 1.2}, 128);
  EXPECT_GT(narrow.min_margin, 0.0);
  EXPECT_EQ(narrow.verdict, Verdict::certified_stable);

  const auto wide = check_theorem2(p, kAvq, {0.5, 3.0}, 256);
  EXPECT_LT(wide.min_margin, 0.0);
  EXPECT_EQ(wide.verdict, Verdict::not_certified);
  EXPECT_GT(wide.argmin_x, 1.2539518468251993);

  const auto steep = check_theorem2(with_b(0.8), kAvq, {0.9, 1.9}, 128);
  EXPECT_EQ(steep.verdict, Verdict::not_certified);
}

TEST(CheckTheorem2, HardViolationBlocksCertification) {
  // g = 0.9 everywhere: the margin is positive on [0.8, 1.2] but g > 1 fails.
  ModelParams p;
  p.a = 3.0;
  p.b = 0.2;
  const auto law = CapacityLaw::constant(0.9);
  const auto report = check_theorem2(p, law, {0.8, 1.2}, 64);
  EXPECT_GT(report.min_margin, 0.0);
  EXPECT_TRUE(has_hard_violation(report.assumption_violations));
  EXPECT_EQ(report.verdict, Verdict::not_certified);
}

TEST(CheckTheorem2, IndependentOfDelays) {
  ModelParams p = with_b(0.2);
  const auto base = check_theorem2(p, kAvq, {0.6, 2.0}, 100);
  p.tau = 30.0;
  p.T_delay = 0.5;
  const auto other = check_theorem2(p, kAvq, {0.6, 2.0}, 100);
  ASSERT_EQ(base.margin_profile.size(), other.margin_profile.size());
  for (std::size_t k = 0; k < base.margin_profile.size(); ++k) {
    EXPECT_EQ(base.margin_profile[k].margin, other.margin_profile[k].margin);
  }
}

TEST(CheckTheorem2, CoarseGridRejected) {
  EXPECT_THROW(check_theorem2(with_b(0.2), kAvq, {0.5, 3.0}, 8), PreconditionError);
}

TEST(CheckTheorem2, VerdictNames) {
  EXPECT_EQ(to_string(Verdict::certified_stable), "CertifiedStable");
  EXPECT_EQ(to_string(Verdict::not_certified), "NotCertified");
}
