#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netstab/error.hpp"
#include "netstab/model.hpp"
#include "oracles.hpp"

using namespace netstab;

namespace {

ModelParams reference_params(double b) {
  ModelParams p;
  p.kappa = 1.0;
  p.a = 1.5;
  p.b = b;
  p.tau = 3.0;
  p.T_delay = 2.0;
  return p;
}

}  // namespace

TEST(UtilityDerivative, Examples) {
  EXPECT_DOUBLE_EQ(utility_derivative(1.0, 1.5), 1.0);
  EXPECT_DOUBLE_EQ(utility_derivative(4.0, 1.0), 0.0625);
  EXPECT_THROW(utility_derivative(0.0, 1.5), DomainError);
  EXPECT_THROW(utility_derivative(-2.0, 1.5), DomainError);
}

TEST(Price, Examples) {
  for (double b : {0.2, 0.8, 1.0, 3.0}) EXPECT_DOUBLE_EQ(price(2.5, 2.5, b), 1.0);
  EXPECT_NEAR(price(1.0, 4.0, 0.8), oracle::kPrice1Over4B08, 1e-15);
  EXPECT_DOUBLE_EQ(price(3.0, 3.0, 0.8, 0.5), 0.5);
  EXPECT_THROW(price(0.0, 1.0, 0.8), DomainError);
  EXPECT_THROW(price(1.0, 0.0, 0.8), DomainError);
  EXPECT_THROW(price(1.0, -1.0, 0.8), DomainError);
}

TEST(Capacity, Examples) {
  EXPECT_DOUBLE_EQ(capacity(CapacityLaw::affine(5.0, 1.0), 1.0), 4.0);
  EXPECT_DOUBLE_EQ(capacity(CapacityLaw::constant(3.0), 0.7), 3.0);
  EXPECT_DOUBLE_EQ(capacity(CapacityLaw::constant(3.0), 700.0), 3.0);
  EXPECT_THROW(capacity(CapacityLaw::affine(5.0, 1.0), 5.0), CapacityExhausted);
  try {
    capacity(CapacityLaw::affine(5.0, 1.0), 6.0);
    FAIL();
  } catch (const CapacityExhausted& e) {
    EXPECT_DOUBLE_EQ(e.rate(), 6.0);
  }
}

TEST(CapacityLaw, Invariants) {
  EXPECT_THROW(CapacityLaw::affine(5.0, 0.0), PreconditionError);
  EXPECT_THROW(CapacityLaw::affine(5.0, -1.0), PreconditionError);
  EXPECT_THROW(CapacityLaw::constant(0.0), PreconditionError);
  const auto g = CapacityLaw::affine(5.0, 2.0);
  EXPECT_DOUBLE_EQ(g.derivative(1.0), -2.0);
  EXPECT_DOUBLE_EQ(CapacityLaw::constant(2.0).derivative(1.0), 0.0);
}

TEST(Rhs, VanishesAtEquilibrium) {
  EXPECT_NEAR(rhs(oracle::kXStarB02, oracle::kXStarB02, oracle::kCStarB02, reference_params(0.2)), 0.0, 1e-14);
  EXPECT_NEAR(rhs(oracle::kXStarB08, oracle::kXStarB08, oracle::kCStarB08, reference_params(0.8)), 0.0, 1e-14);
}

TEST(Rhs, InitialSlopeOfReferenceScenario) {
  EXPECT_NEAR(rhs(1.0, 1.0, 4.0, reference_params(0.8)), oracle::kRhsAtStartB08, 1e-14);
}

TEST(Rhs, LinearInGain) {
  ModelParams p = reference_params(0.8);
  const double base = rhs(1.3, 0.9, 3.2, p);
  p.kappa = 2.0;
  EXPECT_DOUBLE_EQ(rhs(1.3, 0.9, 3.2, p), 2.0 * base);
}

TEST(Rhs, DomainErrors) {
  const ModelParams p = reference_params(0.8);
  EXPECT_THROW(rhs(0.0, 1.0, 1.0, p), DomainError);
  EXPECT_THROW(rhs(1.0, -1.0, 1.0, p), DomainError);
  EXPECT_THROW(rhs(1.0, 1.0, 0.0, p), DomainError);
}

TEST(Rhs, AgreesWithUtilityPriceForm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(0.05, 20.0);
  std::uniform_real_distribution<double> expo(0.1, 3.0);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p;
    p.kappa = expo(rng);
    p.a = expo(rng);
    p.b = expo(rng);
    p.h_gain = expo(rng);
    const double x = rate(rng);
    const double xd = rate(rng);
    const double cd = rate(rng);
    const double primal = p.kappa * (x * utility_derivative(x, p.a) - xd * price(xd, cd, p.b, p.h_gain));
    const double direct = rhs(x, xd, cd, p);
    EXPECT_NEAR(direct, primal, 1e-12 * std::max({std::abs(primal), std::pow(x, -p.a), 1.0}));
  }
}

TEST(Rhs, UndelayedSignStructure) {
  const auto g = CapacityLaw::affine(5.0, 1.0);
  for (const auto& [b, xs] : {std::pair{0.2, oracle::kXStarB02}, std::pair{0.8, oracle::kXStarB08}}) {
    const ModelParams p = reference_params(b);
    for (double x = 0.05; x < 4.95; x += 0.01) {
      if (std::abs(x - xs) < 1e-9) continue;
      const double d = rhs(x, x, capacity(g, x), p);
      if (x < xs) {
        EXPECT_GT(d, 0.0) << "x = " << x;
      } else {
        EXPECT_LT(d, 0.0) << "x = " << x;
      }
    }
  }
}

TEST(ClampDerivative, ProjectionAtBounds) {
  ModelParams p;
  p.x_min = 0.5;
  p.x_max = 2.0;
  EXPECT_EQ(clamp_derivative(2.0, 3.0, p), 0.0);
  EXPECT_EQ(clamp_derivative(2.0, -3.0, p), -3.0);
  EXPECT_EQ(clamp_derivative(0.5, -1.0, p), 0.0);
  EXPECT_EQ(clamp_derivative(0.5, 1.0, p), 1.0);
  EXPECT_EQ(clamp_derivative(1.0, -1.0, p), -1.0);
}

TEST(ClampDerivative, Idempotent) {
  ModelParams p;
  p.x_min = 0.5;
  p.x_max = 2.0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(0.5, 2.0);
  std::uniform_real_distribution<double> ds(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = i % 3 == 0 ? 0.5 : i % 3 == 1 ? 2.0 : xs(rng);
    const double once = clamp_derivative(x, ds(rng), p);
    EXPECT_EQ(clamp_derivative(x, once, p), once);
  }
}

TEST(Monotonicity, PriceAndUtility) {
  double prev_u = INFINITY;
  double prev_px = -INFINITY;
  double prev_pc = INFINITY;
  for (double v = 0.1; v < 10.0; v += 0.05) {
    const double u = utility_derivative(v, 1.5);
    const double px = price(v, 3.0, 0.8);
    const double pc = price(2.0, v, 0.8);
    EXPECT_LT(u, prev_u);
    EXPECT_GT(px, prev_px);
    EXPECT_LT(pc, prev_pc);
    prev_u = u;
    prev_px = px;
    prev_pc = pc;
  }
}

TEST(ValidateParams, RejectsBrokenInvariants) {
  ModelParams p = reference_params(0.8);
  EXPECT_NO_THROW(validate_params(p));
  p.tau = 2.0;
  p.T_delay = 3.0;
  try {
    validate_params(p);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("(A1)"), std::string::npos);
  }
  p = reference_params(0.8);
  p.kappa = 0.0;
  EXPECT_THROW(validate_params(p), PreconditionError);
  p = reference_params(0.8);
  p.x_min = 2.0;
  p.x_max = 1.0;
  EXPECT_THROW(validate_params(p), PreconditionError);
}
