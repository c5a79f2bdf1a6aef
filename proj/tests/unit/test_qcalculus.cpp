#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/qcalculus.hpp"
#include "qdeform/qfunctions.hpp"

using namespace qdeform;

namespace {

Evaluable monomial(int n) {
  return {[n](double x) { return Complex(std::pow(x, n), 0.0); }};
}

Evaluable gaussian() {
  return {[](double x) { return Complex(std::exp(-x * x), 0.0); }, DecayHint::rapid_at_infinity};
}

double basic(int n, double q) { return static_cast<double>(oracle::basic_number(n, oracle::HP(q))); }

}  // namespace

TEST(JacksonDerivative, Monomials) {
  for (double q : {0.5, 0.9, 1.3}) {
    for (int n = 0; n <= 6; ++n) {
      for (double x : {-1.7, 0.4, 2.0}) {
        const double want = n == 0 ? 0.0 : basic(n, q) * std::pow(x, n - 1);
        EXPECT_NEAR(jackson_derivative(monomial(n), x, QParam(q)).real(), want,
                    1e-13 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(JacksonDerivative, InvariantUnderInversion) {
  const Evaluable f = gaussian();
  EXPECT_NEAR(std::abs(jackson_derivative(f, 0.8, QParam(0.6)) -
                       jackson_derivative(f, 0.8, QParam(1.0 / 0.6))),
              0.0, 1e-14);
}

TEST(JacksonDerivative, UndefinedAtZero) {
  EXPECT_THROW(jackson_derivative(gaussian(), 0.0, QParam(0.9)), DomainError);
  EXPECT_THROW(jackson_second_derivative(gaussian(), 0.0, QParam(0.9)), DomainError);
}

TEST(JacksonDerivative, ClassicalBranchIsOrdinaryDerivative) {
  const QParam one(1.0);
  for (double x : {-3.0, -0.2, 0.7, 4.5}) {
    const double g = std::exp(-x * x);
    EXPECT_NEAR(jackson_derivative(gaussian(), x, one).real(), -2 * x * g, 1e-10);
    EXPECT_NEAR(jackson_second_derivative(gaussian(), x, one).real(), (4 * x * x - 2) * g, 1e-8);
  }
}

TEST(JacksonDerivative, SecondDerivativeOfMonomial) {
  const double q = 0.8;
  const double x = 1.3;
  const double want = basic(4, q) * basic(3, q) * x * x;
  EXPECT_NEAR(jackson_second_derivative(monomial(4), x, QParam(q)).real(), want, 1e-12 * want);
}

TEST(PowerSeries, ExactDerivative) {
  const QParam q(0.7);
  const PowerSeries s{1.0, 2.0, -3.0, 0.5};
  const PowerSeries d = jackson_derivative_series(s, q);
  ASSERT_EQ(d.order(), 2);
  EXPECT_NEAR(d.coefficients()[0].real(), 2.0, 1e-15);
  EXPECT_NEAR(d.coefficients()[1].real(), -3.0 * basic(2, 0.7), 1e-14);
  EXPECT_NEAR(d.coefficients()[2].real(), 0.5 * basic(3, 0.7), 1e-14);
  const Evaluable f{[&](double x) { return s(x); }};
  EXPECT_NEAR(std::abs(d(0.9) - jackson_derivative(f, 0.9, q)), 0.0, 1e-13);
  EXPECT_EQ(jackson_derivative_series(PowerSeries{4.0}, q).order(), -1);
}

TEST(QIntegral, MonomialsHaveBasicNumberDenominators) {
  for (double q : {0.5, 0.9, 0.99}) {
    for (int k = 0; k <= 5; ++k) {
      const double a = 1.7;
      const double want = std::pow(a, k + 1) / basic(k + 1, q);
      EXPECT_NEAR(q_integral_finite(monomial(k), a, QParam(q)).real(), want, 1e-12 * want)
          << "q=" << q << " k=" << k;
    }
  }
}

TEST(QIntegral, FiniteMatchesLiteralSum) {
  const double q = 0.9;
  const auto want = oracle::jackson_sum(gaussian().fn, 2.0, q, 4000);
  const Complex got = q_integral_finite(gaussian(), 2.0, QParam(q));
  EXPECT_NEAR(got.real(), static_cast<double>(want.real()), 1e-13);
}

TEST(QIntegral, HalfLineMatchesLiteralSum) {
  // q^-40 ~ 68 lies past where the gaussian underflows, and q^-40 q^{2n+1}
  // stays on the odd-exponent lattice.
  const double q = 0.9;
  const auto inner = oracle::jackson_sum(gaussian().fn, std::pow(q, -40), q, 4000);
  const Complex got = q_integral_halfline(gaussian(), QParam(q));
  EXPECT_NEAR(got.real(), static_cast<double>(inner.real()), 1e-13);
  EXPECT_NEAR(q_integral_fullline(gaussian(), QParam(q)).real(), 2.0 * got.real(), 1e-13);
}

TEST(QIntegral, ClassicalLimitApproachesOrdinaryIntegral) {
  const Complex got = q_integral_halfline(gaussian(), QParam(0.999));
  EXPECT_NEAR(got.real(), std::sqrt(M_PI) / 2.0, 1e-5);
}

TEST(QIntegral, Errors) {
  EXPECT_THROW(q_integral_finite(gaussian(), 0.0, QParam(0.9)), DomainError);
  EXPECT_THROW(q_integral_finite(gaussian(), 1.0, QParam(1.0)), DomainError);
  const Evaluable blowup{[](double x) { return Complex(1.0 / (x * x), 0.0); }};
  EXPECT_THROW(q_integral_finite(blowup, 1.0, QParam(0.9)), ConvergenceError);
}

TEST(Identities, LeibnizBothVariants) {
  const Evaluable f = gaussian();
  const Evaluable g = q_sin_function(1.0, QParam(0.8));
  for (const auto v : {LeibnizVariant::inverse_shift, LeibnizVariant::forward_shift}) {
    for (double x : {-2.0, 0.3, 4.0}) EXPECT_LT(q_leibniz_residual(f, g, x, QParam(0.8), v).relative(), 1e-13);
  }
}

TEST(Identities, LeibnizDetectsWrongShift) {
  // Swapping the shifts in one factor breaks the identity.
  const QParam q(0.8);
  const Evaluable f = gaussian();
  const Evaluable g = monomial(3);
  const double x = 1.1;
  const Complex lhs = jackson_derivative(product(f, g), x, q);
  const Complex wrong = jackson_derivative(f, x, q) * g(x) + f(x) * jackson_derivative(g, x, q);
  EXPECT_GT(std::abs(lhs - wrong), 1e-3);
}

TEST(Identities, ChainScaling) {
  for (double a : {-2.0, 0.5, 3.0}) {
    EXPECT_LT(chain_scaling_residual(gaussian(), a, 0.9, QParam(0.9)).relative(), 1e-13);
  }
  EXPECT_THROW(chain_scaling_residual(gaussian(), 0.0, 0.9, QParam(0.9)), DomainError);
}

TEST(Identities, FundamentalTheoremAndParts) {
  const QParam q(0.9);
  const Evaluable f = gaussian();
  const Evaluable g = monomial(2);
  EXPECT_LT(fundamental_theorem_derivative_residual(f, 1.5, q).relative(), 1e-12);
  EXPECT_LT(fundamental_theorem_integral_residual(f, 1.5, q).relative(), 1e-12);
  EXPECT_LT(integration_by_parts_residual(f, g, 1.5, q, PartsVariant::shifted_q).relative(), 1e-12);
  EXPECT_LT(integration_by_parts_residual(f, g, 1.5, q, PartsVariant::shifted_qinv).relative(), 1e-12);
}

TEST(Regularity, SmoothVersusSingularAtZero) {
  const QParam q(0.9);
  EXPECT_TRUE(q_regularity_check(gaussian(), 1.0, q, 400));
  const Evaluable wild{[](double x) { return Complex(x == 0.0 ? 0.0 : std::sin(1.0 / x), 0.0); }};
  EXPECT_FALSE(q_regularity_check(wild, 1.0, q, 400));
}
