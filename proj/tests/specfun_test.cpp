#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hermite/golden.hpp"
#include "hermite/specfun.hpp"
#include "oracles.hpp"

namespace hermite {
namespace {

const std::vector<double> kOrders = {-0.3, -0.5, -1.0, -1.7, -2.5, -4.0};
const std::vector<OUParams> kParams = {OUParams(0.0, 1.0), OUParams(1.0, 2.0), OUParams(-0.5, 0.5)};

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * i / (n - 1));
  return xs;
}

double h(double nu, double x) { return hermite(Order(nu), x).value.to_double(); }

TEST(Order, RejectsNonNegativeAndNonFinite) {
  EXPECT_THROW(Order(0.0), std::invalid_argument);
  EXPECT_THROW(Order(0.5), std::invalid_argument);
  EXPECT_THROW(Order(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(Order(-std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Order(-1.5).lowered(2).value(), -3.5);
}

TEST(QuadratureConfig, Validation) {
  EXPECT_NO_THROW(QuadratureConfig{}.validate());
  EXPECT_THROW((QuadratureConfig{0.0, 200, 12.0}.validate()), std::invalid_argument);
  EXPECT_THROW((QuadratureConfig{1e-12, 0, 12.0}.validate()), std::invalid_argument);
  EXPECT_THROW((QuadratureConfig{1e-12, 200, 5.0}.validate()), std::invalid_argument);
}

TEST(LogValue, ProductsAndQuotientsAddLogs) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> mag(-500.0, 500.0);
  for (int i = 0; i < 200; ++i) {
    const LogValue a = LogValue::from_log(mag(gen), i % 2 ? 1 : -1);
    const LogValue b = LogValue::from_log(mag(gen));
    EXPECT_EQ((a * b).log_mag, a.log_mag + b.log_mag);
    EXPECT_EQ((a / b).log_mag, a.log_mag - b.log_mag);
    EXPECT_EQ((a * b).sign, a.sign);
    EXPECT_EQ(pow(a, 2).sign, 1);
  }
  EXPECT_TRUE((LogValue{} * LogValue::from_log(3.0)).is_zero());
  EXPECT_DOUBLE_EQ(LogValue::from_double(-2.5).to_double(), -2.5);
  EXPECT_EQ(LogValue::from_log(1000.0).to_double(), std::numeric_limits<double>::infinity());
}

TEST(GammaPos, Examples) {
  EXPECT_DOUBLE_EQ(gamma_pos(1.0), 1.0);
  EXPECT_NEAR(gamma_pos(0.5), 1.7724538509055160, 1e-15);
  EXPECT_DOUBLE_EQ(gamma_pos(2.0), 1.0);
  EXPECT_NEAR(gamma_pos(5.0) / 24.0, 1.0, 1e-14);
  EXPECT_NEAR(log_gamma_pos(200.0), std::lgamma(200.0), 1e-12);
  EXPECT_TRUE(std::isinf(gamma_pos(180.0)));
}

TEST(GammaPos, DomainErrors) {
  EXPECT_THROW(gamma_pos(0.0), std::domain_error);
  EXPECT_THROW(gamma_pos(-1.0), std::domain_error);
  EXPECT_THROW(gamma_pos(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_THROW(log_gamma_pos(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(Dnu, Examples) {
  EXPECT_NEAR(dnu(Order(-1), 0.0).value.to_double(), 1.2533141373155003, 1e-14);
  EXPECT_NEAR(dnu(Order(-2), 0.0).value.to_double(), 1.0, 1e-14);
  EXPECT_NEAR(dnu(Order(-1), 2.0).value.to_double(), 0.15502, 1e-4);
}

TEST(Dnu, MatchesErfcClosedForm) {
  for (double x : grid(-25.0, 25.0, 51)) {
    const EvalResult r = dnu(Order(-1), x);
    EXPECT_EQ(r.value.sign, 1);
    EXPECT_NEAR(r.value.log_mag, oracle::log_d_minus1(x), 1e-11) << "x=" << x;
    EXPECT_GE(r.abs_err_log, 0.0);
    EXPECT_LE(r.abs_err_log, 1e-12);
  }
}

TEST(Dnu, MatchesGammaFormAtZero) {
  for (double nu : {-0.1, -0.3, -0.5, -1.5, -2.0, -3.7, -6.0})
    EXPECT_NEAR(dnu(Order(nu), 0.0).value.log_mag, std::log(oracle::d_at_zero(nu)), 1e-12) << nu;
}

TEST(Dnu, ReportsNonConvergence) {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-16;
  cfg.max_subdivisions = 1;
  try {
    dnu(Order(-0.5), -3.0, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best().value.sign, 1);
    EXPECT_GT(e.best().abs_err_log, cfg.rel_tol);
    EXPECT_NEAR(e.best().value.log_mag, dnu(Order(-0.5), -3.0).value.log_mag, 1e-3);
  }
  EXPECT_THROW(dnu(Order(-1), std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(Hermite, Examples) {
  EXPECT_NEAR(h(-1, 0.0), 0.8862269254527580, 1e-15);
  EXPECT_NEAR(h(-2, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(h(-1, 1.0), 0.37893, 1e-4);
  EXPECT_NEAR(h(-1, 1.0), oracle::h_minus1(1.0), 1e-14);
}

TEST(Hermite, MatchesClosedForms) {
  for (double x : grid(-5.0, 5.0, 41)) {
    EXPECT_NEAR(hermite(Order(-1), x).value.log_mag, std::log(oracle::h_minus1(x)), 1e-12) << x;
    EXPECT_NEAR(h(-2, x) / oracle::h_minus2(x), 1.0, 1e-11) << x;
  }
  for (double nu : {-0.3, -1.5, -3.0, -4.0}) EXPECT_NEAR(h(nu, 0.0) / oracle::h_at_zero(nu), 1.0, 1e-13) << nu;
}

TEST(Hermite, StaysInLogSpaceWhereLinearScaleOverflows) {
  const EvalResult r = hermite(Order(-1), -30.0);
  EXPECT_EQ(r.value.sign, 1);
  EXPECT_TRUE(std::isfinite(r.value.log_mag));
  EXPECT_GT(r.value.log_mag, 900.0);
  EXPECT_TRUE(std::isinf(r.value.to_double()));
  // Leading term: H_{-1}(x) ~ sqrt(pi) e^{x^2} for x -> -inf.
  EXPECT_NEAR(r.value.log_mag, 900.0 + std::log(oracle::kSqrtPi), 1e-3);
}

TEST(Hermite, PositiveOnWideGrid) {
  for (double nu : {-0.05, -0.3, -1.0, -2.5, -4.0, -6.0})
    for (double x : grid(-30.0, 30.0, 61)) {
      EXPECT_EQ(hermite(Order(nu), x).value.sign, 1);
      EXPECT_EQ(dnu(Order(nu), x).value.sign, 1);
    }
}

TEST(Hermite, CylinderIdentityProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> nu_d(-5.0, -0.05), x_d(-30.0, 30.0);
  for (int i = 0; i < 300; ++i) {
    const double nu = nu_d(gen), x = x_d(gen);
    EXPECT_LE(identity_residual(Order(nu), x), 1e-10) << nu << ' ' << x;
  }
}

TEST(Hermite, GoldenValues) {
  const GoldenFile file = load_golden(HERMITE_GOLDEN_PATH);
  int checked = 0;
  for (const auto& e : file.entries) {
    if (e.fn == "R") continue;
    const EvalResult r = e.fn == "H" ? hermite(Order(e.nu), e.x) : dnu(Order(e.nu), e.x);
    EXPECT_NEAR(r.value.log_mag, e.log_value, 1e-10) << e.fn << " nu=" << e.nu << " x=" << e.x;
    ++checked;
  }
  EXPECT_EQ(checked, 2 * 9 * 14);
}

TEST(HermiteDerivative, Examples) {
  const EvalResult d = hermite_derivative(Order(-1), 0.0);
  EXPECT_EQ(d.value.sign, -1);
  EXPECT_NEAR(d.value.to_double(), -1.0, 1e-14);

  const double step = 1e-5;
  const double fd = (h(-1, 0.7 + step) - h(-1, 0.7 - step)) / (2 * step);
  EXPECT_NEAR(hermite_derivative(Order(-1), 0.7).value.to_double() / fd, 1.0, 1e-6);

  EXPECT_DOUBLE_EQ(hermite_derivative(Order(-0.5), 0.0).value.to_double(), -h(-1.5, 0.0));
}

TEST(HermiteDerivative, MatchesCentralDifferences) {
  const double step = 1e-5;
  for (double nu : kOrders)
    for (double x : grid(-10.0, 10.0, 21)) {
      const double fd = (h(nu, x + step) - h(nu, x - step)) / (2 * step);
      const double exact = hermite_derivative(Order(nu), x).value.to_double();
      EXPECT_NEAR(fd / exact, 1.0, 1e-6) << "nu=" << nu << " x=" << x;
    }
}

TEST(Recurrence, Examples) {
  // 0.886227 - 0 - 4 * 0.221557 = 0
  EXPECT_NEAR(h(-3, 0.0), oracle::kSqrtPi / 8.0, 1e-15);
  EXPECT_LE(recurrence_residual(Order(-1), 0.0), 1e-12);
  EXPECT_LE(recurrence_residual(Order(-0.5), 3.0), 1e-10);
  EXPECT_LE(recurrence_residual(Order(-2.5), -3.0), 1e-10);
}

TEST(Recurrence, ResidualSmallOnGrid) {
  for (double nu : kOrders)
    for (double x : grid(-10.0, 10.0, 41)) EXPECT_LE(recurrence_residual(Order(nu), x), 1e-9) << nu << ' ' << x;
}

TEST(Psi, Examples) {
  const OUParams std_ou(0.0, 1.0);
  EXPECT_NEAR(psi(0, 0.0, std_ou, Order(-1)).value.to_double(), 0.8862269254527580, 1e-15);
  EXPECT_NEAR(psi(1, 0.0, std_ou, Order(-1)).value.to_double(), 1.0, 1e-14);
  EXPECT_NEAR(psi(2, 0.0, std_ou, Order(-1)).value.to_double(), oracle::kSqrtPi, 1e-14);
  EXPECT_THROW(psi(4, 0.0, std_ou, Order(-1)), std::domain_error);
  EXPECT_THROW(psi(-1, 0.0, std_ou, Order(-1)), std::domain_error);
}

TEST(Psi, DerivativesArePositiveAndConsistent) {
  const double step = 1e-5;
  for (const auto& p : kParams)
    for (double nu : {-0.5, -1.0, -2.5})
      for (double x : grid(-3.0, 3.0, 7))
        for (int k = 0; k <= 2; ++k) {
          const EvalResult lo = psi(k, x - step, p, Order(nu));
          const EvalResult hi = psi(k, x + step, p, Order(nu));
          const EvalResult next = psi(k + 1, x, p, Order(nu));
          EXPECT_EQ(next.value.sign, 1);
          EXPECT_EQ(lo.value.sign, 1);
          const double fd = (hi.value.to_double() - lo.value.to_double()) / (2 * step);
          EXPECT_NEAR(fd / next.value.to_double(), 1.0, 1e-6) << "k=" << k << " x=" << x;
        }
}

TEST(Generator, Examples) {
  EXPECT_LE(generator_residual(0.0, OUParams(0.0, 1.0), Order(-1)), 1e-12);
  EXPECT_LE(generator_residual(2.0, OUParams(1.0, 2.0), Order(-0.5)), 1e-9);
  EXPECT_LE(generator_residual(-4.0, OUParams(0.0, 1.0), Order(-2.5)), 1e-9);
}

TEST(Generator, ResidualSmallOnGrid) {
  for (const auto& p : kParams)
    for (double nu : kOrders)
      for (double z : grid(-10.0, 10.0, 21)) {
        // Map the grid onto the Hermite argument (mu - x)/sigma.
        const double x = p.mu() - p.sigma() * z;
        EXPECT_LE(generator_residual(x, p, Order(nu)), 1e-9) << nu << ' ' << x;
      }
}

}  // namespace
}  // namespace hermite
