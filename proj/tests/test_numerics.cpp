#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

#include "twinrrm/errors.hpp"
#include "twinrrm/numerics.hpp"

using namespace twinrrm;
using numerics::gaussian_q;
using numerics::gaussian_q_inv;

namespace {

// Q(x) at 50 decimal digits.
double q_reference(double x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big v = big(0.5) * boost::multiprecision::erfc(big(x) / boost::multiprecision::sqrt(big(2)));
  return v.convert_to<double>();
}

}  // namespace

TEST(GaussianQ, MatchesHighPrecisionReference) {
  for (double x = -8.0; x <= 12.0; x += 0.125) {
    const double ref = q_reference(x);
    EXPECT_NEAR(gaussian_q(x), ref, 1e-13 * ref) << "x=" << x;
  }
  // 4.753424 is the quantile rounded to 7 digits: |dQ/dx| ~ 5e-6 there
  EXPECT_NEAR(gaussian_q(4.753424), 1e-6, 3e-12);
  EXPECT_NEAR(gaussian_q(4.753424), q_reference(4.753424), 1e-13 * 1e-6);
}

TEST(GaussianQ, SymmetryAndLimits) {
  EXPECT_EQ(gaussian_q(0.0), 0.5);
  EXPECT_EQ(gaussian_q(std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_EQ(gaussian_q(-std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_GT(gaussian_q(40.0), -1e-300);
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    EXPECT_NEAR(gaussian_q(x) + gaussian_q(-x), 1.0, 1e-12);
    // below about -5 the result is within a few ulp of 1 and may tie
    if (x > -5.0) {
      EXPECT_GT(gaussian_q(x), gaussian_q(x + 0.01));
    } else {
      EXPECT_GE(gaussian_q(x), gaussian_q(x + 0.01));
    }
  }
}

TEST(GaussianQInv, KnownValues) {
  EXPECT_EQ(gaussian_q_inv(0.5), 0.0);
  // bisection on the 50-digit reference
  double lo = 4.0, hi = 5.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_reference(mid) > 1e-6 ? lo : hi) = mid;
  }
  EXPECT_NEAR(gaussian_q_inv(1e-6), lo, 1e-12);
  EXPECT_NEAR(gaussian_q_inv(1e-6), 4.753424, 1e-6);
}

TEST(GaussianQInv, ResidualContract) {
  for (double e = 1e-12; e < 1.0; e *= 1.7) {
    const double x = gaussian_q_inv(e);
    EXPECT_LE(std::abs(gaussian_q(x) - e), 1e-12 * e) << "eps=" << e;
  }
  for (double e : {1e-9, 1e-6, 0.3, 0.7, 1.0 - 1e-12}) {
    EXPECT_LE(std::abs(gaussian_q(gaussian_q_inv(e)) - e), 1e-12 * e) << "eps=" << e;
  }
}

TEST(GaussianQInv, SignAndMonotonicity) {
  EXPECT_GT(gaussian_q_inv(0.1), 0.0);
  EXPECT_LT(gaussian_q_inv(0.9), 0.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double e = 1e-10; e < 1.0; e *= 1.3) {
    const double x = gaussian_q_inv(e);
    EXPECT_LT(x, previous);
    previous = x;
  }
}

TEST(GaussianQInv, RoundTrip) {
  // Q near 1 carries ~1e-16 absolute error, so x < -4 is ill conditioned
  for (double x = -4.0; x <= 8.0; x += 0.05) {
    EXPECT_NEAR(gaussian_q_inv(gaussian_q(x)), x, 1e-9) << "x=" << x;
  }
}

TEST(GaussianQInv, DomainErrors) {
  EXPECT_THROW(gaussian_q_inv(0.0), DomainError);
  EXPECT_THROW(gaussian_q_inv(1.0), DomainError);
  EXPECT_THROW(gaussian_q_inv(-0.1), DomainError);
  EXPECT_THROW(gaussian_q_inv(std::nan("")), DomainError);
}

TEST(FindRoot, SimpleFunctions) {
  const numerics::Tolerance tol;
  EXPECT_NEAR(numerics::find_root_monotone([](double x) { return x - 2.0; }, 0.0, 4.0, tol), 2.0, 1e-13);
  EXPECT_NEAR(numerics::find_root_monotone([](double x) { return x * x - 2.0; }, 0.0, 2.0, tol),
              std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(numerics::find_root_monotone([](double x) { return 1.0 - x; }, -3.0, 5.0, tol), 1.0, 1e-13);
  EXPECT_EQ(numerics::find_root_monotone([](double x) { return x; }, 0.0, 1.0, tol), 0.0);
}

TEST(FindRoot, AbsoluteToleranceStopsEarly) {
  numerics::Tolerance tol;
  tol.absolute = 1e-3;
  tol.relative = 0.0;
  const double x = numerics::find_root_monotone([](double v) { return v - 0.3; }, 0.0, 1.0, tol);
  EXPECT_LE(std::abs(x - 0.3), 1e-3);
}

TEST(FindRoot, Errors) {
  const numerics::Tolerance tol;
  EXPECT_THROW(numerics::find_root_monotone([](double x) { return x + 1.0; }, 0.0, 1.0, tol),
               NoSignChangeError);
  numerics::Tolerance tight;
  tight.max_iterations = 5;
  EXPECT_THROW(numerics::find_root_monotone([](double x) { return x - 0.3; }, 0.0, 1.0, tight),
               NonConvergenceError);
  numerics::Tolerance none;
  none.relative = 0.0;
  EXPECT_THROW(none.validate(), DomainError);
  EXPECT_THROW(numerics::find_root_monotone([](double x) { return x; }, 1.0, 0.0, tol), DomainError);
}

TEST(CompensatedSum, RecoversLostLowOrderBits) {
  numerics::CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}
