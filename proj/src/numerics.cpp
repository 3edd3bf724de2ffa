#include "twinrrm/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "twinrrm/errors.hpp"

namespace twinrrm::numerics {
namespace {

// Acklam's rational approximation of the lower-tail normal quantile. Relative
// error about 1e-9; used only as the starting point for refinement.
double acklam_lower_quantile(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  auto tail = [&](double q) {
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  };

  if (p < p_low) {
    return tail(std::sqrt(-2.0 * std::log(p)));
  }
  if (p > 1.0 - p_low) {
    return -tail(std::sqrt(-2.0 * std::log1p(-p)));
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

void Tolerance::validate() const {
  if (!(absolute >= 0.0) || !(relative >= 0.0)) {
    throw DomainError("tolerance: absolute and relative must be non-negative");
  }
  if (absolute == 0.0 && relative == 0.0) {
    throw DomainError("tolerance: at least one of absolute/relative must be positive");
  }
  if (max_iterations <= 0) {
    throw DomainError("tolerance: max_iterations must be positive");
  }
}

double gaussian_q(double x) { return 0.5 * std::erfc(x * std::numbers::sqrt2 * 0.5); }

double gaussian_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi * std::numbers::sqrt2 * 0.5);
}

double gaussian_q_inv(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("gaussian_q_inv: eps must lie in (0, 1), got " + std::to_string(eps));
  }
  if (eps == 0.5) {
    return 0.0;
  }

  // Q(x) = eps  <=>  Phi(-x) = eps
  double x = -acklam_lower_quantile(eps);

  // Bracket [lo, hi] with Q(lo) > eps > Q(hi), used when a Halley step
  // leaves it or stalls.
  double lo = x > 0.0 ? 0.0 : -40.0;
  double hi = x > 0.0 ? 40.0 : 0.0;
  const double target = 1e-15 * eps;

  for (int iter = 0; iter < 100; ++iter) {
    const double r = gaussian_q(x) - eps;
    if (std::abs(r) <= target) {
      return x;
    }
    if (r > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = gaussian_pdf(x);
    double next = std::numeric_limits<double>::quiet_NaN();
    if (pdf > 0.0) {
      const double step = r / pdf;
      next = x + step / (1.0 - 0.5 * x * step);
    }
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (next == x) {
      break;
    }
    x = next;
  }

  if (std::abs(gaussian_q(x) - eps) > 1e-12 * eps) {
    // Halley stalled short of the contract; finish on the bracket.
    for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) {
        break;
      }
      (gaussian_q(mid) > eps ? lo : hi) = mid;
    }
    x = std::abs(gaussian_q(lo) - eps) < std::abs(gaussian_q(hi) - eps) ? lo : hi;
  }
  return x;
}

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) {
    throw DomainError("find_root_monotone: require lo <= hi");
  }
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) {
    return lo;
  }
  if (f_hi == 0.0) {
    return hi;
  }
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw NoSignChangeError("find_root_monotone: f(lo) and f(hi) have the same sign");
  }

  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (f_mid == 0.0 || std::abs(f_mid) <= tol.absolute) {
      return mid;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    const double next = lo + 0.5 * (hi - lo);
    const bool narrow = hi - lo <= tol.relative * std::max(std::abs(lo), std::abs(hi));
    // next == lo or hi: the bracket is down to adjacent doubles
    if (narrow || next == lo || next == hi) {
      return next;
    }
  }
  throw NonConvergenceError("find_root_monotone: no convergence after " +
                            std::to_string(tol.max_iterations) + " iterations");
}

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
}

}  // namespace twinrrm::numerics
