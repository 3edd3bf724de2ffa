#pragma once

#include <functional>
#include <numbers>

namespace twinrrm::numerics {

inline constexpr double kLog2e = std::numbers::log2e;

/// Stopping rule for iterative scalar solvers.
///
/// `absolute` bounds the residual |f(x)|, `relative` bounds the bracket width
/// relative to the magnitude of the bracket end points. A solver stops as soon
/// as either criterion holds. At least one of the two must be positive.
struct Tolerance {
  double absolute = 0.0;
  double relative = 1e-14;
  int max_iterations = 500;

  /// Throws DomainError when the invariants do not hold.
  void validate() const;
};

/// Standard normal upper-tail probability Q(x) = P(Z > x).
double gaussian_q(double x);

/// Inverse of gaussian_q. Throws DomainError unless 0 < eps < 1.
double gaussian_q_inv(double eps);

/// Standard normal density.
double gaussian_pdf(double x);

/// Bisection on a function that is monotone on [lo, hi] and changes sign there.
///
/// Throws NoSignChangeError when f(lo) and f(hi) share a strict sign, and
/// NonConvergenceError when neither stopping criterion is met within
/// `tol.max_iterations` halvings.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol);

/// Neumaier's compensated summation. Order-dependent, so callers that need
/// reproducible results must feed terms in a fixed order.
class CompensatedSum {
 public:
  void add(double term) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace twinrrm::numerics
