#pragma once

#include "twinrrm/channel.hpp"

namespace twinrrm::fbl {

/// Rate / reliability / bandwidth triple used when inverting for latency.
struct QosTarget {
  double rate = 1e5;          // bit/s
  double reliability = 1e-6;  // decoding error probability, < 0.5
  double bandwidth = 2e5;     // Hz

  void validate() const;
};

/// Channel dispersion V = (1 - (1 + gamma)^-2) (log2 e)^2.
double dispersion(double gamma);

/// Normal approximation of the finite-blocklength rate for one SINR value:
/// B [log2(1 + gamma) - sqrt(V / (L B)) Q^-1(eps)]. May be negative.
double na_rate(double gamma, double latency, double reliability, double bandwidth);

/// Latency L at which na_rate(gamma, L, eps, B) equals `target.rate`.
/// Throws InfeasibleRateError when B log2(1 + gamma) does not exceed the rate
/// by more than a 1e-12 relative guard band.
double latency_for_sinr(double gamma, const QosTarget& target);

/// Achievable ergodic rate of `vue` at power `power`, i.e. na_rate evaluated at
/// the deterministic effective SINR.
double theorem1_rate(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
                     double latency, double bandwidth);

/// Transmission latency of `vue` meeting its own rate and reliability target.
double latency(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
               double bandwidth);

}  // namespace twinrrm::fbl
