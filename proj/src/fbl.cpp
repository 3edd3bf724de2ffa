#include "twinrrm/fbl.hpp"

#include <cmath>
#include <sstream>

#include "twinrrm/errors.hpp"
#include "twinrrm/numerics.hpp"

namespace twinrrm::fbl {

using numerics::kLog2e;

void QosTarget::validate() const {
  if (!(rate > 0.0)) {
    throw DomainError("qos target: rate must be positive");
  }
  if (!(reliability > 0.0 && reliability < 0.5)) {
    throw DomainError("qos target: reliability must lie in (0, 0.5)");
  }
  if (!(bandwidth > 0.0)) {
    throw DomainError("qos target: bandwidth must be positive");
  }
}

double dispersion(double gamma) {
  if (!(gamma >= 0.0)) {
    throw DomainError("dispersion: SINR must be non-negative");
  }
  const double inv = 1.0 / (1.0 + gamma);
  return (1.0 - inv * inv) * kLog2e * kLog2e;
}

double na_rate(double gamma, double latency, double reliability, double bandwidth) {
  if (!(latency > 0.0) || !(bandwidth > 0.0)) {
    throw DomainError("na_rate: latency and bandwidth must be positive");
  }
  const double penalty =
      std::sqrt(dispersion(gamma) / (latency * bandwidth)) * numerics::gaussian_q_inv(reliability);
  return bandwidth * (std::log2(1.0 + gamma) - penalty);
}

double latency_for_sinr(double gamma, const QosTarget& target) {
  target.validate();
  if (!(gamma >= 0.0)) {
    throw DomainError("latency: SINR must be non-negative");
  }
  const double shannon = target.bandwidth * std::log2(1.0 + gamma);
  const double margin = shannon - target.rate;
  if (!(margin > 1e-12 * shannon)) {
    std::ostringstream os;
    os << "rate " << target.rate << " bit/s is not supported: B log2(1+SINR) = " << shannon;
    throw InfeasibleRateError(os.str());
  }
  const double inv = 1.0 / (1.0 + gamma);
  const double numerator = std::sqrt(target.bandwidth) * numerics::gaussian_q_inv(target.reliability) *
                           kLog2e * std::sqrt(1.0 - inv * inv);
  const double root = numerator / margin;
  return root * root;
}

double theorem1_rate(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
                     double latency, double bandwidth) {
  return na_rate(effective_sinr(model, vue, power, users), latency, vue.reliability, bandwidth);
}

double latency(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
               double bandwidth) {
  return latency_for_sinr(effective_sinr(model, vue, power, users),
                          QosTarget{vue.rate, vue.reliability, bandwidth});
}

}  // namespace twinrrm::fbl
