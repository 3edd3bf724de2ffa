#include "twinrrm/stage1.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twinrrm/errors.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/numerics.hpp"

namespace twinrrm::stage1 {

using numerics::kLog2e;

Stage1Inputs Stage1Inputs::from_population(std::span<const Vue> vues, double density,
                                           double delta, Precoder precoder, int antennas) {
  if (vues.empty()) {
    throw DomainError("stage1: empty population");
  }
  Stage1Inputs in;
  in.density = density;
  in.delta = delta;
  in.precoder = precoder;
  in.antennas = antennas;
  in.worst_reliability = vues.front().reliability;
  in.worst_rate = vues.front().rate;
  in.accuracy_threshold = vues.front().accuracy;
  for (const Vue& v : vues) {
    in.worst_reliability = std::min(in.worst_reliability, v.reliability);
    in.worst_rate = std::max(in.worst_rate, v.rate);
    in.accuracy_threshold = std::min(in.accuracy_threshold, v.accuracy);
  }
  return in;
}

void Stage1Inputs::validate() const {
  if (!(density > 0.0)) {
    throw DomainError("stage1: density must be positive");
  }
  if (!(delta > 0.0)) {
    throw DomainError("stage1: delta must be positive");
  }
  if (!(worst_reliability > 0.0 && worst_reliability < 0.5)) {
    throw DomainError("stage1: worst-case reliability must lie in (0, 0.5)");
  }
  if (!(worst_rate > 0.0)) {
    throw DomainError("stage1: worst-case rate must be positive");
  }
  if (!(accuracy_threshold > 0.0 && accuracy_threshold <= 1.0)) {
    throw DomainError("stage1: accuracy threshold must lie in (0, 1]");
  }
}

double worst_case_sinr(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                       const TrafficModel& traffic) {
  inputs.validate();
  cfg.validate();
  const double users = inputs.density * traffic.road_length;
  const double m = inputs.antennas;
  const double chi = inputs.accuracy_threshold;
  const double beta_w = worst_case_pathloss(cfg);
  const double p0 = cfg.signal_psd;
  const double n0 = cfg.noise_psd;

  // Per-VUE power P_0 B / (rho d_R) and noise N_0 B; B cancels.
  const double impairment = p0 * beta_w * (1.0 - chi) + m * n0;
  if (inputs.precoder == Precoder::mf) {
    if (inputs.antennas < 2) {
      throw DomainError("stage1: MF needs M >= 2");
    }
    return m * p0 / (p0 * (users - 1.0) + impairment / (chi * beta_w) * users * m / (m - 1.0));
  }
  if (!(m > users)) {
    std::ostringstream os;
    os << "stage1: ZF needs M > rho d_R (M = " << inputs.antennas << ", rho d_R = " << users << ")";
    throw DomainError(os.str());
  }
  return p0 / users * chi * beta_w * (m - users) / impairment;
}

double worst_case_sinr_asymptotic(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                                  const TrafficModel& traffic) {
  inputs.validate();
  cfg.validate();
  return cfg.signal_psd * inputs.accuracy_threshold * worst_case_pathloss(cfg) /
         (cfg.noise_psd * inputs.density * traffic.road_length);
}

double worst_case_latency(const Stage1Inputs& inputs, double gamma_w, double bandwidth) {
  return fbl::latency_for_sinr(
      gamma_w, fbl::QosTarget{inputs.worst_rate, inputs.worst_reliability, bandwidth});
}

Stage1Result bandwidth_for_worst_sinr(const Stage1Inputs& inputs, double gamma_w,
                                      const ChannelConfig& cfg, const TrafficModel& traffic) {
  inputs.validate();
  if (!(gamma_w > 0.0)) {
    throw DomainError("stage1: worst-case SINR must be positive");
  }
  Stage1Result out;
  out.gamma_w = gamma_w;
  out.coherence_time = coherence_time(traffic, inputs.density);
  const double budget = inputs.delta * out.coherence_time;

  // L_W(B) = budget  <=>  a B - c sqrt(B) - b = 0 with x = sqrt(B):
  //   a = sqrt(budget) log2(1 + Gamma_W), b = sqrt(budget) R_W,
  //   c = Q^-1(eps_W) log2(e) sqrt(1 - (1 + Gamma_W)^-2).
  const double spectral = std::log2(1.0 + gamma_w);
  const double inv = 1.0 / (1.0 + gamma_w);
  const double c = numerics::gaussian_q_inv(inputs.worst_reliability) * kLog2e *
                   std::sqrt(1.0 - inv * inv);
  out.discriminant = c * c + 4.0 * budget * spectral * inputs.worst_rate;
  const double root = (c + std::sqrt(out.discriminant)) / (2.0 * std::sqrt(budget) * spectral);
  out.bandwidth = root * root;
  out.total_power = cfg.signal_psd * out.bandwidth;
  out.worst_latency = worst_case_latency(inputs, gamma_w, out.bandwidth);
  return out;
}

Stage1Result optimal_bandwidth(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                               const TrafficModel& traffic) {
  return bandwidth_for_worst_sinr(inputs, worst_case_sinr(inputs, cfg, traffic), cfg, traffic);
}

}  // namespace twinrrm::stage1
