#pragma once

#include <span>

#include "twinrrm/channel.hpp"
#include "twinrrm/road_traffic.hpp"

namespace twinrrm::stage1 {

/// Long-term inputs: the road density and the strictest per-VUE requirements.
struct Stage1Inputs {
  double density = 0.05;             // rho, vehicles/m
  double delta = 1.0 / 20.0;         // fraction of the coherence time allowed for L_W
  double worst_reliability = 1e-6;   // eps_W = min_k eps_k
  double worst_rate = 1e5;           // R_W = max_k R_k, bit/s
  double accuracy_threshold = 0.8;   // chi_th = min_k chi_k
  Precoder precoder = Precoder::zf;
  int antennas = 300;

  /// Fills eps_W, R_W and chi_th from a population. The strictest reliability
  /// and the largest rate are paired even when they belong to different VUEs.
  static Stage1Inputs from_population(std::span<const Vue> vues, double density, double delta,
                                      Precoder precoder, int antennas);

  void validate() const;
};

struct Stage1Result {
  double gamma_w = 0.0;         // worst-case SINR
  double discriminant = 0.0;    // Delta of the quadratic in sqrt(B)
  double bandwidth = 0.0;       // B*, Hz
  double total_power = 0.0;     // P_B = P_0 B*, W
  double coherence_time = 0.0;  // T_C, s
  double worst_latency = 0.0;   // L_W(B*), s
};

/// Worst-case SINR under equal power for a VUE at a road end. rho d_R enters
/// as a real number. The result does not depend on the bandwidth.
double worst_case_sinr(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                       const TrafficModel& traffic);

/// Large-array limit of worst_case_sinr: P_0 chi_th beta_W / (N_0 rho d_R).
double worst_case_sinr_asymptotic(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                                  const TrafficModel& traffic);

/// Worst-case latency at bandwidth B. Throws InfeasibleRateError when
/// B log2(1 + Gamma_W) <= R_W.
double worst_case_latency(const Stage1Inputs& inputs, double gamma_w, double bandwidth);

/// Smallest bandwidth with L_W(B) <= delta T_C for a given worst-case SINR,
/// from the larger root of the quadratic in sqrt(B).
Stage1Result bandwidth_for_worst_sinr(const Stage1Inputs& inputs, double gamma_w,
                                      const ChannelConfig& cfg, const TrafficModel& traffic);

/// Closed-form optimal bandwidth and the resulting total power.
Stage1Result optimal_bandwidth(const Stage1Inputs& inputs, const ChannelConfig& cfg,
                               const TrafficModel& traffic);

}  // namespace twinrrm::stage1
