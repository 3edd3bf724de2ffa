#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace twinrrm {

enum class Precoder { mf, zf };

std::string_view to_string(Precoder precoder);

/// Geometry and spectral densities of a roadside base station serving one
/// straight road. The BS sits `bs_distance` meters off the road midpoint.
struct ChannelConfig {
  double bs_distance = 20.0;        // d_B, m
  double road_length = 200.0;       // d_R, m
  double gain_constant = 1e-3;      // theta
  double pathloss_exponent = 3.8;   // alpha
  double noise_psd = 1e-16;         // N_0, W/Hz
  double signal_psd = 1e-4;         // P_0, W/Hz

  /// Hard checks only (d_B, d_R, theta, N_0, P_0 > 0 and alpha >= 0).
  /// alpha <= 2 is physically odd but accepted; load_config warns about it.
  void validate() const;
};

/// One vehicular user: position on the road plus its QoS requirement.
struct Vue {
  double position = 0.0;      // d_k, m from the road start
  double pathloss = 0.0;      // beta_k
  double accuracy = 1.0;      // chi_k in (0, 1]
  double rate = 1e5;          // R_k, bit/s
  double reliability = 1e-6;  // eps_k in (0, 0.5)

  void validate() const;
};

/// Context for evaluating the deterministic effective SINR of one VUE.
struct EffectiveSinrModel {
  Precoder precoder = Precoder::zf;
  int antennas = 300;         // M
  double total_power = 20.0;  // P_B, W
  double noise_power = 2e-11; // sigma^2, W

  /// Checks M, P_B and sigma^2; for ZF also requires M > users.
  void validate(int users) const;
};

enum class PlacementMode { uniform_random, equispaced };

/// beta = theta [(d - d_R/2)^2 + d_B^2]^(-alpha/2). Throws DomainError when
/// `position` lies outside [0, d_R].
double pathloss(const ChannelConfig& cfg, double position);

/// Path loss at either road end, the farthest point from the BS.
double worst_case_pathloss(const ChannelConfig& cfg);

/// K positions in [0, d_R], sorted ascending. Uniform placement is a pure
/// function of `seed`; equispaced puts VUE k at (k + 1/2) d_R / K.
std::vector<double> place_vues(const ChannelConfig& cfg, int users, std::uint64_t seed,
                               PlacementMode mode);

/// Builds VUEs at the given positions with a common QoS requirement.
std::vector<Vue> make_population(const ChannelConfig& cfg, std::span<const double> positions,
                                 double accuracy, double rate, double reliability);

/// Precoder-dependent factor phi_k of the effective SINR.
double phi(const EffectiveSinrModel& model, const Vue& vue, int users);

/// Deterministic effective SINR Gamma_k at power `power` (0 <= power <= P_B):
/// MF: M p / (P_B - p + phi),  ZF: p phi.
double effective_sinr(const EffectiveSinrModel& model, const Vue& vue, double power, int users);

/// Limit of effective_sinr as M grows without bound: p chi beta / sigma^2.
double asymptotic_sinr(const Vue& vue, double power, double noise_power);

}  // namespace twinrrm
