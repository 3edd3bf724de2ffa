#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "twinrrm/channel.hpp"
#include "twinrrm/road_traffic.hpp"
#include "twinrrm/stage2.hpp"

namespace twinrrm {

/// Every parameter an experiment needs, in SI units. Defaults reproduce the
/// baseline simulation setup.
struct SystemConfig {
  ChannelConfig channel;
  TrafficModel traffic;
  double accuracy = 0.8;  // chi for imperfect CSI; perfect CSI uses 1
  int antennas = 300;
  double delta = 1.0 / 20.0;
  double rate = 1e5;           // R_k, bit/s
  double reliability = 1e-6;   // eps_k
  PlacementMode placement = PlacementMode::uniform_random;

  // Stage-2 solver
  double zeta_p = 1e-2;
  double zeta_s = 1e-2;
  double eta0 = -3e-2;
  double mu0_fraction = 0.0;  // mu_0 = fraction * P_B; 0 selects 1 / (2K)
  int max_outer_iterations = 100;
  long max_inner_iterations = 100000;

  // Sweeps
  std::vector<double> densities{0.025, 0.05, 0.075, 0.1};
  std::vector<double> stage1_densities{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08,
                                       0.09, 0.1,  0.11, 0.12, 0.13, 0.14, 0.15};
  std::vector<double> deltas{1.0 / 20.0, 1.0 / 40.0};
  std::vector<double> reliabilities{1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3};
  std::vector<double> reliability_densities{0.05, 0.1};
  std::vector<double> power_multipliers{0.5, 1.0, 2.0, 4.0, 8.0};
  double power_density = 0.05;
  std::vector<int> antenna_sweep{50, 100, 200, 300, 400};

  // Monte Carlo validation and the rate/latency/reliability surface
  double mc_density = 0.05;
  double mc_bandwidth = 2e5;    // Hz
  double mc_latency = 1e-3;     // s
  double mc_power = 10.0;       // W
  long mc_realizations = 10000;
  double tradeoff_density = 0.05;
  double tradeoff_bandwidth = 2e5;
  double tradeoff_power = 10.0;
  std::vector<double> tradeoff_latencies{1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3};
  std::vector<double> tradeoff_reliabilities{1e-9, 1e-7, 1e-5, 1e-3, 1e-1};

  double instance_density = 0.05;
  int threads = 1;

  [[nodiscard]] stage2::DinkelbachOptions dinkelbach_options() const;
  void validate() const;
};

/// dBm/Hz to W/Hz.
double dbm_to_watts(double dbm);

/// Parses `key = value` lines; `#` starts a comment. Lists are comma
/// separated. Unknown keys and malformed values raise ConfigError naming the
/// line and the key. Missing keys keep their defaults.
SystemConfig parse_config(const std::string& text, const std::string& origin = "<string>");

SystemConfig load_config(const std::filesystem::path& path);

/// Config used when no --config flag is given: `default.conf` under
/// $TWINRRM_CONFIG_DIR when that file exists, otherwise built-in defaults.
SystemConfig load_default_config();

}  // namespace twinrrm
