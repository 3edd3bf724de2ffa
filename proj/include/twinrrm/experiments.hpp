#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twinrrm/config.hpp"
#include "twinrrm/csv.hpp"
#include "twinrrm/stage1.hpp"
#include "twinrrm/stage2.hpp"

namespace twinrrm::experiments {

enum class CsiMode { perfect, imperfect };

std::string_view to_string(CsiMode csi);

struct Scenario {
  Precoder precoder = Precoder::zf;
  CsiMode csi = CsiMode::imperfect;
};

/// Cartesian product in a fixed order (MF before ZF, perfect before imperfect).
std::vector<Scenario> make_scenarios(std::span<const Precoder> precoders,
                                     std::span<const CsiMode> csis);
std::vector<Scenario> all_scenarios();

/// chi used for a CSI mode: 1 for perfect, cfg.accuracy otherwise.
double accuracy_for(const SystemConfig& cfg, CsiMode csi);

/// Seed of the VUE placement at density rho. Every scenario at the same
/// density sees the same placement.
std::uint64_t population_seed(std::uint64_t seed, double density);

std::vector<Vue> make_vues(const SystemConfig& cfg, double density, CsiMode csi,
                           std::uint64_t seed);

/// Stage 1 for a scenario, from the configured (common) QoS requirement.
stage1::Stage1Inputs stage1_inputs(const SystemConfig& cfg, double density, Precoder precoder,
                                   CsiMode csi);

/// Model for Stage 2 at bandwidth B: sigma^2 = N_0 B.
EffectiveSinrModel stage2_model(const SystemConfig& cfg, Precoder precoder, double total_power,
                                double bandwidth);

struct RunRow {
  double density = 0.0;
  Scenario scenario;
  int users = 0;
  double bandwidth = 0.0;
  double total_power = 0.0;
  double proposed_max_latency = 0.0;
  double epa_max_latency = 0.0;
  double eta_star = 0.0;
  int outer_iterations = 0;
  long inner_iterations = 0;
  bool degraded = false;
  std::string error;  // empty when the point solved
};

/// Twin-timescale loop: for every reported density run Stage 1, regenerate the
/// population and run Stage 2 (proposed and equal power). A failing point
/// records its error and the run continues. Rows are ordered by density index,
/// then scenario.
std::vector<RunRow> run_twin_timescale(const SystemConfig& cfg, std::span<const double> densities,
                                       std::uint64_t seed, std::span<const Scenario> scenarios);

/// Row-wise checks of a density sweep: proposed <= EPA, and ZF < MF for the
/// same density, CSI and scheme. Returns one message per violation.
std::vector<std::string> check_density_latency(std::span<const RunRow> rows);

enum class Kind {
  stage1_sweep_density,
  stage1_sweep_reliability,
  allocate,
  sweep_density_latency,
  sweep_power_latency,
  tradeoff_surface,
  mc_validate,
  convergence_trace,
};

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);
std::span<const Kind> all_kinds();

/// Sweeps never fail as a whole; allocate and convergence-trace propagate
/// solver errors.
bool is_sweep(Kind kind);

struct Output {
  std::string suffix;  // appended to the output file stem; empty for the main table
  csv::Table table;
};

struct Result {
  std::vector<Output> tables;
  std::vector<std::string> violations;
};

Result run(Kind kind, const SystemConfig& cfg, std::uint64_t seed,
           std::span<const Scenario> scenarios);

}  // namespace twinrrm::experiments
