#pragma once

#include <span>
#include <vector>

#include "twinrrm/channel.hpp"

namespace twinrrm::stage2 {

/// Numerator and denominator of -sqrt(L_k) written as a ratio:
///   f_k = -sqrt(B) Q^-1(eps_k) log2(e) sqrt(1 - (1 + Gamma_k)^-2)   (< 0)
///   g_k = B log2(1 + Gamma_k) - R_k                                  (> 0 when feasible)
struct RatioParts {
  double numerator = 0.0;
  double denominator = 0.0;

  [[nodiscard]] double ratio() const { return numerator / denominator; }
};

/// Throws InfeasibleRateError when g_k <= 0.
RatioParts ratio_parts(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
                       double bandwidth);

/// h_k = f_k - eta g_k. Increasing in `power` wherever eta <= f_k / g_k (the
/// set h_k >= 0); at low SINR with small |eta| it can decrease. Concave on that
/// set too, except for MF once Gamma_k exceeds M - 2, i.e. p_k above roughly
/// (P_B + phi_k) / 2. Requires eta <= 0 and a feasible operating point.
double h_value(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
               double bandwidth, double eta);

struct EqualizerOptions {
  double tolerance = 1e-2;     // zeta_S, bound on max_k h_k - min_k h_k
  double initial_step = 0.0;   // mu_0 in W; 0 selects P_B / (2K)
  long max_iterations = 100000;
  double step_floor = 1e-15;   // stop with `degraded` once mu < step_floor * P_B
  bool record_trace = false;
};

struct EqualizerTraceEntry {
  long iteration = 0;
  double max_h = 0.0;
  double min_h = 0.0;
  double step = 0.0;  // mu_i after the accept/halve decision
  bool accepted = false;
};

struct EqualizerState {
  std::vector<double> powers;
  std::vector<double> h;
  double step = 0.0;
  long iterations = 0;
  bool degraded = false;  // step floor reached before the spread met the tolerance
  std::vector<EqualizerTraceEntry> trace;

  [[nodiscard]] double spread() const;
};

/// Max-min equalization of h_k(p) = f_k - eta g_k under sum(p) = P_B, p >= 0.
///
/// Starts from equal power and repeatedly moves `step` watts from the VUE with
/// the largest h to the one with the smallest. A move is undone and the step
/// halved when it fails to raise the minimum, fails to lower the maximum,
/// drives a power to zero or fails to shrink the spread. When several VUEs tie
/// at an extreme, a move that keeps the spread unchanged is accepted, since
/// no single move can shrink it.
///
/// Throws InfeasibleRateError if equal power is infeasible for any VUE and
/// NonConvergenceError after `max_iterations`.
EqualizerState equalize_maxmin(std::span<const Vue> vues, const EffectiveSinrModel& model,
                               double bandwidth, double eta, const EqualizerOptions& options = {});

struct DinkelbachOptions {
  double tolerance = 1e-2;      // zeta_P
  double initial_eta = -3e-2;   // eta_0
  int max_outer_iterations = 100;
  EqualizerOptions inner;
};

struct OuterTraceEntry {
  int iteration = 0;
  double eta = 0.0;
  double auxiliary = 0.0;  // F_j
};

struct AllocationResult {
  std::vector<double> powers;
  double eta_star = 0.0;                // min_k f_k / g_k at the returned powers
  std::vector<double> latencies;        // per VUE, s
  double max_latency = 0.0;             // s
  int outer_iterations = 0;             // number of eta updates
  long total_inner_iterations = 0;
  double final_spread = 0.0;            // spread of h at the equalizer state behind `powers`
  bool degraded = false;
  std::vector<OuterTraceEntry> outer_trace;
  std::vector<std::vector<EqualizerTraceEntry>> inner_traces;  // filled when inner.record_trace
};

/// Dinkelbach iteration on F(eta) = max_p min_k {f_k - eta g_k}.
///
/// eta_0 is clamped to the equal-power ratio when the configured value is
/// larger. Each outer step keeps the better of the equalizer output and the
/// previous iterate, so F_j >= 0 and eta_j is non-decreasing. Terminates when
/// F_j <= tolerance; throws NonConvergenceError after max_outer_iterations.
AllocationResult dinkelbach_allocate(std::span<const Vue> vues, const EffectiveSinrModel& model,
                                     double bandwidth, const DinkelbachOptions& options = {});

/// Equal power baseline p_k = P_B / K.
AllocationResult epa_allocate(std::span<const Vue> vues, const EffectiveSinrModel& model,
                              double bandwidth);

/// Approximates F(eta) as min_k h_k at the equalizer solution for `eta`.
double auxiliary_value(std::span<const Vue> vues, const EffectiveSinrModel& model,
                       double bandwidth, double eta, const EqualizerOptions& options = {});

}  // namespace twinrrm::stage2
