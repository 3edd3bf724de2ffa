#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "twinrrm/channel.hpp"

namespace twinrrm::mc {

struct McConfig {
  long realizations = 10000;
  std::uint64_t seed = 1;
  int parallel_streams = 1;  // worker threads; never changes the result

  void validate() const;
};

/// Mixes a 64-bit word (splitmix64 finalizer).
std::uint64_t splitmix64(std::uint64_t x);

/// Random source for one realization. Every realization owns a generator
/// seeded from (master seed, stream key, realization index), so outputs do not
/// depend on how realizations are spread over threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master, std::uint64_t key, std::uint64_t index);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).
  double gamma(double shape);
  /// Beta(1, b) by inversion.
  double beta_one(double b);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

enum class OmegaKind { beta_mf, inv_gamma_mf, inv_gamma_zf };

struct OmegaSample {
  OmegaKind kind = OmegaKind::beta_mf;
  double value = 0.0;
};

/// beta_mf ~ Beta(1, M-1), inv_gamma_mf ~ InvGamma(M, 1),
/// inv_gamma_zf ~ InvGamma(M-K+1, 1). Requires M >= 2, and M >= K for ZF.
OmegaSample sample_omega(OmegaKind kind, int antennas, int users, Rng& rng);

/// How MF interference is drawn. `independent` uses one Beta(1, M-1) per
/// interferer weighted by p_i / p_k; `collapsed` uses a single draw scaled by
/// (P_B - p_k) / p_k.
enum class InterferenceMode { independent, collapsed };

/// One draw of 1 / gamma_k for VUE k given the power vector (K = powers.size()).
double instantaneous_inv_sinr(const EffectiveSinrModel& model, const Vue& vue,
                              std::span<const double> powers, std::size_t k, Rng& rng,
                              InterferenceMode mode = InterferenceMode::independent);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;  // unbiased sample variance
  long count = 0;
};

/// Sample mean of draw(rng) over mc.realizations realizations, realization i
/// using Rng(mc.seed, key, i). Reduction is compensated and in index order.
Estimate estimate(const McConfig& mc, std::uint64_t key, const std::function<double(Rng&)>& draw);

/// Monte Carlo mean of na_rate over instantaneous SINR draws.
Estimate empirical_rate(const EffectiveSinrModel& model, const Vue& vue,
                        std::span<const double> powers, std::size_t k, double bandwidth,
                        double latency, const McConfig& mc,
                        InterferenceMode mode = InterferenceMode::independent);

/// Monte Carlo mean of 1 / gamma_k.
Estimate inv_sinr_mean(const EffectiveSinrModel& model, const Vue& vue,
                       std::span<const double> powers, std::size_t k, const McConfig& mc,
                       InterferenceMode mode = InterferenceMode::independent);

/// E[log2(1 + gamma)] and E[1 / gamma] from the same draws.
struct SinrMoments {
  Estimate log2_one_plus;
  Estimate inverse;
};

SinrMoments sinr_moments(const EffectiveSinrModel& model, const Vue& vue,
                         std::span<const double> powers, std::size_t k, const McConfig& mc,
                         InterferenceMode mode = InterferenceMode::independent);

struct TightnessRow {
  int antennas = 0;
  Precoder precoder = Precoder::zf;
  std::string csi;
  int vue = 0;
  double theorem1_rate = 0.0;
  double empirical_rate = 0.0;
  double std_error = 0.0;
  double rel_gap = 0.0;  // |empirical - theorem1| / theorem1
};

/// Closed-form rate against the Monte Carlo rate for every VUE and every M in
/// `antenna_sweep`. Empty `powers` selects equal power. `csi` is a label only;
/// the accuracy comes from the VUEs.
std::vector<TightnessRow> tightness_report(std::span<const Vue> vues, EffectiveSinrModel model,
                                           std::span<const double> powers, double bandwidth,
                                           double latency, const McConfig& mc,
                                           std::span<const int> antenna_sweep,
                                           const std::string& csi,
                                           InterferenceMode mode = InterferenceMode::independent);

}  // namespace twinrrm::mc
