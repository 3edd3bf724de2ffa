#include "twinrrm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "twinrrm/errors.hpp"

namespace twinrrm {

std::string_view to_string(Precoder precoder) {
  return precoder == Precoder::mf ? "mf" : "zf";
}

void ChannelConfig::validate() const {
  if (!(bs_distance > 0.0) || !(road_length > 0.0) || !(gain_constant > 0.0)) {
    throw DomainError("channel config: d_B, d_R and theta must be positive");
  }
  if (!(pathloss_exponent >= 0.0)) {
    throw DomainError("channel config: path-loss exponent must be non-negative");
  }
  if (!(noise_psd > 0.0) || !(signal_psd > 0.0)) {
    throw DomainError("channel config: N_0 and P_0 must be positive");
  }
}

void Vue::validate() const {
  if (!(pathloss > 0.0)) {
    throw DomainError("vue: path loss must be positive");
  }
  if (!(accuracy > 0.0 && accuracy <= 1.0)) {
    throw DomainError("vue: estimation accuracy must lie in (0, 1]");
  }
  if (!(rate > 0.0)) {
    throw DomainError("vue: target rate must be positive");
  }
  if (!(reliability > 0.0 && reliability < 0.5)) {
    throw DomainError("vue: reliability target must lie in (0, 0.5)");
  }
}

void EffectiveSinrModel::validate(int users) const {
  if (users < 1) {
    throw DomainError("effective SINR: need at least one user");
  }
  if (precoder == Precoder::mf && antennas < 2) {
    throw DomainError("effective SINR: MF needs M >= 2");
  }
  if (precoder == Precoder::zf && antennas <= users) {
    std::ostringstream os;
    os << "effective SINR: ZF needs M > K (M = " << antennas << ", K = " << users << ")";
    throw DomainError(os.str());
  }
  if (!(total_power > 0.0) || !(noise_power > 0.0)) {
    throw DomainError("effective SINR: P_B and sigma^2 must be positive");
  }
}

double pathloss(const ChannelConfig& cfg, double position) {
  if (!(position >= 0.0 && position <= cfg.road_length)) {
    throw DomainError("pathloss: position outside the road segment");
  }
  const double along = position - 0.5 * cfg.road_length;
  const double dist_sq = along * along + cfg.bs_distance * cfg.bs_distance;
  return cfg.gain_constant * std::pow(dist_sq, -0.5 * cfg.pathloss_exponent);
}

double worst_case_pathloss(const ChannelConfig& cfg) {
  const double half = 0.5 * cfg.road_length;
  return cfg.gain_constant *
         std::pow(cfg.bs_distance * cfg.bs_distance + half * half, -0.5 * cfg.pathloss_exponent);
}

std::vector<double> place_vues(const ChannelConfig& cfg, int users, std::uint64_t seed,
                               PlacementMode mode) {
  if (users < 1) {
    throw DomainError("place_vues: need at least one VUE");
  }
  std::vector<double> positions(static_cast<std::size_t>(users));
  if (mode == PlacementMode::equispaced) {
    for (int k = 0; k < users; ++k) {
      positions[static_cast<std::size_t>(k)] = (k + 0.5) * cfg.road_length / users;
    }
    return positions;
  }
  // mt19937_64 output is fully specified by the standard; the 53-bit mapping
  // to [0, 1) is done by hand so placement does not depend on the library.
  std::mt19937_64 engine(seed);
  for (auto& p : positions) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    p = u * cfg.road_length;
  }
  std::sort(positions.begin(), positions.end());
  return positions;
}

std::vector<Vue> make_population(const ChannelConfig& cfg, std::span<const double> positions,
                                 double accuracy, double rate, double reliability) {
  std::vector<Vue> vues;
  vues.reserve(positions.size());
  for (double d : positions) {
    Vue v{d, pathloss(cfg, d), accuracy, rate, reliability};
    v.validate();
    vues.push_back(v);
  }
  return vues;
}

double phi(const EffectiveSinrModel& model, const Vue& vue, int users) {
  model.validate(users);
  const double m = model.antennas;
  const double impairment =
      model.total_power * vue.pathloss * (1.0 - vue.accuracy) + m * model.noise_power;
  if (model.precoder == Precoder::mf) {
    return impairment / (vue.accuracy * vue.pathloss) * m / (m - 1.0);
  }
  return vue.accuracy * vue.pathloss * (m - users) / impairment;
}

double effective_sinr(const EffectiveSinrModel& model, const Vue& vue, double power, int users) {
  if (!(power >= 0.0 && power <= model.total_power)) {
    throw DomainError("effective_sinr: power must lie in [0, P_B]");
  }
  const double factor = phi(model, vue, users);
  if (model.precoder == Precoder::mf) {
    return model.antennas * power / (model.total_power - power + factor);
  }
  return power * factor;
}

double asymptotic_sinr(const Vue& vue, double power, double noise_power) {
  if (!(power >= 0.0) || !(noise_power > 0.0)) {
    throw DomainError("asymptotic_sinr: need power >= 0 and noise power > 0");
  }
  return power * vue.accuracy * vue.pathloss / noise_power;
}

}  // namespace twinrrm
