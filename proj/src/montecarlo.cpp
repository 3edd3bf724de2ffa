#include "twinrrm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "twinrrm/errors.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/numerics.hpp"

namespace twinrrm::mc {

void McConfig::validate() const {
  if (realizations < 1) {
    throw DomainError("monte carlo: realizations must be >= 1");
  }
  if (parallel_streams < 1) {
    throw DomainError("monte carlo: parallel_streams must be >= 1");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t master, std::uint64_t key, std::uint64_t index)
    : engine_(splitmix64(splitmix64(splitmix64(master) ^ key) ^ index)) {}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double Rng::gamma(double shape) {
  if (!(shape >= 1.0)) {
    throw DomainError("Rng::gamma: shape must be >= 1");
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) {
      continue;
    }
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

double Rng::beta_one(double b) {
  if (!(b > 0.0)) {
    throw DomainError("Rng::beta_one: b must be positive");
  }
  // 1 - U^(1/b), accurate for small results
  return -std::expm1(std::log(uniform()) / b);
}

OmegaSample sample_omega(OmegaKind kind, int antennas, int users, Rng& rng) {
  if (antennas < 2) {
    throw DomainError("sample_omega: M must be >= 2");
  }
  const double m = antennas;
  switch (kind) {
    case OmegaKind::beta_mf:
      return {kind, rng.beta_one(m - 1.0)};
    case OmegaKind::inv_gamma_mf:
      return {kind, 1.0 / rng.gamma(m)};
    case OmegaKind::inv_gamma_zf:
      if (users < 1 || antennas < users) {
        throw DomainError("sample_omega: ZF requires 1 <= K <= M");
      }
      return {kind, 1.0 / rng.gamma(m - users + 1.0)};
  }
  throw DomainError("sample_omega: unknown kind");
}

namespace {

// Interference-plus-noise numerator P_B beta (1 - chi) + M sigma^2 over chi beta.
double noise_coefficient(const EffectiveSinrModel& model, const Vue& vue) {
  return (model.total_power * vue.pathloss * (1.0 - vue.accuracy) +
          model.antennas * model.noise_power) /
         (vue.accuracy * vue.pathloss);
}

void check_draw_inputs(const EffectiveSinrModel& model, const Vue& vue,
                       std::span<const double> powers, std::size_t k) {
  if (k >= powers.size()) {
    throw DomainError("instantaneous_inv_sinr: VUE index out of range");
  }
  if (!(powers[k] > 0.0)) {
    throw DomainError("instantaneous_inv_sinr: p_k must be positive");
  }
  model.validate(static_cast<int>(powers.size()));
  vue.validate();
}

double draw_inv_sinr(const EffectiveSinrModel& model, double coeff,
                     std::span<const double> powers, std::size_t k, Rng& rng,
                     InterferenceMode mode) {
  const int users = static_cast<int>(powers.size());
  const double pk = powers[k];
  if (model.precoder == Precoder::zf) {
    return coeff / pk * sample_omega(OmegaKind::inv_gamma_zf, model.antennas, users, rng).value;
  }
  double interference = 0.0;
  if (mode == InterferenceMode::collapsed) {
    interference = (model.total_power - pk) / pk *
                   sample_omega(OmegaKind::beta_mf, model.antennas, users, rng).value;
  } else {
    for (std::size_t i = 0; i < powers.size(); ++i) {
      if (i != k) {
        interference += powers[i] / pk *
                        sample_omega(OmegaKind::beta_mf, model.antennas, users, rng).value;
      }
    }
  }
  return interference +
         coeff / pk * sample_omega(OmegaKind::inv_gamma_mf, model.antennas, users, rng).value;
}

}  // namespace

double instantaneous_inv_sinr(const EffectiveSinrModel& model, const Vue& vue,
                              std::span<const double> powers, std::size_t k, Rng& rng,
                              InterferenceMode mode) {
  check_draw_inputs(model, vue, powers, k);
  return draw_inv_sinr(model, noise_coefficient(model, vue), powers, k, rng, mode);
}

namespace {

Estimate reduce(std::span<const double> values) {
  numerics::CompensatedSum sum;
  for (double v : values) {
    sum.add(v);
  }
  Estimate e;
  e.count = static_cast<long>(values.size());
  e.mean = sum.value() / static_cast<double>(e.count);
  if (e.count > 1) {
    numerics::CompensatedSum sq;
    for (double v : values) {
      const double d = v - e.mean;
      sq.add(d * d);
    }
    e.variance = sq.value() / static_cast<double>(e.count - 1);
    e.std_error = std::sqrt(e.variance / static_cast<double>(e.count));
  }
  return e;
}

// Fills out[i] = draw(Rng(seed, key, i)) using mc.parallel_streams workers.
template <typename Draw>
void fill(const McConfig& mc, std::uint64_t key, std::span<double> out, const Draw& draw) {
  const std::size_t n = out.size();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(mc.parallel_streams), n);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(mc.seed, key, i);
      out[i] = draw(rng);
    }
  };
  if (workers <= 1) {
    run(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(run, n * w / workers, n * (w + 1) / workers);
  }
  for (auto& t : pool) {
    t.join();
  }
}

}  // namespace

Estimate estimate(const McConfig& mc, std::uint64_t key,
                  const std::function<double(Rng&)>& draw) {
  mc.validate();
  std::vector<double> values(static_cast<std::size_t>(mc.realizations));
  fill(mc, key, values, draw);
  return reduce(values);
}

Estimate empirical_rate(const EffectiveSinrModel& model, const Vue& vue,
                        std::span<const double> powers, std::size_t k, double bandwidth,
                        double latency, const McConfig& mc, InterferenceMode mode) {
  check_draw_inputs(model, vue, powers, k);
  if (!(bandwidth > 0.0) || !(latency > 0.0)) {
    throw DomainError("empirical_rate: bandwidth and latency must be positive");
  }
  const double coeff = noise_coefficient(model, vue);
  return estimate(mc, k, [&](Rng& rng) {
    const double gamma = 1.0 / draw_inv_sinr(model, coeff, powers, k, rng, mode);
    return fbl::na_rate(gamma, latency, vue.reliability, bandwidth);
  });
}

Estimate inv_sinr_mean(const EffectiveSinrModel& model, const Vue& vue,
                       std::span<const double> powers, std::size_t k, const McConfig& mc,
                       InterferenceMode mode) {
  check_draw_inputs(model, vue, powers, k);
  const double coeff = noise_coefficient(model, vue);
  return estimate(mc, k,
                  [&](Rng& rng) { return draw_inv_sinr(model, coeff, powers, k, rng, mode); });
}

SinrMoments sinr_moments(const EffectiveSinrModel& model, const Vue& vue,
                         std::span<const double> powers, std::size_t k, const McConfig& mc,
                         InterferenceMode mode) {
  check_draw_inputs(model, vue, powers, k);
  mc.validate();
  const double coeff = noise_coefficient(model, vue);
  std::vector<double> inv(static_cast<std::size_t>(mc.realizations));
  fill(mc, k, std::span<double>(inv),
       [&](Rng& rng) { return draw_inv_sinr(model, coeff, powers, k, rng, mode); });
  std::vector<double> logs(inv.size());
  std::transform(inv.begin(), inv.end(), logs.begin(),
                 [](double x) { return std::log2(1.0 + 1.0 / x); });
  return {reduce(logs), reduce(inv)};
}

std::vector<TightnessRow> tightness_report(std::span<const Vue> vues, EffectiveSinrModel model,
                                           std::span<const double> powers, double bandwidth,
                                           double latency, const McConfig& mc,
                                           std::span<const int> antenna_sweep,
                                           const std::string& csi, InterferenceMode mode) {
  if (vues.empty()) {
    throw DomainError("tightness_report: empty population");
  }
  std::vector<double> p(powers.begin(), powers.end());
  if (p.empty()) {
    p.assign(vues.size(), model.total_power / static_cast<double>(vues.size()));
  }
  if (p.size() != vues.size()) {
    throw DomainError("tightness_report: power vector size differs from population size");
  }
  const int users = static_cast<int>(vues.size());
  std::vector<TightnessRow> rows;
  rows.reserve(antenna_sweep.size() * vues.size());
  for (int m : antenna_sweep) {
    model.antennas = m;
    for (std::size_t k = 0; k < vues.size(); ++k) {
      TightnessRow row;
      row.antennas = m;
      row.precoder = model.precoder;
      row.csi = csi;
      row.vue = static_cast<int>(k);
      row.theorem1_rate = fbl::theorem1_rate(model, vues[k], p[k], users, latency, bandwidth);
      const Estimate e = empirical_rate(model, vues[k], p, k, bandwidth, latency, mc, mode);
      row.empirical_rate = e.mean;
      row.std_error = e.std_error;
      row.rel_gap = std::abs(e.mean - row.theorem1_rate) / std::abs(row.theorem1_rate);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace twinrrm::mc
