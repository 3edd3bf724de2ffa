#include "oracles.hpp"

#include <cmath>
#include <limits>

#include "twinrrm/numerics.hpp"

namespace oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename F>
double bisect(F f, double lo, double hi, int iterations = 200) {
  // f(lo) and f(hi) have opposite signs
  const bool lo_negative = f(lo) < 0.0;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    ((f(mid) < 0.0) == lo_negative ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double model_sinr(const twinrrm::EffectiveSinrModel& m, const twinrrm::Vue& v, int users, double p) {
  return sinr(m.precoder, m.antennas, users, m.total_power, m.noise_power, v.pathloss, v.accuracy, p);
}

}  // namespace

double sinr(twinrrm::Precoder precoder, int antennas, int users, double total_power,
            double noise_power, double pathloss, double accuracy, double power) {
  const double m = antennas;
  const double impairment = total_power * pathloss * (1.0 - accuracy) + m * noise_power;
  if (precoder == twinrrm::Precoder::zf) {
    // E[1/gamma] = impairment / (p chi beta) * 1 / (M - K)
    return power * accuracy * pathloss * (m - users) / impairment;
  }
  // E[1/gamma] = (P_B - p) / p * 1/M + impairment / (p chi beta) * 1/(M - 1)
  const double inv = (total_power - power) / power / m +
                     impairment / (power * accuracy * pathloss) / (m - 1.0);
  return 1.0 / inv;
}

double latency(double gamma, double rate, double reliability, double bandwidth) {
  const double margin = bandwidth * std::log2(1.0 + gamma) - rate;
  if (!(margin > 0.0)) return kInf;
  const double num = std::sqrt(bandwidth) * twinrrm::numerics::gaussian_q_inv(reliability) *
                     std::sqrt(1.0 - 1.0 / ((1.0 + gamma) * (1.0 + gamma))) / std::log(2.0);
  return (num / margin) * (num / margin);
}

double latency_by_bisection(double gamma, double rate, double reliability, double bandwidth) {
  const double q = twinrrm::numerics::gaussian_q_inv(reliability);
  const double v = (1.0 - 1.0 / ((1.0 + gamma) * (1.0 + gamma)));
  auto achieved = [&](double log_l) {
    const double l = std::exp(log_l);
    const double r = bandwidth * (std::log2(1.0 + gamma) - std::sqrt(v / (l * bandwidth)) * q / std::log(2.0));
    return r - rate;
  };
  return std::exp(bisect(achieved, std::log(1e-15), std::log(1e6), 400));
}

std::vector<double> latencies(std::span<const twinrrm::Vue> vues,
                              const twinrrm::EffectiveSinrModel& model,
                              std::span<const double> powers, double bandwidth) {
  std::vector<double> out;
  const int users = static_cast<int>(vues.size());
  for (std::size_t k = 0; k < vues.size(); ++k) {
    out.push_back(latency(model_sinr(model, vues[k], users, powers[k]), vues[k].rate,
                          vues[k].reliability, bandwidth));
  }
  return out;
}

double minmax_latency(std::span<const twinrrm::Vue> vues, const twinrrm::EffectiveSinrModel& model,
                      double bandwidth) {
  const int users = static_cast<int>(vues.size());
  auto required_power = [&](const twinrrm::Vue& v, double target) {
    auto excess = [&](double p) {
      return latency(model_sinr(model, v, users, p), v.rate, v.reliability, bandwidth) - target;
    };
    if (excess(model.total_power) > 0.0) return kInf;
    return bisect(excess, 1e-300, model.total_power);
  };
  auto surplus = [&](double log_target) {
    double total = 0.0;
    for (const auto& v : vues) total += required_power(v, std::exp(log_target));
    return model.total_power - total;  // increasing in the target
  };
  return std::exp(bisect(surplus, std::log(1e-12), std::log(10.0), 200));
}

namespace {

double objective(std::span<const twinrrm::Vue> vues, const twinrrm::EffectiveSinrModel& model,
                 std::span<const double> p, double bandwidth) {
  double worst = 0.0;
  for (double l : latencies(vues, model, p, bandwidth)) worst = std::max(worst, l);
  return -std::sqrt(worst);
}

}  // namespace

GridBest grid_k2(std::span<const twinrrm::Vue> vues, const twinrrm::EffectiveSinrModel& model,
                 double bandwidth, long steps) {
  GridBest best{{}, -kInf};
  for (long i = 1; i < steps; ++i) {
    const double p1 = model.total_power * static_cast<double>(i) / static_cast<double>(steps);
    const double p[2] = {p1, model.total_power - p1};
    const double obj = objective(vues, model, p, bandwidth);
    if (obj > best.objective) best = {{p[0], p[1]}, obj};
  }
  return best;
}

GridBest grid_k3(std::span<const twinrrm::Vue> vues, const twinrrm::EffectiveSinrModel& model,
                 double bandwidth, long steps) {
  GridBest best{{}, -kInf};
  const double unit = model.total_power / static_cast<double>(steps);
  for (long i = 1; i < steps; ++i) {
    for (long j = 1; i + j < steps; ++j) {
      const double p[3] = {unit * static_cast<double>(i), unit * static_cast<double>(j),
                           unit * static_cast<double>(steps - i - j)};
      const double obj = objective(vues, model, p, bandwidth);
      if (obj > best.objective) best = {{p[0], p[1], p[2]}, obj};
    }
  }
  return best;
}

GridBest grid_k2_h(std::span<const twinrrm::Vue> vues, const twinrrm::EffectiveSinrModel& model,
                   double bandwidth, double eta, long steps) {
  GridBest best{{}, -kInf};
  auto h = [&](const twinrrm::Vue& v, double p) {
    const double g = model_sinr(model, v, 2, p);
    const double f = -std::sqrt(bandwidth) * twinrrm::numerics::gaussian_q_inv(v.reliability) *
                     std::sqrt(1.0 - 1.0 / ((1.0 + g) * (1.0 + g))) / std::log(2.0);
    return f - eta * (bandwidth * std::log2(1.0 + g) - v.rate);
  };
  for (long i = 1; i < steps; ++i) {
    const double p1 = model.total_power * static_cast<double>(i) / static_cast<double>(steps);
    const double obj = std::min(h(vues[0], p1), h(vues[1], model.total_power - p1));
    if (obj > best.objective) best = {{p1, model.total_power - p1}, obj};
  }
  return best;
}

double coherence_time(double free_flow_speed, double max_density, double carrier_frequency,
                      double density) {
  const double v = free_flow_speed * std::exp(-density / max_density);
  const double doppler = carrier_frequency * v / 2.998e8;
  return std::sqrt(9.0 / (16.0 * std::acos(-1.0) * doppler * doppler));
}

double stage1_bandwidth_by_bisection(double gamma_w, double rate, double reliability,
                                     double deadline) {
  const double floor = rate / std::log2(1.0 + gamma_w);
  auto excess = [&](double log_b) {
    return latency(gamma_w, rate, reliability, std::exp(log_b)) - deadline;
  };
  // excess is +inf just above the pole and negative for large B
  return std::exp(bisect(excess, std::log(floor * (1.0 + 1e-12)), std::log(floor * 1e6), 400));
}

}  // namespace oracle
