// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twinrrm/errors.hpp"
#include "twinrrm/experiments.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/montecarlo.hpp"
#include "twinrrm/stage1.hpp"
#include "twinrrm/stage2.hpp"

using namespace twinrrm;
namespace ex = twinrrm::experiments;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Instance {
  std::vector<Vue> vues;
  EffectiveSinrModel model;
  double bandwidth = 0.0;
};

// Default instance: rho = 0.05, M = 300, seeded placement, Stage-1 B* and P_B.
Instance default_instance(const SystemConfig& cfg, const ex::Scenario& sc, double rho = 0.05) {
  Instance in;
  in.vues = ex::make_vues(cfg, rho, sc.csi, 1);
  const auto s1 = stage1::optimal_bandwidth(ex::stage1_inputs(cfg, rho, sc.precoder, sc.csi),
                                            cfg.channel, cfg.traffic);
  in.bandwidth = s1.bandwidth;
  in.model = ex::stage2_model(cfg, sc.precoder, s1.total_power, s1.bandwidth);
  return in;
}

std::string label(const ex::Scenario& sc) {
  return std::string(to_string(sc.precoder)) + "/" + std::string(ex::to_string(sc.csi));
}

void criterion1() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double gamma = std::pow(10.0, 4.0 * u(rng));
    const double eps = std::pow(10.0, -9.0 + 7.0 * u(rng));
    const double bw = 5e4 + 4.5e5 * u(rng);
    const double rate = (0.05 + 0.9 * u(rng)) * bw * std::log2(1.0 + gamma);
    const double l = fbl::latency_for_sinr(gamma, {rate, eps, bw});
    worst = std::max(worst, rel(fbl::na_rate(gamma, l, eps, bw), rate));
  }
  report(1, worst <= 1e-9, fmt("rate at latency(R) reproduces R over 1000 tuples, max rel err %.3e (tol 1e-9)", worst));
}

void criterion2(const SystemConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_b = 0.0, worst_l = 0.0;
  int points = 0;
  for (int i = 0; i < 5; ++i) {
    const double rho = 0.01 + 0.035 * i;
    for (double eps : {1e-9, 1e-6, 1e-3}) {
      for (double delta : {1.0 / 20.0, 1.0 / 40.0}) {
        for (const auto& sc : ex::all_scenarios()) {
          auto in = ex::stage1_inputs(cfg, rho, sc.precoder, sc.csi);
          in.worst_reliability = eps;
          in.delta = delta;
          const auto r = stage1::optimal_bandwidth(in, cfg.channel, cfg.traffic);
          const double deadline = delta * oracle::coherence_time(cfg.traffic.free_flow_speed,
                                                                 cfg.traffic.max_density,
                                                                 cfg.traffic.carrier_frequency, rho);
          const double ref = oracle::stage1_bandwidth_by_bisection(r.gamma_w, in.worst_rate, eps, deadline);
          worst_b = std::max(worst_b, rel(r.bandwidth, ref));
          worst_l = std::max(worst_l, rel(stage1::worst_case_latency(in, r.gamma_w, r.bandwidth), deadline));
          ++points;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(2, worst_b <= 1e-9 && worst_l <= 1e-9 && elapsed < 1.0 && points == 120,
         fmt("B* vs bisection over %d points: max rel %.3e (tol 1e-9); |L_W(B*)-dT_C|/dT_C max %.3e "
             "(tol 1e-9); %.3f s (limit 1 s)",
             points, worst_b, worst_l, elapsed));
}

void criterion3(const SystemConfig& cfg) {
  bool increasing = true, ipcsi_ge = true, eps_ok = true;
  double max_increase = 0.0, min_increase = 1e300;
  auto solve = [&](double rho, ex::Scenario sc, double eps) {
    auto in = ex::stage1_inputs(cfg, rho, sc.precoder, sc.csi);
    in.worst_reliability = eps;
    return stage1::optimal_bandwidth(in, cfg.channel, cfg.traffic).bandwidth;
  };
  for (Precoder pc : {Precoder::mf, Precoder::zf}) {
    double prev_p = 0.0, prev_i = 0.0;
    for (double rho : cfg.stage1_densities) {
      const double bp = solve(rho, {pc, ex::CsiMode::perfect}, 1e-6);
      const double bi = solve(rho, {pc, ex::CsiMode::imperfect}, 1e-6);
      increasing = increasing && bp > prev_p && bi > prev_i;
      ipcsi_ge = ipcsi_ge && bi >= bp;
      prev_p = bp;
      prev_i = bi;
    }
    for (double rho : {0.05, 0.1}) {
      for (auto csi : {ex::CsiMode::perfect, ex::CsiMode::imperfect}) {
        const double d = solve(rho, {pc, csi}, 1e-9) - solve(rho, {pc, csi}, 1e-6);
        max_increase = std::max(max_increase, d);
        min_increase = std::min(min_increase, d);
        eps_ok = eps_ok && d > 0.0 && d < 150e3;
      }
    }
  }
  report(3, increasing && ipcsi_ge && eps_ok,
         fmt("B* strictly increasing in rho: %s; IPCSI >= PCSI: %s; B*(1e-9)-B*(1e-6) in [%.1f, %.1f] Hz "
             "(must be > 0 and < 150000)",
             increasing ? "yes" : "no", ipcsi_ge ? "yes" : "no", min_increase, max_increase));
}

void criteria4and5(const SystemConfig& cfg) {
  bool ok4 = true, ok5 = true;
  std::ostringstream d4, d5;
  double worst_spread = 0.0, worst_sum = 0.0;
  int max_outer = 0;
  double last_f = 0.0;
  for (const auto& sc : ex::all_scenarios()) {
    const auto in = default_instance(cfg, sc);
    auto opts = cfg.dinkelbach_options();
    try {
      const auto r = stage2::dinkelbach_allocate(in.vues, in.model, in.bandwidth, opts);
      const auto& tr = r.outer_trace;
      for (std::size_t j = 0; j < tr.size(); ++j) {
        if (tr[j].auxiliary < 0.0 || (j > 0 && tr[j].eta < tr[j - 1].eta)) ok4 = false;
      }
      ok4 = ok4 && !tr.empty() && tr.back().auxiliary <= 1e-2 && static_cast<int>(tr.size()) <= 50;
      max_outer = std::max<int>(max_outer, static_cast<int>(tr.size()));
      last_f = std::max(last_f, tr.empty() ? 1e300 : tr.back().auxiliary);
      double sum = 0.0;
      for (double p : r.powers) sum += p;
      worst_sum = std::max(worst_sum, std::abs(sum - in.model.total_power) / in.model.total_power);
      worst_spread = std::max(worst_spread, r.final_spread);
    } catch (const Error& e) {
      ok4 = ok5 = false;
      d4 << " " << label(sc) << " threw: " << e.what();
    }
  }
  ok5 = ok5 && worst_spread <= 1e-2 && worst_sum <= 1e-12;
  report(4, ok4,
         fmt("eta non-decreasing and F_j >= 0 on all 4 default instances; final F max %.3e (tol 1e-2); "
             "trace length max %d (limit 50)",
             last_f, max_outer) + d4.str());
  report(5, ok5,
         fmt("final h spread max %.3e (tol 1e-2); |sum p - P_B|/P_B max %.3e (tol 1e-12)", worst_spread,
             worst_sum) + d5.str());
}

void criterion6(const SystemConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> pos(0.0, cfg.channel.road_length);
  double worst = 0.0;
  int solved = 0;
  for (int i = 0; i < 20; ++i) {
    const Precoder pc = i % 2 == 0 ? Precoder::mf : Precoder::zf;
    const double chi = (i / 2) % 2 == 0 ? 1.0 : cfg.accuracy;
    const double positions[2] = {pos(rng), pos(rng)};
    const auto vues = make_population(cfg.channel, positions, chi, cfg.rate, cfg.reliability);
    const double bw = 2e5;
    const EffectiveSinrModel model{pc, cfg.antennas, cfg.channel.signal_psd * bw, cfg.channel.noise_psd * bw};
    try {
      const auto r = stage2::dinkelbach_allocate(vues, model, bw, cfg.dinkelbach_options());
      const auto grid = oracle::grid_k2(vues, model, bw, 100000);
      worst = std::max(worst, rel(-std::sqrt(r.max_latency), grid.objective));
      ++solved;
    } catch (const Error& e) {
      std::printf("  instance %d: %s\n", i, e.what());
    }
  }
  const double elapsed = seconds_since(t0);
  report(6, solved == 20 && worst <= 1e-4 && elapsed < 10.0,
         fmt("%d/20 K=2 instances; max rel gap to 1e-5 P_B grid %.3e (tol 1e-4); %.2f s (limit 10 s)", solved,
             worst, elapsed));
}

void criterion7(const SystemConfig& cfg) {
  const std::vector<double> densities{0.025, 0.05, 0.075, 0.1};
  const auto rows = ex::run_twin_timescale(cfg, densities, 1, ex::all_scenarios());
  bool ok = true;
  std::ostringstream detail;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ok = false;
      detail << " " << label(r.scenario) << "@" << r.density << ": " << r.error;
    }
  }
  const auto violations = ex::check_density_latency(rows);
  ok = ok && violations.empty();
  for (const auto& v : violations) detail << " [" << v << "]";
  double gap_lo = 1e300, gap_hi = -1e300;
  for (const auto& mf : rows) {
    if (mf.scenario.precoder != Precoder::mf) continue;
    for (const auto& zf : rows) {
      if (zf.scenario.precoder == Precoder::zf && zf.scenario.csi == mf.scenario.csi && zf.density == mf.density) {
        const double gap_ms = (mf.proposed_max_latency - zf.proposed_max_latency) * 1e3;
        gap_lo = std::min(gap_lo, gap_ms);
        gap_hi = std::max(gap_hi, gap_ms);
      }
    }
  }
  ok = ok && gap_lo >= 0.001 && gap_hi <= 0.05;
  report(7, ok,
         fmt("proposed <= EPA and ZF < MF on %zu rows, %zu violations; MF-ZF proposed gap in [%.4f, %.4f] ms "
             "(band [0.001, 0.05])",
             rows.size(), violations.size(), gap_lo, gap_hi) + detail.str());
}

void criterion8(const SystemConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  mc::McConfig mcfg;
  mcfg.realizations = 10000;
  mcfg.seed = 1;
  mcfg.parallel_streams = cfg.threads;
  const std::vector<int> sweep{50, 100, 200, 300, 400};
  double worst300 = 0.0;
  bool monotone = true;
  std::ostringstream detail;
  for (const auto& sc : ex::all_scenarios()) {
    const auto vues = ex::make_vues(cfg, 0.05, sc.csi, 1);
    if (vues.size() != 10) {
      monotone = false;
    }
    EffectiveSinrModel model{sc.precoder, 300, 10.0, cfg.channel.noise_psd * 2e5};
    const auto rows = mc::tightness_report(vues, model, {}, 2e5, 1e-3, mcfg, sweep,
                                           std::string(ex::to_string(sc.csi)));
    std::vector<double> gap_by_m;
    for (int m : sweep) {
      double g = 0.0;
      for (const auto& r : rows) {
        if (r.antennas == m) g = std::max(g, r.rel_gap);
      }
      gap_by_m.push_back(g);
      if (m == 300) worst300 = std::max(worst300, g);
    }
    // monotone across {50, 100, 200, 400}
    const double g50 = gap_by_m[0], g100 = gap_by_m[1], g200 = gap_by_m[2], g400 = gap_by_m[4];
    const bool mono = g50 > g100 && g100 > g200 && g200 > g400;
    monotone = monotone && mono;
    detail << fmt(" %s max gap M=50/100/200/400: %.4f/%.4f/%.4f/%.4f;", label(sc).c_str(), g50, g100, g200,
                  g400);
  }
  const double elapsed = seconds_since(t0);
  report(8, worst300 <= 0.02 && monotone && elapsed < 60.0,
         fmt("M=300 K=10 n=1e4 max |emp-thm|/thm %.4f (tol 0.02); gap decreasing in M: %s; %.1f s (limit 60 s);",
             worst300, monotone ? "yes" : "no", elapsed) + detail.str());
}

void criterion9() {
  const int m = 300, k = 10;
  mc::McConfig mcfg;
  mcfg.realizations = 100000;
  mcfg.seed = 9;
  struct Case {
    mc::OmegaKind kind;
    double expected;
    const char* name;
  };
  const Case cases[] = {{mc::OmegaKind::beta_mf, 1.0 / m, "Omega_B^MF"},
                        {mc::OmegaKind::inv_gamma_mf, 1.0 / (m - 1), "Omega_G^MF"},
                        {mc::OmegaKind::inv_gamma_zf, 1.0 / (m - k), "Omega_G^ZF"}};
  bool ok = true;
  std::string detail;
  std::uint64_t key = 0;
  for (const auto& c : cases) {
    const auto e = mc::estimate(mcfg, key++, [&](mc::Rng& rng) { return mc::sample_omega(c.kind, m, k, rng).value; });
    const double z = std::abs(e.mean - c.expected) / e.std_error;
    ok = ok && z <= 4.0;
    detail += fmt(" %s z=%.2f;", c.name, z);
  }
  report(9, ok, "sample means within 4 SE at n=1e5, M=300, K=10:" + detail);
}

void criterion10(const SystemConfig& cfg) {
  // EPA operating point of the antenna-sweep figures: rho = 0.05, P_B = 10 W, B = 200 kHz.
  double worst = 0.0;
  std::string where;
  const double sigma2 = cfg.channel.noise_psd * 2e5;
  for (const auto& sc : ex::all_scenarios()) {
    const auto vues = ex::make_vues(cfg, 0.05, sc.csi, 1);
    const int k = static_cast<int>(vues.size());
    const EffectiveSinrModel model{sc.precoder, 100000, 10.0, sigma2};
    for (const auto& v : vues) {
      const double p = 10.0 / k;
      const double g = effective_sinr(model, v, p, k);
      const double inf = asymptotic_sinr(v, p, sigma2);
      const double ref = p * v.accuracy * v.pathloss / sigma2;
      if (rel(inf, ref) > 1e-14) worst = 1e300;
      if (rel(g, inf) > worst) {
        worst = rel(g, inf);
        where = fmt("%s at %.1f m", label(sc).c_str(), v.position);
      }
    }
  }
  // Diagnostic: the deviation shrinks like P_B beta / (M sigma^2); find the
  // array size at which every VUE is inside 1%.
  int needed = 0;
  for (int m = 100000; m <= 100000000 && needed == 0; m *= 10) {
    double dev = 0.0;
    for (const auto& sc : ex::all_scenarios()) {
      const auto vues = ex::make_vues(cfg, 0.05, sc.csi, 1);
      const int k = static_cast<int>(vues.size());
      const EffectiveSinrModel model{sc.precoder, m, 10.0, sigma2};
      for (const auto& v : vues) {
        dev = std::max(dev, rel(effective_sinr(model, v, 10.0 / k, k), asymptotic_sinr(v, 10.0 / k, sigma2)));
      }
    }
    if (dev <= 0.01) needed = m;
  }
  report(10, worst <= 0.01,
         fmt("M=1e5 effective SINR vs p chi beta / sigma^2, all VUEs, both precoders and CSI: max rel dev %.4f "
             "(tol 0.01), worst %s; all VUEs within 1%% from M=%d",
             worst, where.c_str(), needed));
}

void criterion11(const SystemConfig& cfg) {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long samples = 0, bad_first = 0, bad_second = 0, bad_below_m = 0;
  for (const auto& sc : ex::all_scenarios()) {
    const auto in = default_instance(cfg, sc);
    const int users = static_cast<int>(in.vues.size());
    const double pb = in.model.total_power;
    for (int s = 0; s < 100; ++s) {
      const auto& v = in.vues[static_cast<std::size_t>(s) % in.vues.size()];
      double p = 0.0, r = 0.0;
      // feasible point: resample until the rate is achievable
      for (;;) {
        p = pb * (0.01 + 0.98 * u(rng));
        try {
          r = stage2::ratio_parts(in.model, v, p, users, in.bandwidth).ratio();
          break;
        } catch (const InfeasibleRateError&) {
        }
      }
      // eta < 0 on the superlevel set {eta <= f/g}
      const double eta = r * (1.0 + 3.0 * u(rng));
      const double step = 1e-4 * pb;
      auto h = [&](double q) { return stage2::h_value(in.model, v, q, users, in.bandwidth, eta); };
      const double h0 = h(p - step), h1 = h(p), h2 = h(p + step);
      bad_first += (h2 - h1 > 0.0 && h1 - h0 > 0.0) ? 0 : 1;
      if (h2 - 2.0 * h1 + h0 > 1e-9 * std::abs(h1)) {
        ++bad_second;
        // concavity of g and h for MF needs Gamma < M - 2
        if (effective_sinr(in.model, v, p, users) < in.model.antennas - 2.0) ++bad_below_m;
      }
      ++samples;
    }
  }
  report(11, bad_first == 0 && bad_second == 0,
         fmt("%ld samples (100 per default instance, p in [0.01, 0.99] P_B) with eta <= f/g < 0: %ld "
             "non-positive first differences, %ld second differences above 1e-9|h| slack (%ld of them with "
             "Gamma < M - 2)",
             samples, bad_first, bad_second, bad_below_m));
}

void criterion12(SystemConfig cfg) {
  cfg.densities = {0.025, 0.05};
  cfg.mc_realizations = 500;
  cfg.antenna_sweep = {100, 300};
  bool ok = true;
  std::string differing;
  auto threaded = cfg;
  threaded.threads = 4;
  for (ex::Kind kind : ex::all_kinds()) {
    const auto a = ex::run(kind, cfg, 42, ex::all_scenarios());
    const auto b = ex::run(kind, cfg, 42, ex::all_scenarios());
    const auto c = ex::run(kind, threaded, 42, ex::all_scenarios());
    for (std::size_t i = 0; i < a.tables.size(); ++i) {
      const auto text = csv::to_string(a.tables[i].table);
      if (text != csv::to_string(b.tables[i].table) || text != csv::to_string(c.tables[i].table)) {
        ok = false;
        differing += " " + std::string(ex::to_string(kind));
      }
    }
  }
  report(12, ok, "all 8 experiment kinds byte-identical across repeats and thread counts" +
                     (differing.empty() ? std::string() : ", differing:" + differing));
}

}  // namespace

int main() {
  const SystemConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2(cfg);
  criterion3(cfg);
  criteria4and5(cfg);
  criterion6(cfg);
  criterion7(cfg);
  criterion8(cfg);
  criterion9();
  criterion10(cfg);
  criterion11(cfg);
  criterion12(cfg);
  std::printf("%d criteria failed; total %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
