#include "twinrrm/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <thread>

#include "twinrrm/errors.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/montecarlo.hpp"

namespace twinrrm::experiments {
namespace {

using csv::Cell;

constexpr std::array<Kind, 8> kKinds{
    Kind::stage1_sweep_density, Kind::stage1_sweep_reliability, Kind::allocate,
    Kind::sweep_density_latency, Kind::sweep_power_latency, Kind::tradeoff_surface,
    Kind::mc_validate, Kind::convergence_trace};

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, int threads, const Body& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        body(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

Cell str(std::string_view s) { return std::string(s); }
Cell num(double v) { return v; }
Cell integer(std::int64_t v) { return v; }

std::string status_of(const std::exception& e) { return std::string("error: ") + e.what(); }

stage2::DinkelbachOptions solver_options(const SystemConfig& cfg, double total_power) {
  auto o = cfg.dinkelbach_options();
  if (cfg.mu0_fraction > 0.0) {
    o.inner.initial_step = cfg.mu0_fraction * total_power;
  }
  return o;
}

struct Instance {
  std::vector<Vue> vues;
  stage1::Stage1Result stage1;
  EffectiveSinrModel model;
};

Instance prepare(const SystemConfig& cfg, double density, const Scenario& sc, std::uint64_t seed) {
  Instance in;
  in.vues = make_vues(cfg, density, sc.csi, seed);
  const auto inputs = stage1::Stage1Inputs::from_population(in.vues, density, cfg.delta,
                                                            sc.precoder, cfg.antennas);
  in.stage1 = stage1::optimal_bandwidth(inputs, cfg.channel, cfg.traffic);
  in.model = stage2_model(cfg, sc.precoder, in.stage1.total_power, in.stage1.bandwidth);
  return in;
}

const std::vector<std::string> kStage1DensityColumns{
    "delta", "density", "users", "precoder", "csi", "gamma_w", "bandwidth_hz",
    "total_power_w", "coherence_time_s", "worst_latency_s", "status"};

csv::Table stage1_sweep_density(const SystemConfig& cfg, std::span<const Scenario> scenarios) {
  struct Point {
    double delta;
    double density;
    std::string precoder;
    Scenario sc;
    bool asymptotic;
  };
  std::vector<Point> points;
  std::vector<CsiMode> csis;
  for (const auto& sc : scenarios) {
    if (std::find(csis.begin(), csis.end(), sc.csi) == csis.end()) {
      csis.push_back(sc.csi);
    }
  }
  for (double delta : cfg.deltas) {
    for (double rho : cfg.stage1_densities) {
      for (const auto& sc : scenarios) {
        points.push_back({delta, rho, std::string(to_string(sc.precoder)), sc, false});
      }
      for (CsiMode csi : csis) {
        points.push_back({delta, rho, "asymptotic", {Precoder::zf, csi}, true});
      }
    }
  }
  std::vector<std::vector<Cell>> rows(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    std::vector<Cell> row{num(pt.delta), num(pt.density), num(pt.density * cfg.traffic.road_length),
                          str(pt.precoder), str(to_string(pt.sc.csi))};
    try {
      auto inputs = stage1_inputs(cfg, pt.density, pt.sc.precoder, pt.sc.csi);
      inputs.delta = pt.delta;
      const double gw = pt.asymptotic
                            ? stage1::worst_case_sinr_asymptotic(inputs, cfg.channel, cfg.traffic)
                            : stage1::worst_case_sinr(inputs, cfg.channel, cfg.traffic);
      const auto r = stage1::bandwidth_for_worst_sinr(inputs, gw, cfg.channel, cfg.traffic);
      for (double v : {r.gamma_w, r.bandwidth, r.total_power, r.coherence_time, r.worst_latency}) {
        row.push_back(num(v));
      }
      row.push_back(str("ok"));
    } catch (const Error& e) {
      for (int k = 0; k < 5; ++k) {
        row.push_back(num(std::nan("")));
      }
      row.push_back(status_of(e));
    }
    rows[i] = std::move(row);
  });
  csv::Table t{kStage1DensityColumns, {}};
  for (auto& r : rows) {
    t.add_row(std::move(r));
  }
  return t;
}

csv::Table stage1_sweep_reliability(const SystemConfig& cfg, std::span<const Scenario> scenarios) {
  csv::Table t{{"density", "reliability", "precoder", "csi", "gamma_w", "bandwidth_hz",
                "total_power_w", "status"},
               {}};
  for (double rho : cfg.reliability_densities) {
    for (double eps : cfg.reliabilities) {
      for (const auto& sc : scenarios) {
        std::vector<Cell> row{num(rho), num(eps), str(to_string(sc.precoder)), str(to_string(sc.csi))};
        try {
          auto inputs = stage1_inputs(cfg, rho, sc.precoder, sc.csi);
          inputs.worst_reliability = eps;
          const auto r = stage1::optimal_bandwidth(inputs, cfg.channel, cfg.traffic);
          row.insert(row.end(), {num(r.gamma_w), num(r.bandwidth), num(r.total_power), str("ok")});
        } catch (const Error& e) {
          row.insert(row.end(), {num(std::nan("")), num(std::nan("")), num(std::nan("")), status_of(e)});
        }
        t.add_row(std::move(row));
      }
    }
  }
  return t;
}

csv::Table allocate(const SystemConfig& cfg, std::uint64_t seed, std::span<const Scenario> scenarios) {
  csv::Table t{{"density", "precoder", "csi", "vue", "position_m", "pathloss", "bandwidth_hz",
                "total_power_w", "power_w", "latency_s", "epa_power_w", "epa_latency_s"},
               {}};
  const double rho = cfg.instance_density;
  for (const auto& sc : scenarios) {
    const Instance in = prepare(cfg, rho, sc, seed);
    const auto opt = stage2::dinkelbach_allocate(in.vues, in.model, in.stage1.bandwidth,
                                                 solver_options(cfg, in.model.total_power));
    const auto epa = stage2::epa_allocate(in.vues, in.model, in.stage1.bandwidth);
    for (std::size_t k = 0; k < in.vues.size(); ++k) {
      t.add_row({num(rho), str(to_string(sc.precoder)), str(to_string(sc.csi)),
                 integer(static_cast<std::int64_t>(k)), num(in.vues[k].position),
                 num(in.vues[k].pathloss), num(in.stage1.bandwidth), num(in.model.total_power),
                 num(opt.powers[k]), num(opt.latencies[k]), num(epa.powers[k]),
                 num(epa.latencies[k])});
    }
  }
  return t;
}

csv::Table run_rows_table(std::span<const RunRow> rows) {
  csv::Table t{{"density", "users", "precoder", "csi", "bandwidth_hz", "total_power_w",
                "proposed_max_latency_s", "epa_max_latency_s", "eta_star", "outer_iterations",
                "inner_iterations", "degraded", "status"},
               {}};
  for (const auto& r : rows) {
    t.add_row({num(r.density), integer(r.users), str(to_string(r.scenario.precoder)),
               str(to_string(r.scenario.csi)), num(r.bandwidth), num(r.total_power),
               num(r.proposed_max_latency), num(r.epa_max_latency), num(r.eta_star),
               integer(r.outer_iterations), integer(r.inner_iterations),
               integer(r.degraded ? 1 : 0), r.error.empty() ? str("ok") : str(r.error)});
  }
  return t;
}

csv::Table sweep_power_latency(const SystemConfig& cfg, std::uint64_t seed,
                               std::span<const Scenario> scenarios) {
  struct Point {
    double multiplier;
    Scenario sc;
  };
  std::vector<Point> points;
  for (double m : cfg.power_multipliers) {
    for (const auto& sc : scenarios) {
      points.push_back({m, sc});
    }
  }
  const double rho = cfg.power_density;
  std::vector<std::vector<Cell>> rows(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    std::vector<Cell> row{num(pt.multiplier), str(to_string(pt.sc.precoder)), str(to_string(pt.sc.csi))};
    try {
      Instance in = prepare(cfg, rho, pt.sc, seed);
      in.model.total_power = pt.multiplier * in.stage1.total_power;
      const auto opt = stage2::dinkelbach_allocate(in.vues, in.model, in.stage1.bandwidth,
                                                   solver_options(cfg, in.model.total_power));
      const auto epa = stage2::epa_allocate(in.vues, in.model, in.stage1.bandwidth);
      row.insert(row.end(), {num(in.model.total_power), num(in.stage1.bandwidth),
                             num(opt.max_latency), num(epa.max_latency), str("ok")});
    } catch (const Error& e) {
      const Cell nan = num(std::nan(""));
      row.insert(row.end(), {nan, nan, nan, nan, status_of(e)});
    }
    rows[i] = std::move(row);
  });
  csv::Table t{{"multiplier", "precoder", "csi", "total_power_w", "bandwidth_hz",
                "proposed_max_latency_s", "epa_max_latency_s", "status"},
               {}};
  for (auto& r : rows) {
    t.add_row(std::move(r));
  }
  return t;
}

// Index of the VUE with the smallest path-loss coefficient.
std::size_t weakest(std::span<const Vue> vues) {
  return static_cast<std::size_t>(
      std::min_element(vues.begin(), vues.end(),
                       [](const Vue& a, const Vue& b) { return a.pathloss < b.pathloss; }) -
      vues.begin());
}

csv::Table tradeoff_surface(const SystemConfig& cfg, std::uint64_t seed,
                            std::span<const Scenario> scenarios) {
  csv::Table t{{"precoder", "csi", "vue", "latency_s", "reliability", "theorem1_rate_bps",
                "shannon_rate_bps"},
               {}};
  const double rho = cfg.tradeoff_density;
  const double bw = cfg.tradeoff_bandwidth;
  for (const auto& sc : scenarios) {
    auto vues = make_vues(cfg, rho, sc.csi, seed);
    const auto model = stage2_model(cfg, sc.precoder, cfg.tradeoff_power, bw);
    const int users = static_cast<int>(vues.size());
    const std::size_t k = weakest(vues);
    const double p = cfg.tradeoff_power / users;
    const double gamma = effective_sinr(model, vues[k], p, users);
    const double shannon = bw * std::log2(1.0 + gamma);
    for (double eps : cfg.tradeoff_reliabilities) {
      for (double lat : cfg.tradeoff_latencies) {
        t.add_row({str(to_string(sc.precoder)), str(to_string(sc.csi)),
                   integer(static_cast<std::int64_t>(k)), num(lat), num(eps),
                   num(fbl::na_rate(gamma, lat, eps, bw)), num(shannon)});
      }
    }
  }
  return t;
}

csv::Table mc_validate(const SystemConfig& cfg, std::uint64_t seed,
                       std::span<const Scenario> scenarios) {
  csv::Table t{{"M", "precoder", "csi", "vue", "theorem1_rate", "empirical_rate", "stderr",
                "rel_gap"},
               {}};
  mc::McConfig mcfg;
  mcfg.realizations = cfg.mc_realizations;
  mcfg.seed = seed;
  mcfg.parallel_streams = cfg.threads;
  for (const auto& sc : scenarios) {
    const auto vues = make_vues(cfg, cfg.mc_density, sc.csi, seed);
    const auto model = stage2_model(cfg, sc.precoder, cfg.mc_power, cfg.mc_bandwidth);
    const auto rows = mc::tightness_report(vues, model, {}, cfg.mc_bandwidth, cfg.mc_latency,
                                           mcfg, cfg.antenna_sweep, std::string(to_string(sc.csi)));
    for (const auto& r : rows) {
      t.add_row({integer(r.antennas), str(to_string(r.precoder)), str(r.csi), integer(r.vue),
                 num(r.theorem1_rate), num(r.empirical_rate), num(r.std_error), num(r.rel_gap)});
    }
  }
  return t;
}

std::vector<Output> convergence_trace(const SystemConfig& cfg, std::uint64_t seed,
                                      std::span<const Scenario> scenarios) {
  csv::Table outer{{"precoder", "csi", "j", "eta_j", "F_j"}, {}};
  csv::Table inner{{"precoder", "csi", "j", "i", "max_h", "min_h", "mu_i"}, {}};
  for (const auto& sc : scenarios) {
    const Instance in = prepare(cfg, cfg.instance_density, sc, seed);
    auto opts = solver_options(cfg, in.model.total_power);
    opts.inner.record_trace = true;
    const auto res = stage2::dinkelbach_allocate(in.vues, in.model, in.stage1.bandwidth, opts);
    const Cell p = str(to_string(sc.precoder));
    const Cell c = str(to_string(sc.csi));
    for (const auto& e : res.outer_trace) {
      outer.add_row({p, c, integer(e.iteration), num(e.eta), num(e.auxiliary)});
    }
    for (std::size_t j = 0; j < res.inner_traces.size(); ++j) {
      for (const auto& e : res.inner_traces[j]) {
        inner.add_row({p, c, integer(static_cast<std::int64_t>(j)), integer(e.iteration),
                       num(e.max_h), num(e.min_h), num(e.step)});
      }
    }
  }
  return {{"", std::move(outer)}, {"_inner", std::move(inner)}};
}

}  // namespace

std::string_view to_string(CsiMode csi) {
  return csi == CsiMode::perfect ? "perfect" : "imperfect";
}

std::vector<Scenario> make_scenarios(std::span<const Precoder> precoders,
                                     std::span<const CsiMode> csis) {
  std::vector<Scenario> out;
  for (Precoder p : {Precoder::mf, Precoder::zf}) {
    if (std::find(precoders.begin(), precoders.end(), p) == precoders.end()) continue;
    for (CsiMode c : {CsiMode::perfect, CsiMode::imperfect}) {
      if (std::find(csis.begin(), csis.end(), c) == csis.end()) continue;
      out.push_back({p, c});
    }
  }
  return out;
}

std::vector<Scenario> all_scenarios() {
  constexpr std::array p{Precoder::mf, Precoder::zf};
  constexpr std::array c{CsiMode::perfect, CsiMode::imperfect};
  return make_scenarios(p, c);
}

double accuracy_for(const SystemConfig& cfg, CsiMode csi) {
  return csi == CsiMode::perfect ? 1.0 : cfg.accuracy;
}

std::uint64_t population_seed(std::uint64_t seed, double density) {
  return mc::splitmix64(mc::splitmix64(seed) ^ std::bit_cast<std::uint64_t>(density));
}

std::vector<Vue> make_vues(const SystemConfig& cfg, double density, CsiMode csi,
                           std::uint64_t seed) {
  const int users = num_vues(cfg.traffic, density);
  const auto positions =
      place_vues(cfg.channel, users, population_seed(seed, density), cfg.placement);
  return make_population(cfg.channel, positions, accuracy_for(cfg, csi), cfg.rate,
                         cfg.reliability);
}

stage1::Stage1Inputs stage1_inputs(const SystemConfig& cfg, double density, Precoder precoder,
                                   CsiMode csi) {
  stage1::Stage1Inputs in;
  in.density = density;
  in.delta = cfg.delta;
  in.worst_reliability = cfg.reliability;
  in.worst_rate = cfg.rate;
  in.accuracy_threshold = accuracy_for(cfg, csi);
  in.precoder = precoder;
  in.antennas = cfg.antennas;
  return in;
}

EffectiveSinrModel stage2_model(const SystemConfig& cfg, Precoder precoder, double total_power,
                                double bandwidth) {
  EffectiveSinrModel m;
  m.precoder = precoder;
  m.antennas = cfg.antennas;
  m.total_power = total_power;
  m.noise_power = cfg.channel.noise_psd * bandwidth;
  return m;
}

std::vector<RunRow> run_twin_timescale(const SystemConfig& cfg, std::span<const double> densities,
                                       std::uint64_t seed, std::span<const Scenario> scenarios) {
  std::vector<RunRow> rows(densities.size() * scenarios.size());
  parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
    RunRow& row = rows[i];
    row.density = densities[i / scenarios.size()];
    row.scenario = scenarios[i % scenarios.size()];
    try {
      row.users = num_vues(cfg.traffic, row.density);
      const Instance in = prepare(cfg, row.density, row.scenario, seed);
      row.bandwidth = in.stage1.bandwidth;
      row.total_power = in.stage1.total_power;
      const auto opt = stage2::dinkelbach_allocate(in.vues, in.model, in.stage1.bandwidth,
                                                   solver_options(cfg, in.model.total_power));
      const auto epa = stage2::epa_allocate(in.vues, in.model, in.stage1.bandwidth);
      row.proposed_max_latency = opt.max_latency;
      row.epa_max_latency = epa.max_latency;
      row.eta_star = opt.eta_star;
      row.outer_iterations = opt.outer_iterations;
      row.inner_iterations = opt.total_inner_iterations;
      row.degraded = opt.degraded;
    } catch (const Error& e) {
      row.error = status_of(e);
      row.proposed_max_latency = row.epa_max_latency = row.eta_star = std::nan("");
    }
  });
  return rows;
}

std::vector<std::string> check_density_latency(std::span<const RunRow> rows) {
  std::vector<std::string> out;
  auto label = [](const RunRow& r) {
    std::ostringstream os;
    os << "density " << r.density << " " << to_string(r.scenario.precoder) << "/"
       << to_string(r.scenario.csi);
    return os.str();
  };
  for (const auto& r : rows) {
    if (r.error.empty() && !(r.proposed_max_latency <= r.epa_max_latency)) {
      out.push_back(label(r) + ": proposed max latency exceeds EPA");
    }
  }
  for (const auto& zf : rows) {
    if (zf.scenario.precoder != Precoder::zf || !zf.error.empty()) continue;
    for (const auto& mf : rows) {
      if (mf.scenario.precoder != Precoder::mf || mf.scenario.csi != zf.scenario.csi ||
          mf.density != zf.density || !mf.error.empty()) {
        continue;
      }
      if (!(zf.proposed_max_latency < mf.proposed_max_latency)) {
        out.push_back(label(zf) + ": ZF proposed latency not below MF");
      }
      if (!(zf.epa_max_latency < mf.epa_max_latency)) {
        out.push_back(label(zf) + ": ZF EPA latency not below MF");
      }
    }
  }
  return out;
}

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::stage1_sweep_density: return "stage1-sweep-density";
    case Kind::stage1_sweep_reliability: return "stage1-sweep-reliability";
    case Kind::allocate: return "allocate";
    case Kind::sweep_density_latency: return "sweep-density-latency";
    case Kind::sweep_power_latency: return "sweep-power-latency";
    case Kind::tradeoff_surface: return "tradeoff-surface";
    case Kind::mc_validate: return "mc-validate";
    case Kind::convergence_trace: return "convergence-trace";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : kKinds) {
    if (to_string(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

std::span<const Kind> all_kinds() { return kKinds; }

bool is_sweep(Kind kind) { return kind != Kind::allocate && kind != Kind::convergence_trace; }

Result run(Kind kind, const SystemConfig& cfg, std::uint64_t seed,
           std::span<const Scenario> scenarios) {
  cfg.validate();
  if (scenarios.empty()) {
    throw ConfigError("no precoder/CSI combination selected");
  }
  Result res;
  switch (kind) {
    case Kind::stage1_sweep_density:
      res.tables.push_back({"", stage1_sweep_density(cfg, scenarios)});
      break;
    case Kind::stage1_sweep_reliability:
      res.tables.push_back({"", stage1_sweep_reliability(cfg, scenarios)});
      break;
    case Kind::allocate:
      res.tables.push_back({"", allocate(cfg, seed, scenarios)});
      break;
    case Kind::sweep_density_latency: {
      const auto rows = run_twin_timescale(cfg, cfg.densities, seed, scenarios);
      res.violations = check_density_latency(rows);
      res.tables.push_back({"", run_rows_table(rows)});
      break;
    }
    case Kind::sweep_power_latency:
      res.tables.push_back({"", sweep_power_latency(cfg, seed, scenarios)});
      break;
    case Kind::tradeoff_surface:
      res.tables.push_back({"", tradeoff_surface(cfg, seed, scenarios)});
      break;
    case Kind::mc_validate:
      res.tables.push_back({"", mc_validate(cfg, seed, scenarios)});
      break;
    case Kind::convergence_trace:
      res.tables = convergence_trace(cfg, seed, scenarios);
      break;
  }
  return res;
}

}  // namespace twinrrm::experiments
