#include "twinrrm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string_view>

#include "twinrrm/errors.hpp"
#include "twinrrm/log.hpp"

namespace twinrrm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct BadValue {
  std::string reason;
};

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw BadValue{"expected a number, got '" + std::string(s) + "'"};
  }
  return v;
}

long to_integer(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw BadValue{"expected an integer, got '" + std::string(s) + "'"};
  }
  return v;
}

template <typename T, typename Parse>
std::vector<T> to_list(std::string_view s, Parse parse) {
  std::vector<T> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(static_cast<T>(parse(s.substr(0, comma))));
    if (comma == std::string_view::npos) {
      break;
    }
    s.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(SystemConfig&, std::string_view)>;

Setter real(double SystemConfig::*field) {
  return [field](SystemConfig& c, std::string_view v) { c.*field = to_double(v); };
}

Setter reals(std::vector<double> SystemConfig::*field) {
  return [field](SystemConfig& c, std::string_view v) { c.*field = to_list<double>(v, to_double); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"bs_distance_m", [](SystemConfig& c, std::string_view v) { c.channel.bs_distance = to_double(v); }},
      {"road_length_m",
       [](SystemConfig& c, std::string_view v) {
         c.channel.road_length = to_double(v);
         c.traffic.road_length = c.channel.road_length;
       }},
      {"max_density", [](SystemConfig& c, std::string_view v) { c.traffic.max_density = to_double(v); }},
      {"free_flow_speed_kmh",
       [](SystemConfig& c, std::string_view v) { c.traffic.free_flow_speed = to_double(v) / 3.6; }},
      {"carrier_frequency_hz",
       [](SystemConfig& c, std::string_view v) { c.traffic.carrier_frequency = to_double(v); }},
      {"gain_constant", [](SystemConfig& c, std::string_view v) { c.channel.gain_constant = to_double(v); }},
      {"pathloss_exponent",
       [](SystemConfig& c, std::string_view v) { c.channel.pathloss_exponent = to_double(v); }},
      {"noise_psd_dbm_hz",
       [](SystemConfig& c, std::string_view v) { c.channel.noise_psd = dbm_to_watts(to_double(v)); }},
      {"signal_psd_dbm_hz",
       [](SystemConfig& c, std::string_view v) { c.channel.signal_psd = dbm_to_watts(to_double(v)); }},
      {"accuracy", real(&SystemConfig::accuracy)},
      {"antennas", [](SystemConfig& c, std::string_view v) { c.antennas = static_cast<int>(to_integer(v)); }},
      {"delta", real(&SystemConfig::delta)},
      {"rate_bps", real(&SystemConfig::rate)},
      {"reliability", real(&SystemConfig::reliability)},
      {"placement",
       [](SystemConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "uniform") {
           c.placement = PlacementMode::uniform_random;
         } else if (v == "equispaced") {
           c.placement = PlacementMode::equispaced;
         } else {
           throw BadValue{"expected 'uniform' or 'equispaced', got '" + std::string(v) + "'"};
         }
       }},
      {"zeta_p", real(&SystemConfig::zeta_p)},
      {"zeta_s", real(&SystemConfig::zeta_s)},
      {"eta0", real(&SystemConfig::eta0)},
      {"mu0_fraction", real(&SystemConfig::mu0_fraction)},
      {"max_outer_iterations",
       [](SystemConfig& c, std::string_view v) { c.max_outer_iterations = static_cast<int>(to_integer(v)); }},
      {"max_inner_iterations",
       [](SystemConfig& c, std::string_view v) { c.max_inner_iterations = to_integer(v); }},
      {"densities", reals(&SystemConfig::densities)},
      {"stage1_densities", reals(&SystemConfig::stage1_densities)},
      {"deltas", reals(&SystemConfig::deltas)},
      {"reliabilities", reals(&SystemConfig::reliabilities)},
      {"reliability_densities", reals(&SystemConfig::reliability_densities)},
      {"power_multipliers", reals(&SystemConfig::power_multipliers)},
      {"power_density", real(&SystemConfig::power_density)},
      {"antenna_sweep",
       [](SystemConfig& c, std::string_view v) { c.antenna_sweep = to_list<int>(v, to_integer); }},
      {"mc_density", real(&SystemConfig::mc_density)},
      {"mc_bandwidth_hz", real(&SystemConfig::mc_bandwidth)},
      {"mc_latency_s", real(&SystemConfig::mc_latency)},
      {"mc_power_w", real(&SystemConfig::mc_power)},
      {"mc_realizations",
       [](SystemConfig& c, std::string_view v) { c.mc_realizations = to_integer(v); }},
      {"tradeoff_density", real(&SystemConfig::tradeoff_density)},
      {"tradeoff_bandwidth_hz", real(&SystemConfig::tradeoff_bandwidth)},
      {"tradeoff_power_w", real(&SystemConfig::tradeoff_power)},
      {"tradeoff_latencies_s", reals(&SystemConfig::tradeoff_latencies)},
      {"tradeoff_reliabilities", reals(&SystemConfig::tradeoff_reliabilities)},
      {"instance_density", real(&SystemConfig::instance_density)},
      {"threads", [](SystemConfig& c, std::string_view v) { c.threads = static_cast<int>(to_integer(v)); }},
  };
  return table;
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

stage2::DinkelbachOptions SystemConfig::dinkelbach_options() const {
  stage2::DinkelbachOptions o;
  o.tolerance = zeta_p;
  o.initial_eta = eta0;
  o.max_outer_iterations = max_outer_iterations;
  o.inner.tolerance = zeta_s;
  o.inner.max_iterations = max_inner_iterations;
  return o;
}

void SystemConfig::validate() const {
  try {
    channel.validate();
    traffic.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(std::string("config: ") + what);
    }
  };
  require(channel.road_length == traffic.road_length, "road length mismatch");
  require(accuracy > 0.0 && accuracy <= 1.0, "accuracy must lie in (0, 1]");
  require(antennas >= 2, "antennas must be >= 2");
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  require(rate > 0.0, "rate_bps must be positive");
  require(reliability > 0.0 && reliability < 0.5, "reliability must lie in (0, 0.5)");
  require(zeta_p > 0.0 && zeta_s > 0.0, "zeta_p and zeta_s must be positive");
  require(eta0 < 0.0, "eta0 must be negative");
  require(mu0_fraction >= 0.0 && mu0_fraction < 1.0, "mu0_fraction must lie in [0, 1)");
  require(max_outer_iterations > 0 && max_inner_iterations > 0, "iteration caps must be positive");
  require(mc_realizations >= 1, "mc_realizations must be >= 1");
  require(mc_bandwidth > 0.0 && mc_latency > 0.0 && mc_power > 0.0,
          "mc_bandwidth_hz, mc_latency_s and mc_power_w must be positive");
  require(tradeoff_bandwidth > 0.0 && tradeoff_power > 0.0,
          "tradeoff_bandwidth_hz and tradeoff_power_w must be positive");
  require(threads >= 1, "threads must be >= 1");
  for (int m : antenna_sweep) {
    require(m >= 2, "antenna_sweep entries must be >= 2");
  }
  for (double e : reliabilities) {
    require(e > 0.0 && e < 0.5, "reliabilities must lie in (0, 0.5)");
  }
  for (double e : tradeoff_reliabilities) {
    require(e > 0.0 && e < 0.5, "tradeoff_reliabilities must lie in (0, 0.5)");
  }
  for (const auto* list : {&densities, &stage1_densities, &reliability_densities, &deltas,
                           &power_multipliers, &tradeoff_latencies}) {
    for (double v : *list) {
      require(v > 0.0, "list entries must be positive");
    }
  }
}

SystemConfig parse_config(const std::string& text, const std::string& origin) {
  SystemConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const BadValue& bad) {
      throw ConfigError(where + ": " + std::string(key) + ": " + bad.reason);
    }
  }
  if (cfg.channel.pathloss_exponent <= 2.0) {
    log::warn("config: pathloss_exponent <= 2 is unusual for a vehicular channel");
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

SystemConfig load_default_config() {
  if (const char* dir = std::getenv("TWINRRM_CONFIG_DIR"); dir != nullptr && *dir != '\0') {
    const std::filesystem::path p = std::filesystem::path(dir) / "default.conf";
    if (std::filesystem::exists(p)) {
      return load_config(p);
    }
  }
  return SystemConfig{};
}

}  // namespace twinrrm
