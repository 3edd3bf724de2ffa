// Command-line front end: one subcommand per experiment kind.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "twinrrm/config.hpp"
#include "twinrrm/errors.hpp"
#include "twinrrm/experiments.hpp"

namespace {

namespace ex = twinrrm::experiments;
namespace fs = std::filesystem;

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  if (suffix.empty()) {
    return out;
  }
  fs::path p = out;
  p.replace_filename(out.stem().string() + suffix + out.extension().string());
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-timescale V2I URLLC resource allocation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  std::string precoder = "both";
  std::string csi = "both";
  std::optional<int> threads;

  app.option_defaults()->always_capture_default();
  app.add_option("--config", config_path,
                 "Config file (key = value); defaults to $TWINRRM_CONFIG_DIR/default.conf");
  app.add_option("--out", out_path, "Output CSV path (default: <subcommand>.csv)");
  app.add_option("--seed", seed, "Seed for VUE placement and Monte Carlo draws");
  app.add_option("--precoder", precoder, "Precoder selection")
      ->check(CLI::IsMember({"mf", "zf", "both"}));
  app.add_option("--csi", csi, "CSI selection")->check(CLI::IsMember({"perfect", "imperfect", "both"}));
  app.add_option("--threads", threads, "Worker threads (overrides the config)")
      ->check(CLI::PositiveNumber);

  std::vector<std::pair<ex::Kind, CLI::App*>> subs;
  for (ex::Kind kind : ex::all_kinds()) {
    auto* sub = app.add_subcommand(std::string(ex::to_string(kind)));
    sub->fallthrough();
    subs.emplace_back(kind, sub);
  }
  subs[0].second->description("Stage-1 bandwidth against road density");
  subs[1].second->description("Stage-1 bandwidth against the reliability target");
  subs[2].second->description("Per-VUE powers and latencies for one instance");
  subs[3].second->description("Max latency against density, proposed and equal power");
  subs[4].second->description("Max latency against total power");
  subs[5].second->description("Rate against latency and reliability for one VUE");
  subs[6].second->description("Closed-form ergodic rate against Monte Carlo over M");
  subs[7].second->description("Dinkelbach and equalizer iterates for one instance");

  CLI11_PARSE(app, argc, argv);

  ex::Kind kind = subs[0].first;
  for (const auto& [k, sub] : subs) {
    if (sub->parsed()) {
      kind = k;
    }
  }

  std::vector<twinrrm::Precoder> precoders;
  if (precoder != "zf") precoders.push_back(twinrrm::Precoder::mf);
  if (precoder != "mf") precoders.push_back(twinrrm::Precoder::zf);
  std::vector<ex::CsiMode> csis;
  if (csi != "imperfect") csis.push_back(ex::CsiMode::perfect);
  if (csi != "perfect") csis.push_back(ex::CsiMode::imperfect);
  const auto scenarios = ex::make_scenarios(precoders, csis);

  twinrrm::SystemConfig cfg;
  try {
    cfg = config_path.empty() ? twinrrm::load_default_config() : twinrrm::load_config(config_path);
    if (threads) {
      cfg.threads = *threads;
    }
    cfg.validate();
  } catch (const twinrrm::ConfigError& e) {
    std::cerr << "twinrrm: " << e.what() << '\n';
    return kExitConfig;
  }

  ex::Result result;
  try {
    result = ex::run(kind, cfg, seed, scenarios);
  } catch (const twinrrm::ConfigError& e) {
    std::cerr << "twinrrm: " << e.what() << '\n';
    return kExitConfig;
  } catch (const twinrrm::Error& e) {
    std::cerr << "twinrrm: " << ex::to_string(kind) << ": " << e.what() << '\n';
    return kExitSolver;
  }

  const fs::path out = out_path.empty() ? fs::path(std::string(ex::to_string(kind)) + ".csv")
                                        : fs::path(out_path);
  try {
    for (const auto& t : result.tables) {
      const fs::path p = with_suffix(out, t.suffix);
      twinrrm::csv::emit_csv(t.table, p);
      std::cout << p.string() << '\n';
    }
  } catch (const twinrrm::Error& e) {
    std::cerr << "twinrrm: " << e.what() << '\n';
    return kExitIo;
  }
  for (const auto& v : result.violations) {
    std::cerr << "twinrrm: violation: " << v << '\n';
  }
  return 0;
}
