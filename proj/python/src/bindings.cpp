#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <sstream>

#include "twinrrm/config.hpp"
#include "twinrrm/csv.hpp"
#include "twinrrm/errors.hpp"
#include "twinrrm/experiments.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/montecarlo.hpp"
#include "twinrrm/numerics.hpp"
#include "twinrrm/road_traffic.hpp"
#include "twinrrm/stage1.hpp"
#include "twinrrm/stage2.hpp"

namespace py = pybind11;
using namespace twinrrm;
namespace ex = twinrrm::experiments;

namespace {

// Python sees a CSV table as (columns, rows) with native cell types.
py::tuple table_to_python(const csv::Table& t) {
  py::list rows;
  for (const auto& row : t.rows) {
    py::list cells;
    for (const auto& cell : row) {
      std::visit([&](const auto& v) { cells.append(v); }, cell);
    }
    rows.append(py::tuple(cells));
  }
  return py::make_tuple(t.columns, rows);
}

std::vector<ex::Scenario> scenarios_from(const std::string& precoder, const std::string& csi) {
  std::vector<Precoder> pcs;
  if (precoder == "mf" || precoder == "both") pcs.push_back(Precoder::mf);
  if (precoder == "zf" || precoder == "both") pcs.push_back(Precoder::zf);
  std::vector<ex::CsiMode> csis;
  if (csi == "perfect" || csi == "both") csis.push_back(ex::CsiMode::perfect);
  if (csi == "imperfect" || csi == "both") csis.push_back(ex::CsiMode::imperfect);
  if (pcs.empty() || csis.empty()) {
    throw DomainError("precoder must be mf|zf|both and csi perfect|imperfect|both");
  }
  return ex::make_scenarios(pcs, csis);
}


}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Twin-timescale radio resource management for V2I URLLC";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<InfeasibleRateError>(m, "InfeasibleRateError", error.ptr());
  py::register_exception<NoSignChangeError>(m, "NoSignChangeError", error.ptr());
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::enum_<Precoder>(m, "Precoder").value("MF", Precoder::mf).value("ZF", Precoder::zf);
  py::enum_<PlacementMode>(m, "PlacementMode")
      .value("UNIFORM_RANDOM", PlacementMode::uniform_random)
      .value("EQUISPACED", PlacementMode::equispaced);
  py::enum_<ex::CsiMode>(m, "CsiMode")
      .value("PERFECT", ex::CsiMode::perfect)
      .value("IMPERFECT", ex::CsiMode::imperfect);

  // numerics
  m.def("gaussian_q", &numerics::gaussian_q, py::arg("x"));
  m.def("gaussian_q_inv", &numerics::gaussian_q_inv, py::arg("eps"));

  // traffic
  py::class_<TrafficModel>(m, "TrafficModel")
      .def(py::init<>())
      .def_readwrite("free_flow_speed", &TrafficModel::free_flow_speed)
      .def_readwrite("max_density", &TrafficModel::max_density)
      .def_readwrite("road_length", &TrafficModel::road_length)
      .def_readwrite("carrier_frequency", &TrafficModel::carrier_frequency)
      .def("validate", &TrafficModel::validate);
  m.def("speed", &speed, py::arg("model"), py::arg("rho"));
  m.def("flux", &flux, py::arg("model"), py::arg("rho"));
  m.def("num_vues", &num_vues, py::arg("model"), py::arg("rho"));
  m.def("max_doppler", &max_doppler, py::arg("model"), py::arg("rho"));
  m.def("coherence_time", &coherence_time, py::arg("model"), py::arg("rho"));

  // channel
  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init<>())
      .def_readwrite("bs_distance", &ChannelConfig::bs_distance)
      .def_readwrite("road_length", &ChannelConfig::road_length)
      .def_readwrite("gain_constant", &ChannelConfig::gain_constant)
      .def_readwrite("pathloss_exponent", &ChannelConfig::pathloss_exponent)
      .def_readwrite("noise_psd", &ChannelConfig::noise_psd)
      .def_readwrite("signal_psd", &ChannelConfig::signal_psd);
  py::class_<Vue>(m, "Vue")
      .def(py::init<>())
      .def(py::init([](double position, double pathloss, double accuracy, double rate, double reliability) {
             return Vue{position, pathloss, accuracy, rate, reliability};
           }),
           py::arg("position"), py::arg("pathloss"), py::arg("accuracy") = 1.0, py::arg("rate") = 1e5,
           py::arg("reliability") = 1e-6)
      .def_readwrite("position", &Vue::position)
      .def_readwrite("pathloss", &Vue::pathloss)
      .def_readwrite("accuracy", &Vue::accuracy)
      .def_readwrite("rate", &Vue::rate)
      .def_readwrite("reliability", &Vue::reliability)
      .def("__repr__", [](const Vue& v) {
        std::ostringstream os;
        os << "Vue(position=" << v.position << ", pathloss=" << v.pathloss << ", accuracy=" << v.accuracy
           << ")";
        return os.str();
      });
  py::class_<EffectiveSinrModel>(m, "EffectiveSinrModel")
      .def(py::init<>())
      .def(py::init([](Precoder pc, int antennas, double total_power, double noise_power) {
             return EffectiveSinrModel{pc, antennas, total_power, noise_power};
           }),
           py::arg("precoder"), py::arg("antennas"), py::arg("total_power"), py::arg("noise_power"))
      .def_readwrite("precoder", &EffectiveSinrModel::precoder)
      .def_readwrite("antennas", &EffectiveSinrModel::antennas)
      .def_readwrite("total_power", &EffectiveSinrModel::total_power)
      .def_readwrite("noise_power", &EffectiveSinrModel::noise_power);
  m.def("pathloss", &pathloss, py::arg("cfg"), py::arg("position"));
  m.def("worst_case_pathloss", &worst_case_pathloss, py::arg("cfg"));
  m.def("place_vues", &place_vues, py::arg("cfg"), py::arg("users"), py::arg("seed"),
        py::arg("mode") = PlacementMode::uniform_random);
  m.def(
      "make_population",
      [](const ChannelConfig& cfg, const std::vector<double>& positions, double accuracy, double rate,
         double reliability) { return make_population(cfg, positions, accuracy, rate, reliability); },
      py::arg("cfg"), py::arg("positions"), py::arg("accuracy") = 1.0, py::arg("rate") = 1e5,
      py::arg("reliability") = 1e-6);
  m.def("effective_sinr", &effective_sinr, py::arg("model"), py::arg("vue"), py::arg("power"), py::arg("users"));
  m.def("asymptotic_sinr", &asymptotic_sinr, py::arg("vue"), py::arg("power"), py::arg("noise_power"));

  // finite blocklength
  m.def("dispersion", &fbl::dispersion, py::arg("gamma"));
  m.def("na_rate", &fbl::na_rate, py::arg("gamma"), py::arg("latency"), py::arg("reliability"),
        py::arg("bandwidth"));
  m.def(
      "latency_for_sinr",
      [](double gamma, double rate, double reliability, double bandwidth) {
        return fbl::latency_for_sinr(gamma, {rate, reliability, bandwidth});
      },
      py::arg("gamma"), py::arg("rate"), py::arg("reliability"), py::arg("bandwidth"));

  // stage 1
  py::class_<stage1::Stage1Inputs>(m, "Stage1Inputs")
      .def(py::init<>())
      .def_readwrite("density", &stage1::Stage1Inputs::density)
      .def_readwrite("delta", &stage1::Stage1Inputs::delta)
      .def_readwrite("worst_reliability", &stage1::Stage1Inputs::worst_reliability)
      .def_readwrite("worst_rate", &stage1::Stage1Inputs::worst_rate)
      .def_readwrite("accuracy_threshold", &stage1::Stage1Inputs::accuracy_threshold)
      .def_readwrite("precoder", &stage1::Stage1Inputs::precoder)
      .def_readwrite("antennas", &stage1::Stage1Inputs::antennas);
  py::class_<stage1::Stage1Result>(m, "Stage1Result")
      .def_readonly("gamma_w", &stage1::Stage1Result::gamma_w)
      .def_readonly("discriminant", &stage1::Stage1Result::discriminant)
      .def_readonly("bandwidth", &stage1::Stage1Result::bandwidth)
      .def_readonly("total_power", &stage1::Stage1Result::total_power)
      .def_readonly("coherence_time", &stage1::Stage1Result::coherence_time)
      .def_readonly("worst_latency", &stage1::Stage1Result::worst_latency);
  m.def("optimal_bandwidth", &stage1::optimal_bandwidth, py::arg("inputs"),
        py::arg("channel") = ChannelConfig{}, py::arg("traffic") = TrafficModel{});

  // stage 2
  py::class_<stage2::DinkelbachOptions>(m, "DinkelbachOptions")
      .def(py::init<>())
      .def_readwrite("tolerance", &stage2::DinkelbachOptions::tolerance)
      .def_readwrite("initial_eta", &stage2::DinkelbachOptions::initial_eta)
      .def_readwrite("max_outer_iterations", &stage2::DinkelbachOptions::max_outer_iterations)
      .def_property(
          "inner_tolerance", [](const stage2::DinkelbachOptions& o) { return o.inner.tolerance; },
          [](stage2::DinkelbachOptions& o, double v) { o.inner.tolerance = v; })
      .def_property(
          "max_inner_iterations", [](const stage2::DinkelbachOptions& o) { return o.inner.max_iterations; },
          [](stage2::DinkelbachOptions& o, long v) { o.inner.max_iterations = v; });
  py::class_<stage2::OuterTraceEntry>(m, "OuterTraceEntry")
      .def_readonly("iteration", &stage2::OuterTraceEntry::iteration)
      .def_readonly("eta", &stage2::OuterTraceEntry::eta)
      .def_readonly("auxiliary", &stage2::OuterTraceEntry::auxiliary);
  py::class_<stage2::AllocationResult>(m, "AllocationResult")
      .def_readonly("powers", &stage2::AllocationResult::powers)
      .def_readonly("eta_star", &stage2::AllocationResult::eta_star)
      .def_readonly("latencies", &stage2::AllocationResult::latencies)
      .def_readonly("max_latency", &stage2::AllocationResult::max_latency)
      .def_readonly("outer_iterations", &stage2::AllocationResult::outer_iterations)
      .def_readonly("total_inner_iterations", &stage2::AllocationResult::total_inner_iterations)
      .def_readonly("final_spread", &stage2::AllocationResult::final_spread)
      .def_readonly("degraded", &stage2::AllocationResult::degraded)
      .def_readonly("outer_trace", &stage2::AllocationResult::outer_trace);
  m.def(
      "dinkelbach_allocate",
      [](const std::vector<Vue>& vues, const EffectiveSinrModel& model, double bandwidth,
         const stage2::DinkelbachOptions& options) {
        return stage2::dinkelbach_allocate(vues, model, bandwidth, options);
      },
      py::arg("vues"), py::arg("model"), py::arg("bandwidth"), py::arg("options") = stage2::DinkelbachOptions{});
  m.def(
      "epa_allocate",
      [](const std::vector<Vue>& vues, const EffectiveSinrModel& model, double bandwidth) {
        return stage2::epa_allocate(vues, model, bandwidth);
      },
      py::arg("vues"), py::arg("model"), py::arg("bandwidth"));
  m.def(
      "h_value",
      [](const EffectiveSinrModel& model, const Vue& vue, double power, int users, double bandwidth,
         double eta) { return stage2::h_value(model, vue, power, users, bandwidth, eta); },
      py::arg("model"), py::arg("vue"), py::arg("power"), py::arg("users"), py::arg("bandwidth"), py::arg("eta"));

  // Monte Carlo
  m.def(
      "empirical_rate",
      [](const EffectiveSinrModel& model, const std::vector<Vue>& vues, const std::vector<double>& powers,
         std::size_t k, double bandwidth, double latency, long realizations, std::uint64_t seed) {
        if (k >= vues.size()) throw DomainError("empirical_rate: VUE index out of range");
        mc::McConfig mcfg;
        mcfg.realizations = realizations;
        mcfg.seed = seed;
        const auto e = mc::empirical_rate(model, vues[k], powers, k, bandwidth, latency, mcfg);
        return py::make_tuple(e.mean, e.std_error);
      },
      py::arg("model"), py::arg("vues"), py::arg("powers"), py::arg("k"), py::arg("bandwidth"),
      py::arg("latency"), py::arg("realizations") = 10000, py::arg("seed") = 1,
      "Monte Carlo mean of the rate for VUE k; returns (mean, standard error).");

  // configuration and experiments
  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("channel", &SystemConfig::channel)
      .def_readwrite("traffic", &SystemConfig::traffic)
      .def_readwrite("accuracy", &SystemConfig::accuracy)
      .def_readwrite("antennas", &SystemConfig::antennas)
      .def_readwrite("delta", &SystemConfig::delta)
      .def_readwrite("rate", &SystemConfig::rate)
      .def_readwrite("reliability", &SystemConfig::reliability)
      .def_readwrite("densities", &SystemConfig::densities)
      .def_readwrite("threads", &SystemConfig::threads)
      .def("validate", &SystemConfig::validate);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("origin") = "<string>");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("make_vues", &ex::make_vues, py::arg("cfg"), py::arg("density"), py::arg("csi"), py::arg("seed") = 1);
  m.def(
      "experiment_kinds",
      [] {
        std::vector<std::string> out;
        for (auto k : ex::all_kinds()) out.emplace_back(ex::to_string(k));
        return out;
      });
  m.def(
      "run_experiment",
      [](const std::string& kind, const SystemConfig& cfg, std::uint64_t seed, const std::string& precoder,
         const std::string& csi) {
        const auto parsed = ex::parse_kind(kind);
        if (!parsed) throw DomainError("unknown experiment kind '" + kind + "'");
        const auto scenarios = scenarios_from(precoder, csi);
        ex::Result res;
        {
          py::gil_scoped_release release;
          res = ex::run(*parsed, cfg, seed, scenarios);
        }
        py::dict tables;
        for (const auto& out : res.tables) tables[py::str(out.suffix)] = table_to_python(out.table);
        return py::make_tuple(tables, res.violations);
      },
      py::arg("kind"), py::arg("cfg") = SystemConfig{}, py::arg("seed") = 1, py::arg("precoder") = "both",
      py::arg("csi") = "both",
      "Runs an experiment. Returns ({suffix: (columns, rows)}, violations); the main table has suffix ''.");
  m.def(
      "run_experiment_csv",
      [](const std::string& kind, const SystemConfig& cfg, std::uint64_t seed, const std::string& precoder,
         const std::string& csi) {
        const auto parsed = ex::parse_kind(kind);
        if (!parsed) throw DomainError("unknown experiment kind '" + kind + "'");
        const auto scenarios = scenarios_from(precoder, csi);
        ex::Result res;
        {
          py::gil_scoped_release release;
          res = ex::run(*parsed, cfg, seed, scenarios);
        }
        std::map<std::string, std::string> out;
        for (const auto& t : res.tables) out[t.suffix] = csv::to_string(t.table);
        return out;
      },
      py::arg("kind"), py::arg("cfg") = SystemConfig{}, py::arg("seed") = 1, py::arg("precoder") = "both",
      py::arg("csi") = "both", "Same as run_experiment but returns the CSV text of each table.");
}
