#include "twinrrm/road_traffic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "twinrrm/errors.hpp"
#include "twinrrm/log.hpp"

namespace twinrrm {
namespace {

void check_density(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("road traffic: density must be finite and non-negative");
  }
}

}  // namespace

TrafficModel TrafficModel::from_kmh(double free_flow_kmh, double max_density, double road_length,
                                    double carrier_frequency) {
  TrafficModel m{free_flow_kmh / 3.6, max_density, road_length, carrier_frequency};
  m.validate();
  return m;
}

void TrafficModel::validate() const {
  if (!(free_flow_speed > 0.0) || !(max_density > 0.0) || !(road_length > 0.0) ||
      !(carrier_frequency > 0.0)) {
    throw DomainError("traffic model: v_F, rho_m, d_R and f_C must all be positive");
  }
}

double speed(const TrafficModel& model, double rho) {
  check_density(rho);
  return model.free_flow_speed * std::exp(-rho / model.max_density);
}

double flux(const TrafficModel& model, double rho) { return rho * speed(model, rho); }

int num_vues(const TrafficModel& model, double rho) {
  check_density(rho);
  const double exact = rho * model.road_length;
  const double rounded = std::round(exact);
  if (rounded < 1.0) {
    std::ostringstream os;
    os << "density " << rho << " on a " << model.road_length << " m road gives fewer than one VUE";
    throw DomainError(os.str());
  }
  if (std::abs(exact - rounded) > 1e-9) {
    std::ostringstream os;
    os << "rho * d_R = " << exact << " is not an integer; using K = " << rounded;
    log::warn(os.str());
  }
  return static_cast<int>(rounded);
}

double max_doppler(const TrafficModel& model, double rho) {
  return model.carrier_frequency * speed(model, rho) / TrafficModel::kLightSpeed;
}

double coherence_time(const TrafficModel& model, double rho) {
  const double f_md = max_doppler(model, rho);
  if (!(f_md > 0.0)) {
    throw DomainError("coherence_time: maximum Doppler frequency is zero");
  }
  return 3.0 / (4.0 * std::sqrt(std::numbers::pi) * f_md);
}

}  // namespace twinrrm
