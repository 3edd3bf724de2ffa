#pragma once

namespace twinrrm {

/// Macroscopic single-road traffic model with the Underwood speed-density law
/// v(rho) = v_F exp(-rho / rho_m). All fields are SI.
struct TrafficModel {
  static constexpr double kLightSpeed = 2.998e8;  // m/s

  double free_flow_speed = 80.0 / 3.6;  // m/s
  double max_density = 0.15;            // vehicles/m
  double road_length = 200.0;           // m
  double carrier_frequency = 2e9;       // Hz

  /// Builds a model from a free-flow speed in km/h.
  static TrafficModel from_kmh(double free_flow_kmh, double max_density, double road_length,
                               double carrier_frequency);

  void validate() const;
};

/// Mean vehicle speed in m/s at density `rho` (vehicles/m).
double speed(const TrafficModel& model, double rho);

/// Flux rho * v(rho) in vehicles/s.
double flux(const TrafficModel& model, double rho);

/// Vehicle count K = rho * d_R rounded to the nearest integer. Emits a warning
/// through log::warn when rho * d_R is not integral, throws DomainError if K < 1.
int num_vues(const TrafficModel& model, double rho);

/// Maximum Doppler frequency f_C v(rho) / c.
double max_doppler(const TrafficModel& model, double rho);

/// Coherence time 3 / (4 sqrt(pi) f_MD). Throws DomainError if f_MD is zero.
double coherence_time(const TrafficModel& model, double rho);

}  // namespace twinrrm
