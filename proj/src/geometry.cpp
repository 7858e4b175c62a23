#include "ltesense/geometry.hpp"

#include <cmath>

namespace ltesense {

void ScenarioGeometry::validate() const {
  if (rx0 == rx1) throw ValidationError("geometry: rx0 and rx1 coincide");
  if (rx0.y != rx1.y) throw ValidationError("geometry: receivers must share y = y_rx");
  if (!(wavelength > 0.0)) throw ValidationError("geometry: wavelength must be positive");
  if (reflector_y == rx0.y) throw ValidationError("geometry: reflector line meets the baseline");
  if (!std::isfinite(velocity_x)) throw ValidationError("geometry: velocity_x not finite");
}

double ScenarioGeometry::crossing_range() const {
  return std::hypot(midpoint_x() - rx0.x, reflector_y - rx0.y);
}

std::optional<double> ScenarioGeometry::crossing_time() const {
  if (velocity_x == 0.0) return std::nullopt;
  return (midpoint_x() - reflector_x0) / velocity_x;
}

double range(double reflector_x, const Vec2& rx, const ScenarioGeometry& geometry) {
  return std::hypot(reflector_x - rx.x, geometry.reflector_y - rx.y);
}

double range_rate(double reflector_x, const Vec2& rx, const ScenarioGeometry& geometry) {
  const double r = range(reflector_x, rx, geometry);
  if (r == 0.0) throw ProcessingError("range_rate: reflector coincides with receiver");
  return geometry.velocity_x * (reflector_x - rx.x) / r;
}

namespace {

double tx_term_rate(double reflector_x, const ScenarioGeometry& geometry) {
  if (!geometry.tx_pos) return geometry.tx_range_rate;
  const double dx = reflector_x - geometry.tx_pos->x;
  const double dy = geometry.reflector_y - geometry.tx_pos->y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) throw ProcessingError("doppler_at_rx: reflector coincides with transmitter");
  return geometry.velocity_x * dx / r;
}

}  // namespace

double doppler_at_rx(double t, int receiver_index, const ScenarioGeometry& geometry) {
  const double xr = geometry.reflector_x(t);
  const Vec2& rx = receiver_index == 0 ? geometry.rx0 : geometry.rx1;
  return -(tx_term_rate(xr, geometry) + range_rate(xr, rx, geometry)) / geometry.wavelength;
}

double differential_doppler(double t, const ScenarioGeometry& geometry) {
  const double xr = geometry.reflector_x(t);
  // The Tx->reflector term is common to both receivers and drops out.
  return -(range_rate(xr, geometry.rx1, geometry) - range_rate(xr, geometry.rx0, geometry)) /
         geometry.wavelength;
}

}  // namespace ltesense
