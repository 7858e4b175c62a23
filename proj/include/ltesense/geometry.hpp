#pragma once

#include <optional>

#include "ltesense/errors.hpp"

namespace ltesense {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

/// Bistatic crossing geometry: two receivers on a common baseline y = y_rx,
/// a reflector moving along the line y = reflector_y at constant velocity_x,
/// and a transmitter that is either a finite point or in the far field (its
/// range-rate is then a common constant that cancels in the differential).
struct ScenarioGeometry {
  std::optional<Vec2> tx_pos;        // empty = far-field transmitter
  double tx_range_rate = 0.0;        // m/s, common Tx->reflector term when far-field
  Vec2 rx0{-0.025, 0.0};
  Vec2 rx1{0.025, 0.0};
  double reflector_y = 0.1;          // m
  double reflector_x0 = 0.0;         // m, position at t = 0
  double velocity_x = 0.0;           // m/s
  double wavelength = 0.1428;        // m

  void validate() const;

  double midpoint_x() const { return 0.5 * (rx0.x + rx1.x); }
  double half_separation() const { return midpoint_x() - rx0.x; }
  double reflector_x(double t) const { return reflector_x0 + velocity_x * t; }

  /// Reflector-to-receiver range at crossing (equal for both receivers).
  double crossing_range() const;

  /// Time at which the reflector passes the baseline midpoint; empty when
  /// the reflector is static.
  std::optional<double> crossing_time() const;
};

/// Euclidean reflector-to-receiver distance.
double range(double reflector_x, const Vec2& rx, const ScenarioGeometry& geometry);

/// d(range)/dt = v_x (x_R - x_j) / range; positive while receding.
double range_rate(double reflector_x, const Vec2& rx, const ScenarioGeometry& geometry);

/// Doppler shift at receiver j: -(1/lambda) d(R_tx->refl + R_refl->rx_j)/dt.
double doppler_at_rx(double t, int receiver_index, const ScenarioGeometry& geometry);

/// nu_1 - nu_0. With a far-field transmitter the common Tx term cancels
/// exactly; at the crossing this equals 2 v_x (x_c - x_0) / (lambda R_m),
/// positive for motion from rx0 toward rx1.
double differential_doppler(double t, const ScenarioGeometry& geometry);

}  // namespace ltesense
