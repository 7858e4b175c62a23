#pragma once

#include <span>
#include <vector>

#include "ltesense/pipeline.hpp"

namespace ltesense {

enum class Direction { rx0_to_rx1, rx1_to_rx0 };

struct MotionEvent {
  double t_peak = 0.0;
  double v_delta_peak = 0.0;  // signed; positive means motion rx0 -> rx1
  Direction direction = Direction::rx0_to_rx1;
  double speed_estimate = 0.0;  // m/s, filled by estimate_speed
  int speed_class = -1;         // filled by classify_speed
};

enum class ThresholdMode { absolute, robust };

struct DetectorConfig {
  ThresholdMode threshold_mode = ThresholdMode::robust;
  double v_min = 0.05;         // m/s, absolute mode
  double k_mad = 5.0;          // robust mode: threshold = k * MAD(|v_delta|)
  double min_separation = 2.0; // s, refractory spacing between kept peaks

  void validate() const;
};

struct BaselineGeometry {
  double r_m = 0.77;            // reflector-to-receiver range at crossing
  double half_separation = 0.025;  // x_c - x_0
  double wavelength = 0.1428;

  void validate() const;
};

/// Local maxima of |v_delta| above threshold, at least min_separation apart
/// (stronger peaks win ties). Direction comes from the sign of the peak.
std::vector<MotionEvent> detect_events(const DopplerTrace& trace, const DetectorConfig& cfg);

/// |v_x| ~ |v_delta_peak| * R_m / (2 (x_c - x_0)).
double estimate_speed(const MotionEvent& event, const BaselineGeometry& geom);

/// Assigns the bin of |v_delta_peak| given strictly increasing boundaries;
/// a value equal to a boundary goes to the lower bin.
void classify_speed(std::vector<MotionEvent>& events, std::span<const double> boundaries);

struct LabeledPeak {
  double v_delta_peak = 0.0;
  int speed_class = 0;
};

/// Midpoints between adjacent class-conditional medians of |v_delta_peak|.
/// Every class in 0..max must have at least one peak and the medians must be
/// strictly increasing; otherwise throws ProcessingError.
std::vector<double> calibrate_boundaries(std::span<const LabeledPeak> training);

}  // namespace ltesense
