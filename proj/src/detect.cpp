#include "ltesense/detect.hpp"

#include <algorithm>
#include <cmath>

#include "ltesense/errors.hpp"

namespace ltesense {
namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) throw ProcessingError("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void DetectorConfig::validate() const {
  if (threshold_mode == ThresholdMode::absolute && !(v_min > 0.0))
    throw ValidationError("detector: v_min must be positive");
  if (threshold_mode == ThresholdMode::robust && !(k_mad > 0.0))
    throw ValidationError("detector: k_mad must be positive");
  if (min_separation < 0.0) throw ValidationError("detector: min_separation must be >= 0");
}

void BaselineGeometry::validate() const {
  if (!(r_m > 0.0) || !(half_separation > 0.0) || !(wavelength > 0.0))
    throw ValidationError("baseline geometry fields must be positive");
}

std::vector<MotionEvent> detect_events(const DopplerTrace& trace, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = trace.v_delta.size();
  if (n == 0) throw ProcessingError("detect_events: empty trace");

  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(trace.v_delta[i]);

  // Robust scale from the signed trace: MAD about the median keeps k*MAD at
  // ~3.4 sigma of the noise floor for k = 5. Folding first would halve that
  // and drown the threshold in false peaks.
  double threshold = cfg.v_min;
  if (cfg.threshold_mode == ThresholdMode::robust) {
    const double med = median_of(trace.v_delta);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(trace.v_delta[i] - med);
    threshold = cfg.k_mad * median_of(dev);
  }

  // Interior local maxima above threshold; a plateau counts once at its
  // first sample.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (mag[i] > threshold && mag[i - 1] < mag[i] && mag[i] >= mag[i + 1]) candidates.push_back(i);

  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (mag[a] != mag[b]) return mag[a] > mag[b];
    return trace.times[a] < trace.times[b];
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : candidates) {
    bool ok = true;
    for (std::size_t k : kept)
      if (std::abs(trace.times[idx] - trace.times[k]) < cfg.min_separation) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<MotionEvent> events;
  events.reserve(kept.size());
  for (std::size_t idx : kept) {
    MotionEvent e;
    e.t_peak = trace.times[idx];
    e.v_delta_peak = trace.v_delta[idx];
    e.direction = e.v_delta_peak > 0.0 ? Direction::rx0_to_rx1 : Direction::rx1_to_rx0;
    events.push_back(e);
  }
  return events;
}

double estimate_speed(const MotionEvent& event, const BaselineGeometry& geom) {
  geom.validate();
  return std::abs(event.v_delta_peak) * geom.r_m / (2.0 * geom.half_separation);
}

void classify_speed(std::vector<MotionEvent>& events, std::span<const double> boundaries) {
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i] > boundaries[i - 1]))
      throw ProcessingError("classify_speed: boundaries not strictly increasing");
  for (MotionEvent& e : events) {
    const double v = std::abs(e.v_delta_peak);
    int cls = 0;
    for (double b : boundaries)
      if (b < v) ++cls;  // ties resolve to the lower bin
    e.speed_class = cls;
  }
}

std::vector<double> calibrate_boundaries(std::span<const LabeledPeak> training) {
  int max_class = -1;
  for (const LabeledPeak& p : training) {
    if (p.speed_class < 0) throw ProcessingError("calibrate_boundaries: negative class label");
    max_class = std::max(max_class, p.speed_class);
  }
  if (max_class < 1) throw ProcessingError("calibrate_boundaries: need at least two classes");

  std::vector<std::vector<double>> grouped(max_class + 1);
  for (const LabeledPeak& p : training) grouped[p.speed_class].push_back(std::abs(p.v_delta_peak));

  std::vector<double> medians;
  for (int c = 0; c <= max_class; ++c) {
    if (grouped[c].empty())
      throw ProcessingError("calibrate_boundaries: class " + std::to_string(c) + " has no events");
    medians.push_back(median_of(grouped[c]));
  }
  std::vector<double> boundaries;
  for (int c = 0; c < max_class; ++c) {
    if (!(medians[c + 1] > medians[c]))
      throw ProcessingError("calibrate_boundaries: class medians not separable");
    boundaries.push_back(0.5 * (medians[c] + medians[c + 1]));
  }
  return boundaries;
}

}  // namespace ltesense
