#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "ltesense/geometry.hpp"
#include "ltesense/types.hpp"

namespace ltesense {

struct PathComponent {
  Complex amplitude{0.0, 0.0};
  double delay = 0.0;    // seconds, >= 0
  double doppler = 0.0;  // Hz
};

/// Zero-Doppler clutter paths; frequency response sum(a exp(-i 2 pi f tau)).
struct StaticChannel {
  std::vector<PathComponent> paths;
};

enum class ImpairmentKind { none, unit_modulus_random_walk, constant_phase };

/// Multiplicative receiver impairment, unit modulus by construction. The
/// default is the random walk the dual-RX product exists to cancel.
struct ImpairmentModel {
  ImpairmentKind kind = ImpairmentKind::unit_modulus_random_walk;
  double phase_step_std = 0.05;     // rad per sample (random walk)
  double constant_phase_rad = 0.0;  // constant_phase kind
  std::uint64_t seed = 1;
  bool common = true;  // false draws an independent realization per receiver
};

struct NoiseModel {
  double complex_noise_std = 0.0;  // per component, added to each receiver before the product
  std::uint64_t seed = 2;
};

struct SimulationConfig {
  ScenarioGeometry geometry;
  StaticChannel static0;
  StaticChannel static1;
  Complex dynamic_amp0{1.0, 0.0};
  Complex dynamic_amp1{1.0, 0.0};
  double sample_interval = 1e-3;  // s
  double duration = 1.0;          // s, inclusive endpoint
  int subcarriers = 8;
  double subcarrier_spacing = 15000.0;  // Hz
  ImpairmentModel impairment;
  NoiseModel noise;

  void validate() const;
  std::size_t sample_count() const;
};

struct GroundTruth {
  std::vector<double> times;
  std::vector<double> nu0_hz;
  std::vector<double> nu1_hz;
  std::vector<double> dnu_hz;
  std::optional<double> crossing_time_s;  // empty when the reflector is static
  double v_x = 0.0;
  double crossing_range_m = 0.0;  // R_m
  double half_separation_m = 0.0;
};

struct SynthesisResult {
  RxSeries rx0;
  RxSeries rx1;
  GroundTruth truth;
};

/// Synthesizes the dual-receiver CSI pair on a shared time/frequency grid.
/// The impairment realization is common to both receivers unless configured
/// otherwise; noise is independent per receiver, sample and subcarrier.
/// Deterministic: identical config and seeds give bit-identical output.
SynthesisResult synthesize_pair(const SimulationConfig& config);

struct CaptureTemplate {
  CellParameters cell;
  int subcarrier_stride = 1;
  int block_stride = 1;
  std::int64_t t0_us = 1743022991574101;
  int blocks_per_record = 1;
  double symbol_duration_s = 1.0 / 14000.0;  // used when packing several blocks per record
  double snr_db = 30.0;
  double rsrp_db = 60.0;
};

/// Template consistent with capture_to_series defaults for this config:
/// center frequency c/lambda, stride 1, LTE-ish cell scalars.
CaptureTemplate make_capture_template(const SimulationConfig& config);

/// Packs the pair into a capture, rx0 -> (port 0, rx 0), rx1 -> (port 0,
/// rx 1). Sample values are rounded to six decimals so the textual log
/// round-trips exactly. Throws ProcessingError on axis mismatch or a time
/// grid that the timestamp + block-index scheme cannot represent.
CsiCapture emit_capture(const RxSeries& rx0, const RxSeries& rx1, const CaptureTemplate& tpl);

/// CSV t_s,nu0_hz,nu1_hz,dnu_hz.
void write_truth_csv(const GroundTruth& truth, std::ostream& out);

}  // namespace ltesense
