#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "ltesense/types.hpp"

namespace ltesense {

/// Dual-RX product H1 * conj(H0) on the shared grid.
struct CompositeSeries {
  std::vector<double> times;
  std::vector<double> freqs;
  CMatrix values;
};

enum class BackgroundMode { mean_of_static_window, none, external_profile, moving_mean };

struct PipelineConfig {
  BackgroundMode background = BackgroundMode::mean_of_static_window;
  std::size_t background_start = 0;  // sample indices, end exclusive
  std::size_t background_end = 0;    // start == end == 0 selects the first tenth
  std::size_t moving_window = 101;   // moving_mean mode
  std::vector<double> external_profile;
  int sg_window = 31;
  int sg_order = 3;
  double wavelength = 0.1428;  // m; the physics wavelength always comes from config
  double zero_magnitude_epsilon = 1e-12;

  void validate() const;
};

struct PhaseTrace {
  std::vector<double> times;
  std::vector<double> phi_raw;  // unwrapped phase of the averaged product
  std::vector<double> phi;      // background-subtracted
  std::vector<double> phi_sg;   // smoothed
};

struct DopplerTrace {
  std::vector<double> times;
  std::vector<double> dnu_hz;   // (1/2pi) dphi/dt
  std::vector<double> v_delta;  // lambda * dnu, m/s
};

struct PipelineResult {
  PhaseTrace phase;
  DopplerTrace doppler;
  std::vector<std::pair<std::size_t, std::size_t>> flagged;  // degenerate (row,col) samples
  int effective_sg_window = 0;  // shrunk when the trace is shorter than sg_window
};

/// values[n,k] = rx1[n,k] * conj(rx0[n,k]); time/frequency axes must agree
/// to 1e-12 relative. Throws ProcessingError on axis mismatch.
CompositeSeries cross_multiply(const RxSeries& rx1, const RxSeries& rx0);

/// Unit normalization; samples below epsilon carry the previous unit value
/// of their subcarrier forward ((1,0) at the start) and are flagged.
CompositeSeries normalize(const CompositeSeries& comp, double epsilon,
                          std::vector<std::pair<std::size_t, std::size_t>>& flagged);

/// Arithmetic per-sample mean across subcarriers.
std::vector<Complex> subcarrier_average(const CompositeSeries& u);

/// Unwrapped phase: out[0] is the principal angle in (-pi, pi]; successive
/// differences stay in (-pi, pi]; out[n] is congruent to angle(z[n]) mod 2pi.
std::vector<double> unwrap_phase(std::span<const Complex> zbar);

/// Constant background: mean of phi over [start, end). Throws on an empty
/// or out-of-bounds window.
double estimate_background(std::span<const double> phi_raw, std::size_t start, std::size_t end);

/// Centered moving-average background (off by default; see BackgroundMode).
std::vector<double> moving_background(std::span<const double> phi_raw, std::size_t window);

/// Least-squares taps: row (pos + window/2) evaluates the window fit at
/// offset pos from the window center, pos in [-h, h]. Row h is the usual
/// smoothing kernel; the others serve the first/last half-window samples.
std::vector<std::vector<double>> build_sg_taps(int window, int order);

/// Savitzky-Golay smoothing, polynomial-exact for inputs of degree <= order
/// over the whole output including the edges.
std::vector<double> savitzky_golay(std::span<const double> phi, int window, int order);

/// Three-point non-uniform differences (one-sided second-order ends, plain
/// difference quotient when only two samples exist):
/// dnu = (1/2pi) dphi/dt, v_delta = wavelength * dnu.
DopplerTrace phase_derivative(std::span<const double> phi_sg, std::span<const double> times,
                              double wavelength);

/// cross_multiply -> normalize -> subcarrier_average -> unwrap ->
/// background subtraction -> savitzky_golay -> phase_derivative.
PipelineResult run_pipeline(const RxSeries& rx1, const RxSeries& rx0, const PipelineConfig& cfg);

/// CSV t_s,phi_raw,phi,phi_sg,dnu_hz,v_delta_mps.
void write_trace_csv(const PipelineResult& result, std::ostream& out);
/// Sidecar CSV row,col of degenerate samples.
void write_flags_csv(const std::vector<std::pair<std::size_t, std::size_t>>& flagged,
                     std::ostream& out);
/// Reads a trace CSV back into the Doppler columns.
DopplerTrace read_trace_csv(std::istream& in);

}  // namespace ltesense
