#include "ltesense/sim.hpp"

#include <cmath>
#include <random>

#include "ltesense/kernels.hpp"
#include "ltesense/series.hpp"

namespace ltesense {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSpeedOfLight = 299792458.0;
constexpr std::uint64_t kRx1SeedSalt = 0x9e3779b97f4a7c15ull;

std::vector<Complex> static_response(const StaticChannel& ch, const std::vector<double>& freqs) {
  std::vector<Complex> resp(freqs.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    for (const PathComponent& p : ch.paths) {
      const double phase = -kTwoPi * freqs[k] * p.delay;
      resp[k] += p.amplitude * Complex{std::cos(phase), std::sin(phase)};
    }
  }
  return resp;
}

std::vector<Complex> impairment_walk(const ImpairmentModel& model, std::size_t n,
                                     std::uint64_t seed) {
  std::vector<Complex> c(n, Complex{1.0, 0.0});
  switch (model.kind) {
    case ImpairmentKind::none:
      break;
    case ImpairmentKind::constant_phase: {
      const Complex v{std::cos(model.constant_phase_rad), std::sin(model.constant_phase_rad)};
      for (auto& z : c) z = v;
      break;
    }
    case ImpairmentKind::unit_modulus_random_walk: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> step(0.0, model.phase_step_std);
      double theta = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        theta += step(rng);
        c[i] = Complex{std::cos(theta), std::sin(theta)};
      }
      break;
    }
  }
  return c;
}

void add_noise(CMatrix& m, double std_dev, std::uint64_t seed) {
  if (std_dev <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, std_dev);
  for (auto& z : m.data) {
    const double re = dist(rng);
    const double im = dist(rng);
    z += Complex{re, im};
  }
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

void validate_static(const StaticChannel& ch, const char* name) {
  for (const PathComponent& p : ch.paths) {
    if (p.doppler != 0.0)
      throw ValidationError(std::string(name) + ": static path with nonzero doppler");
    if (p.delay < 0.0) throw ValidationError(std::string(name) + ": negative path delay");
    if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag()))
      throw ValidationError(std::string(name) + ": non-finite path amplitude");
  }
}

}  // namespace

void SimulationConfig::validate() const {
  geometry.validate();
  if (!(sample_interval > 0.0)) throw ValidationError("sample_interval must be positive");
  if (!(duration > 0.0)) throw ValidationError("duration must be positive");
  if (subcarriers < 1) throw ValidationError("subcarriers must be >= 1");
  if (!(subcarrier_spacing > 0.0)) throw ValidationError("subcarrier_spacing must be positive");
  if (noise.complex_noise_std < 0.0) throw ValidationError("noise std must be >= 0");
  if (impairment.phase_step_std < 0.0) throw ValidationError("phase_step_std must be >= 0");
  validate_static(static0, "static0");
  validate_static(static1, "static1");
}

std::size_t SimulationConfig::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration / sample_interval)) + 1;
}

SynthesisResult synthesize_pair(const SimulationConfig& config) {
  config.validate();
  const std::size_t n = config.sample_count();
  const std::size_t k = static_cast<std::size_t>(config.subcarriers);
  const ScenarioGeometry& g = config.geometry;

  SynthesisResult res;
  res.truth.times.resize(n);
  res.truth.nu0_hz.resize(n);
  res.truth.nu1_hz.resize(n);
  res.truth.dnu_hz.resize(n);
  res.truth.crossing_time_s = g.crossing_time();
  res.truth.v_x = g.velocity_x;
  res.truth.crossing_range_m = g.crossing_range();
  res.truth.half_separation_m = g.half_separation();

  std::vector<double> freqs(k);
  const double fc = kSpeedOfLight / g.wavelength;
  const double k0 = (static_cast<double>(k) - 1.0) / 2.0;
  for (std::size_t i = 0; i < k; ++i)
    freqs[i] = fc + (static_cast<double>(i) - k0) * config.subcarrier_spacing;

  // Per-sample echo path lengths; the Tx leg is either the true distance or
  // the far-field linearization (common slope, zero baseline).
  std::vector<double> len0(n), len1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * config.sample_interval;
    res.truth.times[i] = t;
    const double xr = g.reflector_x(t);
    double tx_leg;
    if (g.tx_pos) {
      tx_leg = std::hypot(xr - g.tx_pos->x, g.reflector_y - g.tx_pos->y);
    } else {
      tx_leg = g.tx_range_rate * t;
    }
    len0[i] = tx_leg + range(xr, g.rx0, g);
    len1[i] = tx_leg + range(xr, g.rx1, g);
    res.truth.nu0_hz[i] = doppler_at_rx(t, 0, g);
    res.truth.nu1_hz[i] = doppler_at_rx(t, 1, g);
    res.truth.dnu_hz[i] = res.truth.nu1_hz[i] - res.truth.nu0_hz[i];
  }

  const std::vector<Complex> resp0 = static_response(config.static0, freqs);
  const std::vector<Complex> resp1 = static_response(config.static1, freqs);
  const std::vector<Complex> imp0 = impairment_walk(config.impairment, n, config.impairment.seed);
  const std::vector<Complex> imp1 =
      config.impairment.common
          ? imp0
          : impairment_walk(config.impairment, n, config.impairment.seed ^ kRx1SeedSalt);

  res.rx0.times = res.truth.times;
  res.rx0.freqs = freqs;
  res.rx1.times = res.truth.times;
  res.rx1.freqs = freqs;
  kernels::synth_fill(len0, freqs, resp0, config.dynamic_amp0, imp0, res.rx0.values);
  kernels::synth_fill(len1, freqs, resp1, config.dynamic_amp1, imp1, res.rx1.values);

  add_noise(res.rx0.values, config.noise.complex_noise_std, config.noise.seed);
  add_noise(res.rx1.values, config.noise.complex_noise_std, config.noise.seed ^ kRx1SeedSalt);
  return res;
}

CaptureTemplate make_capture_template(const SimulationConfig& config) {
  CaptureTemplate tpl;
  tpl.cell.center_freq_hz = kSpeedOfLight / config.geometry.wavelength;
  tpl.cell.nof_prb = 100;
  tpl.cell.cp = CyclicPrefix::normal;
  tpl.cell.symbol_sz = 1536;
  tpl.cell.useful_re = 1200;
  tpl.cell.offset = 0;
  tpl.cell.ofdm_symbols = 14;
  tpl.subcarrier_stride = 1;
  tpl.block_stride = 1;
  return tpl;
}

CsiCapture emit_capture(const RxSeries& rx0, const RxSeries& rx1, const CaptureTemplate& tpl) {
  if (rx0.times != rx1.times || rx0.freqs != rx1.freqs)
    throw ProcessingError("emit_capture: receiver series axes differ");
  const std::size_t n = rx0.times.size();
  if (n == 0) throw ProcessingError("emit_capture: empty series");
  const std::size_t cols = rx0.freqs.size();
  const int per_record = tpl.blocks_per_record;
  if (per_record < 1) throw ProcessingError("emit_capture: blocks_per_record must be >= 1");
  if (per_record * tpl.block_stride > tpl.cell.ofdm_symbols)
    throw ProcessingError("emit_capture: record does not fit in ofdm_symbols");

  CsiCapture capture;
  std::int64_t prev_ts = INT64_MIN;
  for (std::size_t i0 = 0; i0 < n; i0 += per_record) {
    const std::size_t count = std::min<std::size_t>(per_record, n - i0);
    CsiBlock block;
    block.timestamp_us = tpl.t0_us + std::llround(rx0.times[i0] * 1e6);
    if (block.timestamp_us <= prev_ts)
      throw ProcessingError("emit_capture: time grid collapses at microsecond resolution");
    prev_ts = block.timestamp_us;
    // all reals go through the six-decimal log precision
    block.snr_db = round6(tpl.snr_db);
    block.rsrp_db = round6(tpl.rsrp_db);
    block.cell = tpl.cell;
    block.cell.center_freq_hz = round6(tpl.cell.center_freq_hz);
    block.subcarrier_stride = tpl.subcarrier_stride;
    block.block_stride = tpl.block_stride;

    for (int part : {0, 1}) {
      const RxSeries& src = part == 0 ? rx0 : rx1;
      PortRxData data;
      data.csi = CMatrix(count, cols);
      for (std::size_t m = 0; m < count; ++m) {
        const int idx = static_cast<int>(m) * tpl.block_stride;
        data.ofdm_block_indices.push_back(idx);
        if (m > 0) {
          const double expected = rx0.times[i0] + idx * tpl.symbol_duration_s;
          if (std::abs(rx0.times[i0 + m] - expected) > 1e-9)
            throw ProcessingError(
                "emit_capture: sample times do not fit the block-index grid; "
                "use blocks_per_record = 1");
        }
        for (std::size_t c = 0; c < cols; ++c) {
          const Complex& z = src.values(i0 + m, c);
          data.csi(m, c) = Complex{round6(z.real()), round6(z.imag())};
        }
      }
      block.port_data[PortRxKey{0, part}] = std::move(data);
    }
    capture.blocks.push_back(std::move(block));
  }
  return capture;
}

void write_truth_csv(const GroundTruth& truth, std::ostream& out) {
  out << "t_s,nu0_hz,nu1_hz,dnu_hz\n";
  for (std::size_t i = 0; i < truth.times.size(); ++i) {
    out << format_number(truth.times[i]) << ',' << format_number(truth.nu0_hz[i]) << ','
        << format_number(truth.nu1_hz[i]) << ',' << format_number(truth.dnu_hz[i]) << "\n";
  }
}

}  // namespace ltesense
