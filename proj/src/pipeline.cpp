#include "ltesense/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ltesense/errors.hpp"
#include "ltesense/kernels.hpp"
#include "ltesense/series.hpp"

namespace ltesense {
namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 2.0 * kPi;

bool axes_match(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(a[i]), std::abs(b[i])));
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

/// Solves the (order+1) x (order+1) system G z = t in place, partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> g, std::vector<double> t) {
  const std::size_t m = t.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(g[r][col]) > std::abs(g[pivot][col])) pivot = r;
    if (g[pivot][col] == 0.0) throw ProcessingError("singular normal equations");
    std::swap(g[col], g[pivot]);
    std::swap(t[col], t[pivot]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = g[r][col] / g[col][col];
      for (std::size_t c = col; c < m; ++c) g[r][c] -= f * g[col][c];
      t[r] -= f * t[col];
    }
  }
  std::vector<double> z(m, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    double acc = t[r];
    for (std::size_t c = r + 1; c < m; ++c) acc -= g[r][c] * z[c];
    z[r] = acc / g[r][r];
  }
  return z;
}

}  // namespace

void PipelineConfig::validate() const {
  if (sg_window <= 0 || sg_window % 2 == 0) throw ValidationError("sg_window must be odd and > 0");
  if (sg_order < 0) throw ValidationError("sg_order must be >= 0");
  if (sg_window <= sg_order) throw ValidationError("sg_window must exceed sg_order");
  if (!(wavelength > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(zero_magnitude_epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (background == BackgroundMode::moving_mean && (moving_window == 0 || moving_window % 2 == 0))
    throw ValidationError("moving_window must be odd and > 0");
}

CompositeSeries cross_multiply(const RxSeries& rx1, const RxSeries& rx0) {
  if (!axes_match(rx1.times, rx0.times) || !axes_match(rx1.freqs, rx0.freqs))
    throw ProcessingError("cross_multiply: receiver axes mismatch");
  CompositeSeries comp;
  comp.times = rx1.times;
  comp.freqs = rx1.freqs;
  comp.values = CMatrix(rx1.values.rows, rx1.values.cols);
  kernels::cross_conj_multiply(rx1.values.data, rx0.values.data, comp.values.data);
  return comp;
}

CompositeSeries normalize(const CompositeSeries& comp, double epsilon,
                          std::vector<std::pair<std::size_t, std::size_t>>& flagged) {
  CompositeSeries unit;
  unit.times = comp.times;
  unit.freqs = comp.freqs;
  kernels::normalize_unit(comp.values, epsilon, unit.values, flagged);
  return unit;
}

std::vector<Complex> subcarrier_average(const CompositeSeries& u) {
  if (u.values.cols == 0) throw ProcessingError("subcarrier_average: no subcarriers");
  std::vector<Complex> out;
  kernels::row_mean(u.values, out);
  return out;
}

std::vector<double> unwrap_phase(std::span<const Complex> zbar) {
  if (zbar.empty()) throw ProcessingError("unwrap_phase: empty input");
  std::vector<double> out(zbar.size());
  auto principal = [](const Complex& z) {
    double a = std::atan2(z.imag(), z.real());
    if (a <= -kPi) a = kPi;  // principal interval (-pi, pi]
    return a;
  };
  double prev = principal(zbar[0]);
  out[0] = prev;
  long long turns = 0;  // accumulated 2pi corrections, kept integral
  for (std::size_t i = 1; i < zbar.size(); ++i) {
    const double a = principal(zbar[i]);
    const double d = a - prev;
    turns -= static_cast<long long>(std::ceil(d / kTwoPi - 0.5));
    out[i] = a + kTwoPi * static_cast<double>(turns);
    prev = a;
  }
  return out;
}

double estimate_background(std::span<const double> phi_raw, std::size_t start, std::size_t end) {
  if (start >= end || end > phi_raw.size())
    throw ProcessingError("estimate_background: empty or out-of-range window");
  double acc = 0.0;
  for (std::size_t i = start; i < end; ++i) acc += phi_raw[i];
  return acc / static_cast<double>(end - start);
}

std::vector<double> moving_background(std::span<const double> phi_raw, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw ProcessingError("moving window must be odd");
  const std::size_t n = phi_raw.size();
  const std::size_t h = window / 2;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= h ? i - h : 0;
    const std::size_t hi = std::min(n, i + h + 1);
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) acc += phi_raw[j];
    out[i] = acc / static_cast<double>(hi - lo);
  }
  return out;
}

std::vector<std::vector<double>> build_sg_taps(int window, int order) {
  if (window <= 0 || window % 2 == 0) throw ProcessingError("sg window must be odd and > 0");
  if (order < 0 || order >= window) throw ProcessingError("sg order must be in [0, window)");
  const int h = window / 2;
  const int terms = order + 1;

  // Vandermonde on positions -h..h and its normal-equation Gram matrix.
  std::vector<std::vector<double>> a(window, std::vector<double>(terms));
  for (int i = 0; i < window; ++i) {
    double p = 1.0;
    for (int j = 0; j < terms; ++j) {
      a[i][j] = p;
      p *= static_cast<double>(i - h);
    }
  }
  std::vector<std::vector<double>> gram(terms, std::vector<double>(terms, 0.0));
  for (int r = 0; r < terms; ++r)
    for (int c = 0; c < terms; ++c)
      for (int i = 0; i < window; ++i) gram[r][c] += a[i][r] * a[i][c];

  std::vector<std::vector<double>> taps(window, std::vector<double>(window, 0.0));
  for (int pos = -h; pos <= h; ++pos) {
    std::vector<double> t(terms);
    double p = 1.0;
    for (int j = 0; j < terms; ++j) {
      t[j] = p;
      p *= static_cast<double>(pos);
    }
    const std::vector<double> z = solve_dense(gram, t);
    for (int i = 0; i < window; ++i) {
      double acc = 0.0;
      for (int j = 0; j < terms; ++j) acc += a[i][j] * z[j];
      taps[pos + h][i] = acc;
    }
  }
  return taps;
}

std::vector<double> savitzky_golay(std::span<const double> phi, int window, int order) {
  if (window <= 0 || window % 2 == 0) throw ProcessingError("sg window must be odd and > 0");
  if (window <= order) throw ProcessingError("sg window must exceed the polynomial order");
  if (phi.size() < static_cast<std::size_t>(window))
    throw ProcessingError("input shorter than the sg window");
  const auto taps = build_sg_taps(window, order);
  std::vector<double> out;
  kernels::sg_apply(phi, taps, out);
  return out;
}

DopplerTrace phase_derivative(std::span<const double> phi_sg, std::span<const double> times,
                              double wavelength) {
  const std::size_t n = phi_sg.size();
  if (n != times.size()) throw ProcessingError("phase_derivative: length mismatch");
  if (n < 2) throw ProcessingError("insufficient samples for derivative");
  for (std::size_t i = 1; i < n; ++i)
    if (!(times[i] > times[i - 1]))
      throw ProcessingError("phase_derivative: times not strictly increasing at index " +
                            std::to_string(i));

  DopplerTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.dnu_hz.resize(n);
  trace.v_delta.resize(n);

  auto rate_at = [&](std::size_t i) -> double {
    if (n == 2) return (phi_sg[1] - phi_sg[0]) / (times[1] - times[0]);
    if (i == 0) {
      const double h1 = times[1] - times[0];
      const double h2 = times[2] - times[1];
      return phi_sg[0] * (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) +
             phi_sg[1] * ((h1 + h2) / (h1 * h2)) + phi_sg[2] * (-h1 / (h2 * (h1 + h2)));
    }
    if (i == n - 1) {
      const double h1 = times[n - 2] - times[n - 3];
      const double h2 = times[n - 1] - times[n - 2];
      return phi_sg[n - 3] * (h2 / (h1 * (h1 + h2))) + phi_sg[n - 2] * (-(h1 + h2) / (h1 * h2)) +
             phi_sg[n - 1] * ((h1 + 2.0 * h2) / (h2 * (h1 + h2)));
    }
    const double h1 = times[i] - times[i - 1];
    const double h2 = times[i + 1] - times[i];
    return phi_sg[i - 1] * (-h2 / (h1 * (h1 + h2))) + phi_sg[i] * ((h2 - h1) / (h1 * h2)) +
           phi_sg[i + 1] * (h1 / (h2 * (h1 + h2)));
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double rate = rate_at(i);
    trace.dnu_hz[i] = rate / kTwoPi;
    trace.v_delta[i] = wavelength * trace.dnu_hz[i];
  }
  return trace;
}

PipelineResult run_pipeline(const RxSeries& rx1, const RxSeries& rx0, const PipelineConfig& cfg) {
  cfg.validate();
  const std::size_t n = rx1.times.size();
  if (n < 2) throw ProcessingError("insufficient samples for derivative");

  PipelineResult result;
  const CompositeSeries comp = cross_multiply(rx1, rx0);
  const CompositeSeries unit = normalize(comp, cfg.zero_magnitude_epsilon, result.flagged);
  const std::vector<Complex> zbar = subcarrier_average(unit);

  result.phase.times = comp.times;
  result.phase.phi_raw = unwrap_phase(zbar);

  switch (cfg.background) {
    case BackgroundMode::none:
      result.phase.phi = result.phase.phi_raw;
      break;
    case BackgroundMode::mean_of_static_window: {
      std::size_t start = cfg.background_start;
      std::size_t end = cfg.background_end;
      if (start == 0 && end == 0) end = std::max<std::size_t>(1, n / 10);
      const double bg = estimate_background(result.phase.phi_raw, start, end);
      result.phase.phi = result.phase.phi_raw;
      for (double& v : result.phase.phi) v -= bg;
      break;
    }
    case BackgroundMode::moving_mean: {
      const std::vector<double> bg = moving_background(result.phase.phi_raw, cfg.moving_window);
      result.phase.phi = result.phase.phi_raw;
      for (std::size_t i = 0; i < n; ++i) result.phase.phi[i] -= bg[i];
      break;
    }
    case BackgroundMode::external_profile: {
      if (cfg.external_profile.size() != 1 && cfg.external_profile.size() != n)
        throw ProcessingError("external background profile length mismatch");
      result.phase.phi = result.phase.phi_raw;
      for (std::size_t i = 0; i < n; ++i)
        result.phase.phi[i] -=
            cfg.external_profile[cfg.external_profile.size() == 1 ? 0 : i];
      break;
    }
  }

  int window = cfg.sg_window;
  if (static_cast<std::size_t>(window) > n) {
    window = static_cast<int>(n % 2 == 0 ? n - 1 : n);  // largest odd window that fits
    if (window <= cfg.sg_order)
      throw ProcessingError("trace too short for the configured sg_order");
  }
  result.effective_sg_window = window;
  result.phase.phi_sg = savitzky_golay(result.phase.phi, window, cfg.sg_order);

  result.doppler = phase_derivative(result.phase.phi_sg, comp.times, cfg.wavelength);
  return result;
}

void write_trace_csv(const PipelineResult& result, std::ostream& out) {
  out << "t_s,phi_raw,phi,phi_sg,dnu_hz,v_delta_mps\n";
  const PhaseTrace& p = result.phase;
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    out << format_number(p.times[i]) << ',' << format_number(p.phi_raw[i]) << ','
        << format_number(p.phi[i]) << ',' << format_number(p.phi_sg[i]) << ','
        << format_number(result.doppler.dnu_hz[i]) << ','
        << format_number(result.doppler.v_delta[i]) << "\n";
  }
}

void write_flags_csv(const std::vector<std::pair<std::size_t, std::size_t>>& flagged,
                     std::ostream& out) {
  out << "row,col\n";
  for (const auto& [r, c] : flagged) out << r << ',' << c << "\n";
}

DopplerTrace read_trace_csv(std::istream& in) {
  DopplerTrace trace;
  std::string line;
  if (!std::getline(in, line)) throw ProcessingError("trace CSV is empty");
  if (line.rfind("t_s,", 0) != 0) throw ProcessingError("trace CSV header mismatch");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> fields;
    while (std::getline(ss, field, ',')) {
      try {
        fields.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ProcessingError("trace CSV line " + std::to_string(line_no) + ": bad number");
      }
    }
    if (fields.size() != 6)
      throw ProcessingError("trace CSV line " + std::to_string(line_no) + ": expected 6 columns");
    trace.times.push_back(fields[0]);
    trace.dnu_hz.push_back(fields[4]);
    trace.v_delta.push_back(fields[5]);
  }
  return trace;
}

}  // namespace ltesense
