#include "ltesense/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ltesense::kernels {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSpeedOfLight = 299792458.0;

inline Complex cross_one(const Complex& a, const Complex& b) { return a * std::conj(b); }

inline void normalize_column(const CMatrix& in, double epsilon, std::size_t c, CMatrix& out,
                             std::vector<std::pair<std::size_t, std::size_t>>& flagged) {
  Complex prev_unit{1.0, 0.0};
  for (std::size_t r = 0; r < in.rows; ++r) {
    const Complex& z = in(r, c);
    const double mag = std::abs(z);
    if (mag < epsilon) {
      out(r, c) = prev_unit;
      flagged.emplace_back(r, c);
    } else {
      prev_unit = z / mag;
      out(r, c) = prev_unit;
    }
  }
}

inline Complex mean_of_row(const CMatrix& in, std::size_t r) {
  Complex acc{0.0, 0.0};
  for (std::size_t c = 0; c < in.cols; ++c) acc += in(r, c);
  return acc / static_cast<double>(in.cols);
}

inline double sg_one(std::span<const double> x, const std::vector<std::vector<double>>& taps,
                     std::size_t i, std::size_t n, std::size_t h, std::size_t w) {
  std::size_t start, row;
  if (i < h) {
    start = 0;
    row = i;
  } else if (i + h < n) {
    start = i - h;
    row = h;
  } else {
    start = n - w;
    row = i - (n - 1 - h) + h;
  }
  const std::vector<double>& t = taps[row];
  double acc = 0.0;
  for (std::size_t j = 0; j < w; ++j) acc += t[j] * x[start + j];
  return acc;
}

inline Complex synth_one(double len, double freq, const Complex& stat, const Complex& dyn_amp,
                         const Complex& imp) {
  const double phase = -kTwoPi * freq * (len / kSpeedOfLight);
  return imp * (stat + dyn_amp * Complex{std::cos(phase), std::sin(phase)});
}

}  // namespace

void cross_conj_multiply(std::span<const Complex> a, std::span<const Complex> b,
                         std::span<Complex> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = cross_one(a[i], b[i]);
}

void normalize_unit(const CMatrix& in, double epsilon, CMatrix& out,
                    std::vector<std::pair<std::size_t, std::size_t>>& flagged) {
  out = CMatrix(in.rows, in.cols);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> per_col(in.cols);
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(in.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c)
    normalize_column(in, epsilon, static_cast<std::size_t>(c), out, per_col[c]);
  for (const auto& v : per_col) flagged.insert(flagged.end(), v.begin(), v.end());
  std::sort(flagged.begin(), flagged.end());
}

void row_mean(const CMatrix& in, std::vector<Complex>& out) {
  out.assign(in.rows, Complex{});
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(in.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) out[r] = mean_of_row(in, r);
}

void sg_apply(std::span<const double> x, const std::vector<std::vector<double>>& taps,
              std::vector<double>& out) {
  const std::size_t w = taps.empty() ? 0 : taps.front().size();
  const std::size_t h = w / 2;
  const std::size_t n = x.size();
  assert(w % 2 == 1 && taps.size() == w && n >= w);
  out.assign(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[i] = sg_one(x, taps, static_cast<std::size_t>(i), n, h, w);
}

void synth_fill(std::span<const double> path_len_m, std::span<const double> freqs_hz,
                std::span<const Complex> static_resp, Complex dyn_amp,
                std::span<const Complex> impairment, CMatrix& values) {
  const std::size_t rows = path_len_m.size();
  const std::size_t cols = freqs_hz.size();
  assert(static_resp.size() == cols && impairment.size() == rows);
  values = CMatrix(rows, cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      values(r, c) = synth_one(path_len_m[r], freqs_hz[c], static_resp[c], dyn_amp, impairment[r]);
}

namespace serial {

void cross_conj_multiply(std::span<const Complex> a, std::span<const Complex> b,
                         std::span<Complex> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = cross_one(a[i], b[i]);
}

void normalize_unit(const CMatrix& in, double epsilon, CMatrix& out,
                    std::vector<std::pair<std::size_t, std::size_t>>& flagged) {
  out = CMatrix(in.rows, in.cols);
  for (std::size_t c = 0; c < in.cols; ++c) normalize_column(in, epsilon, c, out, flagged);
  std::sort(flagged.begin(), flagged.end());
}

void row_mean(const CMatrix& in, std::vector<Complex>& out) {
  out.assign(in.rows, Complex{});
  for (std::size_t r = 0; r < in.rows; ++r) out[r] = mean_of_row(in, r);
}

void sg_apply(std::span<const double> x, const std::vector<std::vector<double>>& taps,
              std::vector<double>& out) {
  const std::size_t w = taps.empty() ? 0 : taps.front().size();
  const std::size_t h = w / 2;
  const std::size_t n = x.size();
  assert(w % 2 == 1 && taps.size() == w && n >= w);
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = sg_one(x, taps, i, n, h, w);
}

void synth_fill(std::span<const double> path_len_m, std::span<const double> freqs_hz,
                std::span<const Complex> static_resp, Complex dyn_amp,
                std::span<const Complex> impairment, CMatrix& values) {
  const std::size_t rows = path_len_m.size();
  const std::size_t cols = freqs_hz.size();
  assert(static_resp.size() == cols && impairment.size() == rows);
  values = CMatrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      values(r, c) = synth_one(path_len_m[r], freqs_hz[c], static_resp[c], dyn_amp, impairment[r]);
}

}  // namespace serial
}  // namespace ltesense::kernels
