#include "ltesense/series.hpp"

#include <charconv>
#include <cstdint>

#include "ltesense/errors.hpp"

namespace ltesense {

std::string format_number(double v) {
  char buf[512];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (ec != std::errc()) throw ProcessingError("number formatting failed");
  return std::string(buf, p);
}

RxSeries capture_to_series(const CsiCapture& capture, int port, int rx,
                           const SeriesOptions& opts) {
  RxSeries series;
  if (capture.blocks.empty()) return series;

  const PortRxKey key{port, rx};
  std::size_t total_rows = 0;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < capture.blocks.size(); ++i) {
    auto it = capture.blocks[i].port_data.find(key);
    if (it == capture.blocks[i].port_data.end())
      throw ProcessingError("block " + std::to_string(i) + " has no (port " +
                            std::to_string(port) + ", rx " + std::to_string(rx) + ") entry");
    total_rows += it->second.csi.rows;
    cols = it->second.csi.cols;
  }

  const CsiBlock& first = capture.blocks.front();
  const std::int64_t t0_us = first.timestamp_us;
  const int idx0 = first.port_data.at(key).ofdm_block_indices.front();

  series.values = CMatrix(total_rows, cols);
  series.times.reserve(total_rows);

  const double spacing = opts.subcarrier_spacing_hz * first.subcarrier_stride;
  const double k0 = (static_cast<double>(cols) - 1.0) / 2.0;
  for (std::size_t c = 0; c < cols; ++c)
    series.freqs.push_back(first.cell.center_freq_hz + (static_cast<double>(c) - k0) * spacing);

  std::size_t row = 0;
  for (const CsiBlock& block : capture.blocks) {
    const PortRxData& data = block.port_data.at(key);
    const double base_s = static_cast<double>(block.timestamp_us - t0_us) * 1e-6;
    for (std::size_t r = 0; r < data.csi.rows; ++r) {
      const double t = base_s + (data.ofdm_block_indices[r] - idx0) * opts.symbol_duration_s;
      if (!series.times.empty() && t <= series.times.back())
        throw ProcessingError("non-monotonic sample times at row " + std::to_string(row));
      series.times.push_back(t);
      for (std::size_t c = 0; c < cols; ++c) series.values(row, c) = data.csi(r, c);
      ++row;
    }
  }
  return series;
}

void export_series_csv(const RxSeries& series, std::ostream& sink) {
  sink << "t_s,f_hz,re,im\n";
  for (std::size_t r = 0; r < series.values.rows; ++r) {
    for (std::size_t c = 0; c < series.values.cols; ++c) {
      const Complex& z = series.values(r, c);
      sink << format_number(series.times[r]) << ',' << format_number(series.freqs[c]) << ','
           << format_number(z.real()) << ',' << format_number(z.imag()) << "\n";
    }
  }
  if (!sink) throw ProcessingError("series CSV write failed");
}

}  // namespace ltesense
