#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ltesense {

using Complex = std::complex<double>;

/// Dense row-major complex matrix, rows = time, cols = subcarriers.
struct CMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const CMatrix&) const = default;
};

enum class CyclicPrefix { normal, extended };

struct CellParameters {
  double center_freq_hz = 0.0;  // stored verbatim from the log, never trusted for physics
  int nof_prb = 0;
  CyclicPrefix cp = CyclicPrefix::normal;
  int symbol_sz = 0;
  int useful_re = 0;
  int offset = 0;  // parsed and exposed, semantics unspecified upstream
  int ofdm_symbols = 0;

  bool operator==(const CellParameters&) const = default;
};

struct PortRxKey {
  int port = 0;
  int rx = 0;
  auto operator<=>(const PortRxKey&) const = default;
};

struct PortRxData {
  std::vector<int> ofdm_block_indices;  // strictly increasing, each < cell.ofdm_symbols
  CMatrix csi;                          // rows = #ofdm_blocks, cols = #subcarriers

  bool operator==(const PortRxData&) const = default;
};

struct CsiBlock {
  std::int64_t timestamp_us = 0;  // microseconds since epoch
  double snr_db = 0.0;            // opaque dB-scale value as logged
  double rsrp_db = 0.0;
  CellParameters cell;
  int subcarrier_stride = 1;
  int block_stride = 1;
  std::map<PortRxKey, PortRxData> port_data;
  std::vector<std::string> extra_header_lines;  // unknown header lines, preserved verbatim

  bool operator==(const CsiBlock&) const = default;
};

struct CsiCapture {
  std::vector<CsiBlock> blocks;

  bool operator==(const CsiCapture&) const = default;
};

/// Time x subcarrier view of one (port,rx) stream on the sampling grid.
struct RxSeries {
  std::vector<double> times;  // seconds, relative to first sample, strictly increasing
  std::vector<double> freqs;  // Hz, subcarrier centers
  CMatrix values;             // rows = len(times), cols = len(freqs)

  bool operator==(const RxSeries&) const = default;
};

}  // namespace ltesense
