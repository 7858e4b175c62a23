#pragma once

#include <ostream>
#include <string>

#include "ltesense/types.hpp"

namespace ltesense {

struct SeriesOptions {
  double symbol_duration_s = 1.0 / 14000.0;  // 14 OFDM symbols per 1 ms subframe
  double subcarrier_spacing_hz = 15000.0;    // LTE grid; scaled by subcarrier_stride
};

/// Flattens one (port,rx) stream of a capture onto the time-frequency grid.
/// Sample time = block timestamp (relative, us -> s) + ofdm index * T_sym;
/// frequencies are centered on cell.center_freq_hz with spacing
/// subcarrier_spacing * subcarrier_stride. Throws ProcessingError when the
/// key is missing or the resulting time axis is not strictly increasing.
RxSeries capture_to_series(const CsiCapture& capture, int port, int rx,
                           const SeriesOptions& opts = {});

/// CSV with header t_s,f_hz,re,im, time-major, shortest fixed-notation
/// number formatting (round-trip exact).
void export_series_csv(const RxSeries& series, std::ostream& sink);

/// Shortest decimal fixed-notation rendering that parses back to the same
/// double. Shared by every CSV writer so outputs stay byte-deterministic.
std::string format_number(double v);

}  // namespace ltesense
