#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ltesense/types.hpp"

namespace ltesense::kernels {

// Data-parallel inner loops of the synthesis and phase pipeline. Each kernel
// has an OpenMP implementation (this namespace) and a plain serial twin in
// kernels::serial used as the reference in tests and benchmarks. Both paths
// evaluate every output element with the same expression and accumulation
// order, so results are bit-identical regardless of thread count.

/// out[i] = a[i] * conj(b[i])
void cross_conj_multiply(std::span<const Complex> a, std::span<const Complex> b,
                         std::span<Complex> out);

/// Per-column unit normalization with carry-forward at |z| < epsilon:
/// degenerate samples take the previous unit value in the same column
/// ((1,0) at row 0) and their (row,col) is appended to flagged.
void normalize_unit(const CMatrix& in, double epsilon, CMatrix& out,
                    std::vector<std::pair<std::size_t, std::size_t>>& flagged);

/// out[r] = mean over columns of row r.
void row_mean(const CMatrix& in, std::vector<Complex>& out);

/// Sliding dot products for a Savitzky-Golay filter: interior rows use the
/// center taps; the first/last half-window rows reuse the first/last window
/// with the matching off-center tap rows. taps has 2h+1 rows of length w.
void sg_apply(std::span<const double> x, const std::vector<std::vector<double>>& taps,
              std::vector<double>& out);

/// Channel synthesis fill: values(n,k) = impairment[n] *
///   (static_resp[k] + dyn_amp * exp(-i 2 pi freqs[k] path_len[n] / c)).
void synth_fill(std::span<const double> path_len_m, std::span<const double> freqs_hz,
                std::span<const Complex> static_resp, Complex dyn_amp,
                std::span<const Complex> impairment, CMatrix& values);

namespace serial {

void cross_conj_multiply(std::span<const Complex> a, std::span<const Complex> b,
                         std::span<Complex> out);
void normalize_unit(const CMatrix& in, double epsilon, CMatrix& out,
                    std::vector<std::pair<std::size_t, std::size_t>>& flagged);
void row_mean(const CMatrix& in, std::vector<Complex>& out);
void sg_apply(std::span<const double> x, const std::vector<std::vector<double>>& taps,
              std::vector<double>& out);
void synth_fill(std::span<const double> path_len_m, std::span<const double> freqs_hz,
                std::span<const Complex> static_resp, Complex dyn_amp,
                std::span<const Complex> impairment, CMatrix& values);

}  // namespace serial
}  // namespace ltesense::kernels
