// Timing comparison of the OpenMP kernels against their serial references.
// Prints one row per kernel and size; also cross-checks that both paths
// agree bit for bit before timing.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ltesense/kernels.hpp"
#include "ltesense/pipeline.hpp"

using namespace ltesense;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CMatrix m(rows, cols);
  for (auto& z : m.data) z = Complex{dist(rng), dist(rng)};
  return m;
}

void report(const char* name, std::size_t n, double serial_ms, double omp_ms, bool equal) {
  std::printf("%-20s n=%-9zu serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   %s\n", name, n,
              serial_ms, omp_ms, serial_ms / omp_ms, equal ? "match" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif

  for (std::size_t rows : {20000ul, 200000ul}) {
    const std::size_t cols = 16;
    const CMatrix a = random_matrix(rows, cols, 1);
    const CMatrix b = random_matrix(rows, cols, 2);

    {
      std::vector<Complex> out_s(a.data.size()), out_p(a.data.size());
      const double ts = time_ms(
          [&] { kernels::serial::cross_conj_multiply(a.data, b.data, out_s); }, 5);
      const double tp =
          time_ms([&] { kernels::cross_conj_multiply(a.data, b.data, out_p); }, 5);
      report("cross_conj_multiply", rows * cols, ts, tp, out_s == out_p);
    }
    {
      CMatrix out_s, out_p;
      std::vector<std::pair<std::size_t, std::size_t>> f_s, f_p;
      const double ts = time_ms(
          [&] {
            f_s.clear();
            kernels::serial::normalize_unit(a, 1e-12, out_s, f_s);
          },
          5);
      const double tp = time_ms(
          [&] {
            f_p.clear();
            kernels::normalize_unit(a, 1e-12, out_p, f_p);
          },
          5);
      report("normalize_unit", rows * cols, ts, tp, out_s == out_p && f_s == f_p);
    }
    {
      std::vector<Complex> out_s, out_p;
      const double ts = time_ms([&] { kernels::serial::row_mean(a, out_s); }, 5);
      const double tp = time_ms([&] { kernels::row_mean(a, out_p); }, 5);
      report("row_mean", rows * cols, ts, tp, out_s == out_p);
    }
    {
      std::vector<double> x(rows);
      std::mt19937_64 rng(3);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (auto& v : x) v = dist(rng);
      const auto taps = build_sg_taps(31, 3);
      std::vector<double> out_s, out_p;
      const double ts = time_ms([&] { kernels::serial::sg_apply(x, taps, out_s); }, 5);
      const double tp = time_ms([&] { kernels::sg_apply(x, taps, out_p); }, 5);
      report("sg_apply w=31", rows, ts, tp, out_s == out_p);
    }
    {
      std::vector<double> lens(rows), freqs(cols);
      for (std::size_t i = 0; i < rows; ++i) lens[i] = 10.0 + 1e-3 * static_cast<double>(i);
      for (std::size_t k = 0; k < cols; ++k)
        freqs[k] = 2.1e9 + 15e3 * static_cast<double>(k);
      std::vector<Complex> statics(cols, Complex{0.05, 0.0});
      std::vector<Complex> imp(rows, Complex{1.0, 0.0});
      CMatrix out_s, out_p;
      const double ts = time_ms(
          [&] {
            kernels::serial::synth_fill(lens, freqs, statics, Complex{1.0, 0.0}, imp, out_s);
          },
          5);
      const double tp = time_ms(
          [&] { kernels::synth_fill(lens, freqs, statics, Complex{1.0, 0.0}, imp, out_p); }, 5);
      report("synth_fill", rows * cols, ts, tp, out_s == out_p);
    }
  }
  return 0;
}
