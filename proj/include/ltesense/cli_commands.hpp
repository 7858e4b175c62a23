#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "ltesense/types.hpp"

namespace ltesense::cli {

// Exit-code contract: 0 success, 2 validation, 3 input parse, 4 processing,
// 1 anything else.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitProcessing = 4;

struct PairSelection {
  PortRxKey rx0{0, 0};
  PortRxKey rx1{0, 1};
};

/// "P,R:P,R" (rx0 spec first, rx1 second; the pipeline forms rx1*conj(rx0)).
PairSelection parse_pair_flag(const std::string& text);

struct ProcessOptions {
  PairSelection pair;
  double symbol_duration_s = 1.0 / 14000.0;
  double subcarrier_spacing_hz = 15000.0;
};

void cmd_parse(const std::string& log_path, const std::string& out_dir, std::ostream& summary);
void cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed, std::ostream& summary);
void cmd_process(const std::string& log_path, const std::string& pipeline_config_path,
                 const std::string& out_dir, const ProcessOptions& opts, std::ostream& summary);
void cmd_detect(const std::string& trace_path, const std::string& detector_config_path,
                const std::string& geometry_config_path, const std::string& out_dir,
                std::ostream& summary);
void cmd_evaluate(const std::string& events_path, const std::string& truth_path,
                  const std::string& eval_config_path, const std::string& out_dir,
                  std::ostream& summary);

/// Runs fn, prints errors to err, returns the contract exit code.
int run_guarded(const std::function<void()>& fn, std::ostream& err);

}  // namespace ltesense::cli
