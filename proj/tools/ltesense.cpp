#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "ltesense/cli_commands.hpp"
#include "ltesense/config_io.hpp"

using namespace ltesense;

int main(int argc, char** argv) {
  CLI::App app{"Passive dual-receiver LTE-CSI motion sensing toolkit"};
  app.require_subcommand(1);

  std::string input, out_dir = "out", config_path, geometry_path, truth_path;
  std::string pair_text = "0,0:0,1";
  std::optional<std::uint64_t> seed;
  double symbol_duration = 1.0 / 14000.0;
  double subcarrier_spacing = 15000.0;
  bool dump_config = false;

  auto* parse_cmd = app.add_subcommand("parse", "Parse a CSI estimation log");
  parse_cmd->add_option("log", input, "estimation log file")->required();
  parse_cmd->add_option("--out", out_dir, "output directory");

  auto* sim_cmd = app.add_subcommand("simulate", "Synthesize a dual-RX capture");
  sim_cmd->add_option("scenario", config_path, "scenario JSON");
  sim_cmd->add_option("--out", out_dir, "output directory");
  sim_cmd->add_option("--seed", seed, "master seed override");
  sim_cmd->add_flag("--dump-config", dump_config, "print the default scenario JSON and exit");

  auto* proc_cmd = app.add_subcommand("process", "Run the differential-Doppler pipeline");
  proc_cmd->add_option("log", input, "estimation log file");
  proc_cmd->add_option("--config", config_path, "pipeline config JSON");
  proc_cmd->add_option("--out", out_dir, "output directory");
  proc_cmd->add_option("--pair", pair_text, "PORT,RX:PORT,RX (rx0 first, rx1 second)");
  proc_cmd->add_option("--symbol-duration", symbol_duration, "OFDM symbol duration in seconds");
  proc_cmd->add_option("--subcarrier-spacing", subcarrier_spacing, "subcarrier spacing in Hz");
  proc_cmd->add_flag("--dump-config", dump_config, "print the default pipeline JSON and exit");

  auto* det_cmd = app.add_subcommand("detect", "Detect crossing events in a trace");
  det_cmd->add_option("trace", input, "trace.csv from process");
  det_cmd->add_option("--config", config_path, "detector config JSON");
  det_cmd->add_option("--geometry", geometry_path, "baseline geometry JSON");
  det_cmd->add_option("--out", out_dir, "output directory");
  det_cmd->add_flag("--dump-config", dump_config, "print the default detector JSON and exit");

  auto* eval_cmd = app.add_subcommand("evaluate", "Score events against ground truth");
  eval_cmd->add_option("events", input, "events.json from detect");
  eval_cmd->add_option("--truth", truth_path, "ground truth CSV (t_s,speed,unit,direction)");
  eval_cmd->add_option("--config", config_path, "evaluation config JSON");
  eval_cmd->add_option("--out", out_dir, "output directory");
  eval_cmd->add_flag("--dump-config", dump_config, "print the default evaluation JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }

  if (dump_config) {
    if (sim_cmd->parsed()) {
      SimulationConfig c;
      c.geometry.velocity_x = 0.1;
      std::cout << simulation_config_to_json(c).dump(2) << "\n";
    } else if (proc_cmd->parsed()) {
      std::cout << pipeline_config_to_json(PipelineConfig{}).dump(2) << "\n";
    } else if (det_cmd->parsed()) {
      std::cout << detector_config_to_json(DetectorConfig{}).dump(2) << "\n";
      std::cout << baseline_geometry_to_json(BaselineGeometry{}).dump(2) << "\n";
    } else if (eval_cmd->parsed()) {
      std::cout << eval_config_to_json(EvalConfig{}).dump(2) << "\n";
    }
    return cli::kExitOk;
  }

  return cli::run_guarded(
      [&] {
        if (parse_cmd->parsed()) {
          cli::cmd_parse(input, out_dir, std::cout);
        } else if (sim_cmd->parsed()) {
          if (config_path.empty()) throw ValidationError("simulate: scenario JSON required");
          cli::cmd_simulate(config_path, out_dir, seed, std::cout);
        } else if (proc_cmd->parsed()) {
          if (input.empty()) throw ValidationError("process: log file required");
          cli::ProcessOptions opts;
          opts.pair = cli::parse_pair_flag(pair_text);
          opts.symbol_duration_s = symbol_duration;
          opts.subcarrier_spacing_hz = subcarrier_spacing;
          cli::cmd_process(input, config_path, out_dir, opts, std::cout);
        } else if (det_cmd->parsed()) {
          if (input.empty()) throw ValidationError("detect: trace file required");
          cli::cmd_detect(input, config_path, geometry_path, out_dir, std::cout);
        } else if (eval_cmd->parsed()) {
          if (input.empty()) throw ValidationError("evaluate: events file required");
          if (truth_path.empty()) throw ValidationError("evaluate: --truth is required");
          cli::cmd_evaluate(input, truth_path, config_path, out_dir, std::cout);
        }
      },
      std::cerr);
}
