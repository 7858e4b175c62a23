#include "ltesense/cli_commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltesense/config_io.hpp"
#include "ltesense/log_parser.hpp"
#include "ltesense/log_writer.hpp"
#include "ltesense/series.hpp"

namespace ltesense::cli {
namespace {

constexpr const char* kToolVersion = "0.1.0";
namespace fs = std::filesystem;

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ProcessingError("cannot create output directory " + out_dir + ": " + ec.message());
}

/// The manifest is written before any other output of a run.
void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& configs,
                    std::optional<std::uint64_t> seed, const std::string& resolved_config_dump) {
  Json manifest{{"subcommand", subcommand},
                {"inputs", inputs},
                {"configs", configs},
                {"out_dir", out_dir},
                {"tool_version", kToolVersion},
                {"config_hash", fnv1a_hex(resolved_config_dump)}};
  if (seed)
    manifest["seed"] = *seed;
  else
    manifest["seed"] = nullptr;
  write_json_file(manifest, (fs::path(out_dir) / "manifest.json").string());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ProcessingError("cannot write file: " + path);
  out << text;
  if (!out) throw ProcessingError("write failed: " + path);
}

std::string pair_name(const PortRxKey& key) {
  return "p" + std::to_string(key.port) + "_rx" + std::to_string(key.rx);
}

}  // namespace

PairSelection parse_pair_flag(const std::string& text) {
  PairSelection sel;
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("--pair expects PORT,RX:PORT,RX, got '" + text + "'");
  auto parse_one = [&](const std::string& part) {
    const auto comma = part.find(',');
    if (comma == std::string::npos)
      throw ValidationError("--pair expects PORT,RX:PORT,RX, got '" + text + "'");
    try {
      return PortRxKey{std::stoi(part.substr(0, comma)), std::stoi(part.substr(comma + 1))};
    } catch (const std::exception&) {
      throw ValidationError("--pair expects integer PORT,RX values, got '" + text + "'");
    }
  };
  sel.rx0 = parse_one(text.substr(0, colon));
  sel.rx1 = parse_one(text.substr(colon + 1));
  if (sel.rx0 == sel.rx1) throw ValidationError("--pair selects the same stream twice");
  return sel;
}

void cmd_parse(const std::string& log_path, const std::string& out_dir, std::ostream& summary) {
  ensure_out_dir(out_dir);
  write_manifest(out_dir, "parse", {log_path}, {}, std::nullopt, "");

  const CsiCapture capture = parse_capture_file(log_path);
  write_json_file(capture_metadata_to_json(capture),
                  (fs::path(out_dir) / "metadata.json").string());

  summary << "blocks: " << capture.blocks.size() << "\n";
  if (!capture.blocks.empty()) {
    summary << "pairs:";
    for (const auto& [key, data] : capture.blocks.front().port_data) {
      summary << " (" << key.port << "," << key.rx << ")";
      const RxSeries series = capture_to_series(capture, key.port, key.rx);
      std::ostringstream csv;
      export_series_csv(series, csv);
      write_text_file((fs::path(out_dir) / ("series_" + pair_name(key) + ".csv")).string(),
                      csv.str());
    }
    summary << "\n";
  }
}

void cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed, std::ostream& summary) {
  SimulationConfig config = simulation_config_from_json(load_json_file(scenario_path));
  if (seed) {
    config.impairment.seed = *seed;
    config.noise.seed = *seed + 1;
  }
  ensure_out_dir(out_dir);
  write_manifest(out_dir, "simulate", {scenario_path}, {scenario_path}, seed,
                 simulation_config_to_json(config).dump());

  const SynthesisResult result = synthesize_pair(config);
  const CsiCapture capture =
      emit_capture(result.rx0, result.rx1, make_capture_template(config));

  {
    std::ofstream log((fs::path(out_dir) / "capture.log").string());
    if (!log) throw ProcessingError("cannot write capture.log");
    write_capture(capture, log);
  }
  {
    std::ofstream truth((fs::path(out_dir) / "truth.csv").string());
    if (!truth) throw ProcessingError("cannot write truth.csv");
    write_truth_csv(result.truth, truth);
  }
  {
    std::vector<GroundTruthEvent> events;
    if (result.truth.crossing_time_s && *result.truth.crossing_time_s >= 0.0 &&
        *result.truth.crossing_time_s <= config.duration) {
      GroundTruthEvent e;
      e.t_true = *result.truth.crossing_time_s;
      e.speed_true = std::abs(config.geometry.velocity_x);
      e.direction_true = config.geometry.velocity_x > 0.0 ? Direction::rx0_to_rx1
                                                          : Direction::rx1_to_rx0;
      events.push_back(e);
    }
    std::ofstream out((fs::path(out_dir) / "truth_events.csv").string());
    if (!out) throw ProcessingError("cannot write truth_events.csv");
    write_truth_events_csv(events, out);
  }
  summary << "samples: " << result.truth.times.size() << "\n";
  if (result.truth.crossing_time_s)
    summary << "crossing_time_s: " << *result.truth.crossing_time_s << "\n";
}

void cmd_process(const std::string& log_path, const std::string& pipeline_config_path,
                 const std::string& out_dir, const ProcessOptions& opts, std::ostream& summary) {
  PipelineConfig cfg;
  std::string resolved;
  if (!pipeline_config_path.empty()) {
    cfg = pipeline_config_from_json(load_json_file(pipeline_config_path));
    resolved = pipeline_config_to_json(cfg).dump();
  } else {
    resolved = pipeline_config_to_json(cfg).dump();
  }
  ensure_out_dir(out_dir);
  write_manifest(out_dir, "process", {log_path},
                 pipeline_config_path.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{pipeline_config_path},
                 std::nullopt, resolved);

  const CsiCapture capture = parse_capture_file(log_path);
  SeriesOptions series_opts;
  series_opts.symbol_duration_s = opts.symbol_duration_s;
  series_opts.subcarrier_spacing_hz = opts.subcarrier_spacing_hz;
  const RxSeries rx0 =
      capture_to_series(capture, opts.pair.rx0.port, opts.pair.rx0.rx, series_opts);
  const RxSeries rx1 =
      capture_to_series(capture, opts.pair.rx1.port, opts.pair.rx1.rx, series_opts);

  const PipelineResult result = run_pipeline(rx1, rx0, cfg);
  {
    std::ofstream out((fs::path(out_dir) / "trace.csv").string());
    if (!out) throw ProcessingError("cannot write trace.csv");
    write_trace_csv(result, out);
  }
  {
    std::ofstream out((fs::path(out_dir) / "flags.csv").string());
    if (!out) throw ProcessingError("cannot write flags.csv");
    write_flags_csv(result.flagged, out);
  }
  summary << "samples: " << result.phase.times.size()
          << ", degenerate: " << result.flagged.size()
          << ", sg_window: " << result.effective_sg_window << "\n";
}

void cmd_detect(const std::string& trace_path, const std::string& detector_config_path,
                const std::string& geometry_config_path, const std::string& out_dir,
                std::ostream& summary) {
  DetectorConfig det;
  if (!detector_config_path.empty())
    det = detector_config_from_json(load_json_file(detector_config_path));
  BaselineGeometry geom;
  if (!geometry_config_path.empty())
    geom = baseline_geometry_from_json(load_json_file(geometry_config_path));

  std::vector<std::string> configs;
  if (!detector_config_path.empty()) configs.push_back(detector_config_path);
  if (!geometry_config_path.empty()) configs.push_back(geometry_config_path);

  ensure_out_dir(out_dir);
  write_manifest(out_dir, "detect", {trace_path}, configs, std::nullopt,
                 detector_config_to_json(det).dump() + baseline_geometry_to_json(geom).dump());

  std::ifstream in(trace_path);
  if (!in) throw ProcessingError("cannot open trace file: " + trace_path);
  const DopplerTrace trace = read_trace_csv(in);

  std::vector<MotionEvent> events = detect_events(trace, det);
  for (MotionEvent& e : events) e.speed_estimate = estimate_speed(e, geom);

  write_json_file(events_to_json(events), (fs::path(out_dir) / "events.json").string());
  {
    std::ofstream out((fs::path(out_dir) / "events.csv").string());
    if (!out) throw ProcessingError("cannot write events.csv");
    write_events_csv(events, out);
  }
  summary << "events: " << events.size() << "\n";
  for (const MotionEvent& e : events)
    summary << "  t=" << e.t_peak << "s v_delta=" << e.v_delta_peak << "m/s speed="
            << e.speed_estimate << "m/s (" << e.speed_estimate * 3.6 << "km/h) "
            << (e.direction == Direction::rx0_to_rx1 ? "rx0_to_rx1" : "rx1_to_rx0") << "\n";
}

void cmd_evaluate(const std::string& events_path, const std::string& truth_path,
                  const std::string& eval_config_path, const std::string& out_dir,
                  std::ostream& summary) {
  EvalConfig cfg;
  if (!eval_config_path.empty()) cfg = eval_config_from_json(load_json_file(eval_config_path));

  ensure_out_dir(out_dir);
  write_manifest(out_dir, "evaluate", {events_path, truth_path},
                 eval_config_path.empty() ? std::vector<std::string>{}
                                          : std::vector<std::string>{eval_config_path},
                 std::nullopt, eval_config_to_json(cfg).dump());

  std::vector<MotionEvent> events = events_from_json(load_json_file(events_path));
  std::ifstream truth_in(truth_path);
  if (!truth_in) throw ProcessingError("cannot open truth file: " + truth_path);
  std::vector<GroundTruthEvent> truth = read_truth_events_csv(truth_in);

  // Speed classes from the distinct truth speeds; with two or more classes
  // the matched events calibrate the bin boundaries (intra-session scheme).
  std::vector<double> distinct;
  for (const GroundTruthEvent& t : truth) distinct.push_back(t.speed_true);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> boundaries;
  if (distinct.size() >= 2) {
    for (GroundTruthEvent& t : truth)
      t.speed_class = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), t.speed_true) - distinct.begin());
    const EvaluationReport matching = evaluate(events, truth, cfg);
    std::vector<LabeledPeak> peaks;
    for (const MatchPair& m : matching.matches)
      peaks.push_back({events[m.event_index].v_delta_peak, truth[m.truth_index].speed_class});
    try {
      boundaries = calibrate_boundaries(peaks);
      classify_speed(events, boundaries);
    } catch (const ProcessingError& e) {
      summary << "speed classes not separable; confusion omitted (" << e.what() << ")\n";
    }
  }

  const EvaluationReport report = evaluate(events, truth, cfg);
  Json report_json = report_to_json(report, cfg);
  report_json["class_boundaries"] = boundaries;
  write_json_file(report_json, (fs::path(out_dir) / "report.json").string());
  {
    std::ofstream out((fs::path(out_dir) / "confusion.csv").string());
    if (!out) throw ProcessingError("cannot write confusion.csv");
    write_confusion_csv(report.confusion, out);
  }
  summary << "tp=" << report.tp << " fp=" << report.fp << " fn=" << report.fn
          << " tn=" << report.tn << "\n";
  summary << "DR=" << report.dr << " FPR=" << report.fpr;
  if (!report.confusion.empty()) summary << " accuracy=" << report.accuracy;
  summary << "\n";
}

int run_guarded(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ProcessingError& e) {
    err << "processing error: " << e.what() << "\n";
    return kExitProcessing;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ltesense::cli
