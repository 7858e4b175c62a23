#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltesense/cli_commands.hpp"
#include "ltesense/config_io.hpp"
#include "ltesense/detect.hpp"
#include "ltesense/pipeline.hpp"
#include "ltesense/sim.hpp"
#include "test_helpers.hpp"

using namespace ltesense;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ltesense_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path.string() : (path / child).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_reference_scenario(const std::string& path, double velocity = 0.1,
                              double noise_std = 0.0) {
  Json j = {
      {"geometry",
       {{"tx", {{"far_field", true}}},
        {"rx0", {{"x", -0.025}, {"y", 0.0}}},
        {"rx1", {{"x", 0.025}, {"y", 0.0}}},
        {"reflector_y", 0.05},
        {"reflector_x0", -0.15},
        {"velocity_x", velocity},
        {"wavelength", 0.1428}}},
      {"static0", Json::array({{{"amplitude", {0.03, 0.01}}, {"delay", 20e-9}}})},
      {"static1", Json::array({{{"amplitude", {0.02, -0.02}}, {"delay", 33e-9}}})},
      {"sample_interval", 1e-3},
      {"duration", 3.0},
      {"subcarriers", 4},
      {"noise", {{"complex_noise_std", noise_std}, {"seed", 11}}},
  };
  write_json_file(j, path);
}

}  // namespace

TEST_CASE("pair flag parsing") {
  const cli::PairSelection sel = cli::parse_pair_flag("0,0:0,1");
  CHECK(sel.rx0 == PortRxKey{0, 0});
  CHECK(sel.rx1 == PortRxKey{0, 1});
  CHECK_THROWS_AS(cli::parse_pair_flag("nonsense"), ValidationError);
  CHECK_THROWS_AS(cli::parse_pair_flag("0,0:0,0"), ValidationError);
  CHECK_THROWS_AS(cli::parse_pair_flag("a,b:c,d"), ValidationError);
}

TEST_CASE("exit code mapping follows the contract") {
  std::ostringstream err;
  CHECK(cli::run_guarded([] {}, err) == cli::kExitOk);
  CHECK(cli::run_guarded([] { throw ParseError("x", 0, 1); }, err) == cli::kExitParse);
  CHECK(cli::run_guarded([] { throw ValidationError("x"); }, err) == cli::kExitValidation);
  CHECK(cli::run_guarded([] { throw ProcessingError("x"); }, err) == cli::kExitProcessing);
  CHECK(cli::run_guarded([] { throw std::runtime_error("x"); }, err) == cli::kExitFailure);
}

TEST_CASE("cmd_parse summarizes the sample log and exports series") {
  TempDir dir("parse");
  std::ostringstream summary;
  cli::cmd_parse(testing::fixture_path("estimation_sample.log"), dir.str(), summary);
  CHECK(summary.str().find("blocks: 1") != std::string::npos);
  CHECK(summary.str().find("(0,0)") != std::string::npos);
  CHECK(summary.str().find("(1,1)") != std::string::npos);
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "metadata.json"));
  CHECK(fs::exists(dir.path / "series_p0_rx0.csv"));
  CHECK(fs::exists(dir.path / "series_p1_rx1.csv"));

  const Json meta = load_json_file(dir.str("metadata.json"));
  CHECK(meta["blocks"][0]["timestamp"] == 1743022991574101);
  CHECK(meta["blocks"][0]["nof_prb"] == 100);
}

TEST_CASE("cmd_parse on an empty file reports zero blocks") {
  TempDir dir("parse_empty");
  const std::string empty = dir.str("empty.log");
  std::ofstream(empty).close();
  std::ostringstream summary;
  cli::cmd_parse(empty, dir.str("out"), summary);
  CHECK(summary.str().find("blocks: 0") != std::string::npos);
}

TEST_CASE("truncated records surface as ParseError naming the terminator") {
  TempDir dir("parse_trunc");
  std::ostringstream summary, err;
  const int code = cli::run_guarded(
      [&] { cli::cmd_parse(testing::fixture_path("truncated.log"), dir.str(), summary); }, err);
  CHECK(code == cli::kExitParse);
  CHECK(err.str().find("[END ESTIMATION]") != std::string::npos);
}

TEST_CASE("simulate -> process -> detect -> evaluate composes end to end") {
  TempDir dir("e2e");
  write_reference_scenario(dir.str("scenario.json"));

  std::ostringstream out;
  cli::cmd_simulate(dir.str("scenario.json"), dir.str("sim"), std::nullopt, out);
  CHECK(fs::exists(dir.path / "sim" / "manifest.json"));
  CHECK(fs::exists(dir.path / "sim" / "capture.log"));
  CHECK(fs::exists(dir.path / "sim" / "truth.csv"));
  CHECK(fs::exists(dir.path / "sim" / "truth_events.csv"));

  cli::ProcessOptions popts;
  cli::cmd_process(dir.str("sim/capture.log"), "", dir.str("proc"), popts, out);
  CHECK(fs::exists(dir.path / "proc" / "trace.csv"));
  CHECK(fs::exists(dir.path / "proc" / "flags.csv"));

  // geometry for this scenario: R_m = hypot(0.025, 0.1), half separation 0.025
  write_json_file(Json{{"r_m", std::hypot(0.025, 0.05)},
                       {"half_separation", 0.025},
                       {"wavelength", 0.1428}},
                  dir.str("geometry.json"));
  cli::cmd_detect(dir.str("proc/trace.csv"), "", dir.str("geometry.json"), dir.str("det"), out);
  const Json events = load_json_file(dir.str("det/events.json"));
  REQUIRE(events["events"].size() == 1);
  CHECK(events["events"][0]["direction"] == "rx0_to_rx1");
  const double speed = events["events"][0]["speed_estimate_mps"].get<double>();
  CHECK(speed == doctest::Approx(0.1).epsilon(0.1));

  cli::cmd_evaluate(dir.str("det/events.json"), dir.str("sim/truth_events.csv"), "",
                    dir.str("eval"), out);
  const Json report = load_json_file(dir.str("eval/report.json"));
  CHECK(report["tp"] == 1);
  CHECK(report["fn"] == 0);
  CHECK(report["fp"] == 0);
  CHECK(report["dr"] == doctest::Approx(1.0));
}

TEST_CASE("simulate is byte-deterministic under a fixed seed") {
  TempDir dir("det");
  write_reference_scenario(dir.str("scenario.json"), 0.1, 0.2);
  std::ostringstream out;
  cli::cmd_simulate(dir.str("scenario.json"), dir.str("a"), 7, out);
  cli::cmd_simulate(dir.str("scenario.json"), dir.str("b"), 7, out);
  CHECK(slurp(dir.str("a/capture.log")) == slurp(dir.str("b/capture.log")));
  CHECK(slurp(dir.str("a/truth.csv")) == slurp(dir.str("b/truth.csv")));
}

TEST_CASE("zero-velocity scenario writes an all-zero truth and no events") {
  TempDir dir("zero");
  write_reference_scenario(dir.str("scenario.json"), 0.0);
  std::ostringstream out;
  cli::cmd_simulate(dir.str("scenario.json"), dir.str("sim"), std::nullopt, out);
  std::ifstream truth(dir.str("sim/truth.csv"));
  std::string line;
  std::getline(truth, line);  // header
  while (std::getline(truth, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) == 0.0);
  }
  const std::string events_text = slurp(dir.str("sim/truth_events.csv"));
  CHECK(events_text == "t_s,speed,unit,direction\n");
}

TEST_CASE("bad scenario JSON fails validation with the field path") {
  TempDir dir("badjson");
  write_json_file(Json{{"geometry", Json::object()}}, dir.str("scenario.json"));
  std::ostringstream out, err;
  const int code = cli::run_guarded(
      [&] { cli::cmd_simulate(dir.str("scenario.json"), dir.str("sim"), std::nullopt, out); },
      err);
  CHECK(code == cli::kExitValidation);
  CHECK(err.str().find("geometry.") != std::string::npos);
}

TEST_CASE("cmd_detect reports the pedestrian-scale speed in km/h") {
  TempDir dir("ped");
  // trace with a single pulse peaking at 0.201 m/s
  {
    PipelineResult fake;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      const double t = 0.05 * i;
      const double bump = 0.201 * std::exp(-std::pow((t - 5.0) / 0.8, 2.0));
      fake.phase.times.push_back(t);
      fake.phase.phi_raw.push_back(0.0);
      fake.phase.phi.push_back(0.0);
      fake.phase.phi_sg.push_back(0.0);
      fake.doppler.times.push_back(t);
      fake.doppler.v_delta.push_back(bump);
      fake.doppler.dnu_hz.push_back(bump / 0.1428);
    }
    std::ofstream out(dir.str("trace.csv"));
    write_trace_csv(fake, out);
  }
  write_json_file(Json{{"r_m", 0.77}, {"half_separation", 0.025}, {"wavelength", 0.1428}},
                  dir.str("geometry.json"));
  std::ostringstream summary;
  cli::cmd_detect(dir.str("trace.csv"), "", dir.str("geometry.json"), dir.str("det"), summary);
  const Json events = load_json_file(dir.str("det/events.json"));
  REQUIRE(events["events"].size() == 1);
  CHECK(events["events"][0]["speed_estimate_mps"].get<double>() ==
        doctest::Approx(3.095).epsilon(2e-3));
  CHECK(events["events"][0]["speed_estimate_kmh"].get<double>() ==
        doctest::Approx(11.14).epsilon(2e-3));
}

TEST_CASE("cmd_detect on an all-zero trace writes an empty events file") {
  TempDir dir("zero_trace");
  {
    PipelineResult fake;
    for (int i = 0; i < 50; ++i) {
      const double t = 0.1 * i;
      fake.phase.times.push_back(t);
      fake.phase.phi_raw.push_back(0.0);
      fake.phase.phi.push_back(0.0);
      fake.phase.phi_sg.push_back(0.0);
      fake.doppler.times.push_back(t);
      fake.doppler.v_delta.push_back(0.0);
      fake.doppler.dnu_hz.push_back(0.0);
    }
    std::ofstream out(dir.str("trace.csv"));
    write_trace_csv(fake, out);
  }
  std::ostringstream summary;
  cli::cmd_detect(dir.str("trace.csv"), "", "", dir.str("det"), summary);
  const Json events = load_json_file(dir.str("det/events.json"));
  CHECK(events["events"].empty());
}

TEST_CASE("cmd_evaluate builds a 3x3 confusion over a simulated batch") {
  TempDir dir("batch");
  const double speeds[3] = {2000.0 / 60000.0, 6000.0 / 60000.0, 10000.0 / 60000.0};

  std::vector<MotionEvent> all_events;
  std::vector<GroundTruthEvent> all_truth;
  double offset = 0.0;
  for (int s = 0; s < 3; ++s) {
    for (int rep = 0; rep < 4; ++rep) {
      SimulationConfig c;
      c.geometry.rx0 = {-0.025, 0.0};
      c.geometry.rx1 = {0.025, 0.0};
      c.geometry.reflector_y = 0.05;
      c.geometry.reflector_x0 = -0.25;
      c.geometry.velocity_x = speeds[s];
      c.geometry.wavelength = 0.1428;
      c.sample_interval = 1e-2;
      c.duration = 0.5 / speeds[s];
      c.subcarriers = 4;
      c.noise.complex_noise_std = 0.05;
      c.noise.seed = 500 + s * 4 + rep;
      const SynthesisResult sim = synthesize_pair(c);
      PipelineConfig cfg;
      cfg.wavelength = c.geometry.wavelength;
      const PipelineResult res = run_pipeline(sim.rx1, sim.rx0, cfg);
      for (MotionEvent e : detect_events(res.doppler, DetectorConfig{})) {
        e.t_peak += offset;
        all_events.push_back(e);
      }
      GroundTruthEvent t;
      t.t_true = *sim.truth.crossing_time_s + offset;
      t.speed_true = speeds[s];
      all_truth.push_back(t);
      offset += c.duration + 2.0;
    }
  }

  write_json_file(events_to_json(all_events), dir.str("events.json"));
  {
    std::ofstream out(dir.str("truth.csv"));
    write_truth_events_csv(all_truth, out);
  }
  std::ostringstream summary;
  cli::cmd_evaluate(dir.str("events.json"), dir.str("truth.csv"), "", dir.str("eval"), summary);
  const Json report = load_json_file(dir.str("eval/report.json"));
  REQUIRE(report["confusion"].size() == 3);
  int total = 0, diag = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      total += report["confusion"][r][c].get<int>();
      if (r == c) diag += report["confusion"][r][c].get<int>();
    }
  CHECK(total == report["tp"].get<int>());  // matched events carry the labels
  CHECK(total == 12 - report["fn"].get<int>());
  CHECK(diag >= 10);  // mild noise: nearly clean class separation
  CHECK(report["class_boundaries"].size() == 2);
}

TEST_CASE("truth CSV accepts mm/min units") {
  std::istringstream in("t_s,speed,unit,direction\n1.5,6000,mmpm,rx0_to_rx1\n");
  const std::vector<GroundTruthEvent> truth = read_truth_events_csv(in);
  REQUIRE(truth.size() == 1);
  CHECK(truth[0].speed_true == doctest::Approx(0.1));
  CHECK(truth[0].direction_true == Direction::rx0_to_rx1);
}

TEST_CASE("config round-trips through dump and load") {
  SimulationConfig sim;
  sim.geometry.velocity_x = 0.123;
  sim.noise.complex_noise_std = 0.5;
  const SimulationConfig sim2 = simulation_config_from_json(simulation_config_to_json(sim));
  CHECK(sim2.geometry.velocity_x == sim.geometry.velocity_x);
  CHECK(sim2.noise.complex_noise_std == sim.noise.complex_noise_std);

  PipelineConfig pipe;
  pipe.sg_window = 41;
  const PipelineConfig pipe2 = pipeline_config_from_json(pipeline_config_to_json(pipe));
  CHECK(pipe2.sg_window == 41);

  DetectorConfig det;
  det.k_mad = 4.0;
  CHECK(detector_config_from_json(detector_config_to_json(det)).k_mad == 4.0);

  // mm/min velocity loads scaled
  Json j = simulation_config_to_json(sim);
  j["geometry"].erase("velocity_x");
  j["geometry"]["velocity_x_mmpm"] = 6000.0;
  CHECK(simulation_config_from_json(j).geometry.velocity_x == doctest::Approx(0.1));
}
