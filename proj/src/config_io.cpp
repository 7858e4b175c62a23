#include "ltesense/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ltesense/series.hpp"

namespace ltesense {
namespace {

constexpr double kMmPerMinToMps = 1.0 / 60000.0;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ValidationError("config field '" + path + "': " + what);
}

double get_number(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) field_error(path + key, "missing");
  if (!j[key].is_number()) field_error(path + key, "expected a number");
  return j[key].get<double>();
}

double get_number_or(const Json& j, const std::string& key, double fallback,
                     const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) field_error(path + key, "expected a number");
  return j[key].get<double>();
}

std::uint64_t get_seed_or(const Json& j, const std::string& key, std::uint64_t fallback,
                          const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() && !j[key].is_number_unsigned())
    field_error(path + key, "expected an integer seed");
  return j[key].get<std::uint64_t>();
}

Complex get_complex(const Json& j, const std::string& key, Complex fallback,
                    const std::string& path) {
  if (!j.contains(key)) return fallback;
  const Json& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    field_error(path + key, "expected [re, im]");
  return Complex{v[0].get<double>(), v[1].get<double>()};
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

StaticChannel static_channel_from_json(const Json& j, const std::string& path) {
  StaticChannel ch;
  if (!j.is_array()) field_error(path, "expected an array of paths");
  std::size_t i = 0;
  for (const Json& p : j) {
    const std::string where = path + "[" + std::to_string(i++) + "].";
    PathComponent comp;
    comp.amplitude = get_complex(p, "amplitude", Complex{0.0, 0.0}, where);
    if (!p.contains("amplitude")) field_error(where + "amplitude", "missing");
    comp.delay = get_number(p, "delay", where);
    comp.doppler = get_number_or(p, "doppler", 0.0, where);
    ch.paths.push_back(comp);
  }
  return ch;
}

Json static_channel_to_json(const StaticChannel& ch) {
  Json arr = Json::array();
  for (const PathComponent& p : ch.paths)
    arr.push_back(Json{{"amplitude", complex_to_json(p.amplitude)},
                       {"delay", p.delay},
                       {"doppler", p.doppler}});
  return arr;
}

std::string direction_name(Direction d) {
  return d == Direction::rx0_to_rx1 ? "rx0_to_rx1" : "rx1_to_rx0";
}

Direction direction_from_name(const std::string& s, const std::string& path) {
  if (s == "rx0_to_rx1") return Direction::rx0_to_rx1;
  if (s == "rx1_to_rx0") return Direction::rx1_to_rx0;
  field_error(path, "expected rx0_to_rx1 or rx1_to_rx0, got '" + s + "'");
}

}  // namespace

SimulationConfig simulation_config_from_json(const Json& j) {
  SimulationConfig c;
  if (!j.contains("geometry")) field_error("geometry", "missing");
  const Json& g = j["geometry"];
  const std::string gp = "geometry.";

  if (g.contains("tx")) {
    const Json& tx = g["tx"];
    if (tx.contains("far_field") && tx["far_field"].get<bool>()) {
      c.geometry.tx_pos.reset();
      c.geometry.tx_range_rate = get_number_or(tx, "range_rate", 0.0, gp + "tx.");
    } else {
      c.geometry.tx_pos = Vec2{get_number(tx, "x", gp + "tx."), get_number(tx, "y", gp + "tx.")};
    }
  }
  if (g.contains("rx0"))
    c.geometry.rx0 = Vec2{get_number(g["rx0"], "x", gp + "rx0."), get_number(g["rx0"], "y", gp + "rx0.")};
  if (g.contains("rx1"))
    c.geometry.rx1 = Vec2{get_number(g["rx1"], "x", gp + "rx1."), get_number(g["rx1"], "y", gp + "rx1.")};
  c.geometry.reflector_y = get_number(g, "reflector_y", gp);
  c.geometry.reflector_x0 = get_number(g, "reflector_x0", gp);
  const bool has_mps = g.contains("velocity_x");
  const bool has_mmpm = g.contains("velocity_x_mmpm");
  if (has_mps == has_mmpm)
    field_error(gp + "velocity_x", "give exactly one of velocity_x (m/s) or velocity_x_mmpm");
  c.geometry.velocity_x = has_mps ? get_number(g, "velocity_x", gp)
                                  : get_number(g, "velocity_x_mmpm", gp) * kMmPerMinToMps;
  c.geometry.wavelength = get_number(g, "wavelength", gp);

  c.static0 = j.contains("static0") ? static_channel_from_json(j["static0"], "static0")
                                    : StaticChannel{};
  c.static1 = j.contains("static1") ? static_channel_from_json(j["static1"], "static1")
                                    : StaticChannel{};
  c.dynamic_amp0 = get_complex(j, "dynamic_amp0", Complex{1.0, 0.0}, "");
  c.dynamic_amp1 = get_complex(j, "dynamic_amp1", Complex{1.0, 0.0}, "");
  c.sample_interval = get_number(j, "sample_interval", "");
  c.duration = get_number(j, "duration", "");
  c.subcarriers = static_cast<int>(get_number_or(j, "subcarriers", 8, ""));
  c.subcarrier_spacing = get_number_or(j, "subcarrier_spacing", 15000.0, "");

  if (j.contains("impairment")) {
    const Json& imp = j["impairment"];
    const std::string ip = "impairment.";
    const std::string kind = imp.value("kind", "unit_modulus_random_walk");
    if (kind == "none")
      c.impairment.kind = ImpairmentKind::none;
    else if (kind == "unit_modulus_random_walk")
      c.impairment.kind = ImpairmentKind::unit_modulus_random_walk;
    else if (kind == "constant_phase")
      c.impairment.kind = ImpairmentKind::constant_phase;
    else
      field_error(ip + "kind", "unknown impairment kind '" + kind + "'");
    c.impairment.phase_step_std = get_number_or(imp, "phase_step_std", 0.05, ip);
    c.impairment.constant_phase_rad = get_number_or(imp, "constant_phase_rad", 0.0, ip);
    c.impairment.seed = get_seed_or(imp, "seed", 1, ip);
    c.impairment.common = imp.value("common", true);
  }
  if (j.contains("noise")) {
    const Json& noise = j["noise"];
    c.noise.complex_noise_std = get_number_or(noise, "complex_noise_std", 0.0, "noise.");
    c.noise.seed = get_seed_or(noise, "seed", 2, "noise.");
  }
  c.validate();
  return c;
}

Json simulation_config_to_json(const SimulationConfig& c) {
  Json tx;
  if (c.geometry.tx_pos) {
    tx = Json{{"x", c.geometry.tx_pos->x}, {"y", c.geometry.tx_pos->y}};
  } else {
    tx = Json{{"far_field", true}, {"range_rate", c.geometry.tx_range_rate}};
  }
  return Json{
      {"geometry",
       {{"tx", tx},
        {"rx0", {{"x", c.geometry.rx0.x}, {"y", c.geometry.rx0.y}}},
        {"rx1", {{"x", c.geometry.rx1.x}, {"y", c.geometry.rx1.y}}},
        {"reflector_y", c.geometry.reflector_y},
        {"reflector_x0", c.geometry.reflector_x0},
        {"velocity_x", c.geometry.velocity_x},
        {"wavelength", c.geometry.wavelength}}},
      {"static0", static_channel_to_json(c.static0)},
      {"static1", static_channel_to_json(c.static1)},
      {"dynamic_amp0", complex_to_json(c.dynamic_amp0)},
      {"dynamic_amp1", complex_to_json(c.dynamic_amp1)},
      {"sample_interval", c.sample_interval},
      {"duration", c.duration},
      {"subcarriers", c.subcarriers},
      {"subcarrier_spacing", c.subcarrier_spacing},
      {"impairment",
       {{"kind", c.impairment.kind == ImpairmentKind::none ? "none"
                 : c.impairment.kind == ImpairmentKind::constant_phase
                     ? "constant_phase"
                     : "unit_modulus_random_walk"},
        {"phase_step_std", c.impairment.phase_step_std},
        {"constant_phase_rad", c.impairment.constant_phase_rad},
        {"seed", c.impairment.seed},
        {"common", c.impairment.common}}},
      {"noise", {{"complex_noise_std", c.noise.complex_noise_std}, {"seed", c.noise.seed}}}};
}

PipelineConfig pipeline_config_from_json(const Json& j) {
  PipelineConfig c;
  if (j.contains("background")) {
    const Json& bg = j["background"];
    const std::string mode = bg.value("mode", "mean_of_static_window");
    if (mode == "mean_of_static_window")
      c.background = BackgroundMode::mean_of_static_window;
    else if (mode == "none")
      c.background = BackgroundMode::none;
    else if (mode == "external_profile")
      c.background = BackgroundMode::external_profile;
    else if (mode == "moving_mean")
      c.background = BackgroundMode::moving_mean;
    else
      field_error("background.mode", "unknown mode '" + mode + "'");
    c.background_start = static_cast<std::size_t>(get_number_or(bg, "start", 0, "background."));
    c.background_end = static_cast<std::size_t>(get_number_or(bg, "end", 0, "background."));
    c.moving_window = static_cast<std::size_t>(get_number_or(bg, "window", 101, "background."));
    if (bg.contains("profile")) {
      for (const Json& v : bg["profile"]) c.external_profile.push_back(v.get<double>());
    }
  }
  c.sg_window = static_cast<int>(get_number_or(j, "sg_window", 31, ""));
  c.sg_order = static_cast<int>(get_number_or(j, "sg_order", 3, ""));
  c.wavelength = get_number_or(j, "wavelength", 0.1428, "");
  c.zero_magnitude_epsilon = get_number_or(j, "zero_magnitude_epsilon", 1e-12, "");
  c.validate();
  return c;
}

Json pipeline_config_to_json(const PipelineConfig& c) {
  const char* mode = "mean_of_static_window";
  if (c.background == BackgroundMode::none) mode = "none";
  if (c.background == BackgroundMode::external_profile) mode = "external_profile";
  if (c.background == BackgroundMode::moving_mean) mode = "moving_mean";
  return Json{{"background",
               {{"mode", mode},
                {"start", c.background_start},
                {"end", c.background_end},
                {"window", c.moving_window},
                {"profile", c.external_profile}}},
              {"sg_window", c.sg_window},
              {"sg_order", c.sg_order},
              {"wavelength", c.wavelength},
              {"zero_magnitude_epsilon", c.zero_magnitude_epsilon}};
}

DetectorConfig detector_config_from_json(const Json& j) {
  DetectorConfig c;
  const std::string mode = j.value("threshold_mode", "robust");
  if (mode == "absolute")
    c.threshold_mode = ThresholdMode::absolute;
  else if (mode == "robust")
    c.threshold_mode = ThresholdMode::robust;
  else
    field_error("threshold_mode", "expected absolute or robust, got '" + mode + "'");
  c.v_min = get_number_or(j, "v_min", 0.05, "");
  c.k_mad = get_number_or(j, "k_mad", 5.0, "");
  c.min_separation = get_number_or(j, "min_separation", 2.0, "");
  c.validate();
  return c;
}

Json detector_config_to_json(const DetectorConfig& c) {
  return Json{{"threshold_mode", c.threshold_mode == ThresholdMode::absolute ? "absolute" : "robust"},
              {"v_min", c.v_min},
              {"k_mad", c.k_mad},
              {"min_separation", c.min_separation}};
}

BaselineGeometry baseline_geometry_from_json(const Json& j) {
  BaselineGeometry g;
  g.r_m = get_number(j, "r_m", "");
  g.half_separation = get_number(j, "half_separation", "");
  g.wavelength = get_number_or(j, "wavelength", 0.1428, "");
  g.validate();
  return g;
}

Json baseline_geometry_to_json(const BaselineGeometry& g) {
  return Json{{"r_m", g.r_m}, {"half_separation", g.half_separation}, {"wavelength", g.wavelength}};
}

EvalConfig eval_config_from_json(const Json& j) {
  EvalConfig c;
  c.match_window = get_number_or(j, "match_window", 0.5, "");
  c.negatives_grid = get_number_or(j, "negatives_grid", 1.0, "");
  c.span_start = get_number_or(j, "span_start", 0.0, "");
  c.span_end = get_number_or(j, "span_end", 0.0, "");
  c.validate();
  return c;
}

Json eval_config_to_json(const EvalConfig& c) {
  return Json{{"match_window", c.match_window},
              {"negatives_grid", c.negatives_grid},
              {"span_start", c.span_start},
              {"span_end", c.span_end}};
}

Json events_to_json(const std::vector<MotionEvent>& events) {
  Json arr = Json::array();
  for (const MotionEvent& e : events) {
    arr.push_back(Json{{"t_peak", e.t_peak},
                       {"v_delta_peak", e.v_delta_peak},
                       {"direction", direction_name(e.direction)},
                       {"speed_estimate_mps", e.speed_estimate},
                       {"speed_estimate_kmh", e.speed_estimate * 3.6},
                       {"speed_class", e.speed_class}});
  }
  return Json{{"events", arr}};
}

std::vector<MotionEvent> events_from_json(const Json& j) {
  std::vector<MotionEvent> events;
  if (!j.contains("events") || !j["events"].is_array())
    field_error("events", "missing or not an array");
  std::size_t i = 0;
  for (const Json& e : j["events"]) {
    const std::string where = "events[" + std::to_string(i++) + "].";
    MotionEvent ev;
    ev.t_peak = get_number(e, "t_peak", where);
    ev.v_delta_peak = get_number(e, "v_delta_peak", where);
    ev.direction = direction_from_name(e.value("direction", "rx0_to_rx1"), where + "direction");
    ev.speed_estimate = get_number_or(e, "speed_estimate_mps", 0.0, where);
    ev.speed_class = static_cast<int>(get_number_or(e, "speed_class", -1, where));
    events.push_back(ev);
  }
  return events;
}

void write_events_csv(const std::vector<MotionEvent>& events, std::ostream& out) {
  out << "t_peak_s,v_delta_peak_mps,direction,speed_mps,speed_kmh,speed_class\n";
  for (const MotionEvent& e : events) {
    out << format_number(e.t_peak) << ',' << format_number(e.v_delta_peak) << ','
        << direction_name(e.direction) << ',' << format_number(e.speed_estimate) << ','
        << format_number(e.speed_estimate * 3.6) << ',' << e.speed_class << "\n";
  }
}

Json report_to_json(const EvaluationReport& report, const EvalConfig& cfg) {
  Json matches = Json::array();
  for (const MatchPair& m : report.matches)
    matches.push_back(
        Json{{"event_index", m.event_index}, {"truth_index", m.truth_index}, {"dt", m.dt}});
  return Json{{"tp", report.tp},
              {"fp", report.fp},
              {"fn", report.fn},
              {"tn", report.tn},
              {"dr", report.dr},
              {"fpr", report.fpr},
              {"accuracy", report.accuracy},
              {"confusion", report.confusion},
              {"matches", matches},
              {"match_window", cfg.match_window},
              {"negatives_grid", cfg.negatives_grid}};
}

void write_confusion_csv(const std::vector<std::vector<int>>& confusion, std::ostream& out) {
  out << "true_class";
  for (std::size_t c = 0; c < confusion.size(); ++c) out << ",pred_" << c;
  out << "\n";
  for (std::size_t r = 0; r < confusion.size(); ++r) {
    out << r;
    for (int v : confusion[r]) out << ',' << v;
    out << "\n";
  }
}

std::vector<GroundTruthEvent> read_truth_events_csv(std::istream& in) {
  std::vector<GroundTruthEvent> truth;
  std::string line;
  if (!std::getline(in, line)) throw ProcessingError("truth CSV is empty");
  if (line.rfind("t_s,speed,unit", 0) != 0)
    throw ProcessingError("truth CSV header mismatch (expected t_s,speed,unit,direction)");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string t_s, speed, unit, direction;
    std::getline(ss, t_s, ',');
    std::getline(ss, speed, ',');
    std::getline(ss, unit, ',');
    std::getline(ss, direction, ',');
    GroundTruthEvent e;
    try {
      e.t_true = std::stod(t_s);
      e.speed_true = std::stod(speed);
    } catch (const std::exception&) {
      throw ProcessingError("truth CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (unit == "mmpm")
      e.speed_true *= kMmPerMinToMps;
    else if (unit != "mps")
      throw ProcessingError("truth CSV line " + std::to_string(line_no) +
                            ": unit must be mps or mmpm");
    if (!direction.empty())
      e.direction_true = direction_from_name(direction, "truth csv direction");
    truth.push_back(e);
  }
  return truth;
}

void write_truth_events_csv(const std::vector<GroundTruthEvent>& truth, std::ostream& out) {
  out << "t_s,speed,unit,direction\n";
  for (const GroundTruthEvent& e : truth) {
    out << format_number(e.t_true) << ',' << format_number(e.speed_true) << ",mps,"
        << (e.direction_true ? direction_name(*e.direction_true) : "") << "\n";
  }
}

Json capture_metadata_to_json(const CsiCapture& capture) {
  Json blocks = Json::array();
  for (const CsiBlock& b : capture.blocks) {
    Json port_data = Json::object();
    for (const auto& [key, data] : b.port_data) {
      const std::string name =
          "(" + std::to_string(key.port) + "," + std::to_string(key.rx) + ")";
      port_data[name] = Json{{"ofdm_block_indices", data.ofdm_block_indices},
                             {"rows", data.csi.rows},
                             {"cols", data.csi.cols}};
    }
    blocks.push_back(Json{{"timestamp", b.timestamp_us},
                          {"snr", b.snr_db},
                          {"rsrp", b.rsrp_db},
                          {"center_freq_hz", b.cell.center_freq_hz},
                          {"nof_prb", b.cell.nof_prb},
                          {"cp", b.cell.cp == CyclicPrefix::normal ? "normal" : "extended"},
                          {"symbol_sz", b.cell.symbol_sz},
                          {"useful_re", b.cell.useful_re},
                          {"offset", b.cell.offset},
                          {"ofdm_symbols", b.cell.ofdm_symbols},
                          {"subcarrier_stride", b.subcarrier_stride},
                          {"block_stride", b.block_stride},
                          {"port_data", port_data}});
  }
  return Json{{"blocks", blocks}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProcessingError("cannot open JSON file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("JSON parse error in " + path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ProcessingError("cannot write JSON file: " + path);
  out << j.dump(2) << "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace ltesense
