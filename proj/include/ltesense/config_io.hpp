#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltesense/evaluate.hpp"
#include "ltesense/pipeline.hpp"
#include "ltesense/sim.hpp"

namespace ltesense {

using Json = nlohmann::json;

// Loaders throw ValidationError naming the offending field; dumpers emit the
// same key layout, so dump(load(x)) is stable and --dump-config output can be
// fed straight back in.

SimulationConfig simulation_config_from_json(const Json& j);
Json simulation_config_to_json(const SimulationConfig& c);

PipelineConfig pipeline_config_from_json(const Json& j);
Json pipeline_config_to_json(const PipelineConfig& c);

DetectorConfig detector_config_from_json(const Json& j);
Json detector_config_to_json(const DetectorConfig& c);

BaselineGeometry baseline_geometry_from_json(const Json& j);
Json baseline_geometry_to_json(const BaselineGeometry& g);

EvalConfig eval_config_from_json(const Json& j);
Json eval_config_to_json(const EvalConfig& c);

Json events_to_json(const std::vector<MotionEvent>& events);
std::vector<MotionEvent> events_from_json(const Json& j);
void write_events_csv(const std::vector<MotionEvent>& events, std::ostream& out);

Json report_to_json(const EvaluationReport& report, const EvalConfig& cfg);
void write_confusion_csv(const std::vector<std::vector<int>>& confusion, std::ostream& out);

/// Ground truth events CSV t_s,speed,unit,direction (unit mps or mmpm,
/// direction may be empty). Speeds are converted to m/s at load.
std::vector<GroundTruthEvent> read_truth_events_csv(std::istream& in);
void write_truth_events_csv(const std::vector<GroundTruthEvent>& truth, std::ostream& out);

/// Capture metadata as JSON, keys mirroring the block field names.
Json capture_metadata_to_json(const CsiCapture& capture);

Json load_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace ltesense
