#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ltesense/detect.hpp"

namespace ltesense {

struct GroundTruthEvent {
  double t_true = 0.0;
  double speed_true = 0.0;  // m/s
  int speed_class = -1;     // optional label for confusion matrices
  std::optional<Direction> direction_true;
};

struct EvalConfig {
  double match_window = 0.5;   // s, one-to-one matching tolerance
  double negatives_grid = 1.0; // s, cell size defining the negative population
  double span_start = 0.0;     // observation window; start == end derives it
  double span_end = 0.0;       //   from the data

  void validate() const;
};

struct MatchPair {
  std::size_t event_index = 0;
  std::size_t truth_index = 0;
  double dt = 0.0;  // t_peak - t_true
};

struct EvaluationReport {
  int tp = 0, fp = 0, fn = 0, tn = 0;
  double dr = 0.0;   // tp / (tp + fn)
  double fpr = 0.0;  // fp / (fp + tn)
  std::vector<MatchPair> matches;
  std::vector<std::vector<int>> confusion;  // rows true class, cols predicted
  double accuracy = 0.0;                    // over matched labeled events
};

/// Greedy nearest-in-time one-to-one matching within the window; unmatched
/// events are false positives, unmatched truths false negatives. True
/// negatives are grid cells outside every truth window holding no event.
/// Truth events spaced closer than the window are ambiguous and rejected.
EvaluationReport evaluate(std::span<const MotionEvent> events,
                          std::span<const GroundTruthEvent> truth, const EvalConfig& cfg);

struct SessionData {
  std::vector<MotionEvent> events;
  std::vector<GroundTruthEvent> truth;
};

struct IntraInterResult {
  std::vector<std::vector<int>> intra_confusion;
  double intra_accuracy = 0.0;
  std::vector<std::vector<int>> inter_confusion;
  double inter_accuracy = 0.0;
};

/// Intra: calibrate and classify within each session. Inter: calibrate on
/// the first session, classify the rest. Truth events must carry class
/// labels; at least two sessions are required.
IntraInterResult intra_inter_protocol(std::span<const SessionData> sessions,
                                      const EvalConfig& cfg);

}  // namespace ltesense
