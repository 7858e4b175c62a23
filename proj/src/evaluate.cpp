#include "ltesense/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "ltesense/errors.hpp"

namespace ltesense {
namespace {

struct Candidate {
  double adt;
  std::size_t event;
  std::size_t truth;
};

std::vector<std::vector<int>> make_confusion(std::size_t classes) {
  return std::vector<std::vector<int>>(classes, std::vector<int>(classes, 0));
}

double confusion_accuracy(const std::vector<std::vector<int>>& confusion) {
  long total = 0, diag = 0;
  for (std::size_t r = 0; r < confusion.size(); ++r)
    for (std::size_t c = 0; c < confusion[r].size(); ++c) {
      total += confusion[r][c];
      if (r == c) diag += confusion[r][c];
    }
  return total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
}

/// Matched (peak, true-class) pairs of one session, the calibration and
/// classification currency of the protocol.
std::vector<LabeledPeak> matched_labeled_peaks(const SessionData& s, const EvalConfig& cfg,
                                               std::vector<MatchPair>* matches_out = nullptr) {
  const EvaluationReport rep = evaluate(s.events, s.truth, cfg);
  std::vector<LabeledPeak> peaks;
  for (const MatchPair& m : rep.matches) {
    const int cls = s.truth[m.truth_index].speed_class;
    if (cls < 0) throw ProcessingError("intra_inter_protocol: unlabeled ground truth event");
    peaks.push_back(LabeledPeak{s.events[m.event_index].v_delta_peak, cls});
  }
  if (matches_out) *matches_out = rep.matches;
  return peaks;
}

void accumulate_confusion(std::vector<std::vector<int>>& confusion,
                          std::span<const LabeledPeak> peaks,
                          std::span<const double> boundaries) {
  for (const LabeledPeak& p : peaks) {
    const double v = std::abs(p.v_delta_peak);
    std::size_t pred = 0;
    for (double b : boundaries)
      if (b < v) ++pred;
    if (p.speed_class >= 0 && static_cast<std::size_t>(p.speed_class) < confusion.size() &&
        pred < confusion.size())
      confusion[p.speed_class][pred] += 1;
  }
}

}  // namespace

void EvalConfig::validate() const {
  if (!(match_window > 0.0)) throw ValidationError("eval: match_window must be positive");
  if (!(negatives_grid > 0.0)) throw ValidationError("eval: negatives_grid must be positive");
}

EvaluationReport evaluate(std::span<const MotionEvent> events,
                          std::span<const GroundTruthEvent> truth, const EvalConfig& cfg) {
  cfg.validate();

  std::vector<double> truth_times;
  for (const auto& t : truth) truth_times.push_back(t.t_true);
  std::vector<double> sorted_truth = truth_times;
  std::sort(sorted_truth.begin(), sorted_truth.end());
  for (std::size_t i = 1; i < sorted_truth.size(); ++i)
    if (sorted_truth[i] - sorted_truth[i - 1] < cfg.match_window)
      throw ProcessingError("ambiguous ground truth: events closer than the match window");

  std::vector<Candidate> candidates;
  for (std::size_t e = 0; e < events.size(); ++e)
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double adt = std::abs(events[e].t_peak - truth[t].t_true);
      if (adt <= cfg.match_window) candidates.push_back({adt, e, t});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.adt != b.adt) return a.adt < b.adt;
    if (a.truth != b.truth) return a.truth < b.truth;
    return a.event < b.event;
  });

  EvaluationReport rep;
  std::vector<bool> event_used(events.size(), false), truth_used(truth.size(), false);
  for (const Candidate& c : candidates) {
    if (event_used[c.event] || truth_used[c.truth]) continue;
    event_used[c.event] = true;
    truth_used[c.truth] = true;
    rep.matches.push_back({c.event, c.truth, events[c.event].t_peak - truth[c.truth].t_true});
  }
  std::sort(rep.matches.begin(), rep.matches.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.truth_index < b.truth_index; });

  rep.tp = static_cast<int>(rep.matches.size());
  rep.fn = static_cast<int>(truth.size()) - rep.tp;
  rep.fp = static_cast<int>(events.size()) - rep.tp;

  double span_start = cfg.span_start;
  double span_end = cfg.span_end;
  if (!(span_end > span_start)) {
    span_start = 0.0;
    span_end = 0.0;
    for (const auto& e : events) span_end = std::max(span_end, e.t_peak);
    for (const auto& t : truth) span_end = std::max(span_end, t.t_true);
    span_end += cfg.match_window;
  }

  // Negative population: grid cells that never intersect a truth window.
  rep.tn = 0;
  for (double cell = span_start; cell + cfg.negatives_grid <= span_end + 1e-12;
       cell += cfg.negatives_grid) {
    const double cell_end = cell + cfg.negatives_grid;
    bool overlaps_truth = false;
    for (const auto& t : truth)
      if (t.t_true - cfg.match_window < cell_end && t.t_true + cfg.match_window > cell) {
        overlaps_truth = true;
        break;
      }
    if (overlaps_truth) continue;
    bool has_event = false;
    for (const auto& e : events)
      if (e.t_peak >= cell && e.t_peak < cell_end) {
        has_event = true;
        break;
      }
    if (!has_event) rep.tn += 1;
  }

  rep.dr = (rep.tp + rep.fn) > 0 ? static_cast<double>(rep.tp) / (rep.tp + rep.fn) : 1.0;
  rep.fpr = (rep.fp + rep.tn) > 0 ? static_cast<double>(rep.fp) / (rep.fp + rep.tn) : 0.0;

  // Confusion over matched pairs where both sides carry a class label.
  int max_class = -1;
  for (const auto& t : truth) max_class = std::max(max_class, t.speed_class);
  for (const auto& e : events) max_class = std::max(max_class, e.speed_class);
  if (max_class >= 0) {
    rep.confusion = make_confusion(max_class + 1);
    for (const MatchPair& m : rep.matches) {
      const int tc = truth[m.truth_index].speed_class;
      const int pc = events[m.event_index].speed_class;
      if (tc >= 0 && pc >= 0) rep.confusion[tc][pc] += 1;
    }
    rep.accuracy = confusion_accuracy(rep.confusion);
  }
  return rep;
}

IntraInterResult intra_inter_protocol(std::span<const SessionData> sessions,
                                      const EvalConfig& cfg) {
  if (sessions.size() < 2)
    throw ProcessingError("intra_inter_protocol: at least two sessions required");

  int max_class = -1;
  for (const SessionData& s : sessions)
    for (const GroundTruthEvent& t : s.truth) max_class = std::max(max_class, t.speed_class);
  if (max_class < 1) throw ProcessingError("intra_inter_protocol: need labeled multi-class truth");
  const std::size_t classes = static_cast<std::size_t>(max_class + 1);

  IntraInterResult res;
  res.intra_confusion = make_confusion(classes);
  res.inter_confusion = make_confusion(classes);

  std::vector<std::vector<LabeledPeak>> per_session;
  for (const SessionData& s : sessions) per_session.push_back(matched_labeled_peaks(s, cfg));

  for (const auto& peaks : per_session) {
    const std::vector<double> boundaries = calibrate_boundaries(peaks);
    accumulate_confusion(res.intra_confusion, peaks, boundaries);
  }

  const std::vector<double> reference = calibrate_boundaries(per_session.front());
  for (std::size_t s = 1; s < per_session.size(); ++s)
    accumulate_confusion(res.inter_confusion, per_session[s], reference);

  res.intra_accuracy = confusion_accuracy(res.intra_confusion);
  res.inter_accuracy = confusion_accuracy(res.inter_confusion);
  return res;
}

}  // namespace ltesense
