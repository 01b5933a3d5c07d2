#include "logfail/pipeline.hpp"

#include <algorithm>

namespace logfail {

Pipeline::Pipeline(const Model& model, RuleSet rules, EnginePolicy policy, WindowConfig window)
    : parser_(std::move(rules), window),
      engine_(model.matrix, build_dag(model.matrix), build_hop_matrix(model.matrix), policy) {}

Pipeline::Step Pipeline::feed(std::string_view chunk) {
  Step step;
  auto parsed = parser_.feed(chunk);
  step.diagnostics = std::move(parsed.diagnostics);
  step.stats = parsed.stats;
  for (const auto& rec : parsed.records) {
    auto expired = engine_.tick(rec.timestamp);
    step.reports.insert(step.reports.end(), expired.begin(), expired.end());
    auto reports = engine_.ingest(rec);
    step.reports.insert(step.reports.end(), reports.begin(), reports.end());
    if (!last_timestamp_ || rec.timestamp > *last_timestamp_) last_timestamp_ = rec.timestamp;
  }
  return step;
}

void OutcomeTracker::observe(const PredictionReport& r) {
  if (r.verdict == Verdict::invalid_sequence) invalid_ = true;
  for (const auto& e : r.entries)
    if (e.alert && std::find(r.terminal.begin(), r.terminal.end(), e.failure) != r.terminal.end()) predicted_ = true;
}

Outcome OutcomeTracker::outcome() const {
  if (predicted_) return Outcome::failure_predicted;
  if (invalid_) return Outcome::invalid_sequences_only;
  return Outcome::no_prediction;
}

}  // namespace logfail
