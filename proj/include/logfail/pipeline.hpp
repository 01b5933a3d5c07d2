#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "logfail/engine.hpp"
#include "logfail/model.hpp"
#include "logfail/parser.hpp"

namespace logfail {

/// Log text in, prediction reports out: parse, time-order, de-duplicate,
/// then expire idle sessions and ingest each record in order. Chunks must
/// arrive in file order; a whole file and the same file split into
/// consecutive chunks produce identical report streams.
class Pipeline {
 public:
  Pipeline(const Model& model, RuleSet rules, EnginePolicy policy, WindowConfig window);

  struct Step {
    std::vector<PredictionReport> reports;
    std::vector<ParseDiagnostic> diagnostics;
    ParseStats stats;
  };

  Step feed(std::string_view chunk);

  const Engine& engine() const { return engine_; }
  StreamParser& parser() { return parser_; }
  std::optional<Timestamp> last_timestamp() const { return last_timestamp_; }

 private:
  StreamParser parser_;
  Engine engine_;
  std::optional<Timestamp> last_timestamp_;
};

enum class Outcome {
  no_prediction,
  failure_predicted,       // some terminal failure at or above the alert threshold
  invalid_sequences_only,  // invalid sequences seen, nothing predicted
};

class OutcomeTracker {
 public:
  void observe(const PredictionReport& r);
  Outcome outcome() const;

 private:
  bool predicted_ = false;
  bool invalid_ = false;
};

}  // namespace logfail
