#pragma once

#include <string>
#include <string_view>

#include "logfail/engine.hpp"
#include "logfail/model.hpp"

namespace logfail {

std::string_view to_string(Verdict v);

/// One JSON object per report, no trailing newline:
/// {"timestamp","event","session","candidates":[{"failure","hops","probability","alert"}],
///  "terminal":[...],"verdict","closed"}
std::string report_to_json(const PredictionReport& r, const Model& model);

/// Columns: timestamp,event,failure,hops,probability,terminal,verdict.
/// One row per candidate; a report without candidates gives one row with
/// the candidate columns empty. Rows end in '\n'.
std::string csv_header();
std::string report_to_csv(const PredictionReport& r, const Model& model);

/// Human-readable per-candidate trace rows, e.g.
///   2024-03-01T10:00:10Z  E6  s1  ALERT  h=1  F1 p=0.9728171817 TERMINAL
std::string trace_header();
std::string report_to_trace(const PredictionReport& r, const Model& model);

}  // namespace logfail
