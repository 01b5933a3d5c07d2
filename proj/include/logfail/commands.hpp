#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "logfail/engine.hpp"
#include "logfail/parser.hpp"
#include "logfail/pipeline.hpp"

namespace logfail::cli {

// Process exit codes. Prediction commands encode their outcome so cron jobs
// and shell pipelines can alert without parsing output.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoPrediction = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFailurePredicted = 2;
inline constexpr int kExitInvalidOnly = 3;

int exit_code(Outcome o);

/// "250ms", "5s", "2m", "1h"; a bare number is seconds.
std::chrono::milliseconds parse_duration(std::string_view text);

enum class OutputFormat { jsonl, csv };

struct EngineFlags {
  bool no_prune = false;
  bool lenient = false;
  double threshold = 0.9;
  std::optional<std::chrono::milliseconds> session_timeout;
  std::chrono::milliseconds window = std::chrono::seconds{60};
  bool no_dedup = false;

  EnginePolicy policy() const;
  WindowConfig window_config() const;
};

struct ValidateOptions {
  std::filesystem::path model;
};
int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);

struct BuildOptions {
  std::filesystem::path model;
  std::optional<std::filesystem::path> out;  // stdout when empty
};
int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err);

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path rules;
  std::filesystem::path log;
  EngineFlags engine;
  OutputFormat format = OutputFormat::jsonl;
  bool trace = false;
  std::optional<std::filesystem::path> output;
};
int cmd_predict(const PredictOptions& opt, std::ostream& out, std::ostream& err);

struct WatchOptions {
  std::filesystem::path model;
  std::filesystem::path rules;
  std::filesystem::path path;
  std::chrono::milliseconds interval = std::chrono::seconds{5};
  std::filesystem::path checkpoint;
  std::optional<std::string> fetch_command;
  EngineFlags engine;
  OutputFormat format = OutputFormat::jsonl;
  bool trace = false;
  std::optional<std::filesystem::path> output;
  std::optional<std::size_t> max_cycles;  // run forever when empty
  std::function<void(std::size_t cycle)> before_poll;  // test hook
};
/// Poll loop; returns when `stop` becomes true or max_cycles have run. The
/// checkpoint is saved after every cycle and on shutdown.
int cmd_watch(const WatchOptions& opt, std::ostream& out, std::ostream& err, const std::atomic<bool>& stop);

}  // namespace logfail::cli
