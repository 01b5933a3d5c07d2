// logfail: log-driven failure prediction for deployed network elements.

#include <atomic>
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "logfail/commands.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct EngineArgs {
  bool no_prune = false;
  bool lenient = false;
  double threshold = 0.9;
  std::string session_timeout;
  std::string window = "60s";
  bool no_dedup = false;
  std::string format = "jsonl";
  bool trace = false;
  std::string output;
};

void add_engine_flags(CLI::App* cmd, EngineArgs& a) {
  cmd->add_flag("--no-prune", a.no_prune, "Disable event bit-mask candidate pruning");
  cmd->add_flag("--lenient", a.lenient, "Ignore non-edge events instead of invalidating the session");
  cmd->add_option("--threshold", a.threshold, "Alert threshold on failure probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--session-timeout", a.session_timeout, "Close sessions idle longer than this (e.g. 10m)");
  cmd->add_option("--window", a.window, "Duplicate-suppression window length")->capture_default_str();
  cmd->add_flag("--no-dedup", a.no_dedup, "Keep repeated events inside one window");
  cmd->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  cmd->add_flag("--trace", a.trace, "Print a per-event candidate table");
  cmd->add_option("--output", a.output, "Write structured reports to this file");
}

logfail::cli::EngineFlags to_flags(const EngineArgs& a) {
  logfail::cli::EngineFlags f;
  f.no_prune = a.no_prune;
  f.lenient = a.lenient;
  f.threshold = a.threshold;
  if (!a.session_timeout.empty()) f.session_timeout = logfail::cli::parse_duration(a.session_timeout);
  f.window = logfail::cli::parse_duration(a.window);
  f.no_dedup = a.no_dedup;
  return f;
}

logfail::cli::OutputFormat to_format(const std::string& s) {
  return s == "csv" ? logfail::cli::OutputFormat::csv : logfail::cli::OutputFormat::jsonl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict network element failures from device logs"};
  app.set_config("--config", "", "Read flags from a TOML/INI file");
  app.require_subcommand(1);

  std::string model, rules, log, out, path, checkpoint, interval = "5s", fetch;
  std::size_t max_cycles = 0;
  EngineArgs predict_args, watch_args;

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("--model", model, "Model config")->required()->check(CLI::ExistingFile);

  auto* build = app.add_subcommand("build", "Emit the DAG and hop-matrix artifact");
  build->add_option("--model", model, "Model config")->required()->check(CLI::ExistingFile);
  build->add_option("--out", out, "Artifact path (stdout when omitted)");

  auto* predict = app.add_subcommand("predict", "Run prediction over a whole log file");
  predict->add_option("--model", model, "Model config")->required()->check(CLI::ExistingFile);
  predict->add_option("--rules", rules, "Log-to-event rules")->required()->check(CLI::ExistingFile);
  predict->add_option("--log", log, "Log file")->required()->check(CLI::ExistingFile);
  add_engine_flags(predict, predict_args);

  auto* watch = app.add_subcommand("watch", "Poll a log file and predict continuously");
  watch->add_option("--model", model, "Model config")->required()->check(CLI::ExistingFile);
  watch->add_option("--rules", rules, "Log-to-event rules")->required()->check(CLI::ExistingFile);
  watch->add_option("--path", path, "Local (or staged) log path")->required();
  watch->add_option("--interval", interval, "Poll interval")->capture_default_str();
  watch->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  watch->add_option("--fetch-cmd", fetch, "Command that stages the log at --path; {path} expands to it");
  watch->add_option("--max-cycles", max_cycles, "Stop after this many polls (0 = run until signalled)");
  add_engine_flags(watch, watch_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return logfail::cli::cmd_validate({model}, std::cout, std::cerr);

    if (*build) {
      logfail::cli::BuildOptions opt{model, {}};
      if (!out.empty()) opt.out = out;
      return logfail::cli::cmd_build(opt, std::cout, std::cerr);
    }

    if (*predict) {
      logfail::cli::PredictOptions opt;
      opt.model = model;
      opt.rules = rules;
      opt.log = log;
      opt.engine = to_flags(predict_args);
      opt.format = to_format(predict_args.format);
      opt.trace = predict_args.trace;
      if (!predict_args.output.empty()) opt.output = predict_args.output;
      return logfail::cli::cmd_predict(opt, std::cout, std::cerr);
    }

    if (*watch) {
      logfail::cli::WatchOptions opt;
      opt.model = model;
      opt.rules = rules;
      opt.path = path;
      opt.interval = logfail::cli::parse_duration(interval);
      opt.checkpoint = checkpoint;
      if (!fetch.empty()) opt.fetch_command = fetch;
      opt.engine = to_flags(watch_args);
      opt.format = to_format(watch_args.format);
      opt.trace = watch_args.trace;
      if (!watch_args.output.empty()) opt.output = watch_args.output;
      if (max_cycles > 0) opt.max_cycles = max_cycles;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      return logfail::cli::cmd_watch(opt, std::cout, std::cerr, g_stop);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return logfail::cli::kExitError;
  }
  return logfail::cli::kExitError;
}
