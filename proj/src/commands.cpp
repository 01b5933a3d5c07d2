#include "logfail/commands.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "logfail/graph.hpp"
#include "logfail/model.hpp"
#include "logfail/report_format.hpp"
#include "logfail/source.hpp"

namespace logfail::cli {

namespace fs = std::filesystem;
using namespace std::chrono;

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::failure_predicted: return kExitFailurePredicted;
    case Outcome::invalid_sequences_only: return kExitInvalidOnly;
    case Outcome::no_prediction: return kExitNoPrediction;
  }
  return kExitError;
}

milliseconds parse_duration(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad duration '" + s + "'");
  }
  auto unit = s.substr(used);
  double ms;
  if (unit.empty() || unit == "s")
    ms = value * 1000;
  else if (unit == "ms")
    ms = value;
  else if (unit == "m" || unit == "min")
    ms = value * 60'000;
  else if (unit == "h")
    ms = value * 3'600'000;
  else
    throw std::invalid_argument("bad duration unit in '" + s + "'");
  if (!(ms > 0)) throw std::invalid_argument("duration must be positive: '" + s + "'");
  return milliseconds{static_cast<milliseconds::rep>(ms)};
}

EnginePolicy EngineFlags::policy() const {
  EnginePolicy p;
  p.pruning = !no_prune;
  p.strictness = lenient ? Strictness::lenient : Strictness::strict;
  p.alert_threshold = threshold;
  p.session_timeout = session_timeout;
  return p;
}

WindowConfig EngineFlags::window_config() const { return WindowConfig{window, !no_dedup}; }

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model load_model_file(const fs::path& p) {
  try {
    return load_model(read_file(p));
  } catch (const ModelError& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
}

RuleSet load_rules_file(const fs::path& p, const Model& model) {
  try {
    return compile_rules(read_file(p), model);
  } catch (const RuleError& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
}

class ReportSink {
 public:
  ReportSink(const Model& model, OutputFormat format, std::ostream* structured, std::ostream* trace)
      : model_(model), format_(format), structured_(structured), trace_(trace) {}

  void write(const PredictionReport& r) {
    if (structured_) {
      if (format_ == OutputFormat::csv) {
        if (!header_) *structured_ << csv_header();
        *structured_ << report_to_csv(r, model_);
      } else {
        *structured_ << report_to_json(r, model_) << '\n';
      }
    }
    if (trace_) {
      if (!header_) *trace_ << trace_header();
      *trace_ << report_to_trace(r, model_);
    }
    header_ = true;
  }

  void flush() {
    if (structured_) structured_->flush();
    if (trace_) trace_->flush();
  }

 private:
  const Model& model_;
  OutputFormat format_;
  std::ostream* structured_;
  std::ostream* trace_;
  bool header_ = false;
};

void print_diagnostics(const std::vector<ParseDiagnostic>& diags, const fs::path& log, std::ostream& err) {
  for (const auto& d : diags) err << log.string() << ":" << d.line << ": " << d.reason << '\n';
}

}  // namespace

int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
  Model model;
  try {
    model = load_model(read_file(opt.model));
  } catch (const ModelError& e) {
    err << opt.model.string() << ": violation: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  auto report = validate_matrix(model.matrix);
  out << opt.model.string() << ": " << model.matrix.n_events() << " events, " << model.matrix.n_failures()
      << " failures\n";
  for (const auto& v : report.violations) out << "violation: " << v.message << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w.message << '\n';
  out << (report.ok() ? "OK\n" : "INVALID\n");
  return report.ok() ? kExitOk : kExitError;
}

int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    auto model = load_model_file(opt.model);
    auto report = validate_matrix(model.matrix);
    if (!report.ok()) {
      for (const auto& v : report.violations) err << "violation: " << v.message << '\n';
      return kExitError;
    }
    for (const auto& w : report.warnings) err << "warning: " << w.message << '\n';
    auto artifact = graph_artifact(model, build_dag(model.matrix), build_hop_matrix(model.matrix));
    if (opt.out) {
      std::ofstream f(*opt.out, std::ios::binary | std::ios::trunc);
      if (!f || !(f << artifact)) throw std::runtime_error("cannot write " + opt.out->string());
    } else {
      out << artifact;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_predict(const PredictOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    auto model = load_model_file(opt.model);
    auto rules = load_rules_file(opt.rules, model);
    auto log = read_file(opt.log);

    std::ofstream file;
    std::ostream* structured = nullptr;
    if (opt.output) {
      file.open(*opt.output, std::ios::trunc);
      if (!file) throw std::runtime_error("cannot write " + opt.output->string());
      structured = &file;
    } else if (!opt.trace) {
      structured = &out;
    }
    ReportSink sink(model, opt.format, structured, opt.trace ? &out : nullptr);

    Pipeline pipeline(model, std::move(rules), opt.engine.policy(), opt.engine.window_config());
    auto step = pipeline.feed(log);
    print_diagnostics(step.diagnostics, opt.log, err);

    OutcomeTracker outcome;
    for (const auto& r : step.reports) {
      sink.write(r);
      outcome.observe(r);
    }
    sink.flush();
    return exit_code(outcome.outcome());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_watch(const WatchOptions& opt, std::ostream& out, std::ostream& err, const std::atomic<bool>& stop) {
  std::optional<Model> model;
  std::optional<Pipeline> pipeline;
  Checkpoint cp;
  try {
    model = load_model_file(opt.model);
    pipeline.emplace(*model, load_rules_file(opt.rules, *model), opt.engine.policy(), opt.engine.window_config());
    cp = load_checkpoint(opt.checkpoint);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  pipeline->parser().set_next_line(cp.line + 1);

  std::ofstream file;
  std::ostream* structured = nullptr;
  if (opt.output) {
    file.open(*opt.output, std::ios::app);
    if (!file) {
      err << "error: cannot write " << opt.output->string() << '\n';
      return kExitError;
    }
    structured = &file;
  } else if (!opt.trace) {
    structured = &out;
  }
  ReportSink sink(*model, opt.format, structured, opt.trace ? &out : nullptr);
  OutcomeTracker outcome;

  auto persist = [&] {
    try {
      save_checkpoint(opt.checkpoint, cp);
    } catch (const std::exception& e) {
      err << "checkpoint: " << e.what() << '\n';
    }
  };

  for (std::size_t cycle = 0; !stop.load() && (!opt.max_cycles || cycle < *opt.max_cycles); ++cycle) {
    if (cycle > 0) {
      auto deadline = steady_clock::now() + opt.interval;
      while (!stop.load() && steady_clock::now() < deadline)
        std::this_thread::sleep_for(std::min<milliseconds>(milliseconds{50}, opt.interval));
      if (stop.load()) break;
    }

    if (opt.before_poll) opt.before_poll(cycle);
    bool fetched = true;
    if (opt.fetch_command) {
      auto f = run_fetch_hook(FetchHook{*opt.fetch_command, opt.path});
      if (!f.ok) {
        err << "fetch: " << f.diagnostic << '\n';
        fetched = false;
      }
    }

    std::string chunk;
    if (fetched) {
      try {
        auto polled = poll(opt.path, cp);
        if (polled.rotated) {
          err << "poll: " << opt.path.string() << " rotated or truncated, reading from start\n";
          pipeline->parser().set_next_line(1);
        }
        chunk = std::move(polled.chunk);
        cp = polled.checkpoint;
      } catch (const SourceError& e) {
        err << "poll: " << e.what() << '\n';
      }
    }

    if (chunk.empty()) {
      err << "heartbeat cycle=" << cycle << " offset=" << cp.offset << " sessions=" << pipeline->engine().snapshot().size()
          << '\n';
    } else {
      auto step = pipeline->feed(chunk);
      print_diagnostics(step.diagnostics, opt.path, err);
      for (const auto& r : step.reports) {
        sink.write(r);
        outcome.observe(r);
      }
      sink.flush();
      if (auto ts = pipeline->last_timestamp()) cp.last_timestamp = ts;
    }
    persist();
  }
  persist();
  return exit_code(outcome.outcome());
}

}  // namespace logfail::cli
