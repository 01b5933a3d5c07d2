#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "logfail/timestamp.hpp"

namespace logfail {

/// Read position in a polled log file. `identity` fingerprints the first
/// `identity_length` bytes of the file so a replaced or rotated file is
/// noticed even when the fetch hook recreates it under the same name.
struct Checkpoint {
  std::string identity;
  std::uint64_t identity_length = 0;
  std::uint64_t offset = 0;
  std::uint64_t line = 0;  // complete lines delivered so far
  std::optional<Timestamp> last_timestamp;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct PollResult {
  std::string chunk;  // whole lines only, each ending in '\n'
  Checkpoint checkpoint;
  bool rotated = false;
};

class SourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns the complete lines appended since `cp`. A trailing partial line is
/// held back until its newline arrives. When the file shrank below the
/// checkpoint offset or its leading bytes changed, reading restarts at 0 and
/// `rotated` is set. Throws SourceError if the file cannot be read.
PollResult poll(const std::filesystem::path& path, const Checkpoint& cp);

/// Checkpoint file: key=value lines. A missing file yields a fresh checkpoint.
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// Writes via a temporary file and rename.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);

/// Operator-supplied command that stages a copy of the device log locally,
/// e.g. `scp node7:/var/log/sys.log {path}`. `{path}` expands to staged_path.
struct FetchHook {
  std::string command;
  std::filesystem::path staged_path;
};

struct FetchResult {
  bool ok = false;
  std::filesystem::path path;
  std::string diagnostic;
};

/// Runs the hook through /bin/sh. A non-zero exit or a missing staged file
/// is reported in `diagnostic`; the caller retries on its next cycle.
FetchResult run_fetch_hook(const FetchHook& hook);

}  // namespace logfail
