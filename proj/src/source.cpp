#include "logfail/source.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace logfail {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kIdentityBytes = 256;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_range(std::ifstream& in, std::uint64_t from, std::uint64_t len) {
  std::string buf(len, '\0');
  in.seekg(static_cast<std::streamoff>(from));
  in.read(buf.data(), static_cast<std::streamsize>(len));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

}  // namespace

PollResult poll(const fs::path& path, const Checkpoint& cp) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) throw SourceError("cannot stat " + path.string() + ": " + ec.message());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SourceError("cannot open " + path.string());

  PollResult result;
  result.checkpoint = cp;
  auto& next = result.checkpoint;

  bool rotated = size < cp.offset;
  if (!rotated && cp.identity_length > 0) {
    auto head = read_range(in, 0, cp.identity_length);
    rotated = head.size() != cp.identity_length || fnv1a_hex(head) != cp.identity;
  }
  if (rotated) {
    result.rotated = true;
    next = Checkpoint{};
  }

  if (size > next.offset) {
    auto data = read_range(in, next.offset, size - next.offset);
    auto last_nl = data.rfind('\n');
    if (last_nl != std::string::npos) {
      data.resize(last_nl + 1);
      next.offset += data.size();
      next.line += static_cast<std::uint64_t>(std::count(data.begin(), data.end(), '\n'));
      result.chunk = std::move(data);
    }
  }

  const auto id_len = std::min<std::uint64_t>(next.offset, kIdentityBytes);
  if (id_len != next.identity_length) {
    in.clear();
    auto head = read_range(in, 0, id_len);
    next.identity_length = id_len;
    next.identity = id_len == 0 ? std::string{} : fnv1a_hex(head);
  }
  return result;
}

Checkpoint load_checkpoint(const fs::path& path) {
  Checkpoint cp;
  std::ifstream in(path);
  if (!in) return cp;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto l = detail::trim(detail::strip_comment(line));
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw SourceError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    auto key = detail::trim(l.substr(0, eq));
    auto value = std::string(detail::trim(l.substr(eq + 1)));
    try {
      if (key == "identity")
        cp.identity = value;
      else if (key == "identity_length")
        cp.identity_length = std::stoull(value);
      else if (key == "offset")
        cp.offset = std::stoull(value);
      else if (key == "line")
        cp.line = std::stoull(value);
      else if (key == "last_timestamp_ms")
        cp.last_timestamp = Timestamp{std::chrono::milliseconds{std::stoll(value)}};
      // Unknown keys are ignored so older binaries can read newer files.
    } catch (const std::exception&) {
      throw SourceError(path.string() + ":" + std::to_string(line_no) + ": bad value for " + std::string(key));
    }
  }
  return cp;
}

void save_checkpoint(const fs::path& path, const Checkpoint& cp) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw SourceError("cannot write " + tmp.string());
    out << "identity=" << cp.identity << '\n'
        << "identity_length=" << cp.identity_length << '\n'
        << "offset=" << cp.offset << '\n'
        << "line=" << cp.line << '\n';
    if (cp.last_timestamp)
      out << "last_timestamp_ms=" << cp.last_timestamp->time_since_epoch().count() << '\n'
          << "# last_timestamp=" << format_timestamp(*cp.last_timestamp) << '\n';
    if (!out.flush()) throw SourceError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw SourceError("cannot replace " + path.string() + ": " + ec.message());
}

FetchResult run_fetch_hook(const FetchHook& hook) {
  FetchResult r;
  r.path = hook.staged_path;
  if (hook.command.empty()) {
    r.diagnostic = "no fetch command configured";
    return r;
  }
  std::string cmd = hook.command;
  const std::string placeholder = "{path}";
  for (auto pos = cmd.find(placeholder); pos != std::string::npos; pos = cmd.find(placeholder, pos)) {
    const auto p = hook.staged_path.string();
    cmd.replace(pos, placeholder.size(), p);
    pos += p.size();
  }
  std::fflush(nullptr);
  const int status = std::system(cmd.c_str());
  if (status == -1) {
    r.diagnostic = std::string("fetch hook could not be started: ") + std::strerror(errno);
    return r;
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    r.diagnostic = WIFEXITED(status) ? "fetch hook exited with status " + std::to_string(WEXITSTATUS(status))
                                     : "fetch hook terminated abnormally";
    return r;
  }
  if (!fs::exists(hook.staged_path)) {
    r.diagnostic = "fetch hook succeeded but " + hook.staged_path.string() + " does not exist";
    return r;
  }
  r.ok = true;
  return r;
}

}  // namespace logfail
