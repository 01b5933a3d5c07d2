#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace logfail {

// Zero-based positions into the event and failure tables. Names (E1, F1, ...)
// live in the model; these are what the graph and engine work with.
struct EventId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(EventId, EventId) = default;
};

struct FailureId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(FailureId, FailureId) = default;
};

}  // namespace logfail
