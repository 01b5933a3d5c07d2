#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "logfail/ids.hpp"

namespace logfail {

/// Fixed-width bit vector over the event universe. Bit j corresponds to the
/// event with index j; width is fixed at construction.
class EventMask {
 public:
  EventMask() = default;
  explicit EventMask(std::size_t width);

  std::size_t width() const { return width_; }

  void set(EventId e);
  void reset(EventId e);
  bool test(EventId e) const;

  std::size_t count() const;
  bool none() const;

  /// True when (this AND other) == this, i.e. every bit set here is also set
  /// in `other`. Widths must match.
  bool is_subset_of(const EventMask& other) const;

  /// Set bits in ascending index order.
  std::vector<EventId> events() const;

  /// One '0'/'1' character per event, event index 0 first.
  std::string to_string() const;

  friend bool operator==(const EventMask&, const EventMask&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace logfail
