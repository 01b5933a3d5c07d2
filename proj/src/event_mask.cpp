#include "logfail/event_mask.hpp"

#include <bit>
#include <stdexcept>

namespace logfail {

namespace {
constexpr std::size_t kWordBits = 64;
}

EventMask::EventMask(std::size_t width)
    : width_(width), words_((width + kWordBits - 1) / kWordBits, 0) {}

void EventMask::set(EventId e) {
  if (e.index >= width_) throw std::out_of_range("event index outside mask width");
  words_[e.index / kWordBits] |= std::uint64_t{1} << (e.index % kWordBits);
}

void EventMask::reset(EventId e) {
  if (e.index >= width_) throw std::out_of_range("event index outside mask width");
  words_[e.index / kWordBits] &= ~(std::uint64_t{1} << (e.index % kWordBits));
}

bool EventMask::test(EventId e) const {
  if (e.index >= width_) return false;
  return (words_[e.index / kWordBits] >> (e.index % kWordBits)) & 1U;
}

std::size_t EventMask::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool EventMask::none() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

bool EventMask::is_subset_of(const EventMask& other) const {
  if (other.width_ != width_) throw std::invalid_argument("event mask width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != words_[i]) return false;
  return true;
}

std::vector<EventId> EventMask::events() const {
  std::vector<EventId> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    auto bits = words_[w];
    while (bits != 0) {
      auto bit = static_cast<std::size_t>(std::countr_zero(bits));
      out.push_back(EventId{static_cast<std::uint32_t>(w * kWordBits + bit)});
      bits &= bits - 1;
    }
  }
  return out;
}

std::string EventMask::to_string() const {
  std::string s(width_, '0');
  for (auto e : events()) s[e.index] = '1';
  return s;
}

}  // namespace logfail
