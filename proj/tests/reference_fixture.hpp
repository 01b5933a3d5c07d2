#pragma once

// The eight-event, five-failure reference model shared by the test suites.

#include <string>
#include <string_view>
#include <vector>

#include "logfail/model.hpp"
#include "logfail/parser.hpp"

namespace logfail::testing {

inline constexpr std::string_view kReferenceModel =
    "events: E1 E2 E3 E4 E5 E6 E7 E8\n"
    "failure F1: E1 E5 E6\n"
    "failure F2: E3 E4 E6 E7\n"
    "failure F3: E2 E5 E7 E8\n"
    "failure F4: E5 E6\n"
    "failure F5: E1 E5 E8\n";

// Event-failure matrix rows as printed for the reference model.
inline const std::vector<std::string> kReferenceRows = {
    "10001100", "00110110", "01001011", "00001100", "10001001",
};

// Hop matrix, one row per event E1..E8, columns F1..F5.
inline const std::vector<std::vector<unsigned>> kReferenceHops = {
    {3, 0, 0, 0, 3}, {0, 0, 4, 0, 0}, {0, 4, 0, 0, 0}, {0, 3, 0, 0, 0},
    {2, 0, 3, 2, 2}, {1, 2, 0, 1, 0}, {0, 1, 2, 0, 0}, {0, 0, 1, 0, 1},
};

// (100 - e^h) / 100, evaluated independently (python math.exp) and frozen.
inline constexpr double kP1 = 0.972817181715;
inline constexpr double kP2 = 0.926109439011;
inline constexpr double kP3 = 0.799144630768;
inline constexpr double kP4 = 0.454018499669;

inline Model reference_model() { return load_model(kReferenceModel); }

inline EventId ev(int one_based) { return EventId{static_cast<std::uint32_t>(one_based - 1)}; }
inline FailureId fl(int one_based) { return FailureId{static_cast<std::uint32_t>(one_based - 1)}; }

inline EventRecord rec(int one_based_event, long seconds, std::uint64_t line = 0) {
  return EventRecord{ev(one_based_event), Timestamp{std::chrono::seconds{seconds}}, line};
}

}  // namespace logfail::testing
