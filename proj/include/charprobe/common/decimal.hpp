#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace charprobe {

// Fixed-point rendering with round-half-up applied to the shortest
// round-trip decimal form of the value, so the result does not depend on
// binary representation noise (91.25 -> "91.3", 96.875 -> "96.88").
std::string format_fixed(double value, int decimals);

// 100 * num / den, or nullopt when den == 0.
std::optional<double> percentage(std::int64_t num, std::int64_t den);

// Shortest round-trip representation, used for full-precision columns.
std::string format_shortest(double value);

}  // namespace charprobe
