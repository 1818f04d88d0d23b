#include "charprobe/common/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string_view>

namespace charprobe {

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";

  // Plain positional digits, no exponent.
  std::array<char, 512> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  std::string s(buf.data(), res.ptr);

  bool negative = false;
  if (!s.empty() && s[0] == '-') {
    negative = true;
    s.erase(0, 1);
  }
  std::string int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }

  const auto keep = static_cast<std::size_t>(decimals);
  bool round_up = frac_part.size() > keep && frac_part[keep] >= '5';
  frac_part.resize(keep, '0');

  std::string digits = int_part + frac_part;
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0) {
      if (digits[static_cast<std::size_t>(i)] == '9') {
        digits[static_cast<std::size_t>(i)] = '0';
        --i;
      } else {
        ++digits[static_cast<std::size_t>(i)];
        break;
      }
    }
    if (i < 0) digits.insert(digits.begin(), '1');
  }
  std::string whole = digits.substr(0, digits.size() - keep);
  std::string frac = digits.substr(digits.size() - keep);

  bool all_zero = whole.find_first_not_of('0') == std::string::npos &&
                  frac.find_first_not_of('0') == std::string::npos;
  std::string out = (negative && !all_zero) ? "-" : "";
  out += whole.empty() ? "0" : whole;
  if (keep > 0) out += "." + frac;
  return out;
}

std::optional<double> percentage(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace charprobe
