#include "jtm/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace jtm {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace jtm
