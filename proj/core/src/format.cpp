#include "cdkit/format.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace cdkit {

std::string format_double(double x) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buffer, ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::invalid_argument("not a number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace cdkit
