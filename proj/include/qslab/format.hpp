#ifndef QSLAB_FORMAT_HPP
#define QSLAB_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace qslab {

// Shortest decimal that round-trips; identical on every conforming platform.
inline std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

}  // namespace qslab

#endif  // QSLAB_FORMAT_HPP
