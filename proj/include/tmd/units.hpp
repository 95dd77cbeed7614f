#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tmd::units {

namespace detail {

inline double parse_with_suffixes(const std::string& text,
                                  const std::vector<std::pair<const char*, double>>& suffixes,
                                  const char* quantity) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin)
    throw std::domain_error(std::string(quantity) + ": cannot parse number in '" + text + "'");
  while (*end == ' ' || *end == '\t') ++end;  // "10 ns" reads like "10ns"
  const std::string suffix(end);
  if (suffix.empty()) {
    std::string accepted;
    for (const auto& [s, f] : suffixes) accepted += std::string(s) + " ";
    throw std::domain_error(std::string(quantity) + ": '" + text +
                            "' has no unit suffix; accepted: " + accepted);
  }
  for (const auto& [s, factor] : suffixes)
    if (suffix == s) return value * factor;
  throw std::domain_error(std::string(quantity) + ": unknown unit '" + suffix + "' in '" +
                          text + "'");
}

} // namespace detail

inline double parse_duration_s(const std::string& text) {
  return detail::parse_with_suffixes(
      text,
      {{"fs", 1e-15}, {"ps", 1e-12}, {"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}},
      "duration");
}

inline double parse_rate_hz(const std::string& text) {
  return detail::parse_with_suffixes(
      text, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}, "rate");
}

inline double parse_length_m(const std::string& text) {
  return detail::parse_with_suffixes(
      text, {{"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}, {"km", 1e3}}, "length");
}

inline double parse_db(const std::string& text) {
  return detail::parse_with_suffixes(text, {{"dB", 1.0}}, "loss");
}

inline double parse_db_per_km(const std::string& text) {
  return detail::parse_with_suffixes(text, {{"dB/km", 1.0}}, "loss rate");
}

inline double parse_speed_m_per_s(const std::string& text) {
  return detail::parse_with_suffixes(text, {{"m/s", 1.0}, {"km/s", 1e3}}, "speed");
}

inline double parse_dispersion_ps_nm_km(const std::string& text) {
  return detail::parse_with_suffixes(text, {{"ps/nm/km", 1.0}}, "dispersion coefficient");
}

} // namespace tmd::units
