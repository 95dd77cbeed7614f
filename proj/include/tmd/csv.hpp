#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tmd/version.hpp"

namespace tmd::csv {

/// Shortest round-trip representation, identical on every run.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

inline std::string iso_timestamp_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// The CSV body: one fixed header row plus data rows. The body is what the
/// determinism guarantee covers, byte for byte.
struct Table {
  std::string header;
  std::vector<std::string> rows;

  std::string body() const {
    std::string s = header;
    s += '\n';
    for (const auto& r : rows) {
      s += r;
      s += '\n';
    }
    return s;
  }
};

using ParamList = std::vector<std::pair<std::string, std::string>>;

/// Embedded run manifest: subcommand, resolved parameters, tool version,
/// timestamp and body checksum, as '#' comment lines ahead of the data.
/// Re-running the subcommand with the listed parameters reproduces the body.
inline void write_with_manifest(std::ostream& out, const std::string& subcommand,
                                const ParamList& params, const Table& table) {
  const std::string body = table.body();
  out << "# tmd-sim " << TMD_SIM_VERSION << "\n";
  out << "# subcommand: " << subcommand << "\n";
  out << "# generated: " << iso_timestamp_utc() << "\n";
  for (const auto& [k, v] : params) out << "# param " << k << " = " << v << "\n";
  out << "# body-rows: " << table.rows.size() << "\n";
  out << "# body-fnv1a64: " << hex64(fnv1a64(body)) << "\n";
  out << body;
}

} // namespace tmd::csv
