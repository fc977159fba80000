#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ospfsec {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

using Micros = std::chrono::microseconds;
using Seconds = std::chrono::seconds;

// Wall-clock instant as seen by some clock (global or a router's skewed one).
using Timestamp = std::chrono::sys_time<Micros>;
using WallSeconds = std::chrono::sys_seconds;

// 32-bit OSPF identifier (router id, area id), printed as a dotted quad.
struct RouterId {
  std::uint32_t value{0};

  auto operator<=>(const RouterId&) const = default;

  std::string str() const;
  static std::optional<RouterId> parse(std::string_view dotted);
};

std::string to_hex(ByteView bytes);
std::optional<Bytes> from_hex(std::string_view hex);

// Accepts YYYY-MM-DDTHH:MM[:SS][Z]; always UTC.
std::optional<WallSeconds> parse_iso8601(std::string_view text);
std::string format_iso8601(WallSeconds t);

inline std::int64_t to_epoch_us(Timestamp t) { return t.time_since_epoch().count(); }

}  // namespace ospfsec
