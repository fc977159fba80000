#pragma once

// Straight transcription of the RFC 1321 reference algorithm, used only to
// check the library's digest path.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace oracle {

std::array<std::uint8_t, 16> md5(const std::vector<std::uint8_t>& message);
std::array<std::uint8_t, 16> md5(std::string_view message);

}  // namespace oracle
