#pragma once

#include <optional>
#include <string_view>

namespace ospfsec {

// Outcome of admitting one received frame. Everything except Accept means
// the frame had no effect on neighbor state.
enum class Verdict {
  Accept,
  Malformed,
  AuthTypeMismatch,
  BadChecksum,
  PasswordMismatch,
  UnknownKeyId,
  KeyExpired,
  DigestMismatch,
  Replay,
  Disorder,
  NotAdjacent,
  SelfOriginated,
  Blocked,
  Overloaded,
};

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

}  // namespace ospfsec
