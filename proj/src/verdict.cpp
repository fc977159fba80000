#include "ospfsec/verdict.hpp"

#include <array>
#include <utility>

namespace ospfsec {
namespace {

constexpr std::array<std::pair<Verdict, std::string_view>, 14> kNames{{
    {Verdict::Accept, "Accept"},
    {Verdict::Malformed, "Malformed"},
    {Verdict::AuthTypeMismatch, "AuthTypeMismatch"},
    {Verdict::BadChecksum, "BadChecksum"},
    {Verdict::PasswordMismatch, "PasswordMismatch"},
    {Verdict::UnknownKeyId, "UnknownKeyId"},
    {Verdict::KeyExpired, "KeyExpired"},
    {Verdict::DigestMismatch, "DigestMismatch"},
    {Verdict::Replay, "Replay"},
    {Verdict::Disorder, "Disorder"},
    {Verdict::NotAdjacent, "NotAdjacent"},
    {Verdict::SelfOriginated, "SelfOriginated"},
    {Verdict::Blocked, "Blocked"},
    {Verdict::Overloaded, "Overloaded"},
}};

}  // namespace

std::string_view to_string(Verdict v) {
  for (const auto& [verdict, name] : kNames) {
    if (verdict == v) return name;
  }
  return "Unknown";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (const auto& [verdict, name] : kNames) {
    if (name == s) return verdict;
  }
  return std::nullopt;
}

}  // namespace ospfsec
