#pragma once

// Shared vocabulary: the seven requirement types, the two domains and the
// four safety states with their type grouping.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssaf/error.hpp"

namespace ssaf {

enum class Domain : std::uint8_t { Safety, Security };

enum class ReqType : std::uint8_t {
  ResourceUse,
  Timing,
  FailureBehaviour,
  FailureDetection,
  Recovery,
  Communication,
  Trust,
};

inline constexpr std::array<ReqType, 7> kAllReqTypes = {
    ReqType::ResourceUse,      ReqType::Timing,   ReqType::FailureBehaviour,
    ReqType::FailureDetection, ReqType::Recovery, ReqType::Communication,
    ReqType::Trust,
};

enum class SafetyState : std::uint8_t { S0, S1, S2, S3 };

// States that stand for a violated group; S0 is the absence of violations.
inline constexpr std::array<SafetyState, 3> kViolationStates = {
    SafetyState::S1, SafetyState::S2, SafetyState::S3};

constexpr std::string_view to_string(Domain d) {
  return d == Domain::Safety ? "safety" : "security";
}

constexpr std::string_view to_string(ReqType t) {
  switch (t) {
    case ReqType::ResourceUse: return "ResourceUse";
    case ReqType::Timing: return "Timing";
    case ReqType::FailureBehaviour: return "FailureBehaviour";
    case ReqType::FailureDetection: return "FailureDetection";
    case ReqType::Recovery: return "Recovery";
    case ReqType::Communication: return "Communication";
    case ReqType::Trust: return "Trust";
  }
  return "?";
}

constexpr std::string_view to_string(SafetyState s) {
  switch (s) {
    case SafetyState::S0: return "S0";
    case SafetyState::S1: return "S1";
    case SafetyState::S2: return "S2";
    case SafetyState::S3: return "S3";
  }
  return "?";
}

constexpr std::string_view describe(SafetyState s) {
  switch (s) {
    case SafetyState::S0: return "None";
    case SafetyState::S1: return "Resource & Timing Violated";
    case SafetyState::S2: return "Failure Behaviour Violated";
    case SafetyState::S3: return "Communication Violated";
  }
  return "?";
}

inline std::optional<Domain> parse_domain(std::string_view s) {
  if (s == "safety") return Domain::Safety;
  if (s == "security") return Domain::Security;
  return std::nullopt;
}

inline std::optional<ReqType> parse_req_type(std::string_view s) {
  for (ReqType t : kAllReqTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

inline std::optional<SafetyState> parse_safety_state(std::string_view s) {
  for (SafetyState st : {SafetyState::S0, SafetyState::S1, SafetyState::S2,
                         SafetyState::S3})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

// The state a violation of a requirement of type `t` drives the machine to.
// {ResourceUse, Timing} -> S1; {FailureBehaviour, FailureDetection,
// Recovery} -> S2; {Communication, Trust} -> S3.
constexpr SafetyState group_of(ReqType t) {
  switch (t) {
    case ReqType::ResourceUse:
    case ReqType::Timing:
      return SafetyState::S1;
    case ReqType::FailureBehaviour:
    case ReqType::FailureDetection:
    case ReqType::Recovery:
      return SafetyState::S2;
    case ReqType::Communication:
    case ReqType::Trust:
      return SafetyState::S3;
  }
  return SafetyState::S0;
}

inline std::vector<ReqType> types_in(SafetyState s) {
  std::vector<ReqType> out;
  for (ReqType t : kAllReqTypes)
    if (group_of(t) == s) out.push_back(t);
  return out;
}

// Total order over the violation states, most severe first.  The default
// ranks failure-behaviour violations above resource/timing ones, and both
// above communication/trust.
class SeverityOrder {
 public:
  constexpr SeverityOrder() = default;

  explicit SeverityOrder(std::array<SafetyState, 3> most_severe_first)
      : ranking_(most_severe_first) {
    for (SafetyState s : kViolationStates)
      if (std::count(ranking_.begin(), ranking_.end(), s) != 1)
        throw ValidationError("severity order must rank S1, S2 and S3 once");
  }

  // 0 is the most severe; S0 ranks after every violation state.
  constexpr int rank(SafetyState s) const {
    for (int i = 0; i < 3; ++i)
      if (ranking_[i] == s) return i;
    return 3;
  }

  constexpr const std::array<SafetyState, 3>& ranking() const {
    return ranking_;
  }

 private:
  std::array<SafetyState, 3> ranking_{SafetyState::S2, SafetyState::S1,
                                      SafetyState::S3};
};

}  // namespace ssaf
