#pragma once

// Socio-technical confidence claims attached to model elements.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/error.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/network_spec.hpp"

namespace ssaf {

enum class StmFactor : std::uint8_t { Structure, Process, People, Tools, Conceptual };

inline constexpr std::array<StmFactor, 5> kAllStmFactors = {
    StmFactor::Structure, StmFactor::Process, StmFactor::People, StmFactor::Tools,
    StmFactor::Conceptual};

constexpr std::string_view to_string(StmFactor f) {
  switch (f) {
    case StmFactor::Structure: return "Structure";
    case StmFactor::Process: return "Process";
    case StmFactor::People: return "People";
    case StmFactor::Tools: return "Tools";
    case StmFactor::Conceptual: return "Conceptual";
  }
  return "?";
}

inline std::optional<StmFactor> parse_stm_factor(std::string_view s) {
  for (StmFactor f : kAllStmFactors)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

enum class Confidence : std::uint8_t { Primary, Secondary };

constexpr std::string_view to_string(Confidence c) {
  return c == Confidence::Primary ? "Primary" : "Secondary";
}

inline std::optional<Confidence> parse_confidence(std::string_view s) {
  if (s == "Primary") return Confidence::Primary;
  if (s == "Secondary") return Confidence::Secondary;
  return std::nullopt;
}

struct StmClaim {
  std::string id;
  StmFactor factor = StmFactor::People;
  Confidence confidence = Confidence::Primary;
  std::string text;
  std::vector<std::string> attached_to;  // empty: model-wide claim
  // Another claim this one bears on.  Recorded only; carries no semantics.
  std::optional<std::string> supports;

  bool operator==(const StmClaim&) const = default;
};

struct FactorCoverage {
  StmFactor factor;
  std::size_t primary = 0;
  std::size_t secondary = 0;

  bool uncovered() const { return primary + secondary == 0; }
};

// Ids of everything a claim may attach to: catalog requirements and
// classes, link pairs ("FPT_STM->Timing"), and network node ids.
inline std::set<std::string> known_elements(const Catalog& catalog,
                                            const NetworkSpec* spec = nullptr) {
  std::set<std::string> out;
  for (const auto& r : catalog.requirements) out.insert(r.id);
  for (const auto& c : catalog.classes) out.insert(c.id);
  if (spec != nullptr)
    for (const auto& n : spec->nodes) {
      out.insert(n.id);
      for (const auto& p : n.parents)
        if (n.role == NodeRole::Type && n.req_type)
          out.insert(p + "->" + std::string(to_string(*n.req_type)));
    }
  return out;
}

class ClaimRegistry {
 public:
  ClaimRegistry() = default;
  explicit ClaimRegistry(std::set<std::string> known_elements)
      : known_(std::move(known_elements)) {}

  void add_claim(StmClaim claim) {
    if (index_.count(claim.id)) throw ValidationError("duplicate claim id: " + claim.id);
    for (const auto& id : claim.attached_to)
      if (!known_.count(id)) throw NotFoundError(id);
    if (claim.supports && !index_.count(*claim.supports)) throw NotFoundError(*claim.supports);
    index_.emplace(claim.id, claims_.size());
    claims_.push_back(std::move(claim));
  }

  const std::vector<StmClaim>& claims() const { return claims_; }
  std::size_t size() const { return claims_.size(); }

  const StmClaim& claim(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw NotFoundError(std::string(id));
    return claims_[it->second];
  }

  // One entry per factor, in factor enumeration order.
  std::vector<FactorCoverage> coverage_report() const {
    std::vector<FactorCoverage> out;
    for (StmFactor f : kAllStmFactors) out.push_back({f});
    for (const auto& c : claims_) {
      auto& row = out[static_cast<std::size_t>(c.factor)];
      (c.confidence == Confidence::Primary ? row.primary : row.secondary)++;
    }
    return out;
  }

 private:
  std::set<std::string> known_;
  std::vector<StmClaim> claims_;
  std::map<std::string, std::size_t> index_;
};

inline nlohmann::json to_json(const StmClaim& c) {
  nlohmann::json j = {{"id", c.id},
                      {"factor", to_string(c.factor)},
                      {"confidence", to_string(c.confidence)},
                      {"text", c.text},
                      {"attached_to", c.attached_to}};
  if (c.supports) j["supports"] = *c.supports;
  return j;
}

inline nlohmann::json to_json(const std::vector<FactorCoverage>& coverage) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : coverage)
    out.push_back({{"factor", to_string(row.factor)},
                   {"primary", row.primary},
                   {"secondary", row.secondary},
                   {"uncovered", row.uncovered()}});
  return out;
}

inline std::vector<StmClaim> parse_claims(const nlohmann::json& doc) {
  using namespace json_util;
  if (!doc.is_array()) throw ParseError("claims: expected a JSON array");
  std::vector<StmClaim> out;
  for (const auto& j : doc) {
    require_object(j, "claim");
    reject_unknown_keys(j, "claim",
                        {"id", "factor", "confidence", "text", "attached_to", "supports"});
    StmClaim c;
    c.id = get_string(j, "claim", "id");
    const std::string where = "claim " + c.id;
    auto f = parse_stm_factor(get_string(j, where, "factor"));
    if (!f) throw ParseError(where + ": unknown factor");
    auto conf = parse_confidence(get_string(j, where, "confidence"));
    if (!conf) throw ParseError(where + ": confidence must be Primary or Secondary");
    c.factor = *f;
    c.confidence = *conf;
    c.text = get_string(j, where, "text");
    if (j.contains("attached_to"))
      for (const auto& a : get_array(j, where, "attached_to")) {
        if (!a.is_string()) throw ParseError(where + ": attached_to must hold strings");
        c.attached_to.push_back(a.get<std::string>());
      }
    if (j.contains("supports")) c.supports = get_string(j, where, "supports");
    out.push_back(std::move(c));
  }
  return out;
}

// Claims are added in file order, so `supports` may only name earlier claims.
inline ClaimRegistry load_claims(const nlohmann::json& doc, std::set<std::string> known) {
  ClaimRegistry reg(std::move(known));
  for (auto& c : parse_claims(doc)) reg.add_claim(std::move(c));
  return reg;
}

}  // namespace ssaf
