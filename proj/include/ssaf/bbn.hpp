#pragma once

// Discrete Bayesian network over binary violation variables, with exact
// posterior marginals by variable elimination.
//
// State index 0 is not_violated, 1 is violated.  A node with k parents has
// 2^k CPT rows; row r corresponds to the parent assignment whose binary
// encoding is r, the first parent being the most significant bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssaf/error.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/network_spec.hpp"

namespace ssaf::bbn {

enum class State : std::uint8_t { NotViolated = 0, Violated = 1 };

constexpr std::string_view to_string(State s) {
  return s == State::Violated ? "violated" : "not_violated";
}

inline std::optional<State> parse_state(std::string_view s) {
  if (s == "violated") return State::Violated;
  if (s == "not_violated") return State::NotViolated;
  return std::nullopt;
}

using Row = std::array<double, 2>;  // {P(not_violated), P(violated)}

struct Node {
  std::string id;
  std::vector<std::string> parents;
  std::vector<Row> cpt;

  bool operator==(const Node&) const = default;
};

// Observed nodes only; unobserved nodes are absent.
using Evidence = std::map<std::string, State>;

struct Marginal {
  double not_violated = 0.0;
  double violated = 0.0;

  bool operator==(const Marginal&) const = default;
};

struct Posterior {
  std::map<std::string, Marginal> marginals;

  double violated(const std::string& id) const {
    auto it = marginals.find(id);
    if (it == marginals.end()) throw NotFoundError(id);
    return it->second.violated;
  }

  bool operator==(const Posterior&) const = default;
};

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr std::size_t kMaxParents = 24;

class Network {
 public:
  Network() = default;

  // Throws ValidationError on duplicate ids, unresolved parents, cycles or
  // malformed CPTs.
  explicit Network(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!index_.emplace(nodes_[i].id, i).second)
        throw ValidationError("duplicate node id: " + nodes_[i].id);

    parents_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.parents.size() > kMaxParents)
        throw ValidationError("node " + n.id + ": too many parents");
      for (const auto& p : n.parents) {
        auto it = index_.find(p);
        if (it == index_.end())
          throw ValidationError("node " + n.id + ": unknown parent " + p);
        if (std::count(n.parents.begin(), n.parents.end(), p) > 1)
          throw ValidationError("node " + n.id + ": repeated parent " + p);
        parents_[i].push_back(it->second);
      }
      const std::size_t rows = std::size_t{1} << n.parents.size();
      if (n.cpt.size() != rows)
        throw ValidationError("node " + n.id + ": CPT has " +
                              std::to_string(n.cpt.size()) + " rows, expected " +
                              std::to_string(rows));
      for (const Row& r : n.cpt) {
        if (!(r[0] >= 0.0 && r[0] <= 1.0 && r[1] >= 0.0 && r[1] <= 1.0) ||
            std::abs(r[0] + r[1] - 1.0) > kRowSumTolerance)
          throw ValidationError("node " + n.id + ": CPT row is not a distribution");
      }
    }
    topo_ = topological_order();
  }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<std::size_t>& parent_indices(std::size_t i) const { return parents_.at(i); }
  const std::vector<std::size_t>& topological() const { return topo_; }

  bool contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw NotFoundError(std::string(id));
    return it->second;
  }

  const Node& node(std::string_view id) const { return nodes_[index_of(id)]; }

  std::vector<std::size_t> children(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      if (std::find(parents_[j].begin(), parents_[j].end(), i) != parents_[j].end())
        out.push_back(j);
    return out;
  }

  // Strict descendants of node i, ascending.
  std::vector<std::size_t> descendants(std::size_t i) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      for (std::size_t c : children(n))
        if (!seen[c]) {
          seen[c] = true;
          stack.push_back(c);
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < seen.size(); ++j)
      if (seen[j]) out.push_back(j);
    return out;
  }

 private:
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> indegree(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) indegree[i] = parents_[i].size();
    std::vector<std::size_t> ready, order;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (indegree[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
      const std::size_t n = ready.back();
      ready.pop_back();
      order.push_back(n);
      for (std::size_t c : children(n))
        if (--indegree[c] == 0) ready.push_back(c);
    }
    if (order.size() != nodes_.size()) {
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (indegree[i] > 0) throw ValidationError("cycle detected through node " + nodes_[i].id);
    }
    return order;
  }

  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::size_t> topo_;
};

// 1 - (1 - leak) * prod_{i: flags[i]} (1 - weights[i]).
inline double noisy_or_row(const std::vector<bool>& parent_flags,
                           std::span<const double> weights, double leak) {
  if (parent_flags.size() != weights.size())
    throw ValidationError("noisy-OR: " + std::to_string(parent_flags.size()) +
                          " parent flags but " + std::to_string(weights.size()) +
                          " weights");
  double off = 1.0 - leak;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (parent_flags[i]) off *= 1.0 - weights[i];
  return 1.0 - off;
}

// Parent flags of CPT row `row` for a node with `k` parents.
inline std::vector<bool> row_flags(std::size_t row, std::size_t k) {
  std::vector<bool> flags(k);
  for (std::size_t i = 0; i < k; ++i) flags[i] = (row >> (k - 1 - i)) & 1u;
  return flags;
}

// Expands parameterized CPTs into full tables.  Throws ValidationError on
// mis-sized parameters, out-of-range probabilities or cycles.
inline Network build_network(const NetworkSpec& spec) {
  auto check_p = [](double p, const std::string& where) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(where + ": probability outside [0,1]");
  };
  std::vector<Node> nodes;
  nodes.reserve(spec.nodes.size());
  for (const NodeSpec& s : spec.nodes) {
    Node n{s.id, s.parents, {}};
    const std::size_t k = s.parents.size();
    if (k > kMaxParents) throw ValidationError("node " + s.id + ": too many parents");
    const std::size_t rows = std::size_t{1} << k;
    if (const auto* prior = std::get_if<PriorCpt>(&s.cpt)) {
      if (k != 0) throw ValidationError("node " + s.id + ": prior CPT on a node with parents");
      check_p(prior->p_violated, "node " + s.id);
      n.cpt.push_back({1.0 - prior->p_violated, prior->p_violated});
    } else if (const auto* no = std::get_if<NoisyOrCpt>(&s.cpt)) {
      if (no->weights.size() != k)
        throw ValidationError("node " + s.id + ": CPT row mis-sized (" +
                              std::to_string(no->weights.size()) + " weights for " +
                              std::to_string(k) + " parents)");
      check_p(no->leak, "node " + s.id + " leak");
      for (double w : no->weights) check_p(w, "node " + s.id + " weight");
      for (std::size_t r = 0; r < rows; ++r) {
        const double p = noisy_or_row(row_flags(r, k), no->weights, no->leak);
        n.cpt.push_back({1.0 - p, p});
      }
    } else {
      for (std::size_t r = 0; r < rows; ++r)
        n.cpt.push_back(r == 0 ? Row{1.0, 0.0} : Row{0.0, 1.0});
    }
    nodes.push_back(std::move(n));
  }
  return Network(std::move(nodes));
}

namespace detail {

// Table over binary variables; vars ascending, bit j of an index is the
// state of vars[j].
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<double> values;

  bool mentions(std::size_t v) const {
    return std::binary_search(vars.begin(), vars.end(), v);
  }
};

inline constexpr std::size_t kMaxFactorWidth = 26;

// Bit position of each of `sub` within `super` (both ascending).
inline std::vector<std::size_t> positions(const std::vector<std::size_t>& sub,
                                          const std::vector<std::size_t>& super) {
  std::vector<std::size_t> out;
  out.reserve(sub.size());
  for (std::size_t v : sub)
    out.push_back(std::lower_bound(super.begin(), super.end(), v) - super.begin());
  return out;
}

inline std::size_t project(std::size_t index, const std::vector<std::size_t>& pos) {
  std::size_t out = 0;
  for (std::size_t j = 0; j < pos.size(); ++j) out |= ((index >> pos[j]) & 1u) << j;
  return out;
}

inline Factor node_factor(const Network& net, std::size_t i) {
  const auto& parents = net.parent_indices(i);
  const Node& node = net.node(i);
  Factor f;
  f.vars = parents;
  f.vars.push_back(i);
  std::sort(f.vars.begin(), f.vars.end());
  const std::size_t self = positions({i}, f.vars)[0];
  // Parents keep their declared order here since it fixes the row encoding.
  std::vector<std::size_t> ppos(parents.size());
  for (std::size_t p = 0; p < parents.size(); ++p) ppos[p] = positions({parents[p]}, f.vars)[0];

  const std::size_t k = parents.size();
  f.values.resize(std::size_t{1} << f.vars.size());
  for (std::size_t a = 0; a < f.values.size(); ++a) {
    std::size_t row = 0;
    for (std::size_t p = 0; p < k; ++p) row |= ((a >> ppos[p]) & 1u) << (k - 1 - p);
    f.values[a] = node.cpt[row][(a >> self) & 1u];
  }
  return f;
}

inline Factor restrict(const Factor& f, std::size_t var, State s) {
  if (!f.mentions(var)) return f;
  Factor out;
  std::size_t bit = 0;
  for (std::size_t j = 0; j < f.vars.size(); ++j) {
    if (f.vars[j] == var) bit = j;
    else out.vars.push_back(f.vars[j]);
  }
  out.values.resize(std::size_t{1} << out.vars.size());
  const std::size_t want = static_cast<std::size_t>(s);
  for (std::size_t a = 0; a < f.values.size(); ++a) {
    if (((a >> bit) & 1u) != want) continue;
    const std::size_t low = a & ((std::size_t{1} << bit) - 1);
    const std::size_t high = a >> (bit + 1);
    out.values[low | (high << bit)] = f.values[a];
  }
  return out;
}

inline Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  if (out.vars.size() > kMaxFactorWidth)
    throw InferenceError("intermediate factor too wide for exact inference");
  const auto pa = positions(a.vars, out.vars);
  const auto pb = positions(b.vars, out.vars);
  out.values.resize(std::size_t{1} << out.vars.size());
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[project(i, pa)] * b.values[project(i, pb)];
  return out;
}

inline Factor sum_out(const Factor& f, std::size_t var) {
  Factor out;
  std::size_t bit = 0;
  for (std::size_t j = 0; j < f.vars.size(); ++j) {
    if (f.vars[j] == var) bit = j;
    else out.vars.push_back(f.vars[j]);
  }
  out.values.assign(std::size_t{1} << out.vars.size(), 0.0);
  for (std::size_t a = 0; a < f.values.size(); ++a) {
    const std::size_t low = a & ((std::size_t{1} << bit) - 1);
    const std::size_t high = a >> (bit + 1);
    out.values[low | (high << bit)] += f.values[a];
  }
  return out;
}

// Number of distinct other variables sharing a factor with `v`.
inline std::size_t degree(const std::vector<Factor>& factors, std::size_t v) {
  std::vector<std::size_t> nbrs;
  for (const auto& f : factors)
    if (f.mentions(v))
      for (std::size_t u : f.vars)
        if (u != v) nbrs.push_back(u);
  std::sort(nbrs.begin(), nbrs.end());
  return std::unique(nbrs.begin(), nbrs.end()) - nbrs.begin();
}

// Eliminates every variable in `hidden` using a greedy min-degree order
// (ties to the lower index) and returns the product of what remains.
inline Factor eliminate(std::vector<Factor> factors, std::vector<std::size_t> hidden) {
  while (!hidden.empty()) {
    auto best = hidden.begin();
    std::size_t best_degree = degree(factors, *best);
    for (auto it = std::next(hidden.begin()); it != hidden.end(); ++it) {
      const std::size_t d = degree(factors, *it);
      if (d < best_degree) {
        best = it;
        best_degree = d;
      }
    }
    const std::size_t v = *best;
    hidden.erase(best);

    Factor product{{}, {1.0}};
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (f.mentions(v)) product = multiply(product, f);
      else rest.push_back(std::move(f));
    }
    rest.push_back(sum_out(product, v));
    factors = std::move(rest);
  }
  Factor result{{}, {1.0}};
  for (const auto& f : factors) result = multiply(result, f);
  return result;
}

}  // namespace detail

// Exact P(node | evidence) for every node by variable elimination.  Throws
// NotFoundError for an evidence key that names no node and InferenceError
// when the evidence has probability zero.
inline Posterior posterior_marginals(const Network& net, const Evidence& evidence) {
  std::vector<std::optional<State>> observed(net.size());
  for (const auto& [id, s] : evidence) observed[net.index_of(id)] = s;

  std::vector<detail::Factor> factors;
  factors.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    detail::Factor f = detail::node_factor(net, i);
    for (std::size_t j = 0; j < net.size(); ++j)
      if (observed[j]) f = detail::restrict(f, j, *observed[j]);
    factors.push_back(std::move(f));
  }

  std::vector<std::size_t> hidden;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (!observed[i]) hidden.push_back(i);

  const double evidence_probability = detail::eliminate(factors, hidden).values[0];
  if (!(evidence_probability > 0.0))
    throw InferenceError("evidence has probability zero under the model");

  Posterior post;
  for (std::size_t i = 0; i < net.size(); ++i) {
    Marginal m;
    if (observed[i]) {
      m.violated = *observed[i] == State::Violated ? 1.0 : 0.0;
      m.not_violated = 1.0 - m.violated;
    } else {
      std::vector<std::size_t> others;
      for (std::size_t v : hidden)
        if (v != i) others.push_back(v);
      const detail::Factor f = detail::eliminate(factors, others);
      const double z = f.values[0] + f.values[1];
      m.not_violated = f.values[0] / z;
      m.violated = f.values[1] / z;
    }
    post.marginals.emplace(net.node(i).id, m);
  }
  return post;
}

inline nlohmann::json to_json(const Network& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : net.nodes()) {
    nlohmann::json cpt = nlohmann::json::array();
    for (const Row& r : n.cpt) cpt.push_back({r[0], r[1]});
    nodes.push_back({{"id", n.id}, {"parents", n.parents}, {"cpt", cpt}});
  }
  return {{"nodes", nodes}};
}

inline Network load_network(const nlohmann::json& doc) {
  using namespace json_util;
  require_object(doc, "network");
  reject_unknown_keys(doc, "network", {"nodes"});
  std::vector<Node> nodes;
  for (const auto& j : get_array(doc, "network", "nodes")) {
    require_object(j, "node");
    reject_unknown_keys(j, "node", {"id", "parents", "cpt"});
    Node n;
    n.id = get_string(j, "node", "id");
    const std::string where = "node " + n.id;
    for (const auto& p : get_array(j, where, "parents")) {
      if (!p.is_string()) throw ParseError(where + ": parents must be strings");
      n.parents.push_back(p.get<std::string>());
    }
    for (const auto& r : get_array(j, where, "cpt")) {
      if (!r.is_array() || r.size() != 2)
        throw ParseError(where + ": CPT rows must be [p_not, p_viol]");
      n.cpt.push_back({get_number(r[0], where), get_number(r[1], where)});
    }
    nodes.push_back(std::move(n));
  }
  return Network(std::move(nodes));
}

inline nlohmann::json to_json(const Evidence& e) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, s] : e) j[id] = to_string(s);
  return j;
}

inline nlohmann::json to_json(const Posterior& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, m] : p.marginals) j[id] = m.violated;
  return j;
}

}  // namespace ssaf::bbn
