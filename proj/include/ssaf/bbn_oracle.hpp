#pragma once

// Reference posteriors by full enumeration of the joint distribution.
// Deliberately shares no code with the variable-elimination path: it reads
// CPT rows straight from the nodes and decodes parent rows itself.

#include <cstdint>
#include <string>
#include <vector>

#include "ssaf/bbn.hpp"
#include "ssaf/error.hpp"

namespace ssaf::bbn {

inline constexpr std::size_t kMaxEnumerationNodes = 24;

inline Posterior brute_force_marginals(const Network& net, const Evidence& evidence) {
  const std::size_t n = net.size();
  if (n > kMaxEnumerationNodes)
    throw InferenceError("network has " + std::to_string(n) +
                         " nodes; enumeration is limited to " +
                         std::to_string(kMaxEnumerationNodes));

  std::uint64_t fixed_mask = 0, fixed_bits = 0;
  for (const auto& [id, s] : evidence) {
    const std::size_t i = net.index_of(id);
    fixed_mask |= std::uint64_t{1} << i;
    if (s == State::Violated) fixed_bits |= std::uint64_t{1} << i;
  }

  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& p : net.node(i).parents) parents[i].push_back(net.index_of(p));

  double total = 0.0;
  std::vector<double> violated_mass(n, 0.0);
  for (std::uint64_t world = 0; world < (std::uint64_t{1} << n); ++world) {
    if ((world & fixed_mask) != fixed_bits) continue;
    double joint = 1.0;
    for (std::size_t i = 0; i < n && joint != 0.0; ++i) {
      std::size_t row = 0;
      for (std::size_t p : parents[i]) row = (row << 1) | ((world >> p) & 1u);
      joint *= net.node(i).cpt[row][(world >> i) & 1u];
    }
    total += joint;
    for (std::size_t i = 0; i < n; ++i)
      if ((world >> i) & 1u) violated_mass[i] += joint;
  }
  if (!(total > 0.0)) throw InferenceError("evidence has probability zero under the model");

  Posterior post;
  for (std::size_t i = 0; i < n; ++i) {
    Marginal m;
    m.violated = violated_mass[i] / total;
    m.not_violated = (total - violated_mass[i]) / total;
    post.marginals.emplace(net.node(i).id, m);
  }
  return post;
}

// Largest node-wise |a - b| on P(violated).  Both must cover the same nodes.
inline double max_abs_difference(const Posterior& a, const Posterior& b) {
  double worst = 0.0;
  for (const auto& [id, m] : a.marginals)
    worst = std::max(worst, std::abs(m.violated - b.violated(id)));
  if (a.marginals.size() != b.marginals.size())
    throw ValidationError("posteriors cover different node sets");
  return worst;
}

}  // namespace ssaf::bbn
