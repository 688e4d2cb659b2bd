#include "greennet/random_network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace greennet {

namespace {

// Decodes a uniformly random Prufer sequence into a labeled tree.
std::vector<std::pair<Index, Index>> random_tree(Index n, Rng& rng) {
  std::vector<std::pair<Index, Index>> edges;
  if (n <= 1) {
    return edges;
  }
  if (n == 2) {
    edges.push_back({0, 1});
    return edges;
  }
  std::vector<Index> prufer(n - 2);
  for (Index& p : prufer) {
    p = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  }
  std::vector<Index> degree(n, 1);
  for (Index p : prufer) {
    ++degree[p];
  }
  std::set<Index> leaves;
  for (Index v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      leaves.insert(v);
    }
  }
  for (Index p : prufer) {
    const Index leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.push_back({leaf, p});
    if (--degree[p] == 1) {
      leaves.insert(p);
    }
  }
  const Index u = *leaves.begin();
  const Index v = *std::next(leaves.begin());
  edges.push_back({u, v});
  return edges;
}

}  // namespace

NetworkSpec random_connected_network(Index n, Rng& rng, const RandomNetworkOptions& opt) {
  if (n < 1) {
    throw ValidationError("random network: need at least one vertex");
  }
  const double p_extra = opt.extra_edge_prob < 0.0 ? 1.0 / static_cast<double>(n)
                                                   : opt.extra_edge_prob;

  std::set<std::pair<Index, Index>> present;
  std::vector<Edge> edges;
  for (auto [u, v] : random_tree(n, rng)) {
    auto key = std::minmax(u, v);
    present.insert(key);
    edges.push_back({u, v, rng.uniform(opt.conductance_lo, opt.conductance_hi)});
  }
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (present.count({u, v}) == 0 && rng.uniform() < p_extra) {
        edges.push_back({u, v, rng.uniform(opt.conductance_lo, opt.conductance_hi)});
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(n);
  for (Index i = 0; i < n; ++i) {
    labels.push_back("v" + std::to_string(i));
  }

  FunctionOnV w(n);
  if (opt.random_weight) {
    for (Index i = 0; i < n; ++i) {
      w(i) = rng.uniform(0.3, 1.7);
    }
  } else {
    w.setConstant(1.0);
  }
  return NetworkSpec(std::move(labels), std::move(edges), Weight::normalized(std::move(w)),
                     opt.lambda);
}

VertexAttachment random_attachment(const NetworkSpec& spec, Index m, Rng& rng) {
  const Index n = spec.size();
  if (m < 1 || m > n) {
    throw ValidationError("random attachment: need 1 <= m <= n");
  }
  std::vector<Index> pool(n);
  for (Index i = 0; i < n; ++i) {
    pool[i] = i;
  }
  // partial Fisher-Yates for m distinct anchors
  VertexAttachment att;
  att.new_label = "w";
  att.new_weight_value = rng.uniform(0.5, 2.0);
  for (Index i = 0; i < m; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
    att.anchors.push_back({pool[i], rng.uniform(0.5, 2.0)});
  }
  return att;
}

}  // namespace greennet
