#include "greennet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace greennet {

NetworkSpec::NetworkSpec(std::vector<std::string> labels, std::vector<Edge> edges,
                         Weight weight, double lambda)
    : labels_(std::move(labels)), edges_(std::move(edges)), weight_(std::move(weight)),
      lambda_(lambda) {
  const Index n = static_cast<Index>(labels_.size());
  if (n == 0) {
    throw ValidationError("network: empty vertex set");
  }
  for (Index i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError("network: duplicate vertex label '" + labels_[i] + "'");
    }
  }
  if (weight_.size() != n) {
    throw DimensionError("network: weight length differs from vertex count");
  }
  if (lambda_ < 0.0 || !std::isfinite(lambda_)) {
    throw ValidationError("network: lambda must be a finite nonnegative real");
  }

  std::set<std::pair<Index, Index>> seen;
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw ValidationError("network: edge endpoint out of range");
    }
    if (e.u == e.v) {
      throw ValidationError("network: loop edge at vertex '" + labels_[e.u] + "'");
    }
    if (!(e.c > 0.0) || !std::isfinite(e.c)) {
      throw ValidationError("network: nonpositive conductance on edge '" + labels_[e.u] +
                            "'-'" + labels_[e.v] + "'");
    }
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw ValidationError("network: duplicate edge '" + labels_[e.u] + "'-'" + labels_[e.v] +
                            "'");
    }
  }

  // connectivity by traversal
  std::vector<std::vector<Index>> adj(n);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> reached(n, false);
  std::vector<Index> stack{0};
  reached[0] = true;
  Index count = 1;
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    for (Index y : adj[x]) {
      if (!reached[y]) {
        reached[y] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  if (count != n) {
    throw ValidationError("network: graph is disconnected");
  }
}

NetworkSpec NetworkSpec::validated(const NetworkData& data) {
  const Index n = static_cast<Index>(data.vertices.size());
  if (n == 0) {
    throw ValidationError("network: empty vertex set");
  }
  std::map<std::string, Index> index;
  for (Index i = 0; i < n; ++i) {
    if (!index.emplace(data.vertices[i], i).second) {
      throw ValidationError("network: duplicate vertex label '" + data.vertices[i] + "'");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(data.edges.size());
  for (const auto& e : data.edges) {
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end()) {
      throw ValidationError("network: edge references unknown vertex '" +
                            (iu == index.end() ? e.u : e.v) + "'");
    }
    edges.push_back({iu->second, iv->second, e.c});
  }

  FunctionOnV w(n);
  if (data.weight.has_value()) {
    for (const auto& [label, value] : *data.weight) {
      if (index.find(label) == index.end()) {
        throw ValidationError("network: weight references unknown vertex '" + label + "'");
      }
    }
    for (Index i = 0; i < n; ++i) {
      auto it = data.weight->find(data.vertices[i]);
      if (it == data.weight->end()) {
        throw ValidationError("network: weight missing for vertex '" + data.vertices[i] + "'");
      }
      w(i) = it->second;
    }
  } else {
    w.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  }

  Weight weight = data.normalize ? Weight::normalized(w) : Weight(std::move(w));
  return NetworkSpec(data.vertices, std::move(edges), std::move(weight), data.lambda);
}

bool NetworkSpec::has_label(const std::string& label) const {
  return index_.find(label) != index_.end();
}

VertexId NetworkSpec::vertex(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw LookupError("network: unknown vertex '" + label + "'");
  }
  return {label, it->second};
}

KernelOnV NetworkSpec::conductance() const {
  KernelOnV c = KernelOnV::Zero(size(), size());
  for (const Edge& e : edges_) {
    c(e.u, e.v) = e.c;
    c(e.v, e.u) = e.c;
  }
  return c;
}

KernelOnV laplacian_matrix(const NetworkSpec& spec) {
  KernelOnV L = KernelOnV::Zero(spec.size(), spec.size());
  for (const Edge& e : spec.edges()) {
    L(e.u, e.u) += e.c;
    L(e.v, e.v) += e.c;
    L(e.u, e.v) -= e.c;
    L(e.v, e.u) -= e.c;
  }
  return L;
}

Potential weight_potential(const NetworkSpec& spec) {
  const KernelOnV L = laplacian_matrix(spec);
  const FunctionOnV& w = spec.weight().values();
  return (-(L * w).array() / w.array()).matrix();
}

KernelOnV schrodinger_matrix(const NetworkSpec& spec) {
  KernelOnV Lq = laplacian_matrix(spec);
  const Potential q = weight_potential(spec);
  Lq.diagonal() += q;
  Lq.diagonal().array() += spec.lambda();
  return Lq;
}

}  // namespace greennet
