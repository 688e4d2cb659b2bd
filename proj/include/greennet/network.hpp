#pragma once

#include "greennet/funspace.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace greennet {

struct VertexId {
  std::string label;
  Index index = 0;
};

struct Edge {
  Index u = 0;
  Index v = 0;
  double c = 0.0;  // conductance, > 0
};

// Raw parsed input, prior to validation.
struct NetworkData {
  struct RawEdge {
    std::string u;
    std::string v;
    double c = 0.0;
  };
  std::vector<std::string> vertices;
  std::vector<RawEdge> edges;
  std::optional<std::map<std::string, double>> weight;  // label -> value; uniform if absent
  double lambda = 0.0;
  bool normalize = false;
};

// Validated connected network with conductances, a weight and an eigenvalue
// parameter. The vertex ordering is fixed at construction; every kernel and
// function produced from the spec aligns to it.
class NetworkSpec {
public:
  NetworkSpec(std::vector<std::string> labels, std::vector<Edge> edges, Weight weight,
              double lambda);

  // Resolves labels, applies defaults (uniform weight, lambda 0) and the
  // normalize flag, then validates.
  static NetworkSpec validated(const NetworkData& data);

  Index size() const { return static_cast<Index>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(const std::string& label) const;
  VertexId vertex(const std::string& label) const;
  const std::vector<Edge>& edges() const { return edges_; }
  const Weight& weight() const { return weight_; }
  double lambda() const { return lambda_; }

  // Dense symmetric conductance function; zero diagonal.
  KernelOnV conductance() const;

private:
  std::vector<std::string> labels_;
  std::map<std::string, Index> index_;
  std::vector<Edge> edges_;
  Weight weight_;
  double lambda_;
};

using Potential = FunctionOnV;

// L(u)(x) = sum_y c(x,y) [u(x) - u(y)]
KernelOnV laplacian_matrix(const NetworkSpec& spec);

// q_omega = -L(omega)/omega
Potential weight_potential(const NetworkSpec& spec);

// L + diag(q_omega + lambda); elliptic with lowest eigenvalue lambda and
// eigenfunction omega.
KernelOnV schrodinger_matrix(const NetworkSpec& spec);

}  // namespace greennet
