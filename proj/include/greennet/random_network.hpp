#pragma once

#include "greennet/network.hpp"
#include "greennet/rng.hpp"
#include "greennet/vertex_addition.hpp"

namespace greennet {

struct RandomNetworkOptions {
  double lambda = 0.0;
  bool random_weight = false;       // uniform 1/sqrt(n) when false
  double extra_edge_prob = -1.0;    // < 0 means 1/n
  double conductance_lo = 0.5;
  double conductance_hi = 2.0;
};

// Random connected network: a uniform random labeled tree (Prufer decode)
// plus Bernoulli extra edges, conductances uniform in [lo, hi]. Labels are
// "v0".."v{n-1}". Fully determined by the generator state.
NetworkSpec random_connected_network(Index n, Rng& rng, const RandomNetworkOptions& opt = {});

// Random attachment with m distinct anchors, conductances uniform in
// [lo, hi], new weight value uniform in [0.5, 2].
VertexAttachment random_attachment(const NetworkSpec& spec, Index m, Rng& rng);

}  // namespace greennet
