#include "greennet/bench.hpp"

#include "greennet/green.hpp"
#include "greennet/io.hpp"
#include "greennet/random_network.hpp"
#include "greennet/vertex_addition.hpp"

#include <chrono>
#include <sstream>

namespace greennet {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<Index>& ns, const std::vector<Index>& ms,
                                int trials, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (Index n : ns) {
    if (n < 2) {
      throw ValidationError("bench: sizes must be >= 2");
    }
    for (Index m : ms) {
      if (m < 1 || m > n) {
        throw ValidationError("bench: need 1 <= m <= n");
      }
      for (int trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed({seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                          static_cast<std::uint64_t>(trial)}));
        const NetworkSpec spec = random_connected_network(n, rng);
        const VertexAttachment att = random_attachment(spec, m, rng);
        const GreenOperator G = green_for(spec);  // precomputed, untimed

        auto t0 = std::chrono::steady_clock::now();
        const Eigen::MatrixXd updated = added_vertex_pinv(G, spec, att);
        const double t_update = ms_since(t0);

        auto t1 = std::chrono::steady_clock::now();
        const NetworkSpec grown = grown_network(spec, att);
        const Eigen::MatrixXd recomputed = pinv_oracle(schrodinger_matrix(grown));
        const double t_recompute = ms_since(t1);

        rows.push_back({n, m, t_update, t_recompute,
                        t_update > 0.0 ? t_recompute / t_update : 0.0,
                        max_abs(updated - recomputed)});
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n,m,t_update_ms,t_recompute_ms,speedup,max_dev\n";
  for (const BenchRow& r : rows) {
    out << r.n << ',' << r.m << ',' << format_double(r.t_update_ms) << ','
        << format_double(r.t_recompute_ms) << ',' << format_double(r.speedup) << ','
        << format_double(r.max_dev) << '\n';
  }
  return out.str();
}

}  // namespace greennet
