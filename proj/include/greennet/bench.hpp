#pragma once

#include "greennet/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace greennet {

struct BenchRow {
  Index n = 0;
  Index m = 0;
  double t_update_ms = 0.0;
  double t_recompute_ms = 0.0;
  double speedup = 0.0;
  double max_dev = 0.0;
};

// For each (n, m, trial): generate a seeded random connected network
// (lambda 0, uniform weight), compute its Green kernel once (untimed), then
// time the closed-form grown inverse against a from-scratch eigendecomposition
// pseudoinverse of the (n+1) x (n+1) matrix. Network generation depends only
// on (n, m, seed, trial).
std::vector<BenchRow> run_bench(const std::vector<Index>& ns, const std::vector<Index>& ms,
                                int trials, std::uint64_t seed);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace greennet
