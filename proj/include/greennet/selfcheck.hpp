#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace greennet {

struct SelfCheckOptions {
  std::uint64_t base_seed = 1000;
  int cases = 20;
  bool single_seed = false;  // run the fixtures plus exactly one seeded case
  double tol_scale = 1.0;    // negative forces every check to fail (test hook)
};

struct SelfCheckFailure {
  std::string property;
  std::uint64_t seed = 0;  // 0 for deterministic fixtures
  double value = 0.0;
  double bound = 0.0;
};

// Runs the module invariants on built-in fixtures plus seeded random cases.
// Every failure names the property and the seed that reproduces it.
std::vector<SelfCheckFailure> run_selfcheck(const SelfCheckOptions& opt, std::ostream& log);

}  // namespace greennet
