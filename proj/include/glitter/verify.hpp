#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace glitter {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Influence/absorbing-probability checks: convergence of the linear
// propagation powers to the exact absorbing probabilities, monotone bounded
// truncation with geometric tail decay, adjacency/chain invariant sweeps, and
// a report-only diagnostic relating geometric-mean influence to summed
// shortest-path distance.
std::vector<CheckResult> verify_theorems(std::uint64_t seed);

// Finite-difference validation of every parameter gradient for each loss,
// plus the closed-form loss values.
std::vector<CheckResult> verify_gradients(std::uint64_t seed);

// Brute-force equivalence of local and common sampling on random graphs.
std::vector<CheckResult> verify_sampling(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);
std::string format_results(const std::vector<CheckResult>& results);

}  // namespace glitter
