// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
// Independent verification oracles: exhaustive optimization, straight-line
// objective recomputation, sampled monotonicity/submodularity checking, and
// a Monte Carlo probe of the batch hit-probability bound. Used by tests,
// the acceptance suite, and the CLI `verify` subcommand — never by solvers.
//
// The recompute routines deliberately avoid the incremental caches of the
// shipped objectives: log-det goes through a dense eigendecomposition,
// facility location through the full double loop, coverage through an
// explicit set union.

#ifndef SUBMOD_REFCHECK_HPP_
#define SUBMOD_REFCHECK_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "submod/core.hpp"
#include "submod/dataio.hpp"
#include "submod/objectives.hpp"

namespace submod {

struct BruteForceResult {
  std::vector<ElementId> opt_set;  // lexicographically smallest among ties
  double opt_value = 0.0;
  std::uint64_t enumerated = 0;  // subsets examined: C(n, k)
};

// Exact optimum over all subsets of size exactly k (which suffices for
// monotone objectives; see max_over_at_most_k for the <= k cross-check).
// Refuses instances with C(n, k) > 10^7.
BruteForceResult brute_force_opt(const Objective& objective, std::size_t k);

// Exact maximum over all subsets of size <= k; exponential, tiny n only.
double max_over_at_most_k(const Objective& objective, std::size_t k);

// Straight-line objective recomputations from the defining formulas.
double logdet_value(const KernelMatrix& kernel, double sigma,
                    std::span<const ElementId> set);
double facility_value(const DistanceSource& distances,
                      std::span<const ElementId> set);
double coverage_value(const WeightedCoverage& objective,
                      std::span<const ElementId> set);
double penalty_value(const ScenarioTable& table,
                     std::span<const ElementId> set);

// Smallest eigenvalue of a kernel; the PSD gate for small instances.
double kernel_min_eigenvalue(const KernelMatrix& kernel);

struct PropertyCheckResult {
  std::size_t trials = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t submodularity_violations = 0;
  std::size_t negativity_violations = 0;
  double worst_violation = 0.0;

  bool ok() const {
    return monotonicity_violations == 0 && submodularity_violations == 0 &&
           negativity_violations == 0;
  }
};

// Samples (A, B, e) with A ⊆ B, e ∉ B and checks f(A) <= f(B) + tol,
// marginal(e|A) >= marginal(e|B) - tol, and f >= -tol. Marginals go through
// the incremental path, so this also exercises the caches.
PropertyCheckResult check_monotone_submodular(const Objective& objective,
                                              std::size_t trials, double tol,
                                              std::uint64_t seed);

// Empirical frequency of a size-sample_size(n,k,epsilon) uniform draw
// (without replacement) hitting at least one of m marked elements.
double hit_probability_probe(std::size_t n, std::size_t k, double epsilon,
                             std::size_t m, std::size_t trials,
                             std::uint64_t seed);

}  // namespace submod

#endif  // SUBMOD_REFCHECK_HPP_
