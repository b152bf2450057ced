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
// The six selection algorithms, all against the counted oracle interface.
//
//   naive_greedy           full marginal scan per pick; cost sum_i (n - i).
//   lazy_greedy            same picks, stale upper bounds rho(e) in a
//                          max-heap skip most re-evaluations.
//   stochastic_greedy      per pick, best element of a uniform random batch
//                          of size ceil((n/k) ln(1/eps)) drawn without
//                          replacement from the unselected elements.
//   stochastic_greedy_lazy identical picks per seed; rho bounds persist
//                          globally across batches and cut the cost further.
//   threshold_greedy       descending threshold sweep from the best
//                          singleton value down to (eps/n) of it, with lazy
//                          bound skipping.
//   sample_greedy          lazy greedy on a Bernoulli(p) subsample.
//   random_selection       k uniform elements; cost 1 for the single final
//                          evaluation, trace filled by reporting evals.
//
// Every tie anywhere breaks toward the lowest element id, so runs are
// deterministic and the lazy variants select exactly what their eager
// counterparts do.

#ifndef SUBMOD_SOLVERS_HPP_
#define SUBMOD_SOLVERS_HPP_

#include <cstdint>

#include "submod/core.hpp"

namespace submod {

enum class TieBreak { kLowestId };

// Everything a run needs to be reproducible.
struct SolverConfig {
  std::size_t k = 0;        // cardinality budget
  double epsilon = 0.1;     // stochastic / threshold accuracy, in (0, 1)
  double p = 1.0;           // sample-greedy keep probability, in (0, 1]
  std::uint64_t seed = 0;
  TieBreak tie_break = TieBreak::kLowestId;
};

// ceil((n/k) ln(1/epsilon)) clamped to [1, n].
std::size_t sample_size(std::size_t n, std::size_t k, double epsilon);

Solution naive_greedy(const Objective& objective, const SolverConfig& config);
Solution lazy_greedy(const Objective& objective, const SolverConfig& config);
Solution stochastic_greedy(const Objective& objective,
                           const SolverConfig& config);
Solution stochastic_greedy_lazy(const Objective& objective,
                                const SolverConfig& config);
Solution threshold_greedy(const Objective& objective,
                          const SolverConfig& config);
Solution sample_greedy(const Objective& objective, const SolverConfig& config);
Solution random_selection(const Objective& objective,
                          const SolverConfig& config);

}  // namespace submod

#endif  // SUBMOD_SOLVERS_HPP_
