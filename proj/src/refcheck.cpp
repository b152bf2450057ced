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

#include "submod/refcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "submod/rng.hpp"
#include "submod/solvers.hpp"

namespace submod {
namespace {

constexpr std::uint64_t kEnumerationGuard = 10'000'000;

// C(n, k), saturating at the guard so callers see a clean refusal.
std::uint64_t binomial_capped(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const double projected = static_cast<double>(result) *
                             static_cast<double>(n - k + i) /
                             static_cast<double>(i);
    if (projected > 2.0 * static_cast<double>(kEnumerationGuard)) {
      return 2 * kEnumerationGuard;
    }
    result = result * (n - k + i) / i;
  }
  return result;
}

// Lexicographic successor of a k-combination of [0, n); false when done.
bool next_combination(std::vector<ElementId>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i-- > 0) {
    if (combo[i] < n - (k - i)) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

BruteForceResult brute_force_opt(const Objective& objective, std::size_t k) {
  const std::size_t n = objective.size();
  if (k > n) throw InvalidInput("brute force requires k <= n");
  const std::uint64_t count = binomial_capped(n, k);
  if (count > kEnumerationGuard) {
    throw InvalidInput("brute force refused: C(" + std::to_string(n) + ", " +
                       std::to_string(k) + ") exceeds the 10^7 guard");
  }

  BruteForceResult result;
  OracleCounter scratch;
  std::vector<ElementId> combo(k);
  std::iota(combo.begin(), combo.end(), ElementId{0});
  result.opt_set = combo;
  result.opt_value = objective.eval(combo, scratch);
  result.enumerated = 1;
  while (next_combination(combo, n)) {
    const double value = objective.eval(combo, scratch);
    ++result.enumerated;
    if (value > result.opt_value) {  // strict: ties keep the earlier combo
      result.opt_value = value;
      result.opt_set = combo;
    }
  }
  return result;
}

double max_over_at_most_k(const Objective& objective, std::size_t k) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t size = 0; size <= k; ++size) {
    best = std::max(best, brute_force_opt(objective, size).opt_value);
  }
  return best;
}

double logdet_value(const KernelMatrix& kernel, double sigma,
                    std::span<const ElementId> set) {
  const auto m = static_cast<Eigen::Index>(set.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXd noisy(m, m);
  const double inv_sigma_sq = 1.0 / (sigma * sigma);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      noisy(i, j) = inv_sigma_sq * kernel.entry(set[static_cast<std::size_t>(i)],
                                                set[static_cast<std::size_t>(j)]);
      if (i == j) noisy(i, j) += 1.0;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(
      noisy, Eigen::EigenvaluesOnly);
  double half_logdet = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    half_logdet += 0.5 * std::log(eigen.eigenvalues()[i]);
  }
  return half_logdet;
}

double facility_value(const DistanceSource& distances,
                      std::span<const ElementId> set) {
  const std::size_t n = distances.size();
  if (n == 0) return 0.0;
  double with_aux_only = 0.0;
  double with_set = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double nearest = distances.auxiliary_distance(v);
    with_aux_only += distances.auxiliary_distance(v);
    for (ElementId e : set) nearest = std::min(nearest, distances.distance(v, e));
    with_set += nearest;
  }
  return (with_aux_only - with_set) / static_cast<double>(n);
}

double coverage_value(const WeightedCoverage& objective,
                      std::span<const ElementId> set) {
  std::vector<std::uint32_t> items;
  for (ElementId e : set) {
    const auto& cover = objective.covers()[e];
    items.insert(items.end(), cover.begin(), cover.end());
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  double total = 0.0;
  for (std::uint32_t item : items) total += objective.weights()[item];
  return total;
}

double penalty_value(const ScenarioTable& table,
                     std::span<const ElementId> set) {
  double reduction = 0.0;
  for (std::size_t i = 0; i < table.num_scenarios; ++i) {
    double earliest = std::numeric_limits<double>::infinity();
    for (ElementId e : set) earliest = std::min(earliest, table.time(e, i));
    reduction += table.probabilities[i] * (penalty_at_infinity(table.penalty) -
                                           penalty_of(table.penalty, earliest));
  }
  return reduction;
}

double kernel_min_eigenvalue(const KernelMatrix& kernel) {
  const auto n = static_cast<Eigen::Index>(kernel.size());
  Eigen::MatrixXd mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      mat(i, j) = kernel.entry(static_cast<std::size_t>(i),
                               static_cast<std::size_t>(j));
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(
      mat, Eigen::EigenvaluesOnly);
  return eigen.eigenvalues().minCoeff();
}

PropertyCheckResult check_monotone_submodular(const Objective& objective,
                                              std::size_t trials, double tol,
                                              std::uint64_t seed) {
  const std::size_t n = objective.size();
  PropertyCheckResult result;
  if (n < 2) return result;
  Rng rng = Rng::substream(seed, RngStream::kProbe);

  std::vector<ElementId> pool(n);
  OracleCounter scratch;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(pool.begin(), pool.end(), ElementId{0});
    // B: random subset of size in [1, n-1]; A: random subset of B; e ∉ B.
    const std::size_t b_size = 1 + static_cast<std::size_t>(rng.below(n - 1));
    partial_shuffle(pool, b_size + 1, rng);
    std::vector<ElementId> b_set(pool.begin(),
                                 pool.begin() + static_cast<std::ptrdiff_t>(b_size));
    const ElementId extra = pool[b_size];
    const std::size_t a_size = static_cast<std::size_t>(rng.below(b_size + 1));
    std::vector<ElementId> a_set(b_set.begin(),
                                 b_set.begin() + static_cast<std::ptrdiff_t>(a_size));
    std::sort(a_set.begin(), a_set.end());
    std::sort(b_set.begin(), b_set.end());

    const double f_a = objective.eval(a_set, scratch);
    const double f_b = objective.eval(b_set, scratch);

    SelectionContext ctx_a = objective.make_context();
    for (ElementId e : a_set) objective.commit(e, ctx_a);
    SelectionContext ctx_b = objective.make_context();
    for (ElementId e : b_set) objective.commit(e, ctx_b);
    const double gain_a = objective.marginal(extra, ctx_a);
    const double gain_b = objective.marginal(extra, ctx_b);

    ++result.trials;
    if (f_a < -tol || f_b < -tol) {
      ++result.negativity_violations;
      result.worst_violation =
          std::max(result.worst_violation, -std::min(f_a, f_b));
    }
    if (f_a > f_b + tol) {
      ++result.monotonicity_violations;
      result.worst_violation = std::max(result.worst_violation, f_a - f_b);
    }
    if (gain_a < gain_b - tol) {
      ++result.submodularity_violations;
      result.worst_violation =
          std::max(result.worst_violation, gain_b - gain_a);
    }
  }
  return result;
}

double hit_probability_probe(std::size_t n, std::size_t k, double epsilon,
                             std::size_t m, std::size_t trials,
                             std::uint64_t seed) {
  if (m > k || k > n || n == 0 || k == 0) {
    throw InvalidInput("hit probe requires m <= k <= n with n, k >= 1");
  }
  if (trials < 10'000) {
    throw InvalidInput("hit probe needs at least 10^4 trials");
  }
  const std::size_t s = sample_size(n, k, epsilon);
  std::vector<ElementId> pool(n);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(pool.begin(), pool.end(), ElementId{0});
    Rng rng = Rng::substream(seed, RngStream::kProbe, t);
    partial_shuffle(pool, s, rng);
    // Marked elements are ids [0, m); uniformity makes that w.l.o.g.
    for (std::size_t i = 0; i < s; ++i) {
      if (pool[i] < m) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace submod
