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

#include "submod/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "submod/rng.hpp"

namespace submod {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_budget(std::size_t k, std::size_t n) {
  if (k > n) {
    throw InvalidInput("budget k=" + std::to_string(k) +
                       " exceeds ground set size n=" + std::to_string(n));
  }
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in (0, 1)");
  }
}

std::vector<ElementId> all_elements(std::size_t n) {
  std::vector<ElementId> ids(n);
  std::iota(ids.begin(), ids.end(), ElementId{0});
  return ids;
}

void record_pick(Solution& out, const SelectionContext& ctx, ElementId e,
                 double& utility, double gain) {
  utility += gain;
  out.selected.push_back(e);
  out.utility_trace.push_back(utility);
  out.cost_trace.push_back(ctx.counter().count());
}

// The final cost entry absorbs queries issued after the last pick
// (threshold-greedy keeps scanning), keeping total_cost == cost_trace.back().
void finalize(Solution& out, std::uint64_t total_cost) {
  out.total_cost = total_cost;
  if (!out.cost_trace.empty()) out.cost_trace.back() = total_cost;
  if (!out.utility_trace.empty()) out.final_utility = out.utility_trace.back();
}

// Upper bound rho on an element's marginal gain; max-heap with ties going
// to the lowest id so lazy evaluation reproduces the eager argmax exactly.
struct Bound {
  double rho;
  ElementId id;
};

struct BoundLess {
  bool operator()(const Bound& a, const Bound& b) const {
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.id > b.id;
  }
};

using BoundHeap = std::priority_queue<Bound, std::vector<Bound>, BoundLess>;

// Lazy greedy over an id-sorted candidate list. rho(e) starts at infinity
// (stamp -1), so the first round refreshes on demand instead of forcing a
// full pass. Refreshing pushes a duplicate entry; outdated duplicates are
// recognized by value mismatch and dropped without an oracle call.
Solution lazy_greedy_core(const Objective& objective,
                          std::span<const ElementId> candidates,
                          std::size_t budget) {
  Solution out;
  SelectionContext ctx = objective.make_context();
  std::vector<double> rho(objective.size(), kInf);
  std::vector<std::int64_t> stamp(objective.size(), -1);

  BoundHeap heap;
  for (ElementId e : candidates) heap.push({kInf, e});

  double utility = 0.0;
  for (std::size_t round = 0; round < budget; ++round) {
    while (!heap.empty()) {
      const Bound top = heap.top();
      heap.pop();
      if (ctx.contains(top.id) || top.rho != rho[top.id]) continue;
      if (stamp[top.id] == static_cast<std::int64_t>(round)) {
        objective.commit(top.id, ctx);
        record_pick(out, ctx, top.id, utility, top.rho);
        break;
      }
      rho[top.id] = objective.marginal(top.id, ctx);
      stamp[top.id] = static_cast<std::int64_t>(round);
      heap.push({rho[top.id], top.id});
    }
  }
  finalize(out, ctx.counter().count());
  return out;
}

// Uniform batch of min(s, |avail|) ids, drawn without replacement from a
// dedicated (seed, round) substream and returned sorted. Because the stream
// depends only on the round and the remaining elements, the plain and lazy
// stochastic variants draw identical batches.
std::vector<ElementId> sample_batch(const std::vector<ElementId>& avail,
                                    std::size_t s, std::uint64_t seed,
                                    std::size_t round) {
  Rng rng = Rng::substream(seed, RngStream::kSampleBatch, round);
  std::vector<ElementId> batch = avail;
  const std::size_t take = std::min(s, batch.size());
  partial_shuffle(batch, take, rng);
  batch.resize(take);
  std::sort(batch.begin(), batch.end());
  return batch;
}

}  // namespace

std::size_t sample_size(std::size_t n, std::size_t k, double epsilon) {
  if (n < 1 || k < 1 || k > n) {
    throw InvalidInput("sample_size requires 1 <= k <= n with n >= 1");
  }
  require_epsilon(epsilon);
  const double raw = (static_cast<double>(n) / static_cast<double>(k)) *
                     std::log(1.0 / epsilon);
  const double clamped = std::min(std::ceil(raw), static_cast<double>(n));
  return std::max<std::size_t>(1, static_cast<std::size_t>(clamped));
}

Solution naive_greedy(const Objective& objective, const SolverConfig& config) {
  require_budget(config.k, objective.size());
  Solution out;
  SelectionContext ctx = objective.make_context();
  std::vector<ElementId> avail = all_elements(objective.size());

  double utility = 0.0;
  for (std::size_t round = 0; round < config.k; ++round) {
    double best_gain = -kInf;
    ElementId best = 0;
    for (ElementId e : avail) {  // ascending scan: ties keep the lowest id
      const double gain = objective.marginal(e, ctx);
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    objective.commit(best, ctx);
    std::erase(avail, best);
    record_pick(out, ctx, best, utility, best_gain);
  }
  finalize(out, ctx.counter().count());
  return out;
}

Solution lazy_greedy(const Objective& objective, const SolverConfig& config) {
  require_budget(config.k, objective.size());
  return lazy_greedy_core(objective, all_elements(objective.size()), config.k);
}

Solution stochastic_greedy(const Objective& objective,
                           const SolverConfig& config) {
  require_budget(config.k, objective.size());
  require_epsilon(config.epsilon);
  Solution out;
  SelectionContext ctx = objective.make_context();
  if (config.k == 0) return out;

  const std::size_t s =
      sample_size(objective.size(), config.k, config.epsilon);
  std::vector<ElementId> avail = all_elements(objective.size());

  double utility = 0.0;
  for (std::size_t round = 0; round < config.k; ++round) {
    const std::vector<ElementId> batch =
        sample_batch(avail, s, config.seed, round);
    double best_gain = -kInf;
    ElementId best = 0;
    for (ElementId e : batch) {
      const double gain = objective.marginal(e, ctx);
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    objective.commit(best, ctx);
    std::erase(avail, best);
    record_pick(out, ctx, best, utility, best_gain);
  }
  finalize(out, ctx.counter().count());
  return out;
}

Solution stochastic_greedy_lazy(const Objective& objective,
                                const SolverConfig& config) {
  require_budget(config.k, objective.size());
  require_epsilon(config.epsilon);
  Solution out;
  SelectionContext ctx = objective.make_context();
  if (config.k == 0) return out;

  const std::size_t s =
      sample_size(objective.size(), config.k, config.epsilon);
  std::vector<ElementId> avail = all_elements(objective.size());
  // rho bounds persist across rounds: batches overlap, and a bound computed
  // against a smaller selection can only overestimate, which is exactly what
  // the heap needs.
  std::vector<double> rho(objective.size(), kInf);
  std::vector<std::int64_t> stamp(objective.size(), -1);

  double utility = 0.0;
  for (std::size_t round = 0; round < config.k; ++round) {
    const std::vector<ElementId> batch =
        sample_batch(avail, s, config.seed, round);
    BoundHeap heap;
    for (ElementId e : batch) heap.push({rho[e], e});

    while (!heap.empty()) {
      const Bound top = heap.top();
      heap.pop();
      if (top.rho != rho[top.id]) continue;  // outdated duplicate
      if (stamp[top.id] == static_cast<std::int64_t>(round)) {
        objective.commit(top.id, ctx);
        std::erase(avail, top.id);
        record_pick(out, ctx, top.id, utility, top.rho);
        break;
      }
      rho[top.id] = objective.marginal(top.id, ctx);
      stamp[top.id] = static_cast<std::int64_t>(round);
      heap.push({rho[top.id], top.id});
    }
  }
  finalize(out, ctx.counter().count());
  return out;
}

Solution threshold_greedy(const Objective& objective,
                          const SolverConfig& config) {
  require_budget(config.k, objective.size());
  require_epsilon(config.epsilon);
  Solution out;
  SelectionContext ctx = objective.make_context();
  const std::size_t n = objective.size();
  if (config.k == 0 || n == 0) return out;

  // Full singleton pass: seeds the bounds and anchors the threshold sweep.
  std::vector<double> rho(n);
  std::vector<std::size_t> stamp(n, 0);  // |A| at last refresh
  double top_singleton = 0.0;
  for (ElementId e = 0; e < n; ++e) {
    rho[e] = objective.marginal(e, ctx);
    top_singleton = std::max(top_singleton, rho[e]);
  }

  std::vector<ElementId> avail = all_elements(n);
  double utility = 0.0;

  if (top_singleton <= 0.0) {
    // f is constant: every marginal is zero forever, so the zero threshold
    // admits everything in id order.
    for (std::size_t i = 0; i < config.k; ++i) {
      const ElementId e = avail[i];
      objective.commit(e, ctx);
      record_pick(out, ctx, e, utility, 0.0);
    }
    finalize(out, ctx.counter().count());
    return out;
  }

  const double floor = (config.epsilon / static_cast<double>(n)) * top_singleton;
  for (double w = top_singleton; w >= floor && out.selected.size() < config.k;
       w *= 1.0 - config.epsilon) {
    std::size_t idx = 0;
    while (idx < avail.size() && out.selected.size() < config.k) {
      const ElementId e = avail[idx];
      if (rho[e] < w) {  // stale bound already below the threshold: skip free
        ++idx;
        continue;
      }
      if (stamp[e] != ctx.size()) {
        rho[e] = objective.marginal(e, ctx);
        stamp[e] = ctx.size();
      }
      if (rho[e] >= w) {
        objective.commit(e, ctx);
        record_pick(out, ctx, e, utility, rho[e]);
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(idx));
      } else {
        ++idx;
      }
    }
  }
  finalize(out, ctx.counter().count());
  return out;
}

Solution sample_greedy(const Objective& objective, const SolverConfig& config) {
  require_budget(config.k, objective.size());
  if (!(config.p > 0.0) || !(config.p <= 1.0)) {
    throw InvalidInput("keep probability p must lie in (0, 1]");
  }
  Rng rng = Rng::substream(config.seed, RngStream::kKeepMask);
  std::vector<ElementId> kept;
  for (ElementId e = 0; e < objective.size(); ++e) {
    if (rng.bernoulli(config.p)) kept.push_back(e);
  }
  if (config.k > 0 && kept.empty()) {
    Solution out;
    out.warning = "empty subsample";
    return out;
  }
  Solution out =
      lazy_greedy_core(objective, kept, std::min(config.k, kept.size()));
  return out;
}

Solution random_selection(const Objective& objective,
                          const SolverConfig& config) {
  require_budget(config.k, objective.size());
  Solution out;
  if (config.k == 0) return out;

  Rng rng = Rng::substream(config.seed, RngStream::kPermutation);
  std::vector<ElementId> pool = all_elements(objective.size());
  partial_shuffle(pool, config.k, rng);
  out.selected.assign(pool.begin(),
                      pool.begin() + static_cast<std::ptrdiff_t>(config.k));

  // The algorithm itself never queries the oracle; the single evaluation of
  // the final set is its whole cost. The earlier prefixes exist only for the
  // utility trace and are reported separately.
  OracleCounter scratch;
  for (std::size_t i = 1; i <= config.k; ++i) {
    const double value =
        objective.eval({out.selected.data(), i}, scratch);
    out.utility_trace.push_back(value);
    out.cost_trace.push_back(i < config.k ? 0 : 1);
  }
  out.total_cost = 1;
  out.reporting_evals = config.k - 1;
  out.final_utility = out.utility_trace.back();
  return out;
}

}  // namespace submod
