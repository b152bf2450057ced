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
// Core types: ground set, counted objective oracle, selection context, and
// the solution/trace record shared by all solvers.
//
// Cost accounting: one counter increment per eval() or marginal() query, no
// matter how the objective computes it internally. commit() is cache
// maintenance after a pick and is free. Algorithms are compared by these
// counts, which is platform- and implementation-independent.

#ifndef SUBMOD_CORE_HPP_
#define SUBMOD_CORE_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace submod {

// Element of the ground set; dense index in [0, n).
using ElementId = std::uint32_t;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroundSet {
 public:
  explicit GroundSet(std::size_t size) : size_(size) {}
  GroundSet(std::size_t size, std::vector<std::string> labels)
      : size_(size), labels_(std::move(labels)) {
    if (labels_ && labels_->size() != size_) {
      throw InvalidInput("ground set label count does not match size");
    }
  }

  std::size_t size() const { return size_; }
  const std::optional<std::vector<std::string>>& labels() const {
    return labels_;
  }

 private:
  std::size_t size_;
  std::optional<std::vector<std::string>> labels_;
};

// Monotone non-decreasing count of objective queries. Atomic so that
// concurrent read-only marginal scoring sums to the same total as a
// sequential scan.
class OracleCounter {
 public:
  OracleCounter() = default;
  OracleCounter(const OracleCounter&) = delete;
  OracleCounter& operator=(const OracleCounter&) = delete;

  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }
  void add(std::uint64_t n = 1) { count_.fetch_add(n, std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

// Objective-specific incremental cache (min-distance vectors, Cholesky
// factors, coverage masks). Opaque to everything but the owning objective.
class ObjectiveState {
 public:
  virtual ~ObjectiveState() = default;
};

// The growing selection A plus the objective's incremental cache and the
// oracle counter for the run. Created by Objective::make_context(). Frozen
// contexts are safe for concurrent marginal queries; commit requires
// exclusive access.
class SelectionContext {
 public:
  SelectionContext(std::size_t ground_size,
                   std::unique_ptr<ObjectiveState> state)
      : member_(ground_size, 0), state_(std::move(state)) {}

  SelectionContext(const SelectionContext&) = delete;
  SelectionContext& operator=(const SelectionContext&) = delete;

  const std::vector<ElementId>& selected() const { return selected_; }
  std::size_t size() const { return selected_.size(); }
  bool contains(ElementId e) const {
    return e < member_.size() && member_[e] != 0;
  }
  OracleCounter& counter() const { return counter_; }
  ObjectiveState& state() const { return *state_; }

 private:
  friend class Objective;
  void record_commit(ElementId e) {
    member_[e] = 1;
    selected_.push_back(e);
  }

  std::vector<ElementId> selected_;
  std::vector<std::uint8_t> member_;
  mutable OracleCounter counter_;
  std::unique_ptr<ObjectiveState> state_;
};

// Counted oracle for a non-negative monotone submodular set function.
//
// eval(A)          f(A), counts 1.
// marginal(e, ctx) f(A ∪ {e}) − f(A) against the committed set, counts 1
//                  even when the objective computes it incrementally.
// commit(e, ctx)   adds e and updates the cache; free.
//
// Objectives are immutable once constructed and may be shared across
// threads; all per-run state lives in the SelectionContext.
class Objective {
 public:
  virtual ~Objective() = default;

  const GroundSet& ground() const { return ground_; }
  std::size_t size() const { return ground_.size(); }

  SelectionContext make_context() const {
    return SelectionContext(ground_.size(), make_state());
  }
  std::unique_ptr<SelectionContext> make_context_ptr() const {
    return std::make_unique<SelectionContext>(ground_.size(), make_state());
  }

  double eval(std::span<const ElementId> set, OracleCounter& counter) const;
  double marginal(ElementId e, const SelectionContext& ctx) const;
  void commit(ElementId e, SelectionContext& ctx) const;

 protected:
  explicit Objective(GroundSet ground) : ground_(std::move(ground)) {}

  // Fresh set evaluation; no incremental cache involved.
  virtual double eval_set(std::span<const ElementId> set) const = 0;
  // Incremental gain of e against ctx's committed set and cache.
  virtual double marginal_gain(ElementId e, const SelectionContext& ctx) const = 0;
  // Updates ctx's cache for the new member e (e already validated).
  virtual void apply_commit(ElementId e, SelectionContext& ctx) const = 0;
  virtual std::unique_ptr<ObjectiveState> make_state() const = 0;

 private:
  void check_element(ElementId e) const;
  GroundSet ground_;
};

// One solver run: selected elements in pick order plus utility and oracle
// cost traces.
//
//   utility_trace[i]  f of the first i+1 picks (cumulative gains; all
//                     shipped objectives have f(∅) = 0).
//   cost_trace[i]     cumulative oracle count after pick i; the final entry
//                     also absorbs any queries the solver issues after its
//                     last pick, so total_cost == cost_trace.back().
//   reporting_evals   evaluations made purely to fill in the trace
//                     (random-selection prefixes), excluded from total_cost.
struct Solution {
  std::vector<ElementId> selected;
  std::vector<double> utility_trace;
  std::vector<std::uint64_t> cost_trace;
  std::uint64_t total_cost = 0;
  double final_utility = 0.0;
  std::uint64_t reporting_evals = 0;
  std::optional<std::string> warning;
};

}  // namespace submod

#endif  // SUBMOD_CORE_HPP_
