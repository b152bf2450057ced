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
// The shipped monotone submodular objectives. All support incremental
// marginals through the SelectionContext cache so a marginal query costs
// one oracle call regardless of |A|:
//
//   WeightedCoverage          sum of item weights covered by the union of
//                             the selected elements' cover sets. Exact in
//                             integer-weight instances; the exhaustively
//                             verifiable testbed.
//   LogDetObjective           information gain 1/2 log det(I + sigma^-2 K_AA)
//                             of an active set under Gaussian observation
//                             noise; incremental via a growing Cholesky
//                             factor, marginal via one forward solve.
//   FacilityLocationObjective L({e0}) - L(A ∪ {e0}) where L averages each
//                             point's distance to its nearest selected
//                             exemplar; incremental via a per-point running
//                             minimum.
//   PenaltyReductionObjective expected detection-penalty reduction of a
//                             sensor set over weighted intrusion scenarios;
//                             incremental via per-scenario earliest
//                             detection times.

#ifndef SUBMOD_OBJECTIVES_HPP_
#define SUBMOD_OBJECTIVES_HPP_

#include <memory>
#include <vector>

#include "submod/core.hpp"
#include "submod/dataio.hpp"

namespace submod {

class WeightedCoverage final : public Objective {
 public:
  // covers[e] lists the universe items element e covers; weights are
  // per-item and non-negative.
  WeightedCoverage(std::size_t universe_size,
                   std::vector<std::vector<std::uint32_t>> covers,
                   std::vector<double> weights);

  std::size_t universe_size() const { return weights_.size(); }
  const std::vector<std::vector<std::uint32_t>>& covers() const {
    return covers_;
  }
  const std::vector<double>& weights() const { return weights_; }

 protected:
  double eval_set(std::span<const ElementId> set) const override;
  double marginal_gain(ElementId e, const SelectionContext& ctx) const override;
  void apply_commit(ElementId e, SelectionContext& ctx) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  std::vector<std::vector<std::uint32_t>> covers_;
  std::vector<double> weights_;
};

class LogDetObjective final : public Objective {
 public:
  LogDetObjective(std::shared_ptr<const KernelMatrix> kernel, double sigma);

  const KernelMatrix& kernel() const { return *kernel_; }
  double sigma() const { return sigma_; }

 protected:
  double eval_set(std::span<const ElementId> set) const override;
  double marginal_gain(ElementId e, const SelectionContext& ctx) const override;
  void apply_commit(ElementId e, SelectionContext& ctx) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  // Residual variance of e against the committed set, scaled by sigma^-2.
  // Fills `solved` with the forward-solve coefficients needed to extend the
  // factor. Negative residuals within the PSD tolerance clamp to zero;
  // beyond it the kernel is not PSD and we fail naming the element.
  double scaled_residual(ElementId e, const SelectionContext& ctx,
                         std::vector<double>& solved) const;

  std::shared_ptr<const KernelMatrix> kernel_;
  double sigma_;
  double inv_sigma_sq_;
};

class FacilityLocationObjective final : public Objective {
 public:
  explicit FacilityLocationObjective(
      std::shared_ptr<const DistanceSource> distances);

  const DistanceSource& distances() const { return *distances_; }
  // L({e0}): mean auxiliary distance, the ceiling of f.
  double baseline() const { return baseline_; }

 protected:
  double eval_set(std::span<const ElementId> set) const override;
  double marginal_gain(ElementId e, const SelectionContext& ctx) const override;
  void apply_commit(ElementId e, SelectionContext& ctx) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  std::shared_ptr<const DistanceSource> distances_;
  double baseline_;
};

class PenaltyReductionObjective final : public Objective {
 public:
  explicit PenaltyReductionObjective(std::shared_ptr<const ScenarioTable> table);

  const ScenarioTable& table() const { return *table_; }

 protected:
  double eval_set(std::span<const ElementId> set) const override;
  double marginal_gain(ElementId e, const SelectionContext& ctx) const override;
  void apply_commit(ElementId e, SelectionContext& ctx) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  std::shared_ptr<const ScenarioTable> table_;
};

}  // namespace submod

#endif  // SUBMOD_OBJECTIVES_HPP_
