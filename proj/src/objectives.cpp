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

#include "submod/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace submod {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Schur residuals in [-kPsdTolerance, 0] are floating-point noise on a PSD
// kernel and clamp to zero; anything below is a genuinely indefinite input.
constexpr double kPsdTolerance = 1e-10;

struct CoverageState final : ObjectiveState {
  explicit CoverageState(std::size_t universe) : covered(universe, 0) {}
  std::vector<std::uint8_t> covered;
};

// Lower-triangular factor of I + sigma^-2 K_AA, packed row by row in commit
// order; row m starts at offset m(m+1)/2.
struct LogDetState final : ObjectiveState {
  std::vector<double> factor;
};

struct FacilityState final : ObjectiveState {
  explicit FacilityState(std::vector<double> init) : min_dist(std::move(init)) {}
  std::vector<double> min_dist;  // distance to nearest of A ∪ {e0}, per point
};

struct PenaltyState final : ObjectiveState {
  explicit PenaltyState(std::size_t scenarios) : earliest(scenarios, kInf) {}
  std::vector<double> earliest;  // min detection time over A, per scenario
};

}  // namespace

// --------------------------------------------------------------------------
// WeightedCoverage

WeightedCoverage::WeightedCoverage(
    std::size_t universe_size, std::vector<std::vector<std::uint32_t>> covers,
    std::vector<double> weights)
    : Objective(GroundSet(covers.size())),
      covers_(std::move(covers)),
      weights_(std::move(weights)) {
  if (weights_.size() != universe_size) {
    throw InvalidInput("coverage weight count does not match universe size");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidInput("coverage weights must be >= 0");
  }
  for (const auto& cover : covers_) {
    for (std::uint32_t item : cover) {
      if (item >= universe_size) {
        throw InvalidInput("covered item " + std::to_string(item) +
                           " outside universe of size " +
                           std::to_string(universe_size));
      }
    }
  }
}

double WeightedCoverage::eval_set(std::span<const ElementId> set) const {
  std::vector<std::uint8_t> covered(weights_.size(), 0);
  double total = 0.0;
  for (ElementId e : set) {
    for (std::uint32_t item : covers_[e]) {
      if (!covered[item]) {
        covered[item] = 1;
        total += weights_[item];
      }
    }
  }
  return total;
}

double WeightedCoverage::marginal_gain(ElementId e,
                                       const SelectionContext& ctx) const {
  const auto& covered = static_cast<CoverageState&>(ctx.state()).covered;
  double gain = 0.0;
  for (std::uint32_t item : covers_[e]) {
    if (!covered[item]) gain += weights_[item];
  }
  return gain;
}

void WeightedCoverage::apply_commit(ElementId e, SelectionContext& ctx) const {
  auto& covered = static_cast<CoverageState&>(ctx.state()).covered;
  for (std::uint32_t item : covers_[e]) covered[item] = 1;
}

std::unique_ptr<ObjectiveState> WeightedCoverage::make_state() const {
  return std::make_unique<CoverageState>(weights_.size());
}

// --------------------------------------------------------------------------
// LogDetObjective

LogDetObjective::LogDetObjective(std::shared_ptr<const KernelMatrix> kernel,
                                 double sigma)
    : Objective(GroundSet(kernel ? kernel->size() : 0)),
      kernel_(std::move(kernel)),
      sigma_(sigma) {
  if (!kernel_) throw InvalidInput("log-det objective requires a kernel");
  if (!(sigma > 0.0)) throw InvalidInput("noise sigma must be > 0");
  inv_sigma_sq_ = 1.0 / (sigma * sigma);
}

double LogDetObjective::scaled_residual(ElementId e,
                                        const SelectionContext& ctx,
                                        std::vector<double>& solved) const {
  const auto& state = static_cast<LogDetState&>(ctx.state());
  const auto& order = ctx.selected();
  const std::size_t m = order.size();

  solved.resize(m);
  double norm_sq = 0.0;
  const double* factor = state.factor.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = factor + i * (i + 1) / 2;
    double v = inv_sigma_sq_ * kernel_->entry(order[i], e);
    for (std::size_t j = 0; j < i; ++j) v -= row[j] * solved[j];
    v /= row[i];
    solved[i] = v;
    norm_sq += v * v;
  }

  const double residual = inv_sigma_sq_ * kernel_->entry(e, e) - norm_sq;
  if (residual < -kPsdTolerance) {
    throw NumericError("kernel is not positive semi-definite: element " +
                       std::to_string(e) + " has Schur residual " +
                       std::to_string(residual));
  }
  return std::max(residual, 0.0);
}

double LogDetObjective::marginal_gain(ElementId e,
                                      const SelectionContext& ctx) const {
  std::vector<double> solved;
  return 0.5 * std::log1p(scaled_residual(e, ctx, solved));
}

void LogDetObjective::apply_commit(ElementId e, SelectionContext& ctx) const {
  auto& state = static_cast<LogDetState&>(ctx.state());
  std::vector<double> solved;
  const double residual = scaled_residual(e, ctx, solved);
  // New factor row: the forward-solve coefficients plus the pivot
  // sqrt(1 + residual) >= 1, so the extension never loses definiteness.
  state.factor.insert(state.factor.end(), solved.begin(), solved.end());
  state.factor.push_back(std::sqrt(1.0 + residual));
}

double LogDetObjective::eval_set(std::span<const ElementId> set) const {
  const std::size_t m = set.size();
  if (m == 0) return 0.0;

  // Dense in-place Cholesky of I + sigma^-2 K_SS; f = sum of log pivots.
  std::vector<double> mat(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double value = inv_sigma_sq_ * kernel_->entry(set[i], set[j]);
      if (i == j) value += 1.0;
      mat[i * m + j] = value;
    }
  }
  double logdet_half = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double pivot = mat[i * m + i];
    for (std::size_t j = 0; j < i; ++j) pivot -= mat[i * m + j] * mat[i * m + j];
    if (!(pivot > 0.0)) {
      throw NumericError("kernel is not positive semi-definite: element " +
                         std::to_string(set[i]) + " yields pivot " +
                         std::to_string(pivot));
    }
    const double root = std::sqrt(pivot);
    mat[i * m + i] = root;
    logdet_half += std::log(root);
    for (std::size_t r = i + 1; r < m; ++r) {
      double v = mat[r * m + i];
      for (std::size_t j = 0; j < i; ++j) v -= mat[r * m + j] * mat[i * m + j];
      mat[r * m + i] = v / root;
    }
  }
  return logdet_half;
}

std::unique_ptr<ObjectiveState> LogDetObjective::make_state() const {
  return std::make_unique<LogDetState>();
}

// --------------------------------------------------------------------------
// FacilityLocationObjective

FacilityLocationObjective::FacilityLocationObjective(
    std::shared_ptr<const DistanceSource> distances)
    : Objective(GroundSet(distances ? distances->size() : 0)),
      distances_(std::move(distances)) {
  if (!distances_) {
    throw InvalidInput("facility location requires a distance source");
  }
  double total = 0.0;
  for (std::size_t v = 0; v < distances_->size(); ++v) {
    const double aux = distances_->auxiliary_distance(v);
    if (!(aux >= 0.0)) {
      throw InvalidInput("negative auxiliary distance at point " +
                         std::to_string(v));
    }
    total += aux;
  }
  baseline_ = distances_->size() > 0
                  ? total / static_cast<double>(distances_->size())
                  : 0.0;
}

double FacilityLocationObjective::eval_set(
    std::span<const ElementId> set) const {
  const std::size_t n = distances_->size();
  if (n == 0) return 0.0;
  double saved = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double nearest = distances_->auxiliary_distance(v);
    for (ElementId e : set) {
      nearest = std::min(nearest, distances_->distance(v, e));
    }
    saved += distances_->auxiliary_distance(v) - nearest;
  }
  return saved / static_cast<double>(n);
}

double FacilityLocationObjective::marginal_gain(
    ElementId e, const SelectionContext& ctx) const {
  const auto& min_dist = static_cast<FacilityState&>(ctx.state()).min_dist;
  const std::size_t n = min_dist.size();
  double gain = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double d = distances_->distance(v, e);
    if (d < min_dist[v]) gain += min_dist[v] - d;
  }
  return gain / static_cast<double>(n);
}

void FacilityLocationObjective::apply_commit(ElementId e,
                                             SelectionContext& ctx) const {
  auto& min_dist = static_cast<FacilityState&>(ctx.state()).min_dist;
  for (std::size_t v = 0; v < min_dist.size(); ++v) {
    min_dist[v] = std::min(min_dist[v], distances_->distance(v, e));
  }
}

std::unique_ptr<ObjectiveState> FacilityLocationObjective::make_state() const {
  std::vector<double> init(distances_->size());
  for (std::size_t v = 0; v < init.size(); ++v) {
    init[v] = distances_->auxiliary_distance(v);
  }
  return std::make_unique<FacilityState>(std::move(init));
}

// --------------------------------------------------------------------------
// PenaltyReductionObjective

PenaltyReductionObjective::PenaltyReductionObjective(
    std::shared_ptr<const ScenarioTable> table)
    : Objective(GroundSet(table ? table->num_sensors : 0)),
      table_(std::move(table)) {
  if (!table_) throw InvalidInput("penalty reduction requires a scenario table");
  validate_penalty(table_->penalty);
  if (table_->probabilities.size() != table_->num_scenarios) {
    throw InvalidInput("scenario probability count mismatch");
  }
  double sum = 0.0;
  for (double prob : table_->probabilities) {
    if (!(prob >= 0.0)) throw InvalidInput("negative scenario probability");
    sum += prob;
  }
  if (table_->num_scenarios > 0 && std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInput("scenario probabilities must sum to 1");
  }
}

double PenaltyReductionObjective::eval_set(
    std::span<const ElementId> set) const {
  const auto& t = *table_;
  double reduction = 0.0;
  for (std::size_t i = 0; i < t.num_scenarios; ++i) {
    double earliest = kInf;
    for (ElementId e : set) earliest = std::min(earliest, t.time(e, i));
    reduction += t.probabilities[i] * (penalty_at_infinity(t.penalty) -
                                       penalty_of(t.penalty, earliest));
  }
  return reduction;
}

double PenaltyReductionObjective::marginal_gain(
    ElementId e, const SelectionContext& ctx) const {
  const auto& earliest = static_cast<PenaltyState&>(ctx.state()).earliest;
  const auto& t = *table_;
  double gain = 0.0;
  for (std::size_t i = 0; i < t.num_scenarios; ++i) {
    const double candidate = t.time(e, i);
    if (candidate < earliest[i]) {
      gain += t.probabilities[i] * (penalty_of(t.penalty, earliest[i]) -
                                    penalty_of(t.penalty, candidate));
    }
  }
  return gain;
}

void PenaltyReductionObjective::apply_commit(ElementId e,
                                             SelectionContext& ctx) const {
  auto& earliest = static_cast<PenaltyState&>(ctx.state()).earliest;
  const auto& t = *table_;
  for (std::size_t i = 0; i < t.num_scenarios; ++i) {
    earliest[i] = std::min(earliest[i], t.time(e, i));
  }
}

std::unique_ptr<ObjectiveState> PenaltyReductionObjective::make_state() const {
  return std::make_unique<PenaltyState>(table_->num_scenarios);
}

}  // namespace submod
