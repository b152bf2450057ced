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
// Dataset ingestion and the three objective-family data backings: kernel
// matrices, distance sources, and sensor scenario tables. Loaded artifacts
// are immutable after construction and safe to share across threads.
//
// File formats (see README for the byte-level description):
//   vectors  CSV (comma separated, '.' decimal, optional header row
//            auto-detected by a non-numeric first line) or binary
//            ("SMVD"+version header, row-major little-endian f64).
//   scenarios CSV with header `sensor,scenario,time` plus a `<path>.spec`
//            sidecar naming sizes, probabilities, and the penalty model.
//            Absent (sensor, scenario) pairs mean "never detects" and the
//            literal token `inf` is accepted as a time.

#ifndef SUBMOD_DATAIO_HPP_
#define SUBMOD_DATAIO_HPP_

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "submod/core.hpp"

namespace submod {

enum class Normalization { kNone, kPerVectorUnitNorm, kPerFeatureZscore };
enum class VectorFormat { kCsv, kBinaryF64 };

struct VectorDataset {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> rows;  // row-major, n * dim
  Normalization normalization = Normalization::kNone;

  std::span<const double> row(std::size_t i) const {
    return {rows.data() + i * dim, dim};
  }
};

VectorDataset load_vectors(const std::string& path, VectorFormat format,
                           Normalization normalization);
void save_vectors(const VectorDataset& data, const std::string& path,
                  VectorFormat format);

// In-place normalization; load_vectors applies this after parsing.
// Zero rows are rejected under unit-norm; constant features are left
// centered (divisor 1) under z-score.
void normalize_rows(VectorDataset& data, Normalization normalization);

// Isotropic Gaussian mixture: `components` centers uniform in
// [-1, 1]^dim, points assigned round-robin-free (uniformly at random),
// offset by N(0, spread^2) noise. Deterministic per seed.
VectorDataset generate_gaussian_mixture(std::size_t n, std::size_t dim,
                                        std::size_t components, double spread,
                                        std::uint64_t seed,
                                        Normalization normalization);

struct KernelParams {
  double bandwidth = 0.75;  // h in exp(-|x_i - x_j|^2 / h^2)
  double sigma = 1.0;       // observation noise std dev
};

// Symmetric PSD covariance backing K[i][j]. Dense storage up to
// `dense_threshold` points; above that rows are recomputed on demand from
// the vectors through a bounded LRU row cache.
class KernelMatrix {
 public:
  virtual ~KernelMatrix() = default;
  std::size_t size() const { return n_; }
  virtual double entry(std::size_t i, std::size_t j) const = 0;
  virtual void row(std::size_t i, std::span<double> out) const;

 protected:
  explicit KernelMatrix(std::size_t n) : n_(n) {}

 private:
  std::size_t n_;
};

class DenseKernelMatrix final : public KernelMatrix {
 public:
  // Validates symmetry within 1e-12.
  DenseKernelMatrix(std::size_t n, std::vector<double> values);

  double entry(std::size_t i, std::size_t j) const override {
    return values_[i * size() + j];
  }
  void row(std::size_t i, std::span<double> out) const override;

 private:
  std::vector<double> values_;
};

class OnDemandKernelMatrix final : public KernelMatrix {
 public:
  OnDemandKernelMatrix(VectorDataset data, KernelParams params,
                       std::size_t cache_rows = 256);

  double entry(std::size_t i, std::size_t j) const override;
  void row(std::size_t i, std::span<double> out) const override;

 private:
  const std::vector<double>& cached_row(std::size_t i) const;

  VectorDataset data_;
  KernelParams params_;
  std::size_t cache_rows_;
  mutable std::mutex mutex_;
  mutable std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  mutable std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

// K[i][j] = exp(-|x_i - x_j|^2 / h^2); symmetric with exact unit diagonal.
std::shared_ptr<const KernelMatrix> build_kernel(
    const VectorDataset& data, const KernelParams& params,
    std::size_t dense_threshold = 20000);

// Pairwise dissimilarities d(i, j) >= 0 plus the distance of every point to
// the auxiliary exemplar e0.
class DistanceSource {
 public:
  virtual ~DistanceSource() = default;
  std::size_t size() const { return n_; }
  virtual double distance(std::size_t i, std::size_t j) const = 0;
  virtual double auxiliary_distance(std::size_t i) const = 0;

 protected:
  explicit DistanceSource(std::size_t n) : n_(n) {}

 private:
  std::size_t n_;
};

// Squared Euclidean distances from vectors, computed on the fly or
// materialized as a full matrix for speed. The auxiliary exemplar defaults
// to the origin; for unit-norm rows every auxiliary distance is then 1.
class VectorDistanceSource final : public DistanceSource {
 public:
  VectorDistanceSource(VectorDataset data, std::vector<double> aux_point,
                       bool precompute);

  double distance(std::size_t i, std::size_t j) const override;
  double auxiliary_distance(std::size_t i) const override {
    return aux_distance_[i];
  }

 private:
  VectorDataset data_;
  std::vector<double> aux_distance_;
  std::vector<double> matrix_;  // n*n when precomputed, else empty
};

// Explicit dissimilarity matrix; validates non-negativity.
class MatrixDistanceSource final : public DistanceSource {
 public:
  MatrixDistanceSource(std::size_t n, std::vector<double> matrix,
                       std::vector<double> aux_distance);

  double distance(std::size_t i, std::size_t j) const override {
    return matrix_[i * size() + j];
  }
  double auxiliary_distance(std::size_t i) const override {
    return aux_distance_[i];
  }

 private:
  std::vector<double> matrix_;
  std::vector<double> aux_distance_;
};

// aux_point empty means the origin. Precomputes the full matrix when
// n <= precompute_threshold.
std::shared_ptr<const DistanceSource> make_distance_source(
    const VectorDataset& data, std::vector<double> aux_point = {},
    std::size_t precompute_threshold = 20000);

// Penalty incurred for detecting a scenario at time t; non-decreasing in t
// with an explicit finite value at t = infinity, so the penalty *reduction*
// of earlier detection is non-negative and non-increasing in detection time.
struct PenaltySpec {
  enum class Model { kCappedLinear, kStep };
  Model model = Model::kCappedLinear;
  double t_max = 1.0;  // capped linear: pi(t) = min(t, t_max), pi(inf) = t_max
  double tau = 0.0;    // step: pi(t) = 0 for t <= tau, else z; pi(inf) = z
  double z = 1.0;
};

// Throws InvalidInput when the parameters would make the penalty decrease
// with detection time (negative cap / step height).
void validate_penalty(const PenaltySpec& spec);
double penalty_of(const PenaltySpec& spec, double t);
double penalty_at_infinity(const PenaltySpec& spec);

struct ScenarioTable {
  std::size_t num_sensors = 0;
  std::size_t num_scenarios = 0;
  // Sensor-major, num_sensors * num_scenarios; +infinity = never detects.
  std::vector<double> detection_times;
  std::vector<double> probabilities;  // per scenario, sums to 1
  PenaltySpec penalty;

  double time(std::size_t sensor, std::size_t scenario) const {
    return detection_times[sensor * num_scenarios + scenario];
  }
};

ScenarioTable load_scenarios(const std::string& csv_path);

struct ScenarioGenConfig {
  double never_detect_fraction = 0.3;
  double propagation_speed = 1.0;
  PenaltySpec penalty;
};

// Sensors and intrusion origins placed uniformly in the unit square;
// detection time is the Euclidean propagation delay, with a seeded fraction
// of (sensor, scenario) pairs made undetectable. Uniform scenario
// probabilities.
ScenarioTable generate_scenarios(std::size_t num_sensors,
                                 std::size_t num_scenarios, std::uint64_t seed,
                                 const ScenarioGenConfig& config = {});

}  // namespace submod

#endif  // SUBMOD_DATAIO_HPP_
