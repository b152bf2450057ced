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

#include "submod/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "submod/config.hpp"
#include "submod/rng.hpp"

namespace submod {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr char kBinaryMagic[4] = {'S', 'M', 'V', 'D'};
constexpr std::uint32_t kBinaryVersion = 1;

bool parse_cell(const std::string& raw, double& out) {
  const char* begin = raw.data();
  const char* end = begin + raw.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trimmed(current));
      current.clear();
    } else {
      current += c;
    }
  }
  cells.push_back(trimmed(current));
  return cells;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Standard normal via Box-Muller on the portable generator.
double gaussian(Rng& rng) {
  const double u1 =
      (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

VectorDataset load_vectors_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open vector file: " + path);

  VectorDataset data;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const auto cells = split_csv_line(body);

    if (first_content_line) {
      // Header auto-detection: a first line with any non-numeric cell is a
      // header and is skipped.
      double probe;
      const bool numeric = std::all_of(
          cells.begin(), cells.end(),
          [&](const std::string& c) { return parse_cell(c, probe); });
      first_content_line = false;
      if (!numeric) continue;
    }

    if (data.n == 0) {
      data.dim = cells.size();
    } else if (cells.size() != data.dim) {
      throw LoadError(path + ":" + std::to_string(line_no) + ": ragged row (" +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(data.dim) + ")");
    }
    for (const auto& cell : cells) {
      double value;
      if (!parse_cell(cell, value) || !std::isfinite(value)) {
        throw LoadError(path + ":" + std::to_string(line_no) +
                        ": non-numeric cell '" + cell + "'");
      }
      data.rows.push_back(value);
    }
    ++data.n;
  }
  if (data.n == 0) throw LoadError(path + ": no data rows");
  return data;
}

VectorDataset load_vectors_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open vector file: " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  std::uint64_t dim = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw LoadError(path + ": not a vector binary file");
  }
  if (version != kBinaryVersion) {
    throw LoadError(path + ": unsupported version " + std::to_string(version));
  }
  if (n == 0 || dim == 0) throw LoadError(path + ": no data rows");

  VectorDataset data;
  data.n = n;
  data.dim = dim;
  data.rows.resize(n * dim);
  in.read(reinterpret_cast<char*>(data.rows.data()),
          static_cast<std::streamsize>(data.rows.size() * sizeof(double)));
  if (!in) throw LoadError(path + ": truncated data section");
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    if (!std::isfinite(data.rows[i])) {
      throw LoadError(path + ": non-finite value in row " +
                      std::to_string(i / dim));
    }
  }
  return data;
}

}  // namespace

void normalize_rows(VectorDataset& data, Normalization normalization) {
  switch (normalization) {
    case Normalization::kNone:
      break;
    case Normalization::kPerVectorUnitNorm:
      for (std::size_t i = 0; i < data.n; ++i) {
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < data.dim; ++j) {
          const double v = data.rows[i * data.dim + j];
          norm_sq += v * v;
        }
        if (norm_sq <= 0.0) {
          throw LoadError("row " + std::to_string(i) +
                          " is a zero vector and cannot be unit-normalized");
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t j = 0; j < data.dim; ++j) {
          data.rows[i * data.dim + j] *= inv;
        }
      }
      break;
    case Normalization::kPerFeatureZscore:
      for (std::size_t j = 0; j < data.dim; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
          mean += data.rows[i * data.dim + j];
        }
        mean /= static_cast<double>(data.n);
        double var = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
          const double d = data.rows[i * data.dim + j] - mean;
          var += d * d;
        }
        var /= static_cast<double>(data.n);
        // Constant features stay centered rather than dividing by ~0.
        const double inv = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
        for (std::size_t i = 0; i < data.n; ++i) {
          double& v = data.rows[i * data.dim + j];
          v = (v - mean) * inv;
        }
      }
      break;
  }
  data.normalization = normalization;
}

VectorDataset load_vectors(const std::string& path, VectorFormat format,
                           Normalization normalization) {
  VectorDataset data = format == VectorFormat::kCsv
                           ? load_vectors_csv(path)
                           : load_vectors_binary(path);
  normalize_rows(data, normalization);
  return data;
}

void save_vectors(const VectorDataset& data, const std::string& path,
                  VectorFormat format) {
  if (format == VectorFormat::kCsv) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write vector file: " + path);
    char buf[64];
    for (std::size_t i = 0; i < data.n; ++i) {
      for (std::size_t j = 0; j < data.dim; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", data.rows[i * data.dim + j]);
        out << (j ? "," : "") << buf;
      }
      out << "\n";
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write vector file: " + path);
  const std::uint64_t n = data.n;
  const std::uint64_t dim = data.dim;
  out.write(kBinaryMagic, 4);
  out.write(reinterpret_cast<const char*>(&kBinaryVersion),
            sizeof(kBinaryVersion));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(data.rows.data()),
            static_cast<std::streamsize>(data.rows.size() * sizeof(double)));
}

VectorDataset generate_gaussian_mixture(std::size_t n, std::size_t dim,
                                        std::size_t components, double spread,
                                        std::uint64_t seed,
                                        Normalization normalization) {
  if (n == 0 || dim == 0 || components == 0) {
    throw InvalidInput("gaussian mixture needs n, dim, components >= 1");
  }
  if (!(spread >= 0.0)) throw InvalidInput("mixture spread must be >= 0");

  Rng rng = Rng::substream(seed, RngStream::kGenerate);
  std::vector<double> centers(components * dim);
  for (auto& c : centers) c = 2.0 * rng.next_double() - 1.0;

  VectorDataset data;
  data.n = n;
  data.dim = dim;
  data.rows.resize(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = static_cast<std::size_t>(rng.below(components));
    for (std::size_t j = 0; j < dim; ++j) {
      data.rows[i * dim + j] = centers[c * dim + j] + spread * gaussian(rng);
    }
  }
  normalize_rows(data, normalization);
  return data;
}

// --------------------------------------------------------------------------
// Kernels

void KernelMatrix::row(std::size_t i, std::span<double> out) const {
  for (std::size_t j = 0; j < size(); ++j) out[j] = entry(i, j);
}

DenseKernelMatrix::DenseKernelMatrix(std::size_t n, std::vector<double> values)
    : KernelMatrix(n), values_(std::move(values)) {
  if (values_.size() != n * n) {
    throw InvalidInput("kernel storage size does not match n*n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values_[i * n + j] - values_[j * n + i]) > 1e-12) {
        throw InvalidInput("kernel matrix is not symmetric at (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

void DenseKernelMatrix::row(std::size_t i, std::span<double> out) const {
  std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(i * size()),
              size(), out.begin());
}

OnDemandKernelMatrix::OnDemandKernelMatrix(VectorDataset data,
                                           KernelParams params,
                                           std::size_t cache_rows)
    : KernelMatrix(data.n),
      data_(std::move(data)),
      params_(params),
      cache_rows_(std::max<std::size_t>(1, cache_rows)) {}

double OnDemandKernelMatrix::entry(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  const double sq = squared_distance(data_.row(i), data_.row(j));
  return std::exp(-sq / (params_.bandwidth * params_.bandwidth));
}

const std::vector<double>& OnDemandKernelMatrix::cached_row(
    std::size_t i) const {
  const auto it = index_.find(i);
  if (it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return lru_.front().second;
  }
  std::vector<double> values(size());
  for (std::size_t j = 0; j < size(); ++j) values[j] = entry(i, j);
  lru_.emplace_front(i, std::move(values));
  index_[i] = lru_.begin();
  if (lru_.size() > cache_rows_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return lru_.front().second;
}

void OnDemandKernelMatrix::row(std::size_t i, std::span<double> out) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto& values = cached_row(i);
  std::copy(values.begin(), values.end(), out.begin());
}

std::shared_ptr<const KernelMatrix> build_kernel(const VectorDataset& data,
                                                 const KernelParams& params,
                                                 std::size_t dense_threshold) {
  if (data.n < 1) throw InvalidInput("kernel needs at least one point");
  if (!(params.bandwidth > 0.0)) throw InvalidInput("bandwidth must be > 0");
  if (!(params.sigma > 0.0)) throw InvalidInput("sigma must be > 0");

  if (data.n > dense_threshold) {
    return std::make_shared<OnDemandKernelMatrix>(data, params);
  }

  const std::size_t n = data.n;
  const double inv_h_sq = 1.0 / (params.bandwidth * params.bandwidth);
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sq = squared_distance(data.row(i), data.row(j));
      const double k = std::exp(-sq * inv_h_sq);
      if (!std::isfinite(k)) {
        throw NumericError("non-finite kernel entry at (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
      values[i * n + j] = k;
      values[j * n + i] = k;  // mirrored storage: exact symmetry
    }
  }
  return std::make_shared<DenseKernelMatrix>(n, std::move(values));
}

// --------------------------------------------------------------------------
// Distances

VectorDistanceSource::VectorDistanceSource(VectorDataset data,
                                           std::vector<double> aux_point,
                                           bool precompute)
    : DistanceSource(data.n), data_(std::move(data)) {
  if (!aux_point.empty() && aux_point.size() != data_.dim) {
    throw InvalidInput("auxiliary point dimension mismatch");
  }
  const std::vector<double> origin(data_.dim, 0.0);
  const std::span<const double> aux =
      aux_point.empty() ? std::span<const double>(origin)
                        : std::span<const double>(aux_point);
  aux_distance_.resize(data_.n);
  for (std::size_t i = 0; i < data_.n; ++i) {
    aux_distance_[i] = squared_distance(data_.row(i), aux);
  }
  if (precompute) {
    matrix_.resize(data_.n * data_.n);
    for (std::size_t i = 0; i < data_.n; ++i) {
      matrix_[i * data_.n + i] = 0.0;
      for (std::size_t j = i + 1; j < data_.n; ++j) {
        const double d = squared_distance(data_.row(i), data_.row(j));
        matrix_[i * data_.n + j] = d;
        matrix_[j * data_.n + i] = d;
      }
    }
  }
}

double VectorDistanceSource::distance(std::size_t i, std::size_t j) const {
  if (!matrix_.empty()) return matrix_[i * size() + j];
  return squared_distance(data_.row(i), data_.row(j));
}

MatrixDistanceSource::MatrixDistanceSource(std::size_t n,
                                           std::vector<double> matrix,
                                           std::vector<double> aux_distance)
    : DistanceSource(n),
      matrix_(std::move(matrix)),
      aux_distance_(std::move(aux_distance)) {
  if (matrix_.size() != n * n || aux_distance_.size() != n) {
    throw InvalidInput("distance matrix size mismatch");
  }
  for (double d : matrix_) {
    if (!(d >= 0.0)) throw InvalidInput("negative distance in source");
  }
  for (double d : aux_distance_) {
    if (!(d >= 0.0)) throw InvalidInput("negative auxiliary distance");
  }
}

std::shared_ptr<const DistanceSource> make_distance_source(
    const VectorDataset& data, std::vector<double> aux_point,
    std::size_t precompute_threshold) {
  return std::make_shared<VectorDistanceSource>(data, std::move(aux_point),
                                                data.n <= precompute_threshold);
}

// --------------------------------------------------------------------------
// Penalties and scenarios

void validate_penalty(const PenaltySpec& spec) {
  switch (spec.model) {
    case PenaltySpec::Model::kCappedLinear:
      if (!(spec.t_max >= 0.0)) {
        throw InvalidInput(
            "capped-linear penalty must be non-decreasing in detection time "
            "(t_max >= 0)");
      }
      break;
    case PenaltySpec::Model::kStep:
      if (!(spec.z >= 0.0) || !(spec.tau >= 0.0)) {
        throw InvalidInput(
            "step penalty must be non-decreasing in detection time "
            "(tau >= 0, z >= 0)");
      }
      break;
  }
}

double penalty_of(const PenaltySpec& spec, double t) {
  switch (spec.model) {
    case PenaltySpec::Model::kCappedLinear:
      return std::min(t, spec.t_max);
    case PenaltySpec::Model::kStep:
      return t <= spec.tau ? 0.0 : spec.z;
  }
  return 0.0;
}

double penalty_at_infinity(const PenaltySpec& spec) {
  return spec.model == PenaltySpec::Model::kCappedLinear ? spec.t_max : spec.z;
}

namespace {

PenaltySpec parse_penalty(const KeyValueConfig& config) {
  PenaltySpec spec;
  const std::string model = config.get_string_or("penalty_model", "capped_linear");
  if (model == "capped_linear") {
    spec.model = PenaltySpec::Model::kCappedLinear;
    spec.t_max = config.get_double("t_max");
  } else if (model == "step") {
    spec.model = PenaltySpec::Model::kStep;
    spec.tau = config.get_double("tau");
    spec.z = config.get_double("z");
  } else {
    throw LoadError("unknown penalty model '" + model + "'");
  }
  validate_penalty(spec);
  return spec;
}

std::vector<double> normalized_probabilities(std::vector<double> probs,
                                             const std::string& origin) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw LoadError(origin + ": probabilities are not normalizable "
                               "(negative entry)");
    }
    sum += p;
  }
  if (!(sum > 0.0)) {
    throw LoadError(origin + ": probabilities are not normalizable (sum 0)");
  }
  for (double& p : probs) p /= sum;
  return probs;
}

}  // namespace

ScenarioTable load_scenarios(const std::string& csv_path) {
  const std::string spec_path = csv_path + ".spec";
  const KeyValueConfig spec = KeyValueConfig::parse_file(spec_path);

  ScenarioTable table;
  const std::int64_t sensors = spec.get_int("num_sensors");
  const std::int64_t scenarios = spec.get_int("num_scenarios");
  if (sensors < 1 || scenarios < 1) {
    throw LoadError(spec_path + ": num_sensors and num_scenarios must be >= 1");
  }
  table.num_sensors = static_cast<std::size_t>(sensors);
  table.num_scenarios = static_cast<std::size_t>(scenarios);
  table.penalty = parse_penalty(spec);
  if (const auto probs = spec.get_double_array_optional("probabilities")) {
    if (probs->size() != table.num_scenarios) {
      throw LoadError(spec_path + ": probabilities length must equal " +
                      std::to_string(table.num_scenarios));
    }
    table.probabilities = normalized_probabilities(*probs, spec_path);
  } else {
    table.probabilities.assign(table.num_scenarios,
                               1.0 / static_cast<double>(table.num_scenarios));
  }

  std::ifstream in(csv_path);
  if (!in) throw LoadError("cannot open scenario file: " + csv_path);
  table.detection_times.assign(table.num_sensors * table.num_scenarios, kInf);

  std::string line;
  std::size_t line_no = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const std::string where = csv_path + ":" + std::to_string(line_no);
    if (!header_checked) {
      header_checked = true;
      auto header = split_csv_line(body);
      if (header != std::vector<std::string>{"sensor", "scenario", "time"}) {
        throw LoadError(where + ": expected header 'sensor,scenario,time'");
      }
      continue;
    }
    const auto cells = split_csv_line(body);
    if (cells.size() != 3) {
      throw LoadError(where + ": expected 3 cells");
    }
    double sensor_raw, scenario_raw, time;
    if (!parse_cell(cells[0], sensor_raw) || sensor_raw < 0 ||
        sensor_raw != std::floor(sensor_raw)) {
      throw LoadError(where + ": bad sensor id '" + cells[0] + "'");
    }
    if (!parse_cell(cells[1], scenario_raw) || scenario_raw < 0 ||
        scenario_raw != std::floor(scenario_raw)) {
      throw LoadError(where + ": bad scenario id '" + cells[1] + "'");
    }
    if (cells[2] == "inf") {
      time = kInf;
    } else if (!parse_cell(cells[2], time)) {
      throw LoadError(where + ": bad detection time '" + cells[2] + "'");
    }
    if (time < 0.0) {
      throw LoadError(where + ": negative detection time");
    }
    const auto sensor = static_cast<std::size_t>(sensor_raw);
    const auto scenario = static_cast<std::size_t>(scenario_raw);
    if (sensor >= table.num_sensors || scenario >= table.num_scenarios) {
      throw LoadError(where + ": (sensor, scenario) out of range");
    }
    if (!seen.emplace(sensor, scenario).second) {
      throw LoadError(where + ": duplicate (sensor, scenario) pair");
    }
    table.detection_times[sensor * table.num_scenarios + scenario] = time;
  }
  if (!header_checked) throw LoadError(csv_path + ": empty scenario file");
  return table;
}

ScenarioTable generate_scenarios(std::size_t num_sensors,
                                 std::size_t num_scenarios, std::uint64_t seed,
                                 const ScenarioGenConfig& config) {
  if (num_sensors < 1 || num_scenarios < 1) {
    throw InvalidInput("scenario generation needs sensors, scenarios >= 1");
  }
  if (!(config.never_detect_fraction >= 0.0) ||
      !(config.never_detect_fraction < 1.0)) {
    throw InvalidInput("never_detect_fraction must lie in [0, 1)");
  }
  if (!(config.propagation_speed > 0.0)) {
    throw InvalidInput("propagation speed must be > 0");
  }
  validate_penalty(config.penalty);

  Rng rng = Rng::substream(seed, RngStream::kGenerate);
  std::vector<double> sensor_pos(num_sensors * 2);
  for (auto& v : sensor_pos) v = rng.next_double();
  std::vector<double> event_pos(num_scenarios * 2);
  for (auto& v : event_pos) v = rng.next_double();

  ScenarioTable table;
  table.num_sensors = num_sensors;
  table.num_scenarios = num_scenarios;
  table.penalty = config.penalty;
  table.probabilities.assign(num_scenarios,
                             1.0 / static_cast<double>(num_scenarios));
  table.detection_times.resize(num_sensors * num_scenarios);
  for (std::size_t s = 0; s < num_sensors; ++s) {
    for (std::size_t i = 0; i < num_scenarios; ++i) {
      double& slot = table.detection_times[s * num_scenarios + i];
      if (rng.bernoulli(config.never_detect_fraction)) {
        slot = kInf;
        continue;
      }
      const double dx = sensor_pos[s * 2] - event_pos[i * 2];
      const double dy = sensor_pos[s * 2 + 1] - event_pos[i * 2 + 1];
      slot = std::sqrt(dx * dx + dy * dy) / config.propagation_speed;
    }
  }
  return table;
}

}  // namespace submod
