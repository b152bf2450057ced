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

#include "submod/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "submod/config.hpp"
#include "submod/objectives.hpp"

namespace submod {
namespace {

constexpr const char* kCsvHeader =
    "record,algorithm,dataset,n,k,epsilon,p,seed,final_utility,total_cost,"
    "reporting_evals,wall_time_ms,warning";

std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string fmt_optional(const std::optional<double>& value) {
  return value ? fmt_double(*value) : std::string();
}

double parse_double_field(const std::string& raw, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw LoadError(where + ": bad numeric field '" + raw + "'");
  }
  return value;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  cells.push_back(current);
  return cells;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Normalization parse_normalization(const std::string& name) {
  if (name == "none") return Normalization::kNone;
  if (name == "unit_norm") return Normalization::kPerVectorUnitNorm;
  if (name == "zscore") return Normalization::kPerFeatureZscore;
  throw LoadError("unknown normalization '" + name +
                  "' (expected none | unit_norm | zscore)");
}

struct Cell {
  std::string algorithm;
  std::size_t k = 0;
  std::optional<double> epsilon;
  std::optional<double> p;
  std::uint64_t seed = 0;
};

std::vector<Cell> enumerate_cells(const SweepSpec& spec) {
  std::vector<Cell> cells;
  const std::vector<std::optional<double>> no_axis{std::nullopt};
  for (const auto& algorithm : spec.algorithms) {
    std::vector<std::optional<double>> eps_axis, p_axis;
    if (algorithm_uses_epsilon(algorithm)) {
      for (double e : spec.epsilon_values) eps_axis.emplace_back(e);
    } else {
      eps_axis = no_axis;
    }
    if (algorithm_uses_p(algorithm)) {
      for (double p : spec.p_values) p_axis.emplace_back(p);
    } else {
      p_axis = no_axis;
    }
    for (std::size_t k : spec.k_values) {
      for (const auto& eps : eps_axis) {
        for (const auto& p : p_axis) {
          for (std::size_t s = 0; s < spec.seeds; ++s) {
            cells.push_back({algorithm, k, eps, p, spec.seed_base + s});
          }
        }
      }
    }
  }
  return cells;
}

std::size_t bench_thread_count() {
  const char* env = std::getenv("SUBMOD_BENCH_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  const std::string raw(env);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size() || value == 0) {
    throw InvalidInput("SUBMOD_BENCH_THREADS must be a positive integer");
  }
  return std::min<std::size_t>(value, 256);
}

struct CellStats {
  std::vector<double> utilities;
  std::vector<double> costs;
  std::vector<double> reporting;
  std::vector<double> wall;
};

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

// Sample standard deviation; exactly 0 for constant samples so deterministic
// algorithms report a clean zero.
double std_of(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;
  const double mu = mean_of(values);
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

using CellKey = std::tuple<std::string, std::string, std::size_t,
                           std::optional<double>, std::optional<double>>;

CellKey key_of(const RunRecord& r) {
  return {r.algorithm, r.dataset, r.k, r.epsilon, r.p};
}

std::string cell_prefix(const RunRecord& r) {
  return r.algorithm + "," + r.dataset + "," + std::to_string(r.n) + "," +
         std::to_string(r.k) + "," + fmt_optional(r.epsilon) + "," +
         fmt_optional(r.p);
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {
      "naive_greedy",     "lazy_greedy",        "stochastic_greedy",
      "stochastic_greedy_lazy", "threshold_greedy", "sample_greedy",
      "random_selection",
  };
  return names;
}

bool algorithm_uses_epsilon(const std::string& name) {
  return name == "stochastic_greedy" || name == "stochastic_greedy_lazy" ||
         name == "threshold_greedy";
}

bool algorithm_uses_p(const std::string& name) { return name == "sample_greedy"; }

Solution run_algorithm(const std::string& name, const Objective& objective,
                       const SolverConfig& config) {
  if (name == "naive_greedy") return naive_greedy(objective, config);
  if (name == "lazy_greedy") return lazy_greedy(objective, config);
  if (name == "stochastic_greedy") return stochastic_greedy(objective, config);
  if (name == "stochastic_greedy_lazy") {
    return stochastic_greedy_lazy(objective, config);
  }
  if (name == "threshold_greedy") return threshold_greedy(objective, config);
  if (name == "sample_greedy") return sample_greedy(objective, config);
  if (name == "random_selection") return random_selection(objective, config);
  throw InvalidInput("unknown algorithm '" + name + "'");
}

SweepSpec parse_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open sweep spec: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_spec_string(buffer.str(), path);
}

SweepSpec parse_sweep_spec_string(const std::string& text,
                                  const std::string& origin) {
  const KeyValueConfig config = KeyValueConfig::parse_string(text, origin);
  SweepSpec spec;

  const std::string objective = config.get_string("objective");
  if (objective == "facility_location") {
    spec.objective = ObjectiveFamily::kFacilityLocation;
  } else if (objective == "log_det") {
    spec.objective = ObjectiveFamily::kLogDet;
  } else if (objective == "penalty_reduction") {
    spec.objective = ObjectiveFamily::kPenaltyReduction;
  } else {
    throw LoadError(origin + ": unknown objective '" + objective + "'");
  }

  const std::string dataset = config.get_string("dataset");
  spec.dataset.name = config.get_string_or("dataset_name", dataset);
  if (spec.objective == ObjectiveFamily::kPenaltyReduction) {
    if (dataset == "synthetic-scenarios") {
      spec.dataset.kind = DatasetSpec::Kind::kSyntheticScenarios;
      spec.dataset.num_sensors =
          static_cast<std::size_t>(config.get_int("num_sensors"));
      spec.dataset.num_scenarios =
          static_cast<std::size_t>(config.get_int("num_scenarios"));
      spec.dataset.data_seed =
          static_cast<std::uint64_t>(config.get_int_or("data_seed", 0));
      auto& gen = spec.dataset.scenario_config;
      gen.never_detect_fraction =
          config.get_double_or("never_detect_fraction", 0.3);
      gen.propagation_speed = config.get_double_or("propagation_speed", 1.0);
      const std::string model =
          config.get_string_or("penalty_model", "capped_linear");
      if (model == "capped_linear") {
        gen.penalty.model = PenaltySpec::Model::kCappedLinear;
        gen.penalty.t_max = config.get_double_or("t_max", 1.0);
      } else if (model == "step") {
        gen.penalty.model = PenaltySpec::Model::kStep;
        gen.penalty.tau = config.get_double_or("tau", 0.0);
        gen.penalty.z = config.get_double_or("z", 1.0);
      } else {
        throw LoadError(origin + ": unknown penalty model '" + model + "'");
      }
    } else {
      spec.dataset.kind = DatasetSpec::Kind::kScenarioCsv;
      spec.dataset.path = dataset;
    }
  } else {
    if (dataset == "synthetic-mixture") {
      spec.dataset.kind = DatasetSpec::Kind::kSyntheticMixture;
      spec.dataset.n = static_cast<std::size_t>(config.get_int("n"));
      spec.dataset.dim = static_cast<std::size_t>(config.get_int("dim"));
      spec.dataset.components =
          static_cast<std::size_t>(config.get_int("components"));
      spec.dataset.spread = config.get_double_or("spread", 0.1);
      spec.dataset.data_seed =
          static_cast<std::uint64_t>(config.get_int_or("data_seed", 0));
    } else {
      spec.dataset.kind = ends_with(dataset, ".bin")
                              ? DatasetSpec::Kind::kVectorsBinary
                              : DatasetSpec::Kind::kVectorsCsv;
      spec.dataset.path = dataset;
    }
    spec.dataset.normalization =
        parse_normalization(config.get_string_or("normalization", "unit_norm"));
  }

  if (spec.objective == ObjectiveFamily::kLogDet) {
    spec.kernel.bandwidth = config.get_double_or("bandwidth", 0.75);
    spec.kernel.sigma = config.get_double_or("sigma", 1.0);
  }

  spec.algorithms = config.get_string_array("algorithms");
  if (spec.algorithms.empty()) {
    throw LoadError(origin + ": algorithms list is empty");
  }
  const auto& known = known_algorithms();
  for (const auto& name : spec.algorithms) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw LoadError(origin + ": unknown algorithm '" + name + "'");
    }
  }

  for (std::int64_t k : config.get_int_array("k")) {
    if (k < 0) throw LoadError(origin + ": k values must be >= 0");
    spec.k_values.push_back(static_cast<std::size_t>(k));
  }
  if (spec.k_values.empty()) throw LoadError(origin + ": k list is empty");

  const bool needs_epsilon =
      std::any_of(spec.algorithms.begin(), spec.algorithms.end(),
                  algorithm_uses_epsilon);
  if (config.has("epsilon")) {
    spec.epsilon_values = config.get_double_array("epsilon");
  }
  if (needs_epsilon && spec.epsilon_values.empty()) {
    throw LoadError(origin + ": epsilon list required by the chosen algorithms");
  }
  for (double e : spec.epsilon_values) {
    if (!(e > 0.0) || !(e < 1.0)) {
      throw LoadError(origin + ": epsilon values must lie in (0, 1)");
    }
  }

  const bool needs_p = std::any_of(spec.algorithms.begin(),
                                   spec.algorithms.end(), algorithm_uses_p);
  if (config.has("p")) spec.p_values = config.get_double_array("p");
  if (needs_p && spec.p_values.empty()) {
    throw LoadError(origin + ": p list required by sample_greedy");
  }
  for (double p : spec.p_values) {
    if (!(p > 0.0) || !(p <= 1.0)) {
      throw LoadError(origin + ": p values must lie in (0, 1]");
    }
  }

  const std::int64_t seeds = config.get_int_or("seeds", 1);
  if (seeds < 1) throw LoadError(origin + ": seeds must be >= 1");
  spec.seeds = static_cast<std::size_t>(seeds);
  spec.seed_base = static_cast<std::uint64_t>(config.get_int_or("seed_base", 1));
  spec.output_path = config.get_string_or("output", "");

  const auto unused = config.unused_keys();
  if (!unused.empty()) {
    std::string joined;
    for (const auto& key : unused) joined += (joined.empty() ? "" : ", ") + key;
    throw LoadError(origin + ": unknown keys: " + joined);
  }
  return spec;
}

std::shared_ptr<const Objective> build_objective(const SweepSpec& spec) {
  std::shared_ptr<const Objective> objective;
  switch (spec.objective) {
    case ObjectiveFamily::kPenaltyReduction: {
      ScenarioTable table;
      if (spec.dataset.kind == DatasetSpec::Kind::kSyntheticScenarios) {
        table = generate_scenarios(spec.dataset.num_sensors,
                                   spec.dataset.num_scenarios,
                                   spec.dataset.data_seed,
                                   spec.dataset.scenario_config);
      } else if (spec.dataset.kind == DatasetSpec::Kind::kScenarioCsv) {
        table = load_scenarios(spec.dataset.path);
      } else {
        throw InvalidInput("penalty reduction needs a scenario dataset");
      }
      objective = std::make_shared<PenaltyReductionObjective>(
          std::make_shared<ScenarioTable>(std::move(table)));
      break;
    }
    case ObjectiveFamily::kFacilityLocation:
    case ObjectiveFamily::kLogDet: {
      VectorDataset data;
      switch (spec.dataset.kind) {
        case DatasetSpec::Kind::kSyntheticMixture:
          data = generate_gaussian_mixture(
              spec.dataset.n, spec.dataset.dim, spec.dataset.components,
              spec.dataset.spread, spec.dataset.data_seed,
              spec.dataset.normalization);
          break;
        case DatasetSpec::Kind::kVectorsCsv:
          data = load_vectors(spec.dataset.path, VectorFormat::kCsv,
                              spec.dataset.normalization);
          break;
        case DatasetSpec::Kind::kVectorsBinary:
          data = load_vectors(spec.dataset.path, VectorFormat::kBinaryF64,
                              spec.dataset.normalization);
          break;
        default:
          throw InvalidInput("vector objective needs a vector dataset");
      }
      if (spec.objective == ObjectiveFamily::kLogDet) {
        objective = std::make_shared<LogDetObjective>(
            build_kernel(data, spec.kernel), spec.kernel.sigma);
      } else {
        objective = std::make_shared<FacilityLocationObjective>(
            make_distance_source(data));
      }
      break;
    }
  }
  for (std::size_t k : spec.k_values) {
    if (k > objective->size()) {
      throw InvalidInput("k=" + std::to_string(k) +
                         " exceeds dataset size n=" +
                         std::to_string(objective->size()));
    }
  }
  return objective;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec) {
  const std::shared_ptr<const Objective> objective = build_objective(spec);
  const std::vector<Cell> cells = enumerate_cells(spec);
  std::vector<RunRecord> records(cells.size());

  const auto run_one = [&](std::size_t index) {
    const Cell& cell = cells[index];
    SolverConfig config;
    config.k = cell.k;
    config.seed = cell.seed;
    if (cell.epsilon) config.epsilon = *cell.epsilon;
    if (cell.p) config.p = *cell.p;

    const auto start = std::chrono::steady_clock::now();
    const Solution solution = run_algorithm(cell.algorithm, *objective, config);
    const auto stop = std::chrono::steady_clock::now();

    RunRecord record;
    record.algorithm = cell.algorithm;
    record.dataset = spec.dataset.name;
    record.n = objective->size();
    record.k = cell.k;
    record.epsilon = cell.epsilon;
    record.p = cell.p;
    record.seed = cell.seed;
    record.final_utility = solution.final_utility;
    record.total_cost = solution.total_cost;
    record.reporting_evals = solution.reporting_evals;
    record.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
            .count();
    record.warning = solution.warning;
    records[index] = std::move(record);
  };

  const std::size_t threads = std::min(bench_thread_count(), cells.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& worker : pool) worker.join();
  }
  return records;
}

void run_sweep_to_file(const SweepSpec& spec) {
  if (spec.output_path.empty()) {
    throw InvalidInput("sweep spec has no output path");
  }
  const std::vector<RunRecord> records = run_sweep(spec);
  write_records_csv(records, spec.output_path);
}

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& path, bool with_summary) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write records file: " + path);
  out << kCsvHeader << "\n";

  const auto flush_summary = [&](const std::vector<const RunRecord*>& cell) {
    if (!with_summary || cell.empty()) return;
    CellStats stats;
    for (const RunRecord* r : cell) {
      stats.utilities.push_back(r->final_utility);
      stats.costs.push_back(static_cast<double>(r->total_cost));
      stats.reporting.push_back(static_cast<double>(r->reporting_evals));
      stats.wall.push_back(static_cast<double>(r->wall_time_ms));
    }
    const std::string prefix = cell_prefix(*cell.front());
    out << "mean," << prefix << ",," << fmt_double(mean_of(stats.utilities))
        << "," << fmt_double(mean_of(stats.costs)) << ","
        << fmt_double(mean_of(stats.reporting)) << ","
        << fmt_double(mean_of(stats.wall)) << ",\n";
    out << "std," << prefix << ",," << fmt_double(std_of(stats.utilities))
        << "," << fmt_double(std_of(stats.costs)) << ","
        << fmt_double(std_of(stats.reporting)) << ","
        << fmt_double(std_of(stats.wall)) << ",\n";
  };

  std::vector<const RunRecord*> cell;
  for (const RunRecord& record : records) {
    if (!cell.empty() && key_of(*cell.front()) != key_of(record)) {
      flush_summary(cell);
      cell.clear();
    }
    out << "run," << cell_prefix(record) << "," << record.seed << ","
        << fmt_double(record.final_utility) << "," << record.total_cost << ","
        << record.reporting_evals << "," << record.wall_time_ms << ","
        << record.warning.value_or("") << "\n";
    cell.push_back(&record);
  }
  flush_summary(cell);
}

std::vector<RunRecord> load_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open records file: " + path);
  std::string line;
  if (!std::getline(in, line) || split_line(line) != split_line(kCsvHeader)) {
    throw LoadError(path + ": unexpected records header");
  }
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 13) {
      throw LoadError(path + ":" + std::to_string(line_no) +
                      ": expected 13 cells");
    }
    if (cells[0] != "run") continue;  // summary rows are derived data
    const std::string where = path + ":" + std::to_string(line_no);
    RunRecord record;
    record.algorithm = cells[1];
    record.dataset = cells[2];
    record.n = static_cast<std::size_t>(parse_double_field(cells[3], where));
    record.k = static_cast<std::size_t>(parse_double_field(cells[4], where));
    if (!cells[5].empty()) record.epsilon = parse_double_field(cells[5], where);
    if (!cells[6].empty()) record.p = parse_double_field(cells[6], where);
    record.seed =
        static_cast<std::uint64_t>(parse_double_field(cells[7], where));
    record.final_utility = parse_double_field(cells[8], where);
    record.total_cost =
        static_cast<std::uint64_t>(parse_double_field(cells[9], where));
    record.reporting_evals =
        static_cast<std::uint64_t>(parse_double_field(cells[10], where));
    record.wall_time_ms =
        static_cast<std::int64_t>(parse_double_field(cells[11], where));
    if (!cells[12].empty()) record.warning = cells[12];
    records.push_back(std::move(record));
  }
  return records;
}

void emit_curve(const std::vector<RunRecord>& records, CurveAxis axis,
                const std::string& path) {
  if (records.empty()) {
    throw InvalidInput("cannot emit a curve from an empty record set");
  }
  std::map<CellKey, CellStats> groups;
  std::map<CellKey, const RunRecord*> sample;
  for (const RunRecord& record : records) {
    auto& stats = groups[key_of(record)];
    stats.utilities.push_back(record.final_utility);
    stats.costs.push_back(static_cast<double>(record.total_cost));
    sample.emplace(key_of(record), &record);
  }

  std::ofstream out(path);
  if (!out) throw LoadError("cannot write curve file: " + path);
  out << "algorithm,dataset,k,epsilon,p,x,utility_mean,utility_std,cost_mean,"
         "cost_std,runs\n";
  for (const auto& [key, stats] : groups) {
    const RunRecord& r = *sample.at(key);
    const double x = axis == CurveAxis::kK ? static_cast<double>(r.k)
                                           : mean_of(stats.costs);
    out << r.algorithm << "," << r.dataset << "," << r.k << ","
        << fmt_optional(r.epsilon) << "," << fmt_optional(r.p) << ","
        << fmt_double(x) << "," << fmt_double(mean_of(stats.utilities)) << ","
        << fmt_double(std_of(stats.utilities)) << ","
        << fmt_double(mean_of(stats.costs)) << ","
        << fmt_double(std_of(stats.costs)) << "," << stats.utilities.size()
        << "\n";
  }
}

MatchResult match_p_to_cost(const Objective& objective, std::size_t k,
                            double epsilon, std::size_t seeds,
                            std::uint64_t seed_base) {
  if (k == 0) throw InvalidInput("cannot match costs at k = 0");
  if (seeds == 0) throw InvalidInput("cost matching needs at least one seed");

  const auto mean_cost = [&](const std::string& algorithm, double p) {
    double total = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      SolverConfig config;
      config.k = k;
      config.epsilon = epsilon;
      config.p = p;
      config.seed = seed_base + s;
      total += static_cast<double>(
          run_algorithm(algorithm, objective, config).total_cost);
    }
    return total / static_cast<double>(seeds);
  };

  MatchResult result;
  result.target_cost = mean_cost("stochastic_greedy_lazy", 1.0);

  double best_p = 1.0;
  double best_cost = mean_cost("sample_greedy", 1.0);
  if (best_cost > result.target_cost) {
    double lo = 0.0;  // empty subsample: cost 0
    double hi = 1.0;
    for (int iter = 0; iter < 40; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= 0.0 || mid >= 1.0) break;
      const double cost = mean_cost("sample_greedy", mid);
      if (std::abs(cost - result.target_cost) <
          std::abs(best_cost - result.target_cost)) {
        best_cost = cost;
        best_p = mid;
      }
      if (cost < result.target_cost) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  result.p = best_p;
  result.achieved_cost = best_cost;
  result.matched = std::abs(best_cost - result.target_cost) <=
                   0.05 * std::max(result.target_cost, 1.0);
  return result;
}

}  // namespace submod
