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
// Benchmark harness: sweeps (algorithm, k, epsilon, p, seed) cells over a
// dataset/objective described by a flat key=value spec file, emits one CSV
// row per run plus per-cell mean/std summary rows, aggregates
// utility-versus-cost curves, and matches sample-greedy's keep probability
// to a stochastic-greedy cost target.
//
// Runs are deterministic: seeds are enumerated from seed_base, cells execute
// in spec order (optionally in parallel, gathered back deterministically),
// and repeated sweeps produce byte-identical CSVs apart from the
// wall_time_ms column.

#ifndef SUBMOD_BENCH_HPP_
#define SUBMOD_BENCH_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "submod/core.hpp"
#include "submod/dataio.hpp"
#include "submod/solvers.hpp"

namespace submod {

// One (algorithm, config, seed) result row.
struct RunRecord {
  std::string algorithm;
  std::string dataset;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> epsilon;  // only for stochastic/threshold variants
  std::optional<double> p;        // only for sample_greedy
  std::uint64_t seed = 0;
  double final_utility = 0.0;
  std::uint64_t total_cost = 0;
  std::uint64_t reporting_evals = 0;
  std::int64_t wall_time_ms = 0;
  std::optional<std::string> warning;
};

struct DatasetSpec {
  enum class Kind {
    kVectorsCsv,
    kVectorsBinary,
    kSyntheticMixture,
    kScenarioCsv,
    kSyntheticScenarios,
  };
  Kind kind = Kind::kSyntheticMixture;
  std::string name;  // display name for record rows
  std::string path;  // file-backed kinds
  Normalization normalization = Normalization::kPerVectorUnitNorm;
  // Synthetic mixture parameters.
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t components = 0;
  double spread = 0.1;
  std::uint64_t data_seed = 0;
  // Synthetic scenario parameters.
  std::size_t num_sensors = 0;
  std::size_t num_scenarios = 0;
  ScenarioGenConfig scenario_config;
};

enum class ObjectiveFamily { kFacilityLocation, kLogDet, kPenaltyReduction };

struct SweepSpec {
  DatasetSpec dataset;
  ObjectiveFamily objective = ObjectiveFamily::kFacilityLocation;
  KernelParams kernel;  // log-det family
  std::vector<std::string> algorithms;
  std::vector<std::size_t> k_values;
  std::vector<double> epsilon_values;
  std::vector<double> p_values;
  std::size_t seeds = 1;
  std::uint64_t seed_base = 1;
  std::string output_path;
};

// Algorithm registry shared by the sweep and the CLI.
const std::vector<std::string>& known_algorithms();
bool algorithm_uses_epsilon(const std::string& name);
bool algorithm_uses_p(const std::string& name);
Solution run_algorithm(const std::string& name, const Objective& objective,
                       const SolverConfig& config);

SweepSpec parse_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec_string(const std::string& text,
                                  const std::string& origin = "<string>");

// Materializes the spec's dataset and objective. Also validates that every
// k fits the ground set, so a bad spec fails before any run starts.
std::shared_ptr<const Objective> build_objective(const SweepSpec& spec);

// Runs every cell x seed. Thread count comes from SUBMOD_BENCH_THREADS
// (default 1); results are identical either way.
std::vector<RunRecord> run_sweep(const SweepSpec& spec);

// Validates, runs, and writes spec.output_path. No partial files: the CSV
// is written only after every run has finished.
void run_sweep_to_file(const SweepSpec& spec);

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& path, bool with_summary = true);
// Reads back run rows (summary rows are skipped).
std::vector<RunRecord> load_records_csv(const std::string& path);

enum class CurveAxis { kK, kCost };

// Mean +/- std of final utility per (algorithm, dataset, k, epsilon, p)
// cell against the chosen x axis, sorted deterministically.
void emit_curve(const std::vector<RunRecord>& records, CurveAxis axis,
                const std::string& path);

struct MatchResult {
  double p = 1.0;
  double target_cost = 0.0;    // stochastic-greedy mean cost at (k, epsilon)
  double achieved_cost = 0.0;  // sample-greedy mean cost at the returned p
  bool matched = false;        // within 5% of the target
};

// Binary-searches p in (0, 1] until sample-greedy's mean cost over the seeds
// is within 5% of the lazy-accelerated stochastic-greedy's. When the target
// is unattainable the closest p is returned with matched = false.
MatchResult match_p_to_cost(const Objective& objective, std::size_t k,
                            double epsilon, std::size_t seeds,
                            std::uint64_t seed_base);

}  // namespace submod

#endif  // SUBMOD_BENCH_HPP_
