#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pursuit/greedy.hpp"

namespace pursuit::bench {

enum class SweepKind { Measurements, Sparsity };

/// One Monte-Carlo sweep: a grid of (algorithm, swept value) cells, each run
/// for `trials` independent draws of dictionary and signal.  Every trial's
/// seed derives from (master_seed, cell index, trial index), so results do
/// not depend on the thread count or schedule.
struct ExperimentSpec {
  int n = 256;
  SweepKind sweep = SweepKind::Measurements;
  std::vector<int> values;  // measurement counts, or sparsity levels
  int fixed_k = 10;         // sparsity when sweeping measurements
  int fixed_m = 128;        // measurements when sweeping sparsity
  int trials = 200;
  double dictionary_correlation = 0.0;  // T; 0 = uncorrelated Gaussian
  std::vector<greedy::GreedyConfig> algorithms;
  std::uint64_t master_seed = 1;
  double epsilon = 1e-6;
  int threads = 1;
  // Wall-clock timing is inherently nondeterministic; switch it off to make
  // emitted files byte-identical across reruns (the timing column prints 0).
  bool measure_runtime = true;

  void validate() const;
};

struct ExperimentRecord {
  greedy::GreedyConfig config;  // with the cell's K filled in
  int m = 0;
  int n = 0;
  int K = 0;
  double dictionary_correlation = 0.0;
  int trials = 0;
  int successes = 0;
  double recovery_probability = 0.0;
  double mean_iterations = 0.0;
  double mean_runtime_us_per_iteration = 0.0;
  std::map<std::string, int> failures_by_cause;
};

/// Runs the full grid.  Per-trial errors are tallied in failures_by_cause
/// and never abort the sweep.
std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec);

/// Literature operation-count models.  Only omp and gomp have closed forms;
/// `s` is the iteration count actually used by gomp.  Throws NotModeled for
/// the other algorithms.
std::int64_t flop_estimate(greedy::Algorithm algorithm, std::int64_t K,
                           std::int64_t m, std::int64_t n, std::int64_t N,
                           std::int64_t s);

/// CSV with the fixed header
/// algorithm,m,n,K,N,L,T,trials,successes,recovery_probability,mean_iterations,mean_runtime_us_per_iter
std::string to_csv(const std::vector<ExperimentRecord>& records);

void emit_csv(const std::vector<ExperimentRecord>& records,
              const std::string& path);
void emit_json(const std::vector<ExperimentRecord>& records,
               const std::string& path);

}  // namespace pursuit::bench
