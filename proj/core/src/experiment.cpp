#include "pursuit/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "pursuit/dictionary.hpp"
#include "pursuit/error.hpp"
#include "pursuit/json.hpp"
#include "pursuit/rng.hpp"
#include "pursuit/signals.hpp"

namespace pursuit::bench {

namespace {

constexpr int kWarmupTrials = 5;

struct TrialOutcome {
  bool completed = false;
  bool success = false;
  int iterations = 0;
  double us_per_iteration = 0.0;
  bool timed = false;
  std::string error_kind;
};

TrialOutcome run_trial(const ExperimentSpec& spec, int m, int K,
                       greedy::GreedyConfig config, std::uint64_t cell_index,
                       int trial) {
  TrialOutcome outcome;
  const std::uint64_t trial_seed = rng::derive_seed(
      spec.master_seed, cell_index, static_cast<std::uint64_t>(trial));
  try {
    dict::DictionarySpec dictionary;
    dictionary.m = m;
    dictionary.n = spec.n;
    dictionary.kind = spec.dictionary_correlation > 0.0 ? dict::Kind::Correlated
                                                        : dict::Kind::Gaussian;
    dictionary.correlation = spec.dictionary_correlation;
    dictionary.seed = rng::derive_seed(trial_seed, 10);
    const SensingMatrix A = dict::generate(dictionary);

    const auto x = signals::random_sparse_signal(
        spec.n, K, rng::derive_seed(trial_seed, 11));
    const Eigen::VectorXd y = A.submatrix(x.support) * x.values;

    const auto start = std::chrono::steady_clock::now();
    const auto result = greedy::run(A, y, config, x.support);
    const auto stop = std::chrono::steady_clock::now();

    outcome.completed = true;
    outcome.success = result.exact_support_match.value_or(false);
    outcome.iterations = static_cast<int>(result.iterations.size());
    if (spec.measure_runtime && trial >= kWarmupTrials) {
      const double us =
          std::chrono::duration<double, std::micro>(stop - start).count();
      outcome.us_per_iteration = us / std::max(outcome.iterations, 1);
      outcome.timed = true;
    }
  } catch (const Error& e) {
    outcome.error_kind = e.kind();
  } catch (const std::exception&) {
    outcome.error_kind = "Unexpected";
  }
  return outcome;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (n < 1) throw InvalidSpec("ExperimentSpec: n must be >= 1");
  if (trials < 1) throw InvalidSpec("ExperimentSpec: trials must be >= 1");
  if (values.empty()) throw InvalidSpec("ExperimentSpec: empty sweep values");
  for (int v : values) {
    if (v < 1) throw InvalidSpec("ExperimentSpec: sweep values must be >= 1");
  }
  if (sweep == SweepKind::Measurements && fixed_k < 1) {
    throw InvalidSpec("ExperimentSpec: fixed K must be >= 1");
  }
  if (sweep == SweepKind::Sparsity && fixed_m < 1) {
    throw InvalidSpec("ExperimentSpec: fixed m must be >= 1");
  }
  if (dictionary_correlation < 0.0) {
    throw InvalidSpec("ExperimentSpec: T must be >= 0");
  }
  if (algorithms.empty()) throw InvalidSpec("ExperimentSpec: no algorithms");
  if (epsilon < 0.0) throw InvalidSpec("ExperimentSpec: epsilon must be >= 0");
  if (threads < 1) throw InvalidSpec("ExperimentSpec: threads must be >= 1");
}

std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ExperimentRecord> records;
  std::uint64_t cell_index = 0;
  for (const auto& algorithm : spec.algorithms) {
    for (int value : spec.values) {
      const int m = spec.sweep == SweepKind::Measurements ? value : spec.fixed_m;
      const int K = spec.sweep == SweepKind::Sparsity ? value : spec.fixed_k;

      greedy::GreedyConfig config = algorithm;
      config.K = K;
      config.epsilon = spec.epsilon;

      std::vector<TrialOutcome> outcomes(
          static_cast<std::size_t>(spec.trials));
      const int workers = std::min(spec.threads, spec.trials);
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int t = w; t < spec.trials; t += workers) {
            outcomes[static_cast<std::size_t>(t)] =
                run_trial(spec, m, K, config, cell_index, t);
          }
        });
      }
      for (auto& worker : pool) worker.join();

      ExperimentRecord record;
      record.config = config;
      record.m = m;
      record.n = spec.n;
      record.K = K;
      record.dictionary_correlation = spec.dictionary_correlation;
      record.trials = spec.trials;
      std::int64_t iteration_sum = 0;
      int completed = 0, timed = 0;
      double time_sum = 0.0;
      // Trial-index order keeps the aggregation schedule-independent.
      for (const auto& outcome : outcomes) {
        if (!outcome.completed) {
          ++record.failures_by_cause[outcome.error_kind];
          continue;
        }
        ++completed;
        record.successes += outcome.success ? 1 : 0;
        iteration_sum += outcome.iterations;
        if (outcome.timed) {
          ++timed;
          time_sum += outcome.us_per_iteration;
        }
      }
      record.recovery_probability =
          static_cast<double>(record.successes) / spec.trials;
      record.mean_iterations =
          completed > 0 ? static_cast<double>(iteration_sum) / completed : 0.0;
      record.mean_runtime_us_per_iteration = timed > 0 ? time_sum / timed : 0.0;

      std::fprintf(stderr, "sweep: %s m=%d K=%d T=%g p=%.3f\n",
                   config.name().c_str(), m, K, spec.dictionary_correlation,
                   record.recovery_probability);
      records.push_back(std::move(record));
      ++cell_index;
    }
  }
  return records;
}

std::int64_t flop_estimate(greedy::Algorithm algorithm, std::int64_t K,
                           std::int64_t m, std::int64_t n, std::int64_t N,
                           std::int64_t s) {
  switch (algorithm) {
    case greedy::Algorithm::Omp:
      if (K < 1 || m < 1 || n < 1) throw InvalidParams("flop_estimate: bad params");
      return 2 * K * m * n + 3 * K * K * m;
    case greedy::Algorithm::Gomp:
      if (s < 1 || m < 1 || n < 1 || N < 1) {
        throw InvalidParams("flop_estimate: bad params");
      }
      return 2 * s * m * n + (2 * N * N + N) * s * s * m;
    default:
      throw NotModeled("flop_estimate: no closed form for " +
                       greedy::algorithm_name(algorithm));
  }
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out =
      "algorithm,m,n,K,N,L,T,trials,successes,recovery_probability,"
      "mean_iterations,mean_runtime_us_per_iter\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line), "%s,%d,%d,%d,%d,%d,%g,%d,%d,%.6f,%.6f,%.3f\n",
                  r.config.name().c_str(), r.m, r.n, r.K,
                  r.config.preselects() ? r.config.N : 0,
                  r.config.identifies() ? r.config.L : 0,
                  r.dictionary_correlation, r.trials, r.successes,
                  r.recovery_probability, r.mean_iterations,
                  r.mean_runtime_us_per_iteration);
    out += line;
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  stream << content;
  if (!stream) throw IoError("write failed: " + path);
}

}  // namespace

void emit_csv(const std::vector<ExperimentRecord>& records,
              const std::string& path) {
  write_file(path, to_csv(records));
}

void emit_json(const std::vector<ExperimentRecord>& records,
               const std::string& path) {
  write_file(path, to_json(records).dump(2) + "\n");
}

}  // namespace pursuit::bench
