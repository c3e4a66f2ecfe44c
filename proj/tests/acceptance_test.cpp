// Acceptance suite: one test per criterion, each ending with a visible
// pass/fail line.  Tolerances and thresholds are pinned in the assertions.

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "pursuit/analysis.hpp"
#include "pursuit/error.hpp"
#include "pursuit/experiment.hpp"
#include "pursuit/greedy.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/rng.hpp"
#include "pursuit/signals.hpp"

using namespace pursuit;

namespace {

constexpr double kObsSlack = 1e-10;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, double elapsed_s, const std::string& description) {
  std::cout << "[criterion " << criterion << "] "
            << (::testing::Test::HasFailure() ? "FAIL" : "PASS") << " ("
            << elapsed_s << " s): " << description << std::endl;
}

struct ObsTally {
  long checked = 0;
  long violations = 0;
};

// First-iteration energy comparisons: the preselected shortlist and the first
// identified set must carry at least the average per-index energy of the true
// support.
void check_first_iteration_energies(const SensingMatrix& A,
                                    const signals::SparseSignal& x,
                                    const Eigen::VectorXd& y,
                                    const greedy::RecoveryResult& result,
                                    ObsTally& tally) {
  if (result.iterations.empty()) return;
  const auto& first = result.iterations.front();
  const double truth_energy = (A.submatrix(x.support).transpose() * y).norm();
  const int K = x.sparsity();

  if (!first.preselected.empty()) {
    const int N = first.preselected.size();
    const double shortlist_energy =
        (A.submatrix(first.preselected).transpose() * y).norm();
    ++tally.checked;
    if (N <= K) {
      if (shortlist_energy / std::sqrt(N) <
          truth_energy / std::sqrt(K) - kObsSlack) {
        ++tally.violations;
      }
    } else if (shortlist_energy < truth_energy - kObsSlack) {
      ++tally.violations;
    }
  }
  {
    const int L = first.identified.size();
    const double identified_energy =
        (A.submatrix(first.identified).transpose() * y).norm();
    ++tally.checked;
    if (identified_energy / std::sqrt(L) <
        truth_energy / std::sqrt(K) - kObsSlack) {
      ++tally.violations;
    }
  }
}

void assert_same_trajectory(const greedy::RecoveryResult& a,
                            const greedy::RecoveryResult& b) {
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    EXPECT_EQ(a.iterations[k].identified, b.iterations[k].identified);
    EXPECT_EQ(a.iterations[k].support, b.iterations[k].support);
  }
  EXPECT_EQ(a.support_hat, b.support_hat);
}

// Criterion 1 instance stream: specialization equivalences at
// m=64, n=128, K=8 across 100 seeds.
void run_specialization_instances(ObsTally& tally) {
  const int m = 64, n = 128, K = 8;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto A = oracle::gaussian_matrix(m, n, 10000 + s);
    const auto x = signals::random_sparse_signal(n, K, 20000 + s);
    const Eigen::VectorXd y = A.submatrix(x.support) * x.values;

    const auto omp = greedy::run(A, y, greedy::GreedyConfig::omp(K));
    const auto gomp1 = greedy::run(A, y, greedy::GreedyConfig::gomp(K, 1));
    assert_same_trajectory(omp, gomp1);

    const auto ols = greedy::run(A, y, greedy::GreedyConfig::ols(K));
    const auto mols1 = greedy::run(A, y, greedy::GreedyConfig::mols(K, 1));
    assert_same_trajectory(ols, mols1);

    const auto mols3 = greedy::run(A, y, greedy::GreedyConfig::mols(K, 3));
    const auto m2all = greedy::run(A, y, greedy::GreedyConfig::m2ols(K, n, 3));
    assert_same_trajectory(mols3, m2all);

    check_first_iteration_energies(A, x, y, omp, tally);
    check_first_iteration_energies(A, x, y, ols, tally);
    check_first_iteration_energies(A, x, y, mols3, tally);
    check_first_iteration_energies(A, x, y, m2all, tally);
  }
}

// Criterion 2 instance stream: ratio-based identification vs the brute-force
// subset minimizer at m=10, n=20 across 100 seeds.
void run_identification_instances(ObsTally& tally) {
  const int m = 10, n = 20;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto A = oracle::gaussian_matrix(m, n, 30000 + s);
    const auto x = signals::random_sparse_signal(n, 3, 40000 + s);
    const Eigen::VectorXd y = A.submatrix(x.support) * x.values;

    rng::Stream stream(50000 + s);
    const int support_size = 1 + static_cast<int>(stream.below(3));
    const IndexSet support{rng::sample_indices(n, support_size, stream)};
    std::vector<int> pool = support.complement(n).indices();
    const auto picks = rng::sample_indices(static_cast<int>(pool.size()), 6, stream);
    std::vector<int> candidate_list;
    for (int p : picks) candidate_list.push_back(pool[static_cast<std::size_t>(p)]);
    const IndexSet candidates{candidate_list};
    const int L = 1 + static_cast<int>(stream.below(3));

    const Eigen::VectorXd r = linalg::orthogonal_complement_apply(A, support, y);
    const auto got = greedy::identify(A, y, r, support, candidates, L);

    const auto objective = [&](const std::vector<int>& subset) {
      double total = 0.0;
      for (int candidate : subset) {
        std::vector<int> joint = support.indices();
        joint.push_back(candidate);
        total += (oracle::perp_projector(A.submatrix(IndexSet{joint})) * y)
                     .squaredNorm();
      }
      return total;
    };
    double best = std::numeric_limits<double>::infinity();
    for (const auto& positions : oracle::all_subsets(candidates.size(), L)) {
      std::vector<int> subset;
      for (int p : positions) subset.push_back(candidates[p]);
      best = std::min(best, objective(subset));
    }
    EXPECT_NEAR(objective(got.indices()), best, 1e-10);

    const auto run_result =
        greedy::run(A, y, greedy::GreedyConfig::m2ols(3, 6, 2), x.support);
    check_first_iteration_energies(A, x, y, run_result, tally);
  }
}

TEST(Acceptance, C01SpecializationEquivalence) {
  Stopwatch timer;
  ObsTally tally;
  run_specialization_instances(tally);
  EXPECT_EQ(tally.violations, 0);
  EXPECT_LT(timer.seconds(), 30.0);
  report(1, timer.seconds(),
         "gomp(1)=omp, mols(1)=ols, m2ols(all,L)=mols(L) on 100 instances");
}

TEST(Acceptance, C02IdentificationOracleEquivalence) {
  Stopwatch timer;
  ObsTally tally;
  run_identification_instances(tally);
  EXPECT_EQ(tally.violations, 0);
  EXPECT_LT(timer.seconds(), 10.0);
  report(2, timer.seconds(),
         "ratio identification attains the brute-force minimum on 100 instances");
}

TEST(Acceptance, C03TopKSquareVersusValueSums) {
  Stopwatch timer;
  rng::Stream stream(61000);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(stream.below(12));
    const int K = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(n)));
    std::vector<double> values(static_cast<std::size_t>(n));
    for (auto& v : values) {
      do {
        v = stream.uniform(0.0, 10.0);
      } while (v == 0.0);
    }
    const auto top_by = [&](auto key) {
      std::vector<int> order(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = key(values[static_cast<std::size_t>(a)]);
        const double kb = key(values[static_cast<std::size_t>(b)]);
        if (ka != kb) return ka > kb;
        return a < b;
      });
      order.resize(static_cast<std::size_t>(K));
      std::sort(order.begin(), order.end());
      return order;
    };
    const auto by_value = top_by([](double v) { return v; });
    const auto by_square = top_by([](double v) { return v * v; });
    double sum_value = 0.0, sum_square_set = 0.0;
    for (int i : by_value) sum_value += values[static_cast<std::size_t>(i)];
    for (int i : by_square) sum_square_set += values[static_cast<std::size_t>(i)];
    ASSERT_EQ(sum_value, sum_square_set);  // exact
  }
  EXPECT_LT(timer.seconds(), 1.0);
  report(3, timer.seconds(),
         "top-K-by-value and top-K-by-square sets have exactly equal sums");
}

TEST(Acceptance, C04IsometryLemmaSuite) {
  Stopwatch timer;
  std::int64_t checks = 0, violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto A = oracle::gaussian_matrix(6, 10, 70000 + s);
    const auto report_one =
        analysis::check_lemma_bounds(A, 20, 71000 + s, /*max_order=*/4);
    checks += report_one.checks;
    violations += report_one.violations;
    worst_slack = std::min(worst_slack, report_one.worst_slack);
  }
  EXPECT_GT(checks, 0);
  EXPECT_EQ(violations, 0);
  EXPECT_LT(timer.seconds(), 60.0);
  std::cout << "lemma suite: " << checks << " checks, worst slack "
            << worst_slack << std::endl;
  report(4, timer.seconds(),
         "monotonicity, cross-correlation and sandwich bounds on 50 dictionaries");
}

analysis::TheoremCheckConfig theorem_acceptance_config() {
  analysis::TheoremCheckConfig config;  // m=128, n=14, K=2, L=1, N in {1,2}
  config.needed = 25;
  config.seed = 0xACCE55;
  return config;
}

TEST(Acceptance, C05NoiselessRecoveryGuarantee) {
  Stopwatch timer;
  const auto config = theorem_acceptance_config();
  // Direct substitution at K=2, L=1.
  EXPECT_NEAR(analysis::recovery_bound(2, 1, 1).bound, 0.3660, 5e-5);
  const auto report_data = analysis::check_theorem1(config);
  EXPECT_EQ(report_data.eligible, 25);
  EXPECT_EQ(report_data.recovered, 25);
  EXPECT_EQ(report_data.counterexamples(), 0);
  for (const auto& instance : report_data.instances) {
    EXPECT_LT(instance.delta,
              analysis::recovery_bound(config.K, instance.N, config.L).bound);
  }
  EXPECT_LT(timer.seconds(), 300.0);
  report(5, timer.seconds(),
         "25/25 eligible tiny instances recovered exactly (noiseless)");
}

TEST(Acceptance, C06NoisyRecoveryGuarantee) {
  Stopwatch timer;
  auto config = theorem_acceptance_config();
  config.snr_factor = 2.0;
  const auto report_data = analysis::check_theorem2(config);
  EXPECT_EQ(report_data.eligible, 25);
  EXPECT_EQ(report_data.recovered, 25);
  EXPECT_EQ(report_data.counterexamples(), 0);
  EXPECT_LT(timer.seconds(), 300.0);
  report(6, timer.seconds(),
         "25/25 instances recovered at twice the snr threshold");
}

TEST(Acceptance, C07FirstIterationEnergyBounds) {
  Stopwatch timer;
  ObsTally tally;
  run_specialization_instances(tally);
  run_identification_instances(tally);
  EXPECT_GT(tally.checked, 0);
  EXPECT_EQ(tally.violations, 0);
  std::cout << "energy bounds: " << tally.checked << " comparisons, "
            << tally.violations << " violations" << std::endl;
  report(7, timer.seconds(),
         "shortlist/identified energy bounds hold on every criterion 1-2 trial");
}

bench::ExperimentSpec desk_scale_spec() {
  bench::ExperimentSpec spec;
  spec.n = 256;
  spec.fixed_k = 10;
  spec.trials = 200;
  spec.master_seed = 0xDE5C;
  spec.measure_runtime = false;
  spec.threads = 1;
  return spec;
}

TEST(Acceptance, C08DeskScaleTrends) {
  Stopwatch timer;

  // (a) recovery probability nondecreasing in m for every algorithm, T = 0
  auto spec_a = desk_scale_spec();
  spec_a.values = {40, 50, 60, 70, 80, 90, 100, 110, 120, 130};
  spec_a.algorithms = {
      greedy::GreedyConfig::omp(10), greedy::GreedyConfig::ols(10),
      greedy::GreedyConfig::gomp(10, 3), greedy::GreedyConfig::mols(10, 3),
      greedy::GreedyConfig::m2ols(10, 48, 3)};
  const auto records_a = bench::run_experiment(spec_a);
  for (std::size_t i = 0; i < spec_a.algorithms.size(); ++i) {
    for (std::size_t j = 1; j < spec_a.values.size(); ++j) {
      const auto& prev = records_a[i * spec_a.values.size() + j - 1];
      const auto& curr = records_a[i * spec_a.values.size() + j];
      EXPECT_GE(curr.recovery_probability,
                prev.recovery_probability - 0.05)
          << prev.config.name() << " m=" << curr.m;
    }
  }

  // (b) correlated dictionaries: m2ols at least matches gomp across the
  // transition band in at least 80% of cells
  auto spec_b = desk_scale_spec();
  spec_b.values = {60, 70, 80, 90, 100, 110};
  spec_b.dictionary_correlation = 8.0;
  spec_b.algorithms = {greedy::GreedyConfig::gomp(10, 3),
                       greedy::GreedyConfig::m2ols(10, 48, 3)};
  const auto records_b = bench::run_experiment(spec_b);
  int favorable = 0;
  for (std::size_t j = 0; j < spec_b.values.size(); ++j) {
    const double gomp_p = records_b[j].recovery_probability;
    const double m2ols_p =
        records_b[spec_b.values.size() + j].recovery_probability;
    if (m2ols_p >= gomp_p) ++favorable;
  }
  EXPECT_GE(favorable, static_cast<int>(0.8 * spec_b.values.size()));

  // (c) per-iteration runtime: m2ols under ols at K in {10, 20, 30}, m = 128
  auto spec_c = desk_scale_spec();
  spec_c.sweep = bench::SweepKind::Sparsity;
  spec_c.values = {10, 20, 30};
  spec_c.fixed_m = 128;
  spec_c.measure_runtime = true;
  spec_c.algorithms = {greedy::GreedyConfig::ols(1),
                       greedy::GreedyConfig::m2ols(1, 48, 3)};
  const auto records_c = bench::run_experiment(spec_c);
  for (std::size_t j = 0; j < spec_c.values.size(); ++j) {
    const double ols_time = records_c[j].mean_runtime_us_per_iteration;
    const double m2ols_time =
        records_c[spec_c.values.size() + j].mean_runtime_us_per_iteration;
    EXPECT_LT(m2ols_time, ols_time) << "K=" << spec_c.values[j];
    std::cout << "runtime per iteration at K=" << spec_c.values[j]
              << ": ols " << ols_time << " us, m2ols " << m2ols_time << " us"
              << std::endl;
  }

  EXPECT_LT(timer.seconds(), 1200.0);
  report(8, timer.seconds(),
         "monotone m-sweep, correlated-dictionary margin, runtime per iteration");
}

TEST(Acceptance, C09FlopFormulas) {
  Stopwatch timer;
  EXPECT_EQ(bench::flop_estimate(greedy::Algorithm::Omp, 10, 128, 256, 0, 0),
            693760);

  // Independent arithmetic: factored evaluation in long double.
  const auto gomp_reference = [](long double s, long double N, long double m,
                                 long double n) {
    return static_cast<std::int64_t>(s * m * (2.0L * n + (2.0L * N * N + N) * s));
  };
  const std::vector<std::array<std::int64_t, 4>> points = {
      {1, 1, 1, 1}, {4, 3, 128, 256}, {10, 48, 128, 256}};
  for (const auto& [s, N, m, n] : points) {
    EXPECT_EQ(bench::flop_estimate(greedy::Algorithm::Gomp, 0, m, n, N, s),
              gomp_reference(static_cast<long double>(s),
                             static_cast<long double>(N),
                             static_cast<long double>(m),
                             static_cast<long double>(n)));
  }
  report(9, timer.seconds(), "operation-count closed forms match references");
}

TEST(Acceptance, C10DeterminismAcrossThreadCounts) {
  Stopwatch timer;
  bench::ExperimentSpec spec;
  spec.n = 64;
  spec.values = {24, 32};
  spec.fixed_k = 4;
  spec.trials = 50;
  spec.algorithms = {greedy::GreedyConfig::omp(4),
                     greedy::GreedyConfig::m2ols(4, 12, 3)};
  spec.master_seed = 77;
  spec.measure_runtime = false;

  std::map<int, std::string> outputs;
  for (int threads : {1, 4, 8}) {
    spec.threads = threads;
    outputs[threads] = bench::to_csv(bench::run_experiment(spec));
  }
  EXPECT_EQ(outputs[1], outputs[4]);
  EXPECT_EQ(outputs[1], outputs[8]);
  report(10, timer.seconds(),
         "byte-identical sweep CSV under 1, 4 and 8 worker threads");
}

}  // namespace
