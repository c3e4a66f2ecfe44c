#include "pursuit/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pursuit/dictionary.hpp"
#include "pursuit/error.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/rng.hpp"

namespace pursuit::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t binomial_capped(int n, int k, std::int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return std::min<std::int64_t>(result, cap + 1);
}

double subset_delta(const Eigen::MatrixXd& gram, const std::vector<int>& subset) {
  const int k = static_cast<int>(subset.size());
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      g(a, b) = gram(subset[static_cast<std::size_t>(a)],
                     subset[static_cast<std::size_t>(b)]);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      g, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(ev(k - 1) - 1.0, 1.0 - ev(0));
}

// Calls fn for every k-subset of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn fn) {
  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(subset);
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

RicEstimate exact_ric(const SensingMatrix& A, int k, std::int64_t budget) {
  if (k < 1) throw InvalidParams("exact_ric: order must be >= 1");
  if (k > A.rows()) {
    throw InvalidParams("exact_ric: order exceeds measurement count");
  }
  if (k > A.cols()) {
    throw InvalidParams("exact_ric: order exceeds column count");
  }
  const std::int64_t count = binomial_capped(A.cols(), k, budget);
  if (count > budget) {
    throw BudgetExceeded("exact_ric: C(n, k) exceeds enumeration budget");
  }
  const Eigen::MatrixXd gram = A.matrix().transpose() * A.matrix();
  double delta = 0.0;
  for_each_subset(A.cols(), k, [&](const std::vector<int>& subset) {
    delta = std::max(delta, subset_delta(gram, subset));
  });
  return {k, delta, RicMethod::Exact, count};
}

RicEstimate sampled_ric_lower_bound(const SensingMatrix& A, int k, int samples,
                                    std::uint64_t seed) {
  if (k < 1 || k > A.cols()) {
    throw InvalidParams("sampled_ric_lower_bound: bad order");
  }
  if (samples < 1) throw InvalidParams("sampled_ric_lower_bound: samples < 1");
  const Eigen::MatrixXd gram = A.matrix().transpose() * A.matrix();
  rng::Stream stream(rng::derive_seed(seed, 0));
  double delta = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto subset = rng::sample_indices(A.cols(), k, stream);
    delta = std::max(delta, subset_delta(gram, subset));
  }
  return {k, delta, RicMethod::LowerBoundSampled, samples};
}

RecoveryBound recovery_bound(int K, int N, int L) {
  if (K < 1 || N < 1 || L < 1 || L > N || L > K) {
    throw InvalidParams("recovery_bound: need 1 <= L <= N and L <= K");
  }
  const double sl = std::sqrt(static_cast<double>(L));
  const double skl = std::sqrt(static_cast<double>(K + L));
  return {sl / (skl + sl), L * K + N};
}

double snr_threshold(int K, int N, int L, double delta, double kappa) {
  if (K < 1 || N < 1 || L < 1 || L > N || L > K) {
    throw InvalidParams("snr_threshold: need 1 <= L <= N and L <= K");
  }
  if (!(kappa > 0.0) || kappa > 1.0) {
    throw InvalidParams("snr_threshold: kappa must lie in (0, 1]");
  }
  if (delta < 0.0) throw InvalidParams("snr_threshold: negative delta");
  if (delta >= 0.5) {
    throw NoGuarantee("snr_threshold: delta >= 1/2 gives no guarantee");
  }
  const double sk = std::sqrt(static_cast<double>(K));
  const double sn = std::sqrt(static_cast<double>(N));
  const double denominator =
      std::sqrt(static_cast<double>(L) * (1.0 - 2.0 * delta)) - delta * sk;
  if (denominator <= 0.0) {
    throw NoGuarantee("snr_threshold: denominator is nonpositive");
  }
  const double root = (sn + sk) * (1.0 + delta) * sk / (kappa * denominator);
  return root * root;
}

ProofDiagnostics iteration_diagnostics(const SensingMatrix& A,
                                       const signals::SparseSignal& x,
                                       const greedy::IterationTrace& trace,
                                       const Eigen::VectorXd& r_prev) {
  if (x.n != A.cols()) {
    throw DimensionMismatch("iteration_diagnostics: signal dimension != cols");
  }
  if (r_prev.size() != A.rows()) {
    throw DimensionMismatch("iteration_diagnostics: residual length != rows");
  }
  const IndexSet& truth = x.support;
  const IndexSet prev_support = trace.support.set_difference(trace.identified);
  // The shortlist the identification stage actually saw.
  const IndexSet shortlist = trace.preselected.empty()
                                 ? prev_support.complement(A.cols())
                                 : trace.preselected;

  ProofDiagnostics d;
  d.k = trace.k;
  d.c_k = truth.set_intersection(prev_support).size();
  d.m_k = trace.preselected.set_intersection(truth).size();

  const Eigen::VectorXd correlations = A.matrix().transpose() * r_prev;

  double beta = 0.0;
  for (int i : truth) beta = std::max(beta, correlations(i) * correlations(i));
  d.beta_1 = beta;

  // alpha_N: the weakest correlation energy inside the best N-subset of the
  // false candidates; the best subset is simply the top N by |correlation|.
  const IndexSet off_support = truth.complement(A.cols());
  const int width = std::min(
      trace.preselected.empty() ? trace.identified.size() : trace.preselected.size(),
      off_support.size());
  double alpha = kNaN;
  if (width > 0) {
    std::vector<double> energies;
    energies.reserve(static_cast<std::size_t>(off_support.size()));
    for (int i : off_support) {
      energies.push_back(correlations(i) * correlations(i));
    }
    std::nth_element(energies.begin(), energies.begin() + (width - 1),
                     energies.end(), std::greater<double>());
    alpha = energies[static_cast<std::size_t>(width - 1)];
  }
  d.alpha_N = alpha;

  // Projection-normalized scores over the shortlist.
  linalg::SupportFactorization factorization(A);
  factorization.append_all(prev_support);
  const Eigen::VectorXd denominators_sq =
      factorization.perp_column_norms_squared(shortlist.indices());
  const double floor = factorization.tolerance() * factorization.tolerance();

  double u1 = -kInf;
  std::vector<double> false_ratios;
  for (int j = 0; j < shortlist.size(); ++j) {
    if (denominators_sq(j) < floor) continue;
    const double ratio =
        std::abs(correlations(shortlist[j])) / std::sqrt(denominators_sq(j));
    if (truth.contains(shortlist[j])) {
      u1 = std::max(u1, ratio);
    } else {
      false_ratios.push_back(ratio);
    }
  }
  d.u_1 = std::isinf(u1) ? kNaN : u1;

  const int l_width =
      std::min<int>(trace.identified.size(), static_cast<int>(false_ratios.size()));
  if (l_width > 0) {
    std::nth_element(false_ratios.begin(), false_ratios.begin() + (l_width - 1),
                     false_ratios.end(), std::greater<double>());
    d.v_L = false_ratios[static_cast<std::size_t>(l_width - 1)];
  } else {
    d.v_L = kNaN;
  }

  // ||x'|| where x' stacks the not-yet-found true coefficients with the
  // negated projection coefficients of their image on the current support.
  const IndexSet missing = truth.set_difference(prev_support);
  Eigen::VectorXd missing_values(missing.size());
  {
    int pos = 0;
    for (int j = 0; j < truth.size(); ++j) {
      if (!prev_support.contains(truth[j])) missing_values(pos++) = x.values(j);
    }
  }
  double proj_norm_sq = 0.0;
  if (!prev_support.empty() && missing.size() > 0) {
    const Eigen::VectorXd image = A.submatrix(missing) * missing_values;
    const Eigen::VectorXd u =
        linalg::least_squares_on_support(A, image, prev_support);
    proj_norm_sq = u.squaredNorm();
  }
  d.x_prime_norm = std::sqrt(missing_values.squaredNorm() + proj_norm_sq);
  return d;
}

LemmaReport check_lemma_bounds(const SensingMatrix& A, int trials,
                               std::uint64_t seed, int max_order) {
  if (trials < 1) throw InvalidParams("check_lemma_bounds: trials < 1");
  if (max_order < 2 || max_order > std::min(A.rows(), A.cols())) {
    throw InvalidParams("check_lemma_bounds: bad max_order");
  }
  LemmaReport report;
  report.trials = trials;
  report.worst_slack = kInf;
  for (int k = 1; k <= max_order; ++k) {
    report.deltas.push_back(exact_ric(A, k).delta);
  }

  const auto record = [&report](double slack) {
    ++report.checks;
    if (slack < -1e-12) ++report.violations;
    report.worst_slack = std::min(report.worst_slack, slack);
  };

  // Constant monotonicity across orders.
  for (std::size_t k1 = 0; k1 < report.deltas.size(); ++k1) {
    for (std::size_t k2 = k1 + 1; k2 < report.deltas.size(); ++k2) {
      record(report.deltas[k2] - report.deltas[k1]);
    }
  }

  rng::Stream stream(rng::derive_seed(seed, 0));
  const int n = A.cols();
  for (int t = 0; t < trials; ++t) {
    const int s1 = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(max_order - 1)));
    const int s2 = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(max_order - s1)));
    const auto joint = rng::sample_indices(n, s1 + s2, stream);
    const auto first_positions = rng::sample_indices(s1 + s2, s1, stream);
    std::vector<int> first, second;
    for (int p = 0; p < s1 + s2; ++p) {
      const bool in_first =
          std::binary_search(first_positions.begin(), first_positions.end(), p);
      (in_first ? first : second).push_back(joint[static_cast<std::size_t>(p)]);
    }
    const IndexSet set1{first};
    const IndexSet set2{second};
    const double delta = report.deltas[static_cast<std::size_t>(s1 + s2 - 1)];

    Eigen::VectorXd coeffs(set2.size());
    for (int j = 0; j < coeffs.size(); ++j) coeffs(j) = stream.gaussian();
    const Eigen::VectorXd image = A.submatrix(set2) * coeffs;

    // Disjoint-support cross-correlation bound.
    record(delta * coeffs.norm() - (A.submatrix(set1).transpose() * image).norm());

    // Sandwich bounds for the projected image.
    const Eigen::VectorXd projected =
        linalg::orthogonal_complement_apply(A, set1, image);
    const double attained = projected.squaredNorm();
    const double image_sq = image.squaredNorm();
    const double coeff_sq = coeffs.squaredNorm();
    const double ratio = delta < 1.0 ? delta / (1.0 - delta) : kInf;
    record(attained - (1.0 - ratio * ratio) * image_sq);
    record((1.0 + delta) * image_sq - attained);
    record(attained - (1.0 - ratio) * coeff_sq);
    record((1.0 + delta) * coeff_sq - attained);
  }
  return report;
}

namespace {

TheoremCheckReport run_theorem_check(const TheoremCheckConfig& config,
                                     bool noisy) {
  if (config.needed < 1 || config.Ns.empty()) {
    throw InvalidParams("theorem check: bad config");
  }
  TheoremCheckReport report;
  for (int t = 0; t < config.max_examined && report.eligible < config.needed;
       ++t) {
    ++report.examined;
    const int N = config.Ns[static_cast<std::size_t>(t) % config.Ns.size()];
    const auto bound = recovery_bound(config.K, N, config.L);

    dict::DictionarySpec spec;
    spec.m = config.m;
    spec.n = config.n;
    spec.kind = dict::Kind::Gaussian;
    spec.seed = rng::derive_seed(config.seed, static_cast<std::uint64_t>(t), 0);
    const SensingMatrix A = dict::generate(spec);

    const double delta = exact_ric(A, bound.ric_order).delta;
    if (delta >= bound.bound) continue;  // sufficient condition not met
    ++report.eligible;

    const auto x = signals::random_sparse_signal(
        config.n, config.K,
        rng::derive_seed(config.seed, static_cast<std::uint64_t>(t), 1));

    TheoremInstance instance;
    instance.dictionary_seed = spec.seed;
    instance.N = N;
    instance.delta = delta;
    instance.kappa = signals::mar(x);

    greedy::GreedyConfig run_config =
        greedy::GreedyConfig::m2ols(config.K, N, config.L);
    Eigen::VectorXd y;
    if (noisy) {
      const double threshold =
          snr_threshold(config.K, N, config.L, delta, instance.kappa);
      instance.snr_used = config.snr_factor * threshold;
      const auto sample = signals::add_noise_at_snr(
          A, x, instance.snr_used,
          rng::derive_seed(config.seed, static_cast<std::uint64_t>(t), 2));
      y = sample.y;
    } else {
      y = A.submatrix(x.support) * x.values;
    }
    const auto result = greedy::run(A, y, run_config, x.support);
    instance.recovered = result.exact_support_match.value_or(false);
    if (instance.recovered) ++report.recovered;
    report.instances.push_back(instance);
  }
  if (report.eligible < config.needed) {
    throw BudgetExceeded("theorem check: not enough eligible instances");
  }
  return report;
}

}  // namespace

TheoremCheckReport check_theorem1(const TheoremCheckConfig& config) {
  return run_theorem_check(config, /*noisy=*/false);
}

TheoremCheckReport check_theorem2(const TheoremCheckConfig& config) {
  return run_theorem_check(config, /*noisy=*/true);
}

}  // namespace pursuit::analysis
