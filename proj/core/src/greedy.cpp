#include "pursuit/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pursuit/error.hpp"
#include "pursuit/linalg.hpp"

namespace pursuit::greedy {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Omp: return "omp";
    case Algorithm::Ols: return "ols";
    case Algorithm::Gomp: return "gomp";
    case Algorithm::Mols: return "mols";
    case Algorithm::M2ols: return "m2ols";
  }
  throw InvalidParams("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "omp") return Algorithm::Omp;
  if (name == "ols") return Algorithm::Ols;
  if (name == "gomp") return Algorithm::Gomp;
  if (name == "mols") return Algorithm::Mols;
  if (name == "m2ols") return Algorithm::M2ols;
  throw InvalidParams("unknown algorithm: " + name);
}

GreedyConfig GreedyConfig::omp(int K) { return {Algorithm::Omp, K, 1, 1}; }
GreedyConfig GreedyConfig::ols(int K) { return {Algorithm::Ols, K, 1, 1}; }
GreedyConfig GreedyConfig::gomp(int K, int N) { return {Algorithm::Gomp, K, N, 1}; }
GreedyConfig GreedyConfig::mols(int K, int L) { return {Algorithm::Mols, K, 1, L}; }
GreedyConfig GreedyConfig::m2ols(int K, int N, int L) { return {Algorithm::M2ols, K, N, L}; }

bool GreedyConfig::preselects() const {
  return algorithm == Algorithm::Omp || algorithm == Algorithm::Gomp ||
         algorithm == Algorithm::M2ols;
}

bool GreedyConfig::identifies() const {
  return algorithm == Algorithm::Ols || algorithm == Algorithm::Mols ||
         algorithm == Algorithm::M2ols;
}

int GreedyConfig::selections_per_iteration() const {
  switch (algorithm) {
    case Algorithm::Omp: return 1;
    case Algorithm::Ols: return 1;
    case Algorithm::Gomp: return N;
    case Algorithm::Mols: return L;
    case Algorithm::M2ols: return L;
  }
  throw InvalidParams("selections_per_iteration: unknown algorithm");
}

void GreedyConfig::validate() const {
  if (K < 1) throw ConfigInvalid("GreedyConfig: K must be >= 1");
  if (epsilon < 0.0) throw ConfigInvalid("GreedyConfig: epsilon must be >= 0");
  if (max_iterations < 0) throw ConfigInvalid("GreedyConfig: negative max_iterations");
  switch (algorithm) {
    case Algorithm::Omp:
    case Algorithm::Ols:
      break;
    case Algorithm::Gomp:
      if (N < 1) throw ConfigInvalid("gomp: N must be >= 1");
      break;
    case Algorithm::Mols:
      if (L < 1 || L > K) throw ConfigInvalid("mols: need 1 <= L <= K");
      break;
    case Algorithm::M2ols:
      if (L < 1 || L > N) throw ConfigInvalid("m2ols: need 1 <= L <= N");
      if (L > K) throw ConfigInvalid("m2ols: need L <= K");
      break;
  }
}

void GreedyConfig::validate_against(const SensingMatrix& A) const {
  validate();
  if (K > A.cols()) throw ConfigInvalid("GreedyConfig: K exceeds column count");
  const long total = static_cast<long>(selections_per_iteration()) *
                     static_cast<long>(effective_max_iterations());
  if (total > A.rows()) {
    throw ConfigInvalid(
        "GreedyConfig: selections per iteration times max iterations "
        "exceeds the measurement count");
  }
}

namespace {

// Top `count` positions of `score` (ties toward the smaller index), skipping
// positions failing `admit`.
template <typename Admit>
std::vector<int> top_positions(const Eigen::VectorXd& score, int count,
                               Admit admit) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(score.size()));
  for (int i = 0; i < score.size(); ++i) {
    if (admit(i)) order.push_back(i);
  }
  const auto better = [&score](int a, int b) {
    if (score(a) != score(b)) return score(a) > score(b);
    return a < b;
  };
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(count), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), better);
  order.resize(take);
  return order;
}

IndexSet preselect_from_correlations(const Eigen::VectorXd& correlations,
                                     const IndexSet& forbidden, int N) {
  const auto picked = top_positions(
      correlations.cwiseAbs(), N,
      [&forbidden](int i) { return !forbidden.contains(i); });
  return IndexSet(picked);
}

// Ratio scores for the identification step, computed against an existing
// factorization of the current support.  Returns -infinity for candidates
// inside the selected span.
Eigen::VectorXd identification_scores(
    const linalg::SupportFactorization& factorization,
    const Eigen::VectorXd& correlations, const std::vector<int>& candidates) {
  const Eigen::VectorXd denominators =
      factorization.perp_column_norms_squared(candidates);
  const double floor = factorization.tolerance() * factorization.tolerance();
  Eigen::VectorXd scores(static_cast<Eigen::Index>(candidates.size()));
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    const double c = correlations(candidates[static_cast<std::size_t>(j)]);
    scores(j) = denominators(j) < floor
                    ? -std::numeric_limits<double>::infinity()
                    : c * c / denominators(j);
  }
  return scores;
}

IndexSet identify_from_scores(const Eigen::VectorXd& scores,
                              const std::vector<int>& candidates, int L,
                              bool shrink_to_finite) {
  const int finite = static_cast<int>(
      (scores.array() > -std::numeric_limits<double>::infinity()).count());
  if (finite == 0 || (!shrink_to_finite && finite < L)) {
    throw DegenerateCandidates(
        "identify: fewer candidates with nonzero projected norm than needed");
  }
  const auto picked = top_positions(
      scores, std::min(L, finite), [&scores](int i) {
        return scores(i) > -std::numeric_limits<double>::infinity();
      });
  std::vector<int> out;
  out.reserve(picked.size());
  for (int p : picked) out.push_back(candidates[static_cast<std::size_t>(p)]);
  return IndexSet(std::move(out));
}

}  // namespace

IndexSet preselect(const SensingMatrix& A, const Eigen::VectorXd& r,
                   const IndexSet& forbidden, int N) {
  if (r.size() != A.rows()) throw DimensionMismatch("preselect: r length != rows");
  forbidden.require_within(A.cols());
  if (N < 1) throw InvalidParams("preselect: N must be >= 1");
  if (N > A.cols() - forbidden.size()) {
    throw NotEnoughCandidates("preselect: N exceeds unselected column count");
  }
  return preselect_from_correlations(A.matrix().transpose() * r, forbidden, N);
}

IndexSet identify(const SensingMatrix& A, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& r, const IndexSet& support,
                  const IndexSet& candidates, int L) {
  if (y.size() != A.rows() || r.size() != A.rows()) {
    throw DimensionMismatch("identify: vector length != rows");
  }
  support.require_within(A.cols());
  candidates.require_within(A.cols());
  if (!support.set_intersection(candidates).empty()) {
    throw InvalidParams("identify: candidates overlap support");
  }
  if (L < 1 || L > candidates.size()) {
    throw InvalidParams("identify: need 1 <= L <= |candidates|");
  }
  linalg::SupportFactorization factorization(A);
  factorization.append_all(support);
  Eigen::VectorXd correlations = Eigen::VectorXd::Zero(A.cols());
  for (int c : candidates) correlations(c) = A.column(c).dot(r);
  const Eigen::VectorXd scores =
      identification_scores(factorization, correlations, candidates.indices());
  return identify_from_scores(scores, candidates.indices(), L,
                              /*shrink_to_finite=*/false);
}

std::pair<IndexSet, Eigen::VectorXd> top_k_truncate(const Eigen::VectorXd& x,
                                                    int K) {
  if (K < 1) throw InvalidParams("top_k_truncate: K must be >= 1");
  auto picked = top_positions(x.cwiseAbs(), K, [](int) { return true; });
  std::sort(picked.begin(), picked.end());
  Eigen::VectorXd values(static_cast<Eigen::Index>(picked.size()));
  for (std::size_t j = 0; j < picked.size(); ++j) {
    values(static_cast<Eigen::Index>(j)) = x(picked[j]);
  }
  return {IndexSet(std::move(picked)), std::move(values)};
}

namespace {

RecoveryResult finalize(const SensingMatrix& A, const GreedyConfig& config,
                        const linalg::SupportFactorization& factorization,
                        const Eigen::VectorXd& coefficients,
                        std::vector<IterationTrace> iterations, bool converged,
                        const IndexSet* true_support) {
  const int n = A.cols();
  // Coefficients arrive in selection order; re-align ascending by index so
  // that the tie rule of the output step is by column index.
  std::vector<std::pair<int, double>> entries;
  entries.reserve(factorization.selection_order().size());
  for (std::size_t j = 0; j < factorization.selection_order().size(); ++j) {
    entries.emplace_back(factorization.selection_order()[j],
                         coefficients(static_cast<Eigen::Index>(j)));
  }
  std::sort(entries.begin(), entries.end());

  Eigen::VectorXd over_support(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t j = 0; j < entries.size(); ++j) {
    over_support(static_cast<Eigen::Index>(j)) = entries[j].second;
  }

  std::vector<int> hat_indices;
  std::vector<double> hat_values;
  if (over_support.size() > 0) {
    const auto [positions, values] = top_k_truncate(over_support, config.K);
    for (int j = 0; j < positions.size(); ++j) {
      hat_indices.push_back(entries[static_cast<std::size_t>(positions[j])].first);
      hat_values.push_back(values(j));
    }
  }
  // Degenerate early exit: pad with the smallest unused indices and zeros.
  for (int i = 0; i < n && static_cast<int>(hat_indices.size()) < config.K; ++i) {
    if (std::find(hat_indices.begin(), hat_indices.end(), i) == hat_indices.end()) {
      hat_indices.push_back(i);
      hat_values.push_back(0.0);
    }
  }

  std::vector<std::pair<int, double>> hat;
  for (std::size_t j = 0; j < hat_indices.size(); ++j) {
    hat.emplace_back(hat_indices[j], hat_values[j]);
  }
  std::sort(hat.begin(), hat.end());
  std::vector<int> support_hat;
  Eigen::VectorXd x_hat_values(static_cast<Eigen::Index>(hat.size()));
  for (std::size_t j = 0; j < hat.size(); ++j) {
    support_hat.push_back(hat[j].first);
    x_hat_values(static_cast<Eigen::Index>(j)) = hat[j].second;
  }

  RecoveryResult result;
  result.support_hat = IndexSet(std::move(support_hat));
  result.x_hat = signals::SparseSignal(n, result.support_hat, std::move(x_hat_values));
  result.iterations = std::move(iterations);
  result.converged = converged;
  if (true_support != nullptr) {
    result.exact_support_match = (result.support_hat == *true_support);
  }
  return result;
}

RecoveryResult run_impl(const SensingMatrix& A, const Eigen::VectorXd& y,
                        const GreedyConfig& config,
                        const IndexSet* true_support) {
  config.validate_against(A);
  if (y.size() != A.rows()) throw DimensionMismatch("run: y length != rows");
  if (true_support != nullptr) true_support->require_within(A.cols());

  const int n = A.cols();
  const double y_norm = y.norm();
  const double threshold = config.epsilon * y_norm;

  linalg::SupportFactorization factorization(A);
  Eigen::VectorXd coefficients(0);
  Eigen::VectorXd residual = y;
  IndexSet support;
  std::vector<IterationTrace> iterations;

  // ||y|| = 0 counts as immediately converged.
  bool converged = y_norm == 0.0;
  int k = 0;
  while (!converged && residual.norm() >= threshold &&
         k < config.effective_max_iterations()) {
    const int remaining = n - support.size();
    if (remaining == 0) break;
    ++k;

    IterationTrace trace;
    trace.k = k;

    const Eigen::VectorXd correlations = A.matrix().transpose() * residual;
    IndexSet candidates;
    if (config.preselects()) {
      // Near-end shrinkage: take every unselected column once fewer than N
      // remain.
      trace.preselected = preselect_from_correlations(
          correlations, support, std::min(config.N, remaining));
      candidates = trace.preselected;
    } else {
      candidates = support.complement(n);
    }

    if (config.identifies()) {
      const Eigen::VectorXd scores = identification_scores(
          factorization, correlations, candidates.indices());
      trace.identified =
          identify_from_scores(scores, candidates.indices(),
                               std::min(config.L, candidates.size()),
                               /*shrink_to_finite=*/true);
    } else {
      trace.identified = candidates;
    }

    for (int idx : trace.identified) factorization.append(idx);
    support = support.set_union(trace.identified);
    coefficients = factorization.least_squares(y);

    // r = y - Phi_T x_T.
    residual = y;
    for (std::size_t j = 0; j < factorization.selection_order().size(); ++j) {
      residual -= coefficients(static_cast<Eigen::Index>(j)) *
                  A.column(factorization.selection_order()[j]);
    }

    trace.support = support;
    trace.residual_norm = residual.norm();
    iterations.push_back(std::move(trace));

    if (residual.norm() < threshold) converged = true;
  }

  return finalize(A, config, factorization, coefficients,
                  std::move(iterations), converged, true_support);
}

}  // namespace

RecoveryResult run(const SensingMatrix& A, const Eigen::VectorXd& y,
                   const GreedyConfig& config) {
  return run_impl(A, y, config, nullptr);
}

RecoveryResult run(const SensingMatrix& A, const Eigen::VectorXd& y,
                   const GreedyConfig& config, const IndexSet& true_support) {
  return run_impl(A, y, config, &true_support);
}

}  // namespace pursuit::greedy
