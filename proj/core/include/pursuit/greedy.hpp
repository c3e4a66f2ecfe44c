#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pursuit/index_set.hpp"
#include "pursuit/sensing_matrix.hpp"
#include "pursuit/signals.hpp"

namespace pursuit::greedy {

enum class Algorithm { Omp, Ols, Gomp, Mols, M2ols };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// Selector and parameters for one recovery run.
///
/// All five algorithms share the iteration skeleton
///   (preselect) -> identify -> augment -> estimate -> update,
/// differing only in which stages are active and how wide they are:
///   omp    = gomp with N = 1
///   gomp   = preselect N, take all of them
///   ols    = mols with L = 1
///   mols   = identify L among all unselected columns
///   m2ols  = preselect N, identify L among them
struct GreedyConfig {
  Algorithm algorithm = Algorithm::Omp;
  int K = 0;                  // sparsity level
  int N = 1;                  // preselection width (gomp, m2ols)
  int L = 1;                  // identification width (mols, m2ols)
  double epsilon = 1e-6;      // residual threshold, relative to ||y||
  int max_iterations = 0;     // 0 means K

  static GreedyConfig omp(int K);
  static GreedyConfig ols(int K);
  static GreedyConfig gomp(int K, int N);
  static GreedyConfig mols(int K, int L);
  static GreedyConfig m2ols(int K, int N, int L);

  int effective_max_iterations() const { return max_iterations > 0 ? max_iterations : K; }
  /// Indices added per iteration (N for omp/gomp, L otherwise).
  int selections_per_iteration() const;
  bool preselects() const;
  bool identifies() const;
  std::string name() const { return algorithm_name(algorithm); }

  void validate() const;
  /// Parameter checks that need the matrix: selections_per_iteration() *
  /// max_iterations must not exceed the row count.
  void validate_against(const SensingMatrix& A) const;
};

/// One loop iteration: preselected shortlist (empty when preselection is
/// inactive), newly identified indices, cumulative support, and the updated
/// residual norm.
struct IterationTrace {
  int k = 0;
  IndexSet preselected;
  IndexSet identified;
  IndexSet support;
  double residual_norm = 0.0;
};

struct RecoveryResult {
  signals::SparseSignal x_hat;
  IndexSet support_hat;
  std::vector<IterationTrace> iterations;
  bool converged = false;
  std::optional<bool> exact_support_match;
};

/// The N indices outside `forbidden` with largest |<phi_i, r>|; ties break
/// toward the smaller index.
IndexSet preselect(const SensingMatrix& A, const Eigen::VectorXd& r,
                   const IndexSet& forbidden, int N);

/// The L candidates with the largest ratio |<phi_i, r>|^2 / ||P_perp phi_i||^2
/// where the projection is onto the complement of span(Phi_support).
/// Candidates whose projected norm vanishes (within rank tolerance) score
/// -infinity and are never selected; if fewer than L candidates score finite,
/// throws DegenerateCandidates.  Equivalently, the returned set minimizes
/// sum_i ||P_perp_{support + {i}} y||^2 over L-subsets of the candidates.
IndexSet identify(const SensingMatrix& A, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& r, const IndexSet& support,
                  const IndexSet& candidates, int L);

/// Positions and values of the K largest-magnitude entries of x (ties break
/// toward the smaller position); positions come back ascending.  When x has
/// fewer than K entries, all of them are returned.
std::pair<IndexSet, Eigen::VectorXd> top_k_truncate(const Eigen::VectorXd& x,
                                                    int K);

RecoveryResult run(const SensingMatrix& A, const Eigen::VectorXd& y,
                   const GreedyConfig& config);

/// As above, additionally scoring exact support recovery against the truth.
RecoveryResult run(const SensingMatrix& A, const Eigen::VectorXd& y,
                   const GreedyConfig& config, const IndexSet& true_support);

}  // namespace pursuit::greedy
