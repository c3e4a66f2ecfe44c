#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pursuit/greedy.hpp"
#include "pursuit/index_set.hpp"
#include "pursuit/sensing_matrix.hpp"
#include "pursuit/signals.hpp"

namespace pursuit::analysis {

enum class RicMethod { Exact, LowerBoundSampled };

/// Restricted isometry constant of one order: the smallest delta with
/// (1-delta)||x||^2 <= ||Phi x||^2 <= (1+delta)||x||^2 over all k-sparse x.
struct RicEstimate {
  int order = 0;
  double delta = 0.0;
  RicMethod method = RicMethod::Exact;
  std::int64_t supports_examined = 0;
};

/// Exact constant by enumerating every k-subset and taking the extremal
/// eigenvalues of its Gram matrix.  Throws BudgetExceeded when C(n, k)
/// exceeds `budget`.
RicEstimate exact_ric(const SensingMatrix& A, int k,
                      std::int64_t budget = 1'000'000);

/// Lower bound from `samples` random k-subsets.  Sampling is sequential in
/// one stream, so enlarging `samples` with the same seed only extends the
/// examined family.
RicEstimate sampled_ric_lower_bound(const SensingMatrix& A, int k, int samples,
                                    std::uint64_t seed);

struct RecoveryBound {
  double bound = 0.0;  // sqrt(L) / (sqrt(K+L) + sqrt(L))
  int ric_order = 0;   // L*K + N, the order at which delta must be checked
};

/// Sufficient condition for exact noiseless recovery: the restricted isometry
/// constant of order L*K + N must stay below the returned bound.
RecoveryBound recovery_bound(int K, int N, int L);

/// Minimal measurement snr for guaranteed noisy support recovery, given the
/// restricted isometry constant `delta` at order L*K + N and the
/// minimum-to-average ratio `kappa` of the signal.  Throws NoGuarantee when
/// delta >= 1/2 or the bound's denominator is nonpositive.
double snr_threshold(int K, int N, int L, double delta, double kappa);

/// Per-iteration quantities from the recovery analysis, evaluated on a real
/// trace against the ground-truth signal.  alpha_N/beta_1 compare raw
/// correlation energies; u_1/v_L compare projection-normalized scores over
/// the preselected set.  u_1 (resp. v_L) is NaN when the shortlist contains
/// no true (resp. no false) index.
struct ProofDiagnostics {
  int k = 0;
  double alpha_N = 0.0;
  double beta_1 = 0.0;
  double u_1 = 0.0;
  double v_L = 0.0;
  int c_k = 0;          // |T intersect T^k|
  int m_k = 0;          // |S^k intersect T|
  double x_prime_norm = 0.0;
};

/// `r_prev` is the residual the iteration in `trace` started from.
ProofDiagnostics iteration_diagnostics(const SensingMatrix& A,
                                       const signals::SparseSignal& x,
                                       const greedy::IterationTrace& trace,
                                       const Eigen::VectorXd& r_prev);

/// Numeric verification of the restricted-isometry toolbox lemmas on one
/// matrix: constant monotonicity across orders, the disjoint-support
/// cross-correlation bound, and both sandwich bounds for the projected
/// submatrix.  Slack is bound minus attained value (nonnegative = holds).
struct LemmaReport {
  std::vector<double> deltas;  // deltas[k-1] = exact constant of order k
  int trials = 0;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double worst_slack = 0.0;
};

LemmaReport check_lemma_bounds(const SensingMatrix& A, int trials,
                               std::uint64_t seed, int max_order = 4);

/// Instance sampler for the end-to-end theorem checks: random Gaussian
/// dictionaries at a scale where the exact constant is enumerable, filtered
/// by the recovery condition.
struct TheoremCheckConfig {
  int m = 128;
  int n = 14;
  int K = 2;
  int L = 1;
  std::vector<int> Ns = {1, 2};
  int needed = 25;             // eligible instances to accumulate
  int max_examined = 100000;
  std::uint64_t seed = 1;
  double snr_factor = 2.0;     // noisy check runs at snr_factor * threshold
};

struct TheoremInstance {
  std::uint64_t dictionary_seed = 0;
  int N = 0;
  double delta = 0.0;
  double kappa = 0.0;
  double snr_used = 0.0;  // 0 for the noiseless check
  bool recovered = false;
};

struct TheoremCheckReport {
  int examined = 0;
  int eligible = 0;
  int recovered = 0;
  std::vector<TheoremInstance> instances;
  int counterexamples() const { return eligible - recovered; }
};

TheoremCheckReport check_theorem1(const TheoremCheckConfig& config);
TheoremCheckReport check_theorem2(const TheoremCheckConfig& config);

}  // namespace pursuit::analysis
