#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "pursuit/index_set.hpp"
#include "pursuit/sensing_matrix.hpp"

namespace pursuit::signals {

/// Exactly sparse vector: K nonzero values on an explicit support.
/// `values` is aligned with `support` in ascending index order.
struct SparseSignal {
  int n = 0;
  IndexSet support;
  Eigen::VectorXd values;

  SparseSignal() = default;
  SparseSignal(int n, IndexSet support, Eigen::VectorXd values);

  int sparsity() const { return support.size(); }
  Eigen::VectorXd dense() const;
};

/// One noisy measurement y = Phi x + e together with its construction.
struct NoisySample {
  Eigen::VectorXd y;
  Eigen::VectorXd e;
  SparseSignal x;
  double achieved_snr = 0.0;
};

enum class Magnitudes { Gaussian, UnitSigns };

/// Support uniform over K-subsets of [0, n); nonzeros i.i.d. standard normal
/// (redrawn on an exact zero), or all +/-1 with UnitSigns.
SparseSignal random_sparse_signal(int n, int K, std::uint64_t seed,
                                  Magnitudes magnitudes = Magnitudes::Gaussian);

/// ||Phi x||^2 / ||e||^2; +infinity when e = 0.
double snr(const SensingMatrix& A, const SparseSignal& x,
           const Eigen::VectorXd& e);

/// Minimum-to-average magnitude ratio min_j |x_j| / (||x|| / sqrt(K)).
double mar(const SparseSignal& x);

/// Gaussian-direction noise scaled so that ||Phi x||^2/||e||^2 equals
/// target_snr.
NoisySample add_noise_at_snr(const SensingMatrix& A, const SparseSignal& x,
                             double target_snr, std::uint64_t seed);

}  // namespace pursuit::signals
