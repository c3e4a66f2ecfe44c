#include "pursuit/signals.hpp"

#include <cmath>
#include <limits>

#include "pursuit/error.hpp"
#include "pursuit/rng.hpp"

namespace pursuit::signals {

SparseSignal::SparseSignal(int n_, IndexSet support_, Eigen::VectorXd values_)
    : n(n_), support(std::move(support_)), values(std::move(values_)) {
  if (support.size() < 1) throw InvalidSparsity("SparseSignal: empty support");
  support.require_within(n);
  if (values.size() != support.size()) {
    throw DimensionMismatch("SparseSignal: |values| != |support|");
  }
  if (!values.allFinite()) {
    throw InvalidParams("SparseSignal: non-finite value");
  }
}

Eigen::VectorXd SparseSignal::dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < support.size(); ++j) out(support[j]) = values(j);
  return out;
}

SparseSignal random_sparse_signal(int n, int K, std::uint64_t seed,
                                  Magnitudes magnitudes) {
  if (K < 1 || K > n) throw InvalidSparsity("random_sparse_signal: need 1 <= K <= n");
  rng::Stream support_stream(rng::derive_seed(seed, 0));
  rng::Stream value_stream(rng::derive_seed(seed, 1));
  IndexSet support{rng::sample_indices(n, K, support_stream)};
  Eigen::VectorXd values(K);
  for (int j = 0; j < K; ++j) {
    if (magnitudes == Magnitudes::UnitSigns) {
      values(j) = value_stream.bits() & 1u ? 1.0 : -1.0;
    } else {
      double v = value_stream.gaussian();
      while (v == 0.0) v = value_stream.gaussian();
      values(j) = v;
    }
  }
  return SparseSignal(n, std::move(support), std::move(values));
}

double snr(const SensingMatrix& A, const SparseSignal& x,
           const Eigen::VectorXd& e) {
  if (x.n != A.cols()) throw DimensionMismatch("snr: signal dimension != cols");
  if (e.size() != A.rows()) throw DimensionMismatch("snr: noise length != rows");
  const double signal_power =
      (A.submatrix(x.support) * x.values).squaredNorm();
  const double noise_power = e.squaredNorm();
  if (noise_power == 0.0) return std::numeric_limits<double>::infinity();
  return signal_power / noise_power;
}

double mar(const SparseSignal& x) {
  const double min_abs = x.values.cwiseAbs().minCoeff();
  const double avg = x.values.norm() / std::sqrt(static_cast<double>(x.sparsity()));
  return min_abs / avg;
}

NoisySample add_noise_at_snr(const SensingMatrix& A, const SparseSignal& x,
                             double target_snr, std::uint64_t seed) {
  if (x.n != A.cols()) {
    throw DimensionMismatch("add_noise_at_snr: signal dimension != cols");
  }
  if (!(target_snr > 0.0)) {
    throw InvalidParams("add_noise_at_snr: target_snr must be positive");
  }
  const Eigen::VectorXd clean = A.submatrix(x.support) * x.values;
  const double clean_norm = clean.norm();
  if (clean_norm == 0.0) throw ZeroSignal("add_noise_at_snr: ||Phi x|| = 0");

  rng::Stream stream(rng::derive_seed(seed, 2));
  Eigen::VectorXd direction(A.rows());
  double dir_norm = 0.0;
  do {
    for (int i = 0; i < A.rows(); ++i) direction(i) = stream.gaussian();
    dir_norm = direction.norm();
  } while (dir_norm == 0.0);

  NoisySample sample;
  sample.e = direction * (clean_norm / (std::sqrt(target_snr) * dir_norm));
  sample.y = clean + sample.e;
  sample.x = x;
  sample.achieved_snr = clean_norm * clean_norm / sample.e.squaredNorm();
  return sample;
}

}  // namespace pursuit::signals
