#include "pursuit/dictionary.hpp"

#include <cmath>
#include <iostream>

#include "pursuit/error.hpp"
#include "pursuit/rng.hpp"

namespace pursuit::dict {

void DictionarySpec::validate() const {
  if (m < 1 || n < 1) throw InvalidSpec("DictionarySpec: m and n must be >= 1");
  if (correlation < 0.0) throw InvalidSpec("DictionarySpec: T must be >= 0");
  if (kind == Kind::Gaussian && correlation != 0.0) {
    throw InvalidSpec("DictionarySpec: Gaussian kind takes no correlation");
  }
}

SensingMatrix generate(const DictionarySpec& spec) {
  spec.validate();
  const double sigma = 1.0 / std::sqrt(static_cast<double>(spec.m));
  rng::Stream entry_stream(rng::derive_seed(spec.seed, 0));
  rng::Stream offset_stream(rng::derive_seed(spec.seed, 1));

  Eigen::MatrixXd a(spec.m, spec.n);
  for (int j = 0; j < spec.n; ++j) {
    const double offset = spec.kind == Kind::Correlated
                              ? offset_stream.uniform(0.0, spec.correlation)
                              : 0.0;
    for (;;) {
      for (int i = 0; i < spec.m; ++i) {
        a(i, j) = sigma * entry_stream.gaussian() + offset;
      }
      const double norm = a.col(j).norm();
      if (norm > 0.0) {
        a.col(j) /= norm;
        break;
      }
      // Probability-zero draw; retry the column with fresh entries.
      std::cerr << "dictionary: regenerated zero-norm column " << j << "\n";
    }
  }
  return SensingMatrix(std::move(a));
}

double coherence(const SensingMatrix& A) {
  if (A.cols() < 2) throw DimensionMismatch("coherence: needs n >= 2");
  const Eigen::MatrixXd gram = A.matrix().transpose() * A.matrix();
  double best = 0.0;
  for (int i = 0; i < A.cols(); ++i) {
    for (int j = i + 1; j < A.cols(); ++j) {
      best = std::max(best, std::abs(gram(i, j)));
    }
  }
  return best;
}

double mean_coherence(const SensingMatrix& A) {
  if (A.cols() < 2) throw DimensionMismatch("mean_coherence: needs n >= 2");
  const Eigen::MatrixXd gram = A.matrix().transpose() * A.matrix();
  double sum = 0.0;
  std::int64_t pairs = 0;
  for (int i = 0; i < A.cols(); ++i) {
    for (int j = i + 1; j < A.cols(); ++j) {
      sum += std::abs(gram(i, j));
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace pursuit::dict
