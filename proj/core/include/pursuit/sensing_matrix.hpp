#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "pursuit/error.hpp"
#include "pursuit/index_set.hpp"

namespace pursuit {

/// Dense m x n measurement matrix with unit l2-norm columns.
/// The unit-norm invariant (within 1e-12) and entry finiteness are checked
/// at construction; every algorithm in the library relies on them.
class SensingMatrix {
 public:
  static constexpr double kUnitNormTolerance = 1e-12;

  explicit SensingMatrix(Eigen::MatrixXd entries) : phi_(std::move(entries)) {
    if (phi_.rows() < 1 || phi_.cols() < 1) {
      throw InvalidSpec("SensingMatrix: empty matrix");
    }
    if (!phi_.allFinite()) {
      throw InvalidSpec("SensingMatrix: non-finite entry");
    }
    for (Eigen::Index j = 0; j < phi_.cols(); ++j) {
      if (std::abs(phi_.col(j).norm() - 1.0) > kUnitNormTolerance) {
        throw InvalidSpec("SensingMatrix: column " + std::to_string(j) +
                          " is not unit norm");
      }
    }
  }

  int rows() const { return static_cast<int>(phi_.rows()); }
  int cols() const { return static_cast<int>(phi_.cols()); }

  const Eigen::MatrixXd& matrix() const { return phi_; }
  Eigen::MatrixXd::ConstColXpr column(int j) const { return phi_.col(j); }

  /// Columns restricted to S, in ascending index order.
  Eigen::MatrixXd submatrix(const IndexSet& S) const {
    S.require_within(cols());
    Eigen::MatrixXd out(phi_.rows(), S.size());
    for (int j = 0; j < S.size(); ++j) out.col(j) = phi_.col(S[j]);
    return out;
  }

 private:
  Eigen::MatrixXd phi_;
};

}  // namespace pursuit
