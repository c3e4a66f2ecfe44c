#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pursuit/index_set.hpp"
#include "pursuit/sensing_matrix.hpp"

namespace pursuit::linalg {

/// Rank tolerance for restricted subproblems: rows * eps * (largest column
/// norm among the selected columns).
double rank_tolerance(const SensingMatrix& A, double max_column_norm = 1.0);

/// Incrementally maintained thin QR factorization of the selected columns
/// Phi_S.  Columns are appended in selection order; Q stays orthonormal via
/// twice-applied Gram-Schmidt, R collects the subtracted coefficients.
/// All projection and least-squares work in the greedy loop goes through
/// this class so that each iteration only pays for the newly added columns.
class SupportFactorization {
 public:
  explicit SupportFactorization(const SensingMatrix& A);

  /// Appends column `index`; throws RankDeficient if the column lies in the
  /// span of the current selection (orthogonalized norm below tolerance).
  void append(int index);
  void append_all(const IndexSet& S);

  int size() const { return count_; }
  const std::vector<int>& selection_order() const { return order_; }
  double tolerance() const { return tol_; }
  const SensingMatrix& matrix() const { return *A_; }

  /// P_perp v = v - Q Q^t v.
  Eigen::VectorXd perp_apply(const Eigen::VectorXd& v) const;

  /// ||P_perp phi_i||^2 for each candidate column.  Exactly 1 for an empty
  /// selection (unit-norm columns).
  Eigen::VectorXd perp_column_norms_squared(const std::vector<int>& candidates) const;

  /// Coefficients minimizing ||y - Phi_S u||, aligned with selection_order().
  Eigen::VectorXd least_squares(const Eigen::VectorXd& y) const;

 private:
  const SensingMatrix* A_;
  Eigen::MatrixXd q_;  // m x capacity; first count_ columns are valid
  Eigen::MatrixXd r_;  // capacity x capacity upper triangular
  std::vector<int> order_;
  int count_ = 0;
  double tol_ = 0.0;
};

/// Coefficients u_S minimizing ||y - Phi_S u_S||, aligned with S (ascending).
/// Empty S yields an empty vector.  Throws RankDeficient when the smallest
/// singular value of Phi_S falls below the rank tolerance.
Eigen::VectorXd least_squares_on_support(const SensingMatrix& A,
                                         const Eigen::VectorXd& y,
                                         const IndexSet& S);

/// Projection of v onto the orthogonal complement of span(Phi_S).
Eigen::VectorXd orthogonal_complement_apply(const SensingMatrix& A,
                                            const IndexSet& S,
                                            const Eigen::VectorXd& v);

/// ||P_perp_S phi_i|| for every candidate column, aligned with `candidates`
/// (ascending).  Candidates must be disjoint from S.
Eigen::VectorXd projected_column_norms(const SensingMatrix& A,
                                       const IndexSet& S,
                                       const IndexSet& candidates);

}  // namespace pursuit::linalg
