#include "pursuit/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <limits>

namespace pursuit::linalg {

double rank_tolerance(const SensingMatrix& A, double max_column_norm) {
  return static_cast<double>(A.rows()) *
         std::numeric_limits<double>::epsilon() * max_column_norm;
}

SupportFactorization::SupportFactorization(const SensingMatrix& A) : A_(&A) {
  const int m = A.rows();
  q_.resize(m, m);
  r_.setZero(m, m);
  order_.reserve(static_cast<std::size_t>(m));
  tol_ = rank_tolerance(A);
}

void SupportFactorization::append(int index) {
  if (index < 0 || index >= A_->cols()) {
    throw InvalidParams("SupportFactorization: column index out of bounds");
  }
  if (count_ >= A_->rows()) {
    throw RankDeficient("SupportFactorization: more columns than rows");
  }
  const auto q_head = q_.leftCols(count_);
  Eigen::VectorXd w = A_->column(index);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(count_);
  // Two Gram-Schmidt passes keep Q orthonormal to machine precision even for
  // nearly dependent columns.
  for (int pass = 0; pass < 2; ++pass) {
    if (count_ == 0) break;
    const Eigen::VectorXd c = q_head.transpose() * w;
    w.noalias() -= q_head * c;
    coeffs += c;
  }
  const double norm = w.norm();
  if (norm < tol_) {
    throw RankDeficient("SupportFactorization: column " +
                        std::to_string(index) + " lies in current span");
  }
  r_.col(count_).head(count_) = coeffs;
  r_(count_, count_) = norm;
  q_.col(count_) = w / norm;
  order_.push_back(index);
  ++count_;
}

void SupportFactorization::append_all(const IndexSet& S) {
  for (int idx : S) append(idx);
}

Eigen::VectorXd SupportFactorization::perp_apply(const Eigen::VectorXd& v) const {
  if (v.size() != A_->rows()) {
    throw DimensionMismatch("perp_apply: vector length != rows");
  }
  if (count_ == 0) return v;
  const auto q_head = q_.leftCols(count_);
  return v - q_head * (q_head.transpose() * v);
}

Eigen::VectorXd SupportFactorization::perp_column_norms_squared(
    const std::vector<int>& candidates) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(candidates.size()));
  if (count_ == 0) {
    // Unit-norm columns project to themselves under the empty selection.
    out.setOnes();
    return out;
  }
  const auto q_head = q_.leftCols(count_);
  Eigen::MatrixXd cols(A_->rows(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    cols.col(static_cast<Eigen::Index>(j)) = A_->column(candidates[j]);
  }
  const Eigen::MatrixXd proj = q_head.transpose() * cols;
  cols.noalias() -= q_head * proj;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) = cols.col(j).squaredNorm();
  }
  return out;
}

Eigen::VectorXd SupportFactorization::least_squares(
    const Eigen::VectorXd& y) const {
  if (y.size() != A_->rows()) {
    throw DimensionMismatch("least_squares: vector length != rows");
  }
  const auto q_head = q_.leftCols(count_);
  const Eigen::VectorXd rhs = q_head.transpose() * y;
  return r_.topLeftCorner(count_, count_)
      .triangularView<Eigen::Upper>()
      .solve(rhs);
}

namespace {

// Thin orthonormal basis of span(Phi_S) with an explicit smallest-singular-
// value rank gate.
Eigen::MatrixXd orthonormal_basis(const SensingMatrix& A, const IndexSet& S) {
  const Eigen::MatrixXd sub = A.submatrix(S);
  double max_col = 0.0;
  for (Eigen::Index j = 0; j < sub.cols(); ++j) {
    max_col = std::max(max_col, sub.col(j).norm());
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  if (svd.singularValues().minCoeff() < rank_tolerance(A, max_col)) {
    throw RankDeficient("support columns are rank deficient");
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
  return qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), S.size());
}

}  // namespace

Eigen::VectorXd least_squares_on_support(const SensingMatrix& A,
                                         const Eigen::VectorXd& y,
                                         const IndexSet& S) {
  if (y.size() != A.rows()) {
    throw DimensionMismatch("least_squares_on_support: y length != rows");
  }
  S.require_within(A.cols());
  if (S.empty()) return Eigen::VectorXd(0);
  if (S.size() > A.rows()) {
    throw RankDeficient("least_squares_on_support: |S| > rows");
  }
  const Eigen::MatrixXd sub = A.submatrix(S);
  double max_col = 0.0;
  for (Eigen::Index j = 0; j < sub.cols(); ++j) {
    max_col = std::max(max_col, sub.col(j).norm());
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  if (svd.singularValues().minCoeff() < rank_tolerance(A, max_col)) {
    throw RankDeficient("least_squares_on_support: rank deficient support");
  }
  return Eigen::HouseholderQR<Eigen::MatrixXd>(sub).solve(y);
}

Eigen::VectorXd orthogonal_complement_apply(const SensingMatrix& A,
                                            const IndexSet& S,
                                            const Eigen::VectorXd& v) {
  if (v.size() != A.rows()) {
    throw DimensionMismatch("orthogonal_complement_apply: v length != rows");
  }
  S.require_within(A.cols());
  if (S.empty()) return v;
  if (S.size() > A.rows()) {
    throw RankDeficient("orthogonal_complement_apply: |S| > rows");
  }
  const Eigen::MatrixXd q = orthonormal_basis(A, S);
  return v - q * (q.transpose() * v);
}

Eigen::VectorXd projected_column_norms(const SensingMatrix& A,
                                       const IndexSet& S,
                                       const IndexSet& candidates) {
  S.require_within(A.cols());
  candidates.require_within(A.cols());
  if (!S.set_intersection(candidates).empty()) {
    throw InvalidParams("projected_column_norms: candidates overlap support");
  }
  Eigen::VectorXd out(candidates.size());
  if (S.empty()) {
    out.setOnes();  // unit-norm columns
    return out;
  }
  const Eigen::MatrixXd q = orthonormal_basis(A, S);
  for (int j = 0; j < candidates.size(); ++j) {
    const Eigen::VectorXd col = A.column(candidates[j]);
    out(j) = (col - q * (q.transpose() * col)).norm();
  }
  return out;
}

}  // namespace pursuit::linalg
