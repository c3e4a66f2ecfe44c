#pragma once

#include <Eigen/Dense>
#include <string>

#include "pursuit/sensing_matrix.hpp"
#include "pursuit/signals.hpp"

namespace pursuit::io {

/// Matrix fixtures: first line "m,n", then m rows of n comma-separated
/// decimals written with 17 significant digits (round-trip exact).
void save_matrix_csv(const SensingMatrix& A, const std::string& path);
SensingMatrix load_matrix_csv(const std::string& path);

/// Signal fixtures: header line "n,K", then K lines "index,value".
void save_signal_csv(const signals::SparseSignal& x, const std::string& path);
signals::SparseSignal load_signal_csv(const std::string& path);

/// Plain vectors (e.g. measurement files): one decimal per line.
void save_vector(const Eigen::VectorXd& v, const std::string& path);
Eigen::VectorXd load_vector(const std::string& path);

}  // namespace pursuit::io
