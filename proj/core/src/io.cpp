#include "pursuit/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "pursuit/error.hpp"

namespace pursuit::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  return stream;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open for reading: " + path);
  return stream;
}

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

double parse_value(const std::string& token, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw IoError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw IoError("bad numeric value '" + token + "' in " + path);
  }
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream stream(line);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const auto begin = token.find_first_not_of(" \t\r");
    const auto end = token.find_last_not_of(" \t\r");
    out.push_back(begin == std::string::npos
                      ? std::string()
                      : token.substr(begin, end - begin + 1));
  }
  return out;
}

}  // namespace

void save_matrix_csv(const SensingMatrix& A, const std::string& path) {
  auto stream = open_out(path);
  stream << A.rows() << "," << A.cols() << "\n";
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (j > 0) stream << ",";
      stream << format_value(A.matrix()(i, j));
    }
    stream << "\n";
  }
  if (!stream) throw IoError("write failed: " + path);
}

SensingMatrix load_matrix_csv(const std::string& path) {
  auto stream = open_in(path);
  std::string line;
  if (!std::getline(stream, line)) throw IoError("empty matrix file: " + path);
  const auto header = split_commas(line);
  if (header.size() != 2) throw IoError("bad matrix header in " + path);
  const int m = static_cast<int>(parse_value(header[0], path));
  const int n = static_cast<int>(parse_value(header[1], path));
  if (m < 1 || n < 1) throw IoError("bad matrix dimensions in " + path);
  Eigen::MatrixXd entries(m, n);
  for (int i = 0; i < m; ++i) {
    if (!std::getline(stream, line)) throw IoError("truncated matrix: " + path);
    const auto tokens = split_commas(line);
    if (static_cast<int>(tokens.size()) != n) {
      throw IoError("bad row width in " + path);
    }
    for (int j = 0; j < n; ++j) entries(i, j) = parse_value(tokens[static_cast<std::size_t>(j)], path);
  }
  return SensingMatrix(std::move(entries));
}

void save_signal_csv(const signals::SparseSignal& x, const std::string& path) {
  auto stream = open_out(path);
  stream << x.n << "," << x.sparsity() << "\n";
  for (int j = 0; j < x.sparsity(); ++j) {
    stream << x.support[j] << "," << format_value(x.values(j)) << "\n";
  }
  if (!stream) throw IoError("write failed: " + path);
}

signals::SparseSignal load_signal_csv(const std::string& path) {
  auto stream = open_in(path);
  std::string line;
  if (!std::getline(stream, line)) throw IoError("empty signal file: " + path);
  const auto header = split_commas(line);
  if (header.size() != 2) throw IoError("bad signal header in " + path);
  const int n = static_cast<int>(parse_value(header[0], path));
  const int k = static_cast<int>(parse_value(header[1], path));
  std::vector<std::pair<int, double>> entries;
  for (int j = 0; j < k; ++j) {
    if (!std::getline(stream, line)) throw IoError("truncated signal: " + path);
    const auto tokens = split_commas(line);
    if (tokens.size() != 2) throw IoError("bad signal row in " + path);
    entries.emplace_back(static_cast<int>(parse_value(tokens[0], path)),
                         parse_value(tokens[1], path));
  }
  std::sort(entries.begin(), entries.end());
  std::vector<int> support;
  Eigen::VectorXd values(k);
  for (int j = 0; j < k; ++j) {
    support.push_back(entries[static_cast<std::size_t>(j)].first);
    values(j) = entries[static_cast<std::size_t>(j)].second;
  }
  return signals::SparseSignal(n, IndexSet(std::move(support)), std::move(values));
}

void save_vector(const Eigen::VectorXd& v, const std::string& path) {
  auto stream = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) stream << format_value(v(i)) << "\n";
  if (!stream) throw IoError("write failed: " + path);
}

Eigen::VectorXd load_vector(const std::string& path) {
  auto stream = open_in(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    values.push_back(parse_value(line, path));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = values[i];
  }
  return out;
}

}  // namespace pursuit::io
