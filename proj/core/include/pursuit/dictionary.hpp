#pragma once

#include <cstdint>

#include "pursuit/sensing_matrix.hpp"

namespace pursuit::dict {

enum class Kind { Gaussian, Correlated };

/// Recipe for a random sensing matrix.  Gaussian: entries i.i.d. N(0, 1/m).
/// Correlated: entries n_ij + t_j with n_ij i.i.d. N(0, 1/m) and a per-column
/// offset t_j i.i.d. U[0, T].  Columns are l2-normalized afterwards in both
/// cases.  Generation is deterministic for a fixed seed: the Gaussian entries
/// come from one substream in column-major order and the offsets t_j from a
/// second substream, so Correlated with T = 0 reproduces Gaussian bit for bit.
struct DictionarySpec {
  int m = 0;
  int n = 0;
  Kind kind = Kind::Gaussian;
  double correlation = 0.0;  // T; only meaningful for Kind::Correlated
  std::uint64_t seed = 0;

  void validate() const;
};

SensingMatrix generate(const DictionarySpec& spec);

/// Largest absolute inner product between distinct columns.
double coherence(const SensingMatrix& A);

/// Average absolute inner product over unordered column pairs.
double mean_coherence(const SensingMatrix& A);

}  // namespace pursuit::dict
