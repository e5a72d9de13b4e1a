// Rank-two Gram matrices of positive binary forms from partitions of the
// complex roots.
#ifndef GRAMSPEC_BINARY_HPP
#define GRAMSPEC_BINARY_HPP

#include <cstdint>
#include <vector>

#include "gramspec/gram.hpp"

namespace gramspec {

enum class PartitionKind {
  kConjugateSwapped,  // conjugation exchanges the blocks: real PSD
  kConjugateFixed,    // conjugation fixes each block: real indefinite
  kComplex,           // neither: genuinely complex
};
const char* to_string(PartitionKind k);

/// One block of a split of the 2d roots into two blocks of size d. Indices
/// refer to the order of `RootList::expand`-compatible root lists returned by
/// roots(); the other block is the complement.
struct RootPartition {
  std::vector<int> block;
  PartitionKind kind = PartitionKind::kComplex;
  std::uint64_t mask = 0;  // bit i set iff root i is in the block
};

struct RankTwoGram {
  Eigen::MatrixXd matrix;  // size d+1, grlex order s^d, s^(d-1)t, ..., t^d
  RootPartition partition;
  bool psd = false;
  /// f = p^2 + q^2 when psd, f = p^2 - q^2 otherwise.
  PolynomialD p{2}, q{2};
};

enum class Rank2Which { kPsd, kReal, kAll };

struct Rank2Enumeration {
  std::vector<RankTwoGram> psd;         // 2^(d-1) matrices
  std::vector<RankTwoGram> indefinite;  // C(d, d/2)/2 matrices for even d
  long long complex_count = 0;          // C(2d, d)/2, not materialized
  RootList roots;
};

/// Roots of f, checked to be non-real and pairwise distinct. Throws RealRoot
/// or RepeatedRoot.
RootList checked_roots(const BinaryForm& f, double separation_tol = 1e-6);

/// The d roots with positive imaginary part, in the order returned by roots().
std::vector<Complex> upper_roots(const RootList& r);

/// Coefficient vector (grlex, length d+1) of scale * prod (s - w t).
VectorC factor_vector(const std::vector<Complex>& w, Complex scale);

Rank2Enumeration enumerate_rank2(const BinaryForm& f, Rank2Which which = Rank2Which::kAll);

long long binomial(int n, int k);

struct KummerNodeSet {
  std::vector<Eigen::Vector4cd> rank3;  // (u^2, u, 1, 0) for the six roots
  std::vector<MatrixC> rank2;           // ten complex symmetric rank-2 Gram matrices
  std::vector<RootPartition> partitions;
};

/// Nodes of the Kummer quartic of a positive sextic with distinct roots.
KummerNodeSet kummer_nodes(const BinaryForm& f);

}  // namespace gramspec

#endif  // GRAMSPEC_BINARY_HPP
