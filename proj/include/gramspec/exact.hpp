// Exact linear algebra over Q and Z used by the polytope and Gram modules.
#ifndef GRAMSPEC_EXACT_HPP
#define GRAMSPEC_EXACT_HPP

#include <vector>

#include "gramspec/types.hpp"

namespace gramspec {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Reduced row echelon form; pivot columns are appended to `pivots`.
MatrixQ rref(MatrixQ a, std::vector<int>* pivots = nullptr);

int rank(const MatrixQ& a);

/// Basis of {x : a x = 0}, one vector per free column.
std::vector<VectorQ> nullspace(const MatrixQ& a);

/// Smallest integer multiple of v with coprime entries (sign preserved).
IntVector primitive_integer(const VectorQ& v);

/// Exact determinant of a small integer matrix (fraction-free Bareiss).
long long determinant(const IntMatrix& a);

/// Diagonalization U·A·V = diag(d_1..d_k, 0..) by unimodular row and column
/// operations. Only the column transform V is kept: for w in the rational
/// row span of A, (w·V)[0..k) are the coordinates of w in a basis of the
/// saturated lattice span(A) ∩ Z^n, and the remaining entries vanish.
struct LatticeDiagonalization {
  std::vector<long long> diagonal;  // |d_i|, i < rank
  IntMatrix column_transform;        // V, n x n, unimodular
  int rank = 0;
  /// True iff the rows of A generate span(A) ∩ Z^n.
  bool saturated() const;
};

LatticeDiagonalization diagonalize(IntMatrix a);

}  // namespace gramspec

#endif  // GRAMSPEC_EXACT_HPP
