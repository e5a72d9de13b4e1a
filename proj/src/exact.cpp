#include "gramspec/exact.hpp"

#include <cstdlib>
#include <numeric>

namespace gramspec {

MatrixQ rref(MatrixQ a, std::vector<int>* pivots) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    a.row(p).swap(a.row(r));
    const Rational inv = Rational(1) / a(r, c);
    a.row(r) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      a.row(i) -= f * a.row(r);
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return a;
}

int rank(const MatrixQ& a) {
  std::vector<int> piv;
  rref(a, &piv);
  return static_cast<int>(piv.size());
}

std::vector<VectorQ> nullspace(const MatrixQ& a) {
  std::vector<int> piv;
  const MatrixQ r = rref(a, &piv);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (int p : piv) is_pivot[p] = true;
  std::vector<VectorQ> basis;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    VectorQ v = VectorQ::Zero(n);
    v(free) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v(piv[i]) = -r(static_cast<Eigen::Index>(i), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

IntVector primitive_integer(const VectorQ& v) {
  Integer lcm = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Integer d = denominator(v(i));
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  std::vector<Integer> ints(v.size());
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    ints[i] = numerator(v(i)) * (lcm / denominator(v(i)));
    g = boost::multiprecision::gcd(g, abs(ints[i]));
  }
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = (g == 0 ? Integer(0) : Integer(ints[i] / g)).convert_to<long long>();
  return out;
}

long long determinant(const IntMatrix& in) {
  const Eigen::Index n = in.rows();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = in(i, j);
  int sign = 1;
  __int128 prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * static_cast<long long>(a[n - 1][n - 1]);
}

bool LatticeDiagonalization::saturated() const {
  for (long long d : diagonal)
    if (d != 1) return false;
  return true;
}

LatticeDiagonalization diagonalize(IntMatrix a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  LatticeDiagonalization out;
  out.column_transform = IntMatrix::Identity(cols, cols);
  IntMatrix& v = out.column_transform;
  Eigen::Index t = 0;
  while (t < rows && t < cols) {
    // Bring the smallest nonzero entry of the trailing block to (t, t).
    Eigen::Index bi = -1, bj = -1;
    for (Eigen::Index i = t; i < rows; ++i)
      for (Eigen::Index j = t; j < cols; ++j)
        if (a(i, j) != 0 && (bi < 0 || std::llabs(a(i, j)) < std::llabs(a(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi < 0) break;
    a.row(t).swap(a.row(bi));
    a.col(t).swap(a.col(bj));
    v.col(t).swap(v.col(bj));
    for (;;) {
      bool clean = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        const long long q = a(i, t) / a(t, t);
        if (q != 0) a.row(i) -= q * a.row(t);
        if (a(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        const long long q = a(t, j) / a(t, t);
        if (q != 0) {
          a.col(j) -= q * a.col(t);
          v.col(j) -= q * v.col(t);
        }
        if (a(t, j) != 0) clean = false;
      }
      if (clean) break;
      // A smaller remainder appeared in row/column t; move it to the pivot.
      Eigen::Index si = t, sj = t;
      for (Eigen::Index i = t + 1; i < rows; ++i)
        if (a(i, t) != 0 && std::llabs(a(i, t)) < std::llabs(a(si, sj))) {
          si = i;
          sj = t;
        }
      for (Eigen::Index j = t + 1; j < cols; ++j)
        if (a(t, j) != 0 && std::llabs(a(t, j)) < std::llabs(a(si, sj))) {
          si = t;
          sj = j;
        }
      a.row(t).swap(a.row(si));
      a.col(t).swap(a.col(sj));
      v.col(t).swap(v.col(sj));
    }
    out.diagonal.push_back(std::llabs(a(t, t)));
    ++t;
  }
  out.rank = static_cast<int>(t);
  return out;
}

}  // namespace gramspec
