// Binary sextics: the Gram pencil, its Kummer quartic, the dual Kummer
// surface F = W^2 F2 + 2W F1 + F0, closed-form linear optimization and
// surface sampling.
#ifndef GRAMSPEC_KUMMER_HPP
#define GRAMSPEC_KUMMER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gramspec/binary.hpp"

namespace gramspec {

/// f = a6 s^6 - 6a5 s^5t + 15a4 s^4t^2 - 20a3 s^3t^3 + 15a2 s^2t^4 - 6a1 st^5 + a0 t^6.
template <typename Scalar>
struct Sextic {
  std::array<Scalar, 7> a{};

  const Scalar& operator[](int i) const { return a[i]; }
  Scalar& operator[](int i) { return a[i]; }

  /// Coefficients c_k of s^(6-k) t^k.
  std::array<Scalar, 7> binomial_coeffs() const {
    return {a[6], Scalar(-6) * a[5], Scalar(15) * a[4], Scalar(-20) * a[3], Scalar(15) * a[2], Scalar(-6) * a[1], a[0]};
  }
  static Sextic from_binomial_coeffs(const std::array<Scalar, 7>& c) {
    Sextic s;
    s.a = {c[6], c[5] / Scalar(-6), c[4] / Scalar(15), c[3] / Scalar(-20), c[2] / Scalar(15), c[1] / Scalar(-6), c[0]};
    return s;
  }
  Polynomial<Scalar> to_polynomial() const {
    const auto c = binomial_coeffs();
    Polynomial<Scalar> p(2);
    for (int k = 0; k <= 6; ++k) p.add_term({6 - k, k}, c[k]);
    return p;
  }
};

using SexticCoeffs = Sextic<double>;
using SexticCoeffsQ = Sextic<Rational>;

SexticCoeffs sextic_coeffs(const BinaryForm& f);
BinaryForm to_binary_form(const SexticCoeffs& a);

/// Row-major entries of w A0 + x Bx + y By + z Bz: the Gram matrix of f
/// with the constant parts scaled by w.
template <typename T, typename Scalar>
std::vector<T> homogenized_entries(const Sextic<Scalar>& s, const T& x, const T& y, const T& z, const T& w) {
  const auto& a = s.a;
  const auto e = [&](const Scalar& cw, int cx, int cy, int cz) {
    return cw * w + Scalar(cx) * x + Scalar(cy) * y + Scalar(cz) * z;
  };
  const T m01 = e(Scalar(-3) * a[5], 0, 0, 0), m02 = e(Scalar(3) * a[4], 0, 0, 1), m03 = e(-a[3], 0, -1, 0);
  const T m12 = e(Scalar(-9) * a[3], 0, 1, 0), m13 = e(Scalar(3) * a[2], 1, 0, 0), m23 = e(Scalar(-3) * a[1], 0, 0, 0);
  return {e(a[6], 0, 0, 0), m01, m02, m03,
          m01, e(Scalar(9) * a[4], 0, 0, -2), m12, m13,
          m02, m12, e(Scalar(9) * a[2], -2, 0, 0), m23,
          m03, m13, m23, e(a[0], 0, 0, 0)};
}

/// w = 1 gives every Gram matrix of f in the basis s^3, s^2t, st^2, t^3.
template <typename T, typename Scalar>
Eigen::Matrix<T, 4, 4> homogenized_gram(const Sextic<Scalar>& s, const T& x, const T& y, const T& z, const T& w) {
  const std::vector<T> v = homogenized_entries(s, x, y, z, w);
  Eigen::Matrix<T, 4, 4> m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = v[i];
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> gram_parametrization(const Sextic<Scalar>& s, const Scalar& x, const Scalar& y,
                                                 const Scalar& z) {
  return homogenized_gram<Scalar>(s, x, y, z, Scalar(1));
}

/// (x, y, z) of a Gram matrix of f in the parametrization above.
template <typename Derived, typename Scalar>
Eigen::Matrix<typename Derived::Scalar, 3, 1> gram_coordinates(const Sextic<Scalar>& s,
                                                               const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  return {m(1, 3) - T(3) * T(s.a[2]), -m(0, 3) - T(s.a[3]), m(0, 2) - T(3) * T(s.a[4])};
}

/// det(homogenized_gram) as a quartic in (x, y, z, w).
template <typename Scalar>
Polynomial<Scalar> kummer_quartic(const Sextic<Scalar>& s) {
  using P = Polynomial<Scalar>;
  const auto m = homogenized_entries<P>(s, P::variable(4, 0), P::variable(4, 1), P::variable(4, 2), P::variable(4, 3));
  std::array<int, 4> perm{0, 1, 2, 3};
  P det(4);
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
    P term = m[perm[0]] * m[4 + perm[1]] * m[8 + perm[2]] * m[12 + perm[3]];
    if (inversions % 2) term = -term;
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// F = W^2 F2 + 2W F1 + F0 with F2, F1, F0 in (X, Y, Z).
template <typename Scalar>
struct DualKummer {
  Polynomial<Scalar> f2{3}, f1{3}, f0{3};

  /// F as a quartic in (X, Y, Z, W).
  Polynomial<Scalar> full() const {
    using P = Polynomial<Scalar>;
    const auto lift = [](const P& p) {
      P q(4);
      for (const auto& [e, c] : p.terms()) q.add_term({e[0], e[1], e[2], 0}, c);
      return q;
    };
    const P w = P::variable(4, 3);
    return w * w * lift(f2) + P::constant(4, Scalar(2)) * w * lift(f1) + lift(f0);
  }
};

template <typename Scalar>
DualKummer<Scalar> dual_kummer(const Sextic<Scalar>& s) {
  const auto& a = s.a;
  DualKummer<Scalar> d;
  const auto t = [](Polynomial<Scalar>& p, int i, int j, int k, const Scalar& c) { p.add_term({i, j, k}, c); };
  const auto n = [](long long v) { return Scalar(v); };

  t(d.f2, 0, 2, 0, n(-1));
  t(d.f2, 1, 0, 1, n(4));

  t(d.f1, 3, 0, 0, a[0]);
  t(d.f1, 2, 1, 0, n(3) * a[1]);
  t(d.f1, 1, 2, 0, n(3) * a[2]);
  t(d.f1, 0, 3, 0, a[3]);
  t(d.f1, 2, 0, 1, n(3) * a[2]);
  t(d.f1, 1, 1, 1, n(6) * a[3]);
  t(d.f1, 0, 2, 1, n(3) * a[4]);
  t(d.f1, 1, 0, 2, n(3) * a[4]);
  t(d.f1, 0, 1, 2, n(3) * a[5]);
  t(d.f1, 0, 0, 3, a[6]);

  t(d.f0, 4, 0, 0, n(9) * (a[0] * a[2] - a[1] * a[1]));
  t(d.f0, 3, 1, 0, n(18) * (a[0] * a[3] - a[1] * a[2]));
  t(d.f0, 2, 2, 0, n(3) * (n(5) * a[0] * a[4] - n(2) * a[1] * a[3] - n(3) * a[2] * a[2]));
  t(d.f0, 1, 3, 0, n(6) * (a[0] * a[5] - a[2] * a[3]));
  t(d.f0, 0, 4, 0, a[0] * a[6] - a[3] * a[3]);
  t(d.f0, 3, 0, 1, n(6) * (-a[0] * a[4] + n(10) * a[1] * a[3] - n(9) * a[2] * a[2]));
  t(d.f0, 2, 1, 1, n(6) * (-a[0] * a[5] + n(12) * a[1] * a[4] - n(11) * a[2] * a[3]));
  t(d.f0, 1, 2, 1, n(2) * (-a[0] * a[6] + n(18) * a[1] * a[5] - n(9) * a[2] * a[4] - n(8) * a[3] * a[3]));
  t(d.f0, 0, 3, 1, n(6) * (a[1] * a[6] - a[3] * a[4]));
  t(d.f0, 0, 0, 4, n(9) * (a[4] * a[6] - a[5] * a[5]));
  t(d.f0, 2, 0, 2, a[0] * a[6] - n(18) * a[1] * a[5] + n(117) * a[2] * a[4] - n(100) * a[3] * a[3]);
  t(d.f0, 1, 1, 2, n(6) * (-a[1] * a[6] + n(12) * a[2] * a[5] - n(11) * a[3] * a[4]));
  t(d.f0, 0, 2, 2, n(3) * (n(5) * a[2] * a[6] - n(2) * a[3] * a[5] - n(3) * a[4] * a[4]));
  t(d.f0, 1, 0, 3, n(6) * (-a[2] * a[6] + n(10) * a[3] * a[5] - n(9) * a[4] * a[4]));
  t(d.f0, 0, 1, 3, n(18) * (a[3] * a[6] - a[4] * a[5]));
  return d;
}

struct KummerCandidate {
  double value = 0.0;  // c . (x, y, z)
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();
  int rank = 0;
  double lambda_min = 0.0;
  bool psd = false;
};

struct ClosedFormResult {
  double f2 = 0, f1 = 0, f0 = 0;
  double discriminant = 0;  // F1^2 - F0 F2
  /// Critical values of the two rank-3 critical points; complex when the
  /// discriminant is negative.
  std::array<Complex, 2> critical_values{};
  bool real_critical = false;
  std::vector<KummerCandidate> rank3;     // empty unless real_critical
  std::vector<Complex> rank2_values;      // the ten node values c . (x, y, z)
  std::vector<KummerCandidate> rank2;     // the real PSD nodes
  KummerCandidate maximum, minimum;       // over PSD candidates
  std::string message;
};

/// Critical values are the roots W of F(c, W) = 0 with c . (x, y, z) = -W;
/// the critical point is grad F / dF/dW at (c, W). Throws
/// DegenerateDirection when F2(c) = 0.
ClosedFormResult optimize_closed_form(const SexticCoeffs& a, const Eigen::Vector3d& c, double psd_tol = 1e-9);

struct ChartCheck {
  double ratio = 0.0;     // F = ratio * det on the chart
  double residual = 0.0;  // max |F - ratio det| / max |F|
  int points = 0;
};

/// Compares F on the chart X - Y/5 - Z + W = 1 with det(Gram) under
/// x = X+Y+Z+1, y = X+Y-Z-1/5, z = X-Y-3Z-1 at `points` random points.
/// Throws NumericalFailure when the two are not proportional.
ChartCheck chart_check(const SexticCoeffs& a, int points = 50, std::uint64_t seed = 1, double tol = 1e-9);

struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  std::string to_obj(const std::string& name = "") const;
};

struct SurfaceOptions {
  int resolution = 64;
  bool include_dual = true;
  double dual_extent = 0.0;  // half-width of the dual (X, Y, Z) box; 0 picks one from the primal box
  int threads = 0;           // 0: hardware concurrency
};

struct SurfaceSample {
  Mesh primal;  // PSD boundary of GS(f) in (x, y, z)
  Mesh dual;    // F = 0 on the chart W = 1
  Eigen::Vector3d lower, upper;  // primal sampling box
  double spacing = 0.0;
};

/// Marching tetrahedra on lambda_min of the Gram pencil over a box enclosing
/// GS(f), with vertices refined by bisection on each crossing edge.
SurfaceSample sample_surface(const SexticCoeffs& a, const SurfaceOptions& opts = {});

}  // namespace gramspec

#endif  // GRAMSPEC_KUMMER_HPP
