#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "gramspec/kummer.hpp"
#include "gramspec/sdp.hpp"

using namespace gramspec;

namespace {

const double kSqrt5 = std::sqrt(5.0);

BinaryForm ex43() { return BinaryForm({1, -2, 5, -4, 5, -2, 1}); }

BinaryForm random_positive_sextic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.3, 1.5);
  std::vector<Complex> w;
  while (w.size() < 6) {
    const Complex u(re(rng), im(rng));
    bool ok = true;
    for (const Complex& v : w) ok = ok && std::abs(u - v) > 0.25 && std::abs(std::conj(u) - v) > 0.25;
    if (!ok) continue;
    w.push_back(u);
    w.push_back(std::conj(u));
  }
  std::vector<double> c;
  for (const Complex& v : product_of_linear_factors(w)) c.push_back(v.real());
  return BinaryForm(c);
}

AffineSection section_of(const SexticCoeffs& a) {
  AffineSection s;
  s.offset = gram_parametrization(a, 0.0, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(k) = 1;
    s.basis.push_back(gram_parametrization(a, e(0), e(1), e(2)) - s.offset);
  }
  return s;
}

Eigen::Matrix4d displayed_matrix(double sign) {
  const double p = (1 + sign * kSqrt5) / 2, q = (1 - sign * kSqrt5) / 2;
  Eigen::Matrix4d m;
  m << 1, -1, p, 0, -1, 4 - sign * kSqrt5, -2, q, p, -2, 4 + sign * kSqrt5, -1, 0, q, -1, 1;
  return m;
}

double min_eig(const Eigen::Matrix4d& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST_CASE("signed-binomial coefficients of the example sextic") {
  const SexticCoeffs a = sextic_coeffs(ex43());
  const std::array<double, 7> want{1, 1.0 / 3, 1.0 / 3, 0.2, 1.0 / 3, 1.0 / 3, 1};
  for (int i = 0; i <= 6; ++i) CHECK(a[i] == doctest::Approx(want[i]).epsilon(1e-15));
  const auto back = to_binary_form(a).coeffs();
  for (int k = 0; k <= 6; ++k) CHECK(back[k] == doctest::Approx(ex43().coeffs()[k]).epsilon(1e-15));

  SexticCoeffsQ q;
  q.a = {1, Rational(1, 3), Rational(1, 3), Rational(1, 5), Rational(1, 3), Rational(1, 3), 1};
  const PolynomialQ f = q.to_polynomial();
  CHECK(f.coeff({5, 1}) == -2);
  CHECK(f.coeff({3, 3}) == -4);
  CHECK(f.coeff({2, 4}) == 5);
}

TEST_CASE("Gram parametrization") {
  const SexticCoeffs a = sextic_coeffs(ex43());
  Eigen::Matrix4d mid;
  mid << 1, -1, 1, -0.2, -1, 3, -1.8, 1, 1, -1.8, 3, -1, -0.2, 1, -1, 1;
  CHECK((gram_parametrization(a, 0.0, 0.0, 0.0) - mid).norm() < 1e-14);

  for (double sign : {1.0, -1.0}) {
    const double x = -(1 + sign * kSqrt5) / 2, y = -0.2, z = -(1 - sign * kSqrt5) / 2;
    CHECK((gram_parametrization(a, x, y, z) - displayed_matrix(sign)).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::Vector3d back = gram_coordinates(a, displayed_matrix(sign));
    CHECK((back - Eigen::Vector3d(x, y, z)).norm() < 1e-14);
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Exponent> m{{3, 0}, {2, 1}, {1, 2}, {0, 3}};
  for (int t = 0; t < 10; ++t) {
    const SexticCoeffs b = sextic_coeffs(random_positive_sextic(rng));
    const Eigen::Matrix4d g = gram_parametrization(b, u(rng), u(rng), u(rng));
    const PolynomialD p = gram_apply(m, g);
    CHECK(max_abs_diff(p, b.to_polynomial()) < 1e-12);
  }
}

TEST_CASE("Kummer quartic") {
  std::mt19937_64 rng(4);
  const SexticCoeffs a = sextic_coeffs(random_positive_sextic(rng));
  const PolynomialD k = kummer_quartic(a);
  CHECK(k.is_homogeneous());
  int top = 0;
  for (const auto& [e, c] : k.terms())
    if (e[3] == 0) top = std::max(top, e[0] + e[1] + e[2]);
  CHECK(top == 4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 5; ++t) {
    const double x = u(rng), y = u(rng), z = u(rng);
    CHECK(k.eval(std::vector<double>{x, y, z, 1.0}) ==
          doctest::Approx(gram_parametrization(a, x, y, z).determinant()).epsilon(1e-10));
  }

  // Root nodes (u^2 : u : 1 : 0).
  const RootList r = roots(ex43());
  const PolynomialD k43 = kummer_quartic(sextic_coeffs(ex43()));
  for (const Root& root : r.roots) {
    const Complex u0 = root.value;
    const std::vector<Complex> pt{u0 * u0, u0, 1.0, 0.0};
    CHECK(std::abs(k43.eval(pt)) < 1e-12);
    const Eigen::Matrix4cd m = homogenized_gram<Complex>(sextic_coeffs(ex43()), pt[0], pt[1], pt[2], pt[3]);
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(m).singularValues();
    CHECK(sv(3) < 1e-12 * sv(0));
    CHECK(sv(2) > 1e-6 * sv(0));
  }
}

TEST_CASE("dual Kummer coefficients") {
  SexticCoeffsQ a;
  a.a = {2, 3, 5, 7, 11, 13, 17};
  const DualKummer<Rational> d = dual_kummer(a);
  CHECK(d.f2.coeff({0, 2, 0}) == -1);
  CHECK(d.f2.coeff({1, 0, 1}) == 4);
  CHECK(d.f2.terms().size() == 2);

  const std::vector<std::pair<Exponent, int>> f1{{{3, 0, 0}, 2},  {{2, 1, 0}, 9},  {{2, 0, 1}, 15}, {{1, 2, 0}, 15},
                                                 {{1, 1, 1}, 42}, {{1, 0, 2}, 33}, {{0, 3, 0}, 7},  {{0, 2, 1}, 33},
                                                 {{0, 1, 2}, 39}, {{0, 0, 3}, 17}};
  for (const auto& [e, v] : f1) CHECK(d.f1.coeff(e) == v);
  CHECK(d.f1.terms().size() == f1.size());

  const std::vector<std::pair<Exponent, int>> f0{
      {{4, 0, 0}, 9},     {{3, 1, 0}, -18},  {{3, 0, 1}, -222}, {{2, 2, 0}, -21},  {{2, 1, 1}, -90},
      {{2, 0, 2}, 867},   {{1, 3, 0}, -54},  {{1, 2, 1}, -438}, {{1, 1, 2}, -708}, {{1, 0, 3}, -1584},
      {{0, 4, 0}, -15},   {{0, 3, 1}, -156}, {{0, 2, 2}, -360}, {{0, 1, 3}, -432}, {{0, 0, 4}, 162}};
  for (const auto& [e, v] : f0) CHECK(d.f0.coeff(e) == v);
  CHECK(d.f0.terms().size() == f0.size());

  const PolynomialQ full = d.full();
  CHECK(full.nvars() == 4);
  CHECK(full.is_homogeneous());
  CHECK(full.coeff({1, 0, 1, 2}) == 4);
  CHECK(full.coeff({0, 0, 3, 1}) == 34);
}

TEST_CASE("dual Kummer values for the example objective") {
  const DualKummer<double> d = dual_kummer(sextic_coeffs(ex43()));
  const std::vector<double> c{1, 0, -1};
  CHECK(d.f2.eval(c) == doctest::Approx(-4));
  CHECK(std::abs(d.f1.eval(c)) < 1e-14);
  CHECK(d.f0.eval(c) == doctest::Approx(20));
  const PolynomialD full = d.full();
  for (double w : {kSqrt5, -kSqrt5}) CHECK(std::abs(full.eval(std::vector<double>{1, 0, -1, w})) < 1e-12);
}

TEST_CASE("tangent planes of the Kummer surface lie on the dual surface") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int t = 0; t < 5; ++t) {
    const SexticCoeffs a = sextic_coeffs(random_positive_sextic(rng));
    const PolynomialD full = dual_kummer(a).full();
    // Boundary point: bisection on lambda_min along a ray from the midpoint.
    const Eigen::Vector3d start = solve_feasibility(section_of(a)).coordinates;
    const Eigen::Vector3d dir = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    double lo = 0, hi = 1;
    while (min_eig(gram_parametrization(a, start(0) + hi * dir(0), start(1) + hi * dir(1), start(2) + hi * dir(2))) > 0)
      hi *= 2;
    for (int i = 0; i < 200; ++i) {
      const double mid = (lo + hi) / 2;
      const Eigen::Vector3d p = start + mid * dir;
      (min_eig(gram_parametrization(a, p(0), p(1), p(2))) > 0 ? lo : hi) = mid;
    }
    const Eigen::Vector3d p = start + lo * dir;
    // Central differences of det(w A0 + x Bx + y By + z Bz).
    const double h = 1e-5;
    Eigen::Vector4d base(p(0), p(1), p(2), 1.0), grad;
    for (int k = 0; k < 4; ++k) {
      Eigen::Vector4d up = base, dn = base;
      up(k) += h;
      dn(k) -= h;
      const auto det = [&](const Eigen::Vector4d& v) { return homogenized_gram<double>(a, v(0), v(1), v(2), v(3)).determinant(); };
      grad(k) = (det(up) - det(dn)) / (2 * h);
    }
    grad /= grad.norm();
    const double v = full.eval(std::vector<double>{grad(0), grad(1), grad(2), grad(3)});
    double scale = 0;
    for (const auto& [e, c] : full.terms()) scale = std::max(scale, std::abs(c));
    CHECK(std::abs(v) < 1e-6 * scale);
  }
}

TEST_CASE("chart restriction is proportional to the determinant") {
  const ChartCheck cc = chart_check(sextic_coeffs(ex43()));
  CHECK(cc.points == 50);
  CHECK(cc.residual < 1e-9);
  CHECK(cc.ratio == doctest::Approx(0.25).epsilon(1e-12));

  // Exact comparison at rational points.
  SexticCoeffsQ a;
  a.a = {1, Rational(1, 3), Rational(1, 3), Rational(1, 5), Rational(1, 3), Rational(1, 3), 1};
  const PolynomialQ full = dual_kummer(a).full();
  const PolynomialQ det = kummer_quartic(a);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (int t = 0; t < 50; ++t) {
    const Rational X(num(rng), den(rng)), Y(num(rng), den(rng)), Z(num(rng), den(rng));
    const Rational W = 1 - X + Y / 5 + Z;
    const Rational fv = full.eval(std::vector<Rational>{X, Y, Z, W});
    const Rational dv = det.eval(std::vector<Rational>{X + Y + Z + 1, X + Y - Z - Rational(1, 5), X - Y - 3 * Z - 1, 1});
    CHECK(fv == Rational(1, 4) * dv);
  }

  std::mt19937_64 rng2(1);
  CHECK_THROWS_AS(chart_check(sextic_coeffs(random_positive_sextic(rng2))), Error);
}

TEST_CASE("closed-form optimization on the example") {
  const SexticCoeffs a = sextic_coeffs(ex43());
  const ClosedFormResult r = optimize_closed_form(a, Eigen::Vector3d(1, 0, -1));
  CHECK(r.f2 == doctest::Approx(-4));
  CHECK(r.real_critical);
  REQUIRE(r.rank3.size() == 2);
  std::array<double, 2> vals{r.critical_values[0].real(), r.critical_values[1].real()};
  std::sort(vals.begin(), vals.end());
  CHECK(std::abs(vals[0] + kSqrt5) < 1e-12);
  CHECK(std::abs(vals[1] - kSqrt5) < 1e-12);
  for (const KummerCandidate& k : r.rank3) {
    CHECK(k.rank == 3);
    CHECK(k.psd);
    const double sign = k.value > 0 ? -1.0 : 1.0;
    CHECK((k.matrix - displayed_matrix(sign)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(r.maximum.value == doctest::Approx(kSqrt5).epsilon(1e-12));
  CHECK(r.minimum.value == doctest::Approx(-kSqrt5).epsilon(1e-12));
  CHECK(r.maximum.rank == 3);
  CHECK(r.rank2_values.size() == 10);
  CHECK(r.rank2.size() == 4);
  for (const auto& k : r.rank2) {
    CHECK(k.rank == 2);
    CHECK(k.psd);
    CHECK(k.value < kSqrt5);
    CHECK(k.value > -kSqrt5);
  }
  CHECK_THROWS_AS(optimize_closed_form(a, Eigen::Vector3d(1, 0, 0)), Error);
}

TEST_CASE("closed form agrees with the interior-point solver") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const SexticCoeffs a = sextic_coeffs(random_positive_sextic(rng));
    const Eigen::Vector3d c(g(rng), g(rng), g(rng));
    const ClosedFormResult r = optimize_closed_form(a, c);
    const SdpSolution hi = solve_linear(section_of(a), c);
    const SdpSolution lo = solve_linear(section_of(a), -c);
    REQUIRE(hi.status == SdpStatus::kOptimal);
    CHECK(std::abs(hi.objective - r.maximum.value) < 1e-6 * std::max(1.0, std::abs(hi.objective)));
    CHECK(std::abs(-lo.objective - r.minimum.value) < 1e-6 * std::max(1.0, std::abs(lo.objective)));

    const ClosedFormResult neg = optimize_closed_form(a, -c);
    std::array<Complex, 2> p = r.critical_values, q = neg.critical_values;
    const double d1 = std::abs(p[0] + q[0]) + std::abs(p[1] + q[1]);
    const double d2 = std::abs(p[0] + q[1]) + std::abs(p[1] + q[0]);
    CHECK(std::min(d1, d2) < 1e-9 * (1 + std::abs(p[0]) + std::abs(p[1])));
  }
}

TEST_CASE("objective exposing a rank-2 vertex") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  const SexticCoeffs a = sextic_coeffs(random_positive_sextic(rng));
  const auto nodes = enumerate_rank2(to_binary_form(a)).psd;
  const Eigen::Matrix4d v = nodes[1].matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(v);
  const Eigen::Matrix<double, 4, 2> kernel = es.eigenvectors().leftCols(2);
  Eigen::Matrix2d rmat;
  rmat << g(rng), g(rng), g(rng), g(rng);
  const Eigen::Matrix4d k = kernel * (rmat * rmat.transpose() + Eigen::Matrix2d::Identity()) * kernel.transpose();
  // <K, M(x, y, z)> >= 0 on GS(f) with equality only at the vertex.
  const AffineSection s = section_of(a);
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) c(i) = (k.cwiseProduct(s.basis[i])).sum();
  const ClosedFormResult r = optimize_closed_form(a, c);
  const Eigen::Vector3d xv = gram_coordinates(a, v);
  CHECK(r.minimum.rank == 2);
  CHECK(r.minimum.value == doctest::Approx(c.dot(xv)).epsilon(1e-10));
  for (const auto& cand : r.rank3)
    if (cand.psd) CHECK(cand.value > r.minimum.value + 1e-8);
}

TEST_CASE("surface sampling") {
  const SexticCoeffs a = sextic_coeffs(ex43());
  SurfaceOptions opts;
  opts.resolution = 24;
  const SurfaceSample s = sample_surface(a, opts);
  REQUIRE(!s.primal.vertices.empty());
  REQUIRE(!s.primal.faces.empty());
  for (const auto& p : s.primal.vertices) {
    const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(gram_parametrization(a, p(0), p(1), p(2))).eigenvalues();
    CHECK(std::abs(ev(0)) < 1e-9);
    CHECK(ev(1) > -1e-9);
    CHECK((p.array() >= s.lower.array()).all());
    CHECK((p.array() <= s.upper.array()).all());
  }
  for (const auto& node : enumerate_rank2(ex43()).psd) {
    const Eigen::Vector3d x = gram_coordinates(a, node.matrix);
    double best = 1e9;
    for (const auto& p : s.primal.vertices) best = std::min(best, (p - x).norm());
    CHECK(best < 2 * s.spacing);
  }
  const DualKummer<double> d = dual_kummer(a);
  REQUIRE(!s.dual.vertices.empty());
  for (const auto& p : s.dual.vertices) {
    const std::vector<double> v{p(0), p(1), p(2)};
    const double f = d.f2.eval(v) + 2 * d.f1.eval(v) + d.f0.eval(v);
    CHECK(std::abs(f) < 1e-8 * (1 + std::pow(p.norm(), 4)));
  }
  const std::string obj = s.primal.to_obj("kummer");
  CHECK(obj.rfind("o kummer\nv ", 0) == 0);
  CHECK(std::count(obj.begin(), obj.end(), '\n') == static_cast<long>(1 + s.primal.vertices.size() + s.primal.faces.size()));
}
