#include <random>
#include <set>

#include "doctest.h"
#include "gramspec/polytope.hpp"

using namespace gramspec;

namespace {

std::vector<Exponent> sorted(std::vector<Exponent> v) {
  std::sort(v.begin(), v.end(), GrlexGreater());
  return v;
}

// β ∈ 2P tested against the facets of P directly, without building 2P.
bool in_double(const LatticePolytope& p, const Exponent& b) {
  const Hull& h = p.hull();
  for (Eigen::Index r = 0; r < h.equalities.rows(); ++r) {
    long long s = 0;
    for (std::size_t j = 0; j < b.size(); ++j) s += h.equalities(r, j) * (b[j] - 2 * h.base[j]);
    if (s != 0) return false;
  }
  const IntVector y = h.project(b);
  for (const Facet& f : h.facets)
    if (f.normal.dot(y) > 2 * f.offset) return false;
  return true;
}

bool brute_two_normal(const LatticePolytope& p) {
  const auto& pts = p.lattice_points();
  std::set<Exponent> sums;
  for (const auto& a : pts)
    for (const auto& b : pts) sums.insert(a + b);
  const std::size_t n = pts.front().size();
  Exponent lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = hi[i] = 2 * pts.front()[i];
    for (const auto& q : pts) {
      lo[i] = std::min(lo[i], 2 * q[i]);
      hi[i] = std::max(hi[i], 2 * q[i]);
    }
  }
  Exponent q = lo;
  for (;;) {
    if (in_double(p, q) && !sums.count(q)) return false;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (q[i] < hi[i]) {
        ++q[i];
        break;
      }
      q[i] = lo[i];
    }
    if (i == n) return true;
  }
}

}  // namespace

TEST_CASE("newton polytope of a sparse bivariate polynomial") {
  PolynomialD f(2);
  for (const Exponent& e : std::vector<Exponent>{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {3, 1}, {4, 2}})
    f.add_term(e, 1.0);
  const LatticePolytope q = newton_polytope(f);
  CHECK(q.vertices() == sorted({{0, 0}, {2, 0}, {4, 2}}));
  CHECK(q.dim() == 2);
  const LatticePolytope p = half_polytope(q);
  CHECK(p.vertices() == sorted({{0, 0}, {1, 0}, {2, 1}}));
  CHECK(p.lattice_points() == sorted({{0, 0}, {1, 0}, {2, 1}}));
}

TEST_CASE("trivial newton polytopes") {
  const LatticePolytope c = newton_polytope(PolynomialD::constant(2, 3.0));
  CHECK(c.vertices() == std::vector<Exponent>{{0, 0}});
  CHECK(c.dim() == 0);
  PolynomialD f(2);
  f.add_term({2, 0}, 1);
  f.add_term({0, 2}, 1);
  const LatticePolytope s = newton_polytope(f);
  CHECK(s.vertices() == sorted({{2, 0}, {0, 2}}));
  CHECK(s.lattice_points().size() == 3);
  CHECK_THROWS_AS(newton_polytope(PolynomialD(2)), Error);
}

TEST_CASE("half polytope") {
  CHECK(half_polytope(scaled_simplex(2, 6)).vertices() == scaled_simplex(2, 3).vertices());
  const LatticePolytope seg = LatticePolytope::from_points({{0}, {3}});
  CHECK(half_polytope(seg).vertices() == sorted({{0}, {1}}));
  const LatticePolytope odd = LatticePolytope::from_points({{1}, {1}});
  CHECK_THROWS_AS(half_polytope(odd), Error);
}

TEST_CASE("doubling the half polytope covers even polytopes") {
  const LatticePolytope q = LatticePolytope::from_points({{0, 0, 0}, {4, 0, 2}, {2, 4, 0}, {0, 2, 2}});
  const LatticePolytope p = half_polytope(q);
  const LatticePolytope p2 = p.dilate(2);
  for (const auto& b : q.lattice_points()) CHECK(p2.contains(b));
}

TEST_CASE("lattice points are sorted and contain the vertices") {
  const LatticePolytope p = LatticePolytope::from_points({{0, 0}, {3, 1}, {1, 3}, {2, 2}, {1, 1}});
  CHECK(std::is_sorted(p.lattice_points().begin(), p.lattice_points().end(), GrlexGreater()));
  for (const auto& v : p.vertices())
    CHECK(std::find(p.lattice_points().begin(), p.lattice_points().end(), v) != p.lattice_points().end());
  CHECK(p.vertices().size() == 3);
}

TEST_CASE("two-normality") {
  CHECK(is_two_normal(scaled_simplex(2, 5)).two_normal);
  // Δ5 x [0,1]
  std::vector<Exponent> prism;
  for (int i = 0; i < 6; ++i)
    for (int h = 0; h <= 1; ++h) {
      Exponent e(7, 0);
      e[i] = 1;
      e[6] = h;
      prism.push_back(e);
    }
  const LatticePolytope pr = LatticePolytope::from_points(prism);
  CHECK(pr.lattice_points().size() == 12);
  CHECK(is_two_normal(pr).two_normal);

  // Every lattice polygon is normal; the triangle below has the interior point (1,1).
  const LatticePolytope tri = LatticePolytope::from_points({{0, 0}, {1, 2}, {2, 1}});
  CHECK(tri.lattice_points().size() == 4);
  CHECK(is_two_normal(tri).two_normal);

  const LatticePolytope tet = LatticePolytope::from_points({{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
  const auto res = is_two_normal(tet);
  CHECK_FALSE(res.two_normal);
  REQUIRE(res.witness.has_value());
  CHECK(*res.witness == Exponent{1, 1, 1});
}

TEST_CASE("two-normality agrees with a brute-force check") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coord(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Exponent> pts;
    const int dim = 2 + trial % 2;
    for (int i = 0; i < dim + 2; ++i) {
      Exponent e(dim);
      for (int& c : e) c = coord(rng);
      pts.push_back(e);
    }
    const LatticePolytope p = LatticePolytope::from_points(pts);
    if (p.lattice_points().size() > 40) continue;
    CHECK(is_two_normal(p).two_normal == brute_two_normal(p));
  }
}

TEST_CASE("normalized volume") {
  CHECK(normalized_volume(scaled_simplex(3, 3)) == 9);
  CHECK(normalized_volume(scaled_simplex(4, 2)) == 8);
  CHECK(normalized_volume(scaled_simplex(2, 7)) == 7);
  CHECK(normalized_volume(product_of_simplices(2, 2)) == 2);
  CHECK(normalized_volume(LatticePolytope::from_points({{0, 0}, {1, 0}, {0, 1}, {1, 1}})) == 2);
  CHECK(normalized_volume(cayley_polytope({2, 1, 1, 1, 1, 1})) == 7);
}

TEST_CASE("normalized volume does not depend on the apex") {
  const std::vector<LatticePolytope> ps{
      product_of_simplices(3, 2), cayley_polytope({2, 1, 1}), scaled_simplex(3, 4),
      LatticePolytope::from_points({{0, 0, 0}, {2, 0, 0}, {0, 3, 0}, {0, 0, 1}, {1, 1, 2}, {2, 2, 1}})};
  for (const auto& p : ps) {
    const long long v0 = normalized_volume(p, 0);
    for (int a = 1; a < static_cast<int>(p.vertices().size()); ++a) CHECK(normalized_volume(p, a) == v0);
  }
}

TEST_CASE("toric profiles") {
  const ToricProfile bin = toric_profile(scaled_simplex(2, 4));
  CHECK(bin.lattice_points == 5);
  CHECK(bin.dim == 1);
  CHECK(bin.codim == 3);
  CHECK(bin.degree == 4);
  CHECK(bin.epsilon == 0);
  CHECK(bin.classification == ToricClass::kMinimalDegree);
  CHECK(bin.predicted_generic_length == 2);

  const ToricProfile tern = toric_profile(scaled_simplex(3, 3));
  CHECK(tern.lattice_points == 10);
  CHECK(tern.codim == 7);
  CHECK(tern.degree == 9);
  CHECK(tern.epsilon == 1);
  CHECK(tern.classification == ToricClass::kAlmostMinimalDegree);
  CHECK(tern.predicted_generic_length == 4);

  const ToricProfile quart = toric_profile(scaled_simplex(4, 2));
  CHECK(quart.lattice_points == 10);
  CHECK(quart.dim == 3);
  CHECK(quart.codim == 6);
  CHECK(quart.degree == 8);
  CHECK(quart.epsilon == 1);
  CHECK(quart.predicted_generic_length == 5);

  const ToricProfile cay = toric_profile(cayley_polytope({2, 1, 1, 1, 1, 1}));
  CHECK(cay.lattice_points == 13);
  CHECK(cay.dim == 6);
  CHECK(cay.epsilon == 0);
  CHECK(cay.predicted_generic_length == 7);

  const ToricProfile ver = toric_profile(scaled_simplex(3, 2));
  CHECK(ver.epsilon == 0);
  CHECK(ver.predicted_generic_length == 3);

  const ToricProfile tet = toric_profile(LatticePolytope::from_points({{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
  CHECK_FALSE(tet.spanning);
  CHECK(tet.classification == ToricClass::kDegenerate);
  CHECK_FALSE(tet.predicted_generic_length.has_value());
}

TEST_CASE("Pataki intervals") {
  const auto bs = pataki_interval(4, 3);
  CHECK(bs.r_min == 2);
  CHECK(bs.r_max == 3);
  const auto zero = pataki_interval(5, 0);
  CHECK(zero.r_min == 5);
  CHECK(zero.r_max == 5);
  CHECK(pataki_interval(6, 6).r_max == 5);

  const auto h1 = hermitian_pataki_interval(12, 63);
  CHECK(h1.r_min == 3);
  CHECK(h1.r_max == 7);
  const auto h2 = hermitian_pataki_interval(13, 70);
  CHECK(h2.r_min == 4);
  CHECK(h2.r_max == 8);
  const auto full = hermitian_pataki_interval(5, 25);
  CHECK(full.r_min == 5);
  CHECK(full.r_max == 5);
  CHECK_THROWS_AS(pataki_interval(3, 7), Error);
  CHECK_THROWS_AS(hermitian_pataki_interval(3, 10), Error);
}
