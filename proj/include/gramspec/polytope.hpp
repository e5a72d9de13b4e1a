// Lattice polytopes: exact hulls, lattice points, 2-normality, normalized
// volume and the toric degree data that predicts generic SOS length.
#ifndef GRAMSPEC_POLYTOPE_HPP
#define GRAMSPEC_POLYTOPE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gramspec/exact.hpp"
#include "gramspec/poly.hpp"

namespace gramspec {

/// Supporting inequality normal·π(q) <= offset in the projected coordinates
/// of the affine hull; `on` lists the input points lying on it.
struct Facet {
  IntVector normal;
  long long offset = 0;
  std::vector<int> on;
};

/// H-representation of conv(points). Points are projected onto `proj_coords`,
/// which is injective on the affine hull; `equalities` cut out the hull.
struct Hull {
  Exponent base;
  int dim = 0;
  std::vector<int> proj_coords;
  IntMatrix equalities;  // rows e with e·(q - base) = 0
  std::vector<Facet> facets;
  std::vector<int> vertex_indices;

  bool contains(const Exponent& q) const;
  IntVector project(const Exponent& q) const;
};

/// Exact convex hull by facet enumeration over affinely independent subsets.
/// Intended for the desk-scale point sets this library works with.
Hull compute_hull(const std::vector<Exponent>& points);

class LatticePolytope {
 public:
  /// Convex hull of arbitrary integer points (duplicates allowed).
  static LatticePolytope from_points(const std::vector<Exponent>& points);

  const std::vector<Exponent>& vertices() const { return vertices_; }
  const std::vector<Exponent>& lattice_points() const { return lattice_points_; }
  int dim() const { return hull_->dim; }
  int ambient_dim() const { return static_cast<int>(vertices_.front().size()); }
  const Hull& hull() const { return *hull_; }

  bool contains(const Exponent& q) const { return hull_->contains(q); }
  LatticePolytope dilate(int k) const;

 private:
  std::vector<Exponent> vertices_;
  std::vector<Exponent> lattice_points_;
  std::shared_ptr<const Hull> hull_;
};

template <typename Scalar>
LatticePolytope newton_polytope(const Polynomial<Scalar>& f) {
  if (f.is_zero()) throw Error(ErrorKind::kInvalidArgument, "Newton polytope of the zero polynomial");
  return LatticePolytope::from_points(f.support());
}

/// Integer hull of Q/2, i.e. conv{q in Z^n : 2q in Q}.
LatticePolytope half_polytope(const LatticePolytope& q);

struct TwoNormalResult {
  bool two_normal = true;
  std::optional<Exponent> witness;  // lattice point of 2P that is not a sum of two points of P
};

TwoNormalResult is_two_normal(const LatticePolytope& p);

/// Normalized volume dim!·vol with respect to the lattice of the affine span,
/// via a pulling triangulation from the vertex `apex` (index into vertices()).
long long normalized_volume(const LatticePolytope& p, int apex = 0);

enum class ToricClass { kMinimalDegree, kAlmostMinimalDegree, kOther, kDegenerate };
const char* to_string(ToricClass c);

struct ToricProfile {
  int lattice_points = 0;  // N
  int dim = 0;             // n
  int codim = 0;           // N - 1 - n
  long long degree = 0;    // normalized volume
  long long epsilon = 0;   // degree - codim - 1
  bool spanning = false;
  bool two_normal = false;
  ToricClass classification = ToricClass::kDegenerate;
  std::optional<int> predicted_generic_length;
};

ToricProfile toric_profile(const LatticePolytope& p);

struct PatakiInterval {
  int r_min = 0;
  int r_max = 0;
  int size = 0;        // N
  int parameter = 0;   // m or c, see convention
  std::string convention;
};

/// Ranks r with C(r+1,2) + m <= C(N+1,2) and m >= C(N-r+1,2), where m is the
/// dimension of the affine section of Sym_N.
PatakiInterval pataki_interval(int n, int m);

/// Ranks r with (N-r)^2 + c <= N^2 and r^2 <= c, where c is the real
/// codimension of the affine section of Herm_N.
PatakiInterval hermitian_pataki_interval(int n, int c);

// Standard families.
LatticePolytope scaled_simplex(int nvars, int d);           // {a >= 0 : sum a = d}
LatticePolytope cayley_polytope(const std::vector<int>& d);  // conv of [0,d_i] x e_i
LatticePolytope product_of_simplices(int r, int s);          // Δ_{r-1} x Δ_{s-1}

}  // namespace gramspec

#endif  // GRAMSPEC_POLYTOPE_HPP
