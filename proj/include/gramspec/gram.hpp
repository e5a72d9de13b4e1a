// Gram spaces G(f), the Gram map, and SOS certificates extracted from
// Gram matrices.
#ifndef GRAMSPEC_GRAM_HPP
#define GRAMSPEC_GRAM_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gramspec/polytope.hpp"

namespace gramspec {

/// Entries (i, j), i <= j, whose monomial product is x^beta.
struct GramClass {
  Exponent beta;
  std::vector<std::pair<int, int>> pairs;

  /// Number of ordered index pairs, i.e. how often the class appears in m^T A m.
  int ordered_count() const {
    int k = 0;
    for (const auto& [i, j] : pairs) k += (i == j) ? 1 : 2;
    return k;
  }
};

/// The affine space G(f) = G0 + span(kernel_basis) of symmetric matrices A
/// with m^T A m = f, where m lists the lattice points of P in grlex order.
template <typename Scalar>
class GramSpace {
 public:
  using MatrixType = Matrix<Scalar>;

  /// P defaults to the integer hull of new(f)/2. If some exponent of f lies in
  /// 2P but is not a sum of two lattice points of P, the space is empty;
  /// `unreachable()` reports those exponents and `particular()` then matches
  /// f only on the reachable part.
  static GramSpace build(const Polynomial<Scalar>& f, std::optional<LatticePolytope> p = std::nullopt) {
    if (f.is_zero()) throw Error(ErrorKind::kInvalidArgument, "Gram space of the zero polynomial");
    GramSpace g;
    g.target_ = f;
    g.polytope_ = p ? *p : half_polytope(newton_polytope(f));
    if (g.polytope_->ambient_dim() != f.nvars())
      throw Error(ErrorKind::kNvarsMismatch, "polytope and polynomial live in different dimensions");
    g.monomials_ = g.polytope_->lattice_points();

    const int n = g.size();
    std::map<Exponent, std::size_t, GrlexGreater> index;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Exponent b = g.monomials_[i] + g.monomials_[j];
        auto [it, fresh] = index.emplace(b, g.classes_.size());
        if (fresh) g.classes_.push_back({b, {}});
        g.classes_[it->second].pairs.push_back({i, j});
      }

    const LatticePolytope doubled = g.polytope_->dilate(2);
    for (const auto& [e, c] : f.terms()) {
      if (!doubled.contains(e)) {
        std::string s;
        for (int v : e) s += (s.empty() ? "" : ",") + std::to_string(v);
        throw Error(ErrorKind::kNewtonPolytopeViolation, "exponent (" + s + ") lies outside 2P");
      }
      if (!index.count(e)) g.unreachable_.push_back(e);
    }

    g.particular_ = MatrixType::Zero(n, n);
    for (const GramClass& cls : g.classes_) {
      const Scalar share = f.coeff(cls.beta) / Scalar(cls.ordered_count());
      for (const auto& [i, j] : cls.pairs) g.particular_(i, j) = g.particular_(j, i) = share;
    }
    for (const GramClass& cls : g.classes_) {
      const auto& [i0, j0] = cls.pairs.front();
      const Scalar w0 = Scalar(i0 == j0 ? 1 : 2);
      for (std::size_t l = 1; l < cls.pairs.size(); ++l) {
        const auto& [i, j] = cls.pairs[l];
        MatrixType b = MatrixType::Zero(n, n);
        b(i0, j0) = b(j0, i0) = Scalar(1) / w0;
        b(i, j) = b(j, i) = Scalar(-1) / Scalar(i == j ? 1 : 2);
        g.kernel_.push_back(std::move(b));
      }
    }
    return g;
  }

  const LatticePolytope& basis_polytope() const { return *polytope_; }
  const std::vector<Exponent>& monomials() const { return monomials_; }
  const Polynomial<Scalar>& target() const { return target_; }
  const MatrixType& particular() const { return particular_; }
  const std::vector<MatrixType>& kernel_basis() const { return kernel_; }
  const std::vector<GramClass>& classes() const { return classes_; }
  const std::vector<Exponent>& unreachable() const { return unreachable_; }

  int size() const { return static_cast<int>(monomials_.size()); }
  int dimension() const { return static_cast<int>(kernel_.size()); }
  /// False when some monomial of f cannot be produced by m^T A m.
  bool has_gram_matrices() const { return unreachable_.empty(); }

  /// G0 + sum_k x_k B_k.
  template <typename Coords>
  MatrixType point(const Coords& x) const {
    if (static_cast<int>(x.size()) != dimension())
      throw Error(ErrorKind::kInvalidArgument, "coordinate vector has wrong length");
    MatrixType a = particular_;
    for (int k = 0; k < dimension(); ++k) a += Scalar(x[k]) * kernel_[k];
    return a;
  }

  /// Same space with a caller-supplied kernel basis (e.g. a geometric
  /// parametrization). Each matrix must lie in G(0); the count must match.
  GramSpace with_kernel_basis(std::vector<MatrixType> basis) const {
    if (static_cast<int>(basis.size()) != dimension())
      throw Error(ErrorKind::kInvalidArgument, "kernel basis has the wrong number of elements");
    for (const auto& b : basis) check_in_class_span(b, true);
    GramSpace g = *this;
    g.kernel_ = std::move(basis);
    return g;
  }

  /// Same space with another particular Gram matrix of f.
  GramSpace with_particular(MatrixType a) const {
    check_in_class_span(a, false);
    GramSpace g = *this;
    g.particular_ = std::move(a);
    return g;
  }

  template <typename To>
  GramSpace<To> cast() const {
    GramSpace<To> g;
    g.target_ = target_.template cast<To>();
    g.polytope_ = polytope_;
    g.monomials_ = monomials_;
    g.classes_ = classes_;
    g.unreachable_ = unreachable_;
    g.particular_ = particular_.unaryExpr([](const Scalar& v) { return scalar_cast<To>(v); });
    for (const auto& b : kernel_)
      g.kernel_.push_back(b.unaryExpr([](const Scalar& v) { return scalar_cast<To>(v); }));
    return g;
  }

 private:
  template <typename>
  friend class GramSpace;

  void check_in_class_span(const MatrixType& a, bool homogeneous) const {
    const int n = size();
    if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "matrix size mismatch");
    const double tol = is_exact_v<Scalar> ? 0.0 : 1e-9 * std::max(1.0, max_abs(a));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (magnitude(Scalar(a(i, j) - a(j, i))) > tol) throw Error(ErrorKind::kInvalidArgument, "matrix not symmetric");
    for (const GramClass& cls : classes_) {
      Scalar s(0);
      for (const auto& [i, j] : cls.pairs) s += Scalar(i == j ? 1 : 2) * a(i, j);
      const Scalar want = homogeneous ? Scalar(0) : target_.coeff(cls.beta);
      if (magnitude(Scalar(s - want)) > tol)
        throw Error(ErrorKind::kInvalidArgument, "matrix is not in the Gram space");
    }
  }

  static double max_abs(const MatrixType& a) {
    double m = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, magnitude(a.data()[i]));
    return m;
  }

  Polynomial<Scalar> target_{1};
  std::optional<LatticePolytope> polytope_;
  std::vector<Exponent> monomials_;
  std::vector<GramClass> classes_;
  std::vector<Exponent> unreachable_;
  MatrixType particular_;
  std::vector<MatrixType> kernel_;
};

using GramSpaceQ = GramSpace<Rational>;
using GramSpaceD = GramSpace<double>;

/// m^T A m for the monomial vector m; the result has A's scalar type.
template <typename Derived>
Polynomial<typename Derived::Scalar> gram_apply(const std::vector<Exponent>& monomials,
                                                const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  const int n = static_cast<int>(monomials.size());
  if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "Gram matrix size mismatch");
  Polynomial<S> p(static_cast<int>(monomials.front().size()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.add_term(monomials[i] + monomials[j], a(i, j));
  return p;
}

template <typename Scalar, typename Derived>
Polynomial<typename Derived::Scalar> gram_apply(const GramSpace<Scalar>& space,
                                                const Eigen::MatrixBase<Derived>& a) {
  return gram_apply(space.monomials(), a);
}

/// Linear form v^T m as a polynomial.
template <typename Derived>
Polynomial<typename Derived::Scalar> linear_form(const std::vector<Exponent>& monomials,
                                                 const Eigen::MatrixBase<Derived>& v) {
  Polynomial<typename Derived::Scalar> p(static_cast<int>(monomials.front().size()));
  for (std::size_t i = 0; i < monomials.size(); ++i) p.add_term(monomials[i], v(static_cast<Eigen::Index>(i)));
  return p;
}

enum class SosMode { kReal, kRational, kHermitian };
const char* to_string(SosMode m);

/// f = sum p_i^2 (real, rational) or f = sum p_i conj(p_i) (Hermitian).
template <typename Scalar>
struct SosCertificate {
  SosMode mode = SosMode::kReal;
  std::vector<Polynomial<Scalar>> summands;
  double residual = 0.0;  // max-norm of f minus the sum
  int source_rank = 0;

  /// Sum of squares (or Hermitian squares) of the summands.
  Polynomial<Scalar> expand(int nvars) const {
    Polynomial<Scalar> s(nvars);
    for (const auto& p : summands) s += p * conjugate(p);
    return s;
  }
};

struct SosOptions {
  double psd_tol = 1e-9;   // NotPSD when lambda_min < -psd_tol * lambda_max
  double rank_tol = 1e-8;  // eigenvalues below rank_tol * lambda_max count as zero
};

/// Numerical rank of a symmetric matrix at the given relative threshold.
int numerical_rank(const Eigen::MatrixXd& a, double rank_tol = 1e-8);

/// Factors A = C^T C from the eigendecomposition; rows of C give the summands.
SosCertificate<double> extract_sos(const GramSpaceD& space, const Eigen::MatrixXd& a, const SosOptions& opts = {});

/// Exact pivoted LDL^T: P^T A P = L D L^T. Throws NotPSD for a negative pivot
/// or a zero pivot with a nonzero row.
struct LdltResult {
  std::vector<int> perm;  // row i of L^T pairs with monomial perm[i]
  MatrixQ l;
  std::vector<Rational> d;
  int rank = 0;
};
LdltResult exact_ldlt(const MatrixQ& a);

/// a^2 + b^2 + c^2 + e^2 = n with a >= b >= c >= e >= 0.
std::vector<Integer> four_squares(const Integer& n);

/// Exact certificate of length <= 4 rank(A) from a rational PSD Gram matrix.
SosCertificate<Rational> rational_sos(const GramSpaceQ& space, const MatrixQ& a);

/// Rounds A to the grid (1/denominator)Z and projects exactly back onto G(f).
MatrixQ round_to_gram(const GramSpaceQ& space, const Eigen::MatrixXd& a, long long denominator);

/// f_{r,r} = (x_1^2+..+x_r^2)(y_1^2+..+y_r^2) in variables x_1..x_r, y_1..y_r.
PolynomialQ hurwitz_form(int r);

/// r bilinear summands of f_{r,r} from the Cayley-Dickson algebras of
/// dimension r in {1, 2, 4, 8}.
SosCertificate<Rational> hurwitz_sos(int r);

}  // namespace gramspec

#endif  // GRAMSPEC_GRAM_HPP
