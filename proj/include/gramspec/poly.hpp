// Sparse multivariate polynomials, binary forms and their complex roots.
#ifndef GRAMSPEC_POLY_HPP
#define GRAMSPEC_POLY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gramspec/types.hpp"

namespace gramspec {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Global monomial order: graded lexicographic, listed from the largest
/// monomial down. `GrlexGreater()(a, b)` is true when a comes before b, so
/// x^2 > xy > y^2 > x > y > 1 for two variables.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

inline Exponent operator+(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <typename Scalar>
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Scalar, GrlexGreater>;
  using scalar_type = Scalar;

  explicit Polynomial(int nvars = 1) : nvars_(nvars) {
    if (nvars <= 0) throw Error(ErrorKind::kInvalidArgument, "nvars must be positive");
  }

  static Polynomial constant(int nvars, const Scalar& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }
  static Polynomial monomial(const Exponent& e, const Scalar& c = Scalar(1)) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }
  static Polynomial variable(int nvars, int index) {
    Exponent e(nvars, 0);
    e.at(index) = 1;
    return monomial(e);
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// Adds c·x^e, dropping the term if the coefficient cancels.
  void add_term(const Exponent& e, const Scalar& c) {
    if (static_cast<int>(e.size()) != nvars_)
      throw Error(ErrorKind::kNvarsMismatch, "exponent length does not match nvars");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, gramspec::total_degree(e));
    return d;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = gramspec::total_degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return gramspec::total_degree(t.first) == d; });
  }

  std::vector<Exponent> support() const {
    std::vector<Exponent> s;
    s.reserve(terms_.size());
    for (const auto& [e, c] : terms_) s.push_back(e);
    return s;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Evaluates at a point whose coordinate type may differ from Scalar
  /// (e.g. a rational polynomial at a double point).
  template <typename T>
  T eval(const std::vector<T>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
      throw Error(ErrorKind::kNvarsMismatch, "evaluation point has wrong dimension");
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = scalar_cast<T>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) term *= point[i];
      sum += term;
    }
    return sum;
  }

  template <typename To>
  Polynomial<To> cast() const {
    Polynomial<To> r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, scalar_cast<To>(c));
    return r;
  }

  /// Largest coefficient magnitude; 0 for the zero polynomial.
  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
    return m;
  }

 private:
  void check_compatible(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw Error(ErrorKind::kNvarsMismatch, "nvars mismatch");
  }

  int nvars_;
  TermMap terms_;
};

using PolynomialQ = Polynomial<Rational>;
using PolynomialD = Polynomial<double>;
using PolynomialC = Polynomial<Complex>;

template <typename Scalar>
Polynomial<Scalar> pow(const Polynomial<Scalar>& p, int k) {
  Polynomial<Scalar> r = Polynomial<Scalar>::constant(p.nvars(), Scalar(1));
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

/// Max-norm of the coefficient difference.
template <typename Scalar>
double max_abs_diff(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  return (a - b).max_abs_coeff();
}

template <typename T>
Polynomial<std::complex<T>> conjugate(const Polynomial<std::complex<T>>& p) {
  Polynomial<std::complex<T>> r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, std::conj(c));
  return r;
}

/// Coefficient-wise real part (p + p̄)/2, as a real polynomial.
template <typename T>
Polynomial<T> real_part(const Polynomial<std::complex<T>>& p) {
  Polynomial<T> r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c.real());
  return r;
}

/// Coefficient-wise imaginary part (p - p̄)/2i, as a real polynomial.
template <typename T>
Polynomial<T> imag_part(const Polynomial<std::complex<T>>& p) {
  Polynomial<T> r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c.imag());
  return r;
}

/// Identity on real polynomials, so generic code can conjugate either mode.
template <typename Scalar>
  requires(!is_complex_v<Scalar>)
Polynomial<Scalar> conjugate(const Polynomial<Scalar>& p) {
  return p;
}

std::string to_string(const PolynomialQ& p, const std::vector<std::string>& names = {});
std::string to_string(const PolynomialD& p, const std::vector<std::string>& names = {});
std::string to_string(const PolynomialC& p, const std::vector<std::string>& names = {});

// ---------------------------------------------------------------------------
// Binary forms

/// Homogeneous form of even degree in (s, t). coeffs[k] multiplies
/// s^(deg-k) t^k, i.e. the grlex order with s > t.
class BinaryForm {
 public:
  explicit BinaryForm(std::vector<double> coeffs);

  static BinaryForm from_polynomial(const PolynomialD& p);
  PolynomialD to_polynomial() const;

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int half_degree() const { return degree() / 2; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double eval(double s, double t) const;
  Complex eval(Complex s, Complex t) const;
  double scale() const;

 private:
  std::vector<double> coeffs_;
};

struct Root {
  Complex value;
  int multiplicity = 1;
};

/// Roots of a binary form in the chart t = 1, so f = lead·t^k·Π(s - u t).
struct RootList {
  std::vector<Root> roots;
  int roots_at_infinity = 0;
  double leading = 0.0;  // coefficient of s^(deg - roots_at_infinity) t^(roots_at_infinity)

  int total_multiplicity() const;
  /// Re-expands lead·t^k·Π(s - u t)^mult as complex coefficients in the
  /// BinaryForm layout.
  std::vector<Complex> expand() const;
};

struct RootOptions {
  double cluster_tol = 1e-6;  // relative to max(1, max|u|)
  double pair_tol = 1e-7;     // relative to max(1, max|u|)
};

RootList roots(const BinaryForm& f, const RootOptions& opts = {});

/// Coefficients of Π(s - w_k t) over the given roots, in BinaryForm layout.
std::vector<Complex> product_of_linear_factors(const std::vector<Complex>& roots);

}  // namespace gramspec

#endif  // GRAMSPEC_POLY_HPP
