#include "gramspec/gram.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <Eigen/Eigenvalues>

namespace gramspec {

const char* to_string(SosMode m) {
  switch (m) {
    case SosMode::kReal: return "real";
    case SosMode::kRational: return "rational";
    case SosMode::kHermitian: return "hermitian";
  }
  return "unknown";
}

int numerical_rank(const Eigen::MatrixXd& a, double rank_tol) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > rank_tol * top) ++r;
  return r;
}

SosCertificate<double> extract_sos(const GramSpaceD& space, const Eigen::MatrixXd& a, const SosOptions& opts) {
  const int n = space.size();
  if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "Gram matrix size mismatch");
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -opts.psd_tol * std::max(top, 1e-300))
    throw Error(ErrorKind::kNotPsd, "Gram matrix has eigenvalue " + std::to_string(ev.minCoeff()));

  SosCertificate<double> cert;
  cert.mode = SosMode::kReal;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (ev(k) <= opts.rank_tol * top) continue;
    const Eigen::VectorXd row = std::sqrt(ev(k)) * es.eigenvectors().col(k);
    cert.summands.push_back(linear_form(space.monomials(), row));
  }
  cert.source_rank = static_cast<int>(cert.summands.size());
  const int nv = space.target().nvars();
  cert.residual = max_abs_diff(cert.expand(nv), space.target());
  return cert;
}

LdltResult exact_ldlt(const MatrixQ& in) {
  const int n = static_cast<int>(in.rows());
  if (in.cols() != n) throw Error(ErrorKind::kInvalidArgument, "matrix not square");
  if (in != in.transpose()) throw Error(ErrorKind::kInvalidArgument, "matrix not symmetric");
  MatrixQ a = in;
  LdltResult out;
  out.perm.resize(n);
  for (int i = 0; i < n; ++i) out.perm[i] = i;
  out.l = MatrixQ::Zero(n, n);

  int k = 0;
  for (; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i) {
      if (a(i, i) < 0) throw Error(ErrorKind::kNotPsd, "negative pivot in exact LDL^T");
      if (p < 0 && a(i, i) != 0) p = i;
    }
    if (p < 0) {
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
          if (a(i, j) != 0) throw Error(ErrorKind::kNotPsd, "zero pivot with nonzero row in exact LDL^T");
      break;
    }
    if (p != k) {
      a.row(p).swap(a.row(k));
      a.col(p).swap(a.col(k));
      out.l.row(p).swap(out.l.row(k));
      std::swap(out.perm[p], out.perm[k]);
    }
    const Rational d = a(k, k);
    out.d.push_back(d);
    out.l(k, k) = 1;
    for (int i = k + 1; i < n; ++i) out.l(i, k) = a(i, k) / d;
    for (int i = k + 1; i < n; ++i) {
      if (out.l(i, k) == 0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= out.l(i, k) * a(k, j);
    }
    for (int i = k + 1; i < n; ++i) a(i, k) = a(k, i) = 0;
  }
  out.rank = k;
  return out;
}

namespace {

using boost::multiprecision::sqrt;

bool is_square(const Integer& n, Integer& root) {
  if (n < 0) return false;
  root = sqrt(n);
  return root * root == n;
}

const Integer kSmallTwoSquare = Integer(1) << 24;

// n = a^2 + b^2 with a >= b >= 0. Exhaustive for small n; above that only
// 2^e p with p = 1 mod 4 prime is handled, which the callers' outer search
// makes sufficient.
bool two_squares(const Integer& n, Integer& a, Integer& b) {
  if (n < 0) return false;
  if (n < kSmallTwoSquare) {
    for (Integer x = sqrt(n); 2 * x * x >= n; --x)
      if (is_square(n - x * x, b)) {
        a = x;
        return true;
      }
    return false;
  }
  Integer p = n;
  int twos = 0;
  while (p % 2 == 0) {
    p /= 2;
    ++twos;
  }
  if (p == 1) {
    a = 1;
    b = 0;
  } else {
    if (p % 4 != 1 || !boost::multiprecision::miller_rabin_test(p, 25)) return false;
    // Square root of -1 modulo the prime p, then the Euclidean descent.
    Integer root = 0;
    const Integer e = (p - 1) / 4;
    for (Integer c = 2;; ++c) {
      const Integer t = boost::multiprecision::powm(c, e, p);
      if ((t * t) % p == p - 1) {
        root = t;
        break;
      }
    }
    Integer r0 = p, r1 = root;
    const Integer bound = sqrt(p);
    while (r1 > bound) {
      const Integer r2 = r0 % r1;
      r0 = r1;
      r1 = r2;
    }
    a = r1;
    if (!is_square(p - a * a, b)) return false;
  }
  // Multiply by 1 + i once per factor of two.
  for (int k = 0; k < twos; ++k) {
    const Integer s = a + b, d = a > b ? a - b : b - a;
    a = s;
    b = d;
  }
  if (a < b) std::swap(a, b);
  return true;
}

bool k_squares(const Integer& n, int k, std::vector<Integer>& out) {
  if (k == 2) {
    Integer a, b;
    if (!two_squares(n, a, b)) return false;
    out.push_back(a);
    out.push_back(b);
    return true;
  }
  if (n == 0) {
    out.insert(out.end(), k, Integer(0));
    return true;
  }
  Integer m = n, scale = 1;
  while (m % 4 == 0) {
    m /= 4;
    scale *= 2;
  }
  if (k == 3 && m % 8 == 7) return false;
  // Largest part a satisfies a^2 >= m/k; search downward from floor(sqrt(m)).
  for (Integer a = sqrt(m); k * a * a >= m; --a) {
    if (k_squares(m - a * a, k - 1, out)) {
      out.insert(out.begin() + static_cast<long>(out.size() - (k - 1)), a);
      for (std::size_t i = out.size() - k; i < out.size(); ++i) out[i] *= scale;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Integer> four_squares(const Integer& n) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "four squares of a negative number");
  std::vector<Integer> out;
  if (n == 0) return {0, 0, 0, 0};
  if (!k_squares(n, 4, out)) throw Error(ErrorKind::kNumericalFailure, "four-square search failed");
  std::sort(out.begin(), out.end(), std::greater<Integer>());
  return out;
}

SosCertificate<Rational> rational_sos(const GramSpaceQ& space, const MatrixQ& a) {
  if (!space.has_gram_matrices()) throw Error(ErrorKind::kInfeasible, "f has no Gram matrix for this polytope");
  if (gram_apply(space, a) != space.target())
    throw Error(ErrorKind::kInvalidArgument, "matrix is not a Gram matrix of f");
  const LdltResult ldl = exact_ldlt(a);
  const int n = space.size();
  const int nv = space.target().nvars();

  SosCertificate<Rational> cert;
  cert.mode = SosMode::kRational;
  cert.source_rank = ldl.rank;
  for (int k = 0; k < ldl.rank; ++k) {
    PolynomialQ ell(nv);
    for (int i = k; i < n; ++i) ell.add_term(space.monomials()[ldl.perm[i]], ldl.l(i, k));
    const Integer num = numerator(ldl.d[k]);
    const Integer den = denominator(ldl.d[k]);
    for (const Integer& s : four_squares(num * den)) {
      if (s == 0) continue;
      cert.summands.push_back(ell * Rational(s, den));
    }
  }
  if (cert.expand(nv) != space.target())
    throw Error(ErrorKind::kNumericalFailure, "rational certificate does not reproduce f");
  cert.residual = 0.0;
  return cert;
}

MatrixQ round_to_gram(const GramSpaceQ& space, const Eigen::MatrixXd& a, long long denominator) {
  const int n = space.size();
  if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "matrix size mismatch");
  if (denominator <= 0) throw Error(ErrorKind::kInvalidArgument, "denominator must be positive");
  if (!space.has_gram_matrices()) throw Error(ErrorKind::kInfeasible, "f has no Gram matrix for this polytope");
  MatrixQ q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      q(i, j) = q(j, i) = Rational(static_cast<long long>(std::llround(v * static_cast<double>(denominator))), denominator);
    }
  for (const GramClass& cls : space.classes()) {
    Rational s = 0;
    for (const auto& [i, j] : cls.pairs) s += Rational(i == j ? 1 : 2) * q(i, j);
    const Rational shift = (space.target().coeff(cls.beta) - s) / Rational(cls.ordered_count());
    if (shift == 0) continue;
    for (const auto& [i, j] : cls.pairs) {
      q(i, j) += shift;
      if (i != j) q(j, i) = q(i, j);
    }
  }
  return q;
}

PolynomialQ hurwitz_form(int r) {
  if (r <= 0) throw Error(ErrorKind::kInvalidArgument, "r must be positive");
  PolynomialQ sx(2 * r), sy(2 * r);
  for (int i = 0; i < r; ++i) {
    const PolynomialQ x = PolynomialQ::variable(2 * r, i), y = PolynomialQ::variable(2 * r, r + i);
    sx += x * x;
    sy += y * y;
  }
  return sx * sy;
}

namespace {

using Element = std::vector<PolynomialQ>;

Element cd_conj(const Element& a) {
  Element c = a;
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = -c[i];
  return c;
}

// Cayley-Dickson product (a, b)(c, d) = (ac - d*b, da + bc*).
Element cd_mul(const Element& x, const Element& y) {
  const std::size_t n = x.size();
  if (n == 1) return {x[0] * y[0]};
  const std::size_t h = n / 2;
  const Element a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  const Element c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  const Element ac = cd_mul(a, c), db = cd_mul(cd_conj(d), b);
  const Element da = cd_mul(d, a), bc = cd_mul(b, cd_conj(c));
  Element out(n, PolynomialQ(x[0].nvars()));
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = ac[i] - db[i];
    out[h + i] = da[i] + bc[i];
  }
  return out;
}

}  // namespace

SosCertificate<Rational> hurwitz_sos(int r) {
  if (r != 1 && r != 2 && r != 4 && r != 8)
    throw Error(ErrorKind::kInvalidArgument, "normed bilinear identities exist only for r in {1,2,4,8}");
  Element x, y;
  for (int i = 0; i < r; ++i) {
    x.push_back(PolynomialQ::variable(2 * r, i));
    y.push_back(PolynomialQ::variable(2 * r, r + i));
  }
  SosCertificate<Rational> cert;
  cert.mode = SosMode::kRational;
  cert.summands = cd_mul(x, y);
  cert.source_rank = r;
  if (cert.expand(2 * r) != hurwitz_form(r))
    throw Error(ErrorKind::kNumericalFailure, "composition identity failed");
  return cert;
}

}  // namespace gramspec
