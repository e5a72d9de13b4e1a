#include "gramspec/poly.hpp"

#include <cmath>
#include <sstream>

namespace gramspec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kNvarsMismatch: return "nvars_mismatch";
    case ErrorKind::kNewtonPolytopeViolation: return "newton_polytope_violation";
    case ErrorKind::kNotPsd: return "not_psd";
    case ErrorKind::kRealRoot: return "real_root";
    case ErrorKind::kRepeatedRoot: return "repeated_root";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kDegenerateDirection: return "degenerate_direction";
    case ErrorKind::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

std::string coeff_string(const Rational& c) { return c.str(); }
std::string coeff_string(double c) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return os.str();
}
std::string coeff_string(const Complex& c) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  return os.str();
}

template <typename Scalar>
std::string format(const Polynomial<Scalar>& p, std::vector<std::string> names) {
  if (p.is_zero()) return "0";
  if (names.empty())
    for (int i = 0; i < p.nvars(); ++i) names.push_back("x" + std::to_string(i + 1));
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    std::string mono;
    for (int i = 0; i < p.nvars(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names.at(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      os << coeff_string(c);
    } else if (c == Scalar(1)) {
      os << mono;
    } else {
      os << coeff_string(c) << "*" << mono;
    }
  }
  return os.str();
}

}  // namespace

std::string to_string(const PolynomialQ& p, const std::vector<std::string>& names) {
  return format(p, names);
}
std::string to_string(const PolynomialD& p, const std::vector<std::string>& names) {
  return format(p, names);
}
std::string to_string(const PolynomialC& p, const std::vector<std::string>& names) {
  return format(p, names);
}

// ---------------------------------------------------------------------------

BinaryForm::BinaryForm(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 3 || (coeffs_.size() - 1) % 2 != 0)
    throw Error(ErrorKind::kInvalidArgument, "binary form must have even positive degree");
}

BinaryForm BinaryForm::from_polynomial(const PolynomialD& p) {
  if (p.nvars() != 2) throw Error(ErrorKind::kNvarsMismatch, "binary form needs 2 variables");
  if (p.is_zero()) throw Error(ErrorKind::kInvalidArgument, "zero binary form");
  if (!p.is_homogeneous()) throw Error(ErrorKind::kInvalidArgument, "binary form must be homogeneous");
  const int deg = p.total_degree();
  std::vector<double> c(deg + 1, 0.0);
  for (const auto& [e, v] : p.terms()) c[e[1]] = v;
  return BinaryForm(std::move(c));
}

PolynomialD BinaryForm::to_polynomial() const {
  PolynomialD p(2);
  const int deg = degree();
  for (int k = 0; k <= deg; ++k) p.add_term({deg - k, k}, coeffs_[k]);
  return p;
}

double BinaryForm::eval(double s, double t) const {
  return eval(Complex(s), Complex(t)).real();
}

Complex BinaryForm::eval(Complex s, Complex t) const {
  const int deg = degree();
  Complex sum = 0;
  for (int k = 0; k <= deg; ++k) sum += coeffs_[k] * std::pow(s, deg - k) * std::pow(t, k);
  return sum;
}

double BinaryForm::scale() const {
  double m = 0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

int RootList::total_multiplicity() const {
  int n = roots_at_infinity;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

std::vector<Complex> product_of_linear_factors(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& w : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= w * c[k];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<Complex> RootList::expand() const {
  std::vector<Complex> flat;
  for (const auto& r : roots)
    for (int m = 0; m < r.multiplicity; ++m) flat.push_back(r.value);
  std::vector<Complex> prod = product_of_linear_factors(flat);
  std::vector<Complex> out(prod.size() + roots_at_infinity, 0.0);
  for (std::size_t k = 0; k < prod.size(); ++k) out[k + roots_at_infinity] = leading * prod[k];
  return out;
}

namespace {

// Parlett-Reinsch diagonal balancing, in place.
void balance(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0, c = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

using LComplex = std::complex<long double>;

LComplex horner(const std::vector<double>& c, LComplex s, LComplex* deriv) {
  LComplex p = 0, dp = 0;
  for (double ck : c) {
    dp = dp * s + p;
    p = p * s + static_cast<long double>(ck);
  }
  if (deriv) *deriv = dp;
  return p;
}

}  // namespace

RootList roots(const BinaryForm& f, const RootOptions& opts) {
  const auto& c = f.coeffs();
  const int deg = f.degree();
  RootList out;
  int k = 0;
  while (k <= deg && c[k] == 0.0) ++k;
  if (k > deg) throw Error(ErrorKind::kInvalidArgument, "zero binary form has no root list");
  out.roots_at_infinity = k;
  out.leading = c[k];
  const int n = deg - k;
  if (n == 0) return out;

  std::vector<double> q(c.begin() + k, c.end());  // q(s) = f(s, 1) without leading zeros
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -q[j + 1] / q[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "companion eigensolver failed");

  std::vector<Complex> raw(n);
  for (int i = 0; i < n; ++i) {
    LComplex s(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    LComplex d;
    LComplex v = horner(q, s, &d);
    for (int it = 0; it < 3 && std::abs(d) > 0; ++it) {
      LComplex cand = s - v / d;
      LComplex dc;
      LComplex vc = horner(q, cand, &dc);
      if (!(std::abs(vc) < std::abs(v))) break;
      s = cand;
      v = vc;
      d = dc;
    }
    raw[i] = Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  }

  double scale = 1.0;
  for (const auto& u : raw) scale = std::max(scale, std::abs(u));

  // Cluster numerically coincident eigenvalues into multiple roots.
  std::vector<bool> used(n, false);
  std::vector<Root> clustered;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    Complex sum = raw[i];
    int mult = 1;
    used[i] = true;
    for (int j = i + 1; j < n; ++j) {
      if (!used[j] && std::abs(raw[j] - raw[i]) <= opts.cluster_tol * scale) {
        used[j] = true;
        sum += raw[j];
        ++mult;
      }
    }
    clustered.push_back({sum / static_cast<double>(mult), mult});
  }

  // Real input: snap real roots, pair the rest with their conjugates.
  const double ptol = opts.pair_tol * scale;
  std::vector<Root> real_roots, upper, lower;
  for (auto& r : clustered) {
    if (std::abs(r.value.imag()) <= std::max(ptol, opts.cluster_tol * scale * 0.5)) {
      r.value = Complex(r.value.real(), 0.0);
      real_roots.push_back(r);
    } else if (r.value.imag() > 0) {
      upper.push_back(r);
    } else {
      lower.push_back(r);
    }
  }
  if (upper.size() != lower.size())
    throw Error(ErrorKind::kNumericalFailure, "complex roots are not closed under conjugation");
  std::vector<bool> taken(lower.size(), false);
  std::vector<std::pair<Root, Root>> pairs;
  for (const auto& u : upper) {
    int best = -1;
    double bestd = 0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (taken[j] || lower[j].multiplicity != u.multiplicity) continue;
      const double d = std::abs(u.value - std::conj(lower[j].value));
      if (best < 0 || d < bestd) {
        best = static_cast<int>(j);
        bestd = d;
      }
    }
    if (best < 0 || bestd > ptol)
      throw Error(ErrorKind::kNumericalFailure, "unpaired complex root for real input");
    taken[best] = true;
    const Complex avg = 0.5 * (u.value + std::conj(lower[best].value));
    pairs.push_back({{avg, u.multiplicity}, {std::conj(avg), u.multiplicity}});
  }

  std::sort(real_roots.begin(), real_roots.end(),
            [](const Root& a, const Root& b) { return a.value.real() < b.value.real(); });
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.first.value.real() != b.first.value.real())
      return a.first.value.real() < b.first.value.real();
    return a.first.value.imag() < b.first.value.imag();
  });
  out.roots = std::move(real_roots);
  for (const auto& [u, v] : pairs) {
    out.roots.push_back(u);
    out.roots.push_back(v);
  }
  return out;
}

}  // namespace gramspec
