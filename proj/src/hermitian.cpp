#include "gramspec/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace gramspec {

HermCertificate real_to_hermitian(const SosCertificate<double>& cert) {
  HermCertificate out;
  out.mode = SosMode::kHermitian;
  out.source_rank = cert.source_rank;
  const std::size_t r = cert.summands.size();
  if (r == 0) return out;
  const int nv = cert.summands.front().nvars();
  for (std::size_t k = 0; k + 1 < r; k += 2)
    out.summands.push_back(cert.summands[k].cast<Complex>() + Complex(0, 1) * cert.summands[k + 1].cast<Complex>());
  if (r % 2) out.summands.push_back(cert.summands.back().cast<Complex>());
  out.residual = cert.residual + max_abs_diff(out.expand(nv), cert.expand(nv).cast<Complex>());
  return out;
}

SosCertificate<double> hermitian_to_real(const HermCertificate& cert, double zero_tol) {
  SosCertificate<double> out;
  out.mode = SosMode::kReal;
  out.source_rank = cert.source_rank;
  if (cert.summands.empty()) return out;
  const int nv = cert.summands.front().nvars();
  for (const PolynomialC& p : cert.summands) {
    for (PolynomialD part : {real_part(p), imag_part(p)})
      if (!part.is_zero() && part.max_abs_coeff() > zero_tol) out.summands.push_back(std::move(part));
  }
  out.residual = cert.residual + max_abs_diff(out.expand(nv).cast<Complex>(), cert.expand(nv));
  return out;
}

Eigen::MatrixXd realify(const MatrixC& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r << a.real(), -a.imag(), a.imag(), a.real();
  return r;
}

MatrixC derealify(const Eigen::MatrixXd& r) {
  const Eigen::Index n = r.rows() / 2;
  if (r.rows() != 2 * n || r.cols() != 2 * n) throw Error(ErrorKind::kInvalidArgument, "realification must be 2N x 2N");
  MatrixC a(n, n);
  a.real() = r.topLeftCorner(n, n);
  a.imag() = r.bottomLeftCorner(n, n);
  return a;
}

int hermitian_rank(const MatrixC& a, double rank_tol) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<MatrixC>(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<int>((ev.array().abs() > rank_tol * top).count());
}

namespace {

template <typename S>
Vector<S> coefficient_vector(const std::vector<Exponent>& monomials, const Polynomial<S>& p) {
  Vector<S> v(static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t i = 0; i < monomials.size(); ++i) v(static_cast<Eigen::Index>(i)) = p.coeff(monomials[i]);
  return v;
}

}  // namespace

MatrixC hermitian_gram(const std::vector<Exponent>& monomials, const HermCertificate& cert) {
  const auto n = static_cast<Eigen::Index>(monomials.size());
  MatrixC a = MatrixC::Zero(n, n);
  for (const PolynomialC& p : cert.summands) {
    const VectorC v = coefficient_vector(monomials, p);
    a += v * v.adjoint();
  }
  return a;
}

Eigen::MatrixXd real_gram(const std::vector<Exponent>& monomials, const SosCertificate<double>& cert) {
  const auto n = static_cast<Eigen::Index>(monomials.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const PolynomialD& p : cert.summands) {
    const Eigen::VectorXd v = coefficient_vector(monomials, p);
    a += v * v.transpose();
  }
  return a;
}

HermCertificate extract_hermitian_sos(const GramSpaceD& space, const MatrixC& a, const SosOptions& opts) {
  const int n = space.size();
  if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "Gram matrix size mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -opts.psd_tol * std::max(top, 1e-300))
    throw Error(ErrorKind::kNotPsd, "Hermitian Gram matrix has eigenvalue " + std::to_string(ev.minCoeff()));
  HermCertificate cert;
  cert.mode = SosMode::kHermitian;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (ev(k) <= opts.rank_tol * top) continue;
    const VectorC u = std::sqrt(ev(k)) * es.eigenvectors().col(k);
    cert.summands.push_back(linear_form(space.monomials(), u));
  }
  cert.source_rank = static_cast<int>(cert.summands.size());
  const int nv = space.target().nvars();
  cert.residual = max_abs_diff(cert.expand(nv), space.target().cast<Complex>());
  return cert;
}

HermGramSpace::HermGramSpace(GramSpaceD real) : real_(std::move(real)) {}

HermGramSpace HermGramSpace::build(const PolynomialD& f, std::optional<LatticePolytope> p) {
  return HermGramSpace(GramSpaceD::build(f, std::move(p)));
}

MatrixC HermGramSpace::point(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) throw Error(ErrorKind::kInvalidArgument, "coordinate vector has wrong length");
  const int m = real_.dimension(), n = size();
  MatrixC a = real_.point(x.head(m)).cast<Complex>();
  int k = m;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      a(i, j) += Complex(0, x(k));
      a(j, i) -= Complex(0, x(k));
    }
  return a;
}

AffineSection HermGramSpace::realified() const {
  AffineSection s;
  const int n = size();
  s.offset = realify(real_.particular().cast<Complex>());
  for (const auto& b : real_.kernel_basis()) s.basis.push_back(realify(b.cast<Complex>()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      MatrixC k = MatrixC::Zero(n, n);
      k(i, j) = Complex(0, 1);
      k(j, i) = Complex(0, -1);
      s.basis.push_back(realify(k));
    }
  return s;
}

namespace {

HermSolution to_herm(const HermGramSpace& space, const SdpSolution& sol) {
  HermSolution out;
  out.status = sol.status;
  out.message = sol.message;
  if (sol.status == SdpStatus::kInfeasible || sol.point.size() == 0) return out;
  out.point = derealify(sol.point);
  out.rank = hermitian_rank(out.point);
  out.certificate = extract_hermitian_sos(space.real(), out.point);
  return out;
}

}  // namespace

HermSolution herm_solve(const HermGramSpace& space, const SdpOptions& opts) {
  if (!space.real().has_gram_matrices()) return to_herm(space, solve_feasibility(space.real(), opts));
  return to_herm(space, solve_feasibility(space.realified(), opts));
}

HermSolution herm_minimize_rank(const HermGramSpace& space, int trials, std::uint64_t seed, const SdpOptions& opts) {
  if (!space.real().has_gram_matrices()) return to_herm(space, solve_feasibility(space.real(), opts));
  return to_herm(space, minimize_rank(space.realified(), trials, seed, opts));
}

std::vector<HermRankOne> enumerate_herm_rank1(const BinaryForm& f) {
  const RootList r = checked_roots(f);
  const std::vector<Complex> up = upper_roots(r);
  const int d = f.half_degree();
  const Complex sl = std::sqrt(r.leading);
  std::vector<HermRankOne> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<Complex> w;
    for (int i = 0; i < d; ++i) w.push_back(((mask >> i) & 1) ? std::conj(up[i]) : up[i]);
    out.push_back({factor_vector(w, sl), mask});
  }
  return out;
}

int gcd_degree(const std::vector<std::uint64_t>& masks, int d) {
  if (masks.empty()) return d;
  int deg = 0;
  for (int i = 0; i < d; ++i) {
    const bool b = (masks.front() >> i) & 1;
    bool same = true;
    for (std::uint64_t m : masks) same = same && (((m >> i) & 1) == b);
    deg += same;
  }
  return deg;
}

int max_gcd_over_flips(const std::vector<std::uint64_t>& masks, int d) {
  const std::size_t s = masks.size();
  if (s > 12) throw Error(ErrorKind::kInvalidArgument, "flip search limited to 12 summands");
  if (s <= 1) return d;
  const std::uint64_t full = (std::uint64_t{1} << d) - 1;
  int best = 0;
  // Conjugating every p_k at once leaves the gcd degree unchanged, so p_1 stays fixed.
  for (std::uint64_t flips = 0; flips < (std::uint64_t{1} << (s - 1)); ++flips) {
    std::vector<std::uint64_t> m = masks;
    for (std::size_t k = 1; k < s; ++k)
      if ((flips >> (k - 1)) & 1) m[k] ^= full;
    best = std::max(best, gcd_degree(m, d));
  }
  return best;
}

VectorC vandermonde(Complex x, int d) {
  VectorC v(d + 1);
  Complex p = 1;
  for (int k = d; k >= 0; --k) {
    v(k) = p;
    p *= x;
  }
  return v;
}

MatrixC face_embedding(const VectorC& g, int e) {
  const auto dg = g.size() - 1;
  MatrixC u = MatrixC::Zero(dg + e + 1, e + 1);
  for (int j = 0; j <= e; ++j) u.block(j, j, dg + 1, 1) = g;
  return u;
}

LowRankSum low_rank_sum(const BinaryForm& f, int s) {
  const int d = f.half_degree();
  if (d < 1 || d > 62) throw Error(ErrorKind::kInvalidArgument, "unsupported degree");
  if (s < 2 || s > (1LL << d)) throw Error(ErrorKind::kInvalidArgument, "s must lie in [2, 2^d]");
  const RootList r = checked_roots(f);
  const std::vector<Complex> up = upper_roots(r);

  LowRankSum out;
  out.d = d;
  out.e = 0;
  while ((1LL << out.e) < s) ++out.e;
  const int e = out.e;

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return up[i].imag() > up[j].imag(); });
  const std::vector<int> h_pairs(order.begin(), order.begin() + e);
  std::vector<int> g_pairs(order.begin() + e, order.end());
  std::sort(g_pairs.begin(), g_pairs.end());

  for (int i : g_pairs) out.gcd_roots.push_back(up[i]);
  const VectorC g = factor_vector(out.gcd_roots, std::sqrt(r.leading));
  const MatrixC u = face_embedding(g, e);

  for (std::uint64_t hm = 0; hm < static_cast<std::uint64_t>(s); ++hm) {
    std::vector<Complex> w;
    std::uint64_t mask = 0;
    for (int k = 0; k < e; ++k) {
      const bool conj = (hm >> k) & 1;
      w.push_back(conj ? std::conj(up[h_pairs[k]]) : up[h_pairs[k]]);
      if (conj) mask |= std::uint64_t{1} << h_pairs[k];
    }
    out.terms.push_back({u * factor_vector(w, 1.0), mask});
  }

  out.sum = MatrixC::Zero(d + 1, d + 1);
  out.real_sum = Eigen::MatrixXd::Zero(d + 1, d + 1);
  std::vector<std::uint64_t> masks;
  for (const HermRankOne& t : out.terms) {
    const MatrixC m = t.matrix();
    out.sum += m;
    out.real_terms.push_back(m.real());
    out.real_sum += m.real();
    masks.push_back(t.mask);
  }
  out.rank = hermitian_rank(out.sum);
  out.real_rank = numerical_rank(out.real_sum);
  out.rank_bound = e + 1;
  out.gcd_bound = d + 1 - gcd_degree(masks, d);
  return out;
}

}  // namespace gramspec
