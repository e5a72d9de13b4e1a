#include "gramspec/sdp.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/LevenbergMarquardt>

namespace gramspec {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kInfeasible: return "infeasible";
    case SdpStatus::kMaxIterations: return "max-iterations";
  }
  return "unknown";
}

namespace {

double inner(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }
MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// f(A) for symmetric A through its eigendecomposition.
template <typename Fn>
MatrixXd spectral(const MatrixXd& a, Fn&& fn) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(a));
  const VectorXd d = es.eigenvalues().unaryExpr(fn);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double lambda_min(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(sym(a), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Largest alpha with X + alpha dX PSD (infinity if unbounded); X must be PD.
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  MatrixXd m;
  if (llt.info() == Eigen::Success) {
    const MatrixXd linv_dx = llt.matrixL().solve(dx);
    m = llt.matrixL().solve(linv_dx.transpose());
  } else {
    const MatrixXd r = spectral(x, [](double v) { return 1.0 / std::sqrt(std::max(v, 1e-300)); });
    m = r * dx * r;
  }
  const double lmin = lambda_min(m);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

// svec with sqrt(2) on off-diagonal entries, so it is an isometry.
VectorXd svec(const MatrixXd& a) {
  const Eigen::Index n = a.rows();
  VectorXd v(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) v(k++) = (i == j) ? a(i, j) : std::sqrt(2.0) * 0.5 * (a(i, j) + a(j, i));
  return v;
}

MatrixXd smat(const VectorXd& v, Eigen::Index n) {
  MatrixXd a(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double x = (i == j) ? v(k) : v(k) / std::sqrt(2.0);
      a(i, j) = a(j, i) = x;
      ++k;
    }
  return a;
}

struct Reduced {
  AffineSection section;  // in the coordinates Y of K Y K^T
  double residual = 0.0;
};

// The affine set {Y : K Y K^T in s}, with a Frobenius-orthonormal basis.
Reduced reduce_section(const AffineSection& s, const MatrixXd& k) {
  const Eigen::Index r = s.size(), rr = k.cols();
  const Eigen::Index sr = r * (r + 1) / 2, srr = rr * (rr + 1) / 2;
  MatrixXd proj = MatrixXd::Identity(sr, sr);
  if (s.dimension() > 0) {
    MatrixXd l(sr, s.dimension());
    for (int j = 0; j < s.dimension(); ++j) l.col(j) = svec(s.basis[j]);
    Eigen::BDCSVD<MatrixXd> svd(l, Eigen::ComputeThinU);
    const double top = svd.singularValues()(0);
    Eigen::Index rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 1e-12 * std::max(top, 1.0)) ++rank;
    const MatrixXd q = svd.matrixU().leftCols(rank);
    proj -= q * q.transpose();
  }
  MatrixXd phi(sr, srr);
  for (Eigen::Index j = 0; j < srr; ++j) {
    VectorXd e = VectorXd::Zero(srr);
    e(j) = 1.0;
    phi.col(j) = svec(k * smat(e, rr) * k.transpose());
  }
  const MatrixXd jac = proj * phi;
  const VectorXd rhs = proj * svec(s.offset);

  Reduced out;
  out.section.offset = MatrixXd::Zero(rr, rr);
  if (srr == 0) {
    out.residual = rhs.norm();
    return out;
  }
  Eigen::BDCSVD<MatrixXd> svd(jac, Eigen::ComputeFullV | Eigen::ComputeThinU);
  const VectorXd& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  const double tol = 1e-8 * std::max(top, 1.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  VectorXd y0 = VectorXd::Zero(srr);
  for (Eigen::Index i = 0; i < rank; ++i) y0 += (svd.matrixU().col(i).dot(rhs) / sv(i)) * svd.matrixV().col(i);
  out.residual = (jac * y0 - rhs).norm();
  out.section.offset = smat(y0, rr);
  for (Eigen::Index i = rank; i < srr; ++i) out.section.basis.push_back(smat(svd.matrixV().col(i), rr));
  return out;
}

double section_scale(const AffineSection& s) {
  const double n = std::max(1, s.size());
  const double v = s.offset.norm() / std::sqrt(n);
  return v > 0 ? v : 1.0;
}

// X = V Y V^T with Y in `section`; V has orthonormal columns.
struct Face {
  MatrixXd v;
  AffineSection section;
};

struct FaceResult {
  SdpStatus status = SdpStatus::kOptimal;
  Face face;
  bool interior = false;
  VectorXd z;  // phase-1 maximizer in face coordinates when interior
  MatrixXd certificate;
  double t = 0.0;
  int iterations = 0;
  std::string message;
};

bool usable(const StandardSdpResult& r, const SdpOptions& opts) {
  return r.converged || std::max({r.gap, r.primal_infeasibility, r.dual_infeasibility}) < opts.accept_tol;
}

FaceResult find_face(const AffineSection& s, const SdpOptions& opts) {
  FaceResult out;
  out.face = {MatrixXd::Identity(s.size(), s.size()), s};
  const double scale = section_scale(s);
  for (int level = 0;; ++level) {
    const AffineSection& sec = out.face.section;
    const int r = sec.size(), m = sec.dimension();
    if (r == 0) {
      out.status = SdpStatus::kOptimal;
      out.message = "face is the zero matrix";
      return out;
    }
    if (m == 0) {
      const double lmin = lambda_min(sec.offset);
      out.t = lmin;
      if (lmin >= -opts.interior_tol * scale) {
        out.interior = lmin > opts.interior_tol * scale;
        out.z = VectorXd(0);
        return out;
      }
      out.status = SdpStatus::kInfeasible;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(sec.offset));
      const VectorXd u = out.face.v * es.eigenvectors().col(0);
      out.certificate = u * u.transpose();
      out.message = "the affine section is a single matrix that is not PSD";
      return out;
    }

    StandardSdp p1;
    p1.c = sec.offset;
    for (const auto& b : sec.basis) p1.a.push_back(-b);
    p1.a.push_back(MatrixXd::Identity(r, r));
    p1.b = VectorXd::Zero(m + 1);
    p1.b(m) = 1.0;
    const StandardSdpResult res = solve_standard(p1, opts);
    out.iterations += res.iterations;
    if (!usable(res, opts)) {
      out.status = SdpStatus::kMaxIterations;
      out.message = "phase-1 solve did not converge";
      return out;
    }
    const double t = res.y(m);
    out.t = t;
    if (t > opts.interior_tol * scale) {
      out.interior = true;
      out.z = res.y.head(m);
      return out;
    }
    const MatrixXd z = sym(res.x) / res.x.trace();
    if (t < -opts.interior_tol * scale) {
      out.status = SdpStatus::kInfeasible;
      out.certificate = out.face.v * z * out.face.v.transpose();
      out.message = level == 0 ? "separating PSD functional found"
                               : "separating PSD functional found on an exposed face";
      return out;
    }
    // Boundary: Z exposes a proper face containing every feasible point.
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(z);
    const double zmax = es.eigenvalues().maxCoeff();
    Eigen::Index keep = 0;
    while (keep < r && es.eigenvalues()(keep) < opts.kernel_tol * zmax) ++keep;
    if (keep == 0) {
      out.status = SdpStatus::kInfeasible;
      out.certificate = out.face.v * z * out.face.v.transpose();
      out.message = "exposing matrix is positive definite";
      return out;
    }
    const MatrixXd k = es.eigenvectors().leftCols(keep);
    Reduced red = reduce_section(sec, k);
    // Kernel vectors of an interior-point Z are accurate to about sqrt(mu),
    // so the exposed face is only approximately aligned; refine() repairs it.
    if (red.residual > 1e-4 * scale) {
      out.status = SdpStatus::kInfeasible;
      out.certificate = out.face.v * z * out.face.v.transpose();
      out.message = "no point of the affine section on the exposed face (weakly infeasible)";
      return out;
    }
    out.face.v = out.face.v * k;
    out.face.section = std::move(red.section);
  }
}

// Gram matrix of the basis under the Frobenius product.
MatrixXd basis_gram(const AffineSection& s) {
  const int m = s.dimension();
  MatrixXd k(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) k(i, j) = k(j, i) = inner(s.basis[i], s.basis[j]);
  return k;
}

// Reduced objective: c . x(z) = c' . z + const.
VectorXd reduced_objective(const AffineSection& s, const Face& face, const VectorXd& c) {
  const int m = s.dimension();
  if (m == 0) return VectorXd::Zero(face.section.dimension());
  const MatrixXd k = basis_gram(s);
  const Eigen::LDLT<MatrixXd> kf(k);
  const VectorXd w = kf.solve(c);
  VectorXd out(face.section.dimension());
  for (int j = 0; j < face.section.dimension(); ++j) {
    const MatrixXd d = face.v * face.section.basis[j] * face.v.transpose();
    double v = 0;
    for (int i = 0; i < m; ++i) v += w(i) * inner(s.basis[i], d);
    out(j) = v;
  }
  return out;
}

// Orthonormal basis of the complement of span(basis) in svec coordinates.
MatrixXd complement_basis(const AffineSection& s) {
  const Eigen::Index r = s.size(), sr = r * (r + 1) / 2;
  if (s.dimension() == 0) return MatrixXd::Identity(sr, sr);
  MatrixXd l(sr, s.dimension());
  for (int j = 0; j < s.dimension(); ++j) l.col(j) = svec(s.basis[j]);
  Eigen::BDCSVD<MatrixXd> svd(l, Eigen::ComputeFullU);
  const double top = svd.singularValues()(0);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 1e-12 * std::max(top, 1.0)) ++rank;
  return svd.matrixU().rightCols(sr - rank);
}

// Gauss-Newton on U with U U^T in the section, starting from the dominant
// rank-r factor of X. Returns X unchanged unless it converges nearby.
MatrixXd refine(const AffineSection& s, const MatrixXd& x, const VectorXd& c) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(x));
  const VectorXd& ev = es.eigenvalues();
  const Eigen::Index n = x.rows();
  const double top = ev.maxCoeff();
  if (top <= 0) return x;
  Eigen::Index drop = 0;
  while (drop < n && ev(drop) < 1e-6 * top) ++drop;
  const Eigen::Index r = n - drop;
  MatrixXd u = es.eigenvectors().rightCols(r) * ev.tail(r).cwiseSqrt().asDiagonal();

  const MatrixXd qc = complement_basis(s);
  const VectorXd target = qc.transpose() * svec(s.offset);
  const double scale = section_scale(s);
  auto residual = [&](const MatrixXd& uu) { return VectorXd(qc.transpose() * svec(uu * uu.transpose()) - target); };
  VectorXd g = residual(u);
  if (qc.cols() == 0) return x;
  for (int it = 0; it < 30 && g.norm() > 1e-14 * scale; ++it) {
    MatrixXd jac(qc.cols(), n * r);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < r; ++b) {
        MatrixXd d = MatrixXd::Zero(n, n);
        d.row(a) += u.col(b).transpose();
        d.col(a) += u.col(b);
        jac.col(b * n + a) = qc.transpose() * svec(d);
      }
    Eigen::BDCSVD<MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const VectorXd step = svd.solve(g);
    u -= Eigen::Map<const MatrixXd>(step.data(), n, r);
    const VectorXd gn = residual(u);
    if (gn.norm() >= g.norm() && it > 2) {
      g = gn;
      break;
    }
    g = gn;
  }
  const MatrixXd xp = u * u.transpose();
  if (g.norm() > 1e-11 * scale || (xp - x).norm() > 1e-3 * std::max(x.norm(), 1.0)) return x;
  if (c.size()) {
    const double before = c.dot(s.coordinates(x)), after = c.dot(s.coordinates(xp));
    if (after < before - 1e-6 * (1.0 + std::abs(before))) return x;
  }
  return sym(xp);
}

// Infeasible, or the phase-1 solve failed.
SdpSolution face_failure(const FaceResult& fr) {
  SdpSolution sol;
  sol.status = fr.status;
  sol.certificate = fr.certificate;
  sol.iterations = fr.iterations;
  sol.message = fr.message;
  return sol;
}

// Maximizes c' . z over the face and maps the result back.
SdpSolution optimize_on_face(const AffineSection& s, const FaceResult& fr, const VectorXd& c,
                             const VectorXd& cred, const SdpOptions& opts) {
  SdpSolution sol;
  const Face& face = fr.face;
  sol.face_size = face.section.size();
  sol.iterations = fr.iterations;
  MatrixXd y;
  bool converged = true;
  if (face.section.dimension() == 0) {
    y = face.section.offset;
  } else {
    StandardSdp p;
    p.c = face.section.offset;
    for (const auto& b : face.section.basis) p.a.push_back(-b);
    p.b = cred;
    const StandardSdpResult res = solve_standard(p, opts);
    sol.iterations += res.iterations;
    sol.gap = res.gap;
    converged = usable(res, opts);
    y = face.section.point(res.y);
  }
  MatrixXd x = sym(face.v * y * face.v.transpose());
  if (opts.polish) x = refine(s, x, c);
  sol.point = x;
  sol.coordinates = s.coordinates(x);
  sol.objective = c.size() ? c.dot(sol.coordinates) : 0.0;
  sol.numerical_rank = numerical_rank(x, opts.rank_tol);
  sol.status = converged ? SdpStatus::kOptimal : SdpStatus::kMaxIterations;
  if (!fr.message.empty()) sol.message = fr.message;
  return sol;
}

SdpSolution no_gram_matrix(const GramSpaceD& space) {
  SdpSolution sol;
  sol.status = SdpStatus::kInfeasible;
  sol.message = "monomials of f are not sums of two lattice points of P:";
  for (const auto& e : space.unreachable()) {
    sol.message += " (";
    for (std::size_t i = 0; i < e.size(); ++i) sol.message += (i ? "," : "") + std::to_string(e[i]);
    sol.message += ")";
  }
  return sol;
}

}  // namespace

MatrixXd AffineSection::point(const VectorXd& x) const {
  if (x.size() != dimension()) throw Error(ErrorKind::kInvalidArgument, "coordinate vector has wrong length");
  MatrixXd a = offset;
  for (int k = 0; k < dimension(); ++k) a += x(k) * basis[k];
  return a;
}

VectorXd AffineSection::coordinates(const MatrixXd& a) const {
  const int m = dimension();
  if (m == 0) return VectorXd(0);
  VectorXd rhs(m);
  for (int k = 0; k < m; ++k) rhs(k) = inner(basis[k], a - offset);
  return basis_gram(*this).ldlt().solve(rhs);
}

AffineSection AffineSection::from_gram(const GramSpaceD& space) {
  AffineSection s;
  s.offset = space.particular();
  s.basis = space.kernel_basis();
  return s;
}

AffineSection random_section(int n, int m, std::mt19937_64& rng) {
  if (m > n * (n + 1) / 2 - 1) throw Error(ErrorKind::kInvalidArgument, "too many traceless directions");
  std::normal_distribution<double> nd;
  AffineSection s;
  s.offset = MatrixXd::Identity(n, n);
  for (int k = 0; k < m; ++k) {
    MatrixXd b = MatrixXd::NullaryExpr(n, n, [&] { return nd(rng); });
    b = sym(b);
    b -= (b.trace() / n) * MatrixXd::Identity(n, n);
    s.basis.push_back(b / b.norm());
  }
  return s;
}

StandardSdpResult solve_standard(const StandardSdp& prob, const SdpOptions& opts) {
  const Eigen::Index n = prob.c.rows();
  const int m = static_cast<int>(prob.a.size());
  if (prob.b.size() != m) throw Error(ErrorKind::kInvalidArgument, "constraint count mismatch");

  // Row scaling of the constraints; y is rescaled on exit.
  std::vector<MatrixXd> a(m);
  VectorXd b(m), rowscale(m);
  double amax = 0;
  for (int i = 0; i < m; ++i) {
    const double nrm = prob.a[i].norm();
    rowscale(i) = nrm > 0 ? nrm : 1.0;
    a[i] = sym(prob.a[i]) / rowscale(i);
    b(i) = prob.b(i) / rowscale(i);
    amax = std::max(amax, 1.0);
  }
  const MatrixXd& c = prob.c;
  const double normb = b.norm(), normc = c.norm();

  const double rn = std::sqrt(static_cast<double>(n));
  double xi = std::max(10.0, rn);
  for (int i = 0; i < m; ++i) xi = std::max(xi, n * (1.0 + std::abs(b(i))) / (1.0 + a[i].norm()));
  const double eta = std::max({10.0, rn, amax, normc});
  MatrixXd x = xi * MatrixXd::Identity(n, n);
  MatrixXd s = eta * MatrixXd::Identity(n, n);
  VectorXd y = VectorXd::Zero(m);

  auto a_of = [&](const MatrixXd& z) {
    VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = inner(a[i], z);
    return v;
  };
  auto at_of = [&](const VectorXd& v) {
    MatrixXd z = MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) z += v(i) * a[i];
    return z;
  };

  StandardSdpResult out, best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  const MatrixXd id = MatrixXd::Identity(n, n);
  for (int iter = 0;; ++iter) {
    if (!x.allFinite() || !y.allFinite() || !s.allFinite()) break;
    const VectorXd rp = b - a_of(x);
    const MatrixXd rd = c - at_of(y) - s;
    const double gap = std::max(inner(x, s), 0.0);
    const double mu = gap / n;
    out.primal_objective = inner(c, x);
    out.dual_objective = b.dot(y);
    out.gap = gap / (1.0 + std::abs(out.primal_objective) + std::abs(out.dual_objective));
    out.primal_infeasibility = rp.norm() / (1.0 + normb);
    out.dual_infeasibility = rd.norm() / (1.0 + normc);
    out.iterations = iter;
    if (out.gap < opts.gap_tol && out.primal_infeasibility < opts.feas_tol &&
        out.dual_infeasibility < opts.feas_tol) {
      out.converged = true;
      break;
    }
    const double merit = std::max({out.gap, out.primal_infeasibility, out.dual_infeasibility});
    if (merit < best_merit) {
      best_merit = merit;
      best = out;
      best.x = x;
      best.s = s;
      best.y = y;
      since_best = 0;
    } else if (++since_best >= 15) {
      break;
    }
    if (iter >= opts.max_iter) break;

    // Nesterov-Todd scaling point W with W S W = X, and G = W^{1/2}.
    const MatrixXd xh = spectral(x, [](double v) { return std::sqrt(std::max(v, 0.0)); });
    const MatrixXd tih = spectral(xh * s * xh, [](double v) { return 1.0 / std::sqrt(std::max(v, 1e-300)); });
    const MatrixXd w = sym(xh * tih * xh);
    Eigen::SelfAdjointEigenSolver<MatrixXd> wes(w);
    const VectorXd wev = wes.eigenvalues().cwiseMax(1e-300);
    const MatrixXd g = wes.eigenvectors() * wev.cwiseSqrt().asDiagonal() * wes.eigenvectors().transpose();
    const MatrixXd ginv = wes.eigenvectors() * wev.cwiseSqrt().cwiseInverse().asDiagonal() * wes.eigenvectors().transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> ves(sym(g * s * g));
    const VectorXd vd = ves.eigenvalues().cwiseMax(1e-300);
    const MatrixXd& q = ves.eigenvectors();

    std::vector<MatrixXd> waw(m);
    for (int j = 0; j < m; ++j) waw[j] = w * a[j] * w;
    MatrixXd schur(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) schur(i, j) = schur(j, i) = inner(a[i], waw[j]);
    Eigen::LLT<MatrixXd> llt(schur);
    Eigen::LDLT<MatrixXd> ldlt;
    const bool use_llt = llt.info() == Eigen::Success;
    if (!use_llt) ldlt.compute(schur);
    const VectorXd awrdw = a_of(w * rd * w);

    auto direction = [&](const MatrixXd& rc, MatrixXd& dx, VectorXd& dy, MatrixXd& ds) {
      const VectorXd rhs = rp - a_of(rc) + awrdw;
      dy = use_llt ? VectorXd(llt.solve(rhs)) : VectorXd(ldlt.solve(rhs));
      ds = sym(rd - at_of(dy));
      dx = sym(rc - w * ds * w);
    };
    // Solves V Z + Z V = rhs in the eigenbasis of V and maps G Z G back.
    auto lyap = [&](const MatrixXd& rhs) {
      MatrixXd t = q.transpose() * rhs * q;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) t(i, j) /= (vd(i) + vd(j));
      return MatrixXd(g * (q * t * q.transpose()) * g);
    };
    const MatrixXd vmat = q * vd.asDiagonal() * q.transpose();

    MatrixXd dxa, dsa;
    VectorXd dya;
    direction(sym(-x), dxa, dya, dsa);
    const double apa = std::min(1.0, max_step(x, dxa));
    const double ada = std::min(1.0, max_step(s, dsa));
    const double mu_aff = std::max(inner(x + apa * dxa, s + ada * dsa), 0.0) / n;
    const double sigma = std::min(1.0, std::pow(mu_aff / std::max(mu, 1e-300), 3));

    const MatrixXd dxt = ginv * dxa * ginv, dst = g * dsa * g;
    const MatrixXd rhs = 2 * sigma * mu * id - 2 * vmat * vmat - (dxt * dst + dst * dxt);
    MatrixXd dx, ds;
    VectorXd dy;
    direction(sym(lyap(rhs)), dx, dy, ds);

    const double ap = std::min(1.0, 0.98 * max_step(x, dx));
    const double ad = std::min(1.0, 0.98 * max_step(s, ds));
    if (ap < opts.step_tol && ad < opts.step_tol) break;
    x = sym(x + ap * dx);
    y += ad * dy;
    s = sym(s + ad * ds);
  }
  if (out.converged) {
    out.x = x;
    out.s = s;
    out.y = y;
  } else if (best_merit < std::numeric_limits<double>::infinity()) {
    // Ill-conditioning near the optimum can stall or break the iteration;
    // the most accurate iterate seen is returned.
    const int iterations = out.iterations;
    out = best;
    out.iterations = iterations;
  }
  out.y = out.y.cwiseQuotient(rowscale);
  return out;
}

SdpSolution solve_feasibility(const AffineSection& s, const SdpOptions& opts) {
  const FaceResult fr = find_face(s, opts);
  if (fr.status != SdpStatus::kOptimal) return face_failure(fr);
  SdpSolution sol;
  sol.face_size = fr.face.section.size();
  sol.iterations = fr.iterations;
  const MatrixXd y = fr.z.size() ? fr.face.section.point(fr.z) : fr.face.section.offset;
  sol.point = sym(fr.face.v * y * fr.face.v.transpose());
  if (opts.polish) sol.point = refine(s, sol.point, VectorXd(0));
  sol.coordinates = s.coordinates(sol.point);
  sol.numerical_rank = numerical_rank(sol.point, opts.rank_tol);
  sol.status = SdpStatus::kOptimal;
  sol.objective = fr.t;
  sol.message = fr.interior ? (fr.face.section.size() == s.size() ? "interior point" : "relative interior point of a proper face")
                            : "boundary point";
  return sol;
}

SdpSolution solve_feasibility(const GramSpaceD& space, const SdpOptions& opts) {
  if (!space.has_gram_matrices()) return no_gram_matrix(space);
  return solve_feasibility(AffineSection::from_gram(space), opts);
}

SdpSolution solve_linear(const AffineSection& s, const VectorXd& c, const SdpOptions& opts) {
  if (c.size() != s.dimension()) throw Error(ErrorKind::kInvalidArgument, "objective has wrong length");
  const FaceResult fr = find_face(s, opts);
  if (fr.status != SdpStatus::kOptimal) return face_failure(fr);
  return optimize_on_face(s, fr, c, reduced_objective(s, fr.face, c), opts);
}

SdpSolution solve_linear(const GramSpaceD& space, const VectorXd& c, const SdpOptions& opts) {
  if (!space.has_gram_matrices()) return no_gram_matrix(space);
  return solve_linear(AffineSection::from_gram(space), c, opts);
}

namespace {

// Residual of V V^T against the section: the part of svec(V V^T - L0)
// orthogonal to the directions, zero-padded so there are at least as many
// values as unknowns.
struct FactorFit : Eigen::DenseFunctor<double> {
  FactorFit(const MatrixXd& complement, const VectorXd& offset, int n, int r)
      : Eigen::DenseFunctor<double>(n * r, std::max<int>(static_cast<int>(complement.cols()), n * r)),
        q(complement), l0(offset), n(n), r(r) {}

  int operator()(const VectorXd& x, VectorXd& f) const {
    const Eigen::Map<const MatrixXd> v(x.data(), n, r);
    f.setZero(values());
    f.head(q.cols()) = q.transpose() * (svec(v * v.transpose()) - l0);
    return 0;
  }

  int df(const VectorXd& x, MatrixXd& jac) const {
    const Eigen::Map<const MatrixXd> v(x.data(), n, r);
    MatrixXd full(q.rows(), n * r);
    MatrixXd d = MatrixXd::Zero(n, n);
    for (int a = 0; a < r; ++a)
      for (int i = 0; i < n; ++i) {
        d.setZero();
        d.row(i) += v.col(a).transpose();
        d.col(i) += v.col(a);
        full.col(a * n + i) = svec(d);
      }
    jac.setZero(values(), inputs());
    jac.topRows(q.cols()) = q.transpose() * full;
    return 0;
  }

  MatrixXd q;
  VectorXd l0;
  int n, r;
};

// A PSD point of the section of rank at most r, found by Levenberg-Marquardt
// on V V^T with V of width r, started from the top eigenpairs of `start`.
std::optional<SdpSolution> factorized_point(const AffineSection& s, const SdpSolution& start, int r,
                                            std::mt19937_64& rng, const SdpOptions& opts) {
  const int n = s.size(), m = s.dimension();
  const int n2 = n * (n + 1) / 2;
  MatrixXd complement = MatrixXd::Identity(n2, n2);
  if (m > 0) {
    MatrixXd b(n2, m);
    for (int k = 0; k < m; ++k) b.col(k) = svec(s.basis[k]);
    const Eigen::HouseholderQR<MatrixXd> qr(b);
    complement = (qr.householderQ() * MatrixXd::Identity(n2, n2)).rightCols(n2 - m);
  }
  const VectorXd l0 = svec(s.offset);
  const double scale = std::max(1.0, s.offset.norm());

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(start.point));
  MatrixXd v0(n, r);
  for (int a = 0; a < r; ++a)
    v0.col(a) = std::sqrt(std::max(es.eigenvalues()(n - 1 - a), 0.0)) * es.eigenvectors().col(n - 1 - a);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 4; ++attempt) {
    MatrixXd v = v0;
    if (attempt > 0) {
      const double jitter = 0.1 * attempt * v0.norm() / std::sqrt(static_cast<double>(n * r));
      for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] += jitter * nd(rng);
    }
    FactorFit fit(complement, l0, n, r);
    Eigen::LevenbergMarquardt<FactorFit> lm(fit);
    lm.setFtol(1e-16);
    lm.setXtol(1e-16);
    lm.setGtol(0.0);
    lm.setMaxfev(100 * (n * r + 1));
    VectorXd x = Eigen::Map<VectorXd>(v.data(), v.size());
    lm.minimize(x);
    VectorXd f(fit.values());
    fit(x, f);
    if (f.norm() > 1e-10 * scale) continue;

    const Eigen::Map<const MatrixXd> vf(x.data(), n, r);
    const MatrixXd target = vf * vf.transpose();
    SdpSolution out = start;
    out.coordinates = s.coordinates(target);
    out.point = s.point(out.coordinates);
    const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(sym(out.point), Eigen::EigenvaluesOnly).eigenvalues();
    const double top = std::max(ev.maxCoeff(), 1e-300);
    if (ev.minCoeff() < -1e-9 * top) continue;
    out.numerical_rank = numerical_rank(out.point, opts.rank_tol);
    if (out.numerical_rank > r) continue;
    out.status = SdpStatus::kOptimal;
    out.message = "rank " + std::to_string(out.numerical_rank) + " from factorized descent";
    return out;
  }
  return std::nullopt;
}

}  // namespace

SdpSolution minimize_rank(const AffineSection& s, int trials, std::uint64_t seed, const SdpOptions& opts) {
  const FaceResult fr = find_face(s, opts);
  if (fr.status != SdpStatus::kOptimal) return face_failure(fr);
  const Face& face = fr.face;
  const int md = face.section.dimension();
  const VectorXd zero = VectorXd::Zero(s.dimension());

  auto run = [&](const VectorXd& cred) { return optimize_on_face(s, fr, zero, cred, opts); };
  // Objective -<M, X> in face coordinates.
  auto weighted_trace = [&](const MatrixXd& weight) {
    VectorXd cred(md);
    const MatrixXd wf = face.v.transpose() * weight * face.v;
    for (int j = 0; j < md; ++j) cred(j) = -inner(wf, face.section.basis[j]);
    return cred;
  };

  SdpSolution best = run(weighted_trace(MatrixXd::Identity(s.size(), s.size())));
  auto consider = [&](SdpSolution cand) {
    if (cand.status != SdpStatus::kOptimal) return;
    if (best.status != SdpStatus::kOptimal || cand.numerical_rank < best.numerical_rank) best = std::move(cand);
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int t = 0; t < trials && md > 0; ++t) {
    VectorXd cred(md);
    for (int j = 0; j < md; ++j) cred(j) = nd(rng);
    consider(run(cred));
  }
  for (int it = 0; it < 5 && md > 0 && best.status == SdpStatus::kOptimal; ++it) {
    const double delta = 1e-3 * std::max(best.point.norm(), 1e-12);
    const MatrixXd weight =
        spectral(best.point, [delta](double v) { return 1.0 / (std::max(v, 0.0) + delta); });
    const int before = best.numerical_rank;
    consider(run(weighted_trace(weight)));
    if (best.numerical_rank == before && it > 0) break;
  }
  for (int r = best.numerical_rank - 1; r >= 1 && best.status == SdpStatus::kOptimal; --r) {
    std::optional<SdpSolution> lower = factorized_point(s, best, r, rng, opts);
    if (!lower) break;
    best = std::move(*lower);
    r = best.numerical_rank;
  }
  best.objective = 0.0;
  return best;
}

SdpSolution minimize_rank(const GramSpaceD& space, int trials, std::uint64_t seed, const SdpOptions& opts) {
  if (!space.has_gram_matrices()) return no_gram_matrix(space);
  return minimize_rank(AffineSection::from_gram(space), trials, seed, opts);
}

}  // namespace gramspec
