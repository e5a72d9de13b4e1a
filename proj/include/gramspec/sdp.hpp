// Dense semidefinite programming over affine sections of Sym_N: feasibility
// with facial reduction, linear optimization and a rank heuristic.
#ifndef GRAMSPEC_SDP_HPP
#define GRAMSPEC_SDP_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gramspec/gram.hpp"

namespace gramspec {

/// {L0 + sum_k x_k L_k}. The basis is assumed linearly independent.
struct AffineSection {
  Eigen::MatrixXd offset;
  std::vector<Eigen::MatrixXd> basis;

  int size() const { return static_cast<int>(offset.rows()); }
  int dimension() const { return static_cast<int>(basis.size()); }
  Eigen::MatrixXd point(const Eigen::VectorXd& x) const;
  /// Least-squares coordinates of a matrix lying in the section.
  Eigen::VectorXd coordinates(const Eigen::MatrixXd& a) const;

  static AffineSection from_gram(const GramSpaceD& space);
};

/// L0 = I and m random traceless directions, so the spectrahedron is compact
/// with the identity in its interior.
AffineSection random_section(int n, int m, std::mt19937_64& rng);

struct SdpOptions {
  int max_iter = 200;
  double gap_tol = 1e-9;       // relative duality gap
  double feas_tol = 1e-9;      // relative primal/dual residuals
  double accept_tol = 1e-7;    // a stalled solve is accepted below this gap and residual
  double step_tol = 1e-12;
  double interior_tol = 1e-6;  // phase-1 value separating interior, boundary and infeasible
  double kernel_tol = 1e-6;    // eigenvalues of an exposing matrix treated as zero
  double rank_tol = 1e-8;
  bool polish = true;
};

enum class SdpStatus { kOptimal, kInfeasible, kMaxIterations };
const char* to_string(SdpStatus s);

struct SdpSolution {
  Eigen::MatrixXd point;        // empty when infeasible
  SdpStatus status = SdpStatus::kMaxIterations;
  double objective = 0.0;       // c . coordinates
  int numerical_rank = 0;
  double gap = 0.0;             // relative duality gap of the final solve
  Eigen::MatrixXd certificate;  // infeasible: PSD Z, tr Z = 1, <L_k, Z> = 0, <L0, Z> < 0
  Eigen::VectorXd coordinates;
  int iterations = 0;
  int face_size = 0;            // size of the face after facial reduction
  std::string message;
};

/// Standard-form problem min <C,X> s.t. <A_i,X> = b_i, X PSD, together with
/// its dual max b.y s.t. C - sum y_i A_i PSD.
struct StandardSdp {
  Eigen::MatrixXd c;
  std::vector<Eigen::MatrixXd> a;
  Eigen::VectorXd b;
};

struct StandardSdpResult {
  Eigen::MatrixXd x, s;
  Eigen::VectorXd y;
  double primal_objective = 0, dual_objective = 0;
  double gap = 0;            // <X,S> / (1 + |pobj| + |dobj|), never negative
  double primal_infeasibility = 0, dual_infeasibility = 0;
  int iterations = 0;
  bool converged = false;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps.
StandardSdpResult solve_standard(const StandardSdp& p, const SdpOptions& opts = {});

/// Strictly feasible point (maximizing lambda_min) when the section meets the
/// PSD cone in its interior; otherwise a point of the exposed face, or an
/// infeasibility certificate.
SdpSolution solve_feasibility(const AffineSection& s, const SdpOptions& opts = {});
SdpSolution solve_feasibility(const GramSpaceD& space, const SdpOptions& opts = {});

/// Maximizes c . x over the spectrahedron.
SdpSolution solve_linear(const AffineSection& s, const Eigen::VectorXd& c, const SdpOptions& opts = {});
SdpSolution solve_linear(const GramSpaceD& space, const Eigen::VectorXd& c, const SdpOptions& opts = {});

/// Lowest numerical rank over trace minimization, `trials` random linear
/// objectives and reweighted-trace refinement, then lowered further by
/// Levenberg-Marquardt on V V^T with V of decreasing width. An upper bound on
/// SOS length.
SdpSolution minimize_rank(const AffineSection& s, int trials, std::uint64_t seed, const SdpOptions& opts = {});
SdpSolution minimize_rank(const GramSpaceD& space, int trials, std::uint64_t seed, const SdpOptions& opts = {});

}  // namespace gramspec

#endif  // GRAMSPEC_SDP_HPP
