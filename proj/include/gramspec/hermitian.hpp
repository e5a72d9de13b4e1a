// Hermitian Gram spectrahedra: conversions between real and Hermitian SOS,
// Hermitian Gram spaces solved through their realification, and rank-one
// Hermitian Gram matrices of positive binary forms.
#ifndef GRAMSPEC_HERMITIAN_HPP
#define GRAMSPEC_HERMITIAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gramspec/binary.hpp"
#include "gramspec/sdp.hpp"

namespace gramspec {

/// f = sum p_i conj(p_i).
using HermCertificate = SosCertificate<Complex>;

/// Pairs consecutive real summands into p_{2k-1} + i p_{2k}; an odd last
/// summand stays real.
HermCertificate real_to_hermitian(const SosCertificate<double>& cert);

/// Splits each Hermitian square into Re(p)^2 + Im(p)^2, dropping parts whose
/// coefficients are all at most zero_tol in absolute value.
SosCertificate<double> hermitian_to_real(const HermCertificate& cert, double zero_tol = 0.0);

/// [[Re A, -Im A], [Im A, Re A]].
Eigen::MatrixXd realify(const MatrixC& a);
/// Inverse of realify, reading the left block column.
MatrixC derealify(const Eigen::MatrixXd& r);

int hermitian_rank(const MatrixC& a, double rank_tol = 1e-8);

/// sum v v^* over the coefficient vectors v of the summands.
MatrixC hermitian_gram(const std::vector<Exponent>& monomials, const HermCertificate& cert);
/// sum v v^T over the coefficient vectors of real summands.
Eigen::MatrixXd real_gram(const std::vector<Exponent>& monomials, const SosCertificate<double>& cert);

/// Summands sqrt(lambda) m^T u from the eigendecomposition of A in Herm_N^+.
HermCertificate extract_hermitian_sos(const GramSpaceD& space, const MatrixC& a, const SosOptions& opts = {});

/// h(f) = G(f) + i Skew_N: Hermitian matrices A with m^T A m = f.
class HermGramSpace {
 public:
  explicit HermGramSpace(GramSpaceD real);
  static HermGramSpace build(const PolynomialD& f, std::optional<LatticePolytope> p = std::nullopt);

  const GramSpaceD& real() const { return real_; }
  int size() const { return real_.size(); }
  /// Real dimension of h(f).
  int dimension() const { return real_.dimension() + size() * (size() - 1) / 2; }
  /// Real codimension of h(f) in Herm_N.
  int codimension() const { return size() * size() - dimension(); }

  /// Real coordinates first, then the skew part in (i, j), i < j, row order.
  MatrixC point(const Eigen::VectorXd& x) const;
  AffineSection realified() const;

 private:
  GramSpaceD real_;
};

struct HermSolution {
  MatrixC point;  // empty when infeasible
  SdpStatus status = SdpStatus::kMaxIterations;
  int rank = 0;
  HermCertificate certificate;
  std::string message;
};

HermSolution herm_solve(const HermGramSpace& space, const SdpOptions& opts = {});
HermSolution herm_minimize_rank(const HermGramSpace& space, int trials, std::uint64_t seed,
                                const SdpOptions& opts = {});

/// v v^* in HS(f) with p = m_d^T v and p conj(p) = f.
struct HermRankOne {
  VectorC v;
  std::uint64_t mask = 0;  // bit i set: conj(u_i) is a root of p
  MatrixC matrix() const { return v * v.adjoint(); }
};

/// All 2^d rank-one matrices in HS(f), p = sqrt(lead) prod (s - w_i t) with
/// w_i the upper root u_i or its conjugate as chosen by the mask.
std::vector<HermRankOne> enumerate_herm_rank1(const BinaryForm& f);

/// Number of conjugate pairs on which all masks agree, i.e. the degree of
/// gcd(p_1, ..., p_s) for rank-ones of a form with distinct roots.
int gcd_degree(const std::vector<std::uint64_t>& masks, int d);

/// Largest gcd degree over replacing each p_k by conj(p_k). Brute force over
/// 2^(s-1) flips; s <= 12.
int max_gcd_over_flips(const std::vector<std::uint64_t>& masks, int d);

/// (x^d, x^(d-1), ..., 1), the monomial vector of dDelta_1 at (x, 1).
VectorC vandermonde(Complex x, int d);

/// U with m_d^T U = g m_e^T: multiplication by g from degree e to degree d.
MatrixC face_embedding(const VectorC& g, int e);

struct LowRankSum {
  int d = 0, e = 0;
  std::vector<HermRankOne> terms;
  std::vector<Complex> gcd_roots;  // roots of the shared factor g
  MatrixC sum;                     // sum of v_k v_k^*
  int rank = 0;
  int rank_bound = 0;              // ceil(log2 s) + 1
  int gcd_bound = 0;               // d + 1 - deg gcd
  std::vector<Eigen::MatrixXd> real_terms;  // (v v^* + conj)/2, rank 2 in GS(f)
  Eigen::MatrixXd real_sum;
  int real_rank = 0;
};

/// s rank-one matrices of HS(f) whose sum has rank at most ceil(log2 s) + 1:
/// f = g conj(g) h with deg h = 2e, e = ceil(log2 s), the first s rank-ones of
/// HS(h) pushed forward by the face embedding of g. The e conjugate pairs of
/// largest imaginary part go to h.
LowRankSum low_rank_sum(const BinaryForm& f, int s);

}  // namespace gramspec

#endif  // GRAMSPEC_HERMITIAN_HPP
