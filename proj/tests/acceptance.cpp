// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "gramspec/binary.hpp"
#include "gramspec/gram.hpp"
#include "gramspec/hermitian.hpp"
#include "gramspec/kummer.hpp"
#include "gramspec/polytope.hpp"
#include "gramspec/sdp.hpp"

using namespace gramspec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
}

const double kSqrt5 = std::sqrt(5.0);

BinaryForm ex43() { return BinaryForm({1, -2, 5, -4, 5, -2, 1}); }

Eigen::Matrix4d displayed_matrix(double sign) {
  const double p = (1 + sign * kSqrt5) / 2, q = (1 - sign * kSqrt5) / 2;
  Eigen::Matrix4d m;
  m << 1, -1, p, 0, -1, 4 - sign * kSqrt5, -2, q, p, -2, 4 + sign * kSqrt5, -1, 0, q, -1, 1;
  return m;
}

AffineSection section_of(const SexticCoeffs& a) {
  AffineSection s;
  s.offset = gram_parametrization(a, 0.0, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(k) = 1;
    s.basis.push_back(gram_parametrization(a, e(0), e(1), e(2)) - s.offset);
  }
  return s;
}

BinaryForm random_positive(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.3, 1.5);
  std::vector<Complex> w;
  while (static_cast<int>(w.size()) < 2 * d) {
    const Complex u(re(rng), im(rng));
    bool ok = true;
    for (const Complex& v : w) ok = ok && std::abs(u - v) > 0.25 && std::abs(std::conj(u) - v) > 0.25;
    if (!ok) continue;
    w.push_back(u);
    w.push_back(std::conj(u));
  }
  std::vector<double> c;
  for (const Complex& v : product_of_linear_factors(w)) c.push_back(v.real());
  return BinaryForm(c);
}

std::vector<Exponent> binary_monomials(int d) {
  std::vector<Exponent> m;
  for (int k = 0; k <= d; ++k) m.push_back({d - k, k});
  return m;
}

template <typename Derived>
double reconstruction_error(const BinaryForm& f, const Eigen::MatrixBase<Derived>& a) {
  const int d = f.half_degree();
  const auto p = gram_apply(binary_monomials(d), a);
  double err = 0;
  for (int k = 0; k <= 2 * d; ++k) err = std::max(err, std::abs(p.coeff({2 * d - k, k}) - f.coeffs()[k]));
  return err;
}

// Sum of N random squares, N the number of lattice points: a Gram matrix of
// full rank, so f is interior to the SOS cone.
PolynomialD random_interior_sos(const LatticePolytope& p, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const std::vector<Exponent> m = p.lattice_points();
  PolynomialD f(p.ambient_dim());
  for (std::size_t k = 0; k < m.size(); ++k) {
    PolynomialD q(p.ambient_dim());
    for (const Exponent& e : m) q.add_term(e, nd(rng));
    f += q * q;
  }
  return f;
}

PolynomialD from_terms(int nv, const std::vector<std::pair<Exponent, double>>& t) {
  PolynomialD p(nv);
  for (const auto& [e, c] : t) p.add_term(e, c);
  return p;
}

void closed_form(Outcome& o) {
  const auto t0 = Clock::now();
  const SexticCoeffs a = sextic_coeffs(ex43());
  const Eigen::Vector3d c(1, 0, -1);
  const ClosedFormResult r = optimize_closed_form(a, c);
  double val_err = 0, mat_err = 0;
  o.require(r.real_critical && r.rank3.size() == 2, "two real rank-3 critical points");
  for (const KummerCandidate& k : r.rank3) {
    val_err = std::max(val_err, std::abs(std::abs(k.value) - kSqrt5));
    const double sign = k.value > 0 ? -1.0 : 1.0;
    mat_err = std::max(mat_err, (k.matrix - displayed_matrix(sign)).cwiseAbs().maxCoeff());
    o.require(k.rank == 3 && k.psd, "rank 3 and PSD");
  }
  o.require(r.rank3.size() == 2 && r.rank3[0].value * r.rank3[1].value < 0, "values of opposite sign");
  const SdpSolution hi = solve_linear(section_of(a), c);
  const SdpSolution lo = solve_linear(section_of(a), -c);
  const double sdp_err = std::max(std::abs(hi.objective - r.maximum.value), std::abs(-lo.objective - r.minimum.value));
  const double elapsed = seconds_since(t0);
  o.require(val_err < 1e-10, "critical values within 1e-10");
  o.require(mat_err < 1e-9, "matrices within 1e-9");
  o.require(hi.status == SdpStatus::kOptimal && lo.status == SdpStatus::kOptimal, "solver optimal");
  o.require(sdp_err < 1e-6, "solver agreement within 1e-6");
  o.require(elapsed < 1.0, "under 1 s");
  o.detail << " |W-sqrt5|=" << val_err << " matrix_err=" << mat_err << " sdp_err=" << sdp_err << " time=" << elapsed
           << "s";
}

void chart(Outcome& o) {
  const auto t0 = Clock::now();
  const ChartCheck c = chart_check(sextic_coeffs(ex43()), 50, 1, 1e-9);
  const double elapsed = seconds_since(t0);
  o.require(c.points == 50, "50 points");
  o.require(c.ratio != 0.0, "nonzero ratio");
  o.require(c.residual < 1e-9, "residual below 1e-9");
  o.require(elapsed < 1.0, "under 1 s");
  o.detail << " ratio=" << c.ratio << " residual=" << c.residual << " time=" << elapsed << "s";
}

void rank2_counts(Outcome& o) {
  std::mt19937_64 rng(3);
  double worst_err = 0, worst_time = 0;
  int bad = 0;
  for (int t = 0; t < 20; ++t) {
    const BinaryForm f = random_positive(3, rng);
    const auto t0 = Clock::now();
    const Rank2Enumeration e = enumerate_rank2(f, Rank2Which::kAll);
    worst_time = std::max(worst_time, seconds_since(t0));
    if (e.psd.size() != 4 || e.complex_count != 10) ++bad;
    for (const RankTwoGram& g : e.psd) worst_err = std::max(worst_err, reconstruction_error(f, g.matrix));
  }
  o.require(bad == 0, "4 PSD and 10 complex for every form");
  o.require(worst_err <= 1e-8, "reconstruction within 1e-8");
  o.require(worst_time < 1.0, "under 1 s per form");
  o.detail << " forms=20 wrong_counts=" << bad << " max_err=" << worst_err << " max_time=" << worst_time << "s";
}

void nodes(Outcome& o) {
  const BinaryForm f = ex43();
  const SexticCoeffs a = sextic_coeffs(f);
  const KummerNodeSet n = kummer_nodes(f);
  double worst = 0;
  for (const Eigen::Vector4cd& p : n.rank3) {
    const Eigen::Matrix4cd m =
        homogenized_gram<Complex, double>(a, p(0), p(1), p(2), p(3));
    worst = std::max(worst, std::abs(m.determinant()));
  }
  o.require(n.rank3.size() == 6, "six nodes");
  o.require(worst < 1e-8, "determinant within 1e-8");
  o.detail << " nodes=" << n.rank3.size() << " max|det|=" << worst;
}

void pataki(Outcome& o) {
  const PatakiInterval real = pataki_interval(4, 3);
  const PatakiInterval h12 = hermitian_pataki_interval(12, 63);
  const PatakiInterval h13 = hermitian_pataki_interval(13, 70);
  o.require(real.r_min == 2, "real (4,3) r_min = 2");
  o.require(h12.r_min == 3 && h12.r_max == 7, "Hermitian (12,63) = 3..7");
  o.require(h13.r_min == 4 && h13.r_max == 8, "Hermitian (13,70) = 4..8");
  o.detail << " real(4,3)=" << real.r_min << ".." << real.r_max << " herm(12,63)=" << h12.r_min << ".." << h12.r_max
           << " herm(13,70)=" << h13.r_min << ".." << h13.r_max;
}

void rational(Outcome& o) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> coef(-4, 4);
  const LatticePolytope p = scaled_simplex(3, 2);
  const std::vector<Exponent> m = p.lattice_points();
  PolynomialQ f(3);
  for (std::size_t k = 0; k < m.size() + 2; ++k) {
    PolynomialQ q(3);
    for (const Exponent& e : m) q.add_term(e, coef(rng));
    f += q * q;
  }
  const GramSpaceQ exact = GramSpaceQ::build(f);
  const GramSpaceD space = exact.cast<double>();
  const SdpSolution sol = solve_feasibility(space);
  o.require(sol.status == SdpStatus::kOptimal, "interior point found");
  for (long long d = 100; d <= 1000000000000LL; d *= 10) {
    const MatrixQ a = round_to_gram(exact, sol.point, d);
    LdltResult ldl;
    try {
      ldl = exact_ldlt(a);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotPsd) throw;
      continue;
    }
    const SosCertificate<Rational> c = rational_sos(exact, a);
    const bool identity = c.expand(3) == f;
    o.require(identity, "exact identity");
    o.require(c.residual == 0.0, "residual 0");
    o.require(static_cast<int>(c.summands.size()) <= 4 * ldl.rank, "length at most 4 rank");
    o.detail << " denominator=" << d << " rank=" << ldl.rank << " length=" << c.summands.size()
             << " exact=" << (identity ? "yes" : "no");
    return;
  }
  o.require(false, "no PSD rounding found");
}

void two_squares_over_cubic_field(Outcome& o) {
  const PolynomialD f = from_terms(3, {{{4, 0, 0}, 1},
                                       {{1, 3, 0}, 1},
                                       {{0, 4, 0}, 1},
                                       {{2, 1, 1}, -3},
                                       {{1, 2, 1}, -4},
                                       {{2, 0, 2}, 2},
                                       {{1, 0, 3}, 1},
                                       {{0, 1, 3}, 1},
                                       {{0, 0, 4}, 1}});
  // s (s^3 - 4 s t^2 - t^3): the extra root at 0 makes the degree even.
  const RootList cubic = roots(BinaryForm({1, 0, -4, -1, 0}));
  std::vector<double> betas;
  for (const Root& r : cubic.roots)
    if (std::abs(r.value.imag()) < 1e-12 && std::abs(r.value) > 1e-9) betas.push_back(r.value.real());
  o.require(betas.size() == 3, "three real roots of t^3 - 4t - 1");
  const auto x = PolynomialD::variable(3, 0), y = PolynomialD::variable(3, 1), z = PolynomialD::variable(3, 2);
  double worst = 0;
  int real_embeddings = 0;
  for (double b : betas) {
    const PolynomialD p = 2.0 * x * x + b * y * y - y * z + (2 + 1 / b) * z * z;
    const PolynomialD q = 2.0 * x * y - (1 / b) * y * y + (2 / b) * x * z + b * y * z - z * z;
    const PolynomialD rhs = p * p - b * (q * q);
    worst = std::max(worst, max_abs_diff(rhs, 4.0 * f));
    if (b < 0) ++real_embeddings;
  }
  o.require(worst < 1e-8, "identity within 1e-8");
  o.require(real_embeddings == 2, "two negative roots");
  const GramSpaceD space = GramSpaceD::build(f);
  const SdpSolution feas = solve_feasibility(space);
  o.require(feas.status == SdpStatus::kOptimal, "GS(f) nonempty");
  const SdpSolution low = minimize_rank(space, 20, 1);
  o.require(low.numerical_rank == 2, "minimum rank 2");
  o.detail << " roots=" << betas.size() << " max_identity_err=" << worst << " feasible="
           << to_string(feas.status) << " face_size=" << feas.face_size << " min_rank=" << low.numerical_rank;
}

void hermitian(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(1, 8);
  std::normal_distribution<double> g;
  const std::vector<Exponent> m = binary_monomials(4);
  double worst_trip = 0;
  for (int t = 0; t < 100; ++t) {
    SosCertificate<double> c;
    const int r = len(rng);
    for (int k = 0; k < r; ++k) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(m.size()));
      for (auto& e : v) e = g(rng);
      c.summands.push_back(linear_form(m, v));
    }
    const HermCertificate h = real_to_hermitian(c);
    const SosCertificate<double> back = hermitian_to_real(h);
    const PolynomialD f = c.expand(2);
    worst_trip = std::max({worst_trip, max_abs_diff(back.expand(2), f), h.residual, back.residual});
  }
  o.require(worst_trip < 1e-9, "round trips within 1e-9");

  bool counts = true;
  for (int d = 1; d <= 6; ++d) counts = counts && enumerate_herm_rank1(random_positive(d, rng)).size() == (1u << d);
  o.require(counts, "2^d rank-ones for d <= 6");

  const BinaryForm f = random_positive(6, rng);
  const LowRankSum l = low_rank_sum(f, 4);
  bool rank2 = l.real_terms.size() == 4;
  double worst_rec = 0;
  for (const Eigen::MatrixXd& a : l.real_terms) {
    rank2 = rank2 && numerical_rank(a) == 2 &&
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff() > -1e-9 * a.norm();
    worst_rec = std::max(worst_rec, reconstruction_error(f, a));
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(l.real_sum).singularValues();
  const long sum_rank = (sv.array() > 1e-8 * sv(0)).count();
  o.require(rank2, "four real PSD rank-2 matrices");
  o.require(worst_rec < 1e-8 * f.scale(), "matrices lie in GS(f)");
  o.require(sum_rank <= 6, "sum rank at most 6");
  o.detail << " round_trip_err=" << worst_trip << " rank_one_counts=" << (counts ? "ok" : "wrong")
           << " sum_rank=" << sum_rank << " hermitian_sum_rank=" << l.rank;
}

void toric(Outcome& o) {
  struct Case {
    std::string name;
    LatticePolytope p;
    int epsilon, length;
  };
  std::vector<Case> cases;
  for (int d = 1; d <= 6; ++d) cases.push_back({std::to_string(d) + "D1", scaled_simplex(2, d), 0, 2});
  cases.push_back({"2D2", scaled_simplex(3, 2), 0, 3});
  cases.push_back({"2D3", scaled_simplex(4, 2), 1, 5});
  cases.push_back({"3D2", scaled_simplex(3, 3), 1, 4});
  cases.push_back({"cayley(2,1,1,1,1,1)", cayley_polytope({2, 1, 1, 1, 1, 1}), 0, 7});
  for (const Case& c : cases) {
    const ToricProfile t = toric_profile(c.p);
    const int n = t.dim;
    const bool ok = t.epsilon == c.epsilon && t.predicted_generic_length == c.length &&
                    (c.epsilon != 0 || c.length == n + 1);
    o.require(ok, "profile of " + c.name);
  }

  const std::vector<Case> sampled = {{"3D1", scaled_simplex(2, 3), 0, 2},
                                     {"2D2", scaled_simplex(3, 2), 0, 3},
                                     {"cayley(2,1,1,1,1,1)", cayley_polytope({2, 1, 1, 1, 1, 1}), 0, 7},
                                     {"3D2", scaled_simplex(3, 3), 1, 4},
                                     {"2D3", scaled_simplex(4, 2), 1, 5}};
  std::mt19937_64 rng(9);
  for (const Case& c : sampled) {
    int hits = 0;
    std::ostringstream misses;
    for (int t = 0; t < 10; ++t) {
      const PolynomialD f = random_interior_sos(c.p, rng);
      const GramSpaceD space = GramSpaceD::build(f, c.p);
      const SdpSolution s = minimize_rank(space, 20, 100 + t);
      const bool valid = s.status == SdpStatus::kOptimal &&
                         max_abs_diff(gram_apply(space, s.point), f) < 1e-8 * f.max_abs_coeff();
      if (valid && s.numerical_rank <= c.length)
        ++hits;
      else
        misses << (misses.tellp() > 0 ? "," : "") << "#" << t << ":rank" << s.numerical_rank;
    }
    o.require(hits >= 8, c.name + " reached the predicted length at least 8/10 times");
    o.detail << " " << c.name << "=" << hits << "/10";
    if (misses.tellp() > 0) o.detail << "(" << misses.str() << ")";
  }
}

void hurwitz(Outcome& o) {
  for (int r : {1, 2, 4, 8}) {
    const auto t0 = Clock::now();
    const SosCertificate<Rational> c = hurwitz_sos(r);
    const bool exact = c.expand(2 * r) == hurwitz_form(r);
    const double elapsed = seconds_since(t0);
    o.require(exact && static_cast<int>(c.summands.size()) == r, "r=" + std::to_string(r) + " exact");
    o.require(elapsed < 1.0, "r=" + std::to_string(r) + " under 1 s");
    o.detail << " r=" << r << ":" << (exact ? "exact" : "wrong") << "(" << elapsed << "s)";
  }
}

}  // namespace

int main() {
  report(1, "closed-form optimum of the example sextic", closed_form);
  report(2, "chart restriction of the dual surface", chart);
  report(3, "rank-2 Gram matrix counts of random sextics", rank2_counts);
  report(4, "Kummer nodes annihilate the determinant", nodes);
  report(5, "Pataki intervals", pataki);
  report(6, "exact rational certificate", rational);
  report(7, "quartic with two irrational squares", two_squares_over_cubic_field);
  report(8, "Hermitian round trips, rank-ones and low-rank sums", hermitian);
  report(9, "toric length predictions", toric);
  report(10, "composition identities", hurwitz);
  return failures == 0 ? 0 : 1;
}
