// gramspec: sums of squares through Gram spectrahedra from the command line.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gramspec/io.hpp"

using namespace gramspec;

namespace {

constexpr int kUsage = 1, kInfeasible = 2, kNumerical = 3;

// Reports a result that is not an error but still exits non-zero.
struct Outcome {
  Json out;
  int code = 0;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, "'" + path + "' is not valid JSON: " + ex.what());
  }
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInfeasible:
    case ErrorKind::kNotPsd:
    case ErrorKind::kRealRoot: return kInfeasible;
    case ErrorKind::kNumericalFailure: return kNumerical;
    default: return kUsage;
  }
}

Json exponents_json(const std::vector<Exponent>& es) {
  Json j = Json::array();
  for (const auto& e : es) j.push_back(e);
  return j;
}

Json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

Json vector_json(const VectorC& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

double poly_scale(const PolynomialD& f) { return std::max(1.0, f.max_abs_coeff()); }

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string input, polytope;
  bool rank_min = false, rational = false;
  long long denominator = 0;
};

Outcome decompose(const DecomposeArgs& a, const Config& cfg) {
  const ParsedPolynomial f = polynomial_from_json(read_json(a.input));
  std::optional<LatticePolytope> p;
  if (!a.polytope.empty()) p = polytope_from_json(read_json(a.polytope));
  if (a.rational && !f.exact) throw Error(ErrorKind::kInvalidArgument, "--rational needs exact (num/den) coefficients");

  std::optional<GramSpaceQ> exact;
  GramSpaceD space = f.exact ? (exact = GramSpaceQ::build(f.q, p))->cast<double>() : GramSpaceD::build(f.d, p);
  const SdpOptions opts = cfg.sdp_options();
  const SdpSolution sol = a.rank_min ? minimize_rank(space, cfg.trials, cfg.seed, opts) : solve_feasibility(space, opts);

  Outcome o;
  o.out["monomials"] = exponents_json(space.monomials());
  o.out["gram_dimension"] = space.dimension();
  o.out["message"] = sol.message;
  if (sol.status == SdpStatus::kInfeasible) {
    o.out["status"] = "infeasible";
    if (sol.certificate.size() > 0) o.out["infeasibility_certificate"] = matrix_json(sol.certificate);
    if (!space.has_gram_matrices()) o.out["unreachable"] = exponents_json(space.unreachable());
    o.code = kInfeasible;
    return o;
  }
  if (sol.status != SdpStatus::kOptimal) throw Error(ErrorKind::kNumericalFailure, "solver did not converge: " + sol.message);

  const SosCertificate<double> cert = extract_sos(space, sol.point, cfg.sos_options());
  if (cert.residual > cfg.residual_tol * poly_scale(space.target()))
    throw Error(ErrorKind::kNumericalFailure, "certificate residual " + std::to_string(cert.residual) + " exceeds tolerance");
  o.out["status"] = "feasible";
  o.out["gram_matrix"] = matrix_json(sol.point);
  o.out["rank"] = sol.numerical_rank;
  o.out["face_size"] = sol.face_size;
  o.out["certificate"] = certificate_json(cert);

  if (a.rational) {
    std::vector<long long> dens;
    if (a.denominator > 0) {
      dens.push_back(a.denominator);
    } else {
      for (long long d = 100; d <= 1000000000000LL; d *= 10) dens.push_back(d);
    }
    for (long long d : dens) {
      const MatrixQ q = round_to_gram(*exact, sol.point, d);
      try {
        const SosCertificate<Rational> rc = rational_sos(*exact, q);
        o.out["rational_gram_matrix"] = matrix_json(q);
        o.out["rational_certificate"] = certificate_json(rc);
        o.out["denominator"] = d;
        return o;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNotPsd) throw;
      }
    }
    o.out["status"] = "no_rational_certificate";
    o.out["message"] = "no rounding of the Gram matrix is positive semidefinite";
    o.code = kInfeasible;
  }
  return o;
}

Json rank2_json(const RankTwoGram& r) {
  return {{"matrix", matrix_json(r.matrix)},
          {"psd", r.psd},
          {"kind", to_string(r.partition.kind)},
          {"block", r.partition.block},
          {"mask", r.partition.mask},
          {"p", to_json(r.p)},
          {"q", to_json(r.q)},
          {"sign", r.psd ? "p^2+q^2" : "p^2-q^2"}};
}

Outcome enumerate(const std::string& input, const std::string& which) {
  const BinaryForm f = binary_form_from_json(read_json(input));
  const Rank2Which w = which == "psd" ? Rank2Which::kPsd : which == "real" ? Rank2Which::kReal : Rank2Which::kAll;
  const Rank2Enumeration e = enumerate_rank2(f, w);
  Outcome o;
  Json list = Json::array();
  for (const auto& r : e.psd) list.push_back(rank2_json(r));
  for (const auto& r : e.indefinite) list.push_back(rank2_json(r));
  Json roots = Json::array();
  for (const auto& r : e.roots.roots) roots.push_back(complex_json(r.value));
  o.out = {{"degree", f.degree()},
           {"roots", roots},
           {"counts", {{"psd", e.psd.size()}, {"indefinite", e.indefinite.size()}, {"complex", e.complex_count}}},
           {"matrices", list}};
  if (w == Rank2Which::kAll && f.degree() == 6) {
    const KummerNodeSet k = kummer_nodes(f);
    Json nodes = Json::array();
    for (std::size_t i = 0; i < k.rank2.size(); ++i)
      nodes.push_back({{"matrix", matrix_json(k.rank2[i])},
                       {"kind", to_string(k.partitions[i].kind)},
                       {"block", k.partitions[i].block}});
    o.out["complex_matrices"] = nodes;
  }
  return o;
}

Json candidate_json(const KummerCandidate& k) {
  return {{"value", k.value},         {"xyz", {k.xyz(0), k.xyz(1), k.xyz(2)}}, {"matrix", matrix_json(Eigen::MatrixXd(k.matrix))},
          {"rank", k.rank},           {"psd", k.psd},                           {"lambda_min", k.lambda_min}};
}

Outcome kummer_opt(const std::string& input, const std::vector<double>& c) {
  if (c.size() != 3) throw Error(ErrorKind::kInvalidArgument, "--objective needs three comma-separated values");
  const SexticCoeffs a = sextic_coeffs(binary_form_from_json(read_json(input)));
  const ClosedFormResult r = optimize_closed_form(a, Eigen::Vector3d(c[0], c[1], c[2]));
  Json rank3 = Json::array(), rank2 = Json::array(), values = Json::array();
  for (const auto& k : r.rank3) rank3.push_back(candidate_json(k));
  for (const auto& k : r.rank2) rank2.push_back(candidate_json(k));
  for (const Complex& v : r.rank2_values) values.push_back(complex_json(v));
  Outcome o;
  o.out = {{"sextic_coeffs", a.a},
           {"F2", r.f2},
           {"F1", r.f1},
           {"F0", r.f0},
           {"discriminant", r.discriminant},
           {"critical_values", {complex_json(r.critical_values[0]), complex_json(r.critical_values[1])}},
           {"real_critical", r.real_critical},
           {"rank3", rank3},
           {"rank2", rank2},
           {"rank2_values", values},
           {"maximum", candidate_json(r.maximum)},
           {"minimum", candidate_json(r.minimum)},
           {"message", r.message}};
  return o;
}

Outcome surface(const std::string& input, int res, std::string out_path, bool dual, const Config& cfg) {
  const SexticCoeffs a = sextic_coeffs(binary_form_from_json(read_json(input)));
  SurfaceOptions opts;
  opts.resolution = res;
  opts.include_dual = dual;
  const SurfaceSample s = sample_surface(a, opts);
  if (out_path.empty()) out_path = cfg.output_dir + "/mesh.obj";
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + out_path + "'");
  file << s.primal.to_obj("kummer");
  if (dual) {
    // OBJ indices are global across objects.
    Mesh shifted = s.dual;
    for (auto& f : shifted.faces)
      for (int& i : f) i += static_cast<int>(s.primal.vertices.size());
    file << shifted.to_obj("dual_kummer");
  }
  Outcome o;
  o.out = {{"out", out_path},
           {"resolution", res},
           {"spacing", s.spacing},
           {"lower", {s.lower(0), s.lower(1), s.lower(2)}},
           {"upper", {s.upper(0), s.upper(1), s.upper(2)}},
           {"primal", {{"vertices", s.primal.vertices.size()}, {"faces", s.primal.faces.size()}}},
           {"dual", {{"vertices", s.dual.vertices.size()}, {"faces", s.dual.faces.size()}}}};
  return o;
}

Outcome pataki(int n, int m, int c, bool hermitian) {
  Outcome o;
  if (hermitian) {
    if (c < 0) throw Error(ErrorKind::kInvalidArgument, "--hermitian needs --c");
    o.out = to_json(hermitian_pataki_interval(n, c));
  } else {
    if (m < 0) throw Error(ErrorKind::kInvalidArgument, "pataki needs --m (or --c with --hermitian)");
    o.out = to_json(pataki_interval(n, m));
  }
  return o;
}

Outcome classify(const std::string& input, const std::vector<int>& simplex, const std::vector<int>& cayley,
                 const std::vector<int>& product) {
  const int given = !input.empty() + !simplex.empty() + !cayley.empty() + !product.empty();
  if (given != 1) throw Error(ErrorKind::kInvalidArgument, "give exactly one of --input, --simplex, --cayley, --product");
  std::optional<LatticePolytope> p;
  if (!input.empty()) p = polytope_from_json(read_json(input));
  if (!simplex.empty()) {
    if (simplex.size() != 2) throw Error(ErrorKind::kInvalidArgument, "--simplex takes nvars,d");
    p = scaled_simplex(simplex[0], simplex[1]);
  }
  if (!cayley.empty()) p = cayley_polytope(cayley);
  if (!product.empty()) {
    if (product.size() != 2) throw Error(ErrorKind::kInvalidArgument, "--product takes r,s");
    p = product_of_simplices(product[0], product[1]);
  }
  Outcome o;
  o.out = {{"polytope", to_json(*p)}, {"profile", to_json(toric_profile(*p))}};
  const TwoNormalResult tn = is_two_normal(*p);
  if (tn.witness) o.out["two_normal_witness"] = *tn.witness;
  return o;
}

Outcome hermitian(const std::string& input, const std::string& op, int s, const Config& cfg) {
  const Json in = read_json(input);
  Outcome o;
  if (op == "enumerate") {
    const BinaryForm f = binary_form_from_json(in);
    Json list = Json::array();
    for (const HermRankOne& r : enumerate_herm_rank1(f))
      list.push_back({{"mask", r.mask}, {"v", vector_json(r.v)}, {"matrix", matrix_json(r.matrix())}});
    o.out = {{"count", list.size()}, {"rank_one", list}};
  } else if (op == "lowrank") {
    const BinaryForm f = binary_form_from_json(in);
    const LowRankSum l = low_rank_sum(f, s);
    Json terms = Json::array(), real_terms = Json::array(), roots = Json::array();
    for (const auto& t : l.terms) terms.push_back({{"mask", t.mask}, {"v", vector_json(t.v)}});
    for (const auto& a : l.real_terms) real_terms.push_back(matrix_json(a));
    for (const Complex& x : l.gcd_roots) roots.push_back(complex_json(x));
    o.out = {{"s", s},
             {"e", l.e},
             {"terms", terms},
             {"gcd_roots", roots},
             {"sum", matrix_json(l.sum)},
             {"rank", l.rank},
             {"rank_bound", l.rank_bound},
             {"gcd_bound", l.gcd_bound},
             {"real_terms", real_terms},
             {"real_sum", matrix_json(l.real_sum)},
             {"real_rank", l.real_rank}};
  } else {
    const ParsedPolynomial f = polynomial_from_json(in);
    const HermGramSpace h = HermGramSpace::build(f.d);
    const HermSolution sol = herm_minimize_rank(h, cfg.trials, cfg.seed, cfg.sdp_options());
    o.out["message"] = sol.message;
    o.out["codimension"] = h.codimension();
    if (sol.status != SdpStatus::kOptimal) {
      o.out["status"] = "infeasible";
      o.code = sol.status == SdpStatus::kInfeasible ? kInfeasible : kNumerical;
      return o;
    }
    if (sol.certificate.residual > cfg.residual_tol * poly_scale(f.d))
      throw Error(ErrorKind::kNumericalFailure, "Hermitian certificate residual exceeds tolerance");
    o.out["status"] = "feasible";
    o.out["rank"] = sol.rank;
    o.out["gram_matrix"] = matrix_json(sol.point);
    o.out["certificate"] = certificate_json(sol.certificate);
  }
  return o;
}

Outcome hurwitz(int r) {
  const SosCertificate<Rational> c = hurwitz_sos(r);
  Outcome o;
  o.out = {{"r", r}, {"form", to_json(hurwitz_form(r))}, {"certificate", certificate_json(c)}, {"verified", true}};
  return o;
}

void fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  std::exit(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sums of squares certificates through Gram spectrahedra"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON file overriding default tolerances")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for randomized steps");

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "SOS certificate from a Gram matrix");
  c_dec->add_option("--input", dec.input, "polynomial JSON")->required();
  c_dec->add_option("--polytope", dec.polytope, "polytope JSON for the monomial basis");
  c_dec->add_flag("--rank-min", dec.rank_min, "look for a low-rank Gram matrix");
  c_dec->add_flag("--rational", dec.rational, "round to an exact rational certificate");
  c_dec->add_option("--denominator", dec.denominator, "rounding denominator (default: search powers of 10)");

  std::string input, which = "all", op = "enumerate", out_path;
  auto* c_enum = app.add_subcommand("enumerate-rank2", "rank-two Gram matrices of a positive binary form");
  c_enum->add_option("--input", input, "binary form JSON")->required();
  c_enum->add_option("--which", which)->check(CLI::IsMember({"psd", "real", "all"}));

  std::vector<double> objective;
  auto* c_kum = app.add_subcommand("kummer-opt", "closed-form linear optimization over a sextic's Gram spectrahedron");
  c_kum->add_option("--input", input, "binary sextic JSON")->required();
  c_kum->add_option("--objective", objective, "c1,c2,c3")->required()->delimiter(',');

  int res = 64;
  bool no_dual = false;
  auto* c_surf = app.add_subcommand("surface-sample", "OBJ mesh of the Kummer and dual Kummer surfaces");
  c_surf->add_option("--input", input, "binary sextic JSON")->required();
  c_surf->add_option("--res", res, "grid resolution")->check(CLI::Range(2, 1024));
  c_surf->add_option("--out", out_path, "OBJ output path");
  c_surf->add_flag("--no-dual", no_dual, "skip the dual surface");

  int pn = 0, pm = -1, pc = -1;
  bool herm = false;
  auto* c_pat = app.add_subcommand("pataki", "ranks of extreme points of generic spectrahedra");
  c_pat->add_option("--N", pn, "matrix size")->required()->check(CLI::PositiveNumber);
  c_pat->add_option("--m", pm, "dimension of the affine section of Sym_N");
  c_pat->add_option("--c", pc, "codimension of the affine section of Herm_N");
  c_pat->add_flag("--hermitian", herm);

  std::vector<int> simplex, cayley, product;
  auto* c_cls = app.add_subcommand("classify-polytope", "toric degree profile of a lattice polytope");
  c_cls->add_option("--input", input, "polytope JSON");
  c_cls->add_option("--simplex", simplex, "nvars,d for d times the simplex")->delimiter(',');
  c_cls->add_option("--cayley", cayley, "d1,...,dk")->delimiter(',');
  c_cls->add_option("--product", product, "r,s for a product of simplices")->delimiter(',');

  int s = 2;
  auto* c_herm = app.add_subcommand("hermitian", "Hermitian Gram spectrahedra");
  c_herm->add_option("--input", input, "polynomial or binary form JSON")->required();
  c_herm->add_option("--op", op)->check(CLI::IsMember({"enumerate", "lowrank", "solve"}));
  c_herm->add_option("--s", s, "number of rank-one summands for lowrank");

  int r = 2;
  auto* c_hur = app.add_subcommand("hurwitz", "composition identities for (x1^2+..+xr^2)(y1^2+..+yr^2)");
  c_hur->add_option("--r", r)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail(kUsage, "usage", e.what());
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = Config::from_json(read_json(config_path));
    if (seed) cfg.seed = *seed;

    Outcome o;
    if (*c_dec) o = decompose(dec, cfg);
    else if (*c_enum) o = enumerate(input, which);
    else if (*c_kum) o = kummer_opt(input, objective);
    else if (*c_surf) o = surface(input, res, out_path, !no_dual, cfg);
    else if (*c_pat) o = pataki(pn, pm, pc, herm);
    else if (*c_cls) o = classify(input, simplex, cayley, product);
    else if (*c_herm) o = hermitian(input, op, s, cfg);
    else if (*c_hur) o = hurwitz(r);
    std::cout << o.out.dump(2) << "\n";
    return o.code;
  } catch (const Error& e) {
    fail(exit_code(e.kind()), to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    fail(kNumerical, "internal", e.what());
  }
  return 0;
}
