#include "gramspec/io.hpp"

namespace gramspec {

namespace {

Exponent exponent_from_json(const Json& j, int nvars) {
  Exponent e = j.get<Exponent>();
  if (static_cast<int>(e.size()) != nvars) throw Error(ErrorKind::kNvarsMismatch, "exponent length does not match nvars");
  for (int v : e)
    if (v < 0) throw Error(ErrorKind::kInvalidArgument, "negative exponent");
  return e;
}

Rational rational_from_json(const Json& j) {
  const auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  const Integer num(text(j.at("num")));
  const Integer den(j.contains("den") ? text(j.at("den")) : std::string("1"));
  if (den == 0) throw Error(ErrorKind::kInvalidArgument, "zero denominator");
  return Rational(num, den);
}

Json rows(const Eigen::MatrixXd& a) {
  Json r = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    r.push_back(row);
  }
  return r;
}

}  // namespace

ParsedPolynomial polynomial_from_json(const Json& j) {
  try {
    const int nvars = j.at("nvars").get<int>();
    if (nvars <= 0) throw Error(ErrorKind::kInvalidArgument, "nvars must be positive");
    const Json& terms = j.at("terms");
    ParsedPolynomial out;
    out.q = PolynomialQ(nvars);
    out.d = PolynomialD(nvars);
    for (const Json& t : terms)
      if (t.contains("coef")) out.exact = false;
    for (const Json& t : terms) {
      const Exponent e = exponent_from_json(t.at("exp"), nvars);
      if (out.exact) {
        out.q.add_term(e, rational_from_json(t));
      } else {
        out.d.add_term(e, t.contains("coef") ? t.at("coef").get<double>() : rational_from_json(t).convert_to<double>());
      }
    }
    if (out.exact) out.d = out.q.cast<double>();
    return out;
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed polynomial JSON: ") + ex.what());
  }
}

BinaryForm binary_form_from_json(const Json& j) {
  try {
    if (j.contains("coeffs")) return BinaryForm(j.at("coeffs").get<std::vector<double>>());
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed binary form JSON: ") + ex.what());
  }
  const ParsedPolynomial p = polynomial_from_json(j);
  if (p.d.nvars() != 2) throw Error(ErrorKind::kNvarsMismatch, "binary form needs two variables");
  return BinaryForm::from_polynomial(p.d);
}

LatticePolytope polytope_from_json(const Json& j) {
  try {
    const auto v = j.at("vertices").get<std::vector<Exponent>>();
    if (v.empty()) throw Error(ErrorKind::kInvalidArgument, "polytope has no vertices");
    for (const auto& e : v)
      if (e.size() != v.front().size()) throw Error(ErrorKind::kNvarsMismatch, "vertices of different lengths");
    return LatticePolytope::from_points(v);
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed polytope JSON: ") + ex.what());
  }
}

std::string rational_string(const Rational& q) {
  return denominator(q) == 1 ? numerator(q).str() : numerator(q).str() + "/" + denominator(q).str();
}

Json to_json(const Rational& q) { return {{"num", numerator(q).str()}, {"den", denominator(q).str()}}; }

Json to_json(const PolynomialQ& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t = to_json(c);
    t["exp"] = e;
    terms.push_back(t);
  }
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

Json to_json(const PolynomialD& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coef", c}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

Json to_json(const PolynomialC& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

Json to_json(const LatticePolytope& p) {
  return {{"vertices", p.vertices()}, {"dim", p.dim()}, {"lattice_points", p.lattice_points().size()}};
}

Json to_json(const ToricProfile& p) {
  Json j{{"N", p.lattice_points}, {"dim", p.dim},          {"codim", p.codim},
         {"degree", p.degree},    {"epsilon", p.epsilon}, {"spanning", p.spanning},
         {"two_normal", p.two_normal}, {"class", to_string(p.classification)}};
  j["predicted_generic_length"] = p.predicted_generic_length ? Json(*p.predicted_generic_length) : Json(nullptr);
  return j;
}

Json to_json(const PatakiInterval& p) {
  Json ranks = Json::array();
  for (int r = p.r_min; r <= p.r_max; ++r) ranks.push_back(r);
  return {{"N", p.size}, {"parameter", p.parameter}, {"convention", p.convention},
          {"r_min", p.r_min}, {"r_max", p.r_max}, {"ranks", ranks}};
}

Json matrix_json(const Eigen::MatrixXd& a) {
  return {{"n", a.rows()}, {"order", "grlex"}, {"entries", rows(a)}};
}

Json matrix_json(const MatrixQ& a) {
  Json r = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(rational_string(a(i, j)));
    r.push_back(row);
  }
  return {{"n", a.rows()}, {"order", "grlex"}, {"entries", r}};
}

Json matrix_json(const MatrixC& a) {
  return {{"n", a.rows()}, {"order", "grlex"}, {"entries", {{"re", rows(a.real())}, {"im", rows(a.imag())}}}};
}

Config Config::from_json(const Json& j) { return from_json(j, Config()); }

Config Config::from_json(const Json& j, const Config& base) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "config must be a JSON object");
  Config c = base;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "tolerances") {
        for (const auto& [k, v] : value.items()) {
          if (k == "psd_tol") c.psd_tol = v.get<double>();
          else if (k == "rank_tol") c.rank_tol = v.get<double>();
          else if (k == "residual_tol") c.residual_tol = v.get<double>();
          else throw Error(ErrorKind::kInvalidArgument, "unknown tolerance '" + k + "'");
        }
      } else if (key == "solver") {
        for (const auto& [k, v] : value.items()) {
          if (k == "max_iter") c.max_iter = v.get<int>();
          else if (k == "gap_tol") c.gap_tol = v.get<double>();
          else if (k == "trials") c.trials = v.get<int>();
          else throw Error(ErrorKind::kInvalidArgument, "unknown solver option '" + k + "'");
        }
      } else if (key == "paths") {
        for (const auto& [k, v] : value.items()) {
          if (k == "output_dir") c.output_dir = v.get<std::string>();
          else throw Error(ErrorKind::kInvalidArgument, "unknown path '" + k + "'");
        }
      } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed config: ") + ex.what());
  }
  if (!(c.psd_tol > 0 && c.rank_tol > 0 && c.residual_tol > 0 && c.gap_tol > 0))
    throw Error(ErrorKind::kInvalidArgument, "tolerances must be positive");
  if (c.max_iter <= 0 || c.trials < 0) throw Error(ErrorKind::kInvalidArgument, "solver limits must be positive");
  return c;
}

Json Config::to_json() const {
  return {{"seed", seed},
          {"tolerances", {{"psd_tol", psd_tol}, {"rank_tol", rank_tol}, {"residual_tol", residual_tol}}},
          {"solver", {{"max_iter", max_iter}, {"gap_tol", gap_tol}, {"trials", trials}}},
          {"paths", {{"output_dir", output_dir}}}};
}

SdpOptions Config::sdp_options() const {
  SdpOptions o;
  o.max_iter = max_iter;
  o.gap_tol = gap_tol;
  o.rank_tol = rank_tol;
  return o;
}

SosOptions Config::sos_options() const { return {psd_tol, rank_tol}; }

}  // namespace gramspec
