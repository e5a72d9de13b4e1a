// JSON serialization and run configuration.
#ifndef GRAMSPEC_IO_HPP
#define GRAMSPEC_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gramspec/hermitian.hpp"
#include "gramspec/kummer.hpp"

namespace gramspec {

using Json = nlohmann::json;

/// Polynomials are {"nvars": n, "terms": [{"exp": [...], "num": "p", "den": "q"}]}
/// in exact mode and use "coef": <double> per term in float mode.
struct ParsedPolynomial {
  bool exact = true;
  PolynomialQ q{1};
  PolynomialD d{1};
};

ParsedPolynomial polynomial_from_json(const Json& j);
/// Binary form from a polynomial in two variables or {"coeffs": [c_0, ..., c_2d]}.
BinaryForm binary_form_from_json(const Json& j);
/// {"vertices": [[...], ...]}.
LatticePolytope polytope_from_json(const Json& j);

std::string rational_string(const Rational& q);
Json to_json(const Rational& q);  // {"num": "...", "den": "..."}
Json to_json(const PolynomialQ& p);
Json to_json(const PolynomialD& p);
Json to_json(const PolynomialC& p);  // terms carry "re" and "im"
Json to_json(const LatticePolytope& p);
Json to_json(const ToricProfile& p);
Json to_json(const PatakiInterval& p);

/// {"n": N, "order": "grlex", "entries": [[...]]}; complex matrices split
/// the entries into "re" and "im".
Json matrix_json(const Eigen::MatrixXd& a);
Json matrix_json(const MatrixQ& a);
Json matrix_json(const MatrixC& a);

template <typename Scalar>
Json certificate_json(const SosCertificate<Scalar>& c) {
  Json s = Json::array();
  for (const auto& p : c.summands) s.push_back(to_json(p));
  return {{"mode", to_string(c.mode)}, {"summands", s}, {"residual", c.residual}, {"source_rank", c.source_rank}};
}

struct Config {
  std::uint64_t seed = 1;
  double psd_tol = 1e-9;
  double rank_tol = 1e-8;
  double residual_tol = 1e-8;
  int max_iter = 200;
  double gap_tol = 1e-9;
  int trials = 20;
  std::string output_dir = ".";

  /// Overrides defaults with the keys present; throws InvalidArgument on
  /// non-positive tolerances or unknown keys.
  static Config from_json(const Json& j, const Config& base);
  static Config from_json(const Json& j);
  Json to_json() const;
  SdpOptions sdp_options() const;
  SosOptions sos_options() const;
};

}  // namespace gramspec

#endif  // GRAMSPEC_IO_HPP
