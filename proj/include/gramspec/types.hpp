// Scalar and matrix types shared by every module.
#ifndef GRAMSPEC_TYPES_HPP
#define GRAMSPEC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace gramspec {

/// Exact arbitrary-precision rational (GMP backend, no expression templates so
/// it composes cleanly with Eigen).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;
using MatrixC = Matrix<Complex>;
using VectorC = Vector<Complex>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Magnitude of a scalar as a double (absolute value / modulus).
template <typename Scalar>
double magnitude(const Scalar& s) {
  if constexpr (is_exact_v<Scalar>) {
    return std::abs(s.template convert_to<double>());
  } else {
    return std::abs(s);
  }
}

/// Lossy conversion between scalar modes. Rational -> double -> complex only.
template <typename To, typename From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (is_exact_v<From>) {
    return To(v.template convert_to<double>());
  } else if constexpr (is_exact_v<To>) {
    static_assert(!is_complex_v<From>, "cannot convert complex to Rational");
    return Rational(v);
  } else {
    static_assert(!is_complex_v<From> || is_complex_v<To>, "narrowing complex cast");
    return To(v);
  }
}

/// Failure categories. The CLI maps these to exit codes.
enum class ErrorKind {
  kInvalidArgument,       // precondition violated by the caller
  kNvarsMismatch,
  kNewtonPolytopeViolation,
  kNotPsd,
  kRealRoot,
  kRepeatedRoot,
  kInfeasible,
  kDegenerateDirection,
  kNumericalFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gramspec

#endif  // GRAMSPEC_TYPES_HPP
