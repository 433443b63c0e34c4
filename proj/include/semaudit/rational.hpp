#ifndef SEMAUDIT_RATIONAL_HPP_
#define SEMAUDIT_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace semaudit {

// Exact rational scalar. Expression templates are off so the type behaves as a
// plain value inside Eigen kernels.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalVector = Vector<Rational>;

// Converts an exact rational into the working scalar of a templated kernel.
template <typename Scalar>
Scalar scalar_cast(const Rational& value) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return value;
  } else {
    return static_cast<Scalar>(value);
  }
}

template <typename Scalar>
Vector<Scalar> scalar_cast(const RationalVector& values) {
  Vector<Scalar> out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = scalar_cast<Scalar>(values[i]);
  return out;
}

// Parses "0.95", "-1.5e-2", "19/20" or "3" into an exact fraction.
// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

// Canonical exact form, "p/q" or "p" when the denominator is 1.
std::string to_exact_string(const Rational& value);

// Fixed-point rendering with round-half-even at the given number of decimals.
std::string to_fixed(const Rational& value, int decimals = 3);

// Round-half-even to the given number of decimals, returned as an exact rational.
Rational round_half_even(const Rational& value, int decimals);

// SMT-LIB2 / PRISM friendly constant: "(/ p q)" or "p", with "(- ...)" for negatives.
std::string to_smt_constant(const Rational& value);

inline double to_double(const Rational& value) { return static_cast<double>(value); }

}  // namespace semaudit

#endif  // SEMAUDIT_RATIONAL_HPP_
