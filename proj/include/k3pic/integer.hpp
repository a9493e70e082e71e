#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 300,
    MulCost = 300
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace k3pic {

using Integer = mpz_class;
using Rational = mpq_class;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using RatMatrix = Matrix<Rational>;
using RatVector = Vector<Rational>;

/// Base of every mathematical-verification failure raised by the library.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid inputs and exhausted resource budgets.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw UsageError("not a rational number: " + text);
  if (r.get_den() == 0) throw UsageError("zero denominator: " + text);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Integer& v) { return v.get_str(); }
inline std::string to_string(const Rational& v) { return v.get_str(); }

inline std::int64_t to_int64(const Integer& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return v.get_si();
}

/// Nonnegative residue of an integer modulo m.
inline std::uint64_t mod_u64(const Integer& v, std::uint64_t m) {
  Integer r = v % Integer(static_cast<unsigned long>(m));
  if (r < 0) r += static_cast<unsigned long>(m);
  return r.get_ui();
}

bool is_prime(std::uint64_t n);

}  // namespace k3pic
