#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "hsg/fp.hpp"

namespace hsg {

using Rational = mpq_class;

/// An exact scalar: either an arbitrary-precision rational (always kept in
/// canonical form) or a prime-field residue.
///
/// Binary operations between a rational and a residue map the rational into
/// the field first; this is how rational circuit constants act on F_p
/// points. Residues with different moduli never mix.
class Scalar {
 public:
  Scalar() : rep_(Rational(0)) {}
  template <std::integral I>
  Scalar(I v) : rep_(Rational(static_cast<long>(v))) {}  // NOLINT(implicit)
  explicit Scalar(Rational q) : rep_(std::move(q)) {
    std::get<Rational>(rep_).canonicalize();
  }
  explicit Scalar(Fp f) : rep_(f) {}

  static Scalar ratio(long num, long den);

  /// Integer or `a/b` literal.
  static Scalar parse(std::string_view text);

  bool is_rational() const { return std::holds_alternative<Rational>(rep_); }
  /// 0 for rationals.
  std::uint64_t modulus() const {
    return is_rational() ? 0 : std::get<Fp>(rep_).modulus();
  }
  const Rational& rational() const { return std::get<Rational>(rep_); }
  Fp residue() const { return std::get<Fp>(rep_); }

  /// Image in F_p. Throws RingError if a denominator vanishes mod p or the
  /// residue already lives in a different field.
  Fp to_fp(std::uint64_t p) const;
  Scalar reduce(std::uint64_t p) const { return Scalar(to_fp(p)); }

  bool is_zero() const;
  bool is_one() const;
  Scalar inverse() const;

  /// Zero/one in the same field as `like`.
  static Scalar zero_like(const Scalar& like);
  static Scalar one_like(const Scalar& like);

  std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, Fp> rep_;
};

/// Image of a rational in F_p (throws if the denominator is divisible by p).
Fp rational_to_fp(const Rational& q, std::uint64_t p);

}  // namespace hsg
