#include "hsg/scalar.hpp"

#include <cctype>
#include <type_traits>

#include "hsg/error.hpp"

namespace hsg {
namespace {

std::uint64_t mpz_mod_u64(const mpz_class& z, std::uint64_t p) {
  mpz_class r;
  mpz_class pm;
  mpz_import(pm.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pm.get_mpz_t());
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return count ? out : 0;
}

bool valid_integer_token(std::string_view t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  }
  return true;
}

}  // namespace

Fp rational_to_fp(const Rational& q, std::uint64_t p) {
  const std::uint64_t den = mpz_mod_u64(q.get_den(), p);
  if (den == 0) {
    throw RingError("denominator of " + q.get_str() + " vanishes mod " + std::to_string(p));
  }
  return Fp(mpz_mod_u64(q.get_num(), p), p) * Fp(den, p).inverse();
}

Scalar Scalar::ratio(long num, long den) {
  if (den == 0) throw ArgumentError("zero denominator");
  return Scalar(Rational(num, den));
}

Scalar Scalar::parse(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_token(num) || !valid_integer_token(den) || den[0] == '-' || den[0] == '+') {
    throw ArgumentError("malformed scalar literal '" + std::string(text) + "'");
  }
  mpz_class n{std::string(num[0] == '+' ? num.substr(1) : num)};
  mpz_class d{std::string(den)};
  if (d == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
  return Scalar(Rational(n, d));
}

Fp Scalar::to_fp(std::uint64_t p) const {
  if (is_rational()) return rational_to_fp(rational(), p);
  Fp f = residue();
  if (f.modulus() != p) {
    throw RingError("residue mod " + std::to_string(f.modulus()) + " cannot move to F_" +
                    std::to_string(p));
  }
  return f;
}

bool Scalar::is_zero() const {
  return is_rational() ? rational() == 0 : residue().is_zero();
}

bool Scalar::is_one() const {
  return is_rational() ? rational() == 1 : residue().value() == 1;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ArgumentError("inverse of zero");
  if (is_rational()) return Scalar(Rational(1) / rational());
  return Scalar(residue().inverse());
}

Scalar Scalar::zero_like(const Scalar& like) {
  return like.is_rational() ? Scalar() : Scalar(Fp(0, like.modulus()));
}

Scalar Scalar::one_like(const Scalar& like) {
  return like.is_rational() ? Scalar(1) : Scalar(Fp(1, like.modulus()));
}

std::string Scalar::to_string() const {
  return is_rational() ? rational().get_str() : residue().to_string();
}

namespace {

template <class Op>
Scalar combine(const Scalar& a, const Scalar& b, Op op) {
  if (a.is_rational() && b.is_rational()) return Scalar(op(a.rational(), b.rational()));
  if (!a.is_rational() && !b.is_rational()) return Scalar(op(a.residue(), b.residue()));
  if (a.is_rational()) return Scalar(op(a.to_fp(b.modulus()), b.residue()));
  return Scalar(op(a.residue(), b.to_fp(a.modulus())));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) {
    using V = std::decay_t<decltype(x)>;
    return V(x + y);
  });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) {
    using V = std::decay_t<decltype(x)>;
    return V(x - y);
  });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) {
    using V = std::decay_t<decltype(x)>;
    return V(x * y);
  });
}

Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(Rational(-rational()));
  return Scalar(-residue());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return a.rational() == b.rational();
  if (!a.is_rational() && !b.is_rational()) return a.residue() == b.residue();
  try {
    return (a - b).is_zero();
  } catch (const RingError&) {
    return false;
  }
}

}  // namespace hsg
