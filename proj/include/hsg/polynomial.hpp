#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsg/eps_series.hpp"
#include "hsg/ring.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// Sparse multivariate polynomial with Scalar coefficients. Used for
/// symbolic (full-expansion) checks on small instances; the fast paths never
/// touch it.
class Polynomial {
 public:
  /// Sorted (variable, exponent) pairs with positive exponents.
  using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

  Polynomial() = default;
  explicit Polynomial(const Scalar& c);
  static Polynomial variable(std::uint32_t var);
  /// c_0 + c_1 v + c_2 v^2 + ... for an eps-series, with eps played by `var`.
  static Polynomial from_series(const EpsSeries& s, std::uint32_t var);

  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  std::uint32_t degree_in(std::uint32_t var) const;
  /// Drops every term whose degree in `var` is at least `order`.
  Polynomial truncated_in(std::uint32_t var, std::uint32_t order) const;
  /// Coefficient of var^j, as a polynomial in the remaining variables.
  Polynomial coefficient_in(std::uint32_t var, std::uint32_t j) const;
  Scalar coefficient(const Monomial& m) const;
  Scalar evaluate(std::span<const Scalar> point) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Scalar& c);

  std::map<Monomial, Scalar> terms_;
};

template <>
struct RingTraits<Polynomial> {
  static Polynomial zero(const Polynomial&) { return Polynomial(); }
  static Polynomial one(const Polynomial&) { return Polynomial(Scalar(1)); }
  static bool same_ring(const Polynomial&, const Polynomial&) { return true; }
  static Polynomial embed(const EpsSeries& c, const Polynomial&) {
    return Polynomial(series_to_scalar(c));
  }
};

}  // namespace hsg
