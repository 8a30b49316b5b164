#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "hsg/error.hpp"
#include "hsg/fp.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// Truncated power series c_0 + c_1 eps + ... + c_{K-1} eps^{K-1}, i.e. an
/// element of R[eps]/(eps^K). This is the carrier of border computation.
///
/// Binary operations on series of different orders truncate to the smaller
/// order, so a result never claims coefficients its inputs did not track.
/// Multiplication is division-free; eps is a zero divisor here.
template <class C>
class BasicEpsSeries {
 public:
  using Coeff = C;

  BasicEpsSeries() : coeffs_{C{}} {}
  BasicEpsSeries(std::initializer_list<C> coeffs) : coeffs_(coeffs) {
    if (coeffs_.empty()) throw ArgumentError("series order must be at least 1");
  }
  template <class It>
  BasicEpsSeries(It first, It last) : coeffs_(first, last) {
    if (coeffs_.empty()) throw ArgumentError("series order must be at least 1");
  }

  /// `value` placed in degree 0, zeros (of the same ring) above it.
  static BasicEpsSeries constant(const C& value, std::size_t order) {
    if (order == 0) throw ArgumentError("series order must be at least 1");
    BasicEpsSeries s;
    s.coeffs_.assign(order, value - value);
    s.coeffs_[0] = value;
    return s;
  }

  /// The series eps (coefficient 1 in degree 1); `one` fixes the ring.
  static BasicEpsSeries epsilon(const C& one, std::size_t order) {
    BasicEpsSeries s = constant(one - one, order);
    if (order > 1) s.coeffs_[1] = one;
    return s;
  }

  std::size_t order() const { return coeffs_.size(); }

  const C& coeff(std::size_t j) const {
    if (j >= coeffs_.size()) {
      throw ArgumentError("coefficient of eps^" + std::to_string(j) +
                          " is not tracked at truncation order " +
                          std::to_string(coeffs_.size()));
    }
    return coeffs_[j];
  }
  C& coeff(std::size_t j) {
    return const_cast<C&>(std::as_const(*this).coeff(j));
  }
  const C& operator[](std::size_t j) const { return coeffs_[j]; }
  C& operator[](std::size_t j) { return coeffs_[j]; }

  /// Smallest j with c_j != 0; nullopt stands for infinity (zero series).
  std::optional<std::size_t> valuation() const {
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (!coeffs_[j].is_zero()) return j;
    }
    return std::nullopt;
  }

  bool is_zero() const { return !valuation().has_value(); }

  /// Degree-0 coefficient is the only nonzero one.
  bool is_constant() const {
    for (std::size_t j = 1; j < coeffs_.size(); ++j) {
      if (!coeffs_[j].is_zero()) return false;
    }
    return true;
  }

  /// Drops or zero-pads coefficients to the given order.
  BasicEpsSeries resized(std::size_t order) const {
    if (order == 0) throw ArgumentError("series order must be at least 1");
    BasicEpsSeries s = *this;
    C zero = coeffs_[0] - coeffs_[0];
    s.coeffs_.resize(order, zero);
    return s;
  }

  /// Number of coefficients after dropping trailing zeros (at least 1).
  std::size_t significant_order() const {
    std::size_t k = coeffs_.size();
    while (k > 1 && coeffs_[k - 1].is_zero()) --k;
    return k;
  }

  friend BasicEpsSeries operator+(const BasicEpsSeries& a, const BasicEpsSeries& b) {
    const std::size_t k = std::min(a.order(), b.order());
    BasicEpsSeries r;
    r.coeffs_.clear();
    r.coeffs_.reserve(k);
    for (std::size_t j = 0; j < k; ++j) r.coeffs_.push_back(a.coeffs_[j] + b.coeffs_[j]);
    return r;
  }
  friend BasicEpsSeries operator-(const BasicEpsSeries& a, const BasicEpsSeries& b) {
    const std::size_t k = std::min(a.order(), b.order());
    BasicEpsSeries r;
    r.coeffs_.clear();
    r.coeffs_.reserve(k);
    for (std::size_t j = 0; j < k; ++j) r.coeffs_.push_back(a.coeffs_[j] - b.coeffs_[j]);
    return r;
  }
  friend BasicEpsSeries operator*(const BasicEpsSeries& a, const BasicEpsSeries& b) {
    const std::size_t k = std::min(a.order(), b.order());
    BasicEpsSeries r;
    r.coeffs_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      C acc = a.coeffs_[0] * b.coeffs_[j];
      for (std::size_t i = 1; i <= j; ++i) acc += a.coeffs_[i] * b.coeffs_[j - i];
      r.coeffs_[j] = std::move(acc);
    }
    return r;
  }
  /// Scales every coefficient.
  friend BasicEpsSeries operator*(const C& s, const BasicEpsSeries& a) {
    BasicEpsSeries r = a;
    for (auto& c : r.coeffs_) c = s * c;
    return r;
  }
  BasicEpsSeries operator-() const {
    BasicEpsSeries r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  BasicEpsSeries& operator+=(const BasicEpsSeries& o) {
    if (o.order() < order()) coeffs_.resize(o.order());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    return *this;
  }
  BasicEpsSeries& operator-=(const BasicEpsSeries& o) {
    if (o.order() < order()) coeffs_.resize(o.order());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
    return *this;
  }
  BasicEpsSeries& operator*=(const BasicEpsSeries& o) { return *this = *this * o; }

  /// *this += a * b without a temporary series.
  void add_product(const BasicEpsSeries& a, const BasicEpsSeries& b) {
    if (&a == this || &b == this) {
      *this += a * b;
      return;
    }
    const std::size_t k = std::min({order(), a.order(), b.order()});
    coeffs_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i <= j; ++i) coeffs_[j] += a.coeffs_[i] * b.coeffs_[j - i];
    }
  }

  friend bool operator==(const BasicEpsSeries& a, const BasicEpsSeries& b) {
    if (a.order() != b.order()) return false;
    for (std::size_t j = 0; j < a.order(); ++j) {
      if (!(a.coeffs_[j] == b.coeffs_[j])) return false;
    }
    return true;
  }

  /// `;`-separated coefficient list, e.g. `1;0;-2`.
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (j) out += ';';
      out += coeffs_[j].to_string();
    }
    return out;
  }

 private:
  boost::container::small_vector<C, 3> coeffs_;
};

using EpsSeries = BasicEpsSeries<Scalar>;
using FpSeries = BasicEpsSeries<Fp>;

/// Parses the `;`-separated literal; a plain scalar literal gives order 1.
EpsSeries parse_series(std::string_view text);

/// The series as a scalar; throws RingError if it has a nonzero eps-part.
Scalar series_to_scalar(const EpsSeries& s);

/// Coefficientwise image in F_p, resized to `order`.
FpSeries series_to_fp(const EpsSeries& s, std::uint64_t p, std::size_t order);

/// Coefficientwise reduction mod p, keeping Scalar coefficients.
EpsSeries reduce_series(const EpsSeries& s, std::uint64_t p);

}  // namespace hsg

namespace hsg {

/// Exact product of two eps-polynomials (no truncation): the order of the
/// result is the sum of the orders minus one.
template <class C>
BasicEpsSeries<C> poly_mul(const BasicEpsSeries<C>& a, const BasicEpsSeries<C>& b) {
  const std::size_t k = a.order() + b.order() - 1;
  return a.resized(k) * b.resized(k);
}

/// Exact sum of two eps-polynomials, padding to the longer one.
template <class C>
BasicEpsSeries<C> poly_add(const BasicEpsSeries<C>& a, const BasicEpsSeries<C>& b) {
  const std::size_t k = std::max(a.order(), b.order());
  return a.resized(k) + b.resized(k);
}

/// True iff the series is the constant 1.
template <class C>
bool is_unit_constant(const BasicEpsSeries<C>& s) {
  return s.is_constant() && s[0].is_one();
}

}  // namespace hsg
