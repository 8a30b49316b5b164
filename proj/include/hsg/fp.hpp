#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "hsg/error.hpp"

namespace hsg {

/// 2^61 - 1, the default modulus for randomized evaluation.
inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Residue modulo a prime p < 2^63. Every element carries its modulus so
/// that mixing fields is detected rather than silently reduced.
class Fp {
 public:
  constexpr Fp() = default;
  Fp(std::uint64_t value, std::uint64_t modulus) : modulus_(modulus) {
    if (modulus < 2 || modulus >= (1ULL << 63)) {
      throw ArgumentError("modulus must lie in [2, 2^63)");
    }
    value_ = value % modulus;
  }

  /// Reduces a signed integer into [0, p).
  static Fp from_int(std::int64_t v, std::uint64_t modulus) {
    if (modulus < 2 || modulus >= (1ULL << 63)) {
      throw ArgumentError("modulus must lie in [2, 2^63)");
    }
    std::int64_t r = v % static_cast<std::int64_t>(modulus);
    if (r < 0) r += static_cast<std::int64_t>(modulus);
    return Fp(static_cast<std::uint64_t>(r), modulus);
  }

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  Fp inverse() const;
  Fp pow(std::uint64_t e) const;

  friend Fp operator+(Fp a, Fp b) {
    check(a, b);
    std::uint64_t s = a.value_ + b.value_;
    if (s >= a.modulus_) s -= a.modulus_;
    return raw(s, a.modulus_);
  }
  friend Fp operator-(Fp a, Fp b) {
    check(a, b);
    std::uint64_t s = a.value_ >= b.value_ ? a.value_ - b.value_
                                           : a.value_ + (a.modulus_ - b.value_);
    return raw(s, a.modulus_);
  }
  friend Fp operator*(Fp a, Fp b) {
    check(a, b);
    return raw(mul_mod(a.value_, b.value_, a.modulus_), a.modulus_);
  }
  Fp operator-() const { return raw(value_ == 0 ? 0 : modulus_ - value_, modulus_); }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }

  friend bool operator==(Fp a, Fp b) {
    return a.value_ == b.value_ && a.modulus_ == b.modulus_;
  }

  std::string to_string() const { return std::to_string(value_); }

 private:
  static Fp raw(std::uint64_t v, std::uint64_t p) {
    Fp f;
    f.value_ = v;
    f.modulus_ = p;
    return f;
  }
  static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;
    if (p == kMersenne61) {
      const auto wide = static_cast<unsigned __int128>(a) * b;
      std::uint64_t r = static_cast<std::uint64_t>(wide & kMersenne61) + static_cast<std::uint64_t>(wide >> 61);
      r = (r & kMersenne61) + (r >> 61);
      return r >= kMersenne61 ? r - kMersenne61 : r;
    }
    if (p < (1ULL << 62)) {
      // Quotient estimate in extended precision; the error is at most one p.
      const auto q = static_cast<std::uint64_t>(static_cast<long double>(a) * b / p);
      const auto r = static_cast<std::int64_t>(a * b - q * p);
      if (r < 0) return static_cast<std::uint64_t>(r + static_cast<std::int64_t>(p));
      return static_cast<std::uint64_t>(r) >= p ? static_cast<std::uint64_t>(r) - p : static_cast<std::uint64_t>(r);
    }
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  }
  static void check(Fp a, Fp b) {
    if (a.modulus_ != b.modulus_) {
      throw RingError("prime field modulus mismatch: " + std::to_string(a.modulus_) +
                      " vs " + std::to_string(b.modulus_));
    }
  }

  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 0;
};

}  // namespace hsg
