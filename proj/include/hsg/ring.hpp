#pragma once

// Glue that lets the generic kernels (circuit evaluation, determinants,
// iterated matrix products) run over every supported coefficient ring.

#include <cstddef>
#include <cstdint>

#include "hsg/eps_series.hpp"
#include "hsg/fp.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// RingTraits<T> supplies the identity elements of the ring a sample value
/// lives in, and embeds exact eps-polynomial constants into that ring.
template <class T>
struct RingTraits;

template <>
struct RingTraits<Scalar> {
  static Scalar zero(const Scalar& like) { return Scalar::zero_like(like); }
  static Scalar one(const Scalar& like) { return Scalar::one_like(like); }
  static bool same_ring(const Scalar& a, const Scalar& b) { return a.modulus() == b.modulus(); }
  static Scalar embed(const EpsSeries& c, const Scalar& like) {
    Scalar s = series_to_scalar(c);
    return like.is_rational() ? s : s.reduce(like.modulus());
  }
};

template <>
struct RingTraits<Fp> {
  static Fp zero(const Fp& like) { return Fp(0, like.modulus()); }
  static Fp one(const Fp& like) { return Fp(1, like.modulus()); }
  static bool same_ring(const Fp& a, const Fp& b) { return a.modulus() == b.modulus(); }
  static Fp embed(const EpsSeries& c, const Fp& like) {
    return series_to_scalar(c).to_fp(like.modulus());
  }
};

template <>
struct RingTraits<EpsSeries> {
  static EpsSeries zero(const EpsSeries& like) {
    return EpsSeries::constant(Scalar::zero_like(like[0]), like.order());
  }
  static EpsSeries one(const EpsSeries& like) {
    return EpsSeries::constant(Scalar::one_like(like[0]), like.order());
  }
  static bool same_ring(const EpsSeries& a, const EpsSeries& b) {
    return a.order() == b.order() && a[0].modulus() == b[0].modulus();
  }
  static EpsSeries embed(const EpsSeries& c, const EpsSeries& like) {
    EpsSeries s = c.resized(like.order());
    if (!like[0].is_rational()) s = reduce_series(s, like[0].modulus());
    return s;
  }
};

template <>
struct RingTraits<FpSeries> {
  static FpSeries zero(const FpSeries& like) {
    return FpSeries::constant(Fp(0, like[0].modulus()), like.order());
  }
  static FpSeries one(const FpSeries& like) {
    return FpSeries::constant(Fp(1, like[0].modulus()), like.order());
  }
  static bool same_ring(const FpSeries& a, const FpSeries& b) {
    return a.order() == b.order() && a[0].modulus() == b[0].modulus();
  }
  static FpSeries embed(const EpsSeries& c, const FpSeries& like) {
    return series_to_fp(c, like[0].modulus(), like.order());
  }
};

template <class T>
T zero_like(const T& like) {
  return RingTraits<T>::zero(like);
}
template <class T>
T one_like(const T& like) {
  return RingTraits<T>::one(like);
}
template <class T>
bool same_ring(const T& a, const T& b) {
  return RingTraits<T>::same_ring(a, b);
}
template <class T>
T embed_like(const EpsSeries& c, const T& like) {
  return RingTraits<T>::embed(c, like);
}

/// acc += a * b.
template <class T>
void add_product(T& acc, const T& a, const T& b) {
  acc += a * b;
}
template <class C>
void add_product(BasicEpsSeries<C>& acc, const BasicEpsSeries<C>& a, const BasicEpsSeries<C>& b) {
  acc.add_product(a, b);
}

}  // namespace hsg
