#include <gmpxx.h>
#include <gtest/gtest.h>

#include "hsg/eps_series.hpp"
#include "hsg/polynomial.hpp"
#include "hsg/ring.hpp"
#include "test_support.hpp"

namespace hsg {
namespace {

using testing::kP;

EpsSeries S(std::initializer_list<long> c) {
  std::vector<Scalar> v(c.begin(), c.end());
  return EpsSeries(v.begin(), v.end());
}

TEST(EpsArith, ProductTruncatesAtOrderTwo) {
  EXPECT_EQ(S({1, 1}) * S({1, -1}), S({1, 0}));
}

TEST(EpsArith, ProductExactAtOrderThree) {
  EXPECT_EQ(S({1, 1, 0}) * S({1, -1, 0}), S({1, 0, -1}));
}

TEST(EpsArith, Sum) { EXPECT_EQ(S({2, 3}) + S({-2, 1}), S({0, 4})); }

TEST(EpsArith, MixedOrderTruncatesToMinimum) {
  const EpsSeries r = S({1, 2, 3}) * S({1, 1});
  EXPECT_EQ(r.order(), 2u);
  EXPECT_EQ(r, S({1, 3}));
}

TEST(EpsArith, ModulusMismatchRejected) {
  EpsSeries a{Scalar(Fp(1, 7)), Scalar(Fp(2, 7))};
  EpsSeries b{Scalar(Fp(1, 11)), Scalar(Fp(2, 11))};
  EXPECT_THROW(a * b, RingError);
  EXPECT_THROW(a + b, RingError);
}

TEST(EpsOrder, Examples) {
  EXPECT_EQ(S({0, 0, 5}).valuation(), 2u);
  EXPECT_EQ(S({0, 0, 0}).valuation(), std::nullopt);
  EXPECT_EQ(S({7, 0}).valuation(), 0u);
}

TEST(CoeffAt, Examples) {
  EXPECT_EQ(S({1, 2}).coeff(1), Scalar(2));
  EXPECT_EQ(S({1, 2}).coeff(0), Scalar(1));
  EXPECT_THROW(S({1, 2}).coeff(5), ArgumentError);
}

TEST(Scalar, RationalsStayCanonical) {
  const Scalar a = Scalar::ratio(6, -4);
  EXPECT_EQ(a.to_string(), "-3/2");
  EXPECT_GT(a.rational().get_den(), 0);
  EXPECT_EQ(Scalar::parse("3/4") * Scalar::parse("4/3"), Scalar(1));
}

TEST(Scalar, LiteralParsing) {
  EXPECT_EQ(Scalar::parse("-17"), Scalar(-17));
  EXPECT_EQ(Scalar::parse("3/4"), Scalar::ratio(3, 4));
  EXPECT_THROW(Scalar::parse("3/0"), ArgumentError);
  EXPECT_THROW(Scalar::parse("x"), ArgumentError);
  EXPECT_THROW(Scalar::parse("1/-2"), ArgumentError);
  EXPECT_THROW(Scalar::parse(""), ArgumentError);
  EXPECT_EQ(parse_series("1;0;-2"), S({1, 0, -2}));
  EXPECT_THROW(parse_series("1;;2"), ArgumentError);
}

TEST(Scalar, MixedModuliRejected) {
  EXPECT_THROW(Scalar(Fp(1, 7)) + Scalar(Fp(1, 11)), RingError);
  EXPECT_FALSE(Scalar(Fp(1, 7)) == Scalar(Fp(1, 11)));
}

TEST(Scalar, RationalActsOnResidues) {
  const Scalar half = Scalar::ratio(1, 2);
  const Scalar two(Fp(2, 7));
  EXPECT_EQ(half * two, Scalar(Fp(1, 7)));
  EXPECT_THROW(Scalar::ratio(1, 7).to_fp(7), RingError);
}

TEST(Primes, MillerRabin) {
  EXPECT_TRUE(is_prime_u64(kDefaultPrime));
  EXPECT_TRUE(is_prime_u64(2));
  EXPECT_TRUE(is_prime_u64(998244353));
  EXPECT_FALSE(is_prime_u64(1));
  EXPECT_FALSE(is_prime_u64(561));  // Carmichael
  EXPECT_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
  EXPECT_FALSE(is_prime_u64(kDefaultPrime - 2));
  for (std::uint64_t n = 0; n < 2000; ++n) {
    bool trial = n >= 2;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) trial = false;
    }
    ASSERT_EQ(is_prime_u64(n), trial) << n;
  }
}

TEST(Fp, ProductsMatchBigIntegers) {
  auto rng = stream_rng(11, 0);
  const std::uint64_t moduli[] = {2, 3, 998244353, kDefaultPrime, (1ULL << 62) - 57, (1ULL << 62) + 1,
                                  (1ULL << 63) - 25};
  for (std::uint64_t p : moduli) {
    const mpz_class big_p = mpz_class(std::to_string(p));
    for (int t = 0; t < 20000; ++t) {
      std::uint64_t a = rng() % p;
      std::uint64_t b = rng() % p;
      if (t < 4) {
        a = t & 1 ? p - 1 : 0;
        b = t & 2 ? p - 1 : 1;
      }
      const mpz_class want = mpz_class(std::to_string(a)) * mpz_class(std::to_string(b)) % big_p;
      ASSERT_EQ((Fp(a, p) * Fp(b, p)).to_string(), want.get_str()) << a << " * " << b << " mod " << p;
    }
  }
}

class RingAxioms : public ::testing::TestWithParam<std::tuple<std::size_t, bool>> {};

TEST_P(RingAxioms, HoldExactlyOnRandomTriples) {
  const auto [k, modular] = GetParam();
  Rng rng = stream_rng(42, k * 2 + (modular ? 1 : 0));
  for (int trial = 0; trial < 1000; ++trial) {
    const EpsSeries a = testing::random_series(rng, k, modular);
    const EpsSeries b = testing::random_series(rng, k, modular);
    const EpsSeries c = testing::random_series(rng, k, modular);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a - a, zero_like(a));
    ASSERT_EQ(a * one_like(a), a);
  }
}

INSTANTIATE_TEST_SUITE_P(OrdersAndFields, RingAxioms,
                         ::testing::Combine(::testing::Values(1, 2, 3, 4), ::testing::Bool()));

TEST(EpsSeries, TruncationIsAHomomorphism) {
  Rng rng = stream_rng(7, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const bool modular = trial % 2;
    const EpsSeries a = testing::random_series(rng, 4, modular);
    const EpsSeries b = testing::random_series(rng, 4, modular);
    for (std::size_t k = 1; k < 4; ++k) {
      ASSERT_EQ((a * b).resized(k), a.resized(k) * b.resized(k));
      ASSERT_EQ((a + b).resized(k), a.resized(k) + b.resized(k));
      ASSERT_EQ((a - b).resized(k), a.resized(k) - b.resized(k));
    }
  }
}

TEST(Scalar, RationalArithmeticCommutesWithReduction) {
  Rng rng = stream_rng(11, 0);
  const std::uint64_t p = 1000003;
  for (int trial = 0; trial < 500; ++trial) {
    // Random expression tree of depth 3 over small rationals (denominators < p).
    std::vector<Scalar> leaves;
    for (int i = 0; i < 8; ++i) leaves.push_back(testing::random_small_rational(rng, 20));
    auto eval = [&](auto reduce) {
      std::vector<Scalar> v;
      for (const auto& l : leaves) v.push_back(reduce(l));
      Scalar e = (v[0] * v[1] - v[2]) * (v[3] + v[4] * v[5]) + v[6] * v[6] * v[7];
      return e;
    };
    const Scalar over_q = eval([](const Scalar& s) { return s; });
    const Scalar over_p = eval([&](const Scalar& s) { return s.reduce(p); });
    ASSERT_EQ(over_q.reduce(p), over_p);
  }
}

TEST(EpsSeries, ExactPolynomialHelpers) {
  EXPECT_EQ(poly_mul(S({0, 1}), S({0, 1})), S({0, 0, 1}));
  EXPECT_EQ(poly_add(S({1}), S({0, 0, 2})), S({1, 0, 2}));
  EXPECT_TRUE(is_unit_constant(S({1, 0})));
  EXPECT_FALSE(is_unit_constant(S({1, 1})));
}

TEST(Polynomial, BasicArithmetic) {
  const Polynomial x = Polynomial::variable(0);
  const Polynomial y = Polynomial::variable(1);
  const Polynomial f = (x + y) * (x - y);
  EXPECT_EQ(f, x * x - y * y);
  EXPECT_EQ(f.total_degree(), 2);
  EXPECT_EQ(Polynomial().total_degree(), -1);
  const std::vector<Scalar> pt{Scalar(3), Scalar(2)};
  EXPECT_EQ(f.evaluate(pt), Scalar(5));
  const Polynomial g = Polynomial::from_series(S({1, -4}), 2) * x;
  EXPECT_EQ(g.degree_in(2), 1u);
  EXPECT_EQ(g.coefficient_in(2, 1), Polynomial(Scalar(-4)) * x);
  EXPECT_EQ(g.truncated_in(2, 1), x);
}

}  // namespace
}  // namespace hsg
