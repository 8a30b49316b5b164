#include <gtest/gtest.h>

#include "hsg/cyclecover.hpp"
#include "test_support.hpp"

namespace hsg {
namespace {

using testing::kP;
using Dims = std::vector<std::size_t>;

EpsSeries S(std::initializer_list<long> c) {
  std::vector<Scalar> v(c.begin(), c.end());
  return EpsSeries(v.begin(), v.end());
}

/// det over Q[eps]/(eps^2) of the full matrix, via cycle covers.
EpsSeries full_det(const ProjMatrix& m, const std::vector<Scalar>& x) {
  const EpsSeries like = EpsSeries::constant(Scalar(1), 2);
  return det_cycle_cover_reference(m.evaluate<EpsSeries>(x, like));
}

TEST(BuildMPrime, OneByOneChain) {
  const ProjMatrix m = build_m_prime({1, 1});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m(0, 1).kind, ProjEntry::Kind::kVar);
  EXPECT_EQ(m(1, 0).constant, S({0, 1}));
  EXPECT_EQ(full_det(m, {Scalar(4)}), S({1, -4}));
}

TEST(BuildMPrime, ThreeCycleHasPositiveSign) {
  const ProjMatrix m = build_m_prime({1, 1, 1});
  EXPECT_EQ(full_det(m, {Scalar(3), Scalar(5)}), S({1, 15}));
  // Symbolically: 1 + eps*x*y.
  const auto sym = m.symbolic();
  const Polynomial det = det_cycle_cover_reference(sym);
  const Polynomial eps = Polynomial::variable(2);
  EXPECT_EQ(det, Polynomial(Scalar(1)) + eps * Polynomial::variable(0) * Polynomial::variable(1));
}

TEST(BuildMPrime, TwoByTwoTripleProductHasNegativeLinearTerm) {
  const ProjMatrix m = build_m_prime({2, 2, 2, 2});
  ASSERT_EQ(m.size(), 8u);
  Rng rng = stream_rng(8, 0);
  const TraceAbp t = build_trace_mm(2, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Fp> x = testing::random_raw_fp_point(rng, m.n_vars());
    const FpSeries like = FpSeries::constant(Fp(1, kP), 2);
    const FpSeries det = berkowitz_det(m.evaluate<FpSeries>(x, like));
    const Fp tr = t.evaluate(x);
    ASSERT_EQ(det[0], Fp(1, kP));
    ASSERT_EQ(det[1], -tr);
  }
}

TEST(BuildMPrime, RejectsBrokenChain) {
  EXPECT_THROW(build_m_prime({1, 2}), ArgumentError);
  EXPECT_THROW(build_m_prime({2}), ArgumentError);
  EXPECT_THROW(build_m_prime({0, 0}), ArgumentError);
}

TEST(BuildM, ScalingForThreeCycle) {
  const ProjMatrix single = build_m({1, 1, 1}, MinorSequence({3}));
  EXPECT_EQ(single.scaling(), std::vector<Scalar>{Scalar(1)});
  const ProjMatrix doubled = build_m({1, 1, 1}, MinorSequence({3, 3}));
  EXPECT_EQ(doubled.scaling(), std::vector<Scalar>{Scalar::ratio(1, 2)});
  const std::vector<Scalar> x{Scalar(3), Scalar(5)};
  const EpsSeries d = full_det(doubled, x);
  EXPECT_EQ(d * d, S({1, 15}));
}

TEST(BuildM, TailMultiplicities) {
  EXPECT_EQ(tail_multiplicities({2, 2, 2, 2}, MinorSequence({8, 7})), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(tail_multiplicities({2, 2, 2, 2}, MinorSequence({10, 8, 3})), (std::vector<std::size_t>{0, 2}));
  const ProjMatrix m = build_m({2, 2, 2, 2}, MinorSequence({8, 7}));
  EXPECT_EQ(m.scaling(), (std::vector<Scalar>{Scalar::ratio(1, 2), Scalar(1)}));
  EXPECT_EQ(m.sign(), -1);
  EXPECT_THROW(build_m({2, 2, 2, 2}, MinorSequence({7})), ArgumentError);
  EXPECT_THROW(MinorSequence({3, 4}), ArgumentError);
  EXPECT_THROW(MinorSequence({}), ArgumentError);
}

TEST(BuildM, PaddingIsIdentity) {
  const ProjMatrix m = build_m({1, 1, 1}, MinorSequence({5}));
  ASSERT_EQ(m.size(), 5u);
  for (std::size_t i = 3; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      ASSERT_EQ(m(i, j).kind, ProjEntry::Kind::kConst);
      ASSERT_EQ(m(i, j).constant, S({i == j ? 1 : 0}));
      ASSERT_EQ(m(j, i).constant, S({i == j ? 1 : 0}));
    }
  }
}

TEST(BuildM, EntriesAreConstantsOrScaledVariables) {
  for (const Dims& dims : {Dims{1, 1}, Dims{2, 3, 2}, Dims{3, 1, 2, 3}, Dims{2, 2, 2, 2, 2}}) {
    std::size_t n = 0;
    for (auto d : dims) n += d;
    for (const auto& sigma : {std::vector<std::size_t>{n}, {n + 2, n, n - 1}}) {
      const ProjMatrix m = build_m(dims, MinorSequence(sigma));
      EXPECT_TRUE(m.entries_are_simple());
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          const auto& e = m(i, j);
          if (e.kind == ProjEntry::Kind::kConst) {
            // Constants are 0, 1 or eps.
            EXPECT_TRUE(e.constant == S({0}) || e.constant == S({1}) || e.constant == S({0, 1}));
          }
        }
      }
    }
  }
}

TEST(MinorDet, Examples) {
  const ProjMatrix m = build_m({2, 2, 2, 2}, MinorSequence({8}));
  Rng rng = stream_rng(4, 0);
  auto x = testing::random_fp_point(rng, m.n_vars());
  EXPECT_EQ(minor_det(m, 1, x, 2), EpsSeries::constant(Scalar(Fp(1, kP)), 2));
  // k <= n_1 + ... + n_{m-1} gives an upper unitriangular block.
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_EQ(minor_det(m, k, x, 2), EpsSeries::constant(Scalar(Fp(1, kP)), 2));
  }
  const ProjMatrix small = build_m_prime({1, 1});
  EXPECT_EQ(minor_det(small, 2, std::vector<Scalar>{Scalar(4)}, 2), S({1, -4}));
  EXPECT_THROW(minor_det(small, 3, std::vector<Scalar>{Scalar(4)}, 2), ArgumentError);
}

TEST(CycleCoverDet, Examples) {
  Matrix<Scalar> id(3, 3, Scalar(0));
  for (int i = 0; i < 3; ++i) id(i, i) = Scalar(1);
  EXPECT_EQ(det_cycle_cover_reference(id), Scalar(1));
  Matrix<Scalar> swap(2, 2, Scalar(0));
  swap(0, 1) = swap(1, 0) = Scalar(1);
  EXPECT_EQ(det_cycle_cover_reference(swap), Scalar(-1));
  EXPECT_THROW(det_cycle_cover_reference(Matrix<Scalar>(7, 7, Scalar(0))), ArgumentError);
}

TEST(CycleCoverDet, AgreesWithBerkowitz) {
  Rng rng = stream_rng(12, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 5;
    Matrix<Scalar> q(n, n);
    for (auto& e : q.data) e = testing::random_small_rational(rng);
    ASSERT_EQ(det_cycle_cover_reference(q), berkowitz_det(q));
    Matrix<EpsSeries> s(n, n);
    for (auto& e : s.data) e = testing::random_series(rng, 3, true);
    ASSERT_EQ(det_cycle_cover_reference(s), berkowitz_det(s));
    // Every leading minor, not just the full determinant.
    const auto minors = leading_principal_minors(s);
    for (std::size_t k = 1; k <= n; ++k) {
      Matrix<EpsSeries> lead(k, k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) lead(i, j) = s(i, j);
      }
      ASSERT_EQ(minors[k - 1], det_cycle_cover_reference(lead));
    }
  }
}

TEST(VerifyProjection, ThreeCycle) {
  ProjectionCheck check{.dims = {1, 1, 1}, .sigma = {3}, .trials = 100, .seed = 1};
  const auto report = verify_projection_identity(check);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.max_k, 3u);
  EXPECT_TRUE(report.constant_term_one);
  EXPECT_TRUE(verify_projection_identity_symbolic({1, 1, 1}, MinorSequence({3})).pass);
}

TEST(VerifyProjection, TwoByTwoTripleProduct) {
  for (const auto& sigma : {std::vector<std::size_t>{8}, {8, 7}, {8, 8, 7}, {10}}) {
    ProjectionCheck check{.dims = {2, 2, 2, 2}, .sigma = sigma, .trials = 100, .seed = 5};
    const auto report = verify_projection_identity(check);
    EXPECT_TRUE(report.pass) << MinorSequence(sigma).to_string();
  }
}

TEST(VerifyProjection, OmittingScalingDoublesTheTrace) {
  ProjectionCheck check{.dims = {2, 2, 2, 2}, .sigma = {8, 8}, .trials = 10, .seed = 3, .apply_scaling = false};
  const auto report = verify_projection_identity(check);
  ASSERT_FALSE(report.pass);
  ASSERT_TRUE(report.counterexample.has_value());
  EXPECT_EQ(report.counterexample->trial, 0u);
  const EpsSeries got = parse_series(report.counterexample->got);
  const EpsSeries expected = parse_series(report.counterexample->expected);
  EXPECT_EQ(got[0], expected[0]);
  EXPECT_EQ(got[1].reduce(kP), (Scalar(2) * expected[1]).reduce(kP));
  EXPECT_EQ(report.counterexample->assignment.size(), 12u);
}

TEST(VerifyProjection, SerialReferenceMatchesParallelKernel) {
  for (const auto& [dims, sigma] : std::vector<std::pair<Dims, std::vector<std::size_t>>>{
           {{2, 3, 2}, {7, 7, 6}}, {{1, 2, 1}, {6}}, {{3, 1, 3}, {7, 7}}}) {
    for (bool scaled : {true, false}) {
      ProjectionCheck check{.dims = dims, .sigma = sigma, .trials = 25, .seed = 99, .apply_scaling = scaled};
      const auto fast = verify_projection_identity(check);
      const auto ref = verify_projection_identity_serial(check);
      EXPECT_EQ(fast.pass, ref.pass);
      EXPECT_EQ(fast.pass, scaled || sigma.size() == 1 || sigma[1] < sigma[0] - 2);
      ASSERT_EQ(fast.counterexample.has_value(), ref.counterexample.has_value());
      if (fast.counterexample) {
        EXPECT_EQ(fast.counterexample->trial, ref.counterexample->trial);
        EXPECT_EQ(fast.counterexample->assignment, ref.counterexample->assignment);
        EXPECT_EQ(fast.counterexample->got, ref.counterexample->got);
      }
    }
  }
}

TEST(VerifyProjection, SymbolicSmallCases) {
  for (const Dims& dims : {Dims{1, 1}, Dims{2, 2}, Dims{1, 1, 1}, Dims{1, 2, 1}, Dims{1, 1, 1, 1}}) {
    std::size_t n = 0;
    for (auto d : dims) n += d;
    for (const auto& sigma : {std::vector<std::size_t>{n}, {n, n}, {n, n, n - 1}, {n + 2}}) {
      const auto r = verify_projection_identity_symbolic(dims, MinorSequence(sigma));
      EXPECT_TRUE(r.pass) << r.product.to_string() << " vs " << r.target.to_string();
    }
  }
  const auto bad = verify_projection_identity_symbolic({2, 2}, MinorSequence({4, 4}), false);
  EXPECT_FALSE(bad.pass);
}

TEST(VerifyProjection, RejectsBadInputs) {
  EXPECT_THROW(verify_projection_identity({.dims = {1, 1}, .sigma = {2}, .trials = 0}), ArgumentError);
  EXPECT_THROW(verify_projection_identity({.dims = {1, 1}, .sigma = {2}, .prime = 100}), ArgumentError);
  EXPECT_THROW(verify_projection_identity({.dims = {1, 1}, .sigma = {1}}), ArgumentError);
}

}  // namespace
}  // namespace hsg
