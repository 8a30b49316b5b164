#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsg/circuit.hpp"
#include "hsg/fp.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// x_{i,j} (variable i*sqrt_n + j) -> sum_t y_{i,t} z_{t,j} with
/// y_{i,t} = i*rank + t and z_{t,j} = sqrt_n*rank + t*sqrt_n + j.
/// rank is clamped to sqrt_n; rank 0 is rejected.
std::vector<Circuit> matrix_generator(std::size_t sqrt_n, std::size_t rank);

/// Number of fresh variables of the generator: 2 * sqrt_n * min(rank, sqrt_n).
std::size_t generator_seed_length(std::size_t sqrt_n, std::size_t rank);

/// Least q with q*q >= n.
std::uint64_t ceil_sqrt(std::uint64_t n);

struct GeneratorParams {
  std::uint64_t n = 0;
  std::uint64_t padded_n = 0;
  std::uint64_t padding = 0;
  std::uint64_t sqrt_n = 0;
  std::uint64_t s = 0;
  std::uint64_t k = 0;
  std::uint64_t r = 0;
  std::uint64_t rank_used = 0;
  std::uint64_t seed_length = 0;
  std::uint64_t generator_degree = 2;
  /// 8 * sqrt_n * k, the headline estimate; seed_length never exceeds it.
  std::uint64_t stated_bound = 0;
  bool nontrivial = false;
};

GeneratorParams params_for(std::uint64_t n, std::uint64_t s);

/// Substitutes the rank-`rank` generator into c, padding the inputs to a
/// perfect square with dummies that read as 0. rank 0 substitutes zeros.
/// The result has generator_seed_length(ceil_sqrt(n), rank) inputs.
Circuit compose_with_generator(const Circuit& c, std::size_t rank);

struct RandomPitConfig {
  std::uint64_t trials = 20;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
  int jobs = 0;
};

enum class PitVerdict { kZero, kLikelyZero, kNonzero };

std::string to_string(PitVerdict v);

struct RandomPitReport {
  PitVerdict verdict = PitVerdict::kLikelyZero;
  std::uint64_t trials = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::uint64_t degree_bound = 0;
  /// (degree_bound / prime)^trials, the false-ZERO probability bound.
  double error_bound = 0.0;
  std::optional<std::uint64_t> witness_trial;
  std::vector<Scalar> witness;
};

/// Schwartz-Zippel over F_p. Circuits with eps constants are tested at eps = 0.
/// Trial t draws its point from stream_rng(seed, t); the witness is the
/// lowest nonzero trial, so the report does not depend on the thread count.
RandomPitReport pit_randomized(const Circuit& c, const RandomPitConfig& cfg);
RandomPitReport pit_randomized_serial(const Circuit& c, const RandomPitConfig& cfg);

struct GridReport {
  bool zero = true;
  std::uint64_t points = 0;
  std::vector<Scalar> witness;
};

/// Evaluates c over the rationals on {0, ..., per_coord-1}^n_inputs,
/// lexicographic order; the witness is the first nonzero point.
GridReport grid_search(const Circuit& c, std::uint64_t per_coord, std::uint64_t budget, int jobs = 0);
GridReport grid_search_serial(const Circuit& c, std::uint64_t per_coord, std::uint64_t budget);

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

enum class PitMode { kGrid, kComposeThenRandom };

std::string to_string(PitMode m);

struct DeterministicPitConfig {
  std::uint64_t s_budget = 0;
  PitMode mode = PitMode::kGrid;
  std::optional<std::uint64_t> rank;
  std::uint64_t budget = kDefaultBudget;
  RandomPitConfig random;
};

struct DeterministicPitReport {
  PitMode mode = PitMode::kGrid;
  PitVerdict verdict = PitVerdict::kZero;
  GeneratorParams params;
  std::uint64_t rank_used = 0;
  std::uint64_t seed_length = 0;
  std::uint64_t degree_bound = 0;
  std::uint64_t composed_degree_bound = 0;
  std::uint64_t grid_values = 0;
  std::uint64_t points = 0;
  /// Seed point (generator inputs) at which the composed circuit is nonzero.
  std::vector<Scalar> witness;
  std::optional<RandomPitReport> random;
};

/// Composes c with the generator for (n_inputs, s_budget) and tests the
/// result. Grid mode uses |W| = 2D+1 values per seed coordinate, D the
/// degree bound of c, and throws BudgetError when |W|^seed_length > budget.
DeterministicPitReport pit_deterministic(const Circuit& c, const DeterministicPitConfig& cfg);

enum class IdealVerdict { kInIdealLikely, kNotInIdeal };

std::string to_string(IdealVerdict v);

struct IdealReport {
  IdealVerdict verdict = IdealVerdict::kInIdealLikely;
  std::uint64_t r = 0;
  std::uint64_t rank_used = 0;
  RandomPitReport random;
};

/// Tests f(G_{sqrt n, sqrt n, r-1}(Y, Z)) = 0, i.e. membership of f in the
/// ideal of r x r minors. NOT_IN_IDEAL is certain.
IdealReport ideal_membership_probabilistic(const Circuit& c, std::uint64_t r, const RandomPitConfig& cfg);

}  // namespace hsg
