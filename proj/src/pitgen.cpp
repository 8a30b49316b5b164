#include "hsg/pitgen.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "hsg/mmtensor.hpp"
#include "hsg/random.hpp"
#include "hsg/ring.hpp"

namespace hsg {
namespace {

template <class T>
bool any_nonzero(const std::vector<T>& values) {
  return std::any_of(values.begin(), values.end(), [](const T& v) { return !v.is_zero(); });
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/// per_coord^dim, or nullopt when it exceeds budget.
std::optional<std::uint64_t> grid_size(std::uint64_t per_coord, std::size_t dim, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    total = saturating_mul(total, per_coord);
    if (total > budget) return std::nullopt;
  }
  return total;
}

std::vector<Scalar> grid_point(std::uint64_t index, std::uint64_t per_coord, std::size_t dim) {
  std::vector<Scalar> pt(dim, Scalar(0));
  for (std::size_t i = dim; i-- > 0;) {
    pt[i] = Scalar(static_cast<long>(index % per_coord));
    index /= per_coord;
  }
  return pt;
}

void check_random_config(const Circuit& c, const RandomPitConfig& cfg, std::uint64_t degree) {
  if (cfg.trials == 0) throw ArgumentError("need at least one trial");
  if (!is_prime_u64(cfg.prime)) throw ArgumentError(std::to_string(cfg.prime) + " is not prime");
  if (cfg.prime <= degree) {
    throw ArgumentError("prime " + std::to_string(cfg.prime) + " does not exceed the degree bound " +
                        std::to_string(degree) + "; the test would be vacuous");
  }
  (void)c;
}

std::vector<Fp> trial_point(const RandomPitConfig& cfg, std::size_t n, std::uint64_t trial) {
  Rng rng = stream_rng(cfg.seed, trial);
  std::vector<Fp> pt;
  pt.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pt.push_back(uniform_fp(rng, cfg.prime));
  return pt;
}

RandomPitReport random_report(const RandomPitConfig& cfg, std::uint64_t degree,
                              std::optional<std::uint64_t> witness_trial, std::size_t n) {
  RandomPitReport r;
  r.trials = cfg.trials;
  r.prime = cfg.prime;
  r.seed = cfg.seed;
  r.degree_bound = degree;
  r.error_bound = std::pow(static_cast<double>(degree) / static_cast<double>(cfg.prime), static_cast<double>(cfg.trials));
  if (witness_trial) {
    r.verdict = PitVerdict::kNonzero;
    r.witness_trial = witness_trial;
    for (const Fp& v : trial_point(cfg, n, *witness_trial)) r.witness.emplace_back(v);
  } else {
    r.verdict = PitVerdict::kLikelyZero;
  }
  return r;
}

}  // namespace

std::uint64_t ceil_sqrt(std::uint64_t n) {
  auto q = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (q > 0 && saturating_mul(q, q) >= n) --q;
  while (saturating_mul(q, q) < n) ++q;
  return q;
}

std::size_t generator_seed_length(std::size_t sqrt_n, std::size_t rank) {
  return 2 * sqrt_n * std::min(rank, sqrt_n);
}

std::vector<Circuit> matrix_generator(std::size_t sqrt_n, std::size_t rank) {
  if (rank < 1) throw ArgumentError("generator rank must be at least 1");
  rank = std::min(rank, sqrt_n);
  const std::size_t fresh = generator_seed_length(sqrt_n, rank);
  std::vector<Circuit> out;
  out.reserve(sqrt_n * sqrt_n);
  for (std::size_t i = 0; i < sqrt_n; ++i) {
    for (std::size_t j = 0; j < sqrt_n; ++j) {
      Circuit c(fresh);
      std::optional<GateId> acc;
      for (std::size_t t = 0; t < rank; ++t) {
        const GateId y = c.input(static_cast<std::uint32_t>(i * rank + t));
        const GateId z = c.input(static_cast<std::uint32_t>(sqrt_n * rank + t * sqrt_n + j));
        const GateId prod = c.mul(y, z);
        acc = acc ? c.add(*acc, prod) : prod;
      }
      c.add_output(*acc);
      out.push_back(std::move(c));
    }
  }
  return out;
}

GeneratorParams params_for(std::uint64_t n, std::uint64_t s) {
  if (n < 1) throw ArgumentError("n must be positive");
  if (s > (std::numeric_limits<std::uint64_t>::max() / 8)) throw ArgumentError("s is too large");
  GeneratorParams p;
  p.n = n;
  p.s = s;
  p.sqrt_n = ceil_sqrt(n);
  p.padded_n = p.sqrt_n * p.sqrt_n;
  p.padding = p.padded_n - n;
  p.k = brank_lb_inverse(6 * s + 1);
  p.r = 4 * p.k;
  p.rank_used = p.r - 1;
  p.seed_length = saturating_mul(2 * p.sqrt_n, p.rank_used);
  p.stated_bound = saturating_mul(8 * p.sqrt_n, p.k);
  p.nontrivial = p.seed_length < n;
  return p;
}

Circuit compose_with_generator(const Circuit& c, std::size_t rank) {
  c.check();
  const std::size_t n = c.n_inputs();
  const auto sqrt_n = static_cast<std::size_t>(ceil_sqrt(n));
  if (n == 0) return c;
  std::vector<Circuit> subs;
  if (rank == 0) {
    subs.assign(n, constant_circuit(0, EpsSeries{Scalar(0)}));
  } else {
    subs = matrix_generator(sqrt_n, rank);
    subs.resize(n);  // coordinates past n are the zero-substituted padding
  }
  return substitute(c, subs);
}

std::string to_string(PitVerdict v) {
  switch (v) {
    case PitVerdict::kZero:
      return "ZERO";
    case PitVerdict::kLikelyZero:
      return "LIKELY_ZERO";
    case PitVerdict::kNonzero:
      return "NONZERO";
  }
  return "NONZERO";
}

std::string to_string(PitMode m) { return m == PitMode::kGrid ? "grid" : "compose_then_random"; }

std::string to_string(IdealVerdict v) {
  return v == IdealVerdict::kInIdealLikely ? "IN_IDEAL_LIKELY" : "NOT_IN_IDEAL";
}

RandomPitReport pit_randomized(const Circuit& input, const RandomPitConfig& cfg) {
  const Circuit c = input.at_eps_zero();
  const std::uint64_t degree = c.max_degree_bound();
  check_random_config(c, cfg, degree);
  const Evaluator<Fp> eval(c, Fp(0, cfg.prime));
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  std::atomic<std::int64_t> first{trials};
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<Fp> scratch;
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t t = 0; t < trials; ++t) {
      if (t > first.load(std::memory_order_relaxed)) continue;
      const auto pt = trial_point(cfg, c.n_inputs(), static_cast<std::uint64_t>(t));
      if (any_nonzero(eval.evaluate(pt, scratch))) {
        std::int64_t cur = first.load();
        while (t < cur && !first.compare_exchange_weak(cur, t)) {
        }
      }
    }
  }
  std::optional<std::uint64_t> witness;
  if (first.load() < trials) witness = static_cast<std::uint64_t>(first.load());
  return random_report(cfg, degree, witness, c.n_inputs());
}

RandomPitReport pit_randomized_serial(const Circuit& input, const RandomPitConfig& cfg) {
  const Circuit c = input.at_eps_zero();
  const std::uint64_t degree = c.max_degree_bound();
  check_random_config(c, cfg, degree);
  std::optional<std::uint64_t> witness;
  for (std::uint64_t t = 0; t < cfg.trials && !witness; ++t) {
    std::vector<Scalar> pt;
    for (const Fp& v : trial_point(cfg, c.n_inputs(), t)) pt.emplace_back(v);
    if (any_nonzero(evaluate(c, pt))) witness = t;
  }
  return random_report(cfg, degree, witness, c.n_inputs());
}

GridReport grid_search(const Circuit& input, std::uint64_t per_coord, std::uint64_t budget, int jobs) {
  if (per_coord == 0) throw ArgumentError("grid needs at least one value per coordinate");
  const Circuit c = input.at_eps_zero();
  const auto total = grid_size(per_coord, c.n_inputs(), budget);
  if (!total) throw BudgetError("grid of " + std::to_string(per_coord) + "^" + std::to_string(c.n_inputs()) +
                                " points exceeds the budget of " + std::to_string(budget));
  const Evaluator<Scalar> eval(c, Scalar(0));
  constexpr std::int64_t kBlock = 256;
  const auto points = static_cast<std::int64_t>(*total);
  const std::int64_t blocks = (points + kBlock - 1) / kBlock;
  std::atomic<std::int64_t> first{points};
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<Scalar> scratch;
#pragma omp for schedule(dynamic)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::int64_t end = std::min(points, (b + 1) * kBlock);
      for (std::int64_t i = b * kBlock; i < end; ++i) {
        if (i > first.load(std::memory_order_relaxed)) break;
        const auto pt = grid_point(static_cast<std::uint64_t>(i), per_coord, c.n_inputs());
        if (any_nonzero(eval.evaluate(pt, scratch))) {
          std::int64_t cur = first.load();
          while (i < cur && !first.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    }
  }
  GridReport r;
  r.points = *total;
  if (first.load() < points) {
    r.zero = false;
    r.witness = grid_point(static_cast<std::uint64_t>(first.load()), per_coord, c.n_inputs());
  }
  return r;
}

GridReport grid_search_serial(const Circuit& input, std::uint64_t per_coord, std::uint64_t budget) {
  if (per_coord == 0) throw ArgumentError("grid needs at least one value per coordinate");
  const Circuit c = input.at_eps_zero();
  const auto total = grid_size(per_coord, c.n_inputs(), budget);
  if (!total) throw BudgetError("grid of " + std::to_string(per_coord) + "^" + std::to_string(c.n_inputs()) +
                                " points exceeds the budget of " + std::to_string(budget));
  GridReport r;
  r.points = *total;
  for (std::uint64_t i = 0; i < *total; ++i) {
    auto pt = grid_point(i, per_coord, c.n_inputs());
    if (any_nonzero(evaluate(c, pt))) {
      r.zero = false;
      r.witness = std::move(pt);
      break;
    }
  }
  return r;
}

DeterministicPitReport pit_deterministic(const Circuit& c, const DeterministicPitConfig& cfg) {
  c.check();
  if (c.mult_complexity() > cfg.s_budget) {
    throw ArgumentError("circuit has multiplicative complexity " + std::to_string(c.mult_complexity()) +
                        ", above the budget s = " + std::to_string(cfg.s_budget));
  }
  DeterministicPitReport report;
  report.mode = cfg.mode;
  report.params = params_for(std::max<std::uint64_t>(c.n_inputs(), 1), cfg.s_budget);
  const std::uint64_t sqrt_n = ceil_sqrt(c.n_inputs());
  report.rank_used = std::min(cfg.rank.value_or(report.params.rank_used), sqrt_n);
  const Circuit composed = compose_with_generator(c, report.rank_used);
  report.seed_length = composed.n_inputs();
  report.degree_bound = c.max_degree_bound();
  report.composed_degree_bound = composed.max_degree_bound();

  if (cfg.mode == PitMode::kGrid) {
    if (report.degree_bound > (std::numeric_limits<std::uint64_t>::max() - 1) / 2) {
      throw BudgetError("degree bound too large for grid enumeration");
    }
    report.grid_values = 2 * report.degree_bound + 1;
    const GridReport g = grid_search(composed, report.grid_values, cfg.budget, cfg.random.jobs);
    report.points = g.points;
    report.verdict = g.zero ? PitVerdict::kZero : PitVerdict::kNonzero;
    report.witness = g.witness;
  } else {
    RandomPitReport r = pit_randomized(composed, cfg.random);
    report.points = r.trials;
    report.verdict = r.verdict;
    report.witness = r.witness;
    report.random = std::move(r);
  }
  return report;
}

IdealReport ideal_membership_probabilistic(const Circuit& c, std::uint64_t r, const RandomPitConfig& cfg) {
  if (r < 1) throw ArgumentError("minor size r must be at least 1");
  IdealReport report;
  report.r = r;
  report.rank_used = std::min<std::uint64_t>(r - 1, ceil_sqrt(c.n_inputs()));
  report.random = pit_randomized(compose_with_generator(c, report.rank_used), cfg);
  report.verdict =
      report.random.verdict == PitVerdict::kNonzero ? IdealVerdict::kNotInIdeal : IdealVerdict::kInIdealLikely;
  return report;
}

}  // namespace hsg
