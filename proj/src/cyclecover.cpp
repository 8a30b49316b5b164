#include "hsg/cyclecover.hpp"

#include <omp.h>

namespace hsg {
namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw ArgumentError("dims must list n_1, ..., n_{m+1} with m >= 1");
  if (dims.front() != dims.back()) throw ArgumentError("dimension chain needs n_1 = n_{m+1}");
  for (std::size_t d : dims) {
    if (d == 0) throw ArgumentError("every n_i must be positive");
  }
}

std::size_t sum_of(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

/// Row offsets of the diagonal blocks.
std::vector<std::size_t> block_starts(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) starts.push_back(starts.back() + dims[i]);
  return starts;
}

ProjMatrix assemble(const std::vector<std::size_t>& dims, std::size_t size, int sign,
                    const std::vector<Scalar>& scaling) {
  ProjMatrix m(size, dims);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = ProjEntry::make_constant(EpsSeries{Scalar(1)});
  const auto starts = block_starts(dims);
  for (std::size_t layer = 0; layer + 1 < dims.size(); ++layer) {
    const std::size_t rows = dims[layer];
    const std::size_t cols = dims[layer + 1];
    for (std::size_t a = 0; a < rows; ++a) {
      const Scalar coeff = layer == 0 ? Scalar(sign) * scaling[a] : Scalar(1);
      for (std::size_t b = 0; b < cols; ++b) {
        const auto var = static_cast<std::uint32_t>(m.var_offset(layer) + a * cols + b);
        m(starts[layer] + a, starts[layer + 1] + b) = ProjEntry::make_var(var, coeff);
      }
    }
  }
  const std::size_t last = starts.back();
  for (std::size_t i = 0; i < dims.front(); ++i) {
    m(last + i, i) = ProjEntry::make_constant(EpsSeries{Scalar(0), Scalar(1)});
  }
  m.set_sign(sign);
  m.set_scaling(scaling);
  return m;
}

/// X^(1) ... X^(m) at the assignment, over the coefficient ring of `like`.
template <class C>
C trace_of_product(const std::vector<std::size_t>& dims, std::span<const C> x, const C& like) {
  std::vector<Matrix<C>> mats;
  std::size_t offset = 0;
  for (std::size_t layer = 0; layer + 1 < dims.size(); ++layer) {
    Matrix<C> m(dims[layer], dims[layer + 1], like);
    for (auto& e : m.data) e = x[offset++];
    mats.push_back(std::move(m));
  }
  Matrix<C> acc = mats[0];
  for (std::size_t i = 1; i < mats.size(); ++i) acc = matmul(acc, mats[i]);
  C tr = zero_like(like);
  for (std::size_t i = 0; i < acc.rows; ++i) tr += acc(i, i);
  return tr;
}

struct TrialOutcome {
  bool ok = true;
  bool constant_one = true;
  std::string got;
  std::string expected;
  std::vector<std::uint64_t> assignment;
};

/// One trial over series type S with coefficients C (Fp or Scalar).
template <class S>
TrialOutcome run_trial(const ProjMatrix& m, const ProjEvaluator<S>& ev, const ProjectionCheck& check,
                       std::size_t trial) {
  using C = typename S::Coeff;
  Rng rng = stream_rng(check.seed, trial);
  std::vector<C> x;
  x.reserve(m.n_vars());
  std::vector<std::uint64_t> raw;
  raw.reserve(m.n_vars());
  for (std::size_t v = 0; v < m.n_vars(); ++v) {
    const Fp f = uniform_fp(rng, check.prime);
    raw.push_back(f.value());
    x.push_back(C(f));
  }
  const C one(Fp(1, check.prime));
  const S like = S::constant(one, 2);
  const Matrix<S> numeric = ev.evaluate(x);
  const std::vector<S> minors = leading_principal_minors(numeric);
  S product = one_like(like);
  for (std::size_t k : check.sigma) product *= minors[k - 1];

  S expected = S::epsilon(one, 2);
  expected[0] = one;
  expected[1] = trace_of_product<C>(m.dims(), x, one);

  TrialOutcome out;
  out.constant_one = product[0] == one;
  if (!(product == expected)) {
    out.ok = false;
    out.got = product.to_string();
    out.expected = expected.to_string();
    out.assignment = std::move(raw);
  }
  return out;
}

template <class S>
ProjectionReport verify_with(const ProjectionCheck& check, bool parallel) {
  if (check.trials == 0) throw ArgumentError("need at least one trial");
  if (!is_prime_u64(check.prime)) throw ArgumentError(std::to_string(check.prime) + " is not prime");
  const MinorSequence sigma(check.sigma);
  const ProjMatrix m = build_m(check.dims, sigma, check.apply_scaling);

  using C = typename S::Coeff;
  const ProjEvaluator<S> ev(m, S::constant(C(Fp(1, check.prime)), 2));
  std::vector<TrialOutcome> outcomes(check.trials);
  const auto trials = static_cast<std::int64_t>(check.trials);
  if (parallel) {
    const int threads = check.jobs > 0 ? check.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::int64_t t = 0; t < trials; ++t) {
      outcomes[static_cast<std::size_t>(t)] = run_trial<S>(m, ev, check, static_cast<std::size_t>(t));
    }
  } else {
    for (std::int64_t t = 0; t < trials; ++t) {
      outcomes[static_cast<std::size_t>(t)] = run_trial<S>(m, ev, check, static_cast<std::size_t>(t));
    }
  }

  ProjectionReport report;
  report.trials = check.trials;
  report.max_k = sigma.leading();
  report.matrix_size = m.size();
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    report.constant_term_one = report.constant_term_one && outcomes[t].constant_one;
    if (!outcomes[t].ok && !report.counterexample) {
      report.pass = false;
      report.counterexample = ProjectionCounterexample{t, outcomes[t].assignment, outcomes[t].got,
                                                       outcomes[t].expected};
    }
  }
  return report;
}

}  // namespace

MinorSequence::MinorSequence(std::vector<std::size_t> sigma) : sigma_(std::move(sigma)) {
  if (sigma_.empty()) throw ArgumentError("minor sequence is empty");
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    if (sigma_[i] == 0) throw ArgumentError("minor sizes must be positive");
    if (i > 0 && sigma_[i] > sigma_[i - 1]) throw ArgumentError("minor sequence must be non-increasing");
  }
}

std::string MinorSequence::to_string() const {
  std::string out;
  for (std::size_t s : sigma_) out += (out.empty() ? "" : ",") + std::to_string(s);
  return out;
}

ProjMatrix::ProjMatrix(std::size_t size, std::vector<std::size_t> dims)
    : size_(size), dims_(std::move(dims)), entries_(size * size) {
  check_dims(dims_);
  offsets_.push_back(0);
  for (std::size_t i = 0; i + 1 < dims_.size(); ++i) offsets_.push_back(offsets_.back() + dims_[i] * dims_[i + 1]);
  n_vars_ = offsets_.back();
  if (size_ < block_size()) throw ArgumentError("matrix smaller than the layered graph");
  scaling_.assign(dims_.front(), Scalar(1));
}

std::size_t ProjMatrix::block_size() const { return sum_of(dims_); }

bool ProjMatrix::entries_are_simple() const {
  return std::all_of(entries_.begin(), entries_.end(), [&](const ProjEntry& e) {
    if (e.kind == ProjEntry::Kind::kVar) return e.var < n_vars_ && !e.coeff.is_zero();
    return true;
  });
}

Matrix<Polynomial> ProjMatrix::symbolic() const {
  Matrix<Polynomial> out(size_, size_);
  const auto eps = static_cast<std::uint32_t>(n_vars_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const ProjEntry& e = entries_[k];
    out.data[k] = e.kind == ProjEntry::Kind::kConst ? Polynomial::from_series(e.constant, eps)
                                                    : Polynomial(e.coeff) * Polynomial::variable(e.var);
  }
  return out;
}

ProjMatrix build_m_prime(const std::vector<std::size_t>& dims) {
  check_dims(dims);
  return assemble(dims, sum_of(dims), 1, std::vector<Scalar>(dims.front(), Scalar(1)));
}

std::vector<std::size_t> tail_multiplicities(const std::vector<std::size_t>& dims, const MinorSequence& sigma) {
  check_dims(dims);
  const std::size_t n = sum_of(dims);
  if (sigma.leading() < n) {
    throw ArgumentError("sigma_1 = " + std::to_string(sigma.leading()) + " is smaller than N = " +
                        std::to_string(n));
  }
  const std::size_t n1 = dims.front();
  const std::size_t base = n - n1;
  std::vector<std::size_t> a(n1, 0);
  for (std::size_t s : sigma.values()) {
    if (s >= n) {
      ++a[n1 - 1];
    } else if (s > base) {
      ++a[s - base - 1];
    }
  }
  return a;
}

ProjMatrix build_m(const std::vector<std::size_t>& dims, const MinorSequence& sigma, bool apply_scaling) {
  const auto a = tail_multiplicities(dims, sigma);
  const std::size_t m = dims.size() - 1;
  const int sign = m % 2 == 0 ? 1 : -1;
  std::vector<Scalar> scaling(dims.front(), Scalar(1));
  if (apply_scaling) {
    std::size_t suffix = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
      suffix += a[i];
      if (suffix == 0) throw Error("internal: a_N = 0 although sigma_1 >= N");
      scaling[i] = Scalar::ratio(1, static_cast<long>(suffix));
    }
  }
  return assemble(dims, sigma.leading(), sign, scaling);
}

EpsSeries minor_det(const ProjMatrix& m, std::size_t k, std::span<const Scalar> assignment, std::size_t order) {
  if (k == 0 || k > m.size()) throw ArgumentError("minor size out of range");
  if (assignment.empty() && m.n_vars() > 0) throw ArgumentError("assignment missing");
  const Scalar one = assignment.empty() ? Scalar(1) : Scalar::one_like(assignment[0]);
  const EpsSeries like = EpsSeries::constant(one, order);
  const Matrix<EpsSeries> numeric = m.evaluate<EpsSeries>(assignment, like);
  Matrix<EpsSeries> lead(k, k, like);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) lead(i, j) = numeric(i, j);
  }
  return berkowitz_det(lead);
}

ProjectionReport verify_projection_identity(const ProjectionCheck& check) {
  return verify_with<FpSeries>(check, true);
}

ProjectionReport verify_projection_identity_serial(const ProjectionCheck& check) {
  return verify_with<EpsSeries>(check, false);
}

SymbolicProjectionReport verify_projection_identity_symbolic(const std::vector<std::size_t>& dims,
                                                             const MinorSequence& sigma, bool apply_scaling) {
  const ProjMatrix m = build_m(dims, sigma, apply_scaling);
  if (m.size() > 6) throw ArgumentError("symbolic verification is limited to sigma_1 <= 6");
  const auto eps = static_cast<std::uint32_t>(m.n_vars());
  const Matrix<Polynomial> sym = m.symbolic();

  Polynomial product(Scalar(1));
  for (std::size_t k : sigma.values()) {
    Matrix<Polynomial> lead(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = sym(i, j);
    }
    product = (product * det_cycle_cover_reference(lead)).truncated_in(eps, 2);
  }

  std::vector<Polynomial> x;
  for (std::uint32_t v = 0; v < m.n_vars(); ++v) x.push_back(Polynomial::variable(v));
  const Polynomial tr = trace_of_product<Polynomial>(dims, x, Polynomial());

  SymbolicProjectionReport report;
  report.target = Polynomial(Scalar(1)) + Polynomial::variable(eps) * tr;
  report.product = product;
  report.pass = product == report.target;
  return report;
}

}  // namespace hsg
