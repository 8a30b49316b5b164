#include "hsg/mmtensor.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>

namespace hsg {
namespace {

EpsSeries zero_series() { return EpsSeries{Scalar(0)}; }

std::vector<EpsSeries> zeros(std::size_t n) { return std::vector<EpsSeries>(n, zero_series()); }

void check_term_blocks(const Decomposition& d) {
  const auto& s = d.shape;
  for (std::size_t t = 0; t < d.terms.size(); ++t) {
    const auto& term = d.terms[t];
    if (term.u.size() != s.x_count() || term.v.size() != s.y_count() || term.w.size() != s.z_count()) {
      throw ArgumentError("term " + std::to_string(t) + " does not match the variable blocks of " +
                          s.to_string());
    }
  }
}

/// Coefficient (a,b,c) of the expansion, as an eps-polynomial of `order`.
EpsSeries expand_entry(const Decomposition& d, std::size_t a, std::size_t b, std::size_t c, std::size_t order) {
  EpsSeries acc = EpsSeries::constant(Scalar(0), order);
  for (const auto& term : d.terms) {
    if (term.u[a].is_zero() || term.v[b].is_zero() || term.w[c].is_zero()) continue;
    acc += term.u[a].resized(order) * term.v[b].resized(order) * term.w[c].resized(order);
  }
  return acc;
}

struct RowResult {
  bool tail = false;
  std::optional<DecompositionWitness> witness;
};

RowResult check_row(const Decomposition& d, const Tensor3& t, std::size_t a, std::size_t order) {
  RowResult r;
  const auto& s = t.shape();
  for (std::size_t b = 0; b < s.y_count(); ++b) {
    for (std::size_t c = 0; c < s.z_count(); ++c) {
      const EpsSeries e = expand_entry(d, a, b, c, order);
      if (!(e[0] == t.at(a, b, c))) {
        r.witness = DecompositionWitness{a, b, c, t.at(a, b, c), e.to_string()};
        return r;
      }
      if (!e.is_constant()) r.tail = true;
    }
  }
  return r;
}

DecompositionVerdict verify_rows(const Decomposition& d, const Tensor3& t, bool parallel, int jobs) {
  if (!(d.shape == t.shape())) {
    throw ArgumentError("decomposition is for " + d.shape.to_string() + ", tensor is " + t.shape().to_string());
  }
  check_term_blocks(d);
  // Products of three forms of eps-degree < K have degree <= 3(K-1).
  const std::size_t order = 3 * d.order() - 2;
  const auto rows = static_cast<std::int64_t>(t.shape().x_count());
  std::vector<RowResult> results(static_cast<std::size_t>(rows));
  if (parallel) {
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t a = 0; a < rows; ++a) {
      results[static_cast<std::size_t>(a)] = check_row(d, t, static_cast<std::size_t>(a), order);
    }
  } else {
    for (std::int64_t a = 0; a < rows; ++a) {
      results[static_cast<std::size_t>(a)] = check_row(d, t, static_cast<std::size_t>(a), order);
    }
  }
  DecompositionVerdict v;
  bool tail = false;
  for (const auto& r : results) {
    if (r.witness) {
      v.status = DecompositionStatus::kFail;
      v.witness = r.witness;
      return v;
    }
    tail = tail || r.tail;
  }
  v.status = tail ? DecompositionStatus::kBorder : DecompositionStatus::kExact;
  return v;
}

Expr linear_expr(ExprBuilder& b, const std::vector<EpsSeries>& coeffs, std::uint32_t offset) {
  Expr e = b.constant(zero_series());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    e = b.add(e, b.scale(b.variable(offset + static_cast<std::uint32_t>(i)), coeffs[i]));
  }
  return e;
}

/// Operand for a Mul gate: the gate and the edge scalar it needs.
std::pair<GateId, EpsSeries> mul_operand(ExprBuilder& b, const Expr& e) {
  if (!e.is_constant() && e.offset.is_zero()) return {*e.gate, e.scale};
  return {b.materialize(e), EpsSeries{Scalar(1)}};
}

}  // namespace

std::string TensorShape::to_string() const {
  return "<" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(p) + ">";
}

Tensor3::Tensor3(TensorShape shape)
    : shape_(shape), data_(shape.x_count() * shape.y_count() * shape.z_count(), Scalar(0)) {}

std::size_t Tensor3::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](const Scalar& s) { return !s.is_zero(); }));
}

Tensor3 mm_tensor(std::size_t n, std::size_t m, std::size_t p) {
  if (n == 0 || m == 0 || p == 0) throw ArgumentError("tensor dimensions must be positive");
  Tensor3 t({n, m, p});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < p; ++k) t.at(i * m + j, j * p + k, i * p + k) = Scalar(1);
    }
  }
  return t;
}

std::size_t Decomposition::order() const {
  std::size_t k = 1;
  for (const auto& term : terms) {
    for (const auto* block : {&term.u, &term.v, &term.w}) {
      for (const auto& c : *block) k = std::max(k, c.significant_order());
    }
  }
  return k;
}

std::string to_string(DecompositionStatus s) {
  switch (s) {
    case DecompositionStatus::kExact:
      return "exact";
    case DecompositionStatus::kBorder:
      return "border";
    case DecompositionStatus::kFail:
      return "fail";
  }
  return "fail";
}

DecompositionVerdict verify_decomposition(const Decomposition& d, const Tensor3& t, int jobs) {
  return verify_rows(d, t, true, jobs);
}

DecompositionVerdict verify_decomposition_serial(const Decomposition& d, const Tensor3& t) {
  return verify_rows(d, t, false, 1);
}

Decomposition trivial_decomposition(std::size_t n, std::size_t m, std::size_t p) {
  Decomposition d{{n, m, p}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        RankOneTerm term{zeros(n * m), zeros(m * p), zeros(n * p)};
        term.u[i * m + j] = EpsSeries{Scalar(1)};
        term.v[j * p + k] = EpsSeries{Scalar(1)};
        term.w[i * p + k] = EpsSeries{Scalar(1)};
        d.terms.push_back(std::move(term));
      }
    }
  }
  return d;
}

Decomposition strassen_decomposition() {
  // Blocks in row-major order: A11 A12 A21 A22 (likewise B, and C for w).
  const int u[7][4] = {{1, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 0}, {0, 0, 0, 1},
                       {1, 1, 0, 0}, {-1, 0, 1, 0}, {0, 1, 0, -1}};
  const int v[7][4] = {{1, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, -1}, {-1, 0, 1, 0},
                       {0, 0, 0, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}};
  const int w[7][4] = {{1, 0, 0, 1}, {0, 0, 1, -1}, {0, 1, 0, 1}, {1, 0, 1, 0},
                       {-1, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
  Decomposition d{{2, 2, 2}, {}};
  for (int t = 0; t < 7; ++t) {
    RankOneTerm term{zeros(4), zeros(4), zeros(4)};
    for (int e = 0; e < 4; ++e) {
      term.u[e] = EpsSeries{Scalar(u[t][e])};
      term.v[e] = EpsSeries{Scalar(v[t][e])};
      term.w[e] = EpsSeries{Scalar(w[t][e])};
    }
    d.terms.push_back(std::move(term));
  }
  return d;
}

Circuit decomposition_to_circuit(const Decomposition& d) {
  const auto& s = d.shape;
  const auto verdict = verify_decomposition(d, mm_tensor(s.n, s.m, s.p));
  if (verdict.status == DecompositionStatus::kFail) {
    throw ArgumentError("decomposition does not verify against " + s.to_string());
  }
  Circuit c(s.x_count() + s.y_count());
  ExprBuilder b(c);
  // Inputs in variable order so the circuit reads naturally.
  for (std::uint32_t v = 0; v < c.n_inputs(); ++v) b.variable(v);

  std::vector<Expr> outputs(s.z_count(), b.constant(zero_series()));
  for (const auto& term : d.terms) {
    const auto [lg, ls] = mul_operand(b, linear_expr(b, term.u, 0));
    const auto [rg, rs] = mul_operand(b, linear_expr(b, term.v, static_cast<std::uint32_t>(s.x_count())));
    const Expr product = b.ref(c.mul(lg, rg, ls, rs));
    for (std::size_t z = 0; z < s.z_count(); ++z) {
      if (!term.w[z].is_zero()) outputs[z] = b.add(outputs[z], b.scale(product, term.w[z]));
    }
  }
  std::vector<GateId> out;
  for (const auto& e : outputs) out.push_back(b.materialize(e));
  c.set_outputs(std::move(out));
  return c;
}

namespace {

/// Gate value in the bilinear normal form.
struct NormalValue {
  BilinearForm linear;
  std::vector<EpsSeries> products;  // coefficient per product index
};

bool form_is_zero(const BilinearForm& f) {
  return f.constant.is_zero() &&
         std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const EpsSeries& c) { return c.is_zero(); });
}

bool has_products(const NormalValue& v) {
  return std::any_of(v.products.begin(), v.products.end(), [](const EpsSeries& c) { return !c.is_zero(); });
}

NormalValue combine(const NormalValue& l, const EpsSeries& alpha, const NormalValue& r, const EpsSeries& beta) {
  NormalValue out;
  out.linear.constant = poly_add(poly_mul(alpha, l.linear.constant), poly_mul(beta, r.linear.constant));
  out.linear.coeffs.resize(l.linear.coeffs.size());
  for (std::size_t i = 0; i < out.linear.coeffs.size(); ++i) {
    out.linear.coeffs[i] = poly_add(poly_mul(alpha, l.linear.coeffs[i]), poly_mul(beta, r.linear.coeffs[i]));
  }
  const std::size_t n = std::max(l.products.size(), r.products.size());
  out.products.assign(n, zero_series());
  for (std::size_t t = 0; t < n; ++t) {
    if (t < l.products.size()) out.products[t] = poly_add(out.products[t], poly_mul(alpha, l.products[t]));
    if (t < r.products.size()) out.products[t] = poly_add(out.products[t], poly_mul(beta, r.products[t]));
  }
  return out;
}

BilinearForm scaled(const BilinearForm& f, const EpsSeries& s) {
  BilinearForm out;
  out.constant = poly_mul(s, f.constant);
  for (const auto& c : f.coeffs) out.coeffs.push_back(poly_mul(s, c));
  return out;
}

}  // namespace

BilinearProgram extract_bilinear(const Circuit& c, const TensorShape& shape) {
  c.check();
  const std::size_t vars = shape.x_count() + shape.y_count();
  if (c.n_inputs() != vars) {
    throw ArgumentError("circuit has " + std::to_string(c.n_inputs()) + " inputs, " + shape.to_string() +
                        " needs " + std::to_string(vars));
  }
  if (c.outputs().size() != shape.z_count()) {
    throw ArgumentError("circuit has " + std::to_string(c.outputs().size()) + " outputs, " + shape.to_string() +
                        " needs " + std::to_string(shape.z_count()));
  }
  BilinearProgram program{shape, {}, {}};
  std::vector<NormalValue> value(c.gates().size());
  const EpsSeries one{Scalar(1)};
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    NormalValue& v = value[i];
    v.linear.coeffs = zeros(vars);
    switch (g.kind) {
      case GateKind::kInput:
        v.linear.coeffs[g.var] = one;
        break;
      case GateKind::kConst:
        v.linear.constant = g.value;
        break;
      case GateKind::kAdd:
        v = combine(value[g.left], g.alpha, value[g.right], g.beta);
        break;
      case GateKind::kMul: {
        if (has_products(value[g.left]) || has_products(value[g.right])) {
          throw ArgumentError("g" + std::to_string(i) + " multiplies a product: not in bilinear normal form");
        }
        program.products.emplace_back(scaled(value[g.left].linear, g.alpha), scaled(value[g.right].linear, g.beta));
        v.products.assign(program.products.size(), zero_series());
        v.products.back() = one;
        break;
      }
    }
  }
  for (GateId o : c.outputs()) {
    const NormalValue& v = value[o];
    if (!form_is_zero(v.linear)) {
      throw ArgumentError("output g" + std::to_string(o) + " has a linear part: not in bilinear normal form");
    }
    std::vector<EpsSeries> row = zeros(program.products.size());
    for (std::size_t t = 0; t < v.products.size(); ++t) row[t] = v.products[t];
    program.outputs.push_back(std::move(row));
  }
  return program;
}

Decomposition bilinear_to_decomposition(const BilinearProgram& program) {
  const auto& s = program.shape;
  const std::size_t nx = s.x_count();
  const std::size_t vars = nx + s.y_count();
  if (program.outputs.size() != s.z_count()) throw ArgumentError("output count does not match the shape");
  for (const auto& row : program.outputs) {
    if (row.size() != program.products.size()) throw ArgumentError("output row length differs from product count");
  }
  auto split = [&](const BilinearForm& f, bool x_part) {
    if (f.coeffs.size() != vars) throw ArgumentError("form length does not match the shape");
    return x_part ? std::vector<EpsSeries>(f.coeffs.begin(), f.coeffs.begin() + static_cast<std::ptrdiff_t>(nx))
                  : std::vector<EpsSeries>(f.coeffs.begin() + static_cast<std::ptrdiff_t>(nx), f.coeffs.end());
  };
  auto nonzero = [](const std::vector<EpsSeries>& v) {
    return std::any_of(v.begin(), v.end(), [](const EpsSeries& c) { return !c.is_zero(); });
  };

  Decomposition d{s, {}};
  for (std::size_t t = 0; t < program.products.size(); ++t) {
    const auto& [left, right] = program.products[t];
    std::vector<EpsSeries> w;
    for (const auto& row : program.outputs) w.push_back(row[t]);
    if (!nonzero(w)) continue;
    for (bool swap : {false, true}) {
      RankOneTerm term{split(swap ? right : left, true), split(swap ? left : right, false), w};
      if (nonzero(term.u) && nonzero(term.v)) d.terms.push_back(std::move(term));
    }
  }
  return d;
}

std::uint64_t brank_lb(std::uint64_t k) {
  if (k == 0) throw ArgumentError("brank_lb needs k >= 1");
  if (k > (1ULL << 31)) throw ArgumentError("brank_lb argument too large");
  const std::uint64_t floor_log = static_cast<std::uint64_t>(std::bit_width(k)) - 1;
  return 2 * k * k - 1 - floor_log;
}

std::uint64_t brank_lb_inverse(std::uint64_t s) {
  std::uint64_t lo = 1, hi = 1;
  while (brank_lb(hi) < s) hi *= 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (brank_lb(mid) >= s) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace hsg
