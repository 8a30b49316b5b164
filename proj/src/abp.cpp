#include "hsg/abp.hpp"

#include <algorithm>
#include <numeric>

namespace hsg {

AffineForm AffineForm::variable(std::uint32_t var, const Scalar& coeff) {
  AffineForm f;
  f.add_term(var, coeff);
  return f;
}

void AffineForm::add_term(std::uint32_t var, const Scalar& coeff) {
  auto it = terms_.find(var);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(var, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

AffineForm operator+(const AffineForm& a, const AffineForm& b) {
  AffineForm r = a;
  r.add_constant(b.constant());
  for (const auto& [v, c] : b.terms()) r.add_term(v, c);
  return r;
}

AffineForm operator*(const Scalar& s, const AffineForm& a) {
  AffineForm r(s * a.constant());
  for (const auto& [v, c] : a.terms()) r.add_term(v, s * c);
  return r;
}

std::string AffineForm::to_string() const {
  std::string out;
  if (!constant_.is_zero() || terms_.empty()) out = constant_.to_string();
  for (const auto& [v, c] : terms_) {
    std::string coeff = c.to_string();
    std::string sign = "+";
    if (coeff[0] == '-') {
      sign = "-";
      coeff = coeff.substr(1);
    }
    if (out.empty()) {
      out = sign == "-" ? "-" : "";
    } else {
      out += " " + sign + " ";
    }
    out += (coeff == "1" ? "" : coeff + "*") + "x" + std::to_string(v);
  }
  return out;
}

TraceAbp::TraceAbp(std::vector<std::size_t> dims, std::vector<Matrix<AffineForm>> matrices, std::size_t n_vars)
    : dims_(std::move(dims)), matrices_(std::move(matrices)), n_vars_(n_vars) {
  if (dims_.size() < 2) throw ArgumentError("trace ABP needs at least one layer of edges");
  if (matrices_.size() + 1 != dims_.size()) {
    throw ArgumentError("expected " + std::to_string(dims_.size() - 1) + " matrices, got " +
                        std::to_string(matrices_.size()));
  }
  if (dims_.front() != dims_.back()) {
    throw ArgumentError("first and last dimensions differ (" + std::to_string(dims_.front()) + " vs " +
                        std::to_string(dims_.back()) + ")");
  }
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto& m = matrices_[i];
    if (dims_[i] == 0) throw ArgumentError("layer " + std::to_string(i + 1) + " is empty");
    if (m.rows != dims_[i] || m.cols != dims_[i + 1] || m.data.size() != m.rows * m.cols) {
      throw ArgumentError("matrix M" + std::to_string(i + 1) + " does not match the dimension chain");
    }
    for (const auto& f : m.data) {
      if (f.var_bound() > n_vars_) {
        throw ArgumentError("label in M" + std::to_string(i + 1) + " uses x" +
                            std::to_string(f.var_bound() - 1) + " beyond nvars");
      }
    }
  }
}

std::size_t TraceAbp::size() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }

std::size_t TraceAbp::width() const { return *std::max_element(dims_.begin(), dims_.end()); }

Abp::Abp(TraceAbp program) : program_(std::move(program)) {
  if (program_.dims().front() != 1) throw ArgumentError("ABP must have a single source and sink");
}

Abp trace_to_abp(const TraceAbp& t) {
  const auto& dims = t.dims();
  const auto& mats = t.matrices();
  const std::size_t copies = dims.front();
  if (copies == 1) return Abp(t);

  const std::size_t m = mats.size();
  if (m == 1) {
    // Every source-sink path is a single edge s_i -> t_i.
    Matrix<AffineForm> only(1, 1);
    for (std::size_t i = 0; i < copies; ++i) only(0, 0) = only(0, 0) + mats[0](i, i);
    return Abp(TraceAbp({1, 1}, {std::move(only)}, t.n_vars()));
  }

  // Copy c occupies block c of every inner layer.
  std::vector<std::size_t> new_dims{1};
  for (std::size_t layer = 1; layer < m; ++layer) new_dims.push_back(copies * dims[layer]);
  new_dims.push_back(1);

  std::vector<Matrix<AffineForm>> out;
  Matrix<AffineForm> first(1, copies * dims[1]);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t j = 0; j < dims[1]; ++j) first(0, c * dims[1] + j) = mats[0](c, j);
  }
  out.push_back(std::move(first));
  for (std::size_t layer = 1; layer + 1 < m; ++layer) {
    const auto& src = mats[layer];
    Matrix<AffineForm> block(copies * src.rows, copies * src.cols);
    for (std::size_t c = 0; c < copies; ++c) {
      for (std::size_t i = 0; i < src.rows; ++i) {
        for (std::size_t j = 0; j < src.cols; ++j) block(c * src.rows + i, c * src.cols + j) = src(i, j);
      }
    }
    out.push_back(std::move(block));
  }
  const auto& last_src = mats[m - 1];
  Matrix<AffineForm> last(copies * last_src.rows, 1);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i = 0; i < last_src.rows; ++i) last(c * last_src.rows + i, 0) = last_src(i, c);
  }
  out.push_back(std::move(last));
  return Abp(TraceAbp(std::move(new_dims), std::move(out), t.n_vars()));
}

TraceAbp build_trace_mm(std::size_t k, std::size_t m) {
  if (k == 0 || m == 0) throw ArgumentError("build_trace_mm needs k >= 1 and m >= 1");
  std::vector<Matrix<AffineForm>> mats;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix<AffineForm> x(k, k);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        x(a, b) = AffineForm::variable(static_cast<std::uint32_t>(i * k * k + a * k + b));
      }
    }
    mats.push_back(std::move(x));
  }
  return TraceAbp(std::vector<std::size_t>(m + 1, k), std::move(mats), m * k * k);
}

namespace {

Expr affine_expr(ExprBuilder& b, const AffineForm& f) {
  Expr e = b.constant(f.constant());
  for (const auto& [v, c] : f.terms()) e = b.add(e, b.scale(b.variable(v), EpsSeries{c}));
  return e;
}

}  // namespace

Circuit abp_to_circuit(const TraceAbp& t) {
  Circuit c(t.n_vars());
  ExprBuilder b(c);
  const auto& mats = t.matrices();
  std::vector<Matrix<Expr>> labels;
  for (const auto& m : mats) {
    Matrix<Expr> e(m.rows, m.cols);
    for (std::size_t k = 0; k < m.data.size(); ++k) e.data[k] = affine_expr(b, m.data[k]);
    labels.push_back(std::move(e));
  }

  Expr total = b.constant(Scalar(0));
  for (std::size_t source = 0; source < t.dims().front(); ++source) {
    // Row `source` of M_1 ... M_{m-1}, then the dot product with column `source` of M_m.
    std::vector<Expr> row;
    if (labels.size() == 1) {
      total = b.add(total, labels[0](source, source));
      continue;
    }
    for (std::size_t j = 0; j < labels[0].cols; ++j) row.push_back(labels[0](source, j));
    for (std::size_t layer = 1; layer + 1 < labels.size(); ++layer) {
      const auto& m = labels[layer];
      std::vector<Expr> next(m.cols, b.constant(Scalar(0)));
      for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) next[j] = b.add(next[j], b.mul(row[i], m(i, j)));
      }
      row = std::move(next);
    }
    const auto& last = labels.back();
    for (std::size_t i = 0; i < last.rows; ++i) total = b.add(total, b.mul(row[i], last(i, source)));
  }
  c.add_output(b.materialize(total));
  return c;
}

}  // namespace hsg
