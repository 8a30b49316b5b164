#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hsg/circuit.hpp"
#include "hsg/error.hpp"
#include "hsg/ring.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// c + sum_j a_j x_j with no zero coefficients stored.
class AffineForm {
 public:
  AffineForm() = default;
  explicit AffineForm(const Scalar& constant) : constant_(constant) {}
  static AffineForm variable(std::uint32_t var, const Scalar& coeff = Scalar(1));

  const Scalar& constant() const { return constant_; }
  const std::map<std::uint32_t, Scalar>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_.is_zero(); }
  /// 0 when there are no variable terms.
  std::uint32_t var_bound() const { return terms_.empty() ? 0 : terms_.rbegin()->first + 1; }

  void add_constant(const Scalar& c) { constant_ += c; }
  void add_term(std::uint32_t var, const Scalar& coeff);

  friend AffineForm operator+(const AffineForm& a, const AffineForm& b);
  friend AffineForm operator*(const Scalar& s, const AffineForm& a);
  friend bool operator==(const AffineForm& a, const AffineForm& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

  template <class T>
  T evaluate(std::span<const T> point, const T& like) const {
    T acc = embed_like(EpsSeries{constant_}, like);
    for (const auto& [var, coeff] : terms_) {
      if (var >= point.size()) throw ArgumentError("affine form refers to x" + std::to_string(var));
      acc += embed_like(EpsSeries{coeff}, like) * point[var];
    }
    return acc;
  }

  /// `c + a*x<j> + ...` (canonical, parseable).
  std::string to_string() const;

 private:
  Scalar constant_;
  std::map<std::uint32_t, Scalar> terms_;
};

/// Dense row-major matrix.
template <class E>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<E> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, const E& fill = E()) : rows(r), cols(c), data(r * c, fill) {}
  E& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const E& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols != b.rows) throw ArgumentError("matrix dimension mismatch");
  Matrix<T> c(a.rows, b.cols, zero_like(a.data.at(0)));
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const T& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

/// Layered trace ABP: the trace of M_1 ... M_m, M_i of size n_i x n_{i+1},
/// n_1 = n_{m+1}. Construction validates the dimension chain and labels.
class TraceAbp {
 public:
  TraceAbp(std::vector<std::size_t> dims, std::vector<Matrix<AffineForm>> matrices, std::size_t n_vars);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<Matrix<AffineForm>>& matrices() const { return matrices_; }
  std::size_t n_vars() const { return n_vars_; }
  std::size_t layers() const { return matrices_.size(); }
  /// Number of vertices, sum of all n_i (both boundary layers included).
  std::size_t size() const;
  /// Largest layer.
  std::size_t width() const;

  /// Matrices evaluated at `point`.
  template <class T>
  std::vector<Matrix<T>> evaluate_matrices(std::span<const T> point, const T& like) const {
    if (point.size() != n_vars_) {
      throw ArgumentError("point has " + std::to_string(point.size()) + " coordinates, program has " +
                          std::to_string(n_vars_) + " variables");
    }
    for (const T& v : point) {
      if (!same_ring(v, like)) throw RingError("evaluation point mixes rings");
    }
    std::vector<Matrix<T>> out;
    for (const auto& m : matrices_) {
      Matrix<T> e(m.rows, m.cols, like);
      for (std::size_t k = 0; k < m.data.size(); ++k) e.data[k] = m.data[k].template evaluate<T>(point, like);
      out.push_back(std::move(e));
    }
    return out;
  }

  template <class T>
  T evaluate(std::span<const T> point, const T& like) const {
    auto mats = evaluate_matrices(point, like);
    Matrix<T> acc = mats[0];
    for (std::size_t i = 1; i < mats.size(); ++i) acc = matmul(acc, mats[i]);
    T tr = zero_like(like);
    for (std::size_t i = 0; i < acc.rows; ++i) tr += acc(i, i);
    return tr;
  }

  template <class T>
  T evaluate(const std::vector<T>& point) const {
    if (point.empty()) throw ArgumentError("empty point: pass the target ring explicitly");
    return evaluate(std::span<const T>(point), point[0]);
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<Matrix<AffineForm>> matrices_;
  std::size_t n_vars_;
};

/// Single-source single-sink ABP; its polynomial is the (1,1) entry of the
/// product, which equals the trace since the boundary layers have size 1.
class Abp {
 public:
  explicit Abp(TraceAbp program);

  const TraceAbp& program() const { return program_; }
  std::size_t size() const { return program_.size(); }
  std::size_t width() const { return program_.width(); }

  template <class T>
  T evaluate(std::span<const T> point, const T& like) const {
    return program_.evaluate(point, like);
  }
  template <class T>
  T evaluate(const std::vector<T>& point) const {
    return program_.evaluate(point);
  }

 private:
  TraceAbp program_;
};

/// Parallel composition of n_1 copies of the program, copy i keeping only
/// source s_i and sink t_i, with all kept sources (and sinks) identified.
/// Size is at most width*size, width at most width^2.
Abp trace_to_abp(const TraceAbp& t);

/// Trace ABP computing tr(X^(1) ... X^(m)) for k x k matrices of fresh
/// variables; X^(i)_{a,b} is variable (i-1)k^2 + a k + b.
TraceAbp build_trace_mm(std::size_t k, std::size_t m);

/// Iterated matrix product as a circuit (one row vector per source).
/// Products with constant labels are folded into edge scalars.
Circuit abp_to_circuit(const TraceAbp& t);
inline Circuit abp_to_circuit(const Abp& a) { return abp_to_circuit(a.program()); }

}  // namespace hsg
