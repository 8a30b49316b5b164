#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsg/circuit.hpp"
#include "hsg/eps_series.hpp"
#include "hsg/scalar.hpp"

namespace hsg {

/// Index conventions for <n,m,p>: x_{i,j} -> i*m + j, y_{j,k} -> j*p + k,
/// z_{i,k} -> i*p + k (all zero based).
struct TensorShape {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;

  std::size_t x_count() const { return n * m; }
  std::size_t y_count() const { return m * p; }
  std::size_t z_count() const { return n * p; }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
  std::string to_string() const;
};

/// Dense order-3 tensor over the x, y, z variable blocks of a shape.
class Tensor3 {
 public:
  explicit Tensor3(TensorShape shape);

  const TensorShape& shape() const { return shape_; }
  Scalar& at(std::size_t a, std::size_t b, std::size_t c) { return data_[index(a, b, c)]; }
  const Scalar& at(std::size_t a, std::size_t b, std::size_t c) const { return data_[index(a, b, c)]; }
  std::size_t nonzero_count() const;

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t c) const {
    return (a * shape_.y_count() + b) * shape_.z_count() + c;
  }

  TensorShape shape_;
  std::vector<Scalar> data_;
};

/// sum_{i,j,k} x_{i,j} y_{j,k} z_{i,k}.
Tensor3 mm_tensor(std::size_t n, std::size_t m, std::size_t p);

/// One rank-one term u(x) v(y) w(z), coefficients eps-polynomials.
struct RankOneTerm {
  std::vector<EpsSeries> u;
  std::vector<EpsSeries> v;
  std::vector<EpsSeries> w;
};

struct Decomposition {
  TensorShape shape;
  std::vector<RankOneTerm> terms;

  std::size_t rank() const { return terms.size(); }
  /// K: one more than the largest eps-degree present.
  std::size_t order() const;
};

enum class DecompositionStatus { kExact, kBorder, kFail };

std::string to_string(DecompositionStatus s);

struct DecompositionWitness {
  std::size_t a = 0, b = 0, c = 0;
  Scalar expected;
  /// Full eps-expansion of the coefficient, as a series literal.
  std::string got;
};

struct DecompositionVerdict {
  DecompositionStatus status = DecompositionStatus::kFail;
  std::optional<DecompositionWitness> witness;
};

/// Expands sum of terms over F[eps] without truncation. kExact: equals the
/// tensor with no eps-tail; kBorder: eps^0 part equals the tensor; kFail
/// otherwise, with the first differing coefficient in (a,b,c) order.
/// OpenMP over x-indices.
DecompositionVerdict verify_decomposition(const Decomposition& d, const Tensor3& t, int jobs = 0);
DecompositionVerdict verify_decomposition_serial(const Decomposition& d, const Tensor3& t);

/// One term per (i,j,k).
Decomposition trivial_decomposition(std::size_t n, std::size_t m, std::size_t p);

/// Strassen's seven products for <2,2,2>.
Decomposition strassen_decomposition();

/// Circuit over x then y (nm + mp inputs) with outputs (XY)_{i,k} in z order.
/// Exactly one Mul gate per term. Throws if the decomposition does not
/// verify (exactly or in the border) against <n,m,p>.
Circuit decomposition_to_circuit(const Decomposition& d);

/// Affine form over x then y variables with eps-polynomial coefficients.
struct BilinearForm {
  std::vector<EpsSeries> coeffs;
  EpsSeries constant{Scalar(0)};
};

/// Normal form: products ell_t * ell'_t, and every output a linear
/// combination sum_t outputs[c][t] * product_t.
struct BilinearProgram {
  TensorShape shape;
  std::vector<std::pair<BilinearForm, BilinearForm>> products;
  std::vector<std::vector<EpsSeries>> outputs;
};

/// Reads the normal form off a circuit: every Mul operand must be free of
/// products and every output a pure combination of products.
BilinearProgram extract_bilinear(const Circuit& c, const TensorShape& shape);

/// Polarization: each product contributes ell_x * ell'_y and ell'_x * ell_y;
/// vanishing terms are dropped, so at most 2 * products terms.
Decomposition bilinear_to_decomposition(const BilinearProgram& program);

/// Least integer L with L >= 2k^2 - log2(k) - 1, i.e. 2k^2 - 1 - floor(log2 k).
std::uint64_t brank_lb(std::uint64_t k);

/// Least k with brank_lb(k) >= s.
std::uint64_t brank_lb_inverse(std::uint64_t s);

}  // namespace hsg
