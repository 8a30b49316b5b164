#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsg/abp.hpp"
#include "hsg/eps_series.hpp"
#include "hsg/polynomial.hpp"
#include "hsg/random.hpp"
#include "hsg/ring.hpp"

namespace hsg {

/// Non-increasing sequence of positive minor sizes sigma_1 >= ... >= sigma_p.
class MinorSequence {
 public:
  explicit MinorSequence(std::vector<std::size_t> sigma);
  const std::vector<std::size_t>& values() const { return sigma_; }
  std::size_t leading() const { return sigma_.front(); }
  std::string to_string() const;

 private:
  std::vector<std::size_t> sigma_;
};

/// Entry of a projection matrix: a constant eps-polynomial or coeff * x_var.
struct ProjEntry {
  enum class Kind : std::uint8_t { kConst, kVar };
  Kind kind = Kind::kConst;
  EpsSeries constant{Scalar(0)};
  Scalar coeff;
  std::uint32_t var = 0;

  static ProjEntry make_constant(EpsSeries c) { return ProjEntry{Kind::kConst, std::move(c), Scalar(), 0}; }
  static ProjEntry make_var(std::uint32_t v, Scalar c) {
    return ProjEntry{Kind::kVar, EpsSeries{Scalar(0)}, std::move(c), v};
  }
};

/// Square matrix over F(eps)[X^(1), ..., X^(m)] whose entries are constants
/// or scaled variables. Variables are numbered block by block: X^(i)_{a,b}
/// is var offset(i) + a*n_{i+1} + b with offset(i) = sum_{j<i} n_j n_{j+1}.
class ProjMatrix {
 public:
  ProjMatrix(std::size_t size, std::vector<std::size_t> dims);

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t layers() const { return dims_.size() - 1; }
  /// N = n_1 + ... + n_{m+1}.
  std::size_t block_size() const;
  std::size_t n_vars() const { return n_vars_; }
  std::size_t var_offset(std::size_t layer) const { return offsets_[layer]; }

  ProjEntry& operator()(std::size_t i, std::size_t j) { return entries_[i * size_ + j]; }
  const ProjEntry& operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }

  /// +1 or -1, the sign folded into the first block of variables.
  int sign() const { return sign_; }
  /// Diagonal of the rescaling A (length n_1); all ones when unscaled.
  const std::vector<Scalar>& scaling() const { return scaling_; }

  /// Every entry is a constant or a single scaled variable.
  bool entries_are_simple() const;

  /// Numeric matrix over series type S (FpSeries or EpsSeries).
  template <class S>
  Matrix<S> evaluate(std::span<const typename S::Coeff> assignment, const S& like) const;

  /// Symbolic matrix; eps is played by variable n_vars().
  Matrix<Polynomial> symbolic() const;

  void set_sign(int s) { sign_ = s; }
  void set_scaling(std::vector<Scalar> a) { scaling_ = std::move(a); }

 private:
  std::size_t size_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t n_vars_;
  std::vector<ProjEntry> entries_;
  int sign_ = 1;
  std::vector<Scalar> scaling_;
};

/// ProjMatrix with constants and coefficients embedded into one ring, for
/// repeated evaluation at many assignments.
template <class S>
class ProjEvaluator {
 public:
  using C = typename S::Coeff;

  ProjEvaluator(const ProjMatrix& m, const S& like) : base_(m.size(), m.size(), zero_like(like)), n_vars_(m.n_vars()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        const ProjEntry& e = m(i, j);
        const std::size_t k = i * m.size() + j;
        if (e.kind == ProjEntry::Kind::kConst) {
          base_.data[k] = embed_like(e.constant, like);
        } else {
          vars_.push_back({k, e.var, embed_like(EpsSeries{e.coeff}, like)[0]});
        }
      }
    }
  }

  Matrix<S> evaluate(std::span<const C> assignment) const {
    if (assignment.size() != n_vars_) {
      throw ArgumentError("assignment has " + std::to_string(assignment.size()) + " values, matrix has " +
                          std::to_string(n_vars_) + " variables");
    }
    Matrix<S> out = base_;
    for (const VarSlot& v : vars_) out.data[v.index][0] = v.coeff * assignment[v.var];
    return out;
  }

 private:
  struct VarSlot {
    std::size_t index;
    std::uint32_t var;
    C coeff;
  };
  Matrix<S> base_;
  std::size_t n_vars_;
  std::vector<VarSlot> vars_;
};

template <class S>
Matrix<S> ProjMatrix::evaluate(std::span<const typename S::Coeff> assignment, const S& like) const {
  return ProjEvaluator<S>(*this, like).evaluate(assignment);
}

/// Adjacency matrix of the layered graph with unit self-loops and eps-edges
/// t_i -> s_i: identity diagonal blocks, X^(i) on the block superdiagonal,
/// eps * I_{n_1} in the bottom-left block. Size N.
ProjMatrix build_m_prime(const std::vector<std::size_t>& dims);

/// The projection matrix M: build_m_prime after X^(1) -> (-1)^m A X^(1),
/// padded with identity to size sigma_1. With `apply_scaling` false, A = I.
ProjMatrix build_m(const std::vector<std::size_t>& dims, const MinorSequence& sigma, bool apply_scaling = true);

/// Multiplicities a_k for k = N - n_1 + 1, ..., N (minor sizes above N
/// count toward a_N: the identity padding does not change the determinant).
std::vector<std::size_t> tail_multiplicities(const std::vector<std::size_t>& dims, const MinorSequence& sigma);

/// Determinants of all leading principal minors, index k-1 for size k.
/// Berkowitz's algorithm: division free, so valid over R[eps]/(eps^K).
template <class T>
std::vector<T> leading_principal_minors(const Matrix<T>& a) {
  const std::size_t n = a.rows;
  if (n == 0 || a.cols != n) throw ArgumentError("leading minors need a nonempty square matrix");
  const T zero = zero_like(a(0, 0));
  const T one = one_like(a(0, 0));
  std::vector<T> minors;
  minors.reserve(n);
  // charpoly[i] is the coefficient of x^{r-i} in det(x I - A_r).
  std::vector<T> charpoly{one, -a(0, 0)};
  minors.push_back(a(0, 0));
  std::vector<T> toeplitz;
  std::vector<T> v, w;
  for (std::size_t r = 2; r <= n; ++r) {
    const std::size_t last = r - 1;
    toeplitz.assign(r + 1, zero);
    toeplitz[0] = one;
    toeplitz[1] = -a(last, last);
    // v runs through A_{r-1}^j C; entry j+2 of the Toeplitz column is -R v.
    v.assign(last, zero);
    for (std::size_t i = 0; i < last; ++i) v[i] = a(i, last);
    for (std::size_t j = 0; j + 2 <= r; ++j) {
      T dot = zero;
      for (std::size_t i = 0; i < last; ++i) add_product(dot, a(last, i), v[i]);
      toeplitz[j + 2] = -dot;
      if (j + 3 > r) break;
      w.assign(last, zero);
      for (std::size_t i = 0; i < last; ++i) {
        for (std::size_t k = 0; k < last; ++k) add_product(w[i], a(i, k), v[k]);
      }
      std::swap(v, w);
    }
    std::vector<T> next(r + 1, zero);
    for (std::size_t i = 0; i <= r; ++i) {
      for (std::size_t j = 0; j <= i && j < toeplitz.size(); ++j) {
        if (i - j < charpoly.size()) add_product(next[i], toeplitz[j], charpoly[i - j]);
      }
    }
    charpoly = std::move(next);
    minors.push_back(r % 2 == 0 ? charpoly[r] : -charpoly[r]);
  }
  return minors;
}

template <class T>
T berkowitz_det(const Matrix<T>& a) {
  return leading_principal_minors(a).back();
}

/// Determinant as the signed sum over cycle covers of the weighted digraph
/// with adjacency matrix `a`; a cover with e even-length cycles has sign
/// (-1)^e. Factorial time, so limited to 6 x 6.
template <class T>
T det_cycle_cover_reference(const Matrix<T>& a) {
  const std::size_t n = a.rows;
  if (a.cols != n) throw ArgumentError("determinant needs a square matrix");
  if (n > 6) throw ArgumentError("cycle-cover determinant is limited to 6 x 6, got " + std::to_string(n));
  if (n == 0) throw ArgumentError("empty matrix");
  std::vector<std::size_t> succ(n);
  std::iota(succ.begin(), succ.end(), std::size_t{0});
  T total = zero_like(a(0, 0));
  std::vector<char> seen(n);
  do {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t even_cycles = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::size_t len = 0;
      for (std::size_t v = s; !seen[v]; v = succ[v]) {
        seen[v] = 1;
        ++len;
      }
      if (len % 2 == 0) ++even_cycles;
    }
    T weight = a(0, succ[0]);
    for (std::size_t v = 1; v < n; ++v) weight *= a(v, succ[v]);
    if (even_cycles % 2) {
      total -= weight;
    } else {
      total += weight;
    }
  } while (std::next_permutation(succ.begin(), succ.end()));
  return total;
}

/// det of the leading k x k minor of M at `assignment`, over F[eps]/(eps^order).
EpsSeries minor_det(const ProjMatrix& m, std::size_t k, std::span<const Scalar> assignment, std::size_t order);

struct ProjectionCounterexample {
  std::size_t trial = 0;
  std::vector<std::uint64_t> assignment;
  std::string got;
  std::string expected;
};

struct ProjectionReport {
  bool pass = true;
  std::size_t trials = 0;
  std::size_t max_k = 0;
  std::size_t matrix_size = 0;
  /// The eps^0 coefficient of the minor product was 1 in every trial.
  bool constant_term_one = true;
  std::optional<ProjectionCounterexample> counterexample;
};

struct ProjectionCheck {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> sigma;
  std::size_t trials = 100;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
  bool apply_scaling = true;
  /// OpenMP threads; 0 keeps the runtime default.
  int jobs = 0;
};

/// Randomized check of prod_i det(M_[sigma_i]) = 1 + eps tr(X^(1)...X^(m))
/// mod eps^2. Trial t draws its assignment from stream t of the seed, so the
/// report is independent of the thread count. OpenMP kernel over trials.
ProjectionReport verify_projection_identity(const ProjectionCheck& check);

/// Serial reference for verify_projection_identity: same streams, but
/// arithmetic through the generic Scalar-coefficient series.
ProjectionReport verify_projection_identity_serial(const ProjectionCheck& check);

struct SymbolicProjectionReport {
  bool pass = false;
  /// Minor product truncated mod eps^2 and the target, as polynomials.
  Polynomial product;
  Polynomial target;
};

/// Full expansion over Q[X, eps] through cycle covers (sigma_1 <= 6).
SymbolicProjectionReport verify_projection_identity_symbolic(const std::vector<std::size_t>& dims,
                                                             const MinorSequence& sigma,
                                                             bool apply_scaling = true);

}  // namespace hsg
