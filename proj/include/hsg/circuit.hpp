#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "hsg/eps_series.hpp"
#include "hsg/error.hpp"
#include "hsg/ring.hpp"

namespace hsg {

using GateId = std::uint32_t;

enum class GateKind : std::uint8_t { kInput, kConst, kAdd, kMul };

/// One node of an algebraic circuit. Add computes alpha*left + beta*right,
/// Mul computes (alpha*left) * (beta*right). Constants and edge scalars are
/// exact polynomials in eps (order-1 series for plain field constants).
struct Gate {
  GateKind kind = GateKind::kConst;
  std::uint32_t var = 0;
  EpsSeries value{Scalar(0)};
  GateId left = 0;
  GateId right = 0;
  EpsSeries alpha{Scalar(1)};
  EpsSeries beta{Scalar(1)};
};

/// Multi-output algebraic circuit stored as a topologically ordered gate list.
///
/// The builder methods append gates without checking them; validate() reports
/// the first violated structural invariant. Every consumer validates first.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_inputs) : n_inputs_(n_inputs) {}
  Circuit(std::size_t n_inputs, std::vector<Gate> gates, std::vector<GateId> outputs)
      : n_inputs_(n_inputs), gates_(std::move(gates)), outputs_(std::move(outputs)) {}

  GateId input(std::uint32_t var);
  GateId constant(EpsSeries value);
  GateId constant(const Scalar& value) { return constant(EpsSeries{value}); }
  GateId add(GateId left, GateId right, EpsSeries alpha = EpsSeries{Scalar(1)},
             EpsSeries beta = EpsSeries{Scalar(1)});
  GateId mul(GateId left, GateId right, EpsSeries alpha = EpsSeries{Scalar(1)},
             EpsSeries beta = EpsSeries{Scalar(1)});
  void add_output(GateId id) { outputs_.push_back(id); }
  void set_outputs(std::vector<GateId> ids) { outputs_ = std::move(ids); }

  std::size_t n_inputs() const { return n_inputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<GateId>& outputs() const { return outputs_; }
  /// Number of gates; edge scalars are never charged.
  std::size_t size() const { return gates_.size(); }

  /// First violated invariant, or nullopt when the circuit is well formed.
  std::optional<std::string> validate() const;
  /// Throws ArgumentError carrying validate()'s diagnostic.
  void check() const;

  /// Number of Mul gates.
  std::size_t mult_complexity() const;

  /// Syntactic degree of every output (Input 1, Const 0, Add max, Mul sum).
  /// Saturates at UINT64_MAX.
  std::vector<std::uint64_t> degree_bound() const;
  std::uint64_t max_degree_bound() const;

  /// True if some constant or edge scalar has a nonzero eps-part.
  bool has_eps_constants() const;
  /// The same circuit with eps set to 0 in every constant and edge scalar.
  Circuit at_eps_zero() const;

 private:
  std::size_t n_inputs_ = 0;
  std::vector<Gate> gates_;
  std::vector<GateId> outputs_;
};

/// Evaluates a validated circuit at many points of one ring. Constants and
/// edge scalars are embedded once, at construction.
template <class T>
class Evaluator {
 public:
  Evaluator(const Circuit& c, const T& like) : circuit_(&c), like_(like) {
    c.check();
    const auto& gates = c.gates();
    consts_.reserve(gates.size());
    alpha_.reserve(gates.size());
    beta_.reserve(gates.size());
    for (const Gate& g : gates) {
      consts_.push_back(g.kind == GateKind::kConst ? embed_like(g.value, like) : zero_like(like));
      const bool binary = g.kind == GateKind::kAdd || g.kind == GateKind::kMul;
      alpha_.push_back(binary ? embed_like(g.alpha, like) : zero_like(like));
      beta_.push_back(binary ? embed_like(g.beta, like) : zero_like(like));
      unit_.push_back(static_cast<std::uint8_t>((binary && is_unit_constant(g.alpha) ? 1 : 0) |
                                                (binary && is_unit_constant(g.beta) ? 2 : 0)));
    }
  }

  /// Values of all outputs at `point`; `scratch` is reused between calls.
  std::vector<T> evaluate(std::span<const T> point, std::vector<T>& scratch) const {
    const Circuit& c = *circuit_;
    if (point.size() != c.n_inputs()) {
      throw ArgumentError("point has " + std::to_string(point.size()) + " coordinates, circuit has " +
                          std::to_string(c.n_inputs()) + " inputs");
    }
    for (const T& v : point) {
      if (!same_ring(v, like_)) throw RingError("evaluation point mixes rings");
    }
    const auto& gates = c.gates();
    scratch.resize(gates.size(), like_);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      switch (g.kind) {
        case GateKind::kInput:
          scratch[i] = point[g.var];
          break;
        case GateKind::kConst:
          scratch[i] = consts_[i];
          break;
        case GateKind::kAdd:
        case GateKind::kMul: {
          T l = (unit_[i] & 1) ? scratch[g.left] : alpha_[i] * scratch[g.left];
          T r = (unit_[i] & 2) ? scratch[g.right] : beta_[i] * scratch[g.right];
          scratch[i] = g.kind == GateKind::kAdd ? l + r : l * r;
          break;
        }
      }
    }
    std::vector<T> out;
    out.reserve(c.outputs().size());
    for (GateId o : c.outputs()) out.push_back(scratch[o]);
    return out;
  }

  std::vector<T> evaluate(std::span<const T> point) const {
    std::vector<T> scratch;
    return evaluate(point, scratch);
  }

 private:
  const Circuit* circuit_;
  T like_;
  std::vector<T> consts_;
  std::vector<T> alpha_;
  std::vector<T> beta_;
  std::vector<std::uint8_t> unit_;
};

/// One-shot evaluation. `like` fixes the ring (needed for input-free circuits).
template <class T>
std::vector<T> evaluate(const Circuit& c, std::span<const T> point, const T& like) {
  return Evaluator<T>(c, like).evaluate(point);
}

template <class T>
std::vector<T> evaluate(const Circuit& c, std::span<const T> point) {
  if (point.empty()) {
    if constexpr (std::is_same_v<T, Scalar>) {
      return evaluate(c, point, Scalar());
    } else {
      throw ArgumentError("input-free circuit: pass the target ring explicitly");
    }
  } else {
    return evaluate(c, point, point[0]);
  }
}

template <class T>
std::vector<T> evaluate(const Circuit& c, const std::vector<T>& point) {
  return evaluate(c, std::span<const T>(point));
}

/// Affine expression scale*gate + offset over a circuit under construction.
/// A missing gate means the pure constant `offset`.
struct Expr {
  std::optional<GateId> gate;
  EpsSeries scale{Scalar(1)};
  EpsSeries offset{Scalar(0)};

  bool is_constant() const { return !gate.has_value(); }
};

/// Builds circuits from Expr arithmetic, folding every operation that
/// involves a constant into edge scalars so that only products of two
/// non-constant expressions cost a Mul gate.
class ExprBuilder {
 public:
  explicit ExprBuilder(Circuit& target) : c_(&target) {}

  Expr constant(const EpsSeries& value) const { return Expr{std::nullopt, EpsSeries{Scalar(1)}, value}; }
  Expr constant(const Scalar& value) const { return constant(EpsSeries{value}); }
  /// Input gate for `var`, created once per variable.
  Expr variable(std::uint32_t var);
  Expr ref(GateId g) const { return Expr{g, EpsSeries{Scalar(1)}, EpsSeries{Scalar(0)}}; }

  Expr add(const Expr& a, const Expr& b);
  Expr sub(const Expr& a, const Expr& b);
  Expr scale(const Expr& a, const EpsSeries& s) const;
  Expr mul(const Expr& a, const Expr& b);
  /// A gate whose value equals the expression.
  GateId materialize(const Expr& e);

  Circuit& circuit() { return *c_; }

 private:
  GateId zero_gate();

  Circuit* c_;
  std::vector<std::optional<GateId>> inputs_;
  std::optional<GateId> zero_;
};

/// Reverse-mode derivative transform. Output 0 is f, output 1+i is df/dx_i.
/// The result uses at most 3 * mult_complexity(c) Mul gates.
Circuit baur_strassen(const Circuit& c);

/// Replaces input i of `c` by the single output of `subs[i]`. All
/// replacements must share one variable space, which becomes the result's.
Circuit substitute(const Circuit& c, const std::vector<Circuit>& subs);

/// (x_1 + ... + x_n)^d by square-and-multiply; at most 2*floor(log2 d) Mul gates.
Circuit power_sum(std::size_t n, std::uint64_t d);

/// Single-output circuit computing a constant.
Circuit constant_circuit(std::size_t n_inputs, const EpsSeries& value);
/// Single-output circuit computing x_var.
Circuit projection_circuit(std::size_t n_inputs, std::uint32_t var);

/// Output-wise difference of two circuits on the same inputs.
Circuit difference(const Circuit& a, const Circuit& b);

}  // namespace hsg
