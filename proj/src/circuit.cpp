#include "hsg/circuit.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace hsg {
namespace {

EpsSeries one_series() { return EpsSeries{Scalar(1)}; }

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

EpsSeries constant_part(const EpsSeries& s) { return EpsSeries{s[0]}; }

}  // namespace

GateId Circuit::input(std::uint32_t var) {
  Gate g;
  g.kind = GateKind::kInput;
  g.var = var;
  gates_.push_back(std::move(g));
  return static_cast<GateId>(gates_.size() - 1);
}

GateId Circuit::constant(EpsSeries value) {
  Gate g;
  g.kind = GateKind::kConst;
  g.value = std::move(value);
  gates_.push_back(std::move(g));
  return static_cast<GateId>(gates_.size() - 1);
}

GateId Circuit::add(GateId left, GateId right, EpsSeries alpha, EpsSeries beta) {
  Gate g;
  g.kind = GateKind::kAdd;
  g.left = left;
  g.right = right;
  g.alpha = std::move(alpha);
  g.beta = std::move(beta);
  gates_.push_back(std::move(g));
  return static_cast<GateId>(gates_.size() - 1);
}

GateId Circuit::mul(GateId left, GateId right, EpsSeries alpha, EpsSeries beta) {
  Gate g;
  g.kind = GateKind::kMul;
  g.left = left;
  g.right = right;
  g.alpha = std::move(alpha);
  g.beta = std::move(beta);
  gates_.push_back(std::move(g));
  return static_cast<GateId>(gates_.size() - 1);
}

std::optional<std::string> Circuit::validate() const {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    const std::string name = "g" + std::to_string(i);
    switch (g.kind) {
      case GateKind::kInput:
        if (g.var >= n_inputs_) {
          return name + ": input variable " + std::to_string(g.var) + " out of range (circuit has " +
                 std::to_string(n_inputs_) + " inputs)";
        }
        break;
      case GateKind::kConst:
        break;
      case GateKind::kAdd:
      case GateKind::kMul:
        for (GateId operand : {g.left, g.right}) {
          if (operand >= i) {
            return name + ": operand g" + std::to_string(operand) +
                   " does not precede the gate (forward reference or cycle)";
          }
        }
        break;
    }
  }
  if (outputs_.empty()) return std::string("circuit has no outputs");
  for (GateId o : outputs_) {
    if (o >= gates_.size()) {
      return "output g" + std::to_string(o) + " is not a gate (circuit has " +
             std::to_string(gates_.size()) + " gates)";
    }
  }
  return std::nullopt;
}

void Circuit::check() const {
  if (auto diag = validate()) throw ArgumentError("invalid circuit: " + *diag);
}

std::size_t Circuit::mult_complexity() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == GateKind::kMul; }));
}

std::vector<std::uint64_t> Circuit::degree_bound() const {
  check();
  std::vector<std::uint64_t> deg(gates_.size(), 0);
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::kInput:
        deg[i] = 1;
        break;
      case GateKind::kConst:
        deg[i] = 0;
        break;
      case GateKind::kAdd:
        deg[i] = std::max(deg[g.left], deg[g.right]);
        break;
      case GateKind::kMul:
        deg[i] = sat_add(deg[g.left], deg[g.right]);
        break;
    }
  }
  std::vector<std::uint64_t> out;
  out.reserve(outputs_.size());
  for (GateId o : outputs_) out.push_back(deg[o]);
  return out;
}

std::uint64_t Circuit::max_degree_bound() const {
  const auto d = degree_bound();
  return *std::max_element(d.begin(), d.end());
}

bool Circuit::has_eps_constants() const {
  return std::any_of(gates_.begin(), gates_.end(), [](const Gate& g) {
    return !g.value.is_constant() || !g.alpha.is_constant() || !g.beta.is_constant();
  });
}

Circuit Circuit::at_eps_zero() const {
  Circuit out = *this;
  for (Gate& g : out.gates_) {
    g.value = constant_part(g.value);
    g.alpha = constant_part(g.alpha);
    g.beta = constant_part(g.beta);
  }
  return out;
}

Expr ExprBuilder::variable(std::uint32_t var) {
  if (inputs_.size() <= var) inputs_.resize(var + 1);
  if (!inputs_[var]) inputs_[var] = c_->input(var);
  return ref(*inputs_[var]);
}

GateId ExprBuilder::zero_gate() {
  if (!zero_) zero_ = c_->constant(EpsSeries{Scalar(0)});
  return *zero_;
}

Expr ExprBuilder::add(const Expr& a, const Expr& b) {
  const EpsSeries offset = poly_add(a.offset, b.offset);
  if (a.is_constant() && b.is_constant()) return constant(offset);
  if (a.is_constant()) return Expr{b.gate, b.scale, offset};
  if (b.is_constant()) return Expr{a.gate, a.scale, offset};
  if (*a.gate == *b.gate) {
    const EpsSeries s = poly_add(a.scale, b.scale);
    if (s.is_zero()) return constant(offset);
    return Expr{a.gate, s, offset};
  }
  return Expr{c_->add(*a.gate, *b.gate, a.scale, b.scale), one_series(), offset};
}

Expr ExprBuilder::sub(const Expr& a, const Expr& b) { return add(a, scale(b, EpsSeries{Scalar(-1)})); }

Expr ExprBuilder::scale(const Expr& a, const EpsSeries& s) const {
  if (s.is_zero()) return constant(EpsSeries{Scalar(0)});
  if (a.is_constant()) return constant(poly_mul(s, a.offset));
  return Expr{a.gate, poly_mul(s, a.scale), poly_mul(s, a.offset)};
}

Expr ExprBuilder::mul(const Expr& a, const Expr& b) {
  if (a.is_constant()) return scale(b, a.offset);
  if (b.is_constant()) return scale(a, b.offset);
  if (a.offset.is_zero() && b.offset.is_zero()) {
    return Expr{c_->mul(*a.gate, *b.gate, a.scale, b.scale), one_series(), EpsSeries{Scalar(0)}};
  }
  return ref(c_->mul(materialize(a), materialize(b)));
}

GateId ExprBuilder::materialize(const Expr& e) {
  if (e.is_constant()) return c_->constant(e.offset);
  if (e.offset.is_zero()) {
    if (is_unit_constant(e.scale)) return *e.gate;
    return c_->add(*e.gate, zero_gate(), e.scale, one_series());
  }
  return c_->add(*e.gate, c_->constant(e.offset), e.scale, one_series());
}

Circuit baur_strassen(const Circuit& c) {
  c.check();
  if (c.outputs().size() != 1) {
    throw ArgumentError("derivative transform needs a single-output circuit, got " +
                        std::to_string(c.outputs().size()) + " outputs");
  }
  // Forward pass: the original gates keep their ids.
  Circuit out(c.n_inputs(), c.gates(), {});
  ExprBuilder b(out);
  const auto& gates = c.gates();

  std::vector<std::optional<Expr>> adjoint(gates.size());
  adjoint[c.outputs()[0]] = b.constant(Scalar(1));
  std::vector<Expr> gradient(c.n_inputs(), b.constant(Scalar(0)));

  auto accumulate = [&](GateId target, const Expr& contribution) {
    adjoint[target] = adjoint[target] ? b.add(*adjoint[target], contribution) : contribution;
  };

  for (std::size_t i = gates.size(); i-- > 0;) {
    if (!adjoint[i]) continue;
    const Expr adj = *adjoint[i];
    const Gate& g = gates[i];
    switch (g.kind) {
      case GateKind::kInput:
        gradient[g.var] = b.add(gradient[g.var], adj);
        break;
      case GateKind::kConst:
        break;
      case GateKind::kAdd:
        accumulate(g.left, b.scale(adj, g.alpha));
        accumulate(g.right, b.scale(adj, g.beta));
        break;
      case GateKind::kMul: {
        // d/d(left) of (alpha*l)(beta*r) is alpha*beta*r, and symmetrically.
        const EpsSeries ab = poly_mul(g.alpha, g.beta);
        accumulate(g.left, b.mul(adj, b.scale(b.ref(g.right), ab)));
        accumulate(g.right, b.mul(adj, b.scale(b.ref(g.left), ab)));
        break;
      }
    }
  }

  std::vector<GateId> outputs{c.outputs()[0]};
  for (const Expr& d : gradient) outputs.push_back(b.materialize(d));
  out.set_outputs(std::move(outputs));
  return out;
}

Circuit substitute(const Circuit& c, const std::vector<Circuit>& subs) {
  c.check();
  if (subs.size() != c.n_inputs()) {
    throw ArgumentError("substitution provides " + std::to_string(subs.size()) +
                        " replacements for " + std::to_string(c.n_inputs()) + " variables");
  }
  std::size_t fresh = subs.empty() ? 0 : subs[0].n_inputs();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    subs[i].check();
    if (subs[i].outputs().size() != 1) {
      throw ArgumentError("replacement for x" + std::to_string(i) + " must have exactly one output");
    }
    if (subs[i].n_inputs() != fresh) {
      throw ArgumentError("replacement for x" + std::to_string(i) + " uses " +
                          std::to_string(subs[i].n_inputs()) + " variables, expected " +
                          std::to_string(fresh));
    }
  }

  Circuit out(fresh);
  std::vector<std::optional<GateId>> fresh_inputs(fresh);
  std::vector<std::optional<GateId>> inlined(subs.size());

  auto inline_sub = [&](std::size_t var) -> GateId {
    if (inlined[var]) return *inlined[var];
    const Circuit& s = subs[var];
    std::vector<GateId> map(s.gates().size());
    for (std::size_t i = 0; i < s.gates().size(); ++i) {
      const Gate& g = s.gates()[i];
      switch (g.kind) {
        case GateKind::kInput:
          if (!fresh_inputs[g.var]) fresh_inputs[g.var] = out.input(g.var);
          map[i] = *fresh_inputs[g.var];
          break;
        case GateKind::kConst:
          map[i] = out.constant(g.value);
          break;
        case GateKind::kAdd:
          map[i] = out.add(map[g.left], map[g.right], g.alpha, g.beta);
          break;
        case GateKind::kMul:
          map[i] = out.mul(map[g.left], map[g.right], g.alpha, g.beta);
          break;
      }
    }
    inlined[var] = map[s.outputs()[0]];
    return *inlined[var];
  };

  std::vector<GateId> map(c.gates().size());
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    switch (g.kind) {
      case GateKind::kInput:
        map[i] = inline_sub(g.var);
        break;
      case GateKind::kConst:
        map[i] = out.constant(g.value);
        break;
      case GateKind::kAdd:
        map[i] = out.add(map[g.left], map[g.right], g.alpha, g.beta);
        break;
      case GateKind::kMul:
        map[i] = out.mul(map[g.left], map[g.right], g.alpha, g.beta);
        break;
    }
  }
  std::vector<GateId> outputs;
  for (GateId o : c.outputs()) outputs.push_back(map[o]);
  out.set_outputs(std::move(outputs));
  return out;
}

Circuit power_sum(std::size_t n, std::uint64_t d) {
  if (n == 0) throw ArgumentError("power_sum needs at least one variable");
  if (d == 0) throw ArgumentError("power_sum needs d >= 1; build a constant circuit for d = 0");
  Circuit c(n);
  GateId sum = c.input(0);
  for (std::uint32_t i = 1; i < n; ++i) sum = c.add(sum, c.input(i));
  GateId acc = sum;
  for (int bit = std::bit_width(d) - 2; bit >= 0; --bit) {
    acc = c.mul(acc, acc);
    if ((d >> bit) & 1) acc = c.mul(acc, sum);
  }
  c.add_output(acc);
  return c;
}

Circuit constant_circuit(std::size_t n_inputs, const EpsSeries& value) {
  Circuit c(n_inputs);
  c.add_output(c.constant(value));
  return c;
}

Circuit projection_circuit(std::size_t n_inputs, std::uint32_t var) {
  Circuit c(n_inputs);
  c.add_output(c.input(var));
  return c;
}

Circuit difference(const Circuit& a, const Circuit& b) {
  a.check();
  b.check();
  if (a.n_inputs() != b.n_inputs() || a.outputs().size() != b.outputs().size()) {
    throw ArgumentError("difference needs circuits with matching inputs and outputs");
  }
  Circuit out(a.n_inputs(), a.gates(), {});
  const auto offset = static_cast<GateId>(a.gates().size());
  for (Gate g : b.gates()) {
    if (g.kind == GateKind::kAdd || g.kind == GateKind::kMul) {
      g.left += offset;
      g.right += offset;
    }
    switch (g.kind) {
      case GateKind::kInput:
        out.input(g.var);
        break;
      case GateKind::kConst:
        out.constant(g.value);
        break;
      case GateKind::kAdd:
        out.add(g.left, g.right, g.alpha, g.beta);
        break;
      case GateKind::kMul:
        out.mul(g.left, g.right, g.alpha, g.beta);
        break;
    }
  }
  std::vector<GateId> outputs;
  for (std::size_t k = 0; k < a.outputs().size(); ++k) {
    outputs.push_back(out.add(a.outputs()[k], b.outputs()[k] + offset, EpsSeries{Scalar(1)},
                              EpsSeries{Scalar(-1)}));
  }
  out.set_outputs(std::move(outputs));
  return out;
}

}  // namespace hsg
