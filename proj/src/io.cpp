#include "hsg/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace hsg {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
  std::string_view body;  // comment stripped
};

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v'; }

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}, raw};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && is_space(raw[i])) ++i;
      const std::size_t j = i;
      while (i < raw.size() && !is_space(raw[i])) ++i;
      if (i > j) line.tokens.push_back(raw.substr(j, i - j));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::size_t last_line(std::string_view text) {
  std::size_t n = 1;
  for (char ch : text) n += ch == '\n';
  return n;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  }
  return v;
}

/// `<prefix><digits>`, e.g. g12 or M3.
std::uint64_t parse_id(std::string_view tok, char prefix, std::size_t line) {
  if (tok.size() < 2 || tok[0] != prefix) {
    throw ParseError(line, std::string("expected ") + prefix + "<index>, got '" + std::string(tok) + "'");
  }
  return parse_uint(tok.substr(1), line, "an index");
}

EpsSeries parse_literal(std::string_view tok, std::size_t line) {
  try {
    return parse_series(tok);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

Scalar parse_scalar(std::string_view tok, std::size_t line) {
  try {
    return Scalar::parse(tok);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

std::uint32_t checked_u32(std::uint64_t v, std::size_t line) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ParseError(line, "index out of range");
  return static_cast<std::uint32_t>(v);
}

AffineForm parse_affine(std::string_view text, std::size_t n_vars, std::size_t line) {
  AffineForm form;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && is_space(text[i])) ++i;
  };
  bool first = true;
  skip();
  if (i == text.size()) throw ParseError(line, "missing affine form after '='");
  while (i < text.size()) {
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
      negative = text[i] == '-';
      ++i;
      skip();
    } else if (!first) {
      throw ParseError(line, "expected '+' or '-' between terms");
    }
    const std::size_t j = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != '+' && text[i] != '-') ++i;
    const std::string_view term = text.substr(j, i - j);
    if (term.empty()) throw ParseError(line, "empty term in affine form");
    Scalar coeff(1);
    std::string_view var;
    if (const auto star = term.find('*'); star != std::string_view::npos) {
      coeff = parse_scalar(term.substr(0, star), line);
      var = term.substr(star + 1);
      if (var.empty() || var[0] != 'x') throw ParseError(line, "expected x<j> after '*' in '" + std::string(term) + "'");
    } else if (term[0] == 'x') {
      var = term;
    } else {
      coeff = parse_scalar(term, line);
    }
    if (negative) coeff = -coeff;
    if (var.empty()) {
      form.add_constant(coeff);
    } else {
      const auto v = parse_id(var, 'x', line);
      if (v >= n_vars) {
        throw ParseError(line, "x" + std::to_string(v) + " is outside nvars " + std::to_string(n_vars));
      }
      form.add_term(static_cast<std::uint32_t>(v), coeff);
    }
    first = false;
    skip();
  }
  return form;
}

constexpr std::uint64_t kMaxEntries = 10'000'000;

void expect_arity(const Line& l, std::size_t n, const char* usage) {
  if (l.tokens.size() != n) throw ParseError(l.number, std::string("expected '") + usage + "'");
}

}  // namespace

std::string series_literal(const EpsSeries& s) { return s.resized(s.significant_order()).to_string(); }

Circuit parse_acir(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<std::uint64_t> declared;
  std::uint64_t inferred = 0;
  std::vector<Gate> gates;
  std::vector<GateId> outputs;
  bool seen_output = false;

  for (const Line& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "ninputs") {
      expect_arity(l, 2, "ninputs <n>");
      if (declared) throw ParseError(l.number, "duplicate ninputs line");
      if (!gates.empty() || seen_output) throw ParseError(l.number, "ninputs must precede the gates");
      declared = parse_uint(t[1], l.number, "an input count");
      if (*declared > std::numeric_limits<std::uint32_t>::max()) throw ParseError(l.number, "too many inputs");
      continue;
    }
    if (t[0] == "output") {
      if (t.size() < 2) throw ParseError(l.number, "output line lists no gates");
      for (std::size_t i = 1; i < t.size(); ++i) {
        const auto g = parse_id(t[i], 'g', l.number);
        if (g >= gates.size()) {
          throw ParseError(l.number, "output g" + std::to_string(g) + " refers to an undefined gate");
        }
        outputs.push_back(static_cast<GateId>(g));
      }
      seen_output = true;
      continue;
    }
    const auto id = parse_id(t[0], 'g', l.number);
    if (id != gates.size()) {
      throw ParseError(l.number, "gate ids must be dense and ascending: expected g" + std::to_string(gates.size()) +
                                     ", got " + std::string(t[0]));
    }
    if (t.size() < 2) throw ParseError(l.number, "missing gate kind");
    Gate g;
    if (t[1] == "input") {
      expect_arity(l, 3, "g<k> input <var>");
      g.kind = GateKind::kInput;
      const auto var = parse_uint(t[2], l.number, "a variable index");
      if (declared && var >= *declared) {
        throw ParseError(l.number, "input variable " + std::to_string(var) + " is outside ninputs " +
                                       std::to_string(*declared));
      }
      g.var = checked_u32(var, l.number);
      inferred = std::max<std::uint64_t>(inferred, var + 1);
    } else if (t[1] == "const") {
      expect_arity(l, 3, "g<k> const <scalar>");
      g.kind = GateKind::kConst;
      g.value = parse_literal(t[2], l.number);
    } else if (t[1] == "add" || t[1] == "mul") {
      if (t.size() != 4 && t.size() != 6) throw ParseError(l.number, "expected 'g<k> " + std::string(t[1]) + " g<i> g<j> [<alpha> <beta>]'");
      g.kind = t[1] == "add" ? GateKind::kAdd : GateKind::kMul;
      for (int side = 0; side < 2; ++side) {
        const auto op = parse_id(t[2 + side], 'g', l.number);
        if (op >= id) {
          throw ParseError(l.number, "operand g" + std::to_string(op) + " does not precede g" + std::to_string(id) +
                                         " (forward reference or cycle)");
        }
        (side == 0 ? g.left : g.right) = static_cast<GateId>(op);
      }
      if (t.size() == 6) {
        g.alpha = parse_literal(t[4], l.number);
        g.beta = parse_literal(t[5], l.number);
      }
    } else {
      throw ParseError(l.number, "unknown gate kind '" + std::string(t[1]) + "'");
    }
    gates.push_back(std::move(g));
  }
  if (!seen_output) throw ParseError(last_line(text), "missing output line");
  Circuit c(declared.value_or(inferred), std::move(gates), std::move(outputs));
  if (auto problem = c.validate()) throw ParseError(last_line(text), *problem);
  return c;
}

std::string serialize_acir(const Circuit& c) {
  std::ostringstream out;
  out << "ninputs " << c.n_inputs() << '\n';
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    out << 'g' << i << ' ';
    switch (g.kind) {
      case GateKind::kInput:
        out << "input " << g.var;
        break;
      case GateKind::kConst:
        out << "const " << series_literal(g.value);
        break;
      case GateKind::kAdd:
      case GateKind::kMul:
        out << (g.kind == GateKind::kAdd ? "add g" : "mul g") << g.left << " g" << g.right;
        if (!(is_unit_constant(g.alpha) && is_unit_constant(g.beta))) {
          out << ' ' << series_literal(g.alpha) << ' ' << series_literal(g.beta);
        }
        break;
    }
    out << '\n';
  }
  out << "output";
  for (GateId o : c.outputs()) out << " g" << o;
  out << '\n';
  return out.str();
}

TraceAbp parse_tabp(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<std::size_t> dims;
  std::optional<std::uint64_t> n_vars;
  std::vector<Matrix<AffineForm>> matrices;
  std::vector<std::vector<bool>> seen;

  for (const Line& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "dims") {
      if (!dims.empty()) throw ParseError(l.number, "duplicate dims line");
      if (t.size() < 3) throw ParseError(l.number, "dims needs at least two layer sizes");
      for (std::size_t i = 1; i < t.size(); ++i) {
        const auto d = parse_uint(t[i], l.number, "a layer size");
        if (d == 0 || d > kMaxEntries) throw ParseError(l.number, "layer size out of range");
        dims.push_back(static_cast<std::size_t>(d));
      }
      for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        if (dims[i] * dims[i + 1] > kMaxEntries) throw ParseError(l.number, "matrix too large");
        matrices.emplace_back(dims[i], dims[i + 1]);
        seen.emplace_back(dims[i] * dims[i + 1], false);
      }
      continue;
    }
    if (t[0] == "nvars") {
      expect_arity(l, 2, "nvars <v>");
      if (n_vars) throw ParseError(l.number, "duplicate nvars line");
      n_vars = parse_uint(t[1], l.number, "a variable count");
      continue;
    }
    if (dims.empty() || !n_vars) throw ParseError(l.number, "dims and nvars must precede the entries");
    if (t.size() < 5 || t[3] != "=") throw ParseError(l.number, "expected 'M<i> <row> <col> = <affine>'");
    const auto i = parse_id(t[0], 'M', l.number);
    if (i >= matrices.size()) throw ParseError(l.number, "no matrix " + std::string(t[0]));
    const auto row = parse_uint(t[1], l.number, "a row index");
    const auto col = parse_uint(t[2], l.number, "a column index");
    auto& m = matrices[i];
    if (row >= m.rows || col >= m.cols) throw ParseError(l.number, "entry outside the matrix");
    const std::size_t slot = row * m.cols + col;
    if (seen[i][slot]) throw ParseError(l.number, "duplicate entry");
    seen[i][slot] = true;
    const std::string_view body = l.body.substr(l.body.find('=') + 1);
    m(row, col) = parse_affine(body, *n_vars, l.number);
  }
  if (dims.empty()) throw ParseError(last_line(text), "missing dims line");
  if (!n_vars) throw ParseError(last_line(text), "missing nvars line");
  try {
    return TraceAbp(dims, std::move(matrices), *n_vars);
  } catch (const Error& e) {
    throw ParseError(last_line(text), e.what());
  }
}

std::string serialize_tabp(const TraceAbp& a) {
  std::ostringstream out;
  out << "dims";
  for (auto d : a.dims()) out << ' ' << d;
  out << "\nnvars " << a.n_vars() << '\n';
  for (std::size_t i = 0; i < a.matrices().size(); ++i) {
    const auto& m = a.matrices()[i];
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        if (!m(r, c).is_zero()) out << 'M' << i << ' ' << r << ' ' << c << " = " << m(r, c).to_string() << '\n';
      }
    }
  }
  return out.str();
}

Decomposition parse_dec(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<TensorShape> shape;
  std::optional<std::uint64_t> count;
  Decomposition d;
  std::size_t next_block = 0;  // 0 = u, 1 = v, 2 = w
  static constexpr const char* kLabels[] = {"u:", "v:", "w:"};

  for (const Line& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "tensor") {
      expect_arity(l, 4, "tensor <n> <m> <p>");
      if (shape) throw ParseError(l.number, "duplicate tensor line");
      std::uint64_t v[3];
      for (int i = 0; i < 3; ++i) {
        v[i] = parse_uint(t[1 + i], l.number, "a dimension");
        if (v[i] == 0 || v[i] > 1000) throw ParseError(l.number, "dimension out of range");
      }
      shape = TensorShape{v[0], v[1], v[2]};
      if (shape->x_count() > kMaxEntries || shape->y_count() > kMaxEntries || shape->z_count() > kMaxEntries) {
        throw ParseError(l.number, "tensor too large");
      }
      continue;
    }
    if (t[0] == "terms") {
      expect_arity(l, 2, "terms <r>");
      if (!shape) throw ParseError(l.number, "tensor line must come first");
      if (count) throw ParseError(l.number, "duplicate terms line");
      count = parse_uint(t[1], l.number, "a term count");
      continue;
    }
    if (!shape || !count) throw ParseError(l.number, "tensor and terms must precede the forms");
    if (t[0] != kLabels[next_block]) {
      throw ParseError(l.number, std::string("expected '") + kLabels[next_block] + "', got '" + std::string(t[0]) + "'");
    }
    if (next_block == 0 && d.terms.size() == *count) throw ParseError(l.number, "more terms than declared");
    const std::size_t want = next_block == 0 ? shape->x_count() : next_block == 1 ? shape->y_count() : shape->z_count();
    if (t.size() - 1 != want) {
      throw ParseError(l.number, std::string(kLabels[next_block]) + " needs " + std::to_string(want) +
                                     " coefficients, got " + std::to_string(t.size() - 1));
    }
    std::vector<EpsSeries> form;
    form.reserve(want);
    for (std::size_t i = 1; i < t.size(); ++i) form.push_back(parse_literal(t[i], l.number));
    if (next_block == 0) d.terms.emplace_back();
    auto& term = d.terms.back();
    (next_block == 0 ? term.u : next_block == 1 ? term.v : term.w) = std::move(form);
    next_block = (next_block + 1) % 3;
  }
  if (!shape) throw ParseError(last_line(text), "missing tensor line");
  if (!count) throw ParseError(last_line(text), "missing terms line");
  if (next_block != 0 || d.terms.size() != *count) {
    throw ParseError(last_line(text), "expected " + std::to_string(*count) + " complete terms, got " +
                                          std::to_string(d.terms.size()) + (next_block ? " and a partial one" : ""));
  }
  d.shape = *shape;
  return d;
}

std::string serialize_dec(const Decomposition& d) {
  std::ostringstream out;
  out << "tensor " << d.shape.n << ' ' << d.shape.m << ' ' << d.shape.p << '\n';
  out << "terms " << d.terms.size() << '\n';
  for (const auto& term : d.terms) {
    const char* labels[] = {"u:", "v:", "w:"};
    const std::vector<EpsSeries>* forms[] = {&term.u, &term.v, &term.w};
    for (int b = 0; b < 3; ++b) {
      out << labels[b];
      for (const auto& c : *forms[b]) out << ' ' << series_literal(c);
      out << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hsg
