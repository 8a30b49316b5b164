#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>
#include <sstream>

#include "hsg/io.hpp"
#include "test_support.hpp"

using namespace hsg;
using namespace hsg::testing;

namespace {

const std::filesystem::path kFixtures = HSG_FIXTURE_DIR;

std::vector<std::filesystem::path> fixtures(const std::string& ext) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(kFixtures)) {
    if (e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> w;
  for (std::string t; in >> t;) w.push_back(t);
  return w;
}

// Small-integer literal normalization, independent of the library parser.
std::string normalize_rational(std::string t) {
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  const auto slash = t.find('/');
  long long num = std::stoll(t.substr(0, slash));
  long long den = slash == std::string::npos ? 1 : std::stoll(t.substr(slash + 1));
  const long long g = std::gcd(num, den);
  num /= g;
  den /= g;
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string normalize_literal(const std::string& t) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto semi = t.find(';', start);
    parts.push_back(normalize_rational(t.substr(start, semi == std::string::npos ? std::string::npos : semi - start)));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  while (parts.size() > 1 && parts.back() == "0") parts.pop_back();
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ";" : "") + parts[i];
  return out;
}

std::string canonical_acir(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> body;
  std::vector<std::string> outputs;
  std::string ninputs;
  long long max_var = -1;
  for (std::string line; std::getline(in, line);) {
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "ninputs") {
      ninputs = w[1];
      continue;
    }
    if (w[0] == "output") {
      outputs.insert(outputs.end(), w.begin() + 1, w.end());
      continue;
    }
    if (w[1] == "input") max_var = std::max(max_var, std::stoll(w[2]));
    if (w[1] == "const") w[2] = normalize_literal(w[2]);
    if (w.size() == 6) {
      w[4] = normalize_literal(w[4]);
      w[5] = normalize_literal(w[5]);
      if (w[4] == "1" && w[5] == "1") w.resize(4);
    }
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
    body.push_back(s);
  }
  if (ninputs.empty()) ninputs = std::to_string(max_var + 1);
  std::string out = "ninputs " + ninputs + "\n";
  for (const auto& s : body) out += s + "\n";
  out += "output";
  for (const auto& o : outputs) out += " " + o;
  return out + "\n";
}

bool same_circuit(const Circuit& a, const Circuit& b) {
  if (a.n_inputs() != b.n_inputs() || a.outputs() != b.outputs() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Gate& x = a.gates()[i];
    const Gate& y = b.gates()[i];
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case GateKind::kInput:
        if (x.var != y.var) return false;
        break;
      case GateKind::kConst:
        if (!(x.value.resized(4) == y.value.resized(4))) return false;
        break;
      default:
        if (x.left != y.left || x.right != y.right || !(x.alpha.resized(4) == y.alpha.resized(4)) ||
            !(x.beta.resized(4) == y.beta.resized(4)))
          return false;
    }
  }
  return true;
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Acir, MinimalFile) {
  const auto c = parse_acir("g0 input 0\noutput g0\n");
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.n_inputs(), 1u);
  EXPECT_EQ(c.outputs(), std::vector<GateId>{0});
}

TEST(Acir, ForwardReferenceNamesLine) {
  const std::string text = "ninputs 2\ng0 input 0\n# comment\ng1 add g0 g2\ng2 input 1\noutput g1\n";
  EXPECT_EQ(parse_error_line([&] { parse_acir(text); }), 4u);
  EXPECT_EQ(parse_error_line([&] { parse_acir("ninputs 1\ng0 input 0\ng1 mul g1 g0\noutput g1\n"); }), 3u);
}

TEST(Acir, Diagnostics) {
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 input 0\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng1 input 0\noutput g1\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 input 1\noutput g0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 const 1/0\noutput g0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 const abc\noutput g0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 div g0 g0\noutput g0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\ng0 input 0\ng1 add g0 g0 2\noutput g1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs 1\nninputs 1\ng0 input 0\noutput g0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("g0 input 0\noutput g3\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("g0 input 0\noutput\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse_acir("ninputs -1\ng0 input 0\noutput g0\n"); }), 1u);
}

TEST(Acir, FixtureRoundTrip) {
  const auto files = fixtures(".acir");
  ASSERT_EQ(files.size(), 20u);
  for (const auto& f : files) {
    const std::string text = read_text_file(f.string());
    const Circuit c = parse_acir(text);
    const std::string out = serialize_acir(c);
    EXPECT_EQ(out, canonical_acir(text)) << f;
    EXPECT_EQ(serialize_acir(parse_acir(out)), out) << f;
  }
}

TEST(Acir, RandomCircuitRoundTrip) {
  auto rng = stream_rng(41, 0);
  for (int t = 0; t < 100; ++t) {
    const auto c = random_circuit(rng, 1 + t % 6, 20);
    const auto back = parse_acir(serialize_acir(c));
    EXPECT_TRUE(same_circuit(c, back));
  }
  const auto g = baur_strassen(power_sum(3, 5));
  EXPECT_TRUE(same_circuit(g, parse_acir(serialize_acir(g))));
}

TEST(Acir, BorderFixtureKeepsEps) {
  const auto c = parse_acir(read_text_file((kFixtures / "c03_border.acir").string()));
  EXPECT_TRUE(c.has_eps_constants());
  EXPECT_EQ(evaluate(c.at_eps_zero(), std::vector<Scalar>{Scalar(5), Scalar(7)})[0], Scalar(7));
}

TEST(Dec, Fixtures) {
  const auto t = parse_dec(read_text_file((kFixtures / "trivial111.dec").string()));
  EXPECT_EQ(t.rank(), 1u);
  EXPECT_EQ(verify_decomposition(t, mm_tensor(1, 1, 1)).status, DecompositionStatus::kExact);

  const auto s = parse_dec(read_text_file((kFixtures / "strassen.dec").string()));
  EXPECT_EQ(s.rank(), 7u);
  EXPECT_EQ(verify_decomposition(s, mm_tensor(2, 2, 2)).status, DecompositionStatus::kExact);
  EXPECT_EQ(serialize_dec(s), serialize_dec(strassen_decomposition()));

  const auto b = parse_dec(read_text_file((kFixtures / "border111.dec").string()));
  EXPECT_EQ(b.order(), 3u);
  EXPECT_EQ(verify_decomposition(b, mm_tensor(1, 1, 1)).status, DecompositionStatus::kBorder);
}

TEST(Dec, RoundTrip) {
  for (const auto& f : fixtures(".dec")) {
    const auto d = parse_dec(read_text_file(f.string()));
    const auto text = serialize_dec(d);
    EXPECT_EQ(serialize_dec(parse_dec(text)), text) << f;
  }
  const auto d = trivial_decomposition(2, 3, 1);
  EXPECT_EQ(serialize_dec(parse_dec(serialize_dec(d))), serialize_dec(d));
}

TEST(Dec, Diagnostics) {
  EXPECT_EQ(parse_error_line([] { parse_dec("tensor 1 1 1\nterms 1\nu: 1\nv: 1x\nw: 1\n"); }), 4u);
  EXPECT_EQ(parse_error_line([] { parse_dec("tensor 1 1 1\nterms 1\nu: 1 2\nv: 1\nw: 1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_dec("tensor 1 1 1\nterms 1\nv: 1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_dec("tensor 1 1 1\nterms 2\nu: 1\nv: 1\nw: 1\n"); }), 6u);
  EXPECT_EQ(parse_error_line([] { parse_dec("tensor 1 0 1\nterms 0\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { parse_dec("terms 1\n"); }), 1u);
}

TEST(Tabp, Fixtures) {
  const auto a = parse_tabp(read_text_file((kFixtures / "tr_xy.tabp").string()));
  EXPECT_EQ(a.dims(), (std::vector<std::size_t>{2, 2, 2}));
  auto rng = stream_rng(42, 0);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_fp_point(rng, 8);
    const Scalar expected = x[0] * x[4] + x[1] * x[6] + x[2] * x[5] + x[3] * x[7];
    EXPECT_EQ(a.evaluate(x), expected);
  }
  const auto b = parse_tabp(read_text_file((kFixtures / "affine.tabp").string()));
  // (1 + 2 x0 - x2) * 3 + (-1/2 x1) * (x0 + x1)
  const std::vector<Scalar> p{Scalar(2), Scalar(4), Scalar(6)};
  EXPECT_EQ(b.evaluate(p), Scalar(3 * (1 + 4 - 6) - 2 * 6));
}

TEST(Tabp, RoundTrip) {
  for (const auto& f : fixtures(".tabp")) {
    const auto a = parse_tabp(read_text_file(f.string()));
    const auto text = serialize_tabp(a);
    EXPECT_EQ(serialize_tabp(parse_tabp(text)), text) << f;
  }
  auto rng = stream_rng(43, 0);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_trace_abp(rng, 3, 4, 5);
    const auto back = parse_tabp(serialize_tabp(a));
    const auto x = random_fp_point(rng, a.n_vars());
    EXPECT_EQ(back.evaluate(x), a.evaluate(x));
    EXPECT_EQ(serialize_tabp(back), serialize_tabp(a));
  }
}

TEST(Tabp, Diagnostics) {
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 0 0 = 2*y0\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 0 0 = x1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 0 0 = x0 x0\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 1 0 = 1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 0 0 = 1\nM0 0 0 = 2\n"); }), 4u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM1 0 0 = 1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("M0 0 0 = 1\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { parse_tabp("dims 1 1\nnvars 1\nM0 0 0 =\n"); }), 3u);
  EXPECT_NE(parse_error_line([] { parse_tabp("dims 1 2\nnvars 1\n"); }), 0u);
}

TEST(Fuzz, MutatedFixturesAlwaysDiagnose) {
  std::vector<std::pair<std::string, std::string>> corpus;
  for (const auto* ext : {".acir", ".dec", ".tabp"}) {
    for (const auto& f : fixtures(ext)) corpus.emplace_back(ext, read_text_file(f.string()));
  }
  const std::string alphabet = "g0123456789 -+/;*#=\nxMuvw:inputconstaddmuloutputdimsnvarstensorterms";
  auto rng = stream_rng(44, 0);
  int diagnosed = 0;
  int accepted = 0;
  for (int t = 0; t < 3000; ++t) {
    const auto& [ext, base] = corpus[static_cast<std::size_t>(t) % corpus.size()];
    std::string text = base;
    const int edits = 1 + t % 4;
    for (int e = 0; e < edits; ++e) {
      std::uniform_int_distribution<std::size_t> pos(0, text.size());
      const std::size_t at = pos(rng);
      switch (rng() % 4) {
        case 0:
          if (at < text.size()) text.erase(at, 1 + rng() % 3);
          break;
        case 1:
          text.insert(at, 1, alphabet[rng() % alphabet.size()]);
          break;
        case 2:
          if (at < text.size()) text[at] = alphabet[rng() % alphabet.size()];
          break;
        default: {
          // Duplicate a line.
          const auto nl = text.find('\n', at);
          const auto begin = text.rfind('\n', at == 0 ? 0 : at - 1);
          const std::size_t b = begin == std::string::npos ? 0 : begin + 1;
          if (nl != std::string::npos && nl > b) text.insert(nl + 1, text.substr(b, nl - b + 1));
        }
      }
    }
    try {
      if (ext == ".acir") {
        const auto c = parse_acir(text);
        EXPECT_FALSE(c.validate());
      } else if (ext == ".dec") {
        parse_dec(text);
      } else {
        parse_tabp(text);
      }
      ++accepted;
    } catch (const ParseError& e) {
      EXPECT_GT(e.line(), 0u);
      ++diagnosed;
    } catch (const std::exception& e) {
      ADD_FAILURE() << "non-diagnostic exception: " << e.what() << "\n" << text;
    }
  }
  EXPECT_GT(diagnosed, 0);
  EXPECT_GT(accepted, 0);
}
