// hsgtool: command-line front end for the hsg library.
//
// Reports are plain key: value lines. Exit codes: 0 for ZERO / pass,
// 1 for NONZERO / fail, 2 for usage and input errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hsg/abp.hpp"
#include "hsg/circuit.hpp"
#include "hsg/cyclecover.hpp"
#include "hsg/io.hpp"
#include "hsg/mmtensor.hpp"
#include "hsg/pitgen.hpp"
#include "hsg/random.hpp"

namespace {

using namespace hsg;

constexpr const char* kVersion = "hsgtool 0.3.0";

class Report {
 public:
  template <class V>
  Report& add(const std::string& key, const V& value) {
    std::ostringstream s;
    s << value;
    lines_.emplace_back(key, s.str());
    return *this;
  }
  Report& add(const std::string& key, bool value) { return add(key, value ? "true" : "false"); }

  void print(std::ostream& out) const {
    for (const auto& [k, v] : lines_) out << k << ": " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? sep : "") << v[i];
  return s.str();
}

std::string join_scalars(const std::vector<Scalar>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].to_string();
  return s;
}

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(name);
    return x;
  } catch (const std::exception&) {
    throw ArgumentError(std::string("environment variable ") + name + " is not an unsigned integer");
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

struct Options {
  int jobs = 0;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  std::uint64_t trials = 20;
  std::string circuit;
  std::string output;
  // pit
  std::uint64_t n = 0;
  std::uint64_t s = 0;
  std::string mode = "det";
  std::optional<std::uint64_t> rank;
  std::uint64_t r = 0;
  // lemma31
  std::vector<std::size_t> dims;
  std::vector<std::size_t> sigma;
  bool symbolic = false;
  bool unscaled = false;
  std::uint64_t lemma_trials = 100;
  // tensor / abp
  std::string dec;
  std::string tabp;
  std::uint64_t points = 100;
};

void check_prime(std::uint64_t p) {
  if (!is_prime_u64(p)) throw ArgumentError(std::to_string(p) + " is not prime");
}

int cmd_pit_params(const Options& o) {
  const auto p = params_for(o.n, o.s);
  Report r;
  r.add("command", "pit params").add("n", p.n).add("s", p.s).add("sqrt_n", p.sqrt_n).add("padding", p.padding);
  r.add("k", p.k).add("r", p.r).add("rank_used", p.rank_used).add("seed_length", p.seed_length);
  r.add("stated_bound", p.stated_bound).add("generator_degree", p.generator_degree).add("nontrivial", p.nontrivial);
  r.print(std::cout);
  return 0;
}

int cmd_pit_check(const Options& o) {
  const Circuit c = parse_acir(read_text_file(o.circuit));
  Report r;
  r.add("command", "pit check").add("circuit", o.circuit).add("s", o.s);
  RandomPitConfig rc{o.trials, o.prime, o.seed, o.jobs};
  if (o.mode == "direct") {
    check_prime(o.prime);
    const auto rep = pit_randomized(c, rc);
    r.add("mode", "direct").add("prime", o.prime).add("seed", o.seed).add("trials", o.trials);
    r.add("degree_bound", rep.degree_bound).add("error_bound", rep.error_bound);
    r.add("verdict", to_string(rep.verdict));
    if (rep.witness_trial) r.add("witness_trial", *rep.witness_trial).add("witness", join_scalars(rep.witness));
    r.print(std::cout);
    return rep.verdict == PitVerdict::kNonzero ? 1 : 0;
  }
  DeterministicPitConfig cfg;
  cfg.s_budget = o.s;
  cfg.mode = o.mode == "det" ? PitMode::kGrid : PitMode::kComposeThenRandom;
  cfg.rank = o.rank;
  cfg.budget = o.budget;
  cfg.random = rc;
  if (cfg.mode == PitMode::kComposeThenRandom) check_prime(o.prime);
  const auto rep = pit_deterministic(c, cfg);
  r.add("mode", to_string(rep.mode)).add("n", c.n_inputs()).add("k", rep.params.k).add("r", rep.params.r);
  r.add("rank_used", rep.rank_used).add("seed_length", rep.seed_length).add("degree_bound", rep.degree_bound);
  r.add("composed_degree_bound", rep.composed_degree_bound);
  if (rep.mode == PitMode::kGrid) {
    r.add("budget", o.budget).add("grid_values", rep.grid_values).add("points", rep.points);
  } else {
    r.add("prime", o.prime).add("seed", o.seed).add("trials", o.trials).add("error_bound", rep.random->error_bound);
  }
  r.add("verdict", to_string(rep.verdict));
  if (!rep.witness.empty()) r.add("witness", join_scalars(rep.witness));
  r.print(std::cout);
  return rep.verdict == PitVerdict::kNonzero ? 1 : 0;
}

int cmd_pit_compose(const Options& o) {
  const Circuit c = parse_acir(read_text_file(o.circuit));
  const std::size_t rank = static_cast<std::size_t>(*o.rank);
  const Circuit g = compose_with_generator(c, rank);
  write_text(o.output, serialize_acir(g));
  if (o.output == "-") return 0;
  Report r;
  r.add("command", "pit compose").add("circuit", o.circuit).add("rank", rank);
  r.add("rank_used", std::min<std::uint64_t>(rank, ceil_sqrt(c.n_inputs()))).add("seed_length", g.n_inputs());
  r.add("degree_bound", c.max_degree_bound()).add("composed_degree_bound", g.max_degree_bound());
  r.add("output", o.output);
  r.print(std::cout);
  return 0;
}

int cmd_pit_ideal(const Options& o) {
  check_prime(o.prime);
  const Circuit c = parse_acir(read_text_file(o.circuit));
  const auto rep = ideal_membership_probabilistic(c, o.r, {o.trials, o.prime, o.seed, o.jobs});
  Report r;
  r.add("command", "pit ideal").add("circuit", o.circuit).add("r", o.r).add("rank_used", rep.rank_used);
  r.add("prime", o.prime).add("seed", o.seed).add("trials", o.trials).add("error_bound", rep.random.error_bound);
  r.add("verdict", to_string(rep.verdict));
  if (rep.random.witness_trial) r.add("witness", join_scalars(rep.random.witness));
  r.print(std::cout);
  return rep.verdict == IdealVerdict::kNotInIdeal ? 1 : 0;
}

int cmd_lemma31(const Options& o) {
  check_prime(o.prime);
  ProjectionCheck check{o.dims, o.sigma, static_cast<std::size_t>(o.lemma_trials), o.prime, o.seed, !o.unscaled, o.jobs};
  const auto rep = verify_projection_identity(check);
  Report r;
  r.add("command", "lemma31 verify").add("dims", join(o.dims)).add("sigma", join(o.sigma));
  r.add("scaling", o.unscaled ? "off" : "on").add("K", 2).add("prime", o.prime).add("seed", o.seed);
  r.add("trials", rep.trials).add("matrix_size", rep.matrix_size).add("constant_term_one", rep.constant_term_one);
  bool pass = rep.pass;
  r.add("randomized", rep.pass ? "pass" : "fail");
  if (rep.counterexample) {
    const auto& ce = *rep.counterexample;
    r.add("counterexample_trial", ce.trial).add("counterexample_assignment", join(ce.assignment));
    r.add("counterexample_got", ce.got).add("counterexample_expected", ce.expected);
  }
  if (o.symbolic) {
    const auto sym = verify_projection_identity_symbolic(o.dims, MinorSequence(o.sigma), !o.unscaled);
    r.add("symbolic", sym.pass ? "pass" : "fail");
    if (!sym.pass) r.add("symbolic_product", sym.product.to_string()).add("symbolic_target", sym.target.to_string());
    pass = pass && sym.pass;
  }
  r.add("result", pass ? "pass" : "fail");
  r.print(std::cout);
  return pass ? 0 : 1;
}

int cmd_tensor_verify(const Options& o) {
  const Decomposition d = parse_dec(read_text_file(o.dec));
  const auto v = verify_decomposition(d, mm_tensor(d.shape.n, d.shape.m, d.shape.p), o.jobs);
  Report r;
  r.add("command", "tensor verify").add("decomposition", o.dec).add("tensor", d.shape.to_string());
  r.add("terms", d.rank()).add("K", d.order()).add("status", to_string(v.status));
  if (v.witness) {
    r.add("witness", "(" + std::to_string(v.witness->a) + "," + std::to_string(v.witness->b) + "," +
                         std::to_string(v.witness->c) + ")");
    r.add("expected", v.witness->expected.to_string()).add("got", v.witness->got);
  }
  r.print(std::cout);
  return v.status == DecompositionStatus::kFail ? 1 : 0;
}

int cmd_tensor_circuit(const Options& o) {
  const Decomposition d = parse_dec(read_text_file(o.dec));
  const Circuit c = decomposition_to_circuit(d);
  write_text(o.output, serialize_acir(c));
  if (o.output == "-") return 0;
  Report r;
  r.add("command", "tensor circuit").add("decomposition", o.dec).add("tensor", d.shape.to_string());
  r.add("terms", d.rank()).add("mult_complexity", c.mult_complexity()).add("gates", c.size()).add("output", o.output);
  r.print(std::cout);
  return 0;
}

int cmd_tensor_polarize(const Options& o) {
  const Circuit c = parse_acir(read_text_file(o.circuit));
  TensorShape shape{o.dims.at(0), o.dims.at(1), o.dims.at(2)};
  const auto program = extract_bilinear(c, shape);
  const Decomposition d = bilinear_to_decomposition(program);
  write_text(o.output, serialize_dec(d));
  if (o.output == "-") return 0;
  Report r;
  r.add("command", "tensor polarize").add("circuit", o.circuit).add("tensor", shape.to_string());
  r.add("products", program.products.size()).add("terms", d.rank()).add("output", o.output);
  r.print(std::cout);
  return 0;
}

int cmd_abp_simulate(const Options& o) {
  check_prime(o.prime);
  const TraceAbp t = parse_tabp(read_text_file(o.tabp));
  const Abp a = trace_to_abp(t);
  std::size_t agree = 0;
  for (std::uint64_t i = 0; i < o.points; ++i) {
    Rng rng = stream_rng(o.seed, i);
    std::vector<Scalar> x;
    for (std::size_t v = 0; v < t.n_vars(); ++v) x.emplace_back(uniform_fp(rng, o.prime));
    agree += t.evaluate(x) == a.evaluate(x);
  }
  const std::size_t w = t.width();
  const std::size_t s = t.size();
  const bool ok = agree == o.points && a.size() <= w * s && a.width() <= w * w;
  if (!o.output.empty()) write_text(o.output, serialize_tabp(a.program()));
  Report r;
  r.add("command", "abp simulate").add("program", o.tabp).add("prime", o.prime).add("seed", o.seed);
  r.add("trace_size", s).add("trace_width", w).add("abp_size", a.size()).add("abp_width", a.width());
  r.add("size_bound", w * s).add("width_bound", w * w).add("points", o.points).add("agreeing_points", agree);
  r.add("result", ok ? "pass" : "fail");
  r.print(std::cout);
  return ok ? 0 : 1;
}

int cmd_circuit_info(const Options& o) {
  const Circuit c = parse_acir(read_text_file(o.circuit));
  Report r;
  r.add("command", "circuit info").add("circuit", o.circuit).add("inputs", c.n_inputs()).add("gates", c.size());
  r.add("outputs", c.outputs().size()).add("mult_complexity", c.mult_complexity());
  r.add("degree_bound", join(c.degree_bound())).add("eps_constants", c.has_eps_constants());
  r.print(std::cout);
  return 0;
}

int cmd_circuit_grad(const Options& o) {
  const Circuit c = parse_acir(read_text_file(o.circuit));
  const Circuit g = baur_strassen(c);
  write_text(o.output, serialize_acir(g));
  if (o.output == "-") return 0;
  Report r;
  r.add("command", "circuit grad").add("circuit", o.circuit).add("mult_complexity", c.mult_complexity());
  r.add("grad_mult_complexity", g.mult_complexity()).add("bound", 3 * c.mult_complexity()).add("output", o.output);
  r.print(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hitting-set generator and proof-chain verifier for low multiplicative complexity circuits"};
  app.set_version_flag("--version",
                       std::string(kVersion) + "\nlower bound: LM18, brank(<k,k,k>) >= 2k^2 - log2(k) - 1");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  try {
    o.prime = env_or("HSG_PRIME", kDefaultPrime);
    o.budget = env_or("HSG_BUDGET", kDefaultBudget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  app.add_option("--jobs", o.jobs, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);

  auto add_random = [&](CLI::App* cmd) {
    cmd->add_option("--prime", o.prime, "prime modulus (env HSG_PRIME)");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--trials", o.trials, "random trials");
  };

  auto* pit = app.add_subcommand("pit", "generator parameters and identity testing");
  pit->require_subcommand(1);
  auto* params = pit->add_subcommand("params", "seed length for n variables and budget s");
  params->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  params->add_option("--s", o.s)->required();
  auto* check = pit->add_subcommand("check", "test a circuit through the generator");
  check->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  check->add_option("--s", o.s, "multiplicative complexity budget")->required();
  check->add_option("--mode", o.mode)->check(CLI::IsMember({"det", "rand", "direct"}));
  check->add_option("--rank", o.rank, "override the generator rank");
  check->add_option("--budget", o.budget, "grid evaluation budget (env HSG_BUDGET)");
  add_random(check);
  auto* compose = pit->add_subcommand("compose", "substitute the generator into a circuit");
  compose->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  compose->add_option("--rank", o.rank)->required();
  compose->add_option("-o,--output", o.output)->required();
  auto* ideal = pit->add_subcommand("ideal", "membership in the ideal of r x r minors");
  ideal->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  ideal->add_option("--r", o.r)->required()->check(CLI::PositiveNumber);
  add_random(ideal);

  auto* lemma = app.add_subcommand("lemma31", "minor-product identity for the trace projection");
  lemma->require_subcommand(1);
  auto* lverify = lemma->add_subcommand("verify", "randomized (and optionally symbolic) check");
  lverify->add_option("--dims", o.dims, "block sizes n1,...,n_{m+1}")->required()->delimiter(',');
  lverify->add_option("--sigma", o.sigma, "minor sizes, nonincreasing")->required()->delimiter(',');
  lverify->add_flag("--symbolic", o.symbolic, "also expand symbolically (sigma_1 <= 6)");
  lverify->add_flag("--unscaled", o.unscaled, "skip the diagonal rescaling");
  lverify->add_option("--prime", o.prime, "prime modulus (env HSG_PRIME)");
  lverify->add_option("--seed", o.seed, "RNG seed");
  lverify->add_option("--trials", o.lemma_trials, "random trials");

  auto* tensor = app.add_subcommand("tensor", "matrix multiplication decompositions");
  tensor->require_subcommand(1);
  auto* tverify = tensor->add_subcommand("verify", "check a decomposition against <n,m,p>");
  tverify->add_option("--dec", o.dec)->required()->check(CLI::ExistingFile);
  auto* tcircuit = tensor->add_subcommand("circuit", "bilinear circuit from a decomposition");
  tcircuit->add_option("--dec", o.dec)->required()->check(CLI::ExistingFile);
  tcircuit->add_option("-o,--output", o.output)->required();
  auto* tpolar = tensor->add_subcommand("polarize", "decomposition from a bilinear circuit");
  tpolar->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  tpolar->add_option("--shape", o.dims, "n,m,p")->required()->delimiter(',')->expected(3);
  tpolar->add_option("-o,--output", o.output)->required();

  auto* abp = app.add_subcommand("abp", "trace ABPs");
  abp->require_subcommand(1);
  auto* simulate = abp->add_subcommand("simulate", "single-source simulation of a trace ABP");
  simulate->add_option("--tabp", o.tabp)->required()->check(CLI::ExistingFile);
  simulate->add_option("--points", o.points, "random agreement points");
  simulate->add_option("--prime", o.prime);
  simulate->add_option("--seed", o.seed);
  simulate->add_option("-o,--output", o.output, "write the simulating program");

  auto* circuit = app.add_subcommand("circuit", "circuit utilities");
  circuit->require_subcommand(1);
  auto* info = circuit->add_subcommand("info", "size, multiplicative complexity, degree");
  info->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  auto* grad = circuit->add_subcommand("grad", "value and gradient circuit");
  grad->add_option("--circuit", o.circuit)->required()->check(CLI::ExistingFile);
  grad->add_option("-o,--output", o.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*params) return cmd_pit_params(o);
    if (*check) return cmd_pit_check(o);
    if (*compose) return cmd_pit_compose(o);
    if (*ideal) return cmd_pit_ideal(o);
    if (*lverify) return cmd_lemma31(o);
    if (*tverify) return cmd_tensor_verify(o);
    if (*tcircuit) return cmd_tensor_circuit(o);
    if (*tpolar) return cmd_tensor_polarize(o);
    if (*simulate) return cmd_abp_simulate(o);
    if (*info) return cmd_circuit_info(o);
    if (*grad) return cmd_circuit_grad(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
