// Acceptance suite. Runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion; exits nonzero if any fails.
//
// Usage: acceptance_tests <path-to-metacat-cli> <source-root>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "metacat/metacat.hpp"

using namespace metacat;

namespace {

std::string g_cli;
std::string g_root;
int g_failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  double seconds = 0.0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tag = "/tmp/metacat_accept_" + std::to_string(counter++);
  const std::string cmd = "\"" + g_cli + "\" " + args + " >" + tag + ".out 2>" + tag + ".err";
  auto start = std::chrono::steady_clock::now();
  int status = std::system(cmd.c_str());
  auto stop = std::chrono::steady_clock::now();
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(tag + ".out");
  r.err = slurp(tag + ".err");
  r.seconds = std::chrono::duration<double>(stop - start).count();
  std::remove((tag + ".out").c_str());
  std::remove((tag + ".err").c_str());
  return r;
}

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) g_failures += 1;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<Tree> leaves(std::size_t m) {
  std::vector<Tree> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(Tree::leaf(i));
  return out;
}

// 1. `metacat check corpus/fol.mcat` exits 0; wnwi, id and every rule at its
//    own span are valid; under one second.
void criterion_corpus_validity() {
  RunResult r = run_cli("check " + g_root + "/corpus/fol.mcat");
  bool ok = r.exit_code == 0 && r.seconds < 1.0;
  for (const char* line :
       {"wnwi: valid", "id: valid", "wn-self: valid", "wi-self: valid",
        "ax-mp-self: valid", "ax-1-self: valid", "ax-2-self: valid",
        "ax-gen-self: valid"})
    ok = ok && contains(r.out, line);
  report(1, "corpus validity", ok,
         "exit " + std::to_string(r.exit_code) + ", " + std::to_string(r.seconds) + "s");
}

// 2. Exact failure classes for the negative suite.
void criterion_negative_suite() {
  RunResult neg = run_cli("check " + g_root + "/corpus/negative.mcat");
  bool ok = neg.exit_code == 1;
  ok = ok && contains(neg.out, "id-uncrossed: invalid: match failure at edge");
  ok = ok && contains(neg.out,
                      "id-claims-p: invalid: conclusion mismatch at output 0: "
                      "expected proves(x0), actual proves(imp(x0,x0))");
  RunResult broken = run_cli("check " + g_root + "/tests/data/broken-arity.mcat");
  ok = ok && broken.exit_code == 2;
  report(2, "negative suite failure classes", ok,
         "exits " + std::to_string(neg.exit_code) + "/" + std::to_string(broken.exit_code));
}

// 3. 1000 differential trials, seed 7, zero divergences, under ten seconds.
void criterion_oracle_equivalence() {
  RunResult r =
      run_cli("check --oracle --trials 1000 --seed 7 " + g_root + "/corpus/fol.mcat");
  bool ok = r.exit_code == 0 && r.seconds < 10.0;
  ok = ok && contains(r.out, "1000 trials, 0 divergences");
  report(3, "oracle equivalence over 1000 trials", ok,
         "exit " + std::to_string(r.exit_code) + ", " + std::to_string(r.seconds) + "s");
}

// 4. Algebraic laws on >= 1000 seeded random syntax maps and inputs.
void criterion_algebraic_laws() {
  Signature sig = fol_signature();
  Rng rng(0x4242u);
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t m = 1 + rng.below(3), n = rng.below(4), k = 1 + rng.below(3);
    SyntaxMap u = random_syntax_map(rng, sig, m, n);
    std::vector<Tree> args;
    for (std::size_t i = 0; i < m; ++i)
      args.push_back(detail::random_tree(rng, sig, 3, 2));

    // instantiate functoriality
    if (n > 0) {
      SyntaxMap v = random_syntax_map(rng, sig, n, k);
      auto fused = instantiate(smap_compose(u, v), args);
      auto staged = instantiate(v, instantiate(u, args));
      for (std::size_t j = 0; j < fused.size(); ++j)
        if (!tree_equal(fused[j], staged[j])) failures += 1;
    }

    // evaluate(compile_plus(u)) == instantiate(u)
    FreshCounter f0{50};
    EvalResult direct = evaluate(compile_plus(u), args, f0);
    if (!eval_defined(direct)) {
      failures += 1;
    } else {
      auto expect = instantiate(u, args);
      for (std::size_t j = 0; j < expect.size(); ++j)
        if (!tree_equal(eval_values(direct)[j], expect[j])) failures += 1;
    }

    // retraction: u+ ; u- ; u+  ==  u+
    FreshCounter f1{50};
    OpenHypergraph pipeline =
        hg_sequential(hg_sequential(compile_plus(u), compile_minus(u)), compile_plus(u));
    EvalResult roundtrip = evaluate(pipeline, args, f1);
    if (!eval_defined(roundtrip)) {
      failures += 1;
    } else {
      auto expect = instantiate(u, args);
      for (std::size_t j = 0; j < expect.size(); ++j)
        if (!tree_equal(eval_values(roundtrip)[j], expect[j])) failures += 1;
    }

    // exact round-trip when every metavariable occurs
    std::vector<std::size_t> uses(m, 0);
    for (const Tree& t : u.outputs()) detail::count_uses(t, uses);
    bool all_used = true;
    for (std::size_t i = 0; i < m; ++i) all_used = all_used && uses[i] > 0;
    if (all_used) {
      FreshCounter f2{50};
      auto bound = match_against(u, instantiate(u, args), f2);
      if (!bound) {
        failures += 1;
      } else {
        for (std::size_t i = 0; i < m; ++i)
          if (!tree_equal((*bound)[i], args[i])) failures += 1;
      }
    }
  }
  report(4, "algebraic-law suite (1000 random maps)", failures == 0,
         std::to_string(failures) + " failures");
}

// 5. Monoidal laws on >= 500 random derivation pairs plus corpus
//    re-association invariance.
void criterion_monoidal_laws() {
  Env env = build_fol_env();
  for (const TheoremStmt& t : env.theorems())
    if (check_theorem(t, env).is_valid()) env.mark_registered(t.name);

  Rng rng(0x1717u);
  std::size_t failures = 0, pairs = 0;
  for (std::uint64_t attempt = 0; pairs < 500; ++attempt) {
    RandomInstance left = random_instance(env, 40000 + attempt, 2 + attempt % 3);
    RandomInstance right = random_instance(env, 90000 + attempt, 2);
    pairs += 1;

    DerivationArity la = derivation_arity(left.body, env);
    DerivationArity ra = derivation_arity(right.body, env);
    const std::size_t m = 2;

    auto agree = [&](const Derivation& a, const Derivation& b, std::size_t in_arity) {
      SyntaxMap s = random_syntax_map(rng, env.signature(), m, in_arity, 2);
      auto inputs = instantiate(s, leaves(m));
      FreshCounter f1{m}, f2{m};
      EvalResult ra_ = evaluate(compile_derivation(a, env), inputs, f1);
      EvalResult rb_ = evaluate(compile_derivation(b, env), inputs, f2);
      if (eval_defined(ra_) != eval_defined(rb_)) return false;
      if (!eval_defined(ra_)) return true;
      return canonicalize(eval_values(ra_), m) == canonicalize(eval_values(rb_), m);
    };

    // sequential associativity over a genuinely random composable triple
    detail::GeneratorPool pool(env);
    Derivation mid = detail::random_derivation_with_input(rng, env, pool, la.out, 2);
    Derivation last = detail::random_derivation_with_input(
        rng, env, pool, derivation_arity(mid, env).out, 2);
    if (!agree(Derivation::seq(Derivation::seq(left.body, mid), last),
               Derivation::seq(left.body, Derivation::seq(mid, last)), la.in))
      failures += 1;

    // identity units
    if (!agree(Derivation::seq(left.body, Derivation::id(la.out)), left.body, la.in))
      failures += 1;
    if (!agree(Derivation::seq(Derivation::id(la.in), left.body), left.body, la.in))
      failures += 1;

    // interchange
    Derivation tensor_first =
        Derivation::seq(Derivation::par(left.body, right.body),
                        Derivation::par(Derivation::id(la.out), Derivation::id(ra.out)));
    Derivation seq_first =
        Derivation::par(Derivation::seq(left.body, Derivation::id(la.out)),
                        Derivation::seq(right.body, Derivation::id(ra.out)));
    if (!agree(tensor_first, seq_first, la.in + ra.in)) failures += 1;

    // symmetry naturality
    Derivation lhs = Derivation::seq(Derivation::par(left.body, right.body),
                                     Derivation::sym(la.out, ra.out));
    Derivation rhs = Derivation::seq(Derivation::sym(la.in, ra.in),
                                     Derivation::par(right.body, left.body));
    if (!agree(lhs, rhs, la.in + ra.in)) failures += 1;

  }

  // corpus bodies keep their status under re-association
  std::function<Derivation(const Derivation&)> rotate = [&](const Derivation& d) {
    if (d.kind() == Derivation::Kind::Sequential &&
        d.first().kind() == Derivation::Kind::Sequential)
      return Derivation::seq(d.first().first(),
                             Derivation::seq(d.first().second(), d.second()));
    return d;
  };
  for (const TheoremStmt& t : env.theorems()) {
    TheoremStmt rotated = t;
    rotated.body = rotate(t.body);
    if (check_theorem(rotated, env).status() != check_theorem(t, env).status())
      failures += 1;
  }

  report(5, "monoidal-law suite (500 random pairs + corpus)", failures == 0,
         std::to_string(failures) + " failures");
}

// 6. ax-gen at its own span: valid, concludes proves(forall(x0,x1)), and the
//    fresh leaf stays clear of the boundary.
void criterion_fresh_leaf_behavior() {
  Env env = build_fol_env();
  const TheoremStmt* self = env.find_theorem("ax-gen-self");
  bool ok = self != nullptr;
  if (ok) {
    ok = check_theorem(*self, env).is_valid() && check_direct(*self, env).is_valid();
    auto claimed = instantiate(self->claim_tgt, leaves(2));
    ok = ok && render_tree(claimed[0]) == "proves(forall(x0,x1))";

    OpenHypergraph g =
        hg_sequential(compile_plus(self->claim_src), compile_derivation(self->body, env));
    FreshCounter fresh{2};
    EvalResult r = evaluate(g, leaves(2), fresh);
    ok = ok && eval_defined(r);
    if (ok) {
      const Tree& quant = eval_values(r)[0].children()[0];
      const Tree& bound = quant.children()[0];
      ok = bound.is_leaf() && bound.leaf_id() >= 2;  // never collides with x0, x1
      ok = ok && render_tree(quant.children()[1]) == "x1";
    }
  }
  report(6, "fresh-leaf behavior of ax-gen", ok, "");
}

// 7. Byte-determinism, dump/parse identity, and the labelled id conclusion.
void criterion_determinism_roundtrip() {
  bool ok = true;
  for (const std::string& args :
       {std::string("check --json ") + g_root + "/corpus/fol.mcat",
        std::string("dot --thm id --values ") + g_root + "/corpus/fol.mcat",
        std::string("dump ") + g_root + "/corpus/fol.mcat"}) {
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    ok = ok && a.exit_code == b.exit_code && a.out == b.out && a.err == b.err;
  }
  for (const char* file : {"corpus/fol.mcat", "corpus/negative.mcat"}) {
    RunResult dumped = run_cli("dump " + g_root + "/" + file);
    ok = ok && dumped.exit_code == 0 && dumped.out == slurp(g_root + "/" + file);
  }
  RunResult dot = run_cli("dot --thm id --values " + g_root + "/corpus/fol.mcat");
  ok = ok && contains(dot.out, "proves(imp(x0,x0))");
  report(7, "determinism and round-trip", ok, "");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance_tests <metacat-cli> <source-root>\n";
    return 2;
  }
  g_cli = argv[1];
  g_root = argv[2];

  criterion_corpus_validity();
  criterion_negative_suite();
  criterion_oracle_equivalence();
  criterion_algebraic_laws();
  criterion_monoidal_laws();
  criterion_fresh_leaf_behavior();
  criterion_determinism_roundtrip();

  if (g_failures == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " acceptance criteria failed\n";
  return 1;
}
