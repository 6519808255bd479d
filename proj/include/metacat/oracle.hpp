#pragma once

// Independent brute-force checker: evaluates derivations by structural
// recursion with match_against/instantiate, no hypergraph involved. Paired
// with a seeded generator of random instances and a differential harness
// that compares the two engines.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metacat/proof.hpp"

namespace metacat {

// Direct partial evaluation of a derivation. A generator matches its source
// span against the inputs and instantiates its target at the recovered
// bindings; theorem references are applied through their registered span,
// never inlined. Undefinedness propagates as nullopt.
inline std::optional<std::vector<Tree>> eval_direct(const Derivation& d,
                                                    std::span<const Tree> inputs,
                                                    const Env& env, FreshCounter& fresh) {
  switch (d.kind()) {
    case Derivation::Kind::Generator: {
      Env::Span span = env.span_of(d.name());
      auto bindings = match_against(*span.src, inputs, fresh);
      if (!bindings) return std::nullopt;
      return instantiate(*span.tgt, *bindings);
    }
    case Derivation::Kind::Identity: {
      if (inputs.size() != d.n()) fail(ErrorKind::ArityMismatch, "identity arity");
      return std::vector<Tree>(inputs.begin(), inputs.end());
    }
    case Derivation::Kind::Symmetry: {
      const std::size_t a = d.block_a(), b = d.block_b();
      if (inputs.size() != a + b) fail(ErrorKind::ArityMismatch, "symmetry arity");
      std::vector<Tree> out;
      out.reserve(a + b);
      for (std::size_t i = 0; i < b; ++i) out.push_back(inputs[a + i]);
      for (std::size_t i = 0; i < a; ++i) out.push_back(inputs[i]);
      return out;
    }
    case Derivation::Kind::Dup:
      if (inputs.size() != 1) fail(ErrorKind::ArityMismatch, "dup arity");
      return std::vector<Tree>{inputs[0], inputs[0]};
    case Derivation::Kind::Drop:
      if (inputs.size() != 1) fail(ErrorKind::ArityMismatch, "drop arity");
      return std::vector<Tree>{};
    case Derivation::Kind::Sequential: {
      auto mid = eval_direct(d.first(), inputs, env, fresh);
      if (!mid) return std::nullopt;
      return eval_direct(d.second(), *mid, env, fresh);
    }
    case Derivation::Kind::Parallel: {
      DerivationArity left = derivation_arity(d.first(), env);
      if (inputs.size() < left.in) fail(ErrorKind::ArityMismatch, "parallel arity");
      auto l = eval_direct(d.first(), inputs.subspan(0, left.in), env, fresh);
      if (!l) return std::nullopt;
      auto r = eval_direct(d.second(), inputs.subspan(left.in), env, fresh);
      if (!r) return std::nullopt;
      l->insert(l->end(), r->begin(), r->end());
      return l;
    }
  }
  return std::nullopt;
}

// Same criterion as check_theorem, evaluated without the IR.
inline CheckReport check_direct(const TheoremStmt& thm, const Env& env) {
  try {
    DerivationArity body_arity = derivation_arity(thm.body, env);
    if (body_arity.in != thm.claim_src.output_count() ||
        body_arity.out != thm.claim_tgt.output_count())
      fail(ErrorKind::ArityMismatch, "theorem '" + thm.name + "': body arity off-claim");

    const std::size_t m = thm.metavar_count();
    std::vector<Tree> leaves;
    for (std::size_t i = 0; i < m; ++i) leaves.push_back(Tree::leaf(i));
    FreshCounter fresh{m};

    auto actual = eval_direct(thm.body, instantiate(thm.claim_src, leaves), env, fresh);
    if (!actual) return CheckReport::invalid_undefined();

    std::vector<Tree> expected = instantiate(thm.claim_tgt, leaves);
    std::map<std::size_t, Tree> fresh_binding;
    for (std::size_t j = 0; j < expected.size(); ++j)
      if (!detail::conclusion_matches((*actual)[j], expected[j], m, fresh_binding))
        return CheckReport::invalid(ConclusionMismatch{j, expected[j], (*actual)[j]});
    return CheckReport::valid();
  } catch (const Error& e) {
    return CheckReport::static_error(e.what());
  }
}

// Fresh-leaf names are evaluation-order artifacts; two engines agree only up
// to renaming above the boundary. Canonical form renumbers fresh ids
// consecutively from the boundary in order of first occurrence (left-to-right
// preorder across the tuple).
struct CanonicalOutputs {
  std::vector<Tree> trees;
  std::size_t boundary = 0;

  friend bool operator==(const CanonicalOutputs& a, const CanonicalOutputs& b) {
    if (a.boundary != b.boundary || a.trees.size() != b.trees.size()) return false;
    for (std::size_t i = 0; i < a.trees.size(); ++i)
      if (!tree_equal(a.trees[i], b.trees[i])) return false;
    return true;
  }
};

inline CanonicalOutputs canonicalize(std::span<const Tree> outputs, std::size_t boundary_m) {
  std::unordered_map<std::size_t, std::size_t> remap;
  auto rewrite = [&](auto&& self, const Tree& t) -> Tree {
    if (t.is_leaf()) {
      if (t.leaf_id() < boundary_m) return t;
      auto [it, inserted] = remap.emplace(t.leaf_id(), boundary_m + remap.size());
      (void)inserted;
      return Tree::leaf(it->second);
    }
    std::vector<Tree> kids;
    kids.reserve(t.children().size());
    for (const Tree& c : t.children()) kids.push_back(self(self, c));
    return Tree::node(t.op_ref(), std::move(kids));
  };
  CanonicalOutputs out;
  out.boundary = boundary_m;
  out.trees.reserve(outputs.size());
  for (const Tree& t : outputs) out.trees.push_back(rewrite(rewrite, t));
  return out;
}

// SplitMix64: tiny, seed-stable across platforms and standard libraries, so
// generated instances and goldens do not depend on the toolchain.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }
  bool percent(std::size_t p) { return below(100) < p; }
};

namespace detail {

inline bool has_leaf_at_or_above(const Tree& t, std::size_t bound) {
  if (t.is_leaf()) return t.leaf_id() >= bound;
  for (const Tree& c : t.children())
    if (has_leaf_at_or_above(c, bound)) return true;
  return false;
}

inline Tree random_tree(Rng& rng, const Signature& sig, std::size_t m, std::size_t depth) {
  if (m == 0) {
    // Ground trees need a constant to bottom out on.
    std::vector<OpRef> constants;
    for (const OpRef& op : sig.ops())
      if (op->arity == 0) constants.push_back(op);
    if (constants.empty())
      fail(ErrorKind::ArityMismatch,
           "cannot generate a ground tree: no metavariables and no constants");
    if (depth == 0 || rng.percent(60))
      return Tree::node(constants[rng.below(constants.size())], {});
  }
  const bool want_leaf = depth == 0 || sig.size() == 0 || rng.percent(45);
  if (want_leaf && m > 0) return Tree::leaf(rng.below(m));
  if (sig.size() == 0) return Tree::leaf(0);  // unreachable when m == 0
  const OpRef& op = sig.ops()[rng.below(sig.size())];
  std::vector<Tree> kids;
  kids.reserve(op->arity);
  for (std::size_t i = 0; i < op->arity; ++i)
    kids.push_back(random_tree(rng, sig, m, depth == 0 ? 0 : depth - 1));
  return Tree::node(op, kids);
}

}  // namespace detail

inline SyntaxMap random_syntax_map(Rng& rng, const Signature& sig, std::size_t m,
                                   std::size_t n, std::size_t depth = 3) {
  std::vector<Tree> outs;
  outs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) outs.push_back(detail::random_tree(rng, sig, m, depth));
  return SyntaxMap(m, std::move(outs));
}

namespace detail {

// Names usable as derivation atoms: rules plus registered theorems, in
// definition order.
struct GeneratorPool {
  std::vector<std::string> names;
  std::unordered_map<std::size_t, std::vector<std::string>> by_input_arity;

  explicit GeneratorPool(const Env& env) {
    for (const ProofGenerator& g : env.rules()) insert(g.name, g.hyp_count());
    for (const TheoremStmt& t : env.theorems())
      if (env.is_registered(t.name)) insert(t.name, t.claim_src.output_count());
  }

  void insert(const std::string& name, std::size_t in_arity) {
    names.push_back(name);
    by_input_arity[in_arity].push_back(name);
  }
};

inline Derivation random_derivation_with_input(Rng& rng, const Env& env,
                                               const GeneratorPool& pool, std::size_t a,
                                               std::size_t budget);

inline Derivation random_derivation_any(Rng& rng, const Env& env, const GeneratorPool& pool,
                                        std::size_t budget) {
  if (budget > 0) {
    const std::size_t roll = rng.below(100);
    if (roll < 35) {
      Derivation first = random_derivation_any(rng, env, pool, budget / 2);
      Derivation second = random_derivation_with_input(
          rng, env, pool, derivation_arity(first, env).out, budget / 2);
      return Derivation::seq(first, second);
    }
    if (roll < 65) {
      return Derivation::par(random_derivation_any(rng, env, pool, budget / 2),
                             random_derivation_any(rng, env, pool, budget / 2));
    }
  }
  const std::size_t roll = rng.below(100);
  if (roll < 45 && !pool.names.empty())
    return Derivation::gen(pool.names[rng.below(pool.names.size())]);
  if (roll < 60) return Derivation::id(rng.below(3));
  if (roll < 75) return Derivation::sym(rng.below(3), rng.below(3));
  if (roll < 88) return Derivation::dup();
  if (roll < 95) return Derivation::drop();
  return Derivation::id(1);
}

inline Derivation random_derivation_with_input(Rng& rng, const Env& env,
                                               const GeneratorPool& pool, std::size_t a,
                                               std::size_t budget) {
  auto candidates = pool.by_input_arity.find(a);
  const bool have_gen = candidates != pool.by_input_arity.end();
  if (budget > 0) {
    const std::size_t roll = rng.below(100);
    if (roll < 25 && a > 0) {
      const std::size_t split = rng.below(a + 1);
      return Derivation::par(random_derivation_with_input(rng, env, pool, split, budget / 2),
                             random_derivation_with_input(rng, env, pool, a - split, budget / 2));
    }
    if (roll < 45) {
      Derivation first = random_derivation_with_input(rng, env, pool, a, budget / 2);
      Derivation second = random_derivation_with_input(
          rng, env, pool, derivation_arity(first, env).out, budget / 2);
      return Derivation::seq(first, second);
    }
  }
  const std::size_t roll = rng.below(100);
  if (roll < 40 && have_gen)
    return Derivation::gen(candidates->second[rng.below(candidates->second.size())]);
  if (roll < 55 && a >= 2) {
    const std::size_t split = 1 + rng.below(a - 1);
    return Derivation::sym(split, a - split);
  }
  if (roll < 70 && a == 1) return rng.percent(60) ? Derivation::dup() : Derivation::drop();
  return Derivation::id(a);
}

}  // namespace detail

struct RandomInstance {
  Derivation body;
  TheoremStmt candidate;
};

// Seeded, reproducible generation. Derivations are always well-arity-ed by
// construction and biased toward composable generator chains (Seq 35% /
// Par 30% while budget lasts; atoms favour generators). The claimed type is,
// half the time, read off a direct evaluation of the body at the generic
// tuple (a likely-valid instance, when that evaluation is defined and
// fresh-free) and otherwise drawn at random (a likely-invalid one).
inline RandomInstance random_instance(const Env& env, std::uint64_t seed, std::size_t size) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + size);
  detail::GeneratorPool pool(env);
  Derivation body = detail::random_derivation_any(rng, env, pool, size);
  DerivationArity arity = derivation_arity(body, env);

  const std::size_t m = 1 + rng.below(3);
  SyntaxMap claim_src = random_syntax_map(rng, env.signature(), m, arity.in, 2);

  std::optional<SyntaxMap> claim_tgt;
  if (rng.percent(50)) {
    std::vector<Tree> leaves;
    for (std::size_t i = 0; i < m; ++i) leaves.push_back(Tree::leaf(i));
    FreshCounter fresh{m};
    auto result = eval_direct(body, instantiate(claim_src, leaves), env, fresh);
    if (result) {
      bool fresh_free = true;
      for (const Tree& t : *result)
        if (detail::has_leaf_at_or_above(t, m)) fresh_free = false;
      if (fresh_free) claim_tgt = SyntaxMap(m, *result);
    }
  }
  if (!claim_tgt) claim_tgt = random_syntax_map(rng, env.signature(), m, arity.out, 2);

  std::vector<std::string> params;
  for (std::size_t i = 0; i < m; ++i) params.push_back("v" + std::to_string(i));
  TheoremStmt candidate{"random-instance", std::move(params), std::move(claim_src),
                        std::move(*claim_tgt), body};
  return RandomInstance{body, std::move(candidate)};
}

struct DifferentialSummary {
  std::size_t trials = 0;
  std::size_t divergences = 0;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::size_t static_errors = 0;
  std::string first_divergence;  // empty when the engines agreed throughout

  std::string describe() const {
    std::string line = std::to_string(trials) + " trials, " + std::to_string(divergences) +
                       " divergences (" + std::to_string(valid) + " valid, " +
                       std::to_string(invalid) + " invalid)";
    if (!first_divergence.empty()) line += "; first: " + first_divergence;
    return line;
  }
};

// Compares the hypergraph engine against the direct evaluator: check status
// on the candidate theorem, and definedness plus canonical values of the
// raw pipeline s+ ; body at the generic tuple.
inline DifferentialSummary differential_run(const Env& env, std::size_t trials,
                                            std::uint64_t seed) {
  DifferentialSummary summary;
  summary.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomInstance inst = random_instance(env, seed + trial, 1 + trial % 5);
    const TheoremStmt& thm = inst.candidate;

    auto diverge = [&](const std::string& what) {
      summary.divergences += 1;
      if (summary.first_divergence.empty())
        summary.first_divergence =
            "trial " + std::to_string(trial) + " (seed " + std::to_string(seed + trial) +
            "): " + what;
    };

    CheckReport graph_report = check_theorem(thm, env);
    CheckReport direct_report = check_direct(thm, env);
    if (graph_report.status() != direct_report.status())
      diverge("status " + graph_report.describe() + " vs " + direct_report.describe());
    switch (graph_report.status()) {
      case CheckReport::Status::Valid: summary.valid += 1; break;
      case CheckReport::Status::Invalid: summary.invalid += 1; break;
      case CheckReport::Status::Static: summary.static_errors += 1; break;
    }

    const std::size_t m = thm.metavar_count();
    std::vector<Tree> leaves;
    for (std::size_t i = 0; i < m; ++i) leaves.push_back(Tree::leaf(i));
    try {
      FreshCounter graph_fresh{m};
      OpenHypergraph pipeline =
          hg_sequential(compile_plus(thm.claim_src), compile_derivation(thm.body, env));
      EvalResult graph_result = evaluate(pipeline, leaves, graph_fresh);

      FreshCounter direct_fresh{m};
      auto direct_result =
          eval_direct(thm.body, instantiate(thm.claim_src, leaves), env, direct_fresh);

      if (eval_defined(graph_result) != direct_result.has_value()) {
        diverge("definedness disagrees");
      } else if (direct_result) {
        if (!(canonicalize(eval_values(graph_result), m) == canonicalize(*direct_result, m)))
          diverge("canonical values disagree");
      }
    } catch (const Error& e) {
      diverge(std::string("static error during raw comparison: ") + e.what());
    }
  }
  return summary;
}

}  // namespace metacat
