#include <doctest.h>

#include <map>

#include "support.hpp"

using namespace metacat;

namespace {

Env corpus_env() {
  Env env = build_fol_env();
  for (const TheoremStmt& t : env.theorems())
    if (check_theorem(t, env).is_valid()) env.mark_registered(t.name);
  return env;
}

void count_kinds(const Derivation& d, std::map<Derivation::Kind, std::size_t>& counts) {
  counts[d.kind()] += 1;
  if (d.kind() == Derivation::Kind::Sequential || d.kind() == Derivation::Kind::Parallel) {
    count_kinds(d.first(), counts);
    count_kinds(d.second(), counts);
  }
}

}  // namespace

TEST_CASE("eval_direct") {
  Env env = build_fol_env();
  const Signature& sig = env.signature();
  const OpRef proves = sig.at("proves"), imp = sig.at("imp"), wff = sig.at("wff");
  Tree t = Tree::node(wff, {Tree::leaf(5)});
  Tree s = Tree::leaf(6);

  SUBCASE("modus ponens") {
    FreshCounter fresh{10};
    auto r = eval_direct(
        Derivation::gen("ax-mp"),
        std::vector<Tree>{Tree::node(proves, {t}),
                          Tree::node(proves, {Tree::node(imp, {t, s})})},
        env, fresh);
    REQUIRE(r.has_value());
    CHECK(render_tree((*r)[0]) == "proves(x6)");
  }

  SUBCASE("binding conflict is undefined") {
    FreshCounter fresh{10};
    auto r = eval_direct(
        Derivation::gen("ax-mp"),
        std::vector<Tree>{Tree::node(proves, {t}),
                          Tree::node(proves, {Tree::node(imp, {s, s})})},
        env, fresh);
    CHECK_FALSE(r.has_value());
  }

  SUBCASE("identity and routing") {
    FreshCounter fresh{10};
    auto ts = testutil::generic_leaves(3);
    CHECK(*eval_direct(Derivation::id(3), ts, env, fresh) == ts);

    auto swapped = eval_direct(Derivation::sym(2, 1), ts, env, fresh);
    CHECK(render_tree((*swapped)[0]) == "x2");
    CHECK(render_tree((*swapped)[2]) == "x1");

    auto copied = eval_direct(Derivation::dup(), std::vector<Tree>{t}, env, fresh);
    CHECK(copied->size() == 2);
    auto dropped = eval_direct(Derivation::drop(), std::vector<Tree>{t}, env, fresh);
    CHECK(dropped->empty());
  }
}

TEST_CASE("check_direct matches check_theorem on handmade cases") {
  Env env = corpus_env();
  for (const TheoremStmt& t : env.theorems()) {
    INFO(t.name);
    CHECK(check_direct(t, env).status() == check_theorem(t, env).status());
  }

  Env negatives = build_negative_env();
  for (const TheoremStmt& t : negatives.theorems()) {
    INFO(t.name);
    CHECK(check_direct(t, negatives).status() == CheckReport::Status::Invalid);
  }

  // static problems stay static in both engines
  const Signature& sig = env.signature();
  SyntaxMap w(1, {Tree::node(sig.at("wff"), {Tree::leaf(0)})});
  TheoremStmt off_arity{"a", {"p"}, w, w, Derivation::id(2)};
  CHECK(check_direct(off_arity, env).status() == CheckReport::Status::Static);
  TheoremStmt unknown{"u", {"p"}, w, w, Derivation::gen("nonesuch")};
  CHECK(check_direct(unknown, env).status() == CheckReport::Status::Static);
}

TEST_CASE("canonicalize") {
  Signature sig = fol_signature();
  const OpRef proves = sig.at("proves"), forall = sig.at("forall"), imp = sig.at("imp");

  SUBCASE("renumbers fresh leaves from the boundary") {
    // proves(forall(x7, x1)) with boundary 2: 7 |-> 2
    Tree t = Tree::node(proves, {Tree::node(forall, {Tree::leaf(7), Tree::leaf(1)})});
    CanonicalOutputs c = canonicalize(std::vector<Tree>{t}, 2);
    CHECK(render_tree(c.trees[0]) == "proves(forall(x2,x1))");
  }

  SUBCASE("fresh-free tuples are untouched") {
    Tree t = Tree::node(imp, {Tree::leaf(0), Tree::leaf(1)});
    CanonicalOutputs c = canonicalize(std::vector<Tree>{t}, 2);
    CHECK(tree_equal(c.trees[0], t));
  }

  SUBCASE("repeated fresh leaves keep a single canonical id") {
    Tree two = Tree::node(imp, {Tree::leaf(9), Tree::leaf(9)});
    CanonicalOutputs c = canonicalize(std::vector<Tree>{two}, 1);
    CHECK(render_tree(c.trees[0]) == "imp(x1,x1)");
  }

  SUBCASE("idempotent and renaming-invariant") {
    Rng rng(0x31u);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t boundary = 2;
      Tree t = detail::random_tree(rng, sig, 6, 3);  // leaves 0..5, some "fresh"
      CanonicalOutputs once = canonicalize(std::vector<Tree>{t}, boundary);
      CanonicalOutputs twice = canonicalize(once.trees, boundary);
      CHECK(once == twice);

      // rename fresh ids injectively: id |-> id + 40
      std::function<Tree(const Tree&)> shift = [&](const Tree& u) -> Tree {
        if (u.is_leaf())
          return u.leaf_id() >= boundary ? Tree::leaf(u.leaf_id() + 40) : u;
        std::vector<Tree> kids;
        for (const Tree& c : u.children()) kids.push_back(shift(c));
        return Tree::node(u.op_ref(), std::move(kids));
      };
      CanonicalOutputs renamed = canonicalize(std::vector<Tree>{shift(t)}, boundary);
      CHECK(once == renamed);
    }
  }
}

TEST_CASE("random_instance") {
  Env env = corpus_env();

  SUBCASE("deterministic for a fixed seed") {
    RandomInstance a = random_instance(env, 1, 3);
    RandomInstance b = random_instance(env, 1, 3);
    CHECK(a.body == b.body);
    CHECK(a.candidate == b.candidate);
    RandomInstance c = random_instance(env, 2, 3);
    CHECK_FALSE(a.candidate == c.candidate);  // different seed, different instance
  }

  SUBCASE("generated derivations are always well-arity-ed") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      RandomInstance inst = random_instance(env, seed, 1 + seed % 5);
      CHECK_NOTHROW(derivation_arity(inst.body, env));
      CHECK(inst.candidate.claim_src.context_size() ==
            inst.candidate.claim_tgt.context_size());
    }
  }

  SUBCASE("all derivation constructors appear within 1000 samples") {
    std::map<Derivation::Kind, std::size_t> counts;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
      count_kinds(random_instance(env, seed, 1 + seed % 5).body, counts);
    CHECK(counts[Derivation::Kind::Generator] > 0);
    CHECK(counts[Derivation::Kind::Identity] > 0);
    CHECK(counts[Derivation::Kind::Symmetry] > 0);
    CHECK(counts[Derivation::Kind::Sequential] > 0);
    CHECK(counts[Derivation::Kind::Parallel] > 0);
    CHECK(counts[Derivation::Kind::Dup] > 0);
    CHECK(counts[Derivation::Kind::Drop] > 0);
  }

  SUBCASE("both status classes show up") {
    std::size_t valid = 0, invalid = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      CheckReport r = check_direct(random_instance(env, seed, 2).candidate, env);
      if (r.status() == CheckReport::Status::Valid) valid += 1;
      if (r.status() == CheckReport::Status::Invalid) invalid += 1;
    }
    CHECK(valid > 20);
    CHECK(invalid > 20);
  }
}

TEST_CASE("differential_run") {
  Env env = corpus_env();

  SUBCASE("the two engines agree on 1000 seeded trials") {
    DifferentialSummary summary = differential_run(env, 1000, 7);
    INFO(summary.first_divergence);
    CHECK(summary.trials == 1000);
    CHECK(summary.divergences == 0);
    CHECK(summary.valid > 0);
    CHECK(summary.invalid > 0);
    CHECK(summary.static_errors == 0);
  }

  SUBCASE("zero trials, empty summary") {
    DifferentialSummary summary = differential_run(env, 0, 7);
    CHECK(summary.trials == 0);
    CHECK(summary.divergences == 0);
  }

  SUBCASE("summaries are reproducible") {
    DifferentialSummary a = differential_run(env, 50, 11);
    DifferentialSummary b = differential_run(env, 50, 11);
    CHECK(a.describe() == b.describe());
    CHECK(a.valid == b.valid);
  }
}
