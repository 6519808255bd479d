#pragma once

// The shipped first-order-logic fragment, constructed programmatically.
// build_fol_env() must elaborate equal to parsing corpus/fol.mcat, and
// build_negative_env() to corpus/negative.mcat; the corpus tests hold the
// two routes together.

#include <initializer_list>
#include <string>
#include <vector>

#include "metacat/proof.hpp"

namespace metacat {

namespace detail {

inline Derivation seq_chain(std::vector<Derivation> parts) {
  Derivation acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Derivation::seq(acc, parts[i]);
  return acc;
}

inline Derivation par_chain(std::initializer_list<Derivation> parts) {
  auto it = parts.begin();
  Derivation acc = *it++;
  for (; it != parts.end(); ++it) acc = Derivation::par(acc, *it);
  return acc;
}

// Stages of the identity proof from nine wff(p) wires down to |- p -> p:
// build wff(p->p) twice, apply ax-1 / ax-2 / ax-1, then modus ponens twice.
// The sym routes the first ax-mp's conclusion past the two wff wires that
// still feed the second ax-1.
inline std::vector<Derivation> id_proof_stages() {
  using D = Derivation;
  return {
      par_chain({D::id(1), D::gen("wi"), D::id(1), D::gen("wi"), D::id(3)}),
      par_chain({D::gen("ax-1"), D::gen("ax-2"), D::id(2)}),
      par_chain({D::gen("ax-mp"), D::id(2)}),
      D::sym(1, 2),
      par_chain({D::gen("ax-1"), D::id(1)}),
      D::gen("ax-mp"),
  };
}

// Fan one hypothesis wire out to nine copies.
inline std::vector<Derivation> fan_nine_stages() {
  using D = Derivation;
  return {
      D::dup(),
      par_chain({D::dup(), D::dup()}),
      par_chain({D::dup(), D::dup(), D::dup(), D::dup()}),
      par_chain({D::dup(), D::id(7)}),
  };
}

inline std::vector<Derivation> concat(std::vector<Derivation> a, std::vector<Derivation> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

inline Signature fol_signature() {
  return declare_signature({
      {"wff", 1},
      {"proves", 1},
      {"not", 1},
      {"imp", 2},
      {"forall", 2},
  });
}

inline Env build_fol_env() {
  Signature sig = fol_signature();
  const OpRef wff = sig.at("wff"), proves = sig.at("proves"), nop = sig.at("not"),
              imp = sig.at("imp"), forall = sig.at("forall");

  const Tree p = Tree::leaf(0), q = Tree::leaf(1), r = Tree::leaf(2);
  auto n1 = [&](const OpRef& op, Tree a) { return Tree::node(op, {std::move(a)}); };
  auto n2 = [&](const OpRef& op, Tree a, Tree b) {
    return Tree::node(op, {std::move(a), std::move(b)});
  };

  Env env(sig);
  env.add_rule(ProofGenerator("wn", {"p"}, SyntaxMap(1, {n1(wff, p)}),
                              SyntaxMap(1, {n1(wff, n1(nop, p))})));
  env.add_rule(ProofGenerator("wi", {"p", "q"}, SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(wff, n2(imp, p, q))})));
  env.add_rule(ProofGenerator("ax-mp", {"p", "q"},
                              SyntaxMap(2, {n1(proves, p), n1(proves, n2(imp, p, q))}),
                              SyntaxMap(2, {n1(proves, q)})));
  env.add_rule(ProofGenerator("ax-1", {"p", "q"},
                              SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(proves, n2(imp, p, n2(imp, q, p)))})));
  env.add_rule(ProofGenerator(
      "ax-2", {"p", "q", "r"}, SyntaxMap(3, {n1(wff, p), n1(wff, q), n1(wff, r)}),
      SyntaxMap(3, {n1(proves, n2(imp, n2(imp, p, n2(imp, q, r)),
                                  n2(imp, n2(imp, p, q), n2(imp, p, r))))})));
  // Params (x, p): x is leaf 0 and need not occur in the premise.
  const Tree x_var = Tree::leaf(0), body = Tree::leaf(1);
  env.add_rule(ProofGenerator("ax-gen", {"x", "p"}, SyntaxMap(2, {n1(proves, body)}),
                              SyntaxMap(2, {n1(proves, n2(forall, x_var, body))})));

  using D = Derivation;
  // One theorem per rule at its generating span.
  env.add_theorem(TheoremStmt{"wn-self", {"p"}, SyntaxMap(1, {n1(wff, p)}),
                              SyntaxMap(1, {n1(wff, n1(nop, p))}), D::gen("wn")});
  env.add_theorem(TheoremStmt{"wi-self",
                              {"p", "q"},
                              SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(wff, n2(imp, p, q))}),
                              D::gen("wi")});
  env.add_theorem(TheoremStmt{"ax-mp-self",
                              {"p", "q"},
                              SyntaxMap(2, {n1(proves, p), n1(proves, n2(imp, p, q))}),
                              SyntaxMap(2, {n1(proves, q)}),
                              D::gen("ax-mp")});
  env.add_theorem(TheoremStmt{"ax-1-self",
                              {"p", "q"},
                              SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(proves, n2(imp, p, n2(imp, q, p)))}),
                              D::gen("ax-1")});
  env.add_theorem(TheoremStmt{
      "ax-2-self",
      {"p", "q", "r"},
      SyntaxMap(3, {n1(wff, p), n1(wff, q), n1(wff, r)}),
      SyntaxMap(3, {n1(proves, n2(imp, n2(imp, p, n2(imp, q, r)),
                                  n2(imp, n2(imp, p, q), n2(imp, p, r))))}),
      D::gen("ax-2")});
  env.add_theorem(TheoremStmt{"ax-gen-self",
                              {"x", "p"},
                              SyntaxMap(2, {n1(proves, body)}),
                              SyntaxMap(2, {n1(proves, n2(forall, x_var, body))}),
                              D::gen("ax-gen")});
  // The wn derivation again, at a strictly more specific type.
  env.add_theorem(TheoremStmt{"wn-retyped", {"p"}, SyntaxMap(1, {n1(wff, n1(nop, p))}),
                              SyntaxMap(1, {n1(wff, n1(nop, n1(nop, p)))}), D::gen("wn")});
  // Negation of an implication is well-formed.
  env.add_theorem(TheoremStmt{"wnwi",
                              {"p", "q"},
                              SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(wff, n1(nop, n2(imp, p, q)))}),
                              D::seq(D::gen("wi"), D::gen("wn"))});
  // |- p -> p from wff(p), fanning the hypothesis out in the body.
  env.add_theorem(TheoremStmt{
      "id",
      {"p"},
      SyntaxMap(1, {n1(wff, p)}),
      SyntaxMap(1, {n1(proves, n2(imp, p, p))}),
      detail::seq_chain(detail::concat(detail::fan_nine_stages(), detail::id_proof_stages()))});
  // Cross-check variant: the fan-out lives in the claimed source instead.
  std::vector<Tree> nine;
  for (int i = 0; i < 9; ++i) nine.push_back(n1(wff, p));
  env.add_theorem(TheoremStmt{"id-fanout",
                              {"p"},
                              SyntaxMap(1, std::move(nine)),
                              SyntaxMap(1, {n1(proves, n2(imp, p, p))}),
                              detail::seq_chain(detail::id_proof_stages())});
  return env;
}

// Designated failures: the id proof with its routing sym removed (a proves
// wire then feeds a wff matcher), and the id proof claiming the specialized
// conclusion proves(p).
inline Env build_negative_env() {
  Signature sig = declare_signature({{"wff", 1}, {"proves", 1}, {"imp", 2}});
  const OpRef wff = sig.at("wff"), proves = sig.at("proves"), imp = sig.at("imp");
  const Tree p = Tree::leaf(0), q = Tree::leaf(1), r = Tree::leaf(2);
  auto n1 = [&](const OpRef& op, Tree a) { return Tree::node(op, {std::move(a)}); };
  auto n2 = [&](const OpRef& op, Tree a, Tree b) {
    return Tree::node(op, {std::move(a), std::move(b)});
  };

  Env env(sig);
  env.add_rule(ProofGenerator("wi", {"p", "q"}, SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(wff, n2(imp, p, q))})));
  env.add_rule(ProofGenerator("ax-mp", {"p", "q"},
                              SyntaxMap(2, {n1(proves, p), n1(proves, n2(imp, p, q))}),
                              SyntaxMap(2, {n1(proves, q)})));
  env.add_rule(ProofGenerator("ax-1", {"p", "q"},
                              SyntaxMap(2, {n1(wff, p), n1(wff, q)}),
                              SyntaxMap(2, {n1(proves, n2(imp, p, n2(imp, q, p)))})));
  env.add_rule(ProofGenerator(
      "ax-2", {"p", "q", "r"}, SyntaxMap(3, {n1(wff, p), n1(wff, q), n1(wff, r)}),
      SyntaxMap(3, {n1(proves, n2(imp, n2(imp, p, n2(imp, q, r)),
                                  n2(imp, n2(imp, p, q), n2(imp, p, r))))})));

  // Same stages as the id proof but with the routing sym removed.
  std::vector<Derivation> uncrossed = detail::id_proof_stages();
  uncrossed.erase(uncrossed.begin() + 3);
  env.add_theorem(TheoremStmt{
      "id-uncrossed",
      {"p"},
      SyntaxMap(1, {n1(wff, p)}),
      SyntaxMap(1, {n1(proves, n2(imp, p, p))}),
      detail::seq_chain(detail::concat(detail::fan_nine_stages(), std::move(uncrossed)))});
  env.add_theorem(TheoremStmt{
      "id-claims-p",
      {"p"},
      SyntaxMap(1, {n1(wff, p)}),
      SyntaxMap(1, {n1(proves, p)}),
      detail::seq_chain(detail::concat(detail::fan_nine_stages(), detail::id_proof_stages()))});
  return env;
}

}  // namespace metacat
