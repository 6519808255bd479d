#pragma once

// Elaboration of a parsed .mcat file into an Env: parameters resolve
// positionally to metavariable indices, terms become syntax trees, rule and
// theorem declarations become spans, and derivation expressions become
// Derivation values. Every error carries the source position it came from.

#include <string>
#include <unordered_map>
#include <vector>

#include "metacat/errors.hpp"
#include "metacat/parse.hpp"
#include "metacat/proof.hpp"

namespace metacat {

namespace detail {

inline Tree elaborate_term(const TermNode& node, const Signature& sig,
                           const std::unordered_map<std::string, std::size_t>& params) {
  auto param = params.find(node.name);
  if (!node.applied) {
    if (param != params.end()) return Tree::leaf(param->second);
    if (sig.find(node.name))
      fail(ErrorKind::UnboundMetavariable,
           "'" + node.name + "' is not a parameter; write " + node.name +
               "() to apply the operation",
           node.pos);
    fail(ErrorKind::UnknownSymbol,
         "'" + node.name + "' is neither a parameter nor an operation", node.pos);
  }
  if (param != params.end())
    fail(ErrorKind::WrongArgCount,
         "metavariable '" + node.name + "' cannot take arguments", node.pos);
  OpRef op = sig.find(node.name);
  if (!op)
    fail(ErrorKind::UnknownSymbol, "no operation named '" + node.name + "'", node.pos);
  if (node.args.size() != op->arity)
    fail(ErrorKind::WrongArgCount,
         "'" + node.name + "' takes " + std::to_string(op->arity) + " arguments, got " +
             std::to_string(node.args.size()),
         node.pos);
  std::vector<Tree> kids;
  kids.reserve(node.args.size());
  for (const TermNode& arg : node.args) kids.push_back(elaborate_term(arg, sig, params));
  return Tree::node(std::move(op), std::move(kids));
}

inline SyntaxMap elaborate_ctx(const std::vector<TermNode>& terms, const Signature& sig,
                               const std::unordered_map<std::string, std::size_t>& params,
                               std::size_t m) {
  std::vector<Tree> outs;
  outs.reserve(terms.size());
  for (const TermNode& t : terms) outs.push_back(elaborate_term(t, sig, params));
  return SyntaxMap(m, std::move(outs));
}

inline Derivation elaborate_dexpr(const DerivExpr& e, const Env& env) {
  switch (e.kind) {
    case DerivExpr::Kind::Name:
      if (!env.arity_of(e.name))
        fail(ErrorKind::UnknownGenerator,
             "no rule or prior theorem named '" + e.name + "'", e.pos);
      return Derivation::gen(e.name);
    case DerivExpr::Kind::Id: return Derivation::id(e.a);
    case DerivExpr::Kind::Sym: return Derivation::sym(e.a, e.b);
    case DerivExpr::Kind::Dup: return Derivation::dup();
    case DerivExpr::Kind::Drop: return Derivation::drop();
    case DerivExpr::Kind::Seq:
      return Derivation::seq(elaborate_dexpr(e.kids[0], env),
                             elaborate_dexpr(e.kids[1], env));
    case DerivExpr::Kind::Par:
      return Derivation::par(elaborate_dexpr(e.kids[0], env),
                             elaborate_dexpr(e.kids[1], env));
  }
  fail(ErrorKind::ParseError, "unreachable derivation expression", e.pos);
}

}  // namespace detail

inline Env elaborate(const SourceFile& ast) {
  Signature sig;
  for (const Item& item : ast.items) {
    if (const auto* decl = std::get_if<SyntaxDecl>(&item)) {
      try {
        sig.add(decl->name, decl->arity);
      } catch (const Error& e) {
        fail(e.kind(), e.message(), decl->pos);
      }
    }
  }

  Env env(sig);
  for (const Item& item : ast.items) {
    const auto* decl = std::get_if<RuleDecl>(&item);
    if (!decl) continue;

    std::unordered_map<std::string, std::size_t> param_index;
    for (std::size_t i = 0; i < decl->params.size(); ++i) {
      if (!param_index.emplace(decl->params[i], i).second)
        fail(ErrorKind::DuplicateName,
             "parameter '" + decl->params[i] + "' is repeated", decl->pos);
    }
    const std::size_t m = decl->params.size();
    SyntaxMap src = detail::elaborate_ctx(decl->hypotheses, sig, param_index, m);
    SyntaxMap tgt = detail::elaborate_ctx(decl->conclusions, sig, param_index, m);

    if (env.has_name(decl->name))
      fail(ErrorKind::DuplicateName, "'" + decl->name + "' is already defined", decl->pos);

    if (!decl->is_theorem) {
      env.add_rule(ProofGenerator(decl->name, decl->params, std::move(src), std::move(tgt)));
      continue;
    }

    Derivation body = detail::elaborate_dexpr(*decl->body, env);
    DerivationArity arity = [&] {
      try {
        return derivation_arity(body, env);
      } catch (const Error& e) {
        fail(e.kind(), e.message(), decl->pos);
      }
    }();
    if (arity.in != src.output_count() || arity.out != tgt.output_count())
      fail(ErrorKind::ArityMismatch,
           "theorem '" + decl->name + "': body has arity " + std::to_string(arity.in) +
               "->" + std::to_string(arity.out) + " but the claim is " +
               std::to_string(src.output_count()) + "->" +
               std::to_string(tgt.output_count()),
           decl->pos);
    env.add_theorem(
        TheoremStmt{decl->name, decl->params, std::move(src), std::move(tgt), body});
  }
  return env;
}

}  // namespace metacat
