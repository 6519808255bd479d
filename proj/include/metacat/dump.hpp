#pragma once

// Canonical pretty-printer for an elaborated Env. The output re-parses and
// re-elaborates to an equal Env, and dump(parse(dump(x))) == dump(x); the
// shipped corpus files are fixed points of dump after parse.

#include <string>

#include "metacat/proof.hpp"

namespace metacat {

namespace detail {

inline void dump_term(const Tree& t, const std::vector<std::string>& params,
                      std::string& out) {
  if (t.is_leaf()) {
    out += params[t.leaf_id()];
    return;
  }
  out += t.op().name;
  out += '(';
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i > 0) out += ',';
    dump_term(t.children()[i], params, out);
  }
  out += ')';
}

inline void dump_ctx(const SyntaxMap& map, const std::vector<std::string>& params,
                     std::string& out) {
  out += '[';
  for (std::size_t i = 0; i < map.outputs().size(); ++i) {
    if (i > 0) out += ", ";
    dump_term(map.outputs()[i], params, out);
  }
  out += ']';
}

// Precedence: ';' below '*' below atoms. Left-assoc chains print flat;
// right-nested operands keep parentheses so the structure round-trips.
enum class DerivCtx { Seq, Par, Atom };

inline void dump_deriv(const Derivation& d, DerivCtx ctx, std::string& out) {
  switch (d.kind()) {
    case Derivation::Kind::Generator: out += d.name(); return;
    case Derivation::Kind::Identity:
      out += "id " + std::to_string(d.n());
      return;
    case Derivation::Kind::Symmetry:
      out += "sym " + std::to_string(d.block_a()) + " " + std::to_string(d.block_b());
      return;
    case Derivation::Kind::Dup: out += "dup"; return;
    case Derivation::Kind::Drop: out += "drop"; return;
    case Derivation::Kind::Sequential: {
      const bool parens = ctx != DerivCtx::Seq;
      if (parens) out += '(';
      dump_deriv(d.first(), DerivCtx::Seq, out);
      out += " ; ";
      dump_deriv(d.second(), DerivCtx::Par, out);
      if (parens) out += ')';
      return;
    }
    case Derivation::Kind::Parallel: {
      const bool parens = ctx == DerivCtx::Atom;
      if (parens) out += '(';
      dump_deriv(d.first(), DerivCtx::Par, out);
      out += " * ";
      dump_deriv(d.second(), DerivCtx::Atom, out);
      if (parens) out += ')';
      return;
    }
  }
}

inline void dump_params(const std::vector<std::string>& params, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ' ';
    out += params[i];
  }
  out += ')';
}

}  // namespace detail

inline std::string dump_env(const Env& env) {
  std::string out;
  for (const OpRef& op : env.signature().ops())
    out += "syntax " + op->name + " : " + std::to_string(op->arity) + "\n";

  // Rules first, then theorems in dependency order; a theorem only ever
  // references rules and earlier theorems, so the result elaborates.
  for (const ProofGenerator& g : env.rules()) {
    out += "rule " + g.name + " ";
    detail::dump_params(g.params, out);
    out += " : ";
    detail::dump_ctx(g.src, g.params, out);
    out += " => ";
    detail::dump_ctx(g.tgt, g.params, out);
    out += "\n";
  }
  for (const TheoremStmt& t : env.theorems()) {
    out += "thm " + t.name + " ";
    detail::dump_params(t.params, out);
    out += " : ";
    detail::dump_ctx(t.claim_src, t.params, out);
    out += " => ";
    detail::dump_ctx(t.claim_tgt, t.params, out);
    out += " { ";
    detail::dump_deriv(t.body, detail::DerivCtx::Seq, out);
    out += " }\n";
  }
  return out;
}

}  // namespace metacat
