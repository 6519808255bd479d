#pragma once

// Graphviz export of a theorem's dataflow graph. Box nodes are IR edges
// (g+ / g- / spider m,n) or, at proof granularity, whole derivation atoms;
// wires are point nodes, arcs carry port indices, and boundary nodes are
// in<i> / out<j>. With values, each wire is labelled with the tree that
// flowed over it during the check, up to the failing edge if one failed.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metacat/hypergraph.hpp"
#include "metacat/oracle.hpp"
#include "metacat/proof.hpp"

namespace metacat {

enum class DotLevel { Ir, Proof };

namespace detail {

struct ProofAtom {
  std::string text;
};

using ProofGraph = OpenGraph<ProofAtom>;

inline ProofGraph compile_proof_graph(const Derivation& d, const Env& env) {
  switch (d.kind()) {
    case Derivation::Kind::Generator: {
      DerivationArity arity = derivation_arity(d, env);
      return ProofGraph::single(ProofAtom{d.name()}, arity.in, arity.out);
    }
    case Derivation::Kind::Identity: return ProofGraph::identity(d.n());
    case Derivation::Kind::Symmetry: return ProofGraph::symmetry(d.block_a(), d.block_b());
    case Derivation::Kind::Dup: return ProofGraph::single(ProofAtom{"dup"}, 1, 2);
    case Derivation::Kind::Drop: return ProofGraph::single(ProofAtom{"drop"}, 1, 0);
    case Derivation::Kind::Sequential:
      return graph_sequential(compile_proof_graph(d.first(), env),
                              compile_proof_graph(d.second(), env));
    case Derivation::Kind::Parallel:
      return graph_parallel(compile_proof_graph(d.first(), env),
                            compile_proof_graph(d.second(), env));
  }
  fail(ErrorKind::ArityMismatch, "unreachable derivation kind");
}

struct ProofTrace {
  std::vector<std::optional<Tree>> wires;
  std::optional<std::size_t> failed_edge;
};

// Mirrors evaluate_traced at derivation granularity: one step per atom,
// generator steps via match + instantiate.
inline ProofTrace evaluate_proof_traced(const ProofGraph& g, const Env& env,
                                        std::span<const Tree> inputs, FreshCounter& fresh) {
  ProofTrace trace;
  trace.wires.resize(g.wire_count());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    trace.wires[g.in_boundary()[i]] = inputs[i];
  for (std::size_t e : g.topo_order()) {
    const auto& edge = g.edges()[e];
    std::vector<Tree> in;
    in.reserve(edge.inputs.size());
    for (WireId w : edge.inputs) in.push_back(*trace.wires[w]);
    std::optional<std::vector<Tree>> out;
    if (edge.label.text == "dup") {
      out = std::vector<Tree>{in[0], in[0]};
    } else if (edge.label.text == "drop") {
      out = std::vector<Tree>{};
    } else {
      Env::Span span = env.span_of(edge.label.text);
      auto bindings = match_against(*span.src, in, fresh);
      if (bindings) out = instantiate(*span.tgt, *bindings);
    }
    if (!out) {
      trace.failed_edge = e;
      return trace;
    }
    for (std::size_t k = 0; k < edge.outputs.size(); ++k)
      trace.wires[edge.outputs[k]] = (*out)[k];
  }
  return trace;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

template <typename Label>
std::string render_dot(const OpenGraph<Label>& graph,
                       const std::vector<std::optional<Tree>>& values, bool with_values,
                       std::optional<std::size_t> failed_edge,
                       const std::string& graph_name,
                       const std::function<std::string(const Label&)>& label_text_of) {
  std::string out;
  out += "digraph \"" + dot_escape(graph_name) + "\" {\n";
  out += "  rankdir=LR;\n";
  out += "  node [fontname=\"monospace\"];\n";

  for (std::size_t i = 0; i < graph.in_arity(); ++i)
    out += "  in" + std::to_string(i) + " [shape=plaintext];\n";
  for (std::size_t j = 0; j < graph.out_arity(); ++j)
    out += "  out" + std::to_string(j) + " [shape=plaintext];\n";

  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    out += "  e" + std::to_string(e) + " [shape=box, label=\"" +
           dot_escape(label_text_of(graph.edges()[e].label)) + "\"";
    if (failed_edge && *failed_edge == e) out += ", color=red, penwidth=2";
    out += "];\n";
  }

  for (WireId w = 0; w < graph.wire_count(); ++w) {
    out += "  w" + std::to_string(w);
    if (with_values) {
      std::string label = w < values.size() && values[w] ? render_tree(*values[w]) : "?";
      out += " [shape=none, label=\"" + dot_escape(label) + "\"];\n";
    } else {
      out += " [shape=point];\n";
    }
  }

  for (std::size_t i = 0; i < graph.in_arity(); ++i)
    out += "  in" + std::to_string(i) + " -> w" +
           std::to_string(graph.in_boundary()[i]) + ";\n";
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const auto& edge = graph.edges()[e];
    for (std::size_t k = 0; k < edge.inputs.size(); ++k)
      out += "  w" + std::to_string(edge.inputs[k]) + " -> e" + std::to_string(e) +
             " [headlabel=\"" + std::to_string(k) + "\"];\n";
    for (std::size_t k = 0; k < edge.outputs.size(); ++k)
      out += "  e" + std::to_string(e) + " -> w" + std::to_string(edge.outputs[k]) +
             " [taillabel=\"" + std::to_string(k) + "\"];\n";
  }
  for (std::size_t j = 0; j < graph.out_arity(); ++j)
    out += "  w" + std::to_string(graph.out_boundary()[j]) + " -> out" +
           std::to_string(j) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace detail

// DOT text for a theorem's body. Inputs with --values are the instantiated
// hypotheses of the claim at the generic metavariable tuple; output is
// byte-deterministic for a given input.
inline std::string export_dot(const Env& env, const TheoremStmt& thm, bool with_values,
                              DotLevel level) {
  const std::size_t m = thm.metavar_count();
  std::vector<Tree> leaves;
  for (std::size_t i = 0; i < m; ++i) leaves.push_back(Tree::leaf(i));

  if (level == DotLevel::Proof) {
    detail::ProofGraph graph = detail::compile_proof_graph(thm.body, env);
    std::vector<std::optional<Tree>> values;
    std::optional<std::size_t> failed;
    if (with_values) {
      FreshCounter fresh{m};
      detail::ProofTrace trace = detail::evaluate_proof_traced(
          graph, env, instantiate(thm.claim_src, leaves), fresh);
      values = std::move(trace.wires);
      failed = trace.failed_edge;
    }
    return detail::render_dot<detail::ProofAtom>(
        graph, values, with_values, failed, thm.name,
        [](const detail::ProofAtom& a) { return a.text; });
  }

  OpenHypergraph graph = compile_derivation(thm.body, env);
  std::vector<std::optional<Tree>> values;
  std::optional<std::size_t> failed;
  if (with_values) {
    FreshCounter fresh{m};
    EvalTrace trace = evaluate_traced(graph, instantiate(thm.claim_src, leaves), fresh);
    values = std::move(trace.wires);
    if (trace.failure) failed = failure_edge(*trace.failure);
  }
  return detail::render_dot<EdgeLabel>(graph, values, with_values, failed, thm.name,
                                       [](const EdgeLabel& l) { return label_text(l); });
}

}  // namespace metacat
