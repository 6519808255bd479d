#pragma once

// The checkable intermediate representation: monogamous acyclic open
// hypergraphs whose edges are Frobenius spiders, constructors (g+) and
// matchers (g-). A syntax map compiles covariantly to constructors
// (compile_plus) or contravariantly to matchers (compile_minus), and a
// graph evaluates as a partial function on tuples of syntax trees by a
// deterministic topological traversal.

#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metacat/errors.hpp"
#include "metacat/syntax.hpp"

namespace metacat {

using WireId = std::size_t;

struct SpiderLabel {
  std::size_t in = 0;
  std::size_t out = 0;
};
struct CtorLabel {
  OpRef op;
};
struct MatchLabel {
  OpRef op;
};
using EdgeLabel = std::variant<SpiderLabel, CtorLabel, MatchLabel>;

inline std::string label_text(const EdgeLabel& label) {
  if (const auto* s = std::get_if<SpiderLabel>(&label))
    return "spider " + std::to_string(s->in) + "," + std::to_string(s->out);
  if (const auto* c = std::get_if<CtorLabel>(&label)) return c->op->name + "+";
  return std::get<MatchLabel>(label).op->name + "-";
}

template <typename Label>
struct GraphEdge {
  Label label;
  std::vector<WireId> inputs;
  std::vector<WireId> outputs;
};

// Open graph with ordered boundaries. Invariants, enforced at construction:
// every wire has exactly one producer (an edge output or an in-boundary
// position) and exactly one consumer (an edge input or an out-boundary
// position), and the producer->consumer relation on edges is acyclic.
template <typename Label>
class OpenGraph {
 public:
  OpenGraph() = default;

  OpenGraph(std::size_t wire_count, std::vector<GraphEdge<Label>> edges,
            std::vector<WireId> in_boundary, std::vector<WireId> out_boundary)
      : wire_count_(wire_count),
        edges_(std::move(edges)),
        in_boundary_(std::move(in_boundary)),
        out_boundary_(std::move(out_boundary)) {
    validate();
    topo_order_ = compute_topo_order();
  }

  static OpenGraph identity(std::size_t n) {
    std::vector<WireId> wires;
    for (std::size_t i = 0; i < n; ++i) wires.push_back(i);
    return OpenGraph(n, {}, wires, wires);
  }

  // Routes input block a after input block b; no edges, pure rewiring.
  static OpenGraph symmetry(std::size_t a, std::size_t b) {
    std::vector<WireId> in, out;
    for (std::size_t i = 0; i < a + b; ++i) in.push_back(i);
    for (std::size_t i = 0; i < b; ++i) out.push_back(a + i);
    for (std::size_t i = 0; i < a; ++i) out.push_back(i);
    return OpenGraph(a + b, {}, std::move(in), std::move(out));
  }

  static OpenGraph single(Label label, std::size_t in_arity, std::size_t out_arity) {
    std::vector<WireId> in, out;
    for (std::size_t i = 0; i < in_arity; ++i) in.push_back(i);
    for (std::size_t i = 0; i < out_arity; ++i) out.push_back(in_arity + i);
    GraphEdge<Label> edge{std::move(label), in, out};
    return OpenGraph(in_arity + out_arity, {std::move(edge)}, std::move(in), std::move(out));
  }

  std::size_t wire_count() const { return wire_count_; }
  const std::vector<GraphEdge<Label>>& edges() const { return edges_; }
  const std::vector<WireId>& in_boundary() const { return in_boundary_; }
  const std::vector<WireId>& out_boundary() const { return out_boundary_; }
  std::size_t in_arity() const { return in_boundary_.size(); }
  std::size_t out_arity() const { return out_boundary_.size(); }

  // Deterministic evaluation order: Kahn's algorithm, ties broken by
  // ascending edge index.
  const std::vector<std::size_t>& topo_order() const { return topo_order_; }

 private:
  void validate() const {
    std::vector<int> producers(wire_count_, 0), consumers(wire_count_, 0);
    auto touch = [&](std::vector<int>& side, WireId w) {
      if (w >= wire_count_)
        fail(ErrorKind::ArityMismatch, "wire id " + std::to_string(w) + " out of range");
      side[w] += 1;
    };
    for (WireId w : in_boundary_) touch(producers, w);
    for (WireId w : out_boundary_) touch(consumers, w);
    for (const auto& e : edges_) {
      for (WireId w : e.inputs) touch(consumers, w);
      for (WireId w : e.outputs) touch(producers, w);
    }
    for (WireId w = 0; w < wire_count_; ++w)
      if (producers[w] != 1 || consumers[w] != 1)
        fail(ErrorKind::ArityMismatch,
             "wire " + std::to_string(w) + " is not monogamous (" +
                 std::to_string(producers[w]) + " producers, " +
                 std::to_string(consumers[w]) + " consumers)");
  }

  std::vector<std::size_t> compute_topo_order() const {
    std::vector<std::optional<std::size_t>> producer_edge(wire_count_);
    for (std::size_t e = 0; e < edges_.size(); ++e)
      for (WireId w : edges_[e].outputs) producer_edge[w] = e;

    std::vector<std::size_t> pending(edges_.size(), 0);
    std::vector<std::vector<std::size_t>> dependents(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      for (WireId w : edges_[e].inputs) {
        if (producer_edge[w]) {
          pending[e] += 1;
          dependents[*producer_edge[w]].push_back(e);
        }
      }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (pending[e] == 0) ready.push(e);

    std::vector<std::size_t> order;
    order.reserve(edges_.size());
    while (!ready.empty()) {
      std::size_t e = ready.top();
      ready.pop();
      order.push_back(e);
      for (std::size_t d : dependents[e])
        if (--pending[d] == 0) ready.push(d);
    }
    if (order.size() != edges_.size())
      fail(ErrorKind::CyclicGraph, "edge dependencies contain a cycle");
    return order;
  }

  std::size_t wire_count_ = 0;
  std::vector<GraphEdge<Label>> edges_;
  std::vector<WireId> in_boundary_;
  std::vector<WireId> out_boundary_;
  std::vector<std::size_t> topo_order_;
};

// Glues f's out boundary to g's in boundary pairwise; edge order is f's
// edges then g's.
template <typename Label>
OpenGraph<Label> graph_sequential(const OpenGraph<Label>& f, const OpenGraph<Label>& g) {
  if (f.out_arity() != g.in_arity())
    fail(ErrorKind::ArityMismatch,
         "sequential composition: " + std::to_string(f.out_arity()) + " outputs vs " +
             std::to_string(g.in_arity()) + " inputs");
  std::vector<std::optional<WireId>> remap(g.wire_count());
  for (std::size_t i = 0; i < g.in_arity(); ++i)
    remap[g.in_boundary()[i]] = f.out_boundary()[i];
  WireId next = f.wire_count();
  for (WireId w = 0; w < g.wire_count(); ++w)
    if (!remap[w]) remap[w] = next++;

  std::vector<GraphEdge<Label>> edges = f.edges();
  edges.reserve(edges.size() + g.edges().size());
  for (const auto& e : g.edges()) {
    GraphEdge<Label> copy{e.label, {}, {}};
    for (WireId w : e.inputs) copy.inputs.push_back(*remap[w]);
    for (WireId w : e.outputs) copy.outputs.push_back(*remap[w]);
    edges.push_back(std::move(copy));
  }
  std::vector<WireId> out;
  for (WireId w : g.out_boundary()) out.push_back(*remap[w]);
  return OpenGraph<Label>(next, std::move(edges), f.in_boundary(), std::move(out));
}

// Disjoint union; g's wires are shifted past f's and boundaries concatenate.
template <typename Label>
OpenGraph<Label> graph_parallel(const OpenGraph<Label>& f, const OpenGraph<Label>& g) {
  const std::size_t shift = f.wire_count();
  std::vector<GraphEdge<Label>> edges = f.edges();
  edges.reserve(edges.size() + g.edges().size());
  for (const auto& e : g.edges()) {
    GraphEdge<Label> copy{e.label, {}, {}};
    for (WireId w : e.inputs) copy.inputs.push_back(w + shift);
    for (WireId w : e.outputs) copy.outputs.push_back(w + shift);
    edges.push_back(std::move(copy));
  }
  std::vector<WireId> in = f.in_boundary(), out = f.out_boundary();
  for (WireId w : g.in_boundary()) in.push_back(w + shift);
  for (WireId w : g.out_boundary()) out.push_back(w + shift);
  return OpenGraph<Label>(shift + g.wire_count(), std::move(edges), std::move(in),
                          std::move(out));
}

using OpenHypergraph = OpenGraph<EdgeLabel>;

inline OpenHypergraph hg_identity(std::size_t n) { return OpenHypergraph::identity(n); }

inline OpenHypergraph hg_symmetry(std::size_t a, std::size_t b) {
  return OpenHypergraph::symmetry(a, b);
}

inline OpenHypergraph hg_spider(std::size_t m, std::size_t n) {
  return OpenHypergraph::single(SpiderLabel{m, n}, m, n);
}

inline OpenHypergraph hg_constructor(OpRef op) {
  const std::size_t arity = op->arity;
  return OpenHypergraph::single(CtorLabel{std::move(op)}, arity, 1);
}

inline OpenHypergraph hg_matcher(OpRef op) {
  const std::size_t arity = op->arity;
  return OpenHypergraph::single(MatchLabel{std::move(op)}, 1, arity);
}

inline OpenHypergraph hg_sequential(const OpenHypergraph& f, const OpenHypergraph& g) {
  return graph_sequential(f, g);
}

inline OpenHypergraph hg_parallel(const OpenHypergraph& f, const OpenHypergraph& g) {
  return graph_parallel(f, g);
}

namespace detail {

inline void count_uses(const Tree& t, std::vector<std::size_t>& uses) {
  if (t.is_leaf()) {
    uses[t.leaf_id()] += 1;
    return;
  }
  for (const Tree& c : t.children()) count_uses(c, uses);
}

}  // namespace detail

// Covariant compilation of u : m->n. Each metavariable i used k times
// becomes a Spider{1,k} (k = 0 discards), each tree node one constructor
// edge. Shared subterms are emitted once per occurrence.
inline OpenHypergraph compile_plus(const SyntaxMap& u) {
  const std::size_t m = u.context_size();
  std::vector<std::size_t> uses(m, 0);
  for (const Tree& t : u.outputs()) detail::count_uses(t, uses);

  std::vector<GraphEdge<EdgeLabel>> edges;
  WireId next = m;
  std::vector<std::vector<WireId>> slots(m);
  std::vector<std::size_t> cursor(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    GraphEdge<EdgeLabel> spider{SpiderLabel{1, uses[i]}, {i}, {}};
    for (std::size_t k = 0; k < uses[i]; ++k) spider.outputs.push_back(next++);
    slots[i] = spider.outputs;
    edges.push_back(std::move(spider));
  }

  // Children before parents, left to right across the outputs.
  std::function<WireId(const Tree&)> build = [&](const Tree& t) -> WireId {
    if (t.is_leaf()) return slots[t.leaf_id()][cursor[t.leaf_id()]++];
    std::vector<WireId> child_wires;
    child_wires.reserve(t.children().size());
    for (const Tree& c : t.children()) child_wires.push_back(build(c));
    WireId out = next++;
    edges.push_back({CtorLabel{t.op_ref()}, std::move(child_wires), {out}});
    return out;
  };
  std::vector<WireId> out_boundary;
  out_boundary.reserve(u.output_count());
  for (const Tree& t : u.outputs()) out_boundary.push_back(build(t));

  std::vector<WireId> in_boundary;
  for (std::size_t i = 0; i < m; ++i) in_boundary.push_back(i);
  return OpenHypergraph(next, std::move(edges), std::move(in_boundary),
                        std::move(out_boundary));
}

// Contravariant mirror of compile_plus: u : m->n becomes a graph n->m whose
// tree nodes are matcher edges and whose metavariables i used k times become
// Spider{k,1} (k = 0 is the fresh-leaf spider).
inline OpenHypergraph compile_minus(const SyntaxMap& u) {
  const std::size_t m = u.context_size();
  const std::size_t n = u.output_count();
  std::vector<GraphEdge<EdgeLabel>> edges;
  WireId next = n;
  std::vector<std::vector<WireId>> occurrences(m);

  // Parents before children: matching flows top-down.
  std::function<void(const Tree&, WireId)> split = [&](const Tree& t, WireId wire) {
    if (t.is_leaf()) {
      occurrences[t.leaf_id()].push_back(wire);
      return;
    }
    std::vector<WireId> child_wires;
    child_wires.reserve(t.children().size());
    for (std::size_t i = 0; i < t.children().size(); ++i) child_wires.push_back(next++);
    edges.push_back({MatchLabel{t.op_ref()}, {wire}, child_wires});
    for (std::size_t i = 0; i < t.children().size(); ++i)
      split(t.children()[i], child_wires[i]);
  };
  for (std::size_t j = 0; j < n; ++j) split(u.outputs()[j], j);

  std::vector<WireId> out_boundary;
  out_boundary.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    WireId out = next++;
    edges.push_back({SpiderLabel{occurrences[i].size(), 1}, occurrences[i], {out}});
    out_boundary.push_back(out);
  }

  std::vector<WireId> in_boundary;
  for (std::size_t j = 0; j < n; ++j) in_boundary.push_back(j);
  return OpenHypergraph(next, std::move(edges), std::move(in_boundary),
                        std::move(out_boundary));
}

// Where and why a partial evaluation came out undefined.
struct MatchFailure {
  std::size_t edge = 0;
  std::string expected_op;
  Tree actual;
};
struct EqualityFailure {
  std::size_t edge = 0;
  Tree left;
  Tree right;
};
using EvalFailure = std::variant<MatchFailure, EqualityFailure>;

inline std::string describe(const EvalFailure& f) {
  if (const auto* mf = std::get_if<MatchFailure>(&f))
    return "match failure at edge " + std::to_string(mf->edge) + ": expected " +
           mf->expected_op + ", got " + render_tree(mf->actual);
  const auto& ef = std::get<EqualityFailure>(f);
  return "equality failure at edge " + std::to_string(ef.edge) + ": " +
         render_tree(ef.left) + " != " + render_tree(ef.right);
}

inline std::size_t failure_edge(const EvalFailure& f) {
  if (const auto* mf = std::get_if<MatchFailure>(&f)) return mf->edge;
  return std::get<EqualityFailure>(f).edge;
}

struct EvalTrace {
  std::vector<std::optional<Tree>> wires;   // values computed before any stop
  std::optional<EvalFailure> failure;
  std::optional<std::vector<Tree>> outputs;  // set iff no failure
};

// Runs the partial-function semantics, keeping every wire value for
// diagnostics and diagram labelling. Stops at the first failing edge in
// traversal order.
inline EvalTrace evaluate_traced(const OpenHypergraph& h, std::span<const Tree> inputs,
                                 FreshCounter& fresh) {
  if (inputs.size() != h.in_arity())
    fail(ErrorKind::ArityMismatch,
         "evaluate: expected " + std::to_string(h.in_arity()) + " inputs, got " +
             std::to_string(inputs.size()));
  EvalTrace trace;
  trace.wires.resize(h.wire_count());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    trace.wires[h.in_boundary()[i]] = inputs[i];

  for (std::size_t e : h.topo_order()) {
    const auto& edge = h.edges()[e];
    std::vector<Tree> in;
    in.reserve(edge.inputs.size());
    for (WireId w : edge.inputs) in.push_back(*trace.wires[w]);

    if (const auto* spider = std::get_if<SpiderLabel>(&edge.label)) {
      std::optional<Tree> value;
      if (spider->in == 0) {
        value = Tree::leaf(fresh.fresh());
      } else {
        for (std::size_t k = 1; k < in.size(); ++k) {
          if (!tree_equal(in[0], in[k])) {
            trace.failure = EqualityFailure{e, in[0], in[k]};
            return trace;
          }
        }
        value = in[0];
      }
      for (WireId w : edge.outputs) trace.wires[w] = *value;
    } else if (const auto* ctor = std::get_if<CtorLabel>(&edge.label)) {
      trace.wires[edge.outputs[0]] = Tree::node(ctor->op, std::move(in));
    } else {
      const auto& matcher = std::get<MatchLabel>(edge.label);
      if (in[0].is_leaf() || !same_op(in[0].op(), *matcher.op)) {
        trace.failure = MatchFailure{e, matcher.op->name, in[0]};
        return trace;
      }
      for (std::size_t k = 0; k < edge.outputs.size(); ++k)
        trace.wires[edge.outputs[k]] = in[0].children()[k];
    }
  }

  std::vector<Tree> out;
  out.reserve(h.out_arity());
  for (WireId w : h.out_boundary()) out.push_back(*trace.wires[w]);
  trace.outputs = std::move(out);
  return trace;
}

using EvalResult = std::variant<std::vector<Tree>, EvalFailure>;

inline EvalResult evaluate(const OpenHypergraph& h, std::span<const Tree> inputs,
                           FreshCounter& fresh) {
  EvalTrace trace = evaluate_traced(h, inputs, fresh);
  if (trace.failure) return *trace.failure;
  return *std::move(trace.outputs);
}

inline bool eval_defined(const EvalResult& r) {
  return std::holds_alternative<std::vector<Tree>>(r);
}

inline const std::vector<Tree>& eval_values(const EvalResult& r) {
  return std::get<std::vector<Tree>>(r);
}

}  // namespace metacat
