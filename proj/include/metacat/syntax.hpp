#pragma once

// Signatures, syntax trees and syntax maps.
//
// A syntax map m->n is an n-tuple of trees over metavariables 0..m-1. Read
// covariantly it builds terms (instantiate); read contravariantly it is a
// pattern (match_against). Composition is substitution of metavariables,
// the kernel's only primitive operation.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metacat/errors.hpp"

namespace metacat {

struct OpSymbol {
  std::string name;
  std::size_t arity = 0;  // number of inputs; codomain is always 1
};

// Symbols are interned by the owning Signature; nodes hold shared refs so
// trees stay valid independently of any particular Signature object.
using OpRef = std::shared_ptr<const OpSymbol>;

inline bool same_op(const OpSymbol& a, const OpSymbol& b) {
  return &a == &b || (a.arity == b.arity && a.name == b.name);
}

class Signature {
 public:
  Signature() = default;

  const OpRef& add(std::string name, std::size_t arity) {
    if (index_.count(name) > 0)
      fail(ErrorKind::DuplicateSymbol, "'" + name + "' is declared twice");
    index_.emplace(name, ops_.size());
    ops_.push_back(std::make_shared<OpSymbol>(OpSymbol{std::move(name), arity}));
    return ops_.back();
  }

  OpRef find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : ops_[it->second];
  }

  const OpRef& at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
      fail(ErrorKind::UnknownSymbol, "no operation named '" + std::string(name) + "'");
    return ops_[it->second];
  }

  std::size_t size() const { return ops_.size(); }
  const std::vector<OpRef>& ops() const { return ops_; }

  friend bool operator==(const Signature& a, const Signature& b) {
    if (a.ops_.size() != b.ops_.size()) return false;
    for (std::size_t i = 0; i < a.ops_.size(); ++i)
      if (!same_op(*a.ops_[i], *b.ops_[i])) return false;
    return true;
  }

 private:
  std::vector<OpRef> ops_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Signature declare_signature(
    const std::vector<std::pair<std::string, std::size_t>>& decls) {
  Signature sig;
  for (const auto& [name, arity] : decls) sig.add(name, arity);
  return sig;
}

// A rooted syntax tree: either a numbered leaf (metavariable or fresh value)
// or an operation applied to exactly op.arity subtrees. Immutable; copies
// share structure.
class Tree {
 public:
  static Tree leaf(std::size_t id) {
    return Tree(std::make_shared<const Rep>(Rep{nullptr, id, {}}));
  }

  static Tree node(OpRef op, std::vector<Tree> children) {
    if (children.size() != op->arity)
      fail(ErrorKind::ArityMismatch,
           "'" + op->name + "' takes " + std::to_string(op->arity) +
               " children, got " + std::to_string(children.size()));
    return Tree(std::make_shared<const Rep>(Rep{std::move(op), 0, std::move(children)}));
  }

  bool is_leaf() const { return rep_->op == nullptr; }
  std::size_t leaf_id() const { return rep_->leaf_id; }
  const OpSymbol& op() const { return *rep_->op; }
  const OpRef& op_ref() const { return rep_->op; }
  const std::vector<Tree>& children() const { return rep_->children; }

 private:
  struct Rep {
    OpRef op;  // null for leaves
    std::size_t leaf_id;
    std::vector<Tree> children;
  };

  explicit Tree(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  friend bool tree_equal(const Tree& a, const Tree& b);
  std::shared_ptr<const Rep> rep_;
};

inline bool tree_equal(const Tree& a, const Tree& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.leaf_id() == b.leaf_id();
  if (!same_op(a.op(), b.op())) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!tree_equal(a.children()[i], b.children()[i])) return false;
  return true;
}

inline bool operator==(const Tree& a, const Tree& b) { return tree_equal(a, b); }

inline void render_tree(const Tree& t, std::string& out) {
  if (t.is_leaf()) {
    out += 'x';
    out += std::to_string(t.leaf_id());
    return;
  }
  out += t.op().name;
  out += '(';
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i > 0) out += ',';
    render_tree(t.children()[i], out);
  }
  out += ')';
}

inline std::string render_tree(const Tree& t) {
  std::string out;
  render_tree(t, out);
  return out;
}

// Hands out leaf ids that never collide with anything below the value it
// was seeded with. Confined to a single evaluation run.
struct FreshCounter {
  std::size_t next = 0;

  std::size_t fresh() { return next++; }
};

namespace detail {

inline void check_leaf_bound(const Tree& t, std::size_t m) {
  if (t.is_leaf()) {
    if (t.leaf_id() >= m)
      fail(ErrorKind::ArityMismatch,
           "metavariable x" + std::to_string(t.leaf_id()) +
               " out of range for context of size " + std::to_string(m));
    return;
  }
  for (const Tree& c : t.children()) check_leaf_bound(c, m);
}

inline Tree substitute(const Tree& t, std::span<const Tree> args) {
  if (t.is_leaf()) return args[t.leaf_id()];
  std::vector<Tree> kids;
  kids.reserve(t.children().size());
  for (const Tree& c : t.children()) kids.push_back(substitute(c, args));
  return Tree::node(t.op_ref(), std::move(kids));
}

inline Tree shift_leaves(const Tree& t, std::size_t offset) {
  if (offset == 0) return t;
  if (t.is_leaf()) return Tree::leaf(t.leaf_id() + offset);
  std::vector<Tree> kids;
  kids.reserve(t.children().size());
  for (const Tree& c : t.children()) kids.push_back(shift_leaves(c, offset));
  return Tree::node(t.op_ref(), std::move(kids));
}

inline bool match_tree(const Tree& pattern, const Tree& subject,
                       std::vector<std::optional<Tree>>& binding) {
  if (pattern.is_leaf()) {
    auto& slot = binding[pattern.leaf_id()];
    if (!slot) {
      slot = subject;
      return true;
    }
    return tree_equal(*slot, subject);  // repeated metavariable
  }
  if (subject.is_leaf() || !same_op(pattern.op(), subject.op())) return false;
  for (std::size_t i = 0; i < pattern.children().size(); ++i)
    if (!match_tree(pattern.children()[i], subject.children()[i], binding)) return false;
  return true;
}

}  // namespace detail

// An arrow m->n of the syntax category: n trees over metavariables 0..m-1.
class SyntaxMap {
 public:
  SyntaxMap() = default;  // the empty map 0->0

  SyntaxMap(std::size_t context_size, std::vector<Tree> outputs)
      : m_(context_size), outputs_(std::move(outputs)) {
    for (const Tree& t : outputs_) detail::check_leaf_bound(t, m_);
  }

  std::size_t context_size() const { return m_; }   // m
  std::size_t output_count() const { return outputs_.size(); }  // n
  const std::vector<Tree>& outputs() const { return outputs_; }

  friend bool operator==(const SyntaxMap& a, const SyntaxMap& b) {
    if (a.m_ != b.m_ || a.outputs_.size() != b.outputs_.size()) return false;
    for (std::size_t i = 0; i < a.outputs_.size(); ++i)
      if (!tree_equal(a.outputs_[i], b.outputs_[i])) return false;
    return true;
  }

 private:
  std::size_t m_ = 0;
  std::vector<Tree> outputs_;
};

inline SyntaxMap smap_identity(std::size_t n) {
  std::vector<Tree> outs;
  outs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) outs.push_back(Tree::leaf(i));
  return SyntaxMap(n, std::move(outs));
}

inline std::vector<Tree> instantiate(const SyntaxMap& u, std::span<const Tree> args) {
  if (args.size() != u.context_size())
    fail(ErrorKind::ArityMismatch,
         "instantiate: expected " + std::to_string(u.context_size()) +
             " arguments, got " + std::to_string(args.size()));
  std::vector<Tree> out;
  out.reserve(u.output_count());
  for (const Tree& t : u.outputs()) out.push_back(detail::substitute(t, args));
  return out;
}

inline SyntaxMap smap_compose(const SyntaxMap& u, const SyntaxMap& v) {
  if (u.output_count() != v.context_size())
    fail(ErrorKind::ArityMismatch,
         "compose: inner arities differ (" + std::to_string(u.output_count()) +
             " vs " + std::to_string(v.context_size()) + ")");
  return SyntaxMap(u.context_size(), instantiate(v, u.outputs()));
}

inline SyntaxMap smap_tensor(const SyntaxMap& u, const SyntaxMap& v) {
  std::vector<Tree> outs;
  outs.reserve(u.output_count() + v.output_count());
  for (const Tree& t : u.outputs()) outs.push_back(t);
  for (const Tree& t : v.outputs())
    outs.push_back(detail::shift_leaves(t, u.context_size()));
  return SyntaxMap(u.context_size() + v.context_size(), std::move(outs));
}

// Matches the n subjects against u's output patterns. Returns the m bindings
// on success; metavariables that do not occur in u receive fresh leaves, in
// increasing index order. Match failure is undefinedness, not an error.
inline std::optional<std::vector<Tree>> match_against(const SyntaxMap& u,
                                                      std::span<const Tree> subjects,
                                                      FreshCounter& fresh) {
  if (subjects.size() != u.output_count())
    fail(ErrorKind::ArityMismatch,
         "match: expected " + std::to_string(u.output_count()) + " subjects, got " +
             std::to_string(subjects.size()));
  std::vector<std::optional<Tree>> binding(u.context_size());
  for (std::size_t j = 0; j < subjects.size(); ++j)
    if (!detail::match_tree(u.outputs()[j], subjects[j], binding)) return std::nullopt;
  std::vector<Tree> result;
  result.reserve(u.context_size());
  for (std::size_t i = 0; i < u.context_size(); ++i)
    result.push_back(binding[i] ? *binding[i] : Tree::leaf(fresh.fresh()));
  return result;
}

}  // namespace metacat
