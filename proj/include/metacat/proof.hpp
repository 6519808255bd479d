#pragma once

// Proof generators as spans over syntax, derivation terms, and the checker.
//
// A generator f : a->b carries a span src : m->a, tgt : m->b in a common
// metavariable context. Derivations are symmetric-monoidal terms over
// generators (plus dup/drop sugar); checking compiles a derivation to the
// hypergraph IR and evaluates it at the generic metavariable tuple.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "metacat/errors.hpp"
#include "metacat/hypergraph.hpp"
#include "metacat/syntax.hpp"

namespace metacat {

struct ProofGenerator {
  std::string name;
  std::vector<std::string> params;  // display names; size equals the context
  SyntaxMap src;                    // m -> a (hypotheses)
  SyntaxMap tgt;                    // m -> b (conclusions)

  ProofGenerator(std::string name_, std::vector<std::string> params_, SyntaxMap src_,
                 SyntaxMap tgt_)
      : name(std::move(name_)),
        params(std::move(params_)),
        src(std::move(src_)),
        tgt(std::move(tgt_)) {
    if (src.context_size() != tgt.context_size())
      fail(ErrorKind::ArityMismatch,
           "generator '" + name + "': source and target contexts differ");
    if (params.size() != src.context_size())
      fail(ErrorKind::ArityMismatch,
           "generator '" + name + "': parameter list does not match context size");
  }

  std::size_t metavar_count() const { return src.context_size(); }
  std::size_t hyp_count() const { return src.output_count(); }
  std::size_t conc_count() const { return tgt.output_count(); }

  friend bool operator==(const ProofGenerator& a, const ProofGenerator& b) {
    return a.name == b.name && a.params == b.params && a.src == b.src && a.tgt == b.tgt;
  }
};

// A symmetric-monoidal term over generators. Immutable; copies share nodes.
class Derivation {
 public:
  enum class Kind { Generator, Identity, Symmetry, Sequential, Parallel, Dup, Drop };

  static Derivation gen(std::string name) {
    return Derivation(Node{Kind::Generator, std::move(name), 0, 0, {}});
  }
  static Derivation id(std::size_t n) { return Derivation(Node{Kind::Identity, {}, n, 0, {}}); }
  static Derivation sym(std::size_t a, std::size_t b) {
    return Derivation(Node{Kind::Symmetry, {}, a, b, {}});
  }
  static Derivation seq(Derivation first, Derivation second) {
    return Derivation(Node{Kind::Sequential, {}, 0, 0, {std::move(first), std::move(second)}});
  }
  static Derivation par(Derivation left, Derivation right) {
    return Derivation(Node{Kind::Parallel, {}, 0, 0, {std::move(left), std::move(right)}});
  }
  static Derivation dup() { return Derivation(Node{Kind::Dup, {}, 0, 0, {}}); }
  static Derivation drop() { return Derivation(Node{Kind::Drop, {}, 0, 0, {}}); }

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  std::size_t n() const { return node_->a; }  // Identity width
  std::size_t block_a() const { return node_->a; }
  std::size_t block_b() const { return node_->b; }
  const Derivation& first() const { return node_->kids[0]; }
  const Derivation& second() const { return node_->kids[1]; }

  friend bool operator==(const Derivation& x, const Derivation& y) {
    if (x.node_ == y.node_) return true;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Kind::Generator: return x.name() == y.name();
      case Kind::Identity: return x.n() == y.n();
      case Kind::Symmetry: return x.block_a() == y.block_a() && x.block_b() == y.block_b();
      case Kind::Sequential:
      case Kind::Parallel: return x.first() == y.first() && x.second() == y.second();
      case Kind::Dup:
      case Kind::Drop: return true;
    }
    return false;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::size_t a = 0, b = 0;
    std::vector<Derivation> kids;
  };

  explicit Derivation(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}
  std::shared_ptr<const Node> node_;
};

struct TheoremStmt {
  std::string name;
  std::vector<std::string> params;
  SyntaxMap claim_src;  // s : m -> a
  SyntaxMap claim_tgt;  // t : m -> b
  Derivation body;

  std::size_t metavar_count() const { return claim_src.context_size(); }

  void validate() const {
    if (claim_src.context_size() != claim_tgt.context_size())
      fail(ErrorKind::ArityMismatch,
           "theorem '" + name + "': source and target contexts differ");
    if (params.size() != claim_src.context_size())
      fail(ErrorKind::ArityMismatch,
           "theorem '" + name + "': parameter list does not match context size");
  }

  friend bool operator==(const TheoremStmt& x, const TheoremStmt& y) {
    return x.name == y.name && x.params == y.params && x.claim_src == y.claim_src &&
           x.claim_tgt == y.claim_tgt && x.body == y.body;
  }
};

struct DerivationArity {
  std::size_t in = 0;
  std::size_t out = 0;

  friend bool operator==(DerivationArity a, DerivationArity b) {
    return a.in == b.in && a.out == b.out;
  }
};

// Outcome of checking one theorem. Static problems (unknown names, arity
// errors) are distinguished from Invalid: an invalid proof is a well-formed
// derivation whose partial function is undefined or lands off-claim.
struct ConclusionMismatch {
  std::size_t index = 0;
  Tree expected;
  Tree actual;
};

class CheckReport {
 public:
  enum class Status { Valid, Invalid, Static };

  static CheckReport valid() { return CheckReport(Status::Valid); }
  static CheckReport invalid(EvalFailure failure) {
    CheckReport r(Status::Invalid);
    r.eval_failure_ = std::move(failure);
    return r;
  }
  static CheckReport invalid(ConclusionMismatch mismatch) {
    CheckReport r(Status::Invalid);
    r.mismatch_ = std::move(mismatch);
    return r;
  }
  static CheckReport invalid_undefined() { return CheckReport(Status::Invalid); }
  static CheckReport static_error(std::string description) {
    CheckReport r(Status::Static);
    r.description_ = std::move(description);
    return r;
  }

  Status status() const { return status_; }
  bool is_valid() const { return status_ == Status::Valid; }
  const std::optional<EvalFailure>& eval_failure() const { return eval_failure_; }
  const std::optional<ConclusionMismatch>& mismatch() const { return mismatch_; }
  const std::string& static_description() const { return description_; }

  std::string describe() const {
    switch (status_) {
      case Status::Valid: return "valid";
      case Status::Static: return "error: " + description_;
      case Status::Invalid: break;
    }
    if (eval_failure_) return "invalid: " + metacat::describe(*eval_failure_);
    if (mismatch_)
      return "invalid: conclusion mismatch at output " + std::to_string(mismatch_->index) +
             ": expected " + render_tree(mismatch_->expected) + ", actual " +
             render_tree(mismatch_->actual);
    return "invalid: undefined";
  }

 private:
  explicit CheckReport(Status status) : status_(status) {}

  Status status_;
  std::optional<EvalFailure> eval_failure_;
  std::optional<ConclusionMismatch> mismatch_;
  std::string description_;
};

// A formal system: a signature, named rules, and theorems in dependency
// order. A theorem becomes usable as a derived rule once registered.
class Env {
 public:
  Env() = default;
  explicit Env(Signature sig) : signature_(std::move(sig)) {}

  const Signature& signature() const { return signature_; }

  void add_rule(ProofGenerator g) {
    reserve_name(g.name);
    rule_index_.emplace(g.name, rules_.size());
    rules_.push_back(std::move(g));
  }

  // Lists a theorem without checking its proof; used by elaboration, which
  // sees statements before any checking happens.
  void add_theorem(TheoremStmt t) {
    t.validate();
    reserve_name(t.name);
    theorem_index_.emplace(t.name, theorems_.size());
    theorems_.push_back(std::move(t));
  }

  void mark_registered(const std::string& name) {
    if (theorem_index_.count(name) == 0)
      fail(ErrorKind::UnknownTheorem, "no theorem named '" + name + "'");
    registered_.insert(name);
  }

  const std::vector<ProofGenerator>& rules() const { return rules_; }
  const std::vector<TheoremStmt>& theorems() const { return theorems_; }

  const ProofGenerator* find_rule(const std::string& name) const {
    auto it = rule_index_.find(name);
    return it == rule_index_.end() ? nullptr : &rules_[it->second];
  }

  const TheoremStmt* find_theorem(const std::string& name) const {
    auto it = theorem_index_.find(name);
    return it == theorem_index_.end() ? nullptr : &theorems_[it->second];
  }

  bool is_registered(const std::string& name) const { return registered_.count(name) > 0; }

  bool has_name(const std::string& name) const {
    return rule_index_.count(name) > 0 || theorem_index_.count(name) > 0;
  }

  // Static arity of a generator or listed theorem.
  std::optional<DerivationArity> arity_of(const std::string& name) const {
    if (const ProofGenerator* g = find_rule(name)) return DerivationArity{g->hyp_count(), g->conc_count()};
    if (const TheoremStmt* t = find_theorem(name))
      return DerivationArity{t->claim_src.output_count(), t->claim_tgt.output_count()};
    return std::nullopt;
  }

  // Span usable for evaluation: a rule, or a theorem that has been checked
  // and registered. Referencing an unregistered theorem is a static error.
  struct Span {
    const SyntaxMap* src;
    const SyntaxMap* tgt;
  };
  Span span_of(const std::string& name) const {
    if (const ProofGenerator* g = find_rule(name)) return Span{&g->src, &g->tgt};
    if (const TheoremStmt* t = find_theorem(name)) {
      if (!is_registered(name))
        fail(ErrorKind::UnknownGenerator,
             "theorem '" + name + "' is not registered (never checked valid)");
      return Span{&t->claim_src, &t->claim_tgt};
    }
    fail(ErrorKind::UnknownGenerator, "no rule or theorem named '" + name + "'");
  }

  friend bool operator==(const Env& a, const Env& b) {
    return a.signature_ == b.signature_ && a.rules_ == b.rules_ && a.theorems_ == b.theorems_;
  }

 private:
  void reserve_name(const std::string& name) {
    if (has_name(name))
      fail(ErrorKind::DuplicateName, "'" + name + "' is already defined");
  }

  Signature signature_;
  std::vector<ProofGenerator> rules_;
  std::vector<TheoremStmt> theorems_;
  std::unordered_map<std::string, std::size_t> rule_index_;
  std::unordered_map<std::string, std::size_t> theorem_index_;
  std::unordered_set<std::string> registered_;
};

inline DerivationArity derivation_arity(const Derivation& d, const Env& env) {
  switch (d.kind()) {
    case Derivation::Kind::Generator: {
      auto arity = env.arity_of(d.name());
      if (!arity)
        fail(ErrorKind::UnknownGenerator, "no rule or theorem named '" + d.name() + "'");
      return *arity;
    }
    case Derivation::Kind::Identity: return {d.n(), d.n()};
    case Derivation::Kind::Symmetry: {
      std::size_t total = d.block_a() + d.block_b();
      return {total, total};
    }
    case Derivation::Kind::Dup: return {1, 2};
    case Derivation::Kind::Drop: return {1, 0};
    case Derivation::Kind::Sequential: {
      DerivationArity first = derivation_arity(d.first(), env);
      DerivationArity second = derivation_arity(d.second(), env);
      if (first.out != second.in)
        fail(ErrorKind::ArityMismatch,
             "sequential composition: " + std::to_string(first.out) + " outputs vs " +
                 std::to_string(second.in) + " inputs");
      return {first.in, second.out};
    }
    case Derivation::Kind::Parallel: {
      DerivationArity left = derivation_arity(d.first(), env);
      DerivationArity right = derivation_arity(d.second(), env);
      return {left.in + right.in, left.out + right.out};
    }
  }
  fail(ErrorKind::ArityMismatch, "unreachable derivation kind");
}

// [[ f ]] = src(f)- ; tgt(f)+ : match the hypotheses, build the conclusions.
inline OpenHypergraph compile_span(const SyntaxMap& src, const SyntaxMap& tgt) {
  return hg_sequential(compile_minus(src), compile_plus(tgt));
}

inline OpenHypergraph compile_generator(const ProofGenerator& f) {
  return compile_span(f.src, f.tgt);
}

inline OpenHypergraph compile_derivation(const Derivation& d, const Env& env) {
  switch (d.kind()) {
    case Derivation::Kind::Generator: {
      Env::Span span = env.span_of(d.name());
      return compile_span(*span.src, *span.tgt);
    }
    case Derivation::Kind::Identity: return hg_identity(d.n());
    case Derivation::Kind::Symmetry: return hg_symmetry(d.block_a(), d.block_b());
    case Derivation::Kind::Dup: return hg_spider(1, 2);
    case Derivation::Kind::Drop: return hg_spider(1, 0);
    case Derivation::Kind::Sequential:
      return hg_sequential(compile_derivation(d.first(), env),
                           compile_derivation(d.second(), env));
    case Derivation::Kind::Parallel:
      return hg_parallel(compile_derivation(d.first(), env),
                         compile_derivation(d.second(), env));
  }
  fail(ErrorKind::ArityMismatch, "unreachable derivation kind");
}

namespace detail {

// Conclusion comparison. Leaves below the boundary and all nodes are rigid;
// a fresh leaf (id >= boundary) in the evaluated result is generic and may
// stand for any expected subtree, consistently per id. Fresh-free results
// reduce to plain structural equality.
inline bool conclusion_matches(const Tree& actual, const Tree& expected,
                               std::size_t boundary,
                               std::map<std::size_t, Tree>& fresh_binding) {
  if (actual.is_leaf() && actual.leaf_id() >= boundary) {
    auto it = fresh_binding.find(actual.leaf_id());
    if (it == fresh_binding.end()) {
      fresh_binding.emplace(actual.leaf_id(), expected);
      return true;
    }
    return tree_equal(it->second, expected);
  }
  if (actual.is_leaf() || expected.is_leaf())
    return actual.is_leaf() && expected.is_leaf() && actual.leaf_id() == expected.leaf_id();
  if (!same_op(actual.op(), expected.op())) return false;
  for (std::size_t i = 0; i < actual.children().size(); ++i)
    if (!conclusion_matches(actual.children()[i], expected.children()[i], boundary,
                            fresh_binding))
      return false;
  return true;
}

}  // namespace detail

// Validity: evaluate s+ ; body at the generic tuple (x0..x_{m-1}) and
// require the result to be defined and to coincide with instantiate(t) at
// that tuple (up to specializing fresh leaves, which are generic).
inline CheckReport check_theorem(const TheoremStmt& thm, const Env& env) {
  try {
    DerivationArity body_arity = derivation_arity(thm.body, env);
    if (body_arity.in != thm.claim_src.output_count() ||
        body_arity.out != thm.claim_tgt.output_count())
      fail(ErrorKind::ArityMismatch,
           "theorem '" + thm.name + "': body has arity " + std::to_string(body_arity.in) +
               "->" + std::to_string(body_arity.out) + " but the claim is " +
               std::to_string(thm.claim_src.output_count()) + "->" +
               std::to_string(thm.claim_tgt.output_count()));

    const std::size_t m = thm.metavar_count();
    OpenHypergraph pipeline =
        hg_sequential(compile_plus(thm.claim_src), compile_derivation(thm.body, env));

    std::vector<Tree> leaves;
    leaves.reserve(m);
    for (std::size_t i = 0; i < m; ++i) leaves.push_back(Tree::leaf(i));
    FreshCounter fresh{m};  // boundary metavariables are never shadowed

    EvalResult result = evaluate(pipeline, leaves, fresh);
    if (!eval_defined(result)) return CheckReport::invalid(std::get<EvalFailure>(result));

    const std::vector<Tree>& actual = eval_values(result);
    std::vector<Tree> expected = instantiate(thm.claim_tgt, leaves);
    std::map<std::size_t, Tree> fresh_binding;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      if (!detail::conclusion_matches(actual[j], expected[j], m, fresh_binding))
        return CheckReport::invalid(ConclusionMismatch{j, expected[j], actual[j]});
    }
    return CheckReport::valid();
  } catch (const Error& e) {
    return CheckReport::static_error(e.what());
  }
}

// Appends and registers thm if it checks valid; otherwise the environment is
// left untouched and the (non-valid) report is returned.
inline CheckReport register_theorem(const TheoremStmt& thm, Env& env) {
  if (env.has_name(thm.name))
    fail(ErrorKind::DuplicateName, "'" + thm.name + "' is already defined");
  CheckReport report = check_theorem(thm, env);
  if (report.is_valid()) {
    env.add_theorem(thm);
    env.mark_registered(thm.name);
  }
  return report;
}

}  // namespace metacat
