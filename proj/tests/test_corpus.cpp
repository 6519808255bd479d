#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace metacat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string corpus_path(const std::string& file) {
  std::string root = testutil::env_var("METACAT_SRC");
  REQUIRE_MESSAGE(!root.empty(), "METACAT_SRC not set");
  return root + "/corpus/" + file;
}

// "valid" | "invalid:match-failure" | "invalid:equality-failure" |
// "invalid:conclusion-mismatch" | "error"
void check_expected(const CheckReport& report, const std::string& expected,
                    const std::string& who) {
  INFO(who, " -> ", report.describe());
  if (expected == "valid") {
    CHECK(report.is_valid());
    return;
  }
  if (expected == "error") {
    CHECK(report.status() == CheckReport::Status::Static);
    return;
  }
  REQUIRE(report.status() == CheckReport::Status::Invalid);
  if (expected == "invalid:match-failure") {
    REQUIRE(report.eval_failure().has_value());
    CHECK(std::holds_alternative<MatchFailure>(*report.eval_failure()));
  } else if (expected == "invalid:equality-failure") {
    REQUIRE(report.eval_failure().has_value());
    CHECK(std::holds_alternative<EqualityFailure>(*report.eval_failure()));
  } else if (expected == "invalid:conclusion-mismatch") {
    CHECK(report.mismatch().has_value());
  }
}

}  // namespace

TEST_CASE("programmatic corpus equals the shipped files") {
  CHECK(build_fol_env() == elaborate(parse(slurp(corpus_path("fol.mcat")))));
  CHECK(build_negative_env() == elaborate(parse(slurp(corpus_path("negative.mcat")))));
}

TEST_CASE("corpus files are fixed points of dump after parse") {
  for (const char* file : {"fol.mcat", "negative.mcat"}) {
    std::string text = slurp(corpus_path(file));
    CHECK(dump_env(elaborate(parse(text))) == text);
  }
}

TEST_CASE("manifest statuses hold under both engines") {
  nlohmann::json manifest = nlohmann::json::parse(slurp(corpus_path("manifest.json")));
  for (const auto& [file, theorems] : manifest.items()) {
    Env env = elaborate(parse(slurp(corpus_path(file))));
    REQUIRE(theorems.size() == env.theorems().size());  // every theorem has an expectation
    for (const TheoremStmt& thm : env.theorems()) {
      REQUIRE_MESSAGE(theorems.contains(thm.name), thm.name, " missing from manifest");
      const std::string expected = theorems[thm.name];
      CheckReport graph_report = check_theorem(thm, env);
      CheckReport direct_report = check_direct(thm, env);
      check_expected(graph_report, expected, file + "/" + thm.name);
      CHECK(graph_report.status() == direct_report.status());
      if (graph_report.is_valid()) env.mark_registered(thm.name);
    }
  }
}

TEST_CASE("the designated negative failures") {
  Env env = build_negative_env();

  SUBCASE("uncrossed wires fail inside a matcher, naming the edge") {
    CheckReport report = check_theorem(*env.find_theorem("id-uncrossed"), env);
    REQUIRE(report.status() == CheckReport::Status::Invalid);
    REQUIRE(report.eval_failure().has_value());
    const auto* mf = std::get_if<MatchFailure>(&*report.eval_failure());
    REQUIRE(mf != nullptr);
    CHECK(mf->expected_op == "wff");
    CHECK(render_tree(mf->actual).rfind("proves(", 0) == 0);
    // the report pinpoints the failing edge
    CHECK(describe(*report.eval_failure()).find("edge " + std::to_string(mf->edge)) !=
          std::string::npos);
  }

  SUBCASE("specialized claim fails with the exact mismatch") {
    CheckReport report = check_theorem(*env.find_theorem("id-claims-p"), env);
    REQUIRE(report.status() == CheckReport::Status::Invalid);
    REQUIRE(report.mismatch().has_value());
    CHECK(render_tree(report.mismatch()->expected) == "proves(x0)");
    CHECK(render_tree(report.mismatch()->actual) == "proves(imp(x0,x0))");
  }
}

TEST_CASE("the id theorem proves the identity implication") {
  Env env = build_fol_env();
  const TheoremStmt* id = env.find_theorem("id");
  REQUIRE(id != nullptr);

  // The checked conclusion is instantiate(x0 |-> proves(imp(x0,x0))) at the
  // generic leaf.
  OpenHypergraph g =
      hg_sequential(compile_plus(id->claim_src), compile_derivation(id->body, env));
  FreshCounter fresh{1};
  EvalResult r = evaluate(g, testutil::generic_leaves(1), fresh);
  REQUIRE(eval_defined(r));
  CHECK(render_tree(eval_values(r)[0]) == "proves(imp(x0,x0))");

  auto claimed = instantiate(id->claim_tgt, testutil::generic_leaves(1));
  CHECK(tree_equal(eval_values(r)[0], claimed[0]));
}

TEST_CASE("theorem references match inlined bodies across the corpus") {
  Env env = build_fol_env();
  for (const TheoremStmt& t : env.theorems())
    if (check_theorem(t, env).is_valid()) env.mark_registered(t.name);

  // use wnwi as a derived rule and compare with its body inline
  const TheoremStmt* wnwi = env.find_theorem("wnwi");
  REQUIRE(wnwi != nullptr);
  TheoremStmt via_ref{"via-ref", wnwi->params, wnwi->claim_src, wnwi->claim_tgt,
                      Derivation::gen("wnwi")};
  TheoremStmt via_body{"via-body", wnwi->params, wnwi->claim_src, wnwi->claim_tgt,
                       wnwi->body};
  CHECK(check_theorem(via_ref, env).status() == check_theorem(via_body, env).status());

  // and the same through the oracle: the oracle applies the span, the IR
  // engine inlines the compiled graph
  CHECK(check_direct(via_ref, env).status() == check_direct(via_body, env).status());
}
