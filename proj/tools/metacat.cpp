// Command-line front end: check .mcat files, dump canonical form, export
// Graphviz diagrams. Reports go to stdout, diagnostics to stderr.
//
// Exit codes: 0 all valid, 1 any invalid theorem or engine divergence,
// 2 parse or static error (including unreadable input).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metacat/metacat.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) metacat::fail(metacat::ErrorKind::ParseError, "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string status_text(const metacat::CheckReport& report) {
  switch (report.status()) {
    case metacat::CheckReport::Status::Valid: return "valid";
    case metacat::CheckReport::Status::Invalid: return "invalid";
    case metacat::CheckReport::Status::Static: return "error";
  }
  return "error";
}

// describe() is "<status>: <detail>" for non-valid reports.
std::string detail_text(const metacat::CheckReport& report) {
  std::string full = report.describe();
  auto sep = full.find(": ");
  return sep == std::string::npos ? std::string() : full.substr(sep + 2);
}

struct CheckOptions {
  std::string path;
  bool json = false;
  bool oracle = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

int run_check(const CheckOptions& opts) {
  metacat::Env env = metacat::elaborate(metacat::parse(read_file(opts.path)));

  bool any_invalid = false, any_static = false, any_divergence = false;
  nlohmann::ordered_json doc;
  doc["file"] = opts.path;
  doc["theorems"] = nlohmann::ordered_json::array();

  for (const metacat::TheoremStmt& thm : env.theorems()) {
    metacat::CheckReport report = metacat::check_theorem(thm, env);
    switch (report.status()) {
      case metacat::CheckReport::Status::Valid: env.mark_registered(thm.name); break;
      case metacat::CheckReport::Status::Invalid: any_invalid = true; break;
      case metacat::CheckReport::Status::Static: any_static = true; break;
    }
    if (opts.oracle) {
      metacat::CheckReport direct = metacat::check_direct(thm, env);
      if (direct.status() != report.status()) {
        any_divergence = true;
        std::cerr << "oracle divergence at theorem '" << thm.name
                  << "': " << report.describe() << " vs " << direct.describe() << "\n";
      }
    }
    if (opts.json) {
      nlohmann::ordered_json entry;
      entry["name"] = thm.name;
      entry["status"] = status_text(report);
      if (!report.is_valid()) entry["detail"] = detail_text(report);
      doc["theorems"].push_back(entry);
    } else {
      std::cout << thm.name << ": " << report.describe() << "\n";
    }
  }

  if (opts.json) std::cout << doc.dump(2) << "\n";

  if (opts.oracle && opts.trials > 0) {
    metacat::DifferentialSummary summary =
        metacat::differential_run(env, opts.trials, opts.seed);
    if (opts.json) {
      if (summary.divergences > 0)
        std::cerr << "differential: " << summary.describe() << "\n";
    } else {
      std::cout << "differential: " << summary.describe() << " [seed "
                << opts.seed << "]\n";
    }
    if (summary.divergences > 0) any_divergence = true;
  }

  if (any_static) return 2;
  if (any_invalid || any_divergence) return 1;
  return 0;
}

struct DotOptions {
  std::string path;
  std::string theorem;
  bool values = false;
  std::string level = "ir";
  std::string out;
};

int run_dot(const DotOptions& opts) {
  metacat::Env env = metacat::elaborate(metacat::parse(read_file(opts.path)));
  const metacat::TheoremStmt* target = env.find_theorem(opts.theorem);
  if (!target)
    metacat::fail(metacat::ErrorKind::UnknownTheorem,
                  "no theorem named '" + opts.theorem + "'");

  // Register everything ahead of the target so its references resolve.
  for (const metacat::TheoremStmt& thm : env.theorems()) {
    if (thm.name == opts.theorem) break;
    if (metacat::check_theorem(thm, env).is_valid()) env.mark_registered(thm.name);
  }

  std::string dot = metacat::export_dot(
      env, *target, opts.values,
      opts.level == "proof" ? metacat::DotLevel::Proof : metacat::DotLevel::Ir);
  if (opts.out.empty()) {
    std::cout << dot;
  } else {
    std::ofstream out(opts.out, std::ios::binary);
    if (!out)
      metacat::fail(metacat::ErrorKind::ParseError, "cannot write '" + opts.out + "'");
    out << dot;
  }
  return 0;
}

int run_dump(const std::string& path) {
  std::cout << metacat::dump_env(metacat::elaborate(metacat::parse(read_file(path))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metacat - proof checker for span-based formal systems"};
  app.require_subcommand(1);

  CheckOptions check_opts;
  CLI::App* check = app.add_subcommand("check", "check every theorem in a file");
  check->add_option("file", check_opts.path, "input .mcat file")->required();
  check->add_flag("--json", check_opts.json, "emit a JSON report");
  check->add_flag("--oracle", check_opts.oracle,
                  "cross-check with the direct evaluator");
  check->add_option("--trials", check_opts.trials,
                    "differential trials against the oracle (with --oracle)");
  check->add_option("--seed", check_opts.seed, "seed for differential trials");

  DotOptions dot_opts;
  CLI::App* dot = app.add_subcommand("dot", "export a theorem as Graphviz DOT");
  dot->add_option("file", dot_opts.path, "input .mcat file")->required();
  dot->add_option("--thm", dot_opts.theorem, "theorem to export")->required();
  dot->add_flag("--values", dot_opts.values, "label wires with checked tree values");
  dot->add_option("--level", dot_opts.level, "granularity: ir or proof")
      ->check(CLI::IsMember({"ir", "proof"}));
  dot->add_option("-o,--output", dot_opts.out, "output path (default stdout)");

  std::string dump_path;
  CLI::App* dump = app.add_subcommand("dump", "print the canonical form of a file");
  dump->add_option("file", dump_path, "input .mcat file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string active_path =
      check->parsed() ? check_opts.path : dot->parsed() ? dot_opts.path : dump_path;
  try {
    if (check->parsed()) return run_check(check_opts);
    if (dot->parsed()) return run_dot(dot_opts);
    return run_dump(dump_path);
  } catch (const metacat::Error& e) {
    std::cerr << (e.pos().valid() ? active_path + ":" : std::string()) << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
