#pragma once

// Shared helpers for the test suite.

#include <cstdlib>
#include <string>
#include <vector>

#include "metacat/metacat.hpp"

namespace testutil {

inline std::vector<metacat::Tree> generic_leaves(std::size_t m) {
  std::vector<metacat::Tree> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(metacat::Tree::leaf(i));
  return out;
}

// Re-parses a tree rendered with the x<i> convention through the surface
// parser, by jacketing it in a throwaway rule whose params are x0..x9. Used
// as an independent route back from text to trees.
inline metacat::Tree parse_rendered(const metacat::Signature& sig, const std::string& text) {
  std::string source;
  for (const metacat::OpRef& op : sig.ops())
    source += "syntax " + op->name + " : " + std::to_string(op->arity) + "\n";
  source += "rule probe (x0 x1 x2 x3 x4 x5 x6 x7 x8 x9) : [" + text + "] => []\n";
  metacat::Env env = metacat::elaborate(metacat::parse(source));
  return env.rules().front().src.outputs().front();
}

inline std::string env_var(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

}  // namespace testutil
