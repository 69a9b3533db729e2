// Strategy scripts.
//
//   script := choice
//   choice := seqs ('<+' seqs)*
//   seqs   := term ((';' | ';;') term)*
//   term   := '(' script ')' | name [ '(' arg (',' arg)* ')' ]
//   arg    := integer | '[' integer (',' integer)* ']' | script
//
// `;` and `;;` bind tighter than `<+`. `;;` is dfnfSeq. Line comments start with `#`.
// Primitive arguments (argumentOf, isPrim) are written as primitive names.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/corpus.hpp"
#include "stratum/traversals.hpp"

namespace stratum {

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Strat parseStrategy(const std::string& text);

/// A named schedule, a shipped script (strategies/*.strat), a script file, or script text.
Strat resolveStrategy(const std::string& nameOrScript);

struct ScriptSignature {
  std::string name;
  std::string params;  // e.g. "(int, strategy)"
};
/// Every name a script can use.
std::vector<ScriptSignature> scriptNames();

/// The shipped scripts.
const std::vector<CorpusProgram>& shippedScripts();

}  // namespace stratum
