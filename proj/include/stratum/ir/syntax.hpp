// Textual program format: parser with type elaboration, and printer.
//
//   size N = 64;
//   decl f :: float -> float;      // opaque free variable (type optional)
//   def mm = fun(a :: N.N.float => ...);
//
// The program denotes `def main`, or else the last definition. Definitions
// are inlined at each use. `x |> f` is f(x); f(a, b) is f(a)(b). The macros
// dot, map2D, pad2D and slide2D expand to compositions of primitives.
#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "stratum/ir/expr.hpp"

namespace stratum::ir {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
  int line;
  int col;
};

using SizeBindings = std::map<std::string, int>;
using TypeEnv = std::map<std::string, TypePtr>;

struct ParsedProgram {
  Expr main;
  SizeBindings sizes;
};

/// Parses a program. `sizes` override `size` declarations of the source;
/// `freeVars` declares additional free variables (a null type leaves them opaque).
ParsedProgram parseProgram(const std::string& source, const SizeBindings& sizes = {},
                           const TypeEnv& freeVars = {});
Expr parse(const std::string& source, const SizeBindings& sizes = {}, const TypeEnv& freeVars = {});
TypePtr parseType(const std::string& source, const SizeBindings& sizes = {});

std::string print(const Expr& e);

}  // namespace stratum::ir
