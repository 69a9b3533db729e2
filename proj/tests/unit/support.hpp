// Shared helpers for the unit tests.
#pragma once

#include <gtest/gtest.h>

#include "stratum/corpus.hpp"
#include "stratum/ir/interp.hpp"
#include "stratum/rules.hpp"

namespace testing_support {

using namespace stratum;
using namespace stratum::ir;

inline Expr program(const std::string& name) { return loadProgram(name).main; }

/// Result of s on e; fails the test on Failure.
inline Expr rewrite(const Strat& s, const Expr& e) {
  auto out = run(s, e);
  if (!out.result.ok()) {
    ADD_FAILURE() << s.name() << " failed on " << print(e);
    return e;
  }
  typeCheck(out.result.program());
  return out.result.program();
}

inline bool fails(const Strat& s, const Expr& e) { return !run(s, e).result.ok(); }

/// Interpreter agreement on `seeds` random input sets.
inline ::testing::AssertionResult sameValue(const Expr& a, const Expr& b, int seeds = 3, double tol = 1e-6) {
  for (int seed = 1; seed <= seeds; ++seed) {
    auto in = randomInputs(a, static_cast<std::uint64_t>(seed));
    auto va = flatten(eval(a, in));
    auto vb = flatten(eval(b, in));
    double err = maxRelError(va, vb);
    if (!(err <= tol))
      return ::testing::AssertionFailure() << "seed " << seed << ": relative error " << err << "\n  " << print(a)
                                           << "\n  " << print(b);
  }
  return ::testing::AssertionSuccess();
}

}  // namespace testing_support
