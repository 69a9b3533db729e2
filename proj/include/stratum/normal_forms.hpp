// Normal forms establishing the syntactic preconditions of the scheduling strategies.
#pragma once

#include "stratum/rules.hpp"

namespace stratum {

/// normalize(betaReduction <+ etaReduction)
Strat BENF();
/// BENF, then every map function and every reduce operator is a lambda
/// (reduce operators take two lambdas), and every partially applied map
/// outside function position is eta-expanded.
Strat DFNF();
/// Maps fissioned as far as possible, with BENF after each fission pass.
Strat RNF();
/// a `;` DFNF `;` b
Strat dfnfSeq(Strat a, Strat b);
/// Remaining high-level map and reduce become mapSeq and reduceSeq.
Strat lowerToC();

}  // namespace stratum
