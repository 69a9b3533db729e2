// Traversals and predicates specific to the array IR.
#pragma once

#include <vector>

#include "stratum/combinators.hpp"
#include "stratum/ir/expr.hpp"

namespace stratum {

using Strat = Strategy<ir::Expr>;

/// Lambda body.
Strat body(Strat s);
/// Applied function of an application node.
Strat function(Strat s);
/// Argument of an application node.
Strat argument(Strat s);
/// First argument of an application spine headed by primitive k
/// (the function of a map, the operator of a reduce, the data of a toMem).
Strat argumentOf(ir::PrimKind k, Strat s);
/// function(argumentOf(map, body(s))): s one map level down.
Strat fmap(Strat s);
/// applyNTimes(i, argument, s).
Strat move(int i, Strat s);
/// Alias of move.
Strat moveAlongComposition(int i, Strat s);

/// s under another identity; its failures report `id`.
Strat named(StrategyId id, Strat s);

Strat isFun();
/// The high-level reduce primitive, or an application spine headed by it.
Strat isReduce();
/// A high-level map or reduce primitive.
Strat isHighLevelMapOrReduce();
Strat isPrim(ir::PrimKind k);

struct Outcome {
  RewriteResult<ir::Expr> result;
  StepCounts counts;
  std::vector<TraceEvent> trace;
};

/// Runs s on e with a fresh context and deterministic fresh names.
/// FuelExhausted propagates.
Outcome run(const Strat& s, const ir::Expr& e, bool trace = false, FuelLimits limits = FuelLimits::fromEnvironment());

}  // namespace stratum
