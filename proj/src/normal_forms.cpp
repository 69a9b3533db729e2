#include "stratum/normal_forms.hpp"

namespace stratum {

using ir::PrimKind;

namespace {

Strat etaUnlessFun() { return seq(not_(isFun()), etaAbstraction()); }

Strat isPartialMap() {
  return predicate<ir::Expr>("isPartialMap", [](const ir::Expr& e) {
    auto k = ir::headPrim(e);
    return k && ir::isMapFamily(*k) && ir::isPrimCall(e, *k, 1);
  });
}

// map(f) outside function position becomes fun(x => map(f)(x)).
Strat expandPartialMaps() {
  Strat eta = seq(isPartialMap(), etaAbstraction());
  return seq(try_(eta), normalize(lChoice(argument(eta), body(eta))));
}

}  // namespace

Strat BENF() { return named({"BENF", {}}, normalize(lChoice(betaReduction(), etaReduction()))); }

Strat DFNF() {
  Strat s = seq(BENF(), normalize(argumentOf(PrimKind::Map, etaUnlessFun())));
  s = seq(s, normalize(argumentOf(PrimKind::Reduce, etaUnlessFun())));
  s = seq(s, normalize(argumentOf(PrimKind::Reduce, body(etaUnlessFun()))));
  s = seq(s, expandPartialMaps());
  return named({"DFNF", {}}, s);
}

Strat RNF() { return named({"RNF", {}}, seq(BENF(), repeat(seq(topDown(mapFission()), BENF())))); }

Strat dfnfSeq(Strat a, Strat b) {
  return named(StrategyId{";;", {a.name(), b.name()}}, seq(a, seq(DFNF(), b)));
}

Strat lowerToC() { return named({"lowerToC", {}}, tryAll(sequential())); }

}  // namespace stratum
