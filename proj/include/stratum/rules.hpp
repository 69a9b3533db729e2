// Leaf rewrite rules. Every rule is a Strategy with isRule set and preserves
// the value computed by the reference interpreter.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stratum/traversals.hpp"

namespace stratum {

// lambda calculus
Strat betaReduction();
Strat etaReduction();
/// f -> fun(eta => f(eta)) for function-typed (or untyped) f.
Strat etaAbstraction();

// fusion and fission
/// map(f)(map(g)(xs)) -> map(fun(x => f(g(x))))(xs)
Strat mapFusion();
/// map(fun(x => F(A)))(xs) -> map(F)(map(fun(x => A))(xs)) when x is not free in F;
/// the partial form map(fun(x => F(A))) becomes fun(eta => map(F)(map(fun(x => A))(eta))).
Strat mapFission();
/// reduce(op)(init)(map(f)(xs)) -> reduce(fun(acc => fun(x => op(acc)(f(x)))))(init)(xs)
Strat fuseReduceMap();

// blocking
/// map(f) -> fun(xs => join(map(map(f))(split(n)(xs))))
Strat splitJoin(int n);
/// reduce(op)(init) -> fun(xs => reduce(fun(a => fun(y => op(a)(reduce(op)(init)(y)))))(init)(split(n)(xs)))
Strat splitReduce(int n);
/// splitJoin(n) on maps, splitReduce(n) on reductions.
Strat split(int n);

// interchange
/// e -> id(e) on array-typed e.
Strat idAfter();
/// id(e) -> transpose(transpose(e)) when e has at least two array dimensions.
Strat createTransposePair();
/// map(map(f))(transpose(x)) -> transpose(map(map(f))(x))
Strat mapMapFBeforeTranspose();
/// transpose(map(map(f))(x)) -> map(map(f))(transpose(x)), and for nested maps over
/// independent arrays transpose(map(fun(x => map(fun(y => b))(ys)))(xs)) ->
/// map(fun(y => map(fun(x => b))(xs)))(ys).
Strat transposeBeforeMapMapF();
/// map(fun(x => reduce(op)(init)(d)))(xs) ->
///   reduce(fun(v => fun(r => map(fun(q => op(fst(q))(snd(q))))(zip(v)(r)))))
///         (map(fun(x => init))(xs))(transpose(map(fun(x => d))(xs)))
Strat reduceMapInterchange();
/// add(a)(reduce(op)(0)(y)) -> reduce(op)(a)(y) for accumulating additions op.
Strat absorbAccumulator();

// lowering
Strat parallel();
Strat sequential();
Strat unroll();
/// map(f) -> fun(xs => asScalar(map(mapVec(f))(asVector(n)(xs)))) for scalar f.
Strat vectorize(int n);
/// e -> toMem(e) on array-typed e not already materialized.
Strat toMemAfter();

// domain rules
/// dot(join(w))(join(nbh)) with w == w2d -> dot(wv)(map(dot(wh))(nbh)).
Strat separateDot(ir::Expr w2d, ir::Expr wh, ir::Expr wv);
/// transpose(b) for a program input b -> join(map(transpose)(toMem(packed))) with the
/// packed copy laid out as N/32.K.32.
Strat packBRule();

struct BinomialWeights {
  ir::Expr w2d, wh, wv;
};
/// The shipped filter weights: w2d = [1,2,1]^T [1,2,1] / 16, wh = [1,2,1], wv = [1,2,1] / 16.
const BinomialWeights& binomialWeights();

struct RuleEntry {
  std::string name;
  int intParams;  // number of integer parameters
  std::function<Strat(const std::vector<int>&)> make;
};
const std::vector<RuleEntry>& ruleCatalog();

}  // namespace stratum
