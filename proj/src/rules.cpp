#include "stratum/rules.hpp"

#include <optional>

namespace stratum {

using namespace ir;
using R = RewriteResult<Expr>;

namespace {

using Rewrite = std::function<std::optional<Expr>(const Expr&)>;

Strat rule(StrategyId id, Rewrite f) {
  return Strat(
      id,
      [id, f = std::move(f)](const Expr& e, ExecContext&) {
        try {
          if (auto r = f(e)) return R::success(std::move(*r));
        } catch (const TypeError&) {
          // Shape or divisibility guard failed while building the result.
        }
        return R::failure(id);
      },
      true);
}

Strat rule(const std::string& name, Rewrite f) { return rule(StrategyId{name, {}}, std::move(f)); }

/// Primitive k applied to `given`, instantiated with the types of the missing arguments.
Expr callPartial(PrimKind k, std::vector<int> nats, const std::vector<Expr>& given,
                 const std::vector<TypePtr>& missing) {
  std::vector<TypePtr> types;
  for (const auto& g : given) types.push_back(g->type());
  for (const auto& t : missing) types.push_back(t);
  TypePtr t = instantiatePrim(k, nats, types);
  return rebuild(primNode(k, std::move(nats), t), given);
}

/// Input array type of a partially applied primitive, when known.
TypePtr partialInput(const Expr& e) {
  if (e->type() && e->type()->isFn()) return e->type()->fn().in;
  return nullptr;
}

bool isVarNamed(const Expr& e, const std::string& x) { return e->isVar() && e->name() == x; }

/// f such that g is map(f) or fun(r => map(f)(r)).
std::optional<Expr> mapOfFunction(const Expr& g) {
  if (isPrimCall(g, PrimKind::Map, 1)) return g->arg();
  if (g->isLam()) {
    const Expr& b = g->body();
    if (isPrimCall(b, PrimKind::Map, 2) && isVarNamed(b->arg(), g->name()) && !b->fun()->arg()->hasFree(g->name()))
      return b->fun()->arg();
  }
  return std::nullopt;
}

/// fun(r => map(f)(r)) over rows of type rowT.
Expr mapMapLambda(const Expr& f, const TypePtr& rowT) {
  return lam("r", rowT, [&](Expr r) { return call(PrimKind::Map, {f, r}); });
}

Expr addOp() { return primNode(PrimKind::Add, {}, fnOf(f32(), fnOf(f32(), f32()))); }
Expr multOp() { return primNode(PrimKind::Mult, {}, fnOf(pairOf(f32(), f32()), f32())); }

Expr dot(const Expr& x, const Expr& y) {
  return call(PrimKind::Reduce, {addOp(), lit(0.0), call(PrimKind::Map, {multOp(), call(PrimKind::Zip, {x, y})})});
}

bool isAdd(const Expr& op) {
  if (op->isPrim(PrimKind::Add)) return true;
  if (!op->isLam() || !op->body()->isLam()) return false;
  const Expr& b = op->body()->body();
  return isPrimCall(b, PrimKind::Add, 2) && isVarNamed(b->fun()->arg(), op->name()) &&
         isVarNamed(b->arg(), op->body()->name()) && op->name() != op->body()->name();
}

bool isMult(const Expr& f) {
  if (f->isPrim(PrimKind::Mult)) return true;
  return f->isLam() && isPrimCall(f->body(), PrimKind::Mult, 1) && isVarNamed(f->body()->arg(), f->name());
}

/// op(acc, x) = acc + g(x) with acc not free in g.
bool isAccumulatingAdd(const Expr& op) {
  if (isAdd(op)) return true;
  if (!op->isLam() || !op->body()->isLam()) return false;
  const std::string& acc = op->name();
  const Expr& b = op->body()->body();
  return op->body()->name() != acc && isPrimCall(b, PrimKind::Add, 2) && isVarNamed(b->fun()->arg(), acc) &&
         !b->arg()->hasFree(acc);
}

bool isZero(const Expr& e) { return e->isLit() && e->data().size() == 1 && e->data()[0] == 0.0 && !e->type()->isArray(); }

std::optional<Expr> splitJoinAt(const Expr& e, int n) {
  if (!isPrimCall(e, PrimKind::Map, 1)) return std::nullopt;
  TypePtr in = partialInput(e);
  if (!in || !in->isArray() || in->array().size % n != 0) return std::nullopt;
  const Expr& f = e->arg();
  TypePtr elem = in->array().elem;
  return lam("eta", in, [&](Expr xs) {
    Expr inner = callPartial(PrimKind::Map, {}, {f}, {arrayOf(n, elem)});
    return call(PrimKind::Join, {call(PrimKind::Map, {inner, call(PrimKind::Split, {n}, {xs})})});
  });
}

std::optional<Expr> splitReduceAt(const Expr& e, int n) {
  if (!isPrimCall(e, PrimKind::Reduce, 2)) return std::nullopt;
  TypePtr in = partialInput(e);
  if (!in || !in->isArray() || in->array().size % n != 0) return std::nullopt;
  Spine s = spine(e);
  const Expr& op = s.args[0];
  const Expr& init = s.args[1];
  TypePtr acc = init->type();
  TypePtr chunk = arrayOf(n, in->array().elem);
  return lam("eta", in, [&](Expr xs) {
    Expr outerOp = lam("a", acc, [&](Expr a) {
      return lam("y", chunk, [&](Expr y) {
        return app(op, a, call(PrimKind::Reduce, {refreshBinders(op), refreshBinders(init), y}));
      });
    });
    return call(PrimKind::Reduce, {outerOp, init, call(PrimKind::Split, {n}, {xs})});
  });
}

Strat retarget(const std::string& name, std::vector<std::pair<PrimKind, PrimKind>> table) {
  return rule(name, [table](const Expr& e) -> std::optional<Expr> {
    if (!e->isPrim()) return std::nullopt;
    for (auto [from, to] : table)
      if (e->prim() == from) return withPrimKind(e, to);
    return std::nullopt;
  });
}

}  // namespace

Strat betaReduction() {
  return rule("betaReduction", [](const Expr& e) -> std::optional<Expr> {
    if (!e->isApp() || !e->fun()->isLam()) return std::nullopt;
    return substitute(e->fun()->body(), e->fun()->name(), e->arg());
  });
}

Strat etaReduction() {
  return rule("etaReduction", [](const Expr& e) -> std::optional<Expr> {
    if (!e->isLam() || !e->body()->isApp()) return std::nullopt;
    const Expr& b = e->body();
    if (!isVarNamed(b->arg(), e->name()) || b->fun()->hasFree(e->name())) return std::nullopt;
    return b->fun();
  });
}

Strat etaAbstraction() {
  return rule("etaAbstraction", [](const Expr& e) -> std::optional<Expr> {
    const TypePtr& t = e->type();
    if (t && !t->isFn()) return std::nullopt;
    if (!t && e->isLit()) return std::nullopt;
    TypePtr in = t ? t->fn().in : nullptr;
    return lam("eta", in, [&](Expr x) { return app(e, x); });
  });
}

Strat mapFusion() {
  return rule("mapFusion", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Map, 2) || !isPrimCall(e->arg(), PrimKind::Map, 2)) return std::nullopt;
    const Expr& f = e->fun()->arg();
    const Expr& g = e->arg()->fun()->arg();
    const Expr& xs = e->arg()->arg();
    Expr fused = lam("x", domainOf(g), [&](Expr x) { return app(f, app(g, x)); });
    return call(PrimKind::Map, {fused, xs});
  });
}

Strat mapFission() {
  return rule("mapFission", [](const Expr& e) -> std::optional<Expr> {
    bool full = isPrimCall(e, PrimKind::Map, 2);
    if (!full && !isPrimCall(e, PrimKind::Map, 1)) return std::nullopt;
    const Expr& fn = full ? e->fun()->arg() : e->arg();
    if (!fn->isLam() || !fn->body()->isApp()) return std::nullopt;
    const std::string& x = fn->name();
    const Expr& F = fn->body()->fun();
    const Expr& A = fn->body()->arg();
    if (F->hasFree(x) || isVarNamed(A, x)) return std::nullopt;
    Expr producer = lam(x, fn->paramType(), A);
    if (full) return call(PrimKind::Map, {F, call(PrimKind::Map, {producer, e->arg()})});
    return lam("eta", partialInput(e),
               [&](Expr xs) { return call(PrimKind::Map, {F, call(PrimKind::Map, {producer, xs})}); });
  });
}

Strat fuseReduceMap() {
  return rule("fuseReduceMap", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Reduce, 3) || !isPrimCall(e->arg(), PrimKind::Map, 2)) return std::nullopt;
    Spine s = spine(e);
    const Expr& op = s.args[0];
    const Expr& init = s.args[1];
    const Expr& f = e->arg()->fun()->arg();
    const Expr& xs = e->arg()->arg();
    Expr fused = lam("acc", init->type(), [&](Expr acc) {
      return lam("x", domainOf(f), [&](Expr x) { return app(op, acc, app(f, x)); });
    });
    return call(PrimKind::Reduce, {fused, init, xs});
  });
}

Strat splitJoin(int n) {
  return rule(StrategyId{"splitJoin", {std::to_string(n)}}, [n](const Expr& e) { return splitJoinAt(e, n); });
}

Strat splitReduce(int n) {
  return rule(StrategyId{"splitReduce", {std::to_string(n)}}, [n](const Expr& e) { return splitReduceAt(e, n); });
}

Strat split(int n) {
  return rule(StrategyId{"split", {std::to_string(n)}}, [n](const Expr& e) -> std::optional<Expr> {
    if (auto r = splitJoinAt(e, n)) return r;
    return splitReduceAt(e, n);
  });
}

Strat idAfter() {
  return rule("idAfter", [](const Expr& e) -> std::optional<Expr> {
    if (!e->type() || !e->type()->isArray()) return std::nullopt;
    return call(PrimKind::Id, {e});
  });
}

Strat createTransposePair() {
  return rule("createTransposePair", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Id, 1)) return std::nullopt;
    const Expr& x = e->arg();
    if (!x->type() || arrayRank(x->type()) < 2) return std::nullopt;
    return call(PrimKind::Transpose, {call(PrimKind::Transpose, {x})});
  });
}

Strat mapMapFBeforeTranspose() {
  return rule("mapMapFBeforeTranspose", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Map, 2) || !isPrimCall(e->arg(), PrimKind::Transpose, 1)) return std::nullopt;
    auto f = mapOfFunction(e->fun()->arg());
    if (!f) return std::nullopt;
    const Expr& x = e->arg()->arg();
    if (!x->type()) return std::nullopt;
    Expr g = mapMapLambda(*f, elemOf(x->type()));
    return call(PrimKind::Transpose, {call(PrimKind::Map, {g, x})});
  });
}

Strat transposeBeforeMapMapF() {
  return rule("transposeBeforeMapMapF", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Transpose, 1) || !isPrimCall(e->arg(), PrimKind::Map, 2)) return std::nullopt;
    const Expr& outerFn = e->arg()->fun()->arg();
    const Expr& xs = e->arg()->arg();
    if (auto f = mapOfFunction(outerFn)) {
      if (!xs->type()) return std::nullopt;
      Expr t = call(PrimKind::Transpose, {xs});
      return call(PrimKind::Map, {mapMapLambda(*f, elemOf(t->type())), t});
    }
    // Nested maps over independent arrays: swap the iteration order.
    if (!outerFn->isLam() || !isPrimCall(outerFn->body(), PrimKind::Map, 2)) return std::nullopt;
    const std::string& x = outerFn->name();
    const Expr& innerFn = outerFn->body()->fun()->arg();
    const Expr& ys = outerFn->body()->arg();
    if (!innerFn->isLam() || ys->hasFree(x)) return std::nullopt;
    Expr swappedInner = lam(x, outerFn->paramType(), innerFn->body());
    Expr swappedOuter =
        lam(innerFn->name(), innerFn->paramType(), call(PrimKind::Map, {swappedInner, refreshBinders(xs)}));
    return call(PrimKind::Map, {swappedOuter, ys});
  });
}

Strat reduceMapInterchange() {
  return rule("reduceMapInterchange", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Map, 2)) return std::nullopt;
    const Expr& fn = e->fun()->arg();
    const Expr& xs = e->arg();
    if (!fn->isLam() || !isPrimCall(fn->body(), PrimKind::Reduce, 3)) return std::nullopt;
    const std::string& x = fn->name();
    Spine s = spine(fn->body());
    const Expr& op = s.args[0];
    const Expr& init = s.args[1];
    const Expr& d = s.args[2];
    if (op->hasFree(x) || !init->type() || !d->type() || !xs->type()) return std::nullopt;
    int n = sizeOf(xs->type());
    TypePtr accT = arrayOf(n, init->type());
    TypePtr rowT = arrayOf(n, elemOf(d->type()));
    Expr inits = call(PrimKind::Map, {refreshBinders(lam(x, fn->paramType(), init)), xs});
    Expr data =
        call(PrimKind::Transpose, {call(PrimKind::Map, {refreshBinders(lam(x, fn->paramType(), d)), refreshBinders(xs)})});
    Expr vop = lam("acc", accT, [&](Expr v) {
      return lam("r", rowT, [&](Expr r) {
        Expr zipped = call(PrimKind::Zip, {v, r});
        Expr step = lam("q", elemOf(zipped->type()), [&](Expr q) {
          return app(op, call(PrimKind::Fst, {q}), call(PrimKind::Snd, {q}));
        });
        return call(PrimKind::Map, {step, zipped});
      });
    });
    return call(PrimKind::Reduce, {vop, inits, data});
  });
}

Strat absorbAccumulator() {
  return rule("absorbAccumulator", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Add, 2) || !isPrimCall(e->arg(), PrimKind::Reduce, 3)) return std::nullopt;
    const Expr& a = e->fun()->arg();
    Spine s = spine(e->arg());
    if (!isZero(s.args[1]) || !isAccumulatingAdd(s.args[0])) return std::nullopt;
    return call(PrimKind::Reduce, {s.args[0], a, s.args[2]});
  });
}

Strat parallel() { return retarget("parallel", {{PrimKind::Map, PrimKind::MapPar}}); }

Strat sequential() {
  return retarget("sequential", {{PrimKind::Map, PrimKind::MapSeq}, {PrimKind::Reduce, PrimKind::ReduceSeq}});
}

Strat unroll() {
  return retarget("unroll", {{PrimKind::Map, PrimKind::MapSeqUnroll}, {PrimKind::Reduce, PrimKind::ReduceSeqUnroll}});
}

Strat vectorize(int n) {
  return rule(StrategyId{"vectorize", {std::to_string(n)}}, [n](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Map, 1)) return std::nullopt;
    const Expr& f = e->arg();
    const TypePtr& ft = f->type();
    TypePtr in = partialInput(e);
    if (!ft || !isScalarLike(ft->fn().in) || !ft->fn().out->isScalar()) return std::nullopt;
    if (!in || in->array().size % n != 0) return std::nullopt;
    return lam("eta", in, [&](Expr xs) {
      Expr vec = call(PrimKind::AsVector, {n}, {xs});
      Expr lanes = callPartial(PrimKind::MapVec, {}, {f}, {elemOf(vec->type())});
      return call(PrimKind::AsScalar, {call(PrimKind::Map, {lanes, vec})});
    });
  });
}

Strat toMemAfter() {
  return rule("toMemAfter", [](const Expr& e) -> std::optional<Expr> {
    if (!e->type() || !e->type()->isArray() || isPrimCall(e, PrimKind::ToMem, 1)) return std::nullopt;
    return call(PrimKind::ToMem, {e});
  });
}

Strat separateDot(Expr w2d, Expr wh, Expr wv) {
  return rule("separateDot", [w2d, wh, wv](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Reduce, 3)) return std::nullopt;
    Spine s = spine(e);
    if (!isAdd(s.args[0]) || !isZero(s.args[1]) || !isPrimCall(s.args[2], PrimKind::Map, 2)) return std::nullopt;
    const Expr& m = s.args[2];
    if (!isMult(m->fun()->arg()) || !isPrimCall(m->arg(), PrimKind::Zip, 2)) return std::nullopt;
    const Expr& lhs = m->arg()->fun()->arg();
    const Expr& rhs = m->arg()->arg();
    if (!isPrimCall(lhs, PrimKind::Join, 1) || !isPrimCall(rhs, PrimKind::Join, 1)) return std::nullopt;
    if (!alphaEq(lhs->arg(), w2d)) return std::nullopt;
    const Expr& nbh = rhs->arg();
    if (!nbh->type()) return std::nullopt;
    Expr rows = call(PrimKind::Map, {lam("row", elemOf(nbh->type()), [&](Expr row) { return dot(wh, row); }), nbh});
    return dot(wv, rows);
  });
}

Strat packBRule() {
  return rule("packB", [](const Expr& e) -> std::optional<Expr> {
    if (!isPrimCall(e, PrimKind::Transpose, 1) || !e->arg()->isVar()) return std::nullopt;
    const TypePtr& t = e->type();
    if (!t || arrayRank(t) < 2 || t->array().size % 32 != 0) return std::nullopt;
    Expr tiles = call(PrimKind::Split, {32}, {e});
    TypePtr tileT = elemOf(tiles->type());
    Expr copy = lam("t", tileT, [&](Expr tile) {
      Expr tt = call(PrimKind::Transpose, {tile});
      Expr row = lam("r", elemOf(tt->type()), [&](Expr r) {
        return call(PrimKind::Map, {lam("v", elemOf(r->type()), [](Expr v) { return v; }), r});
      });
      return call(PrimKind::Map, {row, tt});
    });
    Expr packed = call(PrimKind::ToMem, {call(PrimKind::Map, {copy, tiles})});
    Expr unpack = callPartial(PrimKind::Transpose, {}, {}, {elemOf(packed->type())});
    return call(PrimKind::Join, {call(PrimKind::Map, {unpack, packed})});
  });
}

const BinomialWeights& binomialWeights() {
  static const BinomialWeights w = [] {
    TypePtr t3 = arrayOf(3, f32());
    std::vector<double> h{1, 2, 1};
    std::vector<double> v{1.0 / 16, 2.0 / 16, 1.0 / 16};
    std::vector<double> w2;
    for (double a : v)
      for (double b : h) w2.push_back(a * b);
    return BinomialWeights{arrayLit(w2, arrayOf(3, t3)), arrayLit(h, t3), arrayLit(v, t3)};
  }();
  return w;
}

const std::vector<RuleEntry>& ruleCatalog() {
  using P = const std::vector<int>&;
  static const std::vector<RuleEntry> catalog = {
      {"betaReduction", 0, [](P) { return betaReduction(); }},
      {"etaReduction", 0, [](P) { return etaReduction(); }},
      {"etaAbstraction", 0, [](P) { return etaAbstraction(); }},
      {"mapFusion", 0, [](P) { return mapFusion(); }},
      {"mapFission", 0, [](P) { return mapFission(); }},
      {"fuseReduceMap", 0, [](P) { return fuseReduceMap(); }},
      {"splitJoin", 1, [](P a) { return splitJoin(a[0]); }},
      {"splitReduce", 1, [](P a) { return splitReduce(a[0]); }},
      {"split", 1, [](P a) { return split(a[0]); }},
      {"idAfter", 0, [](P) { return idAfter(); }},
      {"createTransposePair", 0, [](P) { return createTransposePair(); }},
      {"mapMapFBeforeTranspose", 0, [](P) { return mapMapFBeforeTranspose(); }},
      {"transposeBeforeMapMapF", 0, [](P) { return transposeBeforeMapMapF(); }},
      {"reduceMapInterchange", 0, [](P) { return reduceMapInterchange(); }},
      {"absorbAccumulator", 0, [](P) { return absorbAccumulator(); }},
      {"parallel", 0, [](P) { return parallel(); }},
      {"sequential", 0, [](P) { return sequential(); }},
      {"unroll", 0, [](P) { return unroll(); }},
      {"vectorize", 1, [](P a) { return vectorize(a[0]); }},
      {"toMemAfter", 0, [](P) { return toMemAfter(); }},
      {"separateDot", 0,
       [](P) {
         const auto& w = binomialWeights();
         return separateDot(w.w2d, w.wh, w.wv);
       }},
      {"packB", 0, [](P) { return packBRule(); }},
  };
  return catalog;
}

}  // namespace stratum
