#include "stratum/traversals.hpp"

namespace stratum {

using ir::Expr;
using R = RewriteResult<Expr>;

namespace {

R childStep(const Strat& s, const Expr& e, int i, ExecContext& ctx) {
  auto r = detail::atChild(s, e, i, ctx);
  if (!r.ok()) return r;
  return R::success(Traversable<Expr>::withChild(e, i, std::move(r.program())));
}

// Applies s to spine argument `idx` of e, whose spine has n arguments.
R atSpineArg(const Strat& s, const Expr& e, std::size_t idx, std::size_t n, ExecContext& ctx) {
  if (idx + 1 == n) return childStep(s, e, 1, ctx);
  ctx.pushPath(0);
  R r = R::failure({});
  try {
    r = atSpineArg(s, e->fun(), idx, n - 1, ctx);
  } catch (...) {
    ctx.popPath();
    throw;
  }
  ctx.popPath();
  if (!r.ok()) return r;
  return R::success(ir::app(std::move(r.program()), e->arg()));
}

}  // namespace

Strat body(Strat s) {
  StrategyId sid{"body", {s.name()}};
  return Strat(sid, [s, sid](const Expr& e, ExecContext& ctx) {
    if (!e->isLam()) return R::failure(sid);
    auto r = childStep(s, e, 0, ctx);
    return r.ok() ? r : R::failure(sid);
  });
}

Strat function(Strat s) {
  StrategyId sid{"function", {s.name()}};
  return Strat(sid, [s, sid](const Expr& e, ExecContext& ctx) {
    if (!e->isApp()) return R::failure(sid);
    auto r = childStep(s, e, 0, ctx);
    return r.ok() ? r : R::failure(sid);
  });
}

Strat argument(Strat s) {
  StrategyId sid{"argument", {s.name()}};
  return Strat(sid, [s, sid](const Expr& e, ExecContext& ctx) {
    if (!e->isApp()) return R::failure(sid);
    auto r = childStep(s, e, 1, ctx);
    return r.ok() ? r : R::failure(sid);
  });
}

Strat argumentOf(ir::PrimKind k, Strat s) {
  StrategyId sid{"argumentOf", {ir::primInfo(k).name, s.name()}};
  return Strat(sid, [k, s, sid](const Expr& e, ExecContext& ctx) {
    if (!e->isApp()) return R::failure(sid);
    std::size_t n = 0;
    const ir::Node* cur = e.get();
    while (cur->isApp()) {
      ++n;
      cur = cur->fun().get();
    }
    if (!cur->isPrim(k) || n > static_cast<std::size_t>(ir::primInfo(k).arity)) return R::failure(sid);
    auto r = atSpineArg(s, e, 0, n, ctx);
    return r.ok() ? r : R::failure(sid);
  });
}

Strat fmap(Strat s) {
  return named(StrategyId{"fmap", {s.name()}}, function(argumentOf(ir::PrimKind::Map, body(s))));
}

Strat move(int i, Strat s) { return applyNTimes(i, [](Strat x) { return argument(std::move(x)); }, std::move(s)); }

Strat moveAlongComposition(int i, Strat s) { return move(i, std::move(s)); }

Strat named(StrategyId id, Strat s) {
  return Strat(id, [id, s](const Expr& e, ExecContext& ctx) {
    auto r = s(e, ctx);
    return r.ok() ? r : R::failure(id);
  });
}

Strat isFun() {
  return predicate<Expr>("isFun", [](const Expr& e) { return e->isLam(); });
}

Strat isReduce() {
  return predicate<Expr>("isReduce", [](const Expr& e) { return ir::headPrim(e) == ir::PrimKind::Reduce; });
}

Strat isHighLevelMapOrReduce() {
  return predicate<Expr>("isHighLevelMapOrReduce",
                         [](const Expr& e) { return e->isPrim() && ir::isHighLevel(e->prim()); });
}

Strat isPrim(ir::PrimKind k) {
  return predicate<Expr>(std::string("is_") + ir::primInfo(k).name, [k](const Expr& e) { return e->isPrim(k); });
}

Outcome run(const Strat& s, const Expr& e, bool trace, FuelLimits limits) {
  ir::FreshScope scope(e);
  ExecContext ctx(limits, trace);
  auto r = s(e, ctx);
  return Outcome{std::move(r), ctx.counts(), ctx.trace()};
}

}  // namespace stratum
