#include "stratum/scheduling.hpp"

#include <algorithm>
#include <numeric>

namespace stratum {

using ir::Expr;
using ir::PrimKind;
using R = RewriteResult<Expr>;

namespace {

std::string listParam(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "]";
}

bool isMapLevel(const Expr& e) {
  auto k = ir::headPrim(e);
  return k && ir::isMapFamily(*k) && ir::isPrimCall(e, *k, 2) && e->fun()->arg()->isLam();
}

bool isReduceLevel(const Expr& e) {
  auto k = ir::headPrim(e);
  if (!k || !ir::isReduceFamily(*k) || !ir::isPrimCall(e, *k, 3)) return false;
  Expr op = ir::spine(e).args[0];
  return op->isLam() && op->body()->isLam();
}

bool isSkippable(const Expr& e) { return ir::isLayoutApp(e) || ir::isPrimCall(e, PrimKind::Add, 2); }

Strat isLevel() {
  return predicate<Expr>("isLevel", [](const Expr& e) { return isMapLevel(e) || isReduceLevel(e); });
}

Strat skipWrappers(Strat s) {
  Strat skippable = predicate<Expr>("isWrapper", isSkippable);
  return detail::recursive<Expr>({"skipWrappers", {s.name()}},
                                 [=](Strat self) { return lChoice(s, seq(skippable, argument(self))); });
}

/// s one level further in: the map body or the reduce operator body.
Strat inner(Strat s) { return lChoice(fmap(s), argumentOf(PrimKind::Reduce, body(body(s)))); }

/// map(fun(x => L(e)))(xs) with a layout function L not mentioning x.
Strat isWrappedMapBody() {
  return predicate<Expr>("isWrappedMapBody", [](const Expr& e) {
    if (!isMapLevel(e)) return false;
    const Expr& f = e->fun()->arg();
    return ir::isLayoutApp(f->body()) && !f->body()->fun()->hasFree(f->name());
  });
}

/// Fissions layout wrappers out of the map body, then applies s to the map.
Strat peelWrappers(Strat s) {
  return detail::recursive<Expr>({"peelWrappers", {s.name()}}, [=](Strat self) {
    return lChoice(seq(isWrappedMapBody(), seq(mapFission(), argument(self))), s);
  });
}

Strat chain(const std::vector<Strat>& steps) {
  Strat out = steps.front();
  for (std::size_t i = 1; i < steps.size(); ++i) out = dfnfSeq(out, steps[i]);
  return out;
}

}  // namespace

std::vector<LevelKind> nestLevels(const Expr& e) {
  std::vector<LevelKind> out;
  Expr cur = e;
  for (;;) {
    while (isSkippable(cur)) cur = cur->arg();
    if (isMapLevel(cur)) {
      out.push_back(LevelKind::Map);
      cur = cur->fun()->arg()->body();
    } else if (isReduceLevel(cur)) {
      out.push_back(LevelKind::Reduce);
      cur = ir::spine(cur).args[0]->body()->body();
    } else {
      return out;
    }
  }
}

Strat atLevel(int k, Strat s) {
  Strat here = seq(isLevel(), s);
  for (int i = 1; i < k; ++i) here = seq(isLevel(), inner(skipWrappers(here)));
  return named({"atLevel", {std::to_string(k), s.name()}}, skipWrappers(here));
}

Strat loopInterchange() {
  return named({"loopInterchange", {}},
               seq(idAfter(), seq(createTransposePair(), argument(transposeBeforeMapMapF()))));
}

Strat loopInterchangeAtDepth(int d) {
  return named({"loopInterchangeAtDepth", {std::to_string(d)}},
               applyNTimes(d, [](Strat s) { return fmap(std::move(s)); }, loopInterchange()));
}

Strat swapMaps(int k) {
  Strat swap = lChoice(loopInterchange(), seq(mapFission(), loopInterchange()));
  return named({"swapMaps", {std::to_string(k)}}, atLevel(k, peelWrappers(swap)));
}

Strat swapMapReduce(int k) {
  Strat swap = seq(try_(fmap(absorbAccumulator())), reduceMapInterchange());
  return named({"swapMapReduce", {std::to_string(k)}}, atLevel(k, peelWrappers(swap)));
}

Strat interchange(int d) {
  Strat s = id<Expr>();
  for (int k = 2; k <= d; ++k) s = seq(s, seq(DFNF(), swapMaps(k)));
  return named({"interchange", {std::to_string(d)}}, s);
}

Strat tileND(std::vector<int> sizes) {
  StrategyId sid{"tileND", {listParam(sizes)}};
  if (sizes.empty()) return fail<Expr>();
  const int d = static_cast<int>(sizes.size());
  if (d == 1) return named(sid, seq(DFNF(), function(splitJoin(sizes[0]))));
  std::vector<int> tail(sizes.begin() + 1, sizes.end());
  Strat s = seq(DFNF(), seq(fmap(tileND(tail)), seq(function(splitJoin(sizes[0])), interchange(d))));
  return named(sid, s);
}

Strat tile(int x, int y) {
  return named({"tile", {std::to_string(x), std::to_string(y)}}, tileND({x, y}));
}

Strat reorder(std::vector<int> perm) {
  StrategyId sid{"reorder", {listParam(perm)}};
  return Strat(sid, [perm, sid](const Expr& e, ExecContext& ctx) {
    std::vector<LevelKind> kinds = nestLevels(e);
    const std::size_t n = kinds.size();
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 1);
    if (sorted != expected) return R::failure(sid);

    std::vector<int> order = expected;
    Strat plan = DFNF();
    for (std::size_t p = 0; p < n; ++p) {
      auto c = static_cast<std::size_t>(std::find(order.begin(), order.end(), perm[p]) - order.begin());
      for (; c > p; --c) {
        const int level = static_cast<int>(c);  // 1-based index of the upper level
        if (kinds[c - 1] == LevelKind::Map && kinds[c] == LevelKind::Map)
          plan = seq(plan, seq(DFNF(), swapMaps(level)));
        else if (kinds[c - 1] == LevelKind::Map && kinds[c] == LevelKind::Reduce)
          plan = seq(plan, seq(DFNF(), swapMapReduce(level)));
        else
          return R::failure(sid);  // only reductions move outwards
        std::swap(order[c - 1], order[c]);
        std::swap(kinds[c - 1], kinds[c]);
      }
    }
    auto r = plan(e, ctx);
    return r.ok() ? r : R::failure(sid);
  });
}

Strat packB() { return named({"packB", {}}, topDown(packBRule())); }

Strat parallelizeCopy() {
  return named({"parallelizeCopy", {}}, topDown(argumentOf(PrimKind::ToMem, function(function(parallel())))));
}

const std::vector<Schedule>& gemmSchedules() {
  static const std::vector<Schedule> schedules = [] {
    auto tiling = [] { return topDown(tile(32, 32)); };
    auto splitK = [] { return topDown(seq(isReduce(), split(4))); };
    auto blockingSteps = [=] {
      return std::vector<Strat>{tiling(), splitK(), topDown(reorder({1, 2, 5, 6, 3, 4}))};
    };
    auto loopPermSteps = [=] {
      return std::vector<Strat>{tiling(), splitK(), topDown(reorder({1, 2, 5, 3, 6, 4})), topDown(vectorize(32))};
    };
    auto packingSteps = [=] {
      std::vector<Strat> steps{packB()};
      for (auto& s : loopPermSteps()) steps.push_back(s);
      steps.push_back(parallelizeCopy());
      return steps;
    };
    auto lowered = [](const std::string& name, std::vector<Strat> steps) {
      return named({name, {}}, seq(chain(steps), lowerToC()));
    };
    return std::vector<Schedule>{
        {"baseline", "mm",
         [] { return named({"baseline", {}}, seq(DFNF(), seq(topDown(fuseReduceMap()), lowerToC()))); }},
        {"blocking", "mm", [=] { return lowered("blocking", blockingSteps()); }},
        {"vectorized", "mm",
         [=] {
           auto steps = blockingSteps();
           steps.push_back(topDown(vectorize(32)));
           return lowered("vectorized", steps);
         }},
        {"loopPerm", "mm", [=] { return lowered("loopPerm", loopPermSteps()); }},
        {"arrayPacking", "mm", [=] { return lowered("arrayPacking", packingSteps()); }},
        {"cacheBlocks", "mm",
         [=] {
           auto steps = packingSteps();
           steps.push_back(topDown(seq(isReduce(), toMemAfter())));
           steps.push_back(topDown(argumentOf(PrimKind::Reduce, topDown(seq(isReduce(), unroll())))));
           return lowered("cacheBlocks", steps);
         }},
        {"parallelFull", "mm",
         [=] {
           auto steps = packingSteps();
           steps.push_back(topDown(parallel()));
           steps.push_back(bottomUp(seq(isReduce(), unroll())));
           return lowered("parallelFull", steps);
         }},
    };
  }();
  return schedules;
}

const std::vector<Schedule>& binomialSchedules() {
  static const std::vector<Schedule> schedules = [] {
    auto separate = [] {
      const auto& w = binomialWeights();
      return topDown(separateDot(w.w2d, w.wh, w.wv));
    };
    return std::vector<Schedule>{
        {"bfNaive", "binomial", [] { return named({"bfNaive", {}}, lowerToC()); }},
        {"bfSeparated", "binomial", [=] { return named({"bfSeparated", {}}, seq(separate(), lowerToC())); }},
        {"bfSeparatedPar", "binomial",
         [=] { return named({"bfSeparatedPar", {}}, seq(separate(), seq(topDown(parallel()), lowerToC()))); }},
    };
  }();
  return schedules;
}

std::vector<Schedule> allSchedules() {
  std::vector<Schedule> out = gemmSchedules();
  for (const auto& s : binomialSchedules()) out.push_back(s);
  return out;
}

const Schedule* findSchedule(const std::string& name) {
  for (const auto* list : {&gemmSchedules(), &binomialSchedules()})
    for (const auto& s : *list)
      if (s.name == name) return &s;
  return nullptr;
}

}  // namespace stratum
