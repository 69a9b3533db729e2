// Term-type-generic strategy combinators and whole-term traversals.
//
// The child traversals all/one/some are parameterized over a Traversable<P>
// specialization that exposes the immediate children of a term.
#pragma once

#include <concepts>
#include <string>
#include <utility>

#include "stratum/strategy.hpp"

namespace stratum {

/// Specialize for each term type:
///   static int childCount(const P&);
///   static const P& child(const P&, int i);
///   static P withChild(const P&, int i, P replacement);
template <class P>
struct Traversable;

template <class P>
concept TraversableTerm = requires(const P& p, int i) {
  { Traversable<P>::childCount(p) } -> std::convertible_to<int>;
  { Traversable<P>::child(p, i) } -> std::convertible_to<const P&>;
  { Traversable<P>::withChild(p, i, p) } -> std::convertible_to<P>;
};

template <class P>
Strategy<P> id() {
  return Strategy<P>("id", [](const P& p, ExecContext&) { return RewriteResult<P>::success(p); });
}

template <class P>
Strategy<P> fail() {
  return Strategy<P>("fail",
                     [](const P&, ExecContext&) { return RewriteResult<P>::failure({"fail", {}}); });
}

/// fs `;` ss
template <class P>
Strategy<P> seq(Strategy<P> fs, Strategy<P> ss) {
  StrategyId sid{"seq", {fs.name(), ss.name()}};
  return Strategy<P>(std::move(sid), [fs, ss](const P& p, ExecContext& ctx) {
    auto r = fs(p, ctx);
    if (!r.ok()) return r;
    return ss(r.program(), ctx);
  });
}

/// fs <+ ss: ss runs on the original input only when fs fails.
template <class P>
Strategy<P> lChoice(Strategy<P> fs, Strategy<P> ss) {
  StrategyId sid{"lChoice", {fs.name(), ss.name()}};
  return Strategy<P>(std::move(sid), [fs, ss](const P& p, ExecContext& ctx) {
    auto r = fs(p, ctx);
    if (r.ok()) return r;
    return ss(p, ctx);
  });
}

template <class P>
Strategy<P> try_(Strategy<P> s) {
  StrategyId sid{"try", {s.name()}};
  return Strategy<P>(std::move(sid), [s](const P& p, ExecContext& ctx) {
    auto r = s(p, ctx);
    if (r.ok()) return r;
    return RewriteResult<P>::success(p);
  });
}

/// Applies s until it fails. Iterative form of try(s `;` repeat(s)); every
/// iteration consumes fuel so non-terminating repetition ends in FuelExhausted.
template <class P>
Strategy<P> repeat(Strategy<P> s) {
  StrategyId sid{"repeat", {s.name()}};
  return Strategy<P>(std::move(sid), [s](const P& p, ExecContext& ctx) {
    P cur = p;
    for (;;) {
      ctx.consumeFuel();
      auto r = s(cur, ctx);
      if (!r.ok()) return RewriteResult<P>::success(std::move(cur));
      cur = std::move(r.program());
    }
  });
}

/// Applies the transformer f to s, n times. n <= 0 yields s.
template <class P, class Transformer>
Strategy<P> applyNTimes(int n, Transformer f, Strategy<P> s) {
  for (int i = 0; i < n; ++i) s = f(s);
  return s;
}

/// Succeeds with the unchanged input iff s fails.
template <class P>
Strategy<P> not_(Strategy<P> s) {
  StrategyId sid{"not", {s.name()}};
  return Strategy<P>(sid, [s, sid](const P& p, ExecContext& ctx) {
    auto r = s(p, ctx);
    if (r.ok()) return RewriteResult<P>::failure(sid);
    return RewriteResult<P>::success(p);
  });
}

/// Strategy that succeeds unchanged iff pred holds at the root.
template <class P, class Pred>
Strategy<P> predicate(std::string name, Pred pred) {
  return Strategy<P>(name, [pred, name](const P& p, ExecContext&) {
    if (pred(p)) return RewriteResult<P>::success(p);
    return RewriteResult<P>::failure({name, {}});
  });
}

// --- child traversals -------------------------------------------------------

namespace detail {
template <class P>
RewriteResult<P> atChild(const Strategy<P>& s, const P& p, int i, ExecContext& ctx) {
  ctx.pushPath(i);
  struct Pop {
    ExecContext& c;
    ~Pop() { c.popPath(); }
  } pop{ctx};
  return s(Traversable<P>::child(p, i), ctx);
}
}  // namespace detail

/// Succeeds iff s succeeds on every immediate child; vacuously on leaves.
template <TraversableTerm P>
Strategy<P> all(Strategy<P> s) {
  StrategyId sid{"all", {s.name()}};
  return Strategy<P>(sid, [s, sid](const P& p, ExecContext& ctx) {
    P cur = p;
    const int n = Traversable<P>::childCount(p);
    for (int i = 0; i < n; ++i) {
      auto r = detail::atChild(s, cur, i, ctx);
      if (!r.ok()) return RewriteResult<P>::failure(sid);
      cur = Traversable<P>::withChild(cur, i, std::move(r.program()));
    }
    return RewriteResult<P>::success(std::move(cur));
  });
}

/// Applies s to the first child (left to right) where it succeeds.
template <TraversableTerm P>
Strategy<P> one(Strategy<P> s) {
  StrategyId sid{"one", {s.name()}};
  return Strategy<P>(sid, [s, sid](const P& p, ExecContext& ctx) {
    const int n = Traversable<P>::childCount(p);
    for (int i = 0; i < n; ++i) {
      auto r = detail::atChild(s, p, i, ctx);
      if (r.ok()) return RewriteResult<P>::success(Traversable<P>::withChild(p, i, std::move(r.program())));
    }
    return RewriteResult<P>::failure(sid);
  });
}

/// Applies s to every child where it succeeds; fails if it succeeds nowhere.
template <TraversableTerm P>
Strategy<P> some(Strategy<P> s) {
  StrategyId sid{"some", {s.name()}};
  return Strategy<P>(sid, [s, sid](const P& p, ExecContext& ctx) {
    P cur = p;
    bool any = false;
    const int n = Traversable<P>::childCount(p);
    for (int i = 0; i < n; ++i) {
      auto r = detail::atChild(s, cur, i, ctx);
      if (!r.ok()) continue;
      any = true;
      cur = Traversable<P>::withChild(cur, i, std::move(r.program()));
    }
    if (!any) return RewriteResult<P>::failure(sid);
    return RewriteResult<P>::success(std::move(cur));
  });
}

// --- complete traversals ----------------------------------------------------
//
// The recursive definitions refer to themselves through a shared Strategy slot
// so that each traversal is built once instead of on every recursive call.

namespace detail {
template <class P, class Build>
Strategy<P> recursive(StrategyId sid, Build build) {
  auto slot = std::make_shared<Strategy<P>>();
  std::weak_ptr<Strategy<P>> weak = slot;
  Strategy<P> self(sid, [weak](const P& p, ExecContext& ctx) { return (*weak.lock())(p, ctx); });
  Strategy<P> body = build(self);
  // The returned strategy owns the slot; the slot's body refers back weakly.
  *slot = body;
  return Strategy<P>(sid, [slot, sid](const P& p, ExecContext& ctx) {
    auto r = (*slot)(p, ctx);
    if (!r.ok()) return RewriteResult<P>::failure(sid);
    return r;
  });
}
}  // namespace detail

/// s <+ one(topDown(s)): first success in pre-order.
template <TraversableTerm P>
Strategy<P> topDown(Strategy<P> s) {
  return detail::recursive<P>({"topDown", {s.name()}},
                              [s](Strategy<P> self) { return lChoice(s, one(self)); });
}

/// one(bottomUp(s)) <+ s: first success in post-order.
template <TraversableTerm P>
Strategy<P> bottomUp(Strategy<P> s) {
  return detail::recursive<P>({"bottomUp", {s.name()}},
                              [s](Strategy<P> self) { return lChoice(one(self), s); });
}

/// s `;` all(allTopDown(s))
template <TraversableTerm P>
Strategy<P> allTopDown(Strategy<P> s) {
  return detail::recursive<P>({"allTopDown", {s.name()}},
                              [s](Strategy<P> self) { return seq(s, all(self)); });
}

/// all(allBottomUp(s)) `;` s
template <TraversableTerm P>
Strategy<P> allBottomUp(Strategy<P> s) {
  return detail::recursive<P>({"allBottomUp", {s.name()}},
                              [s](Strategy<P> self) { return seq(all(self), s); });
}

/// all(tryAll(try(s))) `;` try(s): never fails, applies s bottom-up wherever possible.
template <TraversableTerm P>
Strategy<P> tryAll(Strategy<P> s) {
  auto ts = try_(s);
  return detail::recursive<P>({"tryAll", {s.name()}},
                              [ts](Strategy<P> self) { return seq(all(self), ts); });
}

/// repeat(topDown(s)): afterwards s applies nowhere.
template <TraversableTerm P>
Strategy<P> normalize(Strategy<P> s) {
  auto r = repeat(topDown(s));
  return Strategy<P>(StrategyId{"normalize", {s.name()}},
                     [r](const P& p, ExecContext& ctx) { return r(p, ctx); });
}

}  // namespace stratum
