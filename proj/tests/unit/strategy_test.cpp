#include <gtest/gtest.h>

#include "stratum/combinators.hpp"
#include "stratum/normal_forms.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

// A second term type: the combinators only need the child-traversal interface.
struct Tree;
using TreePtr = std::shared_ptr<const Tree>;
struct Tree {
  int label;
  std::vector<TreePtr> kids;
};

TreePtr node(int label, std::vector<TreePtr> kids = {}) { return std::make_shared<const Tree>(Tree{label, std::move(kids)}); }

std::string show(const TreePtr& t) {
  std::string s = std::to_string(t->label);
  if (t->kids.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < t->kids.size(); ++i) s += (i ? " " : "") + show(t->kids[i]);
  return s + ")";
}

}  // namespace

template <>
struct stratum::Traversable<TreePtr> {
  static int childCount(const TreePtr& t) { return static_cast<int>(t->kids.size()); }
  static const TreePtr& child(const TreePtr& t, int i) { return t->kids[static_cast<std::size_t>(i)]; }
  static TreePtr withChild(const TreePtr& t, int i, TreePtr c) {
    auto kids = t->kids;
    kids[static_cast<std::size_t>(i)] = std::move(c);
    return node(t->label, std::move(kids));
  }
};

namespace {

using TS = Strategy<TreePtr>;

/// Rewrites an odd label to label + 1 (a leaf rule).
TS bumpOdd() {
  return TS(
      "bumpOdd",
      [](const TreePtr& t, ExecContext&) {
        if (t->label % 2 == 0) return RewriteResult<TreePtr>::failure({"bumpOdd", {}});
        return RewriteResult<TreePtr>::success(node(t->label + 1, t->kids));
      },
      true);
}

std::string rewriteTree(const TS& s, const TreePtr& t) {
  auto r = s(t);
  return r.ok() ? show(r.program()) : "failure " + r.failed().render();
}

Expr threemaps() { return program("threemaps"); }
std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

Expr fusedTwice() {
  return rewrite(body(seq(mapFusion(), mapFusion())), threemaps());
}

}  // namespace

TEST(Strategy, IdAndFail) {
  Expr t = threemaps();
  EXPECT_TRUE(structEq(run(id<Expr>(), t).result.program(), t));
  EXPECT_TRUE(structEq(run(seq(id<Expr>(), id<Expr>()), t).result.program(), t));
  EXPECT_TRUE(structEq(run(lChoice(fail<Expr>(), id<Expr>()), t).result.program(), t));
  auto f = run(fail<Expr>(), t).result;
  ASSERT_FALSE(f.ok());
  EXPECT_EQ(f.failed().render(), "fail");
  EXPECT_TRUE(run(try_(fail<Expr>()), t).result.ok());
  EXPECT_EQ(run(seq(fail<Expr>(), id<Expr>()), t).result.failed().render(), "fail");
}

TEST(Strategy, Seq) {
  Expr fused = fusedTwice();
  // map(fun(x => f(g(h(x)))))(xs): a single map over the input.
  EXPECT_EQ(occurrences(print(fused), "map("), 1u);
  EXPECT_TRUE(sameValue(threemaps(), fused));

  Expr two = parse("fun(xs :: 8.float => map(fun(x => add(x)(1)))(map(fun(x => add(x)(x)))(xs)))");
  auto r = run(seq(mapFusion(), mapFusion()), two->body()).result;
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failed().render(), "mapFusion");
}

TEST(Strategy, LChoice) {
  Expr t = program("dot");
  EXPECT_TRUE(run(lChoice(id<Expr>(), fail<Expr>()), t).result.ok());
  auto r = run(lChoice(mapFusion(), id<Expr>()), t).result;
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(structEq(r.program(), t));
  auto both = run(lChoice(mapFusion(), fail<Expr>()), t).result;
  EXPECT_EQ(both.failed().render(), "fail");
}

TEST(Strategy, Try) {
  Expr two = parse("fun(xs :: 8.float => map(fun(x => add(x)(1)))(map(fun(x => add(x)(x)))(xs)))");
  Expr fused = rewrite(body(try_(mapFusion())), two);
  EXPECT_TRUE(alphaEq(fused, parse("fun(xs :: 8.float => map(fun(y => (fun(x => add(x)(1)))((fun(x => add(x)(x)))(y))))(xs))")))
      << print(fused);
  Expr x = var("x", f32());
  EXPECT_TRUE(structEq(rewrite(try_(mapFusion()), x), x));
}

TEST(Strategy, Repeat) {
  Expr t = threemaps();
  EXPECT_TRUE(structEq(rewrite(repeat(fail<Expr>()), t), t));
  EXPECT_TRUE(alphaEq(rewrite(body(repeat(mapFusion())), t), fusedTwice()));
  EXPECT_THROW(run(repeat(id<Expr>()), t, false, FuelLimits{10'000, 100'000}), FuelExhausted);
}

TEST(Strategy, ApplyNTimes) {
  auto wrap = [](Strat s) { return argument(std::move(s)); };
  EXPECT_EQ(applyNTimes(0, wrap, mapFusion()).name(), "mapFusion");
  EXPECT_EQ(applyNTimes(1, wrap, mapFusion()).name(), argument(mapFusion()).name());

  Expr e = rewrite(DFNF(), program("nest3"));
  // splitJoin matches the partially applied map, hence function(...) on the full application.
  Expr viaN = rewrite(body(applyNTimes(2, [](Strat s) { return fmap(std::move(s)); }, function(splitJoin(2)))), e);
  Expr direct = rewrite(body(fmap(fmap(function(splitJoin(2))))), e);
  EXPECT_TRUE(structEq(viaN, direct));
  EXPECT_NE(print(viaN).find("split(2)"), std::string::npos);
  EXPECT_TRUE(sameValue(e, viaN));
}

TEST(Strategy, Not) {
  Expr t = threemaps();
  EXPECT_TRUE(structEq(rewrite(not_(fail<Expr>()), t), t));
  auto r = run(not_(id<Expr>()), t).result;
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failed().render(), "not(id)");
  Expr appNode = t->body();
  EXPECT_TRUE(run(not_(isFun()), appNode).result.ok());
}

TEST(Strategy, Predicates) {
  Expr reduce = primNode(PrimKind::Reduce, {}, nullptr);
  Expr map = primNode(PrimKind::Map, {}, nullptr);
  EXPECT_TRUE(run(isReduce(), reduce).result.ok());
  auto r = run(isReduce(), map).result;
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failed().render(), "isReduce");
  Expr identity = lam("x", nullptr, var("x"));
  auto r2 = run(isFun(), identity).result;
  ASSERT_TRUE(r2.ok());
  EXPECT_TRUE(structEq(r2.program(), identity));
}

TEST(Strategy, TopDownChoosesOuterPair) {
  Expr t = threemaps();
  Expr viaTopDown = rewrite(topDown(mapFusion()), t);
  Expr outer = rewrite(body(mapFusion()), t);
  Expr inner = rewrite(one(one(mapFusion())), t);
  EXPECT_TRUE(structEq(viaTopDown, outer));
  EXPECT_FALSE(structEq(outer, inner));
  EXPECT_TRUE(structEq(inner, rewrite(body(argument(mapFusion())), t)));
}

TEST(Strategy, TryAllParallelizesEveryMap) {
  Expr t = rewrite(tryAll(parallel()), parse("fun(x :: 4.4.float => map(fun(r => map(fun(v => add(v)(v)))(r)))(x))"));
  const std::string s = print(t);
  EXPECT_NE(s.find("mapPar(fun(v"), std::string::npos) << s;
  EXPECT_EQ(s.find("map(fun"), std::string::npos) << s;
}

TEST(Strategy, Normalize) {
  Expr redex = parse("(fun(x :: float => x))((fun(y :: float => y))(z))", {}, {{"z", f32()}});
  Expr z = rewrite(normalize(betaReduction()), redex);
  ASSERT_TRUE(z->isVar());
  EXPECT_EQ(z->name(), "z");
  EXPECT_TRUE(alphaEq(rewrite(body(normalize(mapFusion())), threemaps()), fusedTwice()));
  Expr t = threemaps();
  EXPECT_TRUE(structEq(rewrite(normalize(fail<Expr>()), t), t));
}

TEST(Strategy, StepCounts) {
  Expr t = threemaps();
  // The first alternative fuses once then fails; its step is counted in total only.
  Strat s = lChoice(seq(body(mapFusion()), fail<Expr>()), body(argument(mapFusion())));
  auto out = run(s, t);
  ASSERT_TRUE(out.result.ok());
  EXPECT_EQ(out.counts.total, 2u);
  EXPECT_EQ(out.counts.committed, 1u);
  EXPECT_EQ(out.counts.perRule.at("mapFusion"), 2u);
  EXPECT_EQ(out.counts.perRuleCommitted.at("mapFusion"), 1u);
}

TEST(Strategy, TracePaths) {
  auto out = run(body(argument(mapFusion())), threemaps(), true);
  ASSERT_EQ(out.trace.size(), 1u);
  EXPECT_EQ(out.trace[0].rule, "mapFusion");
  EXPECT_EQ(out.trace[0].path, (std::vector<int>{0, 1}));
  EXPECT_TRUE(out.trace[0].committed);
}

TEST(Strategy, Purity) {
  Strat s = topDown(mapFusion());
  Expr t = threemaps();
  auto a = run(s, t);
  auto b = run(s, t);
  EXPECT_TRUE(structEq(a.result.program(), b.result.program()));
  EXPECT_EQ(a.counts.total, b.counts.total);
}

TEST(GenericTerm, Traversals) {
  TreePtr t = node(2, {node(4, {node(1), node(3)}), node(5)});
  EXPECT_EQ(rewriteTree(topDown(bumpOdd()), t), "2(4(2 3) 5)");
  EXPECT_EQ(rewriteTree(bottomUp(bumpOdd()), t), "2(4(2 3) 5)");
  EXPECT_EQ(rewriteTree(tryAll(bumpOdd()), t), "2(4(2 4) 6)");
  EXPECT_EQ(rewriteTree(allTopDown(bumpOdd()), t), "failure allTopDown(bumpOdd)");
  EXPECT_EQ(rewriteTree(normalize(bumpOdd()), t), "2(4(2 4) 6)");
  EXPECT_EQ(rewriteTree(some(bumpOdd()), t), "2(4(1 3) 6)");
  EXPECT_EQ(rewriteTree(all(bumpOdd()), node(1, {node(3), node(5)})), "1(4 6)");
  EXPECT_EQ(rewriteTree(one(bumpOdd()), node(1)), "failure one(bumpOdd)");
  EXPECT_EQ(rewriteTree(all(bumpOdd()), node(7)), "7");
}

TEST(GenericTerm, BottomUpIsPostOrder) {
  TreePtr t = node(1, {node(3)});
  EXPECT_EQ(rewriteTree(topDown(bumpOdd()), t), "2(3)");
  EXPECT_EQ(rewriteTree(bottomUp(bumpOdd()), t), "1(4)");
}
