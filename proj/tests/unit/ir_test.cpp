#include <gtest/gtest.h>

#include "stratum/corpus.hpp"
#include "stratum/ir/interp.hpp"
#include "stratum/ir/syntax.hpp"

using namespace stratum;
using namespace stratum::ir;

namespace {

Value arr(std::vector<double> xs) {
  std::vector<Value> v;
  for (double x : xs) v.push_back(Value::of(x));
  return Value::array(std::move(v));
}

Value matrix(int rows, int cols, const std::vector<double>& data) {
  return unflatten(arrayOf(rows, arrayOf(cols, f32())), data);
}

bool hasFree(const Expr& e, const std::string& x) { return e->hasFree(x); }

}  // namespace

TEST(Parse, Smoke) {
  Expr e = parse("fun(x :: float => add(x)(x))");
  EXPECT_EQ(print(e), "fun(x :: float => add(x)(x))");
}

TEST(Parse, FusionLeftSide) {
  TypeEnv decls{{"f", fnOf(f32(), f32())}, {"g", fnOf(f32(), f32())}};
  Expr e = parse("fun(xs :: 8.float => map(f)(map(g)(xs)))", {}, decls);
  ASSERT_TRUE(e->isLam());
  Expr outer = e->body();
  ASSERT_TRUE(outer->isApp());
  ASSERT_TRUE(outer->fun()->isApp());
  EXPECT_TRUE(outer->fun()->fun()->isPrim(PrimKind::Map));
  EXPECT_TRUE(outer->fun()->arg()->isVar());
  EXPECT_EQ(outer->fun()->arg()->name(), "f");
  EXPECT_TRUE(outer->arg()->fun()->fun()->isPrim(PrimKind::Map));
  EXPECT_EQ(outer->arg()->arg()->name(), "xs");
}

TEST(Parse, PipelineDotProduct) {
  Expr e = parse("fun(a :: 3.float => fun(b :: 3.float => zip(a,b) |> map(*) |> reduce(+,0)))");
  EXPECT_TRUE(typeEqual(typeCheck(e), fnOf(arrayOf(3, f32()), fnOf(arrayOf(3, f32()), f32()))));
  EXPECT_DOUBLE_EQ(eval(e, {arr({1, 2, 3}), arr({4, 5, 6})}).scalar, 32.0);
  Expr viaMacro = parse("fun(a :: 3.float => fun(b :: 3.float => dot(a)(b)))");
  EXPECT_TRUE(alphaEq(e, viaMacro)) << print(e) << "\n" << print(viaMacro);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("fun(xs :: 8.float => map(f)(xs))"), ParseError);
  EXPECT_THROW(parse("map(f)"), ParseError);
  EXPECT_THROW(parse("fun(xs :: N.float => xs)"), ParseError);
  EXPECT_THROW(parse("fun(xs :: 8.float => map(fun(x => x)(xs)"), ParseError);
  try {
    parse("fun(x :: float =>\n  add(x)(y))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_NE(std::string(e.what()).find("y"), std::string::npos);
  }
}

TEST(Print, Forms) {
  EXPECT_EQ(print(lam("x", nullptr, var("x"))), "fun(x => x)");
  Expr tiled = parse("fun(xs :: 8.float => join(map(map(fun(x => add(x)(x))))(split(4)(xs))))");
  const std::string s = print(tiled);
  EXPECT_NE(s.find("split(4)"), std::string::npos);
  EXPECT_NE(s.find("join("), std::string::npos);
}

TEST(Print, RoundTripOnCorpus) {
  for (const auto& p : corpus()) {
    Expr e = loadProgram(p.name).main;
    Expr again = parse(print(e));
    EXPECT_TRUE(alphaEq(e, again)) << p.name << "\n" << print(e) << "\n" << print(again);
    EXPECT_TRUE(alphaEq(again, parse(print(again)))) << p.name;
  }
}

TEST(Substitute, CaptureAvoiding) {
  Expr plus = parse("add(x)(1)", {}, {{"x", f32()}});
  Expr r = substitute(plus, "x", lit(2));
  EXPECT_TRUE(alphaEq(r, parse("add(2)(1)")));

  Expr constant = lam("y", f32(), var("x", f32()));
  Expr captured = substitute(constant, "x", var("y", f32()));
  ASSERT_TRUE(captured->isLam());
  EXPECT_NE(captured->name(), "y");
  EXPECT_EQ(captured->freeVars(), (std::vector<std::string>{"y"}));

  Expr identity = lam("x", f32(), var("x", f32()));
  EXPECT_TRUE(structEq(substitute(identity, "x", var("z", f32())), identity));
}

TEST(AlphaEq, Binders) {
  EXPECT_TRUE(alphaEq(lam("x", nullptr, var("x")), lam("y", nullptr, var("y"))));
  EXPECT_FALSE(alphaEq(lam("x", nullptr, lam("y", nullptr, var("x"))), lam("a", nullptr, lam("b", nullptr, var("b")))));
  EXPECT_FALSE(alphaEq(var("x"), var("y")));
}

TEST(FreeVars, Examples) {
  Expr e = lam("x", nullptr, app(var("f"), var("x")));
  EXPECT_EQ(e->freeVars(), (std::vector<std::string>{"f"}));
  EXPECT_EQ(var("x")->freeVars(), (std::vector<std::string>{"x"}));
  Expr closed = parse("fun(x :: float => fun(y :: float => add(x)(y)))");
  EXPECT_TRUE(closed->freeVars().empty());
  EXPECT_FALSE(hasFree(closed, "x"));
}

TEST(TypeCheck, Examples) {
  Expr mm = loadProgram("mm").main;
  TypePtr m = arrayOf(64, arrayOf(64, f32()));
  EXPECT_TRUE(typeEqual(typeCheck(mm), fnOf(m, fnOf(m, m)))) << renderType(typeCheck(mm));
  EXPECT_TRUE(typeEqual(typeCheck(parse("fun(x :: float => add(x)(x))")), fnOf(f32(), f32())));
  EXPECT_THROW(parse("fun(xs :: 4.float => split(3)(xs))"), TypeError);
  EXPECT_THROW(typeCheck(app(var("f"), lit(1))), TypeError);
}

TEST(TypeCheck, Divisibility) {
  EXPECT_NO_THROW(parse("fun(xs :: 8.float => asVector(4)(xs))"));
  EXPECT_THROW(parse("fun(xs :: 6.float => asVector(4)(xs))"), TypeError);
  EXPECT_THROW(parse("fun(xs :: 8.float => slide(3)(2)(xs))"), TypeError);
  EXPECT_NO_THROW(parse("fun(xs :: 9.float => slide(3)(2)(xs))"));
}

TEST(Eval, Examples) {
  Expr js = parse("fun(xs :: 4.float => join(split(2)(xs)))");
  EXPECT_EQ(flatten(eval(js, {arr({1, 2, 3, 4})})), (std::vector<double>{1, 2, 3, 4}));

  Expr mm = loadProgram("mm", {{"M", 2}, {"N", 2}, {"K", 2}}).main;
  Value b = matrix(2, 2, {3, -1, 0.5, 7});
  EXPECT_EQ(flatten(eval(mm, {matrix(2, 2, {1, 0, 0, 1}), b})), flatten(b));

  Expr pad = parse("fun(xs :: 3.float => padClamp(1, 2)(xs))");
  EXPECT_EQ(flatten(eval(pad, {arr({1, 2, 3})})), (std::vector<double>{1, 1, 2, 3, 3, 3}));
  Expr slide = parse("fun(xs :: 5.float => slide(3)(2)(xs))");
  EXPECT_EQ(flatten(eval(slide, {arr({1, 2, 3, 4, 5})})), (std::vector<double>{1, 2, 3, 3, 4, 5}));
  Expr tr = parse("fun(m :: 2.3.float => transpose(m))");
  EXPECT_EQ(flatten(eval(tr, {matrix(2, 3, {1, 2, 3, 4, 5, 6})})), (std::vector<double>{1, 4, 2, 5, 3, 6}));
}

TEST(Eval, LowLevelPrimitivesMatchHighLevel) {
  Expr hi = parse("fun(m :: 4.4.float => map(fun(r => reduce(fun(a => fun(x => add(a)(x))))(0)(r)))(m))");
  Expr lo = parse("fun(m :: 4.4.float => mapPar(fun(r => reduceSeqUnroll(fun(a => fun(x => add(a)(x))))(0)(toMem(r))))(m))");
  auto in = randomInputs(hi, 9);
  EXPECT_EQ(flatten(eval(hi, in)), flatten(eval(lo, in)));
}

// Oracle laws on random arrays.
class OracleLaw : public ::testing::TestWithParam<int> {};

TEST_P(OracleLaw, SplitJoinTransposePad) {
  const std::uint64_t seed = static_cast<std::uint64_t>(GetParam());
  Expr js = parse("fun(xs :: 12.float => join(split(3)(xs)))");
  auto in = randomInputs(js, seed);
  EXPECT_EQ(flatten(eval(js, in)), flatten(in[0]));

  Expr tt = parse("fun(m :: 3.5.float => transpose(transpose(m)))");
  in = randomInputs(tt, seed);
  EXPECT_EQ(flatten(eval(tt, in)), flatten(in[0]));

  Expr pad = parse("fun(xs :: 7.float => padClamp(0, 0)(xs))");
  in = randomInputs(pad, seed);
  EXPECT_EQ(flatten(eval(pad, in)), flatten(in[0]));
}

TEST_P(OracleLaw, MmMatchesTripleLoop) {
  const int n = 4 + 4 * (GetParam() % 4);  // 4, 8, 12, 16
  Expr mm = loadProgram("mm", {{"M", n}, {"N", n}, {"K", n}}).main;
  auto in = randomInputs(mm, static_cast<std::uint64_t>(GetParam()));
  auto a = flatten(in[0]), b = flatten(in[1]);
  std::vector<double> ref(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ref[i * n + j] += a[i * n + k] * b[k * n + j];
  auto got = flatten(eval(mm, in));
  ASSERT_EQ(got.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleLaw, ::testing::Range(1, 9));

TEST(Lcg, SharedSequence) {
  Lcg g(42);
  const double first = g.next();
  EXPECT_GE(first, -1.0);
  EXPECT_LT(first, 1.0);
  // state = 42 * a + c; value = ((state >> 40) & 0xFFFFFF) / 2^23 - 1
  const std::uint64_t state = 42ULL * 6364136223846793005ULL + 1442695040888963407ULL;
  EXPECT_DOUBLE_EQ(first, static_cast<double>((state >> 40) & 0xFFFFFF) / 8388608.0 - 1.0);
  EXPECT_EQ(static_cast<float>(first), first);
}
