#include "stratum/scheduling.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

Expr mmOf(int n) { return loadProgram("mm", {{"M", n}, {"N", n}, {"K", n}}).main; }

std::vector<LevelKind> kinds(const std::string& s) {
  std::vector<LevelKind> out;
  for (char c : s) out.push_back(c == 'm' ? LevelKind::Map : LevelKind::Reduce);
  return out;
}

}  // namespace

TEST(Scheduling, NestLevelsOfMm) { EXPECT_EQ(nestLevels(rewrite(DFNF(), mmOf(8))->body()->body()), kinds("mmr")); }

TEST(Scheduling, TileNdOnNest3) {
  Expr e = program("nest3");
  Expr t = rewrite(topDown(tileND({2, 2, 2})), e);
  EXPECT_EQ(nestLevels(rewrite(DFNF(), t)->body()).size(), 6u) << print(t);
  EXPECT_TRUE(sameValue(e, t));
}

TEST(Scheduling, TileMm) {
  Expr e = mmOf(8);
  Expr t = rewrite(topDown(tile(4, 4)), e);
  EXPECT_TRUE(sameValue(e, t, 2, 1e-5));
}

TEST(Scheduling, SingleSizeTileIsSplitJoin) {
  Expr e = rewrite(DFNF(), program("threemaps"));
  EXPECT_TRUE(alphaEq(rewrite(topDown(tileND({4})), e),
                      rewrite(topDown(seq(DFNF(), function(splitJoin(4)))), e)));
}

TEST(Scheduling, ReorderTwoMaps) {
  Expr e = parse("fun(x :: 4.6.float => map(fun(r => map(fun(v => add(v)(v)))(r)))(x))");
  Expr s = rewrite(topDown(reorder({2, 1})), rewrite(DFNF(), e));
  EXPECT_TRUE(sameValue(e, s));
  Expr same = rewrite(topDown(reorder({1, 2})), rewrite(DFNF(), e));
  EXPECT_TRUE(alphaEq(same, rewrite(DFNF(), e)));
  EXPECT_TRUE(fails(topDown(reorder({1, 1})), rewrite(DFNF(), e)));
}

TEST(Scheduling, GemmSchedulesPreserveValue) {
  Expr e = mmOf(64);
  for (const auto& s : gemmSchedules()) {
    auto out = run(s.make(), e);
    ASSERT_TRUE(out.result.ok()) << s.name << " failed: " << out.result.failed().render();
    Expr r = out.result.program();
    typeCheck(r);
    EXPECT_TRUE(fails(topDown(isHighLevelMapOrReduce()), r)) << s.name;
    EXPECT_TRUE(sameValue(e, r, 1, 1e-5)) << s.name;
  }
}
