#include "stratum/scheduling.hpp"
#include "stratum/script.hpp"
#include "support.hpp"

using namespace testing_support;

TEST(Script, TryFailAlwaysSucceeds) {
  Strat s = parseStrategy("try(fail)");
  for (const char* name : {"mm", "threemaps", "binomial"}) EXPECT_TRUE(run(s, program(name)).result.ok());
}

TEST(Script, UnknownNameIsAParseError) {
  EXPECT_THROW(parseStrategy("topDown(unknownRule)"), ScriptError);
}

TEST(Script, ArityMismatch) {
  EXPECT_THROW(parseStrategy("topDown"), ScriptError);
  EXPECT_THROW(parseStrategy("split"), ScriptError);
  EXPECT_THROW(parseStrategy("tile(32)"), ScriptError);
  EXPECT_THROW(parseStrategy("reorder(3)"), ScriptError);
  EXPECT_THROW(parseStrategy("argumentOf(mapFusion, id)"), ScriptError);
}

TEST(Script, SyntaxErrors) {
  EXPECT_THROW(parseStrategy(""), ScriptError);
  EXPECT_THROW(parseStrategy("id ;"), ScriptError);
  EXPECT_THROW(parseStrategy("topDown(id"), ScriptError);
  EXPECT_THROW(parseStrategy("id id"), ScriptError);
}

TEST(Script, SeqBindsTighterThanChoice) {
  // (fail ; id) <+ id succeeds; fail ; (id <+ id) would not.
  EXPECT_TRUE(run(parseStrategy("fail ; id <+ id"), program("mm")).result.ok());
  EXPECT_FALSE(run(parseStrategy("fail ; (id <+ id)"), program("mm")).result.ok());
}

TEST(Script, BlockingPrefixMatchesLibrary) {
  Expr e = program("mm");
  Expr viaScript = rewrite(parseStrategy("topDown(tile(32,32)) ;; topDown(isReduce ; split(4))"), e);
  Expr direct = rewrite(dfnfSeq(topDown(tile(32, 32)), topDown(seq(isReduce(), split(4)))), e);
  EXPECT_TRUE(alphaEq(viaScript, direct));
  EXPECT_TRUE(alphaEq(viaScript, rewrite(resolveStrategy("blocking-prefix"), e)));
}

TEST(Script, CommentsAndPrimitiveArguments) {
  Strat s = parseStrategy("# lower the reductions only\n topDown(argumentOf(reduce, id)) ; lowerToC");
  EXPECT_TRUE(run(s, program("mm")).result.ok());
}

TEST(Script, ResolvesScheduleNames) {
  EXPECT_EQ(resolveStrategy("blocking").name(), "blocking");
  EXPECT_EQ(resolveStrategy("bfSeparated").name(), "bfSeparated");
}

TEST(Script, ReorderBadFailsNamingOneStrategy) {
  auto out = run(resolveStrategy("reorder-bad"), program("mm"));
  ASSERT_FALSE(out.result.ok());
  EXPECT_NE(out.result.failed().render().find("reorder"), std::string::npos) << out.result.failed().render();
}

TEST(Script, EveryRuleIsAddressable) {
  auto names = scriptNames();
  for (const auto& rule : ruleCatalog()) {
    bool found = std::any_of(names.begin(), names.end(), [&](const ScriptSignature& s) { return s.name == rule.name; });
    EXPECT_TRUE(found) << rule.name;
  }
}
