#include "stratum/normal_forms.hpp"
#include "support.hpp"
#include "testkit.hpp"

using namespace testing_support;
namespace tk = stratum::testkit;

namespace {

std::string joined(const std::vector<std::string>& xs, std::size_t limit = 5) {
  std::string out;
  for (std::size_t i = 0; i < xs.size() && i < limit; ++i) out += "\n  " + xs[i];
  return out;
}

}  // namespace

TEST(Property, GeneratedProgramsAreWellTyped) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string text = tk::randomProgramText(rng, 6);
    Expr e;
    ASSERT_NO_THROW(e = parse(text)) << text;
    auto in = randomInputs(e, 1);
    EXPECT_EQ(flatten(eval(e, in)).size(), 8u) << text;
  }
}

TEST(Property, CombinatorLaws) {
  auto rep = tk::checkCombinatorLaws(300, 2024);
  EXPECT_EQ(rep.terms, 300);
  EXPECT_TRUE(rep.violations.empty()) << joined(rep.violations);
}

TEST(Property, NormalForms) {
  auto rep = tk::checkNormalForms();
  EXPECT_GT(rep.programs, 0);
  EXPECT_TRUE(rep.violations.empty()) << joined(rep.violations);
}

TEST(Property, RuleOracleQuick) {
  auto rep = tk::ruleOracle(3, 1e-6);
  EXPECT_GT(rep.sites, 0);
  EXPECT_TRUE(rep.unexercisedRules.empty()) << joined(rep.unexercisedRules);
  EXPECT_TRUE(rep.violations.empty()) << joined(rep.violations);
}

TEST(Property, SubjectReductionOnRandomPrograms) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Expr e = tk::randomProgram(rng, 5);
    for (const auto& rule : ruleCatalog()) {
      std::vector<int> args(static_cast<std::size_t>(rule.intParams), 2);
      auto r = run(topDown(rule.make(args)), e);
      if (!r.result.ok()) continue;
      EXPECT_TRUE(typeEqual(typeCheck(r.result.program()), typeCheck(e))) << rule.name << " on " << print(e);
      EXPECT_TRUE(sameValue(e, r.result.program(), 2)) << rule.name;
    }
  }
}
