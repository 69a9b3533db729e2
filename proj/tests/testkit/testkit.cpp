#include "testkit.hpp"

#include <chrono>
#include <map>
#include <sstream>

#include "stratum/corpus.hpp"
#include "stratum/ir/interp.hpp"
#include "stratum/ir/syntax.hpp"
#include "stratum/normal_forms.hpp"
#include "stratum/scheduling.hpp"

namespace stratum::testkit {

using namespace ir;
using R = RewriteResult<Expr>;

namespace {

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- random programs ------------------------------------------------------------------

class Generator {
 public:
  explicit Generator(std::mt19937_64& rng) : rng_(rng) {}

  std::string program(int depth) { return "fun(xs :: 8.float => " + array(depth, {"xs"}, {}) + ")"; }

 private:
  std::mt19937_64& rng_;
  int counter_ = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string fresh(const char* base) { return base + std::to_string(counter_++); }

  template <class T>
  const T& choose(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))];
  }

  // 8.float
  std::string array(int d, std::vector<std::string> arrays, std::vector<std::string> scalars) {
    if (d <= 1) return choose(arrays);
    switch (pick(6)) {
      case 0:
        return choose(arrays);
      case 1:
      case 2:
        return "map(" + fn(d - 1, arrays, scalars) + ")(" + array(d - 1, arrays, scalars) + ")";
      case 3:
        return "join(split(" + std::string(pick(2) ? "2" : "4") + ")(" + array(d - 1, arrays, scalars) + "))";
      case 4: {
        std::string v = fresh("v");
        std::string arg = array(d - 1, arrays, scalars);
        arrays.push_back(v);
        return "(fun(" + v + " :: 8.float => " + array(d - 1, arrays, scalars) + "))(" + arg + ")";
      }
      default: {
        std::string x = fresh("x");
        std::string xs = array(d - 1, arrays, scalars);
        scalars.push_back(x);
        return "map(fun(" + x + " => " + scalar(d - 1, arrays, scalars) + "))(" + xs + ")";
      }
    }
  }

  // float -> float
  std::string fn(int d, const std::vector<std::string>& arrays, std::vector<std::string> scalars) {
    switch (pick(3)) {
      case 0: {
        std::string x = fresh("x");
        std::vector<std::string> inner = scalars;
        inner.push_back(x);
        return "fun(" + x + " => " + scalar(d - 1, arrays, inner) + ")";
      }
      case 1:
        return "add(" + scalar(d - 1, arrays, scalars) + ")";
      default: {
        std::string y = fresh("y");
        return "fun(" + y + " => add(" + scalar(d - 1, arrays, scalars) + ")(" + y + "))";
      }
    }
  }

  std::string literal() { return choose(std::vector<std::string>{"1", "0.5", "-2"}); }

  // float
  std::string scalar(int d, std::vector<std::string> arrays, std::vector<std::string> scalars) {
    auto leaf = [&] { return scalars.empty() || pick(3) == 0 ? literal() : choose(scalars); };
    if (d <= 1) return leaf();
    switch (pick(arrays.empty() ? 3 : 5)) {
      case 0:
        return leaf();
      case 1:
        return "add(" + scalar(d - 1, arrays, scalars) + ")(" + scalar(d - 1, arrays, scalars) + ")";
      case 2: {
        std::string s = fresh("s");
        std::string arg = scalar(d - 1, arrays, scalars);
        scalars.push_back(s);
        return "(fun(" + s + " :: float => " + scalar(d - 1, arrays, scalars) + "))(" + arg + ")";
      }
      case 3: {
        std::string a = fresh("a"), b = fresh("b");
        return "reduce(fun(" + a + " => fun(" + b + " => add(" + a + ")(" + b + "))))(0)(" + array(d - 1, arrays, scalars) +
               ")";
      }
      default:
        return "reduce(add)(0)(" + array(d - 1, arrays, scalars) + ")";
    }
  }
};

// --- result comparison -----------------------------------------------------------------

struct Run {
  bool ok = false;
  Expr program;
  std::string failed;
  bool fuel = false;
  std::uint64_t total = 0;
};

Run exec(const Strat& s, const Expr& e) {
  Run out;
  try {
    auto r = run(s, e, false, FuelLimits{200'000, 100'000});
    out.ok = r.result.ok();
    out.total = r.counts.total;
    if (out.ok)
      out.program = r.result.program();
    else
      out.failed = r.result.failed().render();
  } catch (const FuelExhausted&) {
    out.fuel = true;
  }
  return out;
}

bool same(const Run& a, const Run& b) {
  if (a.fuel || b.fuel) return a.fuel == b.fuel;
  if (a.ok != b.ok) return false;
  return a.ok ? structEq(a.program, b.program) : a.failed == b.failed;
}

std::vector<Strat> lawPool() {
  return {id<Expr>(),
          fail<Expr>(),
          betaReduction(),
          etaReduction(),
          etaAbstraction(),
          mapFusion(),
          mapFission(),
          fuseReduceMap(),
          splitJoin(2),
          sequential(),
          parallel(),
          isFun(),
          isReduce(),
          body(mapFusion()),
          topDown(betaReduction()),
          one(mapFusion()),
          some(etaReduction()),
          all(id<Expr>()),
          topDown(mapFusion()),
          bottomUp(etaReduction()),
          lChoice(betaReduction(), etaReduction())};
}

/// Strategies whose repeated application terminates.
std::vector<Strat> terminatingPool() {
  return {fail<Expr>(),        betaReduction(), etaReduction(),
          mapFusion(),         fuseReduceMap(), sequential(),
          parallel(),          lChoice(betaReduction(), etaReduction()),
          body(mapFusion()),   topDown(betaReduction())};
}

// --- sites -------------------------------------------------------------------------

void collectPaths(const Expr& e, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  out.push_back(cur);
  for (int i = 0; i < Traversable<Expr>::childCount(e); ++i) {
    cur.push_back(i);
    collectPaths(Traversable<Expr>::child(e, i), cur, out);
    cur.pop_back();
  }
}

Strat atPath(const std::vector<int>& path, std::size_t i, const Strat& s) {
  if (i == path.size()) return s;
  const int c = path[i];
  Strat inner = atPath(path, i + 1, s);
  return Strat(StrategyId{"atPath", {}}, [c, inner](const Expr& e, ExecContext& ctx) {
    if (c >= Traversable<Expr>::childCount(e)) return R::failure({"atPath", {}});
    auto r = detail::atChild(inner, e, c, ctx);
    if (!r.ok()) return r;
    return R::success(Traversable<Expr>::withChild(e, c, std::move(r.program())));
  });
}

std::string pathText(const std::vector<int>& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

struct Form {
  std::string label;
  Expr e;
};

std::vector<Form> oracleForms() {
  struct Source {
    std::string name;
    SizeBindings sizes;
  };
  const std::vector<Source> sources = {{"mm", {{"M", 4}, {"N", 32}, {"K", 4}}},
                                       {"binomial", {{"N", 8}, {"M", 8}}},
                                       {"threemaps", {}},
                                       {"rnf", {}},
                                       {"dot", {}},
                                       {"nest3", {{"N", 4}}}};
  std::vector<Form> out;
  auto add = [&](const std::string& label, const Expr& e) {
    for (const auto& f : out)
      if (alphaEq(f.e, e)) return;
    out.push_back({label, e});
  };
  for (const auto& src : sources) {
    Expr p = loadProgram(src.name, src.sizes).main;
    add(src.name, p);
    auto derive = [&](const std::string& label, const Strat& s, const Expr& from) {
      auto r = run(s, from);
      if (r.result.ok()) add(src.name + "/" + label, r.result.program());
    };
    derive("DFNF", DFNF(), p);
    derive("RNF", RNF(), p);
    auto d = run(DFNF(), p);
    if (!d.result.ok()) continue;
    // Intermediate shapes the scheduling strategies pass through.
    derive("DFNF;idAfter", topDown(idAfter()), d.result.program());
    derive("DFNF;split(2)", topDown(seq(isReduce(), split(2))), d.result.program());
    derive("DFNF;split(2);DFNF", dfnfSeq(topDown(seq(isReduce(), split(2))), id<Expr>()), d.result.program());
    Strat pair = topDown(seq(idAfter(), createTransposePair()));
    derive("DFNF;transposePair", pair, d.result.program());
    derive("DFNF;transposePair;transposeBeforeMapMapF", seq(pair, topDown(transposeBeforeMapMapF())),
           d.result.program());
  }
  return out;
}

}  // namespace

std::string randomProgramText(std::mt19937_64& rng, int depth) { return Generator(rng).program(depth); }

Expr randomProgram(std::mt19937_64& rng, int depth) { return parse(randomProgramText(rng, depth)); }

LawReport checkCombinatorLaws(int terms, std::uint64_t seed, int depth) {
  auto t0 = std::chrono::steady_clock::now();
  LawReport rep;
  std::mt19937_64 rng(seed);
  const auto pool = lawPool();
  const auto terminating = terminatingPool();
  auto pickFrom = [&](const std::vector<Strat>& xs) {
    return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
  };
  auto violation = [&](const std::string& law, const Expr& t, const std::vector<Strat>& ss) {
    std::string s = law + " on " + print(t) + " with";
    for (const auto& x : ss) s += " " + x.name();
    rep.violations.push_back(s);
  };

  for (int n = 0; n < terms; ++n) {
    std::string text = randomProgramText(rng, depth);
    Expr t;
    try {
      t = parse(text);
    } catch (const std::exception& e) {
      rep.violations.push_back("generator produced an ill-typed program: " + text + " (" + e.what() + ")");
      continue;
    }
    ++rep.terms;
    Strat s = pickFrom(pool), a = pickFrom(pool), b = pickFrom(pool), c = pickFrom(pool);
    const Run rs = exec(s, t);

    ++rep.checks;
    if (!same(exec(lChoice(fail<Expr>(), s), t), rs)) violation("fail <+ s = s", t, {s});

    ++rep.checks;
    {
      Run r = exec(lChoice(s, fail<Expr>()), t);
      if (r.ok != rs.ok || (r.ok && !structEq(r.program, rs.program))) violation("s <+ fail ~ s", t, {s});
    }

    ++rep.checks;
    if (!same(exec(seq(seq(a, b), c), t), exec(seq(a, seq(b, c)), t))) violation("seq associativity", t, {a, b, c});

    ++rep.checks;
    if (!exec(try_(s), t).ok) violation("try never fails", t, {s});

    ++rep.checks;
    if (!exec(tryAll(s), t).ok) violation("tryAll never fails", t, {s});

    Strat u = pickFrom(terminating);
    ++rep.checks;
    {
      Run r = exec(normalize(u), t);
      if (!r.ok || exec(topDown(u), r.program).ok) violation("normalize post-condition", t, {u});
    }
    ++rep.checks;
    {
      Run r = exec(repeat(u), t);
      if (!r.ok || exec(u, r.program).ok) violation("repeat post-condition", t, {u});
    }

    ++rep.checks;
    {
      Run r2 = exec(s, t);
      if (!same(rs, r2) || rs.total != r2.total) violation("purity", t, {s});
    }
  }
  rep.seconds = secondsSince(t0);
  return rep;
}

OracleReport ruleOracle(int seeds, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  OracleReport rep;
  std::map<std::string, int> sitesPerRule;
  std::vector<std::pair<std::string, Strat>> rules;
  for (const auto& entry : ruleCatalog()) {
    std::vector<int> args(static_cast<std::size_t>(entry.intParams), 2);
    rules.emplace_back(entry.name, entry.make(args));
    sitesPerRule[entry.name] = 0;
  }

  for (const auto& form : oracleForms()) {
    ++rep.forms;
    const TypePtr type = typeCheck(form.e);
    std::vector<std::vector<Value>> inputs;
    std::vector<std::vector<double>> expected;
    for (int s = 1; s <= seeds; ++s) {
      inputs.push_back(randomInputs(form.e, static_cast<std::uint64_t>(s)));
      expected.push_back(flatten(eval(form.e, inputs.back())));
    }
    std::vector<std::vector<int>> paths;
    std::vector<int> cur;
    collectPaths(form.e, cur, paths);

    for (const auto& [name, rule] : rules) {
      for (const auto& path : paths) {
        auto r = run(atPath(path, 0, rule), form.e);
        if (!r.result.ok()) continue;
        ++rep.sites;
        ++sitesPerRule[name];
        const std::string where = name + " at " + pathText(path) + " of " + form.label;
        const Expr& out = r.result.program();
        try {
          if (!typeEqual(typeCheck(out), type)) {
            rep.violations.push_back(where + ": type changed to " + renderType(typeCheck(out)));
            continue;
          }
          for (int s = 0; s < seeds; ++s) {
            ++rep.evaluations;
            const double err = maxRelError(expected[static_cast<std::size_t>(s)],
                                           flatten(eval(out, inputs[static_cast<std::size_t>(s)])));
            if (!(err <= tol)) {
              std::ostringstream os;
              os << where << ": relative error " << err << " on seed " << s + 1;
              rep.violations.push_back(os.str());
              break;
            }
          }
        } catch (const std::exception& e) {
          rep.violations.push_back(where + ": " + e.what());
        }
      }
    }
  }
  for (const auto& [name, n] : sitesPerRule)
    if (n == 0) rep.unexercisedRules.push_back(name);
  rep.seconds = secondsSince(t0);
  return rep;
}

NormalFormReport checkNormalForms() {
  NormalFormReport rep;
  struct Check {
    std::string name;
    Strat nf;
    std::vector<Strat> postConditions;  // each must fail everywhere on the result
  };
  auto lambdaArgOf = [](PrimKind k) { return topDown(argumentOf(k, not_(isFun()))); };
  const std::vector<Check> checks = {
      {"BENF", BENF(), {topDown(lChoice(betaReduction(), etaReduction()))}},
      {"DFNF",
       DFNF(),
       {lambdaArgOf(PrimKind::Map), lambdaArgOf(PrimKind::Reduce),
        topDown(argumentOf(PrimKind::Reduce, body(not_(isFun()))))}},
      {"RNF", RNF(), {topDown(mapFission())}},
  };
  for (const auto& p : corpus()) {
    ++rep.programs;
    Expr e = loadProgram(p.name).main;
    for (const auto& c : checks) {
      const std::string where = c.name + " on " + p.name;
      auto once = run(c.nf, e);
      ++rep.checks;
      if (!once.result.ok()) {
        rep.violations.push_back(where + ": failed with " + once.result.failed().render());
        continue;
      }
      const Expr nf = once.result.program();
      ++rep.checks;
      auto twice = run(c.nf, nf);
      if (!twice.result.ok() || !alphaEq(twice.result.program(), nf)) rep.violations.push_back(where + ": not idempotent");
      for (const auto& post : c.postConditions) {
        ++rep.checks;
        if (run(post, nf).result.ok()) rep.violations.push_back(where + ": " + post.name() + " still applies");
      }
      ++rep.checks;
      for (std::uint64_t s = 1; s <= 3; ++s) {
        auto in = randomInputs(e, s);
        if (maxRelError(flatten(eval(e, in)), flatten(eval(nf, in))) > 1e-6) {
          rep.violations.push_back(where + ": value changed");
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace stratum::testkit
