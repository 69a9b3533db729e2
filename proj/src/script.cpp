#include "stratum/script.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "stratum/scheduling.hpp"

namespace stratum {

namespace generated {
extern const std::vector<CorpusProgram> kScripts;
}

const std::vector<CorpusProgram>& shippedScripts() { return generated::kScripts; }

namespace {

// --- syntax ----------------------------------------------------------------------

struct Node {
  enum class Kind { Call, Int, List, Seq, DfnfSeq, Choice } kind;
  std::string name;  // Call
  int value = 0;     // Int
  std::vector<int> list;
  std::vector<Node> args;  // Call arguments, or the two operands
};

class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  Node script() {
    Node n = choice();
    skip();
    if (p_ != s_.size()) error("unexpected '" + s_.substr(p_, 1) + "'");
    return n;
  }

 private:
  std::string s_;
  std::size_t p_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    throw ScriptError("strategy script, offset " + std::to_string(p_) + ": " + msg);
  }

  void skip() {
    while (p_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[p_]))) {
        ++p_;
      } else if (s_[p_] == '#') {
        while (p_ < s_.size() && s_[p_] != '\n') ++p_;
      } else {
        break;
      }
    }
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(p_, tok.size(), tok) != 0) return false;
    p_ += tok.size();
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) error("expected '" + tok + "'");
  }

  Node choice() {
    Node n = seqs();
    while (accept("<+")) n = Node{Node::Kind::Choice, {}, 0, {}, {n, seqs()}};
    return n;
  }

  Node seqs() {
    Node n = term();
    for (;;) {
      if (accept(";;")) {
        n = Node{Node::Kind::DfnfSeq, {}, 0, {}, {n, term()}};
      } else if (accept(";")) {
        n = Node{Node::Kind::Seq, {}, 0, {}, {n, term()}};
      } else {
        return n;
      }
    }
  }

  int integer() {
    skip();
    std::size_t start = p_;
    if (p_ < s_.size() && s_[p_] == '-') ++p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (p_ == start) error("expected an integer");
    return std::stoi(s_.substr(start, p_ - start));
  }

  Node arg() {
    skip();
    if (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '-'))
      return Node{Node::Kind::Int, {}, integer(), {}, {}};
    if (accept("[")) {
      Node n{Node::Kind::List, {}, 0, {}, {}};
      if (!accept("]")) {
        do n.list.push_back(integer());
        while (accept(","));
        expect("]");
      }
      return n;
    }
    return choice();
  }

  Node term() {
    if (accept("(")) {
      Node n = choice();
      expect(")");
      return n;
    }
    skip();
    std::size_t start = p_;
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
    if (p_ == start) error("expected a strategy name");
    Node n{Node::Kind::Call, s_.substr(start, p_ - start), 0, {}, {}};
    if (accept("(")) {
      if (!accept(")")) {
        do n.args.push_back(arg());
        while (accept(","));
        expect(")");
      }
    }
    return n;
  }
};

// --- registry ----------------------------------------------------------------------

enum class Param { Int, List, Strategy, Prim };

struct Arg {
  int i = 0;
  std::vector<int> list;
  Strat s;
  ir::PrimKind prim{};
};

struct Entry {
  std::vector<Param> params;
  std::function<Strat(const std::vector<Arg>&)> make;
};

using Registry = std::map<std::string, Entry>;

const Registry& registry() {
  static const Registry reg = [] {
    using A = const std::vector<Arg>&;
    const auto S = Param::Strategy;
    const auto I = Param::Int;
    const auto L = Param::List;
    Registry r;
    auto add = [&](std::string name, std::vector<Param> ps, std::function<Strat(A)> f) {
      r[std::move(name)] = Entry{std::move(ps), std::move(f)};
    };
    auto unary = [&](std::string name, Strat (*f)(Strat)) {
      add(std::move(name), {S}, [f](A a) { return f(a[0].s); });
    };

    add("id", {}, [](A) { return id<ir::Expr>(); });
    add("fail", {}, [](A) { return fail<ir::Expr>(); });
    add("seq", {S, S}, [](A a) { return seq(a[0].s, a[1].s); });
    add("lChoice", {S, S}, [](A a) { return lChoice(a[0].s, a[1].s); });
    add("dfnfSeq", {S, S}, [](A a) { return dfnfSeq(a[0].s, a[1].s); });
    unary("try", [](Strat s) { return try_(s); });
    unary("repeat", [](Strat s) { return repeat(s); });
    unary("not", [](Strat s) { return not_(s); });
    unary("all", [](Strat s) { return all(s); });
    unary("one", [](Strat s) { return one(s); });
    unary("some", [](Strat s) { return some(s); });
    unary("topDown", [](Strat s) { return topDown(s); });
    unary("bottomUp", [](Strat s) { return bottomUp(s); });
    unary("allTopDown", [](Strat s) { return allTopDown(s); });
    unary("allBottomUp", [](Strat s) { return allBottomUp(s); });
    unary("tryAll", [](Strat s) { return tryAll(s); });
    unary("normalize", [](Strat s) { return normalize(s); });
    unary("body", body);
    unary("function", function);
    unary("argument", argument);
    unary("fmap", fmap);
    add("argumentOf", {Param::Prim, S}, [](A a) { return argumentOf(a[0].prim, a[1].s); });
    add("move", {I, S}, [](A a) { return move(a[0].i, a[1].s); });
    add("moveAlongComposition", {I, S}, [](A a) { return moveAlongComposition(a[0].i, a[1].s); });
    add("atLevel", {I, S}, [](A a) { return atLevel(a[0].i, a[1].s); });

    add("isFun", {}, [](A) { return isFun(); });
    add("isReduce", {}, [](A) { return isReduce(); });
    add("isHighLevelMapOrReduce", {}, [](A) { return isHighLevelMapOrReduce(); });
    add("isPrim", {Param::Prim}, [](A a) { return isPrim(a[0].prim); });

    for (const auto& rule : ruleCatalog()) {
      std::vector<Param> ps(static_cast<std::size_t>(rule.intParams), I);
      auto make = rule.make;
      add(rule.name, ps, [make](A a) {
        std::vector<int> ints;
        for (const auto& x : a) ints.push_back(x.i);
        return make(ints);
      });
    }

    add("BENF", {}, [](A) { return BENF(); });
    add("DFNF", {}, [](A) { return DFNF(); });
    add("RNF", {}, [](A) { return RNF(); });
    add("lowerToC", {}, [](A) { return lowerToC(); });

    add("loopInterchange", {}, [](A) { return loopInterchange(); });
    add("loopInterchangeAtDepth", {I}, [](A a) { return loopInterchangeAtDepth(a[0].i); });
    add("swapMaps", {I}, [](A a) { return swapMaps(a[0].i); });
    add("swapMapReduce", {I}, [](A a) { return swapMapReduce(a[0].i); });
    add("interchange", {I}, [](A a) { return interchange(a[0].i); });
    add("tile", {I, I}, [](A a) { return tile(a[0].i, a[1].i); });
    add("tileND", {L}, [](A a) { return tileND(a[0].list); });
    add("reorder", {L}, [](A a) { return reorder(a[0].list); });
    // packB names the traversal; the single-site rule is packBRule.
    add("packB", {}, [](A) { return packB(); });
    add("packBRule", {}, [](A) { return packBRule(); });
    add("parallelizeCopy", {}, [](A) { return parallelizeCopy(); });

    for (const auto& s : allSchedules()) {
      auto make = s.make;
      add(s.name, {}, [make](A) { return make(); });
    }
    return r;
  }();
  return reg;
}

std::string describe(const std::vector<Param>& ps) {
  if (ps.empty()) return "";
  std::string out = "(";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    switch (ps[i]) {
      case Param::Int:
        out += "int";
        break;
      case Param::List:
        out += "[int]";
        break;
      case Param::Strategy:
        out += "strategy";
        break;
      case Param::Prim:
        out += "primitive";
        break;
    }
  }
  return out + ")";
}

Strat build(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Seq:
      return seq(build(n.args[0]), build(n.args[1]));
    case Node::Kind::DfnfSeq:
      return dfnfSeq(build(n.args[0]), build(n.args[1]));
    case Node::Kind::Choice:
      return lChoice(build(n.args[0]), build(n.args[1]));
    case Node::Kind::Int:
    case Node::Kind::List:
      throw ScriptError("a number is not a strategy");
    case Node::Kind::Call:
      break;
  }
  auto it = registry().find(n.name);
  if (it == registry().end()) throw ScriptError("unknown strategy " + n.name);
  const Entry& entry = it->second;
  if (entry.params.size() != n.args.size())
    throw ScriptError(n.name + " takes " + std::to_string(entry.params.size()) + " argument(s)" +
                      (entry.params.empty() ? "" : " " + describe(entry.params)) + ", got " +
                      std::to_string(n.args.size()));
  std::vector<Arg> args(n.args.size());
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    const Node& a = n.args[i];
    const std::string where = n.name + " argument " + std::to_string(i + 1);
    switch (entry.params[i]) {
      case Param::Int:
        if (a.kind != Node::Kind::Int) throw ScriptError(where + ": expected an integer");
        args[i].i = a.value;
        break;
      case Param::List:
        if (a.kind != Node::Kind::List) throw ScriptError(where + ": expected an integer list");
        args[i].list = a.list;
        break;
      case Param::Prim: {
        auto k = a.kind == Node::Kind::Call && a.args.empty() ? ir::primByName(a.name) : std::nullopt;
        if (!k) throw ScriptError(where + ": expected a primitive name");
        args[i].prim = *k;
        break;
      }
      case Param::Strategy:
        args[i].s = build(a);
        break;
    }
  }
  return entry.make(args);
}

}  // namespace

Strat parseStrategy(const std::string& text) { return build(Parser(text).script()); }

Strat resolveStrategy(const std::string& nameOrScript) {
  if (const Schedule* s = findSchedule(nameOrScript)) return s->make();
  for (const auto& script : shippedScripts())
    if (script.name == nameOrScript) return parseStrategy(script.source);
  std::error_code ec;
  if (nameOrScript.ends_with(".strat") && std::filesystem::is_regular_file(nameOrScript, ec)) {
    std::ifstream in(nameOrScript);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseStrategy(ss.str());
  }
  return parseStrategy(nameOrScript);
}

std::vector<ScriptSignature> scriptNames() {
  std::vector<ScriptSignature> out;
  for (const auto& [name, entry] : registry()) out.push_back({name, describe(entry.params)});
  return out;
}

}  // namespace stratum
