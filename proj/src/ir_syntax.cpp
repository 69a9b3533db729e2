#include "stratum/ir/syntax.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace stratum::ir {

namespace {

// --- lexer -------------------------------------------------------------------

struct Tok {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  int line;
  int col;
};

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto isDigit = [&](std::size_t j) { return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])); };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (isDigit(i)) {
      std::size_t j = i;
      while (isDigit(j)) ++j;
      if (j < src.size() && src[j] == '.' && isDigit(j + 1)) {
        ++j;
        while (isDigit(j)) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (isDigit(k)) {
          j = k;
          while (isDigit(j)) ++j;
        }
      }
      out.push_back({Tok::Number, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    static const char* two[] = {"|>", "=>", "::", "->"};
    bool matched = false;
    for (const char* s : two) {
      if (src.compare(i, 2, s) == 0) {
        out.push_back({Tok::Sym, s, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("()[],;=+*-.").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// --- surface syntax ----------------------------------------------------------

struct Surface;
using SP = std::shared_ptr<const Surface>;

struct Surface {
  enum Kind { Var, Prim, Num, Lam, App, Arr } kind;
  std::string text;  // Var/Prim name, Num text, Lam binder
  TypePtr ann;       // Lam annotation
  SP a, b;           // Lam body; App fun/arg
  std::vector<SP> elems;
  int line = 0, col = 0;
};

SP mk(Surface s) { return std::make_shared<const Surface>(std::move(s)); }
SP sVar(const std::string& n, int line, int col) { return mk({Surface::Var, n, nullptr, nullptr, nullptr, {}, line, col}); }
SP sPrim(const std::string& n, int line, int col) { return mk({Surface::Prim, n, nullptr, nullptr, nullptr, {}, line, col}); }
SP sNum(const std::string& t, int line, int col) { return mk({Surface::Num, t, nullptr, nullptr, nullptr, {}, line, col}); }
SP sApp(SP f, SP a) {
  int l = f->line, c = f->col;
  return mk({Surface::App, "", nullptr, std::move(f), std::move(a), {}, l, c});
}
SP sApp(SP f, std::initializer_list<SP> args) {
  for (const auto& a : args) f = sApp(f, a);
  return f;
}
SP sLam(const std::string& x, SP body) {
  int l = body->line, c = body->col;
  return mk({Surface::Lam, x, nullptr, std::move(body), nullptr, {}, l, c});
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, SizeBindings& sizes) : toks_(std::move(toks)), sizes_(sizes) {}

  const Tok& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool atSym(const char* s, int k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool atIdent(const char* s, int k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
  bool atEnd() const { return peek().kind == Tok::End; }
  const Tok& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = peek();
    throw ParseError(t.line, t.col, msg + (t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"));
  }
  void expect(const char* s) {
    if (!atSym(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return next().text;
  }

  int sizeValue(const Tok& t) {
    if (t.kind == Tok::Ident) {
      auto it = sizes_.find(t.text);
      if (it == sizes_.end()) throw ParseError(t.line, t.col, "unbound size " + t.text);
      return it->second;
    }
    return parseInt(t);
  }
  static int parseInt(const Tok& t) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError(t.line, t.col, "expected an integer size, found '" + t.text + "'");
    return v;
  }

  TypePtr type() {
    TypePtr t = typeAtom();
    if (atSym("->")) {
      next();
      return fnOf(t, type());
    }
    return t;
  }

  TypePtr typeAtom() {
    const Tok& t = peek();
    if (atIdent("float") || atIdent("f32")) {
      next();
      return f32();
    }
    if (atIdent("vec") && atSym("(", 1)) {
      next();
      next();
      int w = sizeValue(next());
      expect(",");
      TypePtr e = type();
      expect(")");
      return wrap(t, [&] { return vectorOf(w, e); });
    }
    if (atSym("(")) {
      next();
      TypePtr a = type();
      if (atSym(",")) {
        next();
        TypePtr b = type();
        expect(")");
        return pairOf(a, b);
      }
      expect(")");
      return a;
    }
    if (t.kind == Tok::Number || t.kind == Tok::Ident) {
      Tok dim = next();
      std::vector<int> dims;
      if (dim.kind == Tok::Number) {
        std::stringstream ss(dim.text);
        std::string part;
        while (std::getline(ss, part, '.')) dims.push_back(parseInt({Tok::Number, part, dim.line, dim.col}));
      } else {
        dims.push_back(sizeValue(dim));
      }
      expect(".");
      TypePtr elem = typeAtom();
      for (auto it = dims.rbegin(); it != dims.rend(); ++it) {
        int n = *it;
        elem = wrap(dim, [&] { return arrayOf(n, elem); });
      }
      return elem;
    }
    fail("expected a type");
  }

  template <class F>
  TypePtr wrap(const Tok& at, F f) {
    try {
      return f();
    } catch (const TypeError& e) {
      throw ParseError(at.line, at.col, e.what());
    }
  }

  SP expr() {
    SP left = application();
    while (atSym("|>")) {
      next();
      SP right = application();
      left = sApp(right, left);
    }
    return left;
  }

  SP application() {
    SP f = atom();
    while (atSym("(")) {
      next();
      if (atSym(")")) fail("expected an argument");
      for (;;) {
        f = sApp(f, expr());
        if (atSym(",")) {
          next();
          continue;
        }
        expect(")");
        break;
      }
    }
    return f;
  }

  SP atom() {
    const Tok& t = peek();
    if (atIdent("fun")) return lambda();
    if (t.kind == Tok::Ident) {
      next();
      return sVar(t.text, t.line, t.col);
    }
    if (t.kind == Tok::Number) {
      next();
      return sNum(t.text, t.line, t.col);
    }
    if (atSym("-") && peek(1).kind == Tok::Number) {
      next();
      const Tok& n = next();
      return sNum("-" + n.text, t.line, t.col);
    }
    if (atSym("+")) {
      next();
      return sVar("add", t.line, t.col);
    }
    if (atSym("*")) {
      next();
      return sVar("mult", t.line, t.col);
    }
    if (atSym("(")) {
      next();
      SP e = expr();
      expect(")");
      return e;
    }
    if (atSym("[")) return arrayLiteral();
    fail("expected an expression");
  }

  SP arrayLiteral() {
    const Tok& t = next();
    Surface s{Surface::Arr, "", nullptr, nullptr, nullptr, {}, t.line, t.col};
    if (atSym("]")) fail("empty array literal");
    for (;;) {
      if (atSym("["))
        s.elems.push_back(arrayLiteral());
      else
        s.elems.push_back(atom());
      if (atSym(",")) {
        next();
        continue;
      }
      expect("]");
      break;
    }
    return mk(std::move(s));
  }

  SP lambda() {
    const Tok& kw = next();
    expect("(");
    Surface s{Surface::Lam, "", nullptr, nullptr, nullptr, {}, kw.line, kw.col};
    if (peek().kind == Tok::Ident && (atSym("=>", 1) || atSym("::", 1))) {
      s.text = next().text;
      if (atSym("::")) {
        next();
        s.ann = type();
      }
      expect("=>");
      s.a = expr();
      expect(")");
    } else {
      s.ann = type();
      expect(")");
      expect("(");
      s.text = ident();
      expect("=>");
      s.a = expr();
      expect(")");
    }
    return mk(std::move(s));
  }

  std::size_t pos_ = 0;

 private:
  std::vector<Tok> toks_;
  SizeBindings& sizes_;
};

// --- elaboration -------------------------------------------------------------

std::vector<TypePtr> paramTypes(TypePtr t) {
  std::vector<TypePtr> out;
  while (t && t->isFn()) {
    out.push_back(t->fn().in);
    t = t->fn().out;
  }
  return out;
}

std::vector<TypePtr> drop(const std::vector<TypePtr>& v, std::size_t n) {
  if (n >= v.size()) return {};
  return std::vector<TypePtr>(v.begin() + static_cast<long>(n), v.end());
}

class Elaborator {
 public:
  Elaborator(const std::map<std::string, SP>& defs, const TypeEnv& decls, const SizeBindings& sizes)
      : defs_(defs), decls_(decls), sizes_(sizes) {
    for (const auto& [name, _] : decls) used_.insert(name);
  }

  Expr elab(const SP& s, const std::vector<TypePtr>& hints) {
    try {
      return elabInner(s, hints);
    } catch (const TypeError& e) {
      std::string msg = e.what();
      if (!msg.empty() && std::isdigit(static_cast<unsigned char>(msg[0]))) throw;
      throw TypeError(std::to_string(s->line) + ":" + std::to_string(s->col) + ": " + msg);
    }
  }

 private:
  Expr elabInner(const SP& s, const std::vector<TypePtr>& hints) {
    switch (s->kind) {
      case Surface::Num:
        return lit(std::stod(s->text));
      case Surface::Arr:
        return arrayLiteral(s);
      case Surface::Lam: {
        TypePtr t = s->ann ? s->ann : (hints.empty() ? nullptr : hints[0]);
        std::string name = unique(s->text);
        locals_.emplace_back(s->text, var(name, t));
        Expr body;
        try {
          body = elab(s->a, drop(hints, 1));
        } catch (...) {
          locals_.pop_back();
          throw;
        }
        locals_.pop_back();
        return lam(name, t, body);
      }
      case Surface::Var:
      case Surface::Prim:
      case Surface::App: {
        std::vector<SP> args;
        SP head = s;
        while (head->kind == Surface::App) {
          args.push_back(head->b);
          head = head->a;
        }
        std::reverse(args.begin(), args.end());
        return elabSpine(head, args, hints);
      }
    }
    throw ParseError(s->line, s->col, "unknown syntax");
  }

  Expr elabSpine(const SP& head, const std::vector<SP>& args, const std::vector<TypePtr>& hints) {
    if (head->kind == Surface::Prim) return elabPrim(*primByName(head->text), head, args, hints);
    if (head->kind == Surface::Var) {
      const std::string& n = head->text;
      for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
        if (it->first == n) return applyGeneric(it->second, args);
      if (auto d = defs_.find(n); d != defs_.end()) return elabDef(n, d->second, args, hints);
      if (auto m = expandMacro(head, args)) return elab(*m, hints);
      if (auto p = primByName(n)) return elabPrim(*p, head, args, hints);
      if (auto d = decls_.find(n); d != decls_.end()) return applyGeneric(var(n, d->second), args);
      throw ParseError(head->line, head->col, "unbound variable " + n);
    }
    if (args.empty()) return elab(head, hints);
    // A lambda applied in place: its parameter types come from the arguments.
    std::vector<Expr> as;
    for (const auto& a : args) as.push_back(elab(a, {}));
    std::vector<TypePtr> h;
    for (const auto& a : as) h.push_back(a->type());
    for (const auto& t : hints) h.push_back(t);
    Expr e = elab(head, h);
    for (auto& a : as) e = app(e, a);
    return e;
  }

  Expr elabDef(const std::string& name, const SP& body, const std::vector<SP>& args,
               const std::vector<TypePtr>& hints) {
    // Definitions are closed: their bodies never see the caller's locals.
    auto inDef = [&](const std::vector<TypePtr>& h) {
      if (active_.count(name)) throw ParseError(body->line, body->col, "recursive definition " + name);
      active_.insert(name);
      auto saved = std::move(locals_);
      locals_.clear();
      struct Restore {
        Elaborator& el;
        std::vector<std::pair<std::string, Expr>>& saved;
        const std::string& name;
        ~Restore() {
          el.locals_ = std::move(saved);
          el.active_.erase(name);
        }
      } restore{*this, saved, name};
      return elab(body, h);
    };
    if (args.empty()) return inDef(hints);
    Expr head;
    try {
      head = inDef({});
    } catch (const TypeError&) {
      head = nullptr;
    }
    if (head && head->type()) return applyGeneric(head, args);
    std::vector<Expr> as;
    std::vector<TypePtr> h;
    for (const auto& a : args) {
      as.push_back(elab(a, {}));
      h.push_back(as.back()->type());
    }
    for (const auto& t : hints) h.push_back(t);
    Expr e = inDef(h);
    for (auto& a : as) e = app(e, a);
    return e;
  }

  Expr applyGeneric(Expr e, const std::vector<SP>& args) {
    for (const auto& a : args) {
      std::vector<TypePtr> h;
      if (e->type() && e->type()->isFn()) h = paramTypes(e->type()->fn().in);
      e = app(e, elab(a, h));
    }
    return e;
  }

  int natArg(const SP& s) {
    if (s->kind == Surface::Num) {
      double v = std::stod(s->text);
      if (v != std::floor(v) || v < 0) throw ParseError(s->line, s->col, "expected a size, found " + s->text);
      return static_cast<int>(v);
    }
    if (s->kind == Surface::Var) {
      auto it = sizes_.find(s->text);
      if (it != sizes_.end()) return it->second;
      throw ParseError(s->line, s->col, "unbound size " + s->text);
    }
    throw ParseError(s->line, s->col, "expected a size argument");
  }

  Expr elabPrim(PrimKind k, const SP& head, const std::vector<SP>& args, const std::vector<TypePtr>& hints) {
    const auto& info = primInfo(k);
    if (static_cast<int>(args.size()) < info.natCount)
      throw ParseError(head->line, head->col, std::string(info.name) + " needs " + std::to_string(info.natCount) +
                                                  " size arguments");
    std::vector<int> nats;
    for (int i = 0; i < info.natCount; ++i) nats.push_back(natArg(args[static_cast<std::size_t>(i)]));
    std::vector<SP> values(args.begin() + info.natCount, args.end());
    const std::size_t arity = static_cast<std::size_t>(info.arity);
    const std::size_t given = std::min(values.size(), arity);

    std::vector<Expr> es(arity);
    std::vector<TypePtr> ts(arity);
    for (std::size_t i = given; i < arity; ++i) ts[i] = i - given < hints.size() ? hints[i - given] : nullptr;
    auto elemOfType = [](const TypePtr& t) -> TypePtr {
      if (t && (t->isArray() || t->isVector())) return elemOf(t);
      return nullptr;
    };
    auto take = [&](std::size_t i, std::vector<TypePtr> h) {
      if (i >= given) return;
      es[i] = elab(values[i], h);
      ts[i] = es[i]->type();
    };

    if (isMapFamily(k)) {
      take(1, {});
      TypePtr a = elemOfType(ts[1]);
      take(0, a ? std::vector<TypePtr>{a} : std::vector<TypePtr>{});
    } else if (isReduceFamily(k)) {
      take(2, {});
      take(1, {});
      TypePtr e = elemOfType(ts[2]);
      std::vector<TypePtr> h;
      if (ts[1]) h.push_back(ts[1]);
      if (ts[1] && e) h.push_back(e);
      take(0, h);
    } else {
      for (std::size_t i = 0; i < given; ++i) take(i, {});
    }

    TypePtr t = instantiatePrim(k, nats, ts);
    Expr e = primNode(k, nats, t);
    for (std::size_t i = 0; i < given; ++i) e = app(e, es[i]);
    std::vector<SP> extra(values.begin() + static_cast<long>(given), values.end());
    return applyGeneric(e, extra);
  }

  std::optional<SP> expandMacro(const SP& head, const std::vector<SP>& args) {
    const std::string& n = head->text;
    int l = head->line, c = head->col;
    auto P = [&](const char* name) { return sPrim(name, l, c); };
    auto nat = [&](int v) { return sNum(std::to_string(v), l, c); };
    // Binds missing data arguments with lambdas so partial uses elaborate.
    auto saturate = [&](std::size_t need, const std::function<SP(const std::vector<SP>&)>& body) -> SP {
      std::vector<SP> as(args.begin(), args.begin() + static_cast<long>(std::min(need, args.size())));
      std::vector<std::string> params;
      while (as.size() < need) {
        params.push_back(unique("p"));
        as.push_back(sVar(params.back(), l, c));
      }
      SP e = body(as);
      for (auto it = params.rbegin(); it != params.rend(); ++it) e = sLam(*it, e);
      for (std::size_t i = need; i < args.size(); ++i) e = sApp(e, args[i]);
      return e;
    };
    if (n == "dot")
      return saturate(2, [&](const std::vector<SP>& a) {
        return sApp(P("reduce"), {P("add"), sNum("0", l, c), sApp(P("map"), {P("mult"), sApp(P("zip"), {a[0], a[1]})})});
      });
    if (n == "map2D")
      return saturate(2, [&](const std::vector<SP>& a) { return sApp(P("map"), {sApp(P("map"), a[0]), a[1]}); });
    if (n == "pad2D") {
      if (args.empty()) throw ParseError(l, c, "pad2D needs a size argument");
      int k = natArg(args[0]);
      return saturate(2, [&](const std::vector<SP>& a) {
        SP rows = sApp(P("padClamp"), {nat(k), nat(k), a[1]});
        return sApp(P("map"), {sApp(P("padClamp"), {nat(k), nat(k)}), rows});
      });
    }
    if (n == "slide2D") {
      if (args.size() < 2) throw ParseError(l, c, "slide2D needs two size arguments");
      int sz = natArg(args[0]), st = natArg(args[1]);
      return saturate(3, [&](const std::vector<SP>& a) {
        SP cols = sApp(P("map"), {sApp(P("slide"), {nat(sz), nat(st)}), a[2]});
        return sApp(P("map"), {P("transpose"), sApp(P("slide"), {nat(sz), nat(st), cols})});
      });
    }
    return std::nullopt;
  }

  Expr arrayLiteral(const SP& s) {
    std::vector<double> data;
    std::vector<int> shape;
    collect(s, 0, shape, data);
    TypePtr t = f32();
    for (auto it = shape.rbegin(); it != shape.rend(); ++it) t = arrayOf(*it, t);
    return arrayLit(std::move(data), t);
  }

  void collect(const SP& s, std::size_t depth, std::vector<int>& shape, std::vector<double>& data) {
    if (s->kind == Surface::Num) {
      if (depth != shape.size()) throw ParseError(s->line, s->col, "array literal is not rectangular");
      data.push_back(std::stod(s->text));
      return;
    }
    if (s->kind != Surface::Arr) throw ParseError(s->line, s->col, "array literals may only contain numbers");
    int n = static_cast<int>(s->elems.size());
    if (depth == shape.size()) {
      if (!data.empty()) throw ParseError(s->line, s->col, "array literal is not rectangular");
      shape.push_back(n);
    } else if (shape[depth] != n) {
      throw ParseError(s->line, s->col, "array literal is not rectangular");
    }
    for (const auto& e : s->elems) collect(e, depth + 1, shape, data);
  }

  std::string unique(const std::string& base) {
    std::string n = base;
    while (used_.count(n) || defs_.count(n)) n = freshName(base);
    used_.insert(n);
    return n;
  }

  const std::map<std::string, SP>& defs_;
  const TypeEnv& decls_;
  const SizeBindings& sizes_;
  std::vector<std::pair<std::string, Expr>> locals_;
  std::set<std::string> active_;
  std::set<std::string> used_;
};

}  // namespace

ParsedProgram parseProgram(const std::string& source, const SizeBindings& sizes, const TypeEnv& freeVars) {
  SizeBindings bound = sizes;
  Parser p(lex(source), bound);
  std::map<std::string, SP> defs;
  TypeEnv decls = freeVars;
  SP main;
  std::string lastDef;
  while (!p.atEnd()) {
    if (p.atIdent("size") && p.peek(1).kind == Tok::Ident) {
      p.next();
      std::string name = p.ident();
      p.expect("=");
      const Tok& v = p.next();
      int value = Parser::parseInt(v);
      if (value < 1) throw ParseError(v.line, v.col, "sizes must be positive");
      bound.emplace(name, value);
    } else if (p.atIdent("decl") && p.peek(1).kind == Tok::Ident) {
      p.next();
      std::string name = p.ident();
      TypePtr t;
      if (p.atSym("::")) {
        p.next();
        t = p.type();
      }
      decls[name] = t;
    } else if (p.atIdent("def") && p.peek(1).kind == Tok::Ident) {
      p.next();
      const Tok& at = p.peek();
      std::string name = p.ident();
      if (defs.count(name)) throw ParseError(at.line, at.col, "duplicate definition " + name);
      p.expect("=");
      defs[name] = p.expr();
      lastDef = name;
    } else {
      if (main) p.fail("expected a declaration");
      main = p.expr();
    }
    if (p.atSym(";"))
      p.next();
    else if (!p.atEnd())
      p.fail("expected ';'");
  }
  if (!main) {
    if (defs.count("main"))
      main = defs.at("main");
    else if (!lastDef.empty())
      main = defs.at(lastDef);
    else
      throw ParseError(1, 1, "empty program");
  }
  Elaborator el(defs, decls, bound);
  ParsedProgram out;
  out.main = el.elab(main, {});
  out.sizes = bound;
  return out;
}

Expr parse(const std::string& source, const SizeBindings& sizes, const TypeEnv& freeVars) {
  return parseProgram(source, sizes, freeVars).main;
}

TypePtr parseType(const std::string& source, const SizeBindings& sizes) {
  SizeBindings bound = sizes;
  Parser p(lex(source), bound);
  TypePtr t = p.type();
  if (!p.atEnd()) p.fail("unexpected input after type");
  return t;
}

// --- printing ----------------------------------------------------------------

namespace {

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

void printArray(const std::vector<double>& data, const TypePtr& t, std::size_t& at, std::string& out) {
  if (!t->isArray()) {
    out += number(data[at++]);
    return;
  }
  out += "[";
  for (int i = 0; i < t->array().size; ++i) {
    if (i) out += ", ";
    printArray(data, t->array().elem, at, out);
  }
  out += "]";
}

void printRec(const Expr& e, std::string& out) {
  switch (e->kind()) {
    case NodeKind::Var:
      out += e->name();
      return;
    case NodeKind::Lit:
      if (e->type() && e->type()->isArray()) {
        std::size_t at = 0;
        printArray(e->data(), e->type(), at, out);
      } else {
        out += number(e->data()[0]);
      }
      return;
    case NodeKind::Prim:
      out += primInfo(e->prim()).name;
      if (!e->nats().empty()) {
        out += "(";
        for (std::size_t i = 0; i < e->nats().size(); ++i) {
          if (i) out += ", ";
          out += std::to_string(e->nats()[i]);
        }
        out += ")";
      }
      return;
    case NodeKind::Lam:
      out += "fun(" + e->name();
      if (e->paramType()) out += " :: " + renderType(e->paramType());
      out += " => ";
      printRec(e->body(), out);
      out += ")";
      return;
    case NodeKind::App: {
      Spine s = spine(e);
      if (s.head->isLam()) {
        out += "(";
        printRec(s.head, out);
        out += ")";
      } else {
        printRec(s.head, out);
      }
      for (const auto& a : s.args) {
        out += "(";
        printRec(a, out);
        out += ")";
      }
      return;
    }
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  printRec(e, out);
  return out;
}

}  // namespace stratum::ir
