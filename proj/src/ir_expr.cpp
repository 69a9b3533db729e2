#include "stratum/ir/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace stratum::ir {

namespace {

const std::array<PrimInfo, 22> kPrims = {{
    {PrimKind::Map, "map", 0, 2},
    {PrimKind::MapSeq, "mapSeq", 0, 2},
    {PrimKind::MapPar, "mapPar", 0, 2},
    {PrimKind::MapVec, "mapVec", 0, 2},
    {PrimKind::MapSeqUnroll, "mapSeqUnroll", 0, 2},
    {PrimKind::Reduce, "reduce", 0, 3},
    {PrimKind::ReduceSeq, "reduceSeq", 0, 3},
    {PrimKind::ReduceSeqUnroll, "reduceSeqUnroll", 0, 3},
    {PrimKind::Zip, "zip", 0, 2},
    {PrimKind::Fst, "fst", 0, 1},
    {PrimKind::Snd, "snd", 0, 1},
    {PrimKind::Split, "split", 1, 1},
    {PrimKind::Join, "join", 0, 1},
    {PrimKind::Transpose, "transpose", 0, 1},
    {PrimKind::Slide, "slide", 2, 1},
    {PrimKind::PadClamp, "padClamp", 2, 1},
    {PrimKind::AsVector, "asVector", 1, 1},
    {PrimKind::AsScalar, "asScalar", 0, 1},
    {PrimKind::ToMem, "toMem", 0, 1},
    {PrimKind::Add, "add", 0, 2},
    {PrimKind::Mult, "mult", 0, 1},
    {PrimKind::Id, "id", 0, 1},
}};

std::vector<std::string> mergeSorted(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

[[noreturn]] void mismatch(PrimKind k, const std::string& detail) {
  throw TypeError(std::string(primInfo(k).name) + ": " + detail);
}

void expectEq(PrimKind k, const TypePtr& want, const TypePtr& got, const char* what) {
  if (!typeEqual(want, got))
    mismatch(k, std::string(what) + " has type " + renderType(got) + ", expected " + renderType(want));
}

const ArrayT& expectArray(PrimKind k, const TypePtr& t) {
  if (!t->isArray()) mismatch(k, "expected an array, got " + renderType(t));
  return t->array();
}

const FnT& expectFn(PrimKind k, const TypePtr& t) {
  if (!t->isFn()) mismatch(k, "expected a function, got " + renderType(t));
  return t->fn();
}

thread_local long gFreshCounter = 0;

std::string stripSuffix(const std::string& name) {
  auto pos = name.rfind('_');
  if (pos == std::string::npos || pos + 1 == name.size() || pos == 0) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
  return name.substr(0, pos);
}

long numericSuffix(const std::string& name) {
  auto base = stripSuffix(name);
  if (base.size() == name.size()) return -1;
  try {
    return std::stol(name.substr(base.size() + 1));
  } catch (const std::exception&) {
    return -1;
  }
}

void maxSuffix(const Expr& e, long& best) {
  switch (e->kind()) {
    case NodeKind::Var:
      best = std::max(best, numericSuffix(e->name()));
      break;
    case NodeKind::Lam:
      best = std::max(best, numericSuffix(e->name()));
      maxSuffix(e->body(), best);
      break;
    case NodeKind::App:
      maxSuffix(e->fun(), best);
      maxSuffix(e->arg(), best);
      break;
    default:
      break;
  }
}

Expr renameFree(const Expr& e, const std::string& from, const std::string& to) {
  if (!e->hasFree(from)) return e;
  switch (e->kind()) {
    case NodeKind::Var:
      return var(to, e->type());
    case NodeKind::Lam:
      return lam(e->name(), e->paramType(), renameFree(e->body(), from, to));
    case NodeKind::App:
      return app(renameFree(e->fun(), from, to), renameFree(e->arg(), from, to));
    default:
      return e;
  }
}

}  // namespace

const PrimInfo& primInfo(PrimKind k) { return kPrims[static_cast<std::size_t>(k)]; }

std::optional<PrimKind> primByName(const std::string& name) {
  for (const auto& p : kPrims)
    if (name == p.name) return p.kind;
  return std::nullopt;
}

const std::vector<PrimInfo>& allPrims() {
  static const std::vector<PrimInfo> v(kPrims.begin(), kPrims.end());
  return v;
}

bool isMapFamily(PrimKind k) {
  return k == PrimKind::Map || k == PrimKind::MapSeq || k == PrimKind::MapPar || k == PrimKind::MapVec ||
         k == PrimKind::MapSeqUnroll;
}

bool isReduceFamily(PrimKind k) {
  return k == PrimKind::Reduce || k == PrimKind::ReduceSeq || k == PrimKind::ReduceSeqUnroll;
}

bool isHighLevel(PrimKind k) { return k == PrimKind::Map || k == PrimKind::Reduce; }

bool Node::hasFree(const std::string& x) const { return std::binary_search(fv_.begin(), fv_.end(), x); }

// --- construction ------------------------------------------------------------

Expr var(std::string name, TypePtr type) {
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::Var;
  n->fv_ = {name};
  n->name_ = std::move(name);
  n->type_ = std::move(type);
  return n;
}

Expr lam(std::string param, TypePtr paramType, Expr body) {
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::Lam;
  n->fv_ = body->freeVars();
  n->fv_.erase(std::remove(n->fv_.begin(), n->fv_.end(), param), n->fv_.end());
  if (paramType && body->type()) n->type_ = fnOf(paramType, body->type());
  n->size_ = 1 + body->size();
  n->name_ = std::move(param);
  n->paramType_ = std::move(paramType);
  n->a_ = std::move(body);
  return n;
}

Expr app(Expr fun, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::App;
  if (const auto& ft = fun->type()) {
    if (!ft->isFn()) throw TypeError("cannot apply a value of type " + renderType(ft));
    if (arg->type() && !typeEqual(ft->fn().in, arg->type()))
      throw TypeError("argument has type " + renderType(arg->type()) + ", expected " + renderType(ft->fn().in));
    n->type_ = ft->fn().out;
  }
  n->fv_ = mergeSorted(fun->freeVars(), arg->freeVars());
  n->size_ = 1 + fun->size() + arg->size();
  n->a_ = std::move(fun);
  n->b_ = std::move(arg);
  return n;
}

Expr app(Expr f, Expr a, Expr b) { return app(app(std::move(f), std::move(a)), std::move(b)); }
Expr app(Expr f, Expr a, Expr b, Expr c) { return app(app(std::move(f), std::move(a), std::move(b)), std::move(c)); }

Expr primNode(PrimKind k, std::vector<int> nats, TypePtr type) {
  if (static_cast<int>(nats.size()) != primInfo(k).natCount)
    throw TypeError(std::string(primInfo(k).name) + " expects " + std::to_string(primInfo(k).natCount) +
                    " size arguments");
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::Prim;
  n->prim_ = k;
  n->nats_ = std::move(nats);
  n->type_ = std::move(type);
  return n;
}

Expr lit(double value) {
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::Lit;
  n->data_ = {value};
  n->type_ = f32();
  return n;
}

Expr arrayLit(std::vector<double> data, TypePtr type) {
  if (!type || !type->isArray() || static_cast<std::size_t>(scalarCount(type)) != data.size())
    throw TypeError("array literal does not match its shape " + renderType(type));
  auto n = std::make_shared<Node>();
  n->kind_ = NodeKind::Lit;
  n->data_ = std::move(data);
  n->type_ = std::move(type);
  return n;
}

TypePtr instantiatePrim(PrimKind k, const std::vector<int>& nats, const std::vector<TypePtr>& args) {
  const auto& info = primInfo(k);
  if (static_cast<int>(args.size()) != info.arity)
    mismatch(k, "expects " + std::to_string(info.arity) + " arguments");
  if (static_cast<int>(nats.size()) != info.natCount)
    mismatch(k, "expects " + std::to_string(info.natCount) + " size arguments");
  for (const auto& t : args)
    if (!t) return nullptr;
  for (int n : nats)
    if (n < 0 || (n == 0 && k != PrimKind::PadClamp)) mismatch(k, "size arguments must be positive");

  auto curried = [&](TypePtr out) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) out = fnOf(*it, out);
    return out;
  };

  switch (k) {
    case PrimKind::Map:
    case PrimKind::MapSeq:
    case PrimKind::MapPar:
    case PrimKind::MapSeqUnroll: {
      const auto& f = expectFn(k, args[0]);
      const auto& xs = expectArray(k, args[1]);
      expectEq(k, f.in, xs.elem, "function input");
      return curried(arrayOf(xs.size, f.out));
    }
    case PrimKind::MapVec: {
      const auto& f = expectFn(k, args[0]);
      if (!args[1]->isVector()) mismatch(k, "expected a vector, got " + renderType(args[1]));
      const auto& v = args[1]->vector();
      expectEq(k, f.in, v.elem, "function input");
      if (!isScalarLike(f.out)) mismatch(k, "function must return a scalar");
      return curried(vectorOf(v.width, f.out));
    }
    case PrimKind::Reduce:
    case PrimKind::ReduceSeq:
    case PrimKind::ReduceSeqUnroll: {
      const auto& op = expectFn(k, args[0]);
      const auto& acc = args[1];
      const auto& xs = expectArray(k, args[2]);
      expectEq(k, acc, op.in, "operator accumulator");
      const auto& inner = expectFn(k, op.out);
      expectEq(k, xs.elem, inner.in, "operator element");
      expectEq(k, acc, inner.out, "operator result");
      return curried(acc);
    }
    case PrimKind::Zip: {
      const auto& a = expectArray(k, args[0]);
      const auto& b = expectArray(k, args[1]);
      if (a.size != b.size) mismatch(k, "sizes differ");
      return curried(arrayOf(a.size, pairOf(a.elem, b.elem)));
    }
    case PrimKind::Fst:
    case PrimKind::Snd: {
      if (!args[0]->isPair()) mismatch(k, "expected a pair, got " + renderType(args[0]));
      return curried(k == PrimKind::Fst ? args[0]->pair().first : args[0]->pair().second);
    }
    case PrimKind::Split: {
      const auto& xs = expectArray(k, args[0]);
      if (xs.size % nats[0] != 0)
        mismatch(k, std::to_string(nats[0]) + " does not divide " + std::to_string(xs.size));
      return curried(arrayOf(xs.size / nats[0], arrayOf(nats[0], xs.elem)));
    }
    case PrimKind::Join: {
      const auto& outer = expectArray(k, args[0]);
      const auto& inner = expectArray(k, outer.elem);
      return curried(arrayOf(outer.size * inner.size, inner.elem));
    }
    case PrimKind::Transpose: {
      const auto& outer = expectArray(k, args[0]);
      const auto& inner = expectArray(k, outer.elem);
      return curried(arrayOf(inner.size, arrayOf(outer.size, inner.elem)));
    }
    case PrimKind::Slide: {
      const auto& xs = expectArray(k, args[0]);
      int sz = nats[0], st = nats[1];
      if (xs.size < sz) mismatch(k, "window larger than array");
      if ((xs.size - sz) % st != 0) mismatch(k, "step does not divide the sliding range");
      return curried(arrayOf((xs.size - sz) / st + 1, arrayOf(sz, xs.elem)));
    }
    case PrimKind::PadClamp: {
      const auto& xs = expectArray(k, args[0]);
      return curried(arrayOf(xs.size + nats[0] + nats[1], xs.elem));
    }
    case PrimKind::AsVector: {
      const auto& xs = expectArray(k, args[0]);
      if (!isScalarLike(xs.elem)) mismatch(k, "elements must be scalar");
      if (xs.size % nats[0] != 0)
        mismatch(k, std::to_string(nats[0]) + " does not divide " + std::to_string(xs.size));
      return curried(arrayOf(xs.size / nats[0], vectorOf(nats[0], xs.elem)));
    }
    case PrimKind::AsScalar: {
      const auto& xs = expectArray(k, args[0]);
      if (!xs.elem->isVector()) mismatch(k, "expected an array of vectors");
      return curried(arrayOf(xs.size * xs.elem->vector().width, xs.elem->vector().elem));
    }
    case PrimKind::ToMem:
    case PrimKind::Id:
      return curried(args[0]);
    case PrimKind::Add:
      expectEq(k, f32(), args[0], "left operand");
      expectEq(k, f32(), args[1], "right operand");
      return curried(f32());
    case PrimKind::Mult:
      expectEq(k, pairOf(f32(), f32()), args[0], "operand");
      return curried(f32());
  }
  mismatch(k, "unknown primitive");
}

Expr call(PrimKind k, std::vector<int> nats, std::vector<Expr> args) {
  std::vector<TypePtr> types;
  types.reserve(args.size());
  for (const auto& a : args) types.push_back(a->type());
  TypePtr t = instantiatePrim(k, nats, types);
  Expr e = primNode(k, std::move(nats), std::move(t));
  for (auto& a : args) e = app(e, std::move(a));
  return e;
}

Expr lam(const std::string& base, TypePtr paramType, const std::function<Expr(Expr)>& body) {
  std::string name = freshName(base);
  Expr b = body(var(name, paramType));
  return lam(name, std::move(paramType), std::move(b));
}

Expr withPrimKind(const Expr& prim, PrimKind k) { return primNode(k, prim->nats(), prim->type()); }

// --- spines ------------------------------------------------------------------

Spine spine(const Expr& e) {
  Spine s;
  Expr cur = e;
  while (cur->isApp()) {
    s.args.push_back(cur->arg());
    cur = cur->fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

Expr rebuild(const Expr& head, const std::vector<Expr>& args) {
  Expr e = head;
  for (const auto& a : args) e = app(e, a);
  return e;
}

std::optional<PrimKind> headPrim(const Expr& e) {
  const Node* cur = e.get();
  while (cur->isApp()) cur = cur->fun().get();
  if (cur->isPrim()) return cur->prim();
  return std::nullopt;
}

bool isPrimCall(const Expr& e, PrimKind k, std::size_t n) {
  std::size_t count = 0;
  const Node* cur = e.get();
  while (cur->isApp()) {
    ++count;
    cur = cur->fun().get();
  }
  return count == n && cur->isPrim(k);
}

TypePtr domainOf(const Expr& e) {
  if (e->type() && e->type()->isFn()) return e->type()->fn().in;
  if (e->isLam()) return e->paramType();
  return nullptr;
}

bool isLayoutFn(const Expr& f) {
  if (f->isPrim()) {
    switch (f->prim()) {
      case PrimKind::Join:
      case PrimKind::Transpose:
      case PrimKind::Split:
      case PrimKind::AsScalar:
      case PrimKind::AsVector:
      case PrimKind::Id:
        return true;
      default:
        return false;
    }
  }
  if (f->isApp()) {
    auto k = headPrim(f);
    return k && isMapFamily(*k) && isPrimCall(f, *k, 1) && isLayoutFn(f->arg());
  }
  if (f->isLam()) {
    const Expr& b = f->body();
    if (b->isVar()) return b->name() == f->name();
    return b->isApp() && b->arg()->isVar() && b->arg()->name() == f->name() && !b->fun()->hasFree(f->name()) &&
           isLayoutFn(b->fun());
  }
  return false;
}

bool isLayoutApp(const Expr& e) { return e->isApp() && isLayoutFn(e->fun()); }

// --- names, substitution, equivalence ------------------------------------------

std::string freshName(const std::string& base) { return stripSuffix(base) + "_" + std::to_string(gFreshCounter++); }

FreshScope::FreshScope(const Expr& e) : saved_(gFreshCounter) {
  long best = -1;
  maxSuffix(e, best);
  gFreshCounter = best + 1;
}

FreshScope::~FreshScope() { gFreshCounter = std::max(saved_, gFreshCounter); }

Expr refreshBinders(const Expr& e) {
  switch (e->kind()) {
    case NodeKind::Lam: {
      std::string fresh = freshName(e->name());
      Expr body = renameFree(e->body(), e->name(), fresh);
      return lam(fresh, e->paramType(), refreshBinders(body));
    }
    case NodeKind::App:
      return app(refreshBinders(e->fun()), refreshBinders(e->arg()));
    default:
      return e;
  }
}

Expr substitute(const Expr& e, const std::string& x, const Expr& v) {
  if (!e->hasFree(x)) return e;
  switch (e->kind()) {
    case NodeKind::Var:
      return refreshBinders(v);
    case NodeKind::App:
      return app(substitute(e->fun(), x, v), substitute(e->arg(), x, v));
    case NodeKind::Lam: {
      if (v->hasFree(e->name())) {
        std::string fresh = freshName(e->name());
        while (v->hasFree(fresh) || e->body()->hasFree(fresh)) fresh = freshName(e->name());
        Expr body = renameFree(e->body(), e->name(), fresh);
        return lam(fresh, e->paramType(), substitute(body, x, v));
      }
      return lam(e->name(), e->paramType(), substitute(e->body(), x, v));
    }
    default:
      return e;
  }
}

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

bool eqRec(const Expr& a, const Expr& b, Env& env, bool alpha) {
  if (a == b && (alpha || env.empty())) {
    // Identical subtrees are equal unless a free name is rebound differently.
    bool safe = true;
    for (const auto& [l, r] : env)
      if (l != r && (a->hasFree(l) || a->hasFree(r))) safe = false;
    if (safe) return true;
  }
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case NodeKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool l = it->first == a->name();
        bool r = it->second == b->name();
        if (l || r) return l && r;
      }
      return a->name() == b->name();
    }
    case NodeKind::Lam: {
      if (!alpha && a->name() != b->name()) return false;
      env.emplace_back(a->name(), b->name());
      bool ok = eqRec(a->body(), b->body(), env, alpha);
      env.pop_back();
      return ok;
    }
    case NodeKind::App:
      return eqRec(a->fun(), b->fun(), env, alpha) && eqRec(a->arg(), b->arg(), env, alpha);
    case NodeKind::Prim:
      return a->prim() == b->prim() && a->nats() == b->nats();
    case NodeKind::Lit:
      return a->data() == b->data() && typeEqual(a->type(), b->type());
  }
  return false;
}

void checkRec(const Expr& e, std::vector<std::pair<std::string, TypePtr>>& env) {
  switch (e->kind()) {
    case NodeKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first != e->name()) continue;
        if (!it->second) throw TypeError("cannot infer the type of binder " + e->name());
        if (!typeEqual(it->second, e->type()))
          throw TypeError("variable " + e->name() + " used at type " + renderType(e->type()) +
                          " but bound at " + renderType(it->second));
        return;
      }
      if (!e->type()) throw TypeError("untyped free variable " + e->name());
      return;
    }
    case NodeKind::Lam:
      if (!e->paramType()) throw TypeError("cannot infer the type of binder " + e->name());
      env.emplace_back(e->name(), e->paramType());
      checkRec(e->body(), env);
      env.pop_back();
      return;
    case NodeKind::App:
      checkRec(e->fun(), env);
      checkRec(e->arg(), env);
      return;
    case NodeKind::Prim:
      if (!e->type()) throw TypeError(std::string("untyped primitive ") + primInfo(e->prim()).name);
      return;
    case NodeKind::Lit:
      return;
  }
}

}  // namespace

bool alphaEq(const Expr& a, const Expr& b) {
  Env env;
  return eqRec(a, b, env, true);
}

bool structEq(const Expr& a, const Expr& b) {
  Env env;
  return eqRec(a, b, env, false);
}

TypePtr typeCheck(const Expr& e) {
  std::vector<std::pair<std::string, TypePtr>> env;
  checkRec(e, env);
  if (!e->type()) throw TypeError("expression is not fully typed");
  return e->type();
}

}  // namespace stratum::ir
