#include "stratum/codegen.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <sstream>

#include "stratum/ir/interp.hpp"

namespace stratum {

using namespace ir;

namespace {

// --- index arithmetic -----------------------------------------------------------

bool isAtom(const std::string& s) {
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !s.empty();
}

std::string paren(const std::string& s) { return isAtom(s) ? s : "(" + s + ")"; }

std::string idxAdd(const std::string& a, const std::string& b) {
  if (a == "0") return b;
  if (b == "0") return a;
  return a + " + " + b;
}

std::string idxMul(const std::string& a, long n) {
  if (n == 1 || a == "0") return a;
  return paren(a) + " * " + std::to_string(n);
}

std::string idxDiv(const std::string& a, long n) {
  if (n == 1 || a == "0") return a;
  return paren(a) + " / " + std::to_string(n);
}

std::string idxMod(const std::string& a, long n) {
  if (n == 1 || a == "0") return "0";
  return paren(a) + " % " + std::to_string(n);
}

std::string floatLiteral(double d) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  s += "f";
  return d < 0 ? "(" + s + ")" : s;
}

bool isArrayLike(const TypePtr& t) { return t && (t->isArray() || t->isVector()); }

// --- symbolic values --------------------------------------------------------------

struct SVal;
using SPtr = std::shared_ptr<const SVal>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  SPtr value;
  Env next;
};

struct SVal {
  enum class Kind { Scalar, Tuple, Array, Fn } kind;
  std::string expr;                                // Scalar
  SPtr first, second;                              // Tuple
  int size = 0;                                    // Array
  std::function<SPtr(const std::string&)> at;      // Array
  Expr fn;                                         // Fn: a lambda or a partial primitive application
  Env env;                                         // Fn
};

SPtr scalar(std::string e) {
  auto v = std::make_shared<SVal>();
  v->kind = SVal::Kind::Scalar;
  v->expr = std::move(e);
  return v;
}

SPtr tuple(SPtr a, SPtr b) {
  auto v = std::make_shared<SVal>();
  v->kind = SVal::Kind::Tuple;
  v->first = std::move(a);
  v->second = std::move(b);
  return v;
}

SPtr arrayView(int n, std::function<SPtr(const std::string&)> at) {
  auto v = std::make_shared<SVal>();
  v->kind = SVal::Kind::Array;
  v->size = n;
  v->at = std::move(at);
  return v;
}

SPtr function(Expr fn, Env env) {
  auto v = std::make_shared<SVal>();
  v->kind = SVal::Kind::Fn;
  v->fn = std::move(fn);
  v->env = std::move(env);
  return v;
}

const SVal& expectArray(const SPtr& v, const char* what) {
  if (v->kind != SVal::Kind::Array) throw CodegenError(std::string(what) + ": expected an array");
  return *v;
}

const std::string& expectScalar(const SPtr& v, const char* what) {
  if (v->kind != SVal::Kind::Scalar) throw CodegenError(std::string(what) + ": expected a scalar");
  return v->expr;
}

Env bind(Env env, std::string name, SPtr v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), std::move(env)});
}

SPtr lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return n->value;
  throw CodegenError("unbound variable " + name);
}

/// Row-major view of `name` starting at `offset`.
SPtr bufferView(const std::string& name, const TypePtr& t, const std::string& offset) {
  if (t->isScalar()) return scalar(name + "[" + offset + "]");
  if (!isArrayLike(t)) throw CodegenError("buffers hold arrays of scalars only, not " + renderType(t));
  const TypePtr elem = elemOf(t);
  const long stride = scalarCount(elem);
  return arrayView(sizeOf(t), [=](const std::string& i) { return bufferView(name, elem, idxAdd(offset, idxMul(i, stride))); });
}

// --- write destinations -------------------------------------------------------------

struct Dest;
using DPtr = std::shared_ptr<const Dest>;
struct Dest {
  TypePtr type;
  std::string lvalue;                          // scalar destinations
  std::function<DPtr(const std::string&)> at;  // array destinations
};

DPtr scalarDest(TypePtr t, std::string lvalue) {
  auto d = std::make_shared<Dest>();
  d->type = std::move(t);
  d->lvalue = std::move(lvalue);
  return d;
}

DPtr arrayDest(TypePtr t, std::function<DPtr(const std::string&)> at) {
  auto d = std::make_shared<Dest>();
  d->type = std::move(t);
  d->at = std::move(at);
  return d;
}

DPtr bufferDest(const std::string& name, const TypePtr& t, const std::string& offset) {
  if (t->isScalar()) return scalarDest(t, name + "[" + offset + "]");
  if (!isArrayLike(t)) throw CodegenError("cannot store a value of type " + renderType(t));
  const TypePtr elem = elemOf(t);
  const long stride = scalarCount(elem);
  return arrayDest(t, [=](const std::string& i) { return bufferDest(name, elem, idxAdd(offset, idxMul(i, stride))); });
}

/// The destination contents as a value (for in-place accumulation).
SPtr readBack(const DPtr& d) {
  if (!d->at) return scalar(d->lvalue);
  return arrayView(sizeOf(d->type), [d](const std::string& i) { return readBack(d->at(i)); });
}

/// Destination for x such that writing x there writes L(x) into d.
DPtr throughLayout(const Expr& layoutFn, const DPtr& d, const TypePtr& xType) {
  const Expr& f = layoutFn;
  if (f->isLam()) {
    if (f->body()->isVar()) return d;
    return throughLayout(f->body()->fun(), d, xType);
  }
  if (f->isApp()) {  // a map of a layout function
    const Expr inner = f->arg();
    const TypePtr elem = elemOf(xType);
    return arrayDest(xType, [=](const std::string& i) { return throughLayout(inner, d->at(i), elem); });
  }
  switch (f->prim()) {
    case PrimKind::Id:
      return d;
    case PrimKind::Join:
    case PrimKind::AsScalar: {
      const TypePtr row = elemOf(xType);
      const long m = sizeOf(row);
      return arrayDest(xType, [=](const std::string& i) {
        return arrayDest(row, [=](const std::string& j) { return d->at(idxAdd(idxMul(i, m), j)); });
      });
    }
    case PrimKind::Split:
    case PrimKind::AsVector: {
      const long n = f->nats()[0];
      return arrayDest(xType, [=](const std::string& i) { return d->at(idxDiv(i, n))->at(idxMod(i, n)); });
    }
    case PrimKind::Transpose: {
      const TypePtr row = elemOf(xType);
      return arrayDest(xType, [=](const std::string& i) {
        return arrayDest(row, [=](const std::string& j) { return d->at(j)->at(i); });
      });
    }
    default:
      throw CodegenError(std::string("not a layout function: ") + primInfo(f->prim()).name);
  }
}

void requireLowered(const Expr& e) {
  switch (e->kind()) {
    case NodeKind::Prim:
      if (isHighLevel(e->prim()))
        throw CodegenError(std::string("residual high-level primitive ") + primInfo(e->prim()).name);
      return;
    case NodeKind::Lam:
      return requireLowered(e->body());
    case NodeKind::App:
      requireLowered(e->fun());
      return requireLowered(e->arg());
    default:
      return;
  }
}

// --- statements ------------------------------------------------------------------------

struct Stmt {
  std::string line;  // plain statement when bound == 0
  std::string pragma;
  std::string var;
  int bound = 0;
  std::vector<Stmt> body;
};

bool emptyStmts(const std::vector<Stmt>& stmts) {
  for (const auto& s : stmts)
    if (s.bound == 0 || !emptyStmts(s.body)) return false;
  return true;
}

void render(const std::vector<Stmt>& stmts, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& s : stmts) {
    if (s.bound == 0) {
      out << pad << s.line << "\n";
      continue;
    }
    if (emptyStmts(s.body)) continue;
    if (!s.pragma.empty()) out << pad << s.pragma << "\n";
    out << pad << "for (int " << s.var << " = 0; " << s.var << " < " << s.bound << "; ++" << s.var << ") {\n";
    render(s.body, indent + 1, out);
    out << pad << "}\n";
  }
}

// --- the emitter ---------------------------------------------------------------------------

class Emitter {
 public:
  std::string run(const Expr& program, const std::string& fnName) {
    requireLowered(program);
    typeCheck(program);
    std::vector<TypePtr> inputs = inputTypes(program);
    Expr applied = program;
    Env env;
    std::vector<std::string> params{"float* out"};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (!inputs[i]) throw CodegenError("program input without a type");
      const std::string name = "in" + std::to_string(i);
      SPtr view = bufferView(name, inputs[i], "0");
      inputValues_.insert(view.get());
      env = bind(env, name, view);
      applied = app(applied, var(name, inputs[i]));
      params.push_back("const float* " + name);
    }
    if (!applied->type() || !isArrayLike(applied->type()))
      throw CodegenError("program result must be an array, not " + renderType(applied->type()));
    resultCount_ = scalarCount(applied->type());

    current_ = &body_;
    write(bufferDest("out", applied->type(), "0"), applied, env);

    std::ostringstream out;
    out << "#include <stdlib.h>\n\n";
    if (usesClamp_) out << "static inline int clampIndex(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }\n\n";
    for (const auto& c : constants_) out << c << "\n";
    if (!constants_.empty()) out << "\n";
    out << "void " << fnName << "(";
    for (std::size_t i = 0; i < params.size(); ++i) out << (i ? ", " : "") << params[i];
    out << ") {\n";
    render(prelude_, 1, out);
    render(body_, 1, out);
    for (const auto& b : heapBuffers_) out << "  free(" << b << ");\n";
    out << "}\n";
    return out.str();
  }

  std::int64_t resultCount() const { return resultCount_; }

 private:
  std::vector<Stmt> prelude_, body_;
  std::vector<Stmt>* current_ = nullptr;
  int depth_ = 0;
  int accCounter_ = 0, bufCounter_ = 0, argCounter_ = 0;
  std::vector<std::string> constants_, heapBuffers_;
  std::map<const Node*, SPtr> hoisted_;
  std::set<const SVal*> inputValues_;
  bool usesClamp_ = false;
  std::int64_t resultCount_ = 0;

  void emit(std::string line) { current_->push_back(Stmt{std::move(line), {}, {}, 0, {}}); }

  void loop(int bound, std::string pragma, const std::function<void(const std::string&)>& bodyFn) {
    if (bound == 1) {
      bodyFn("0");
      return;
    }
    Stmt s;
    s.pragma = std::move(pragma);
    s.var = "i" + std::to_string(depth_);
    s.bound = bound;
    std::vector<Stmt>* saved = current_;
    current_ = &s.body;
    ++depth_;
    bodyFn(s.var);
    --depth_;
    current_ = saved;
    current_->push_back(std::move(s));
  }

  static std::string loopPragma(PrimKind k, int bound) {
    switch (k) {
      case PrimKind::MapPar:
        return "#pragma omp parallel for";
      case PrimKind::MapVec:
        return "#pragma omp simd";
      case PrimKind::MapSeqUnroll:
      case PrimKind::ReduceSeqUnroll:
        return "#pragma GCC unroll " + std::to_string(bound);
      default:
        return "";
    }
  }

  std::string argName() { return "$" + std::to_string(argCounter_++); }

  /// Binds values to synthetic variables and returns fn applied to them.
  std::pair<Expr, Env> applyTo(const Expr& fn, Env env, const std::vector<SPtr>& vals) {
    Expr e = fn;
    for (const auto& v : vals) {
      const std::string name = argName();
      e = app(e, var(name, domainOf(e)));
      env = bind(env, name, v);
    }
    return {e, env};
  }

  // --- read position ---

  SPtr apply(const SPtr& f, const SPtr& arg) {
    if (f->kind != SVal::Kind::Fn) throw CodegenError("applying a non-function value");
    if (f->fn->isLam()) return eval(f->fn->body(), bind(f->env, f->fn->name(), arg));
    auto [e, env] = applyTo(f->fn, f->env, {arg});
    return eval(e, env);
  }

  SPtr eval(const Expr& e, const Env& env) {
    switch (e->kind()) {
      case NodeKind::Var:
        return lookup(env, e->name());
      case NodeKind::Lit:
        return literal(e);
      case NodeKind::Lam:
      case NodeKind::Prim:
        return function(e, env);
      case NodeKind::App:
        break;
    }
    Spine s = spine(e);
    if (s.head->isPrim()) {
      const PrimKind k = s.head->prim();
      const std::size_t arity = static_cast<std::size_t>(primInfo(k).arity);
      if (s.args.size() < arity) return function(e, env);
      if (s.args.size() == arity) {
        if (k == PrimKind::ToMem) return materialize(s.args[0], env);
        if (isReduceFamily(k) && isArrayLike(e->type())) return materialize(e, env);
      }
      std::vector<SPtr> vals;
      for (std::size_t i = 0; i < arity; ++i) vals.push_back(eval(s.args[i], env));
      SPtr v = primitive(k, s.head->nats(), vals);
      for (std::size_t i = arity; i < s.args.size(); ++i) v = apply(v, eval(s.args[i], env));
      return v;
    }
    SPtr f = eval(s.head, env);
    for (const auto& a : s.args) f = apply(f, eval(a, env));
    return f;
  }

  SPtr literal(const Expr& e) {
    if (!isArrayLike(e->type())) return scalar(floatLiteral(e->data()[0]));
    const std::string name = "c" + std::to_string(constants_.size());
    std::string decl = "static const float " + name + "[" + std::to_string(e->data().size()) + "] = {";
    for (std::size_t i = 0; i < e->data().size(); ++i) decl += (i ? ", " : "") + floatLiteral(e->data()[i]);
    constants_.push_back(decl + "};");
    return bufferView(name, e->type(), "0");
  }

  SPtr primitive(PrimKind k, const std::vector<int>& nats, const std::vector<SPtr>& a) {
    const char* name = primInfo(k).name;
    switch (k) {
      case PrimKind::Map:
      case PrimKind::MapSeq:
      case PrimKind::MapPar:
      case PrimKind::MapVec:
      case PrimKind::MapSeqUnroll: {
        SPtr f = a[0], xs = a[1];
        return arrayView(expectArray(xs, name).size, [this, f, xs](const std::string& i) { return apply(f, xs->at(i)); });
      }
      case PrimKind::Reduce:
      case PrimKind::ReduceSeq:
      case PrimKind::ReduceSeqUnroll:
        return scalarReduce(k, a[0], a[1], a[2]);
      case PrimKind::Zip: {
        SPtr xs = a[0], ys = a[1];
        return arrayView(expectArray(xs, name).size,
                         [xs, ys](const std::string& i) { return tuple(xs->at(i), ys->at(i)); });
      }
      case PrimKind::Fst:
      case PrimKind::Snd:
        if (a[0]->kind != SVal::Kind::Tuple) throw CodegenError(std::string(name) + ": expected a pair");
        return k == PrimKind::Fst ? a[0]->first : a[0]->second;
      case PrimKind::Split:
      case PrimKind::AsVector: {
        SPtr xs = a[0];
        const long n = nats[0];
        return arrayView(expectArray(xs, name).size / static_cast<int>(n), [xs, n](const std::string& i) {
          return arrayView(static_cast<int>(n), [xs, n, i](const std::string& j) { return xs->at(idxAdd(idxMul(i, n), j)); });
        });
      }
      case PrimKind::Join:
      case PrimKind::AsScalar: {
        SPtr xs = a[0];
        const int rows = expectArray(xs, name).size;
        const long m = expectArray(xs->at("0"), name).size;
        return arrayView(rows * static_cast<int>(m),
                         [xs, m](const std::string& i) { return xs->at(idxDiv(i, m))->at(idxMod(i, m)); });
      }
      case PrimKind::Transpose: {
        SPtr xs = a[0];
        const int rows = expectArray(xs, name).size;
        const int cols = expectArray(xs->at("0"), name).size;
        return arrayView(cols, [xs, rows](const std::string& i) {
          return arrayView(rows, [xs, i](const std::string& j) { return xs->at(j)->at(i); });
        });
      }
      case PrimKind::Slide: {
        SPtr xs = a[0];
        const long sz = nats[0], st = nats[1];
        const int n = expectArray(xs, name).size;
        const int count = static_cast<int>((n - sz) / st + 1);
        return arrayView(count, [xs, sz, st](const std::string& i) {
          return arrayView(static_cast<int>(sz),
                           [xs, st, i](const std::string& j) { return xs->at(idxAdd(idxMul(i, st), j)); });
        });
      }
      case PrimKind::PadClamp: {
        SPtr xs = a[0];
        const int l = nats[0], r = nats[1];
        const int n = expectArray(xs, name).size;
        usesClamp_ = true;
        return arrayView(n + l + r, [xs, l, n](const std::string& i) {
          std::string shifted = l == 0 ? i : i + " - " + std::to_string(l);
          return xs->at("clampIndex(" + shifted + ", " + std::to_string(n) + ")");
        });
      }
      case PrimKind::ToMem:
      case PrimKind::Id:
        return a[0];
      case PrimKind::Add:
        return scalar("(" + expectScalar(a[0], name) + " + " + expectScalar(a[1], name) + ")");
      case PrimKind::Mult:
        if (a[0]->kind != SVal::Kind::Tuple) throw CodegenError("mult: expected a pair");
        return scalar("(" + expectScalar(a[0]->first, name) + " * " + expectScalar(a[0]->second, name) + ")");
    }
    throw CodegenError("unknown primitive");
  }

  SPtr scalarReduce(PrimKind k, const SPtr& op, const SPtr& init, const SPtr& xs) {
    const std::string acc = "acc" + std::to_string(accCounter_++);
    emit("float " + acc + " = " + expectScalar(init, "reduce") + ";");
    const int n = expectArray(xs, "reduce").size;
    SPtr accVal = scalar(acc);
    loop(n, loopPragma(k, n), [&](const std::string& i) {
      SPtr next = apply(apply(op, accVal), xs->at(i));
      emit(acc + " = " + expectScalar(next, "reduce") + ";");
    });
    return accVal;
  }

  bool dependsOnInputsOnly(const Expr& e, const Env& env) const {
    for (const auto& x : e->freeVars())
      if (!inputValues_.count(lookup(env, x).get())) return false;
    return true;
  }

  /// Stores e in a fresh buffer; computations that read only program inputs are
  /// hoisted to the start of the function and emitted once.
  SPtr materialize(const Expr& e, const Env& env) {
    const bool hoist = dependsOnInputsOnly(e, env);
    if (hoist) {
      auto it = hoisted_.find(e.get());
      if (it != hoisted_.end()) return it->second;
    }
    const TypePtr t = e->type();
    const std::string name = "t" + std::to_string(bufCounter_++);
    const std::string count = std::to_string(scalarCount(t));
    std::vector<Stmt>* saved = current_;
    const int savedDepth = depth_;
    if (hoist) {
      current_ = &prelude_;
      depth_ = 0;
      emit("float* " + name + " = (float*)malloc(sizeof(float) * " + count + ");");
      heapBuffers_.push_back(name);
    } else {
      emit("float " + name + "[" + count + "];");
    }
    write(bufferDest(name, t, "0"), e, env);
    current_ = saved;
    depth_ = savedDepth;
    SPtr view = bufferView(name, t, "0");
    if (hoist) {
      hoisted_[e.get()] = view;
      inputValues_.insert(view.get());
    }
    return view;
  }

  // --- write position ---

  void copy(const DPtr& d, const SPtr& v) {
    if (!d->at) {
      const std::string& rhs = expectScalar(v, "store");
      if (rhs != d->lvalue) emit(d->lvalue + " = " + rhs + ";");
      return;
    }
    const int n = sizeOf(d->type);
    loop(n, "", [&](const std::string& i) { copy(d->at(i), expectArray(v, "store").at(i)); });
  }

  void write(const DPtr& d, const Expr& e, const Env& env) {
    if (!e->isApp()) return copy(d, eval(e, env));
    Spine s = spine(e);
    if (s.head->isLam()) {
      Env inner = bind(env, s.head->name(), eval(s.args[0], env));
      std::vector<SPtr> rest;
      for (std::size_t i = 1; i < s.args.size(); ++i) rest.push_back(eval(s.args[i], env));
      auto [next, nextEnv] = applyTo(s.head->body(), inner, rest);
      return write(d, next, nextEnv);
    }
    if (s.head->isVar()) {
      SPtr f = lookup(env, s.head->name());
      if (f->kind != SVal::Kind::Fn) throw CodegenError("applying a non-function value " + s.head->name());
      std::vector<SPtr> vals;
      for (const auto& a : s.args) vals.push_back(eval(a, env));
      auto [next, nextEnv] = applyTo(f->fn, f->env, vals);
      return write(d, next, nextEnv);
    }
    if (!s.head->isPrim() || s.args.size() != static_cast<std::size_t>(primInfo(s.head->prim()).arity))
      return copy(d, eval(e, env));

    const PrimKind k = s.head->prim();
    if (isLayoutFn(s.head)) return write(throughLayout(s.head, d, s.args[0]->type()), s.args[0], env);
    if (isMapFamily(k)) {
      const Expr& f = s.args[0];
      if (isLayoutFn(f)) return write(throughLayout(e->fun(), d, s.args[1]->type()), s.args[1], env);
      SPtr xs = eval(s.args[1], env);
      const int n = expectArray(xs, primInfo(k).name).size;
      return loop(n, loopPragma(k, n), [&](const std::string& i) {
        auto [next, nextEnv] = applyTo(f, env, {xs->at(i)});
        write(d->at(i), next, nextEnv);
      });
    }
    if (isReduceFamily(k) && isArrayLike(e->type())) {
      // The accumulator lives in the destination.
      write(d, s.args[1], env);
      SPtr xs = eval(s.args[2], env);
      const int n = expectArray(xs, primInfo(k).name).size;
      return loop(n, loopPragma(k, n), [&](const std::string& i) {
        auto [next, nextEnv] = applyTo(s.args[0], env, {readBack(d), xs->at(i)});
        write(d, next, nextEnv);
      });
    }
    if (k == PrimKind::ToMem) return copy(d, materialize(s.args[0], env));
    copy(d, eval(e, env));
  }
};

}  // namespace

std::string emitC(const ir::Expr& program, const std::string& fnName) {
  try {
    return Emitter().run(program, fnName);
  } catch (const TypeError& err) {
    throw CodegenError(err.what());
  }
}

std::string emitHarness(const ir::Expr& program, std::uint64_t seed, const std::string& fnName) {
  Emitter em;
  std::string kernel;
  try {
    kernel = em.run(program, fnName);
  } catch (const TypeError& err) {
    throw CodegenError(err.what());
  }
  std::vector<TypePtr> inputs = inputTypes(program);
  std::ostringstream out;
  out << "#include <stdio.h>\n" << kernel << "\n";
  out << "static unsigned long long lcgState;\n"
         "static float lcgNext(void) {\n"
         "  lcgState = lcgState * 6364136223846793005ULL + 1442695040888963407ULL;\n"
         "  return (float)((double)((lcgState >> 40) & 0xFFFFFF) / 8388608.0 - 1.0);\n"
         "}\n\n";
  out << "int main(void) {\n";
  out << "  lcgState = " << seed << "ULL;\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto n = scalarCount(inputs[i]);
    out << "  float* in" << i << " = (float*)malloc(sizeof(float) * " << n << ");\n";
    out << "  for (int i = 0; i < " << n << "; ++i) in" << i << "[i] = lcgNext();\n";
  }
  out << "  float* out = (float*)malloc(sizeof(float) * " << em.resultCount() << ");\n";
  out << "  " << fnName << "(out";
  for (std::size_t i = 0; i < inputs.size(); ++i) out << ", in" << i;
  out << ");\n";
  out << "  for (int i = 0; i < " << em.resultCount() << "; ++i) printf(\"%.6e\\n\", out[i]);\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) out << "  free(in" << i << ");\n";
  out << "  free(out);\n  return 0;\n}\n";
  return out.str();
}

std::vector<LoopHeader> loopHeaders(const std::string& source) {
  static const std::regex header(R"(^\s*for \(int i(\d+) = 0; i\d+ < (\d+); \+\+i\d+\) \{)");
  std::vector<LoopHeader> out;
  std::istringstream in(source);
  std::string line, previous;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_search(line, m, header)) {
      std::string pragma;
      auto p = previous.find("#pragma");
      if (p != std::string::npos) pragma = previous.substr(p);
      out.push_back(LoopHeader{std::stoi(m[1]), std::stoi(m[2]), pragma});
    }
    previous = line;
  }
  return out;
}

std::vector<LoopHeader> deepestLoopChain(const std::string& source) {
  std::vector<LoopHeader> chain, best;
  for (const auto& h : loopHeaders(source)) {
    chain.resize(static_cast<std::size_t>(h.depth));
    chain.push_back(h);
    if (chain.size() > best.size()) best = chain;
  }
  return best;
}

RunResult compileAndRun(const std::string& harness, const std::string& workDir, const std::string& compiler) {
  namespace fs = std::filesystem;
  RunResult result;
  fs::create_directories(workDir);
  const fs::path src = fs::path(workDir) / "harness.c";
  const fs::path exe = fs::path(workDir) / "harness";
  const fs::path log = fs::path(workDir) / "compile.log";
  std::ofstream(src) << harness;
  const std::string cmd = compiler + " -std=c99 -O2 -fopenmp -o " + exe.string() + " " + src.string() + " > " +
                          log.string() + " 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    std::ifstream in(log);
    result.log = std::string(std::istreambuf_iterator<char>(in), {});
    return result;
  }
  FILE* pipe = popen(exe.string().c_str(), "r");
  if (!pipe) {
    result.log = "cannot run " + exe.string();
    return result;
  }
  char buf[128];
  while (std::fgets(buf, sizeof buf, pipe)) result.output.push_back(std::strtod(buf, nullptr));
  const int status = pclose(pipe);
  result.ok = status == 0;
  if (!result.ok) result.log = "harness exited with status " + std::to_string(status);
  return result;
}

}  // namespace stratum
