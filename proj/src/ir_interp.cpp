#include "stratum/ir/interp.hpp"

#include <algorithm>
#include <cmath>

namespace stratum::ir {

Value Value::of(double d) {
  Value v;
  v.scalar = d;
  return v;
}

Value Value::array(std::vector<Value> xs) {
  Value v;
  v.kind = Kind::Array;
  v.elems = std::make_shared<const std::vector<Value>>(std::move(xs));
  return v;
}

Value Value::tuple(Value a, Value b) {
  Value v;
  v.kind = Kind::Tuple;
  v.elems = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(a), std::move(b)});
  return v;
}

Value Value::closure(Closure f) {
  Value v;
  v.kind = Kind::Closure;
  v.fn = std::make_shared<const Closure>(std::move(f));
  return v;
}

Value Value::operator()(const Value& arg) const {
  if (!isClosure()) throw EvalError("applying a non-function value");
  return (*fn)(arg);
}

namespace {

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  Value value;
  Env next;
};

const Value& lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return n->value;
  throw EvalError("unbound variable " + name);
}

const Value& arr(const Value& v, const char* prim) {
  if (!v.isArray()) throw EvalError(std::string(prim) + ": expected an array");
  return v;
}

Value applyPrim(PrimKind k, const std::vector<int>& nats, const std::vector<Value>& a) {
  const char* name = primInfo(k).name;
  switch (k) {
    case PrimKind::Map:
    case PrimKind::MapSeq:
    case PrimKind::MapPar:
    case PrimKind::MapVec:
    case PrimKind::MapSeqUnroll: {
      const auto& xs = arr(a[1], name);
      std::vector<Value> out;
      out.reserve(xs.size());
      for (const auto& x : xs.items()) out.push_back(a[0](x));
      return Value::array(std::move(out));
    }
    case PrimKind::Reduce:
    case PrimKind::ReduceSeq:
    case PrimKind::ReduceSeqUnroll: {
      Value acc = a[1];
      for (const auto& x : arr(a[2], name).items()) acc = a[0](acc)(x);
      return acc;
    }
    case PrimKind::Zip: {
      const auto& xs = arr(a[0], name);
      const auto& ys = arr(a[1], name);
      if (xs.size() != ys.size()) throw EvalError("zip: sizes differ");
      std::vector<Value> out;
      out.reserve(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(Value::tuple(xs[i], ys[i]));
      return Value::array(std::move(out));
    }
    case PrimKind::Fst:
    case PrimKind::Snd:
      if (!a[0].isTuple()) throw EvalError(std::string(name) + ": expected a pair");
      return a[0][k == PrimKind::Fst ? 0 : 1];
    case PrimKind::Split:
    case PrimKind::AsVector: {
      const auto& xs = arr(a[0], name);
      std::size_t n = static_cast<std::size_t>(nats[0]);
      if (xs.size() % n != 0) throw EvalError(std::string(name) + ": indivisible size");
      std::vector<Value> out;
      for (std::size_t i = 0; i < xs.size(); i += n)
        out.push_back(Value::array(std::vector<Value>(xs.items().begin() + static_cast<long>(i),
                                                      xs.items().begin() + static_cast<long>(i + n))));
      return Value::array(std::move(out));
    }
    case PrimKind::Join:
    case PrimKind::AsScalar: {
      std::vector<Value> out;
      for (const auto& row : arr(a[0], name).items())
        for (const auto& x : arr(row, name).items()) out.push_back(x);
      return Value::array(std::move(out));
    }
    case PrimKind::Transpose: {
      const auto& xs = arr(a[0], name);
      if (xs.size() == 0) return xs;
      std::size_t m = arr(xs[0], name).size();
      std::vector<Value> out;
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<Value> col;
        for (const auto& row : xs.items()) {
          if (arr(row, name).size() != m) throw EvalError("transpose: ragged array");
          col.push_back(row[j]);
        }
        out.push_back(Value::array(std::move(col)));
      }
      return Value::array(std::move(out));
    }
    case PrimKind::Slide: {
      const auto& xs = arr(a[0], name);
      std::size_t sz = static_cast<std::size_t>(nats[0]), st = static_cast<std::size_t>(nats[1]);
      std::vector<Value> out;
      for (std::size_t i = 0; i + sz <= xs.size(); i += st)
        out.push_back(Value::array(std::vector<Value>(xs.items().begin() + static_cast<long>(i),
                                                      xs.items().begin() + static_cast<long>(i + sz))));
      return Value::array(std::move(out));
    }
    case PrimKind::PadClamp: {
      const auto& xs = arr(a[0], name);
      if (xs.size() == 0) throw EvalError("padClamp: empty array");
      long n = static_cast<long>(xs.size());
      std::vector<Value> out;
      for (long i = -nats[0]; i < n + nats[1]; ++i) out.push_back(xs[static_cast<std::size_t>(std::clamp(i, 0L, n - 1))]);
      return Value::array(std::move(out));
    }
    case PrimKind::ToMem:
    case PrimKind::Id:
      return a[0];
    case PrimKind::Add:
      if (!a[0].isScalar() || !a[1].isScalar()) throw EvalError("add: expected scalars");
      return Value::of(a[0].scalar + a[1].scalar);
    case PrimKind::Mult:
      if (!a[0].isTuple() || !a[0][0].isScalar() || !a[0][1].isScalar()) throw EvalError("mult: expected a pair");
      return Value::of(a[0][0].scalar * a[0][1].scalar);
  }
  throw EvalError("unknown primitive");
}

Value primValue(PrimKind k, std::vector<int> nats, std::vector<Value> got) {
  if (static_cast<int>(got.size()) == primInfo(k).arity) return applyPrim(k, nats, got);
  return Value::closure([k, nats = std::move(nats), got = std::move(got)](const Value& x) {
    auto next = got;
    next.push_back(x);
    return primValue(k, nats, std::move(next));
  });
}

Value literal(const std::vector<double>& data, const TypePtr& t, std::size_t& at) {
  if (!t || !t->isArray()) return Value::of(data[at++]);
  std::vector<Value> out;
  for (int i = 0; i < t->array().size; ++i) out.push_back(literal(data, t->array().elem, at));
  return Value::array(std::move(out));
}

Value evalRec(const Expr& e, const Env& env) {
  switch (e->kind()) {
    case NodeKind::Var:
      return lookup(env, e->name());
    case NodeKind::Lit: {
      std::size_t at = 0;
      return literal(e->data(), e->type(), at);
    }
    case NodeKind::Prim:
      return primValue(e->prim(), e->nats(), {});
    case NodeKind::Lam:
      return Value::closure([e, env](const Value& x) {
        return evalRec(e->body(), std::make_shared<const EnvNode>(EnvNode{e->name(), x, env}));
      });
    case NodeKind::App: {
      Value f = evalRec(e->fun(), env);
      return f(evalRec(e->arg(), env));
    }
  }
  throw EvalError("unknown node");
}

void flattenInto(const Value& v, std::vector<double>& out) {
  switch (v.kind) {
    case Value::Kind::Scalar:
      out.push_back(v.scalar);
      return;
    case Value::Kind::Array:
    case Value::Kind::Tuple:
      for (const auto& x : v.items()) flattenInto(x, out);
      return;
    case Value::Kind::Closure:
      throw EvalError("cannot flatten a function value");
  }
}

Value unflattenAt(const TypePtr& t, const std::vector<double>& data, std::size_t& at) {
  if (t->isScalar()) {
    if (at >= data.size()) throw EvalError("not enough data for type");
    return Value::of(data[at++]);
  }
  if (t->isPair()) {
    Value a = unflattenAt(t->pair().first, data, at);
    Value b = unflattenAt(t->pair().second, data, at);
    return Value::tuple(std::move(a), std::move(b));
  }
  if (t->isArray() || t->isVector()) {
    std::vector<Value> out;
    for (int i = 0; i < sizeOf(t); ++i) out.push_back(unflattenAt(elemOf(t), data, at));
    return Value::array(std::move(out));
  }
  throw EvalError("cannot build a function value from data");
}

}  // namespace

Value eval(const Expr& e, const std::vector<Value>& args) {
  Value v = evalRec(e, nullptr);
  for (const auto& a : args) v = v(a);
  return v;
}

std::vector<double> flatten(const Value& v) {
  std::vector<double> out;
  flattenInto(v, out);
  return out;
}

Value unflatten(const TypePtr& t, const std::vector<double>& data) {
  std::size_t at = 0;
  Value v = unflattenAt(t, data, at);
  if (at != data.size()) throw EvalError("too much data for type");
  return v;
}

std::vector<TypePtr> inputTypes(const Expr& e) {
  std::vector<TypePtr> out;
  const Node* cur = e.get();
  for (; cur->isLam(); cur = cur->body().get()) out.push_back(cur->paramType());
  for (TypePtr t = cur->type(); t && t->isFn(); t = t->fn().out) out.push_back(t->fn().in);
  return out;
}

std::vector<Value> randomInputs(const Expr& e, std::uint64_t seed) {
  Lcg rng(seed);
  std::vector<Value> out;
  for (const auto& t : inputTypes(e)) {
    if (!t) throw EvalError("program parameter without a type");
    std::vector<double> data(static_cast<std::size_t>(scalarCount(t)));
    for (auto& d : data) d = rng.next();
    out.push_back(unflatten(t, data));
  }
  return out;
}

double maxRelError(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double scale = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
    double err = std::fabs(a[i] - b[i]) / scale;
    if (std::isnan(err)) return INFINITY;
    worst = std::max(worst, err);
  }
  return worst;
}

bool allClose(const std::vector<double>& a, const std::vector<double>& b, double rel) {
  return maxRelError(a, b) <= rel;
}

}  // namespace stratum::ir
