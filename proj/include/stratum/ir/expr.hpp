// Immutable expression trees of the array IR.
//
// Every node computes its type when it is built. Nodes whose type depends on
// an untyped free variable carry a null type; everything else is typed, and an
// ill-typed application throws TypeError at construction.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratum/combinators.hpp"
#include "stratum/ir/type.hpp"

namespace stratum::ir {

enum class NodeKind { Var, Lam, App, Prim, Lit };

enum class PrimKind {
  Map,
  MapSeq,
  MapPar,
  MapVec,
  MapSeqUnroll,
  Reduce,
  ReduceSeq,
  ReduceSeqUnroll,
  Zip,
  Fst,
  Snd,
  Split,
  Join,
  Transpose,
  Slide,
  PadClamp,
  AsVector,
  AsScalar,
  ToMem,
  Add,
  Mult,
  Id,
};

struct PrimInfo {
  PrimKind kind;
  const char* name;
  int natCount;  // size parameters written before the data arguments
  int arity;     // expression arguments
};

const PrimInfo& primInfo(PrimKind k);
std::optional<PrimKind> primByName(const std::string& name);
const std::vector<PrimInfo>& allPrims();

bool isMapFamily(PrimKind k);     // map, mapSeq, mapPar, mapSeqUnroll, mapVec
bool isReduceFamily(PrimKind k);  // reduce, reduceSeq, reduceSeqUnroll
bool isHighLevel(PrimKind k);     // map or reduce

class Node;
using Expr = std::shared_ptr<const Node>;

class Node {
 public:
  NodeKind kind() const { return kind_; }
  const TypePtr& type() const { return type_; }

  // Var: variable name. Lam: binder name.
  const std::string& name() const { return name_; }
  // Lam: binder type (may be null).
  const TypePtr& paramType() const { return paramType_; }
  const Expr& body() const { return a_; }
  const Expr& fun() const { return a_; }
  const Expr& arg() const { return b_; }
  PrimKind prim() const { return prim_; }
  const std::vector<int>& nats() const { return nats_; }
  // Lit: scalar value (size 1) or row-major array data.
  const std::vector<double>& data() const { return data_; }

  /// Sorted, duplicate-free free-variable names.
  const std::vector<std::string>& freeVars() const { return fv_; }
  bool hasFree(const std::string& x) const;
  std::size_t size() const { return size_; }

  bool isVar() const { return kind_ == NodeKind::Var; }
  bool isLam() const { return kind_ == NodeKind::Lam; }
  bool isApp() const { return kind_ == NodeKind::App; }
  bool isPrim() const { return kind_ == NodeKind::Prim; }
  bool isPrim(PrimKind k) const { return kind_ == NodeKind::Prim && prim_ == k; }
  bool isLit() const { return kind_ == NodeKind::Lit; }

 private:
  friend Expr var(std::string, TypePtr);
  friend Expr lam(std::string, TypePtr, Expr);
  friend Expr app(Expr, Expr);
  friend Expr primNode(PrimKind, std::vector<int>, TypePtr);
  friend Expr lit(double);
  friend Expr arrayLit(std::vector<double>, TypePtr);

  NodeKind kind_ = NodeKind::Var;
  TypePtr type_;
  std::string name_;
  TypePtr paramType_;
  Expr a_, b_;
  PrimKind prim_ = PrimKind::Id;
  std::vector<int> nats_;
  std::vector<double> data_;
  std::vector<std::string> fv_;
  std::size_t size_ = 1;
};

// --- construction ------------------------------------------------------------

Expr var(std::string name, TypePtr type = nullptr);
Expr lam(std::string param, TypePtr paramType, Expr body);
Expr app(Expr fun, Expr arg);
/// Primitive with an explicit, fully instantiated curried type (or null).
Expr primNode(PrimKind k, std::vector<int> nats, TypePtr type);
Expr lit(double value);
Expr arrayLit(std::vector<double> data, TypePtr type);

Expr app(Expr f, Expr a, Expr b);
Expr app(Expr f, Expr a, Expr b, Expr c);

/// Curried type of primitive k given the types of all its arguments.
/// Returns null if any argument type is null. Throws TypeError on mismatch.
TypePtr instantiatePrim(PrimKind k, const std::vector<int>& nats, const std::vector<TypePtr>& argTypes);

/// Fully applied primitive, instantiated from the argument types.
Expr call(PrimKind k, std::vector<int> nats, std::vector<Expr> args);
inline Expr call(PrimKind k, std::vector<Expr> args) { return call(k, {}, std::move(args)); }

/// Lambda whose body is built from a fresh, typed variable.
Expr lam(const std::string& base, TypePtr paramType, const std::function<Expr(Expr)>& body);

/// A copy of the primitive node with its type's input sizes preserved.
Expr withPrimKind(const Expr& prim, PrimKind k);

// --- spines ------------------------------------------------------------------

struct Spine {
  Expr head;
  std::vector<Expr> args;
};
Spine spine(const Expr& e);
Expr rebuild(const Expr& head, const std::vector<Expr>& args);
/// Head primitive of an application spine, if any.
std::optional<PrimKind> headPrim(const Expr& e);
/// Application spine headed by primitive k with exactly n arguments.
bool isPrimCall(const Expr& e, PrimKind k, std::size_t n);

/// Input type of a function-typed expression, or null.
TypePtr domainOf(const Expr& e);
/// A function that only rearranges its argument: join, transpose, split, asScalar,
/// asVector, id, a map of such a function, or fun(x => L(x)) for such L.
bool isLayoutFn(const Expr& f);
/// L(e) for a layout function L.
bool isLayoutApp(const Expr& e);

// --- names, substitution, equivalence ------------------------------------------

/// Fresh names of the form base_N from a per-thread counter.
std::string freshName(const std::string& base);
/// Makes fresh names deterministic for one top-level execution: the counter
/// restarts above every numeric suffix used in `e` and is restored afterwards.
class FreshScope {
 public:
  explicit FreshScope(const Expr& e);
  ~FreshScope();
  FreshScope(const FreshScope&) = delete;
  FreshScope& operator=(const FreshScope&) = delete;

 private:
  long saved_;
};

/// Capture-avoiding e[x := v]. Binders of the inserted copies are renamed fresh.
Expr substitute(const Expr& e, const std::string& x, const Expr& v);
/// Renames every binder in e to a fresh name.
Expr refreshBinders(const Expr& e);
bool alphaEq(const Expr& a, const Expr& b);
/// Structural equality including binder names.
bool structEq(const Expr& a, const Expr& b);

/// Type of e; throws TypeError for untyped free variables or inconsistent binders.
TypePtr typeCheck(const Expr& e);

}  // namespace stratum::ir

template <>
struct stratum::Traversable<stratum::ir::Expr> {
  using Expr = stratum::ir::Expr;
  static int childCount(const Expr& e) {
    if (e->isApp()) return 2;
    if (e->isLam()) return 1;
    return 0;
  }
  static const Expr& child(const Expr& e, int i) {
    if (e->isLam()) return e->body();
    return i == 0 ? e->fun() : e->arg();
  }
  static Expr withChild(const Expr& e, int i, Expr c) {
    if (e->isLam()) return stratum::ir::lam(e->name(), e->paramType(), std::move(c));
    return i == 0 ? stratum::ir::app(std::move(c), e->arg()) : stratum::ir::app(e->fun(), std::move(c));
  }
};
