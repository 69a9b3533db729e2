#include "stratum/ir/type.hpp"

namespace stratum::ir {

TypePtr f32() {
  static const TypePtr t = std::make_shared<DataType>(ScalarT{});
  return t;
}

TypePtr vectorOf(int width, TypePtr elem) {
  if (width < 1) throw TypeError("vector width must be positive");
  if (!isScalarLike(elem)) throw TypeError("vector elements must be scalar, got " + renderType(elem));
  return std::make_shared<DataType>(VectorT{width, std::move(elem)});
}

TypePtr arrayOf(int size, TypePtr elem) {
  if (size < 1) throw TypeError("array size must be positive, got " + std::to_string(size));
  return std::make_shared<DataType>(ArrayT{size, std::move(elem)});
}

TypePtr pairOf(TypePtr a, TypePtr b) { return std::make_shared<DataType>(PairT{std::move(a), std::move(b)}); }

TypePtr fnOf(TypePtr in, TypePtr out) { return std::make_shared<DataType>(FnT{std::move(in), std::move(out)}); }

bool typeEqual(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  const auto& va = a->variant();
  const auto& vb = b->variant();
  if (va.index() != vb.index()) return false;
  if (a->isScalar()) return true;
  if (a->isVector())
    return a->vector().width == b->vector().width && typeEqual(a->vector().elem, b->vector().elem);
  if (a->isArray()) return a->array().size == b->array().size && typeEqual(a->array().elem, b->array().elem);
  if (a->isPair()) return typeEqual(a->pair().first, b->pair().first) && typeEqual(a->pair().second, b->pair().second);
  return typeEqual(a->fn().in, b->fn().in) && typeEqual(a->fn().out, b->fn().out);
}

std::string renderType(const TypePtr& t) {
  if (!t) return "?";
  if (t->isScalar()) return "float";
  if (t->isVector()) return "vec(" + std::to_string(t->vector().width) + ", " + renderType(t->vector().elem) + ")";
  if (t->isArray()) return std::to_string(t->array().size) + "." + renderType(t->array().elem);
  if (t->isPair()) return "(" + renderType(t->pair().first) + ", " + renderType(t->pair().second) + ")";
  const auto& f = t->fn();
  std::string in = renderType(f.in);
  if (f.in->isFn()) in = "(" + in + ")";
  return in + " -> " + renderType(f.out);
}

bool isScalarLike(const TypePtr& t) {
  if (t->isScalar()) return true;
  if (t->isPair()) return isScalarLike(t->pair().first) && isScalarLike(t->pair().second);
  return false;
}

int arrayRank(const TypePtr& t) {
  int r = 0;
  const DataType* cur = t.get();
  while (cur->isArray()) {
    ++r;
    cur = cur->array().elem.get();
  }
  return r;
}

std::int64_t scalarCount(const TypePtr& t) {
  if (t->isScalar()) return 1;
  if (t->isVector()) return t->vector().width * scalarCount(t->vector().elem);
  if (t->isArray()) return t->array().size * scalarCount(t->array().elem);
  if (t->isPair()) return scalarCount(t->pair().first) + scalarCount(t->pair().second);
  throw TypeError("function values have no scalar layout");
}

const TypePtr& elemOf(const TypePtr& t) {
  if (t->isArray()) return t->array().elem;
  if (t->isVector()) return t->vector().elem;
  throw TypeError("expected an array type, got " + renderType(t));
}

int sizeOf(const TypePtr& t) {
  if (t->isArray()) return t->array().size;
  if (t->isVector()) return t->vector().width;
  throw TypeError("expected an array type, got " + renderType(t));
}

}  // namespace stratum::ir
