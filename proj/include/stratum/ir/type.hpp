// Data types of the array IR with concrete sizes.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

namespace stratum::ir {

class TypeError : public std::runtime_error {
 public:
  explicit TypeError(const std::string& what) : std::runtime_error(what) {}
};

class DataType;
using TypePtr = std::shared_ptr<const DataType>;

struct ScalarT {};
struct VectorT {
  int width;
  TypePtr elem;
};
struct ArrayT {
  int size;
  TypePtr elem;
};
struct PairT {
  TypePtr first;
  TypePtr second;
};
struct FnT {
  TypePtr in;
  TypePtr out;
};

class DataType {
 public:
  using Variant = std::variant<ScalarT, VectorT, ArrayT, PairT, FnT>;
  explicit DataType(Variant v) : v_(std::move(v)) {}

  const Variant& variant() const { return v_; }

  bool isScalar() const { return std::holds_alternative<ScalarT>(v_); }
  bool isVector() const { return std::holds_alternative<VectorT>(v_); }
  bool isArray() const { return std::holds_alternative<ArrayT>(v_); }
  bool isPair() const { return std::holds_alternative<PairT>(v_); }
  bool isFn() const { return std::holds_alternative<FnT>(v_); }

  const VectorT& vector() const { return std::get<VectorT>(v_); }
  const ArrayT& array() const { return std::get<ArrayT>(v_); }
  const PairT& pair() const { return std::get<PairT>(v_); }
  const FnT& fn() const { return std::get<FnT>(v_); }

 private:
  Variant v_;
};

TypePtr f32();
TypePtr vectorOf(int width, TypePtr elem);
TypePtr arrayOf(int size, TypePtr elem);
TypePtr pairOf(TypePtr a, TypePtr b);
TypePtr fnOf(TypePtr in, TypePtr out);

bool typeEqual(const TypePtr& a, const TypePtr& b);
std::string renderType(const TypePtr& t);

/// F32, or a pair built from scalar-like components.
bool isScalarLike(const TypePtr& t);
/// Number of nested array dimensions at the top of t.
int arrayRank(const TypePtr& t);
/// Total number of scalars in a first-order type.
std::int64_t scalarCount(const TypePtr& t);
/// Element type of an array type; throws TypeError otherwise.
const TypePtr& elemOf(const TypePtr& t);
int sizeOf(const TypePtr& t);

}  // namespace stratum::ir
