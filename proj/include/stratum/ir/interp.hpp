// Reference interpreter: the semantics oracle for every rewrite.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "stratum/ir/expr.hpp"

namespace stratum::ir {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct Value;
using Closure = std::function<Value(const Value&)>;

/// Scalars are doubles; vectors are arrays; low-level primitives behave like
/// their high-level forms.
struct Value {
  enum class Kind { Scalar, Array, Tuple, Closure };
  Kind kind = Kind::Scalar;
  double scalar = 0.0;
  std::shared_ptr<const std::vector<Value>> elems;  // Array elements, or the two Tuple components
  std::shared_ptr<const Closure> fn;

  static Value of(double d);
  static Value array(std::vector<Value> xs);
  static Value tuple(Value a, Value b);
  static Value closure(Closure f);

  bool isScalar() const { return kind == Kind::Scalar; }
  bool isArray() const { return kind == Kind::Array; }
  bool isTuple() const { return kind == Kind::Tuple; }
  bool isClosure() const { return kind == Kind::Closure; }
  const std::vector<Value>& items() const { return *elems; }
  std::size_t size() const { return elems ? elems->size() : 0; }
  const Value& operator[](std::size_t i) const { return (*elems)[i]; }
  Value operator()(const Value& arg) const;
};

/// Evaluates e applied to args (in order).
Value eval(const Expr& e, const std::vector<Value>& args = {});

/// Row-major scalars of a first-order value; tuples contribute both components.
std::vector<double> flatten(const Value& v);
/// Builds a value of type t from row-major scalars.
Value unflatten(const TypePtr& t, const std::vector<double>& data);

/// Deterministic generator shared with the emitted C harness. Values lie in
/// [-1, 1) and are exact in single precision.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  double next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>((state_ >> 40) & 0xFFFFFF) / 8388608.0 - 1.0;
  }

 private:
  std::uint64_t state_;
};

/// Parameter types of the leading lambdas of e, followed by the inputs of a
/// function-typed body (programs in eta-reduced form).
std::vector<TypePtr> inputTypes(const Expr& e);
/// Random arguments for e, drawn in parameter order from one generator.
std::vector<Value> randomInputs(const Expr& e, std::uint64_t seed);

/// |a - b| <= rel * max(1, |a|, |b|) element-wise, with equal lengths.
bool allClose(const std::vector<double>& a, const std::vector<double>& b, double rel);
double maxRelError(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace stratum::ir
