// C code generation for fully lowered programs.
//
// mapSeq/mapPar/mapVec/mapSeqUnroll in write position become loops (with
// `#pragma omp parallel for`, `#pragma omp simd` and `#pragma GCC unroll`);
// everything in read position is an index-arithmetic view. reduceSeq keeps a
// local accumulator, or accumulates in place when the accumulator is an array.
// toMem is the only allocator; buffers are t0, t1, ... and loop variables are
// named i<depth>. Loops with a single iteration are not emitted.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/ir/expr.hpp"

namespace stratum {

class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A C99 translation unit defining `void fnName(float* out, const float* in0, ...)`.
std::string emitC(const ir::Expr& program, const std::string& fnName = "kernel");
/// emitC plus a main() that fills the inputs from the shared generator seeded
/// with `seed` and prints every output element as "%.6e".
std::string emitHarness(const ir::Expr& program, std::uint64_t seed, const std::string& fnName = "kernel");

struct LoopHeader {
  int depth;
  int bound;
  std::string pragma;  // the pragma line directly above the loop, if any
};
/// Loop headers of emitted code in textual order.
std::vector<LoopHeader> loopHeaders(const std::string& source);
/// The first chain of nested loops of maximal length, outermost first.
std::vector<LoopHeader> deepestLoopChain(const std::string& source);

struct RunResult {
  bool ok = false;
  std::string log;  // compiler or runtime diagnostics when !ok
  std::vector<double> output;
};
/// Compiles a harness with `compiler -std=c99 -O2 -fopenmp` in workDir and runs it.
RunResult compileAndRun(const std::string& harness, const std::string& workDir, const std::string& compiler = "cc");

}  // namespace stratum
