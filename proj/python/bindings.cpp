#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stratum/codegen.hpp"
#include "stratum/corpus.hpp"
#include "stratum/ir/interp.hpp"
#include "stratum/ir/syntax.hpp"
#include "stratum/scheduling.hpp"
#include "stratum/script.hpp"

namespace py = pybind11;
using namespace stratum;

namespace {

// ir::Expr is a shared_ptr to an immutable node; expose it as a value.
struct PyExpr {
  ir::Expr e;
};

struct Applied {
  bool ok = false;
  PyExpr program;
  std::string failure;
  StepCounts counts;
  std::vector<TraceEvent> trace;
};

Applied applyStrategy(const std::string& strategy, const PyExpr& p, bool trace) {
  const ir::Expr& e = p.e;
  Strat s = resolveStrategy(strategy);
  Outcome out = [&] {
    py::gil_scoped_release release;
    return run(s, e, trace);
  }();
  Applied a;
  a.ok = out.result.ok();
  if (a.ok)
    a.program = {out.result.program()};
  else
    a.failure = out.result.failed().render();
  a.counts = std::move(out.counts);
  a.trace = std::move(out.trace);
  return a;
}

std::vector<double> evaluate(const PyExpr& p, std::uint64_t seed) {
  return ir::flatten(ir::eval(p.e, ir::randomInputs(p.e, seed)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Strategy-driven rewriting of functional array programs";

  py::register_exception<ir::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ir::TypeError>(m, "TypeError", PyExc_TypeError);
  py::register_exception<ScriptError>(m, "ScriptError", PyExc_ValueError);
  py::register_exception<FuelExhausted>(m, "FuelExhausted", PyExc_RuntimeError);
  py::register_exception<CodegenError>(m, "CodegenError", PyExc_RuntimeError);

  py::class_<PyExpr>(m, "Expr")
      .def("__str__", [](const PyExpr& p) { return ir::print(p.e); })
      .def("__repr__", [](const PyExpr& p) { return "<Expr " + ir::print(p.e) + ">"; })
      .def_property_readonly("type", [](const PyExpr& p) { return ir::renderType(ir::typeCheck(p.e)); })
      .def("alpha_eq", [](const PyExpr& a, const PyExpr& b) { return ir::alphaEq(a.e, b.e); });

  py::class_<TraceEvent>(m, "TraceEvent")
      .def_readonly("rule", &TraceEvent::rule)
      .def_readonly("path", &TraceEvent::path)
      .def_readonly("committed", &TraceEvent::committed);

  py::class_<Applied>(m, "Applied")
      .def_readonly("ok", &Applied::ok)
      .def_property_readonly("program", [](const Applied& a) -> py::object {
        return a.ok ? py::cast(a.program) : py::none();
      })
      .def_readonly("failure", &Applied::failure)
      .def_property_readonly("total_steps", [](const Applied& a) { return a.counts.total; })
      .def_property_readonly("committed_steps", [](const Applied& a) { return a.counts.committed; })
      .def_property_readonly("per_rule", [](const Applied& a) { return a.counts.perRule; })
      .def_readonly("trace", &Applied::trace);

  m.def("parse", [](const std::string& src, const ir::SizeBindings& sizes) { return PyExpr{ir::parseProgram(src, sizes).main}; },
        py::arg("source"), py::arg("sizes") = ir::SizeBindings{});
  m.def("load_program", [](const std::string& name, const ir::SizeBindings& sizes) { return PyExpr{loadProgram(name, sizes).main}; },
        py::arg("name"), py::arg("sizes") = ir::SizeBindings{}, "Corpus program by name, or a .rise file path");
  m.def("programs", [] {
    std::vector<std::string> out;
    for (const auto& p : corpus()) out.push_back(p.name);
    return out;
  });
  m.def("schedules", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : allSchedules()) out.emplace_back(s.name, s.program);
    return out;
  }, "(schedule, program) pairs");
  m.def("apply", &applyStrategy, py::arg("strategy"), py::arg("program"), py::arg("trace") = false,
        "Run a schedule name, shipped script or script text on a program");
  m.def("evaluate", &evaluate, py::arg("program"), py::arg("seed") = 42,
        "Interpret on the seeded random inputs; returns the flattened result");
  m.def("max_rel_error", &ir::maxRelError);
  m.def("emit_c", [](const PyExpr& p, const std::string& fn) { return emitC(p.e, fn); }, py::arg("program"),
        py::arg("fn_name") = "kernel");
  m.def("emit_harness", [](const PyExpr& p, std::uint64_t seed) { return emitHarness(p.e, seed); }, py::arg("program"),
        py::arg("seed") = 42);
  m.def("compile_and_run", [](const std::string& harness, const std::string& dir) {
    RunResult r = compileAndRun(harness, dir);
    if (!r.ok) throw std::runtime_error(r.log);
    return r.output;
  }, py::arg("harness"), py::arg("work_dir"));
}
