"""Strategy-driven rewriting of functional array programs."""

from ._core import (
    Applied,
    CodegenError,
    Expr,
    FuelExhausted,
    ParseError,
    ScriptError,
    TraceEvent,
    TypeError,
    apply,
    compile_and_run,
    emit_c,
    emit_harness,
    evaluate,
    load_program,
    max_rel_error,
    parse,
    programs,
    schedules,
)

__all__ = [
    "Applied",
    "CodegenError",
    "Expr",
    "FuelExhausted",
    "ParseError",
    "ScriptError",
    "TraceEvent",
    "TypeError",
    "apply",
    "compile_and_run",
    "emit_c",
    "emit_harness",
    "evaluate",
    "load_program",
    "max_rel_error",
    "parse",
    "programs",
    "schedules",
]
