"""Loop-program benchmark toolkit.

Parse and print a small loop language, evaluate programs under an
abstract time budget, group OEIS solutions into equivalence problems,
verify and filter them, and export SMT-LIB conjectures for inductive
theorem provers.
"""

from .lang import (
    Op,
    ParseError,
    Program,
    compare,
    depends_on,
    order_key,
    parse,
    size,
    to_text,
)
from .interp import (
    Budget,
    ErrorKind,
    EvalConfig,
    EvalFailure,
    EvalOutcome,
    evaluate,
    generate_seq,
    seq_values,
    speed,
)
from .oeis import (
    ProblemRecord,
    SequenceRecord,
    SolutionRecord,
    build_problems,
    covers,
    load_problems,
    load_solutions,
    load_stripped,
    save_problems,
)
from .verify import VerifyReport, verify100, verify_all
from .induction import classify, classify_all, select_top_loops
from .smt import SmtScript, Variant, emit, export_all, parse_variant
from .harness import RunResult, SolverSpec, aggregate, run_campaign

__version__ = "0.1.0"

__all__ = [
    "Op",
    "ParseError",
    "Program",
    "compare",
    "depends_on",
    "order_key",
    "parse",
    "size",
    "to_text",
    "Budget",
    "ErrorKind",
    "EvalConfig",
    "EvalFailure",
    "EvalOutcome",
    "evaluate",
    "generate_seq",
    "seq_values",
    "speed",
    "ProblemRecord",
    "SequenceRecord",
    "SolutionRecord",
    "build_problems",
    "covers",
    "load_problems",
    "load_solutions",
    "load_stripped",
    "save_problems",
    "VerifyReport",
    "verify100",
    "verify_all",
    "classify",
    "classify_all",
    "select_top_loops",
    "SmtScript",
    "Variant",
    "emit",
    "export_all",
    "parse_variant",
    "RunResult",
    "SolverSpec",
    "aggregate",
    "run_campaign",
    "__version__",
]
