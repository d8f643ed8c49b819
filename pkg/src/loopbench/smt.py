"""Lowering problems to SMT-LIB scripts over UFNIA.

Each looping subprogram becomes a family of uninterpreted functions:
its pieces (body, bound, initial values), the recursive helpers that
unfold it, and a wrapper applying the helpers to the pieces.  First-order
context is expanded inline.  Function arities are minimized: a symbol
takes an x (resp. y) parameter exactly when its source subprogram
depends on that variable, while the recursive helpers always carry the
full loop state.  The two sides become unary functions small and fast,
and the script asserts the negation of their equality on non-negative
inputs, in one of several conjecture shapes.

div and mod in the emitted scripts are SMT-LIB's Euclidean operations,
which differ from the interpreter's floor semantics when a negative
operand is involved; the divergence is deliberate and documented rather
than patched around.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .lang import LOOPING_OPS, Op, Program, depends_on, looping_subprograms, to_text
from .oeis import ProblemRecord

Sexp = Union[str, tuple]

_BIN_TOKENS = {Op.ADD: "+", Op.SUB: "-", Op.MUL: "*", Op.DIV: "div", Op.MOD: "mod"}
_LEAF_TOKENS = {Op.ZERO: "0", Op.ONE: "1", Op.TWO: "2", Op.X: "x", Op.Y: "y"}

HEADER_TERMS = 20


def render(s: Sexp) -> str:
    if isinstance(s, str):
        return s
    return "(" + " ".join(render(x) for x in s) + ")"


@dataclass(frozen=True)
class LoweredDef:
    name: str
    params: tuple[str, ...]
    body: Sexp


@dataclass(frozen=True)
class Variant:
    kind: str  # "base" | "succ" | "twox" | "strong"
    k: int = 0
    appendix_twox: bool = False

    def label(self) -> str:
        if self.kind == "succ":
            return f"c{self.k}"
        if self.kind == "twox":
            return "c2x"
        return self.kind


BASE = Variant("base")


def parse_variant(text: str, appendix_twox: bool = False) -> Variant:
    """Variant from its CLI name: base, c1..c8, c2x, strong."""
    if text == "base":
        return Variant("base")
    if text == "c2x":
        return Variant("twox", appendix_twox=appendix_twox)
    if text == "strong":
        return Variant("strong")
    if text.startswith("c") and text[1:].isdigit():
        k = int(text[1:])
        if 1 <= k <= 8:
            return Variant("succ", k)
    raise ValueError(f"unknown conjecture variant {text!r}")


def _params_of(p: Program) -> tuple[str, ...]:
    params = []
    if depends_on(p, Op.X):
        params.append("x")
    if depends_on(p, Op.Y):
        params.append("y")
    return tuple(params)


def _apply(name: str, params: tuple[str, ...], argmap: dict[str, Sexp]) -> Sexp:
    """Application of a minimized-arity symbol; 0-ary symbols stay bare."""
    if not params:
        return name
    return (name,) + tuple(argmap[p] for p in params)


class _Lowerer:
    def __init__(self, index_of: dict[tuple[int, ...], int]):
        self.index_of = index_of
        self.defs: list[LoweredDef] = []

    def expr(self, q: Program, path: tuple[int, ...]) -> Sexp:
        """Inline expansion of first-order context; loops become wrappers."""
        if q.op in _LEAF_TOKENS:
            return _LEAF_TOKENS[q.op]
        if q.op in _BIN_TOKENS:
            return (
                _BIN_TOKENS[q.op],
                self.expr(q.args[0], path + (0,)),
                self.expr(q.args[1], path + (1,)),
            )
        if q.op == Op.COND:
            guard = self.expr(q.args[0], path + (0,))
            return (
                "ite",
                ("<=", guard, "0"),
                self.expr(q.args[1], path + (1,)),
                self.expr(q.args[2], path + (2,)),
            )
        wrapper, params = self.group(q, path)
        return _apply(wrapper, params, {"x": "x", "y": "y"})

    def group(self, sub: Program, path: tuple[int, ...]) -> tuple[str, tuple[str, ...]]:
        """Emit the definition family for one looping occurrence.

        Nested loops are lowered first, so their groups precede this one
        in the output.  Returns the wrapper symbol and its parameters.
        """
        i = self.index_of[path]
        if sub.op == Op.LOOP:
            return self._loop_group(sub, path, i)
        if sub.op == Op.LOOP2:
            return self._loop2_group(sub, path, i)
        return self._compr_group(sub, path, i)

    def _piece(self, name: str, q: Program, path: tuple[int, ...]) -> LoweredDef:
        return LoweredDef(name, _params_of(q), self.expr(q, path))

    def _loop_group(self, sub: Program, path: tuple[int, ...], i: int):
        f, a, b = sub.args
        pieces = [
            self._piece(f"f{i}", f, path + (0,)),
            self._piece(f"g{i}", a, path + (1,)),
            self._piece(f"h{i}", b, path + (2,)),
        ]
        f_params = pieces[0].params
        # u unfolds the loop: state is (remaining count x, accumulator y);
        # the body sees the accumulator as x and the iteration count as y.
        step = _apply(f"f{i}", f_params, {"x": (f"u{i}", ("-", "x", "1"), "y"), "y": "x"})
        u = LoweredDef(f"u{i}", ("x", "y"), ("ite", ("<=", "x", "0"), "y", step))
        wrapper_params = _params_of(sub)
        argmap = {"x": "x", "y": "y"}
        v_body = (
            f"u{i}",
            _apply(f"g{i}", pieces[1].params, argmap),
            _apply(f"h{i}", pieces[2].params, argmap),
        )
        v = LoweredDef(f"v{i}", wrapper_params, v_body)
        self.defs += pieces + [u, v]
        return f"v{i}", wrapper_params

    def _loop2_group(self, sub: Program, path: tuple[int, ...], i: int):
        f, g, a, b, c = sub.args
        pieces = [
            self._piece(f"f{i}", f, path + (0,)),
            self._piece(f"g{i}", g, path + (1,)),
            self._piece(f"h{i}", a, path + (2,)),
            self._piece(f"i{i}", b, path + (3,)),
            self._piece(f"j{i}", c, path + (4,)),
        ]
        rec = {
            "x": (f"u{i}", ("-", "x", "1"), "y", "z"),
            "y": (f"v{i}", ("-", "x", "1"), "y", "z"),
        }
        u = LoweredDef(
            f"u{i}",
            ("x", "y", "z"),
            ("ite", ("<=", "x", "0"), "y", _apply(f"f{i}", pieces[0].params, rec)),
        )
        v = LoweredDef(
            f"v{i}",
            ("x", "y", "z"),
            ("ite", ("<=", "x", "0"), "z", _apply(f"g{i}", pieces[1].params, rec)),
        )
        wrapper_params = _params_of(sub)
        argmap = {"x": "x", "y": "y"}
        w_body = (
            f"u{i}",
            _apply(f"h{i}", pieces[2].params, argmap),
            _apply(f"i{i}", pieces[3].params, argmap),
            _apply(f"j{i}", pieces[4].params, argmap),
        )
        w = LoweredDef(f"w{i}", wrapper_params, w_body)
        self.defs += pieces + [u, v, w]
        return f"w{i}", wrapper_params

    def _compr_group(self, sub: Program, path: tuple[int, ...], i: int):
        f, a = sub.args
        pieces = [
            self._piece(f"f{i}", f, path + (0,)),
            self._piece(f"g{i}", a, path + (1,)),
        ]
        # t searches upward from its argument for a body value <= 0.
        test = _apply(f"f{i}", pieces[0].params, {"x": "x", "y": "0"})
        t = LoweredDef(
            f"t{i}",
            ("x",),
            ("ite", ("<=", test, "0"), "x", (f"t{i}", ("+", "x", "1"))),
        )
        u = LoweredDef(
            f"u{i}",
            ("x",),
            (
                "ite",
                ("<=", "x", "0"),
                (f"t{i}", "0"),
                (f"t{i}", ("+", (f"u{i}", ("-", "x", "1")), "1")),
            ),
        )
        wrapper_params = _params_of(sub)
        v_body = (f"u{i}", _apply(f"g{i}", pieces[1].params, {"x": "x", "y": "y"}))
        v = LoweredDef(f"v{i}", wrapper_params, v_body)
        self.defs += pieces + [t, u, v]
        return f"v{i}", wrapper_params


def lower(small: Program, fast: Program) -> tuple[list[LoweredDef], list[LoweredDef]]:
    """Definition lists for the two sides, in emission order.

    Loop indices are assigned in discovery (preorder) order, small side
    first; each side's definition groups are emitted innermost-first so
    every symbol is defined before use, ending with the side's top-level
    unary function.
    """
    sides = []
    next_index = 0
    for name, prog in (("small", small), ("fast", fast)):
        if depends_on(prog, Op.Y):
            raise ValueError(f"{name} program depends on y at top level")
        index_of = {}
        for _, loop_path in looping_subprograms(prog):
            index_of[loop_path] = next_index
            next_index += 1
        lowerer = _Lowerer(index_of)
        body = lowerer.expr(prog, ())
        lowerer.defs.append(LoweredDef(name, ("x",), body))
        sides.append(lowerer.defs)
    return sides[0], sides[1]


def _not_equal_at(arg: Sexp) -> Sexp:
    return ("not", ("=", ("small", arg), ("fast", arg)))


def conjecture(variant: Variant) -> Sexp:
    """Negated equality conjecture: a non-negative witness exists."""
    if variant.kind == "base" or (variant.kind == "succ" and variant.k == 0):
        claim = _not_equal_at("c")
    elif variant.kind == "succ":
        disjuncts = []
        for i in range(variant.k, -1, -1):
            arg: Sexp = ("+", "c", str(i)) if i > 0 else "c"
            disjuncts.append(_not_equal_at(arg))
        claim = ("or",) + tuple(disjuncts)
    elif variant.kind == "twox":
        even: Sexp = ("*", "c", "2")
        if variant.appendix_twox:
            odd: Sexp = ("*", "2", ("+", "c", "1"))
        else:
            odd = ("+", ("*", "c", "2"), "1")
        claim = ("or", _not_equal_at(even), _not_equal_at(odd))
    elif variant.kind == "strong":
        prior = (
            "forall",
            (("d", "Int"),),
            (
                "=>",
                ("and", ("<=", "0", "d"), ("<", "d", "c")),
                ("=", ("small", "d"), ("fast", "d")),
            ),
        )
        return (
            "exists",
            (("c", "Int"),),
            ("and", (">=", "c", "0"), prior, _not_equal_at("c")),
        )
    else:
        raise ValueError(f"unknown variant kind {variant.kind!r}")
    return ("exists", (("c", "Int"),), ("and", (">=", "c", "0"), claim))


@dataclass(frozen=True)
class SmtScript:
    header: tuple[str, ...]
    logic: str
    declarations: tuple[str, ...]
    assertions: tuple[str, ...]
    conjecture: str

    def text(self) -> str:
        lines = list(self.header)
        lines.append(self.logic)
        lines.extend(self.declarations)
        lines.extend(self.assertions)
        lines.append(self.conjecture)
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"


def _declaration(d: LoweredDef) -> str:
    doms = " ".join("Int" for _ in d.params)
    return f"(declare-fun {d.name} ({doms}) Int)"


def _assertion(d: LoweredDef) -> str:
    if not d.params:
        return render(("assert", ("=", d.name, d.body)))
    binders = tuple((p, "Int") for p in d.params)
    head = (d.name,) + d.params
    return render(("assert", ("forall", binders, ("=", head, d.body))))


def emit(problem: ProblemRecord, variant: Variant = BASE) -> SmtScript:
    """Full SMT-LIB script for one problem under one conjecture variant."""
    small_defs, fast_defs = lower(problem.small, problem.fast)
    defs = small_defs + fast_defs
    header = (
        f";; sequence(s): {problem.id}",
        f";; terms: {' '.join(str(t) for t in problem.terms[:HEADER_TERMS])}",
        f";; small program: {to_text(problem.small)}",
        f";; fast program: {to_text(problem.fast)}",
    )
    declarations = tuple(_declaration(d) for d in sorted(defs, key=lambda d: d.name))
    assertions = tuple(_assertion(d) for d in defs)
    conj = render(("assert", conjecture(variant)))
    return SmtScript(header, "(set-logic UFNIA)", declarations, assertions, conj)


def export_all(
    problems: list[ProblemRecord],
    outdir: str | Path,
    variant: Variant = BASE,
) -> list[tuple[str, str]]:
    """Write one .smt2 per non-refuted problem plus an index manifest.

    Returns the (id, filename) index.  Output is deterministic: problems
    are sorted by id and the emitter is pure.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    index: list[tuple[str, str]] = []
    for problem in sorted(problems, key=lambda p: p.id):
        if problem.status == "refuted":
            continue
        filename = f"{problem.id}.smt2"
        (outdir / filename).write_text(emit(problem, variant).text())
        index.append((problem.id, filename))
    (outdir / "index.tsv").write_text(
        "".join(f"{pid}\t{fname}\n" for pid, fname in index)
    )
    return index
