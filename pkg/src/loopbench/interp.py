"""Evaluator for loop programs with an abstract-time cost model.

Evaluation is exact bigint arithmetic.  div and mod follow floor
semantics: the quotient rounds toward negative infinity and the
remainder takes the divisor's sign.

Every first-order operator application is charged abstract time: 5 units
for div and mod, 1 unit for everything else, constants and variable
reads included.  When an application produces a value whose magnitude
exceeds 2^64, the charge becomes the decimal digit count of the value
instead, squared for mul/div/mod (their work grows quadratically with
operand size), so that runs on fast-growing sequences pay for the bignum
arithmetic they cause.  Each unfolding step of a loop, loop2 or compr
recursion adds one unit of control overhead, which guarantees diverging
iterations exhaust the budget.  Producing a value with magnitude above
the value bound aborts the run instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .lang import Op, Program

CHECK_LIMIT = 100_000
VERIFY_LIMIT = 1_000_000
VALUE_BOUND = 10**285
BIG_VALUE_THRESHOLD = 2**64


class ErrorKind(Enum):
    TIMEOUT = "timeout"
    OVERFLOW = "overflow"
    DIV_BY_ZERO = "div_by_zero"


@dataclass(frozen=True)
class EvalConfig:
    per_call_limit: int = CHECK_LIMIT
    value_bound: int = VALUE_BOUND
    big_value_threshold: int = BIG_VALUE_THRESHOLD


DEFAULT_CONFIG = EvalConfig()
VERIFY_CONFIG = EvalConfig(per_call_limit=VERIFY_LIMIT)


class _Fail(Exception):
    def __init__(self, kind: ErrorKind):
        self.kind = kind


class Budget:
    """Remaining abstract time for one or more evaluator calls."""

    __slots__ = ("remaining",)

    def __init__(self, remaining: int):
        self.remaining = remaining

    def charge(self, cost: int) -> None:
        if cost > self.remaining:
            self.remaining = 0
            raise _Fail(ErrorKind.TIMEOUT)
        self.remaining -= cost


@dataclass(frozen=True)
class EvalOutcome:
    value: int | None
    cost: int
    error: ErrorKind | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


class EvalFailure(Exception):
    """Raised by helpers that require a fully successful run."""

    def __init__(self, kind: ErrorKind, index: int):
        super().__init__(f"evaluation failed with {kind.value} at index {index}")
        self.kind = kind
        self.index = index


_COSTLY = (Op.DIV, Op.MOD)
_QUADRATIC = (Op.MUL, Op.DIV, Op.MOD)


def _produce(op: Op, value: int, budget: Budget, cfg: EvalConfig) -> int:
    """Charge for one first-order application returning value."""
    magnitude = abs(value)
    if magnitude > cfg.value_bound:
        raise _Fail(ErrorKind.OVERFLOW)
    if magnitude > cfg.big_value_threshold:
        digits = len(str(magnitude))
        cost = digits * digits if op in _QUADRATIC else digits
    else:
        cost = 5 if op in _COSTLY else 1
    budget.charge(cost)
    return value


def _eval(p: Program, x: int, y: int, budget: Budget, cfg: EvalConfig) -> int:
    op = p.op
    if op == Op.ZERO:
        return _produce(op, 0, budget, cfg)
    if op == Op.ONE:
        return _produce(op, 1, budget, cfg)
    if op == Op.TWO:
        return _produce(op, 2, budget, cfg)
    if op == Op.X:
        return _produce(op, x, budget, cfg)
    if op == Op.Y:
        return _produce(op, y, budget, cfg)

    if op in (Op.ADD, Op.SUB, Op.MUL):
        a = _eval(p.args[0], x, y, budget, cfg)
        b = _eval(p.args[1], x, y, budget, cfg)
        if op == Op.ADD:
            v = a + b
        elif op == Op.SUB:
            v = a - b
        else:
            v = a * b
        return _produce(op, v, budget, cfg)

    if op in (Op.DIV, Op.MOD):
        a = _eval(p.args[0], x, y, budget, cfg)
        b = _eval(p.args[1], x, y, budget, cfg)
        if b == 0:
            raise _Fail(ErrorKind.DIV_BY_ZERO)
        v = a // b if op == Op.DIV else a % b
        return _produce(op, v, budget, cfg)

    if op == Op.COND:
        guard = _eval(p.args[0], x, y, budget, cfg)
        taken = p.args[1] if guard <= 0 else p.args[2]
        v = _eval(taken, x, y, budget, cfg)
        return _produce(op, v, budget, cfg)

    if op == Op.LOOP:
        f, a, b = p.args
        n = _eval(a, x, y, budget, cfg)
        acc = _eval(b, x, y, budget, cfg)
        for i in range(1, n + 1):
            budget.charge(1)
            acc = _eval(f, acc, i, budget, cfg)
        return acc

    if op == Op.LOOP2:
        f, g, a, b, c = p.args
        n = _eval(a, x, y, budget, cfg)
        u = _eval(b, x, y, budget, cfg)
        v = _eval(c, x, y, budget, cfg)
        if n <= 0:
            return u
        for _ in range(n - 1):
            budget.charge(1)
            u, v = _eval(f, u, v, budget, cfg), _eval(g, u, v, budget, cfg)
        # The final step only needs the first component.
        budget.charge(1)
        return _eval(f, u, v, budget, cfg)

    if op == Op.COMPR:
        f, a = p.args
        n = _eval(a, x, y, budget, cfg)

        def search(start: int) -> int:
            c = start
            while True:
                budget.charge(1)
                if _eval(f, c, 0, budget, cfg) <= 0:
                    return c
                c += 1

        cur = search(0)
        for _ in range(1, n + 1):
            budget.charge(1)
            cur = search(cur + 1)
        return cur

    raise AssertionError(f"unhandled operator {op}")


def evaluate(
    p: Program,
    x: int,
    y: int = 0,
    budget: Budget | None = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> EvalOutcome:
    """Evaluate p at (x, y) against a budget (a fresh one if not given)."""
    if budget is None:
        budget = Budget(cfg.per_call_limit)
    start = budget.remaining
    try:
        value = _eval(p, x, y, budget, cfg)
    except _Fail as failure:
        return EvalOutcome(None, start - budget.remaining, failure.kind)
    return EvalOutcome(value, start - budget.remaining)


def generate_seq(p: Program, n: int, cfg: EvalConfig = DEFAULT_CONFIG) -> list[EvalOutcome]:
    """Evaluate p at (0,0) .. (n-1,0), carrying unused budget forward.

    Call i is granted per_call_limit plus whatever earlier calls left
    unspent.  Generation stops at the first error, which is included as
    the final outcome.
    """
    outcomes: list[EvalOutcome] = []
    leftover = 0
    for i in range(n):
        budget = Budget(cfg.per_call_limit + leftover)
        outcome = evaluate(p, i, 0, budget, cfg)
        outcomes.append(outcome)
        if not outcome.ok:
            break
        leftover = budget.remaining
    return outcomes


def seq_values(p: Program, n: int, cfg: EvalConfig = DEFAULT_CONFIG) -> list[int]:
    """Values of the first n calls; raises EvalFailure if any call fails."""
    outcomes = generate_seq(p, n, cfg)
    bad = [o for o in outcomes if not o.ok]
    if bad:
        raise EvalFailure(bad[0].error, len(outcomes) - 1)
    return [o.value for o in outcomes]


def speed(p: Program, n: int, cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Total abstract time to generate the first n values of p."""
    outcomes = generate_seq(p, n, cfg)
    bad = [o for o in outcomes if not o.ok]
    if bad:
        raise EvalFailure(bad[0].error, len(outcomes) - 1)
    return sum(o.cost for o in outcomes)
