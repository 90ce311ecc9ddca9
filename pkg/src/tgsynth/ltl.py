"""A small LTL evaluator over finite traces.

Formulas are built from atomic propositions, negation, conjunction, next
and until; ``eventually`` is ``true U phi``.  Evaluation uses the usual
finite-trace reading: ``X phi`` is false at the last position and ``phi U
psi`` needs ``psi`` to occur inside the trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union


@dataclass(frozen=True)
class Prop:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TrueF:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self) -> str:
        return f"!{self.arg}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Next:
    arg: "Formula"

    def __str__(self) -> str:
        return f"X {self.arg}"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        if isinstance(self.left, TrueF):
            return f"F {self.right}"
        return f"({self.left} U {self.right})"


Formula = Union[Prop, TrueF, Not, And, Next, Until]


def eventually(phi: Formula) -> Formula:
    return Until(TrueF(), phi)


def conj(*phis: Formula) -> Formula:
    if not phis:
        return TrueF()
    return reduce(And, phis)


def holds(phi: Formula, trace: Sequence[frozenset[str]], pos: int = 0) -> bool:
    """Whether ``phi`` holds at ``pos`` of a finite trace of label sets."""
    if not trace:
        raise ValueError("empty trace")
    memo: dict[tuple[int, int], bool] = {}

    def ev(f: Formula, j: int) -> bool:
        key = (id(f), j)
        if key in memo:
            return memo[key]
        if isinstance(f, TrueF):
            r = True
        elif isinstance(f, Prop):
            r = f.name in trace[j]
        elif isinstance(f, Not):
            r = not ev(f.arg, j)
        elif isinstance(f, And):
            r = ev(f.left, j) and ev(f.right, j)
        elif isinstance(f, Next):
            r = j + 1 < len(trace) and ev(f.arg, j + 1)
        elif isinstance(f, Until):
            r = False
            for k in range(j, len(trace)):
                if ev(f.right, k):
                    r = True
                    break
                if not ev(f.left, k):
                    break
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[key] = r
        return r

    return ev(phi, pos)


def sequence_formula(props: Sequence[str]) -> Formula:
    """``F(p1 & F(p2 & ... F pk)) & AND_i (!p_{i+1} U p_i)`` over ``props``."""
    if not props:
        raise ValueError("need at least one proposition")
    nested: Formula = eventually(Prop(props[-1]))
    for p in reversed(props[:-1]):
        nested = eventually(And(Prop(p), nested))
    orders = [Until(Not(Prop(b)), Prop(a)) for a, b in zip(props, props[1:])]
    return conj(nested, *orders)
