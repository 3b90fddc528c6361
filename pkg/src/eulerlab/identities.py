"""Splitting tree over prime subsequences and the Leibniz-division algebra."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import BaseSequence, SignSequence, TruncationPolicy, as_point
from .errors import DegenerateInputError, SingularFactorError
from .primes import PrimeTable, SubseqLabel, residue_subsequence
from .series import DEFAULT_POLICY, _sum_terms, alternating_eval

INTERLACE_MIN_TAIL = 8


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, SubseqLabel):
        return str(v)
    return v


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    inputs: dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "inputs": _jsonable(self.inputs),
            "lhs": _jsonable(complex(self.lhs)),
            "rhs": _jsonable(complex(self.rhs)),
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def split_children(label: SubseqLabel) -> tuple[SubseqLabel, SubseqLabel]:
    """Children (i+1, j) and (i+1, j + 2**i) of a tree node."""
    return SubseqLabel(label.i + 1, label.j), SubseqLabel(label.i + 1, label.j + label.stride)


@dataclass(frozen=True)
class SplitTree:
    depth: int
    nodes: tuple = field(init=False)

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        level = [SubseqLabel(0, 0)]
        nodes = list(level)
        for _ in range(self.depth):
            level = [child for node in level for child in split_children(node)]
            nodes.extend(level)
        object.__setattr__(self, "nodes", tuple(nodes))

    def leaves(self) -> list[SubseqLabel]:
        return [n for n in self.nodes if n.i == self.depth]

    def children(self, label: SubseqLabel) -> tuple[SubseqLabel, SubseqLabel]:
        if label.i >= self.depth:
            return ()
        return split_children(label)

    def leaf_indices(self, cutoff: int) -> dict[SubseqLabel, set[int]]:
        """Prime indices (1-based, <= cutoff) covered by each leaf."""
        out = {}
        for leaf in self.leaves():
            n_max = (cutoff - leaf.j) // leaf.stride
            out[leaf] = {leaf.index(n) for n in range(1, n_max + 1)}
        return out


def _node(table: PrimeTable, label: SubseqLabel, count: int | None) -> BaseSequence:
    return residue_subsequence(table, label, count)


def split_factorization_residual(
    table: PrimeTable,
    label: SubseqLabel,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    accelerated: bool = False,
) -> float:
    """|exp(D_node) - exp(-sum (-1)^n x_n) * exp(D_left)^2| at a tree node.

    Shared truncation: the node series and the alternating series use the
    node's first M = policy.max_terms elements and the left child uses the
    ones among them (every second element).  With ``accelerated`` the
    alternating factor is summed to convergence by alternating_eval instead,
    so the residual measures the node's truncation (it shrinks as M grows).
    """
    s = as_point(s)
    lhs, rhs = split_factorization_sides(table, label, s, policy, accelerated)
    return abs(lhs - rhs)


def split_factorization_sides(
    table: PrimeTable,
    label: SubseqLabel,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    accelerated: bool = False,
) -> tuple[complex, complex]:
    s = as_point(s)
    if policy.max_terms == 0:
        return 1 + 0j, 1 + 0j
    if accelerated:
        full = _node(table, label, None)
        node = full.head(policy.max_terms)
        alt = alternating_eval(full, SignSequence.alternating(1), s).value
    else:
        node = _node(table, label, min(policy.max_terms, _available(table, label)))
        alt = _sum_terms(node.elements, SignSequence.alternating(1), s)
    x = node.elements
    d_node = _sum_terms(x, SignSequence.constant(1.0), s)
    d_left = _sum_terms(x[1::2], SignSequence.constant(1.0), s)  # x_2, x_4, ... = left child
    lhs = cmath.exp(d_node)
    rhs = cmath.exp(-alt) * cmath.exp(d_left) ** 2
    return lhs, rhs


def _available(table: PrimeTable, label: SubseqLabel) -> int:
    return len(residue_subsequence(table, label))


def even_odd_quotient(
    table: PrimeTable, label: SubseqLabel, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> complex:
    """exp(sum_n x_{2n}^{-s}) / exp(sum_n x_{2n-1}^{-s}) = exp(sum_n (-1)^n x_n^{-s}).

    Evaluated through the accelerated alternating series, so Re(s) > 0 works.
    """
    s = as_point(s)
    node = _node(table, label, None)
    if len(node) == 0:
        return 1 + 0j
    report = alternating_eval(node, SignSequence.alternating(1), s, policy)
    return cmath.exp(report.value)


def leibniz_div(a: complex, b: complex) -> complex:
    """A . B := A / B."""
    if b == 0:
        raise SingularFactorError("Leibniz division by zero")
    return a / b


def assoc_defect(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    """(A.(B.C) - (A.B).C, (A/B)(C - 1/C))."""
    defect = leibniz_div(a, leibniz_div(b, c)) - leibniz_div(leibniz_div(a, b), c)
    closed = leibniz_div(a, b) * (c - leibniz_div(1, c))
    return defect, closed


def skew_bracket(a: complex, b: complex, sign: str = "-") -> complex:
    """[A, B] = A.B -/+ B.A."""
    if sign not in ("+", "-"):
        raise ValueError("sign is '+' or '-'")
    if a == 0 or b == 0:
        raise SingularFactorError("skew bracket of a zero argument")
    ab, ba = a / b, b / a
    return ab - ba if sign == "-" else ab + ba


def jacobi_defect(a: complex, b: complex, c: complex) -> tuple[complex, complex, complex]:
    """Cyclic sum of nested minus-brackets with two closed forms.

    Returns (lhs, derived, printed) where derived = -abc * S and
    printed = abc / (-S), S = 1/(a^2-b^2) + 1/(b^2-c^2) + 1/(c^2-a^2).
    Only ``derived`` equals ``lhs``; ``printed`` is kept for comparison.
    """
    a2, b2, c2 = a * a, b * b, c * c
    if a2 == b2 or b2 == c2 or c2 == a2:
        raise DegenerateInputError("squares of the arguments must be pairwise distinct")
    if 0 in (a, b, c):
        raise DegenerateInputError("arguments must be nonzero")
    lhs = (
        skew_bracket(skew_bracket(a, b), c)
        + skew_bracket(skew_bracket(b, c), a)
        + skew_bracket(skew_bracket(c, a), b)
    )
    S = 1 / (a2 - b2) + 1 / (b2 - c2) + 1 / (c2 - a2)
    derived = -a * b * c * S
    printed = a * b * c / (-S) if S != 0 else complex("inf")
    return lhs, derived, printed


def jacobi_scale(a: complex, b: complex, c: complex) -> float:
    """Magnitude of the individual bracket terms, the reference for relative error."""
    parts = []
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = skew_bracket(x, y)
        parts += [abs(inner / z), abs(z / inner)]
    return max(parts)


@dataclass(frozen=True)
class InterlaceResult:
    interlaced: bool
    offset: int | None  # merged-order position where strict alternation starts
    checked: int  # merged elements examined after the offset
    sufficient: bool  # at least INTERLACE_MIN_TAIL elements after the offset


def interlace_check(A: BaseSequence, B: BaseSequence, cutoff: int | None = None) -> InterlaceResult:
    """Finite-horizon test that A and B eventually alternate a, b, a, b, ...

    Both sequences are cut at a common value ``cutoff`` (default: the smaller
    of their last elements).  A tie between the two sequences breaks
    alternation.  The answer is only claimed up to the cutoff.
    """
    a, b = np.asarray(A.elements), np.asarray(B.elements)
    if cutoff is None:
        cutoff = min(int(a[-1]) if a.size else 0, int(b[-1]) if b.size else 0)
    a, b = a[a <= cutoff], b[b <= cutoff]
    if a.size == 0 or b.size == 0:
        return InterlaceResult(False, None, 0, False)
    values = np.concatenate([a, b])
    tags = np.concatenate([np.zeros(a.size, dtype=np.int8), np.ones(b.size, dtype=np.int8)])
    order = np.lexsort((tags, values))
    values, tags = values[order], tags[order]
    bad = np.flatnonzero((tags[1:] == tags[:-1]) | (values[1:] == values[:-1]))
    offset = 0 if bad.size == 0 else int(bad[-1]) + 1
    if offset < values.size and tags[offset] == 1:
        offset += 1  # alternation is read as A, B, A, B, ...
    checked = int(values.size - offset)
    sufficient = checked >= INTERLACE_MIN_TAIL
    return InterlaceResult(sufficient, offset, checked, sufficient)


def catalan(n: int) -> int:
    """C_n = binom(2n-2, n-1) / n (exact integer)."""
    if n < 1:
        raise ValueError("catalan index starts at 1")
    if n > 10_000:
        raise OverflowError("catalan index beyond the supported exact range")
    num = math.comb(2 * n - 2, n - 1)
    if num % n:
        raise ArithmeticError("non-integral Catalan value")  # cannot happen
    return num // n
