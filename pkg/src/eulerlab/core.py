"""Shared value types: base sequences, sign sequences, truncation policy, reports."""

from __future__ import annotations

import cmath
import math
import os
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError

CHUNK = 1 << 20
DEFAULT_MEMORY_BUDGET = 2 << 30


def as_point(s) -> complex:
    """Coerce ``s`` to a finite complex number."""
    try:
        z = complex(s)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a complex point: {s!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite point s={z}")
    return z


def memory_budget() -> int:
    """Byte budget from ``EULERLAB_MAX_MEMORY`` (plain bytes or K/M/G suffix)."""
    raw = os.environ.get("EULERLAB_MAX_MEMORY", "").strip()
    if not raw:
        return DEFAULT_MEMORY_BUDGET
    m = re.fullmatch(r"(\d+(?:\.\d+)?)\s*([kKmMgG]?)[bB]?", raw)
    if m is None:
        raise ValueError(f"cannot parse EULERLAB_MAX_MEMORY={raw!r}")
    scale = {"": 1, "k": 1 << 10, "m": 1 << 20, "g": 1 << 30}[m.group(2).lower()]
    return int(float(m.group(1)) * scale)


def check_budget(nbytes: int, what: str) -> None:
    budget = memory_budget()
    if nbytes > budget:
        raise ResourceLimitError(
            f"{what} needs ~{nbytes / 2**20:.0f} MiB, budget is {budget / 2**20:.0f} MiB"
        )


def neg_power(a: np.ndarray, s: complex) -> np.ndarray:
    """Elementwise a**(-s); real arithmetic when s is real."""
    la = np.log(np.asarray(a, dtype=np.float64))
    if s.imag == 0.0:
        return np.exp(-s.real * la)
    return np.exp(-s * la)


@dataclass(frozen=True)
class BaseSequence:
    """Strictly increasing positive integers supporting a series or product.

    ``finite`` marks a complete (explicit) set; otherwise ``elements`` is a
    prefix of an infinite sequence and evaluators attach tail bounds.
    ``prime_density`` is the asymptotic share of all primes the sequence
    holds (1 for the primes, 2**-i for a depth-i residue subsequence).
    """

    elements: np.ndarray
    origin: str = "explicit"
    finite: bool = True
    prime_density: float | None = None

    def __post_init__(self):
        arr = np.asarray(self.elements, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("elements must be one-dimensional")
        if arr.size and arr[0] < 1:
            raise ValueError("elements must be >= 1")
        if arr.size > 1 and not np.all(np.diff(arr) > 0):
            raise ValueError("elements must be strictly increasing")
        arr.setflags(write=False)
        object.__setattr__(self, "elements", arr)

    def __len__(self) -> int:
        return int(self.elements.size)

    @classmethod
    def naturals(cls, count: int) -> "BaseSequence":
        return cls(np.arange(1, count + 1, dtype=np.int64), "naturals", finite=False)

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "BaseSequence":
        return cls(np.asarray(list(values), dtype=np.int64), "explicit", finite=True)

    @property
    def euler_admissible(self) -> bool:
        return self.elements.size == 0 or int(self.elements[0]) >= 2

    def head(self, count: int) -> "BaseSequence":
        count = min(count, len(self))
        finite = self.finite and count == len(self)
        return BaseSequence(self.elements[:count], self.origin, finite, self.prime_density)


@dataclass(frozen=True)
class SignSequence:
    """Coefficients l_1, l_2, ... in [-1, 1].

    kinds: ``constant`` (l_n = c), ``alternating`` (l_n = sigma*(-1)**n),
    ``tail_alternating`` (1 before index N, sigma*(-1)**n from N on) and
    ``explicit`` (given values; zero past the end of the list).
    """

    kind: str = "constant"
    c: float = 1.0
    sigma: int = 1
    N: int = 1
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("constant", "alternating", "tail_alternating", "explicit"):
            raise ValueError(f"unknown sign kind {self.kind!r}")
        if self.kind == "constant" and not -1.0 <= self.c <= 1.0:
            raise ValueError("constant sign must lie in [-1, 1]")
        if self.kind in ("alternating", "tail_alternating") and self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        if self.kind == "tail_alternating" and self.N < 1:
            raise ValueError("switch index N must be >= 1")
        if self.kind == "explicit":
            vals = tuple(float(v) for v in self.values)
            if any(abs(v) > 1.0 for v in vals):
                raise ValueError("explicit signs must lie in [-1, 1]")
            object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, c: float = 1.0) -> "SignSequence":
        return cls("constant", c=float(c))

    @classmethod
    def alternating(cls, sigma: int = 1) -> "SignSequence":
        return cls("alternating", sigma=sigma)

    @classmethod
    def tail_alternating(cls, N: int, sigma: int = 1) -> "SignSequence":
        return cls("tail_alternating", sigma=sigma, N=N)

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "SignSequence":
        return cls("explicit", values=tuple(values))

    def segment(self, start: int, count: int) -> np.ndarray:
        """l_n for n = start, ..., start + count - 1 (1-based)."""
        n = np.arange(start, start + count, dtype=np.int64)
        if self.kind == "constant":
            return np.full(count, self.c)
        parity = np.where(n % 2 == 0, 1.0, -1.0) * self.sigma
        if self.kind == "alternating":
            return parity
        if self.kind == "tail_alternating":
            return np.where(n < self.N, 1.0, parity)
        vals = np.zeros(count)
        lo, hi = start - 1, min(start - 1 + count, len(self.values))
        if hi > lo:
            vals[: hi - lo] = self.values[lo:hi]
        return vals

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    @property
    def eventually_alternating(self) -> bool:
        return self.kind in ("alternating", "tail_alternating")

    @property
    def support(self) -> int | None:
        """Number of possibly nonzero terms, None when unbounded."""
        if self.kind == "explicit":
            return len(self.values)
        if self.kind == "constant" and self.c == 0.0:
            return 0
        return None

    def tail_moment(self, k: int) -> float:
        """Average of l_n**k far out in the sequence."""
        if self.kind == "constant":
            return self.c**k
        if self.eventually_alternating:
            return 1.0 if k % 2 == 0 else 0.0
        return 0.0

    @property
    def max_abs(self) -> float:
        if self.kind == "constant":
            return abs(self.c)
        if self.kind == "explicit":
            return max((abs(v) for v in self.values), default=0.0)
        return 1.0


@dataclass(frozen=True)
class TruncationPolicy:
    """Stop after ``max_terms`` terms or once the tail bound drops below
    ``target_tail``, whichever comes first.  ``tail_model`` adds a
    prime-counting estimate of the omitted tail for prime-supported sums."""

    max_terms: int = 10**6
    target_tail: float = 1e-10
    tail_model: bool = False

    def __post_init__(self):
        if self.max_terms < 0:
            raise ValueError("max_terms must be non-negative")
        if not self.target_tail >= 0.0:
            raise ValueError("target_tail must be non-negative")

    def doubled(self) -> "TruncationPolicy":
        return TruncationPolicy(2 * self.max_terms, self.target_tail, self.tail_model)


@dataclass(frozen=True)
class EvalReport:
    value: complex
    terms_used: int
    tail_bound: float
    converged: bool
    notes: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        v = complex(self.value)
        return {
            "value": {"re": v.real, "im": v.imag},
            "terms_used": int(self.terms_used),
            "tail_bound": float(self.tail_bound),
            "converged": bool(self.converged),
        }


def chunks(total: int, size: int = CHUNK) -> Iterator[tuple[int, int]]:
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)
