"""Goldbach-Waring representation counts, the Mellin/Gamma check and the majorization probe."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .core import as_point, check_budget
from .errors import DomainError, GridResolutionError, ResourceLimitError
from .primes import PrimeTable, SubseqLabel, residue_subsequence
from .series import gamma_ref

SCHOOLBOOK_MAX = 4096
FFT_EXACT_LIMIT = 2**50  # float64 convolution keeps half-unit accuracy well below 2**53
ROUNDING_MARGIN = 0.25
DEFAULT_ENUM_BUDGET = 10**8


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 1:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


@dataclass(frozen=True)
class PowerSeriesTrunc:
    """Integer coefficients c_0..c_N of a power series cut at degree N."""

    N: int
    coefficients: np.ndarray
    k: int | None = None
    label: SubseqLabel | None = None

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.int64)
        if c.shape != (self.N + 1,):
            raise ValueError(f"expected {self.N + 1} coefficients, got {c.shape}")
        if np.any(c < 0):
            raise ValueError("coefficients must be non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coefficients)

    def __call__(self, x: float) -> float:
        """Evaluate sum c_n x^n for 0 <= x < 1."""
        idx = self.support()
        if idx.size == 0:
            return 0.0
        w = self.coefficients[idx].astype(np.float64)
        return math.fsum(w * np.exp(idx * math.log(x)))


@dataclass(frozen=True)
class RepTable:
    """Ordered-tuple counts r_{k,m}(n), 0 <= n <= N."""

    k: int | None
    m: int
    label: SubseqLabel | None
    N: int
    counts: np.ndarray = field(repr=False)

    @property
    def series(self) -> PowerSeriesTrunc:
        return PowerSeriesTrunc(self.N, self.counts, self.k, self.label)

    def __getitem__(self, n: int) -> int:
        return int(self.counts[n])

    def first_nonzero(self) -> int | None:
        nz = np.flatnonzero(self.counts)
        return int(nz[0]) if nz.size else None

    def to_csv(self) -> str:
        lines = ["n,count"]
        lines += [f"{n},{int(c)}" for n, c in enumerate(self.counts)]
        return "\n".join(lines) + "\n"

    def equals(self, other: "RepTable") -> bool:
        return self.N == other.N and bool(np.array_equal(self.counts, other.counts))


def _powers(table: PrimeTable, label: SubseqLabel, k: int, N: int) -> np.ndarray:
    """Sorted p^k <= N over the labeled subsequence."""
    if k < 1 or N < 0:
        raise ValueError("k >= 1 and N >= 0 required")
    root = _iroot(N, k)
    if table.limit < root:
        raise ValueError(f"table limit {table.limit} below N**(1/k) = {root}")
    seq = residue_subsequence(table, label).elements
    base = seq[seq <= root]
    return base**k


def gk_series(table: PrimeTable, label: SubseqLabel, k: int, N: int) -> PowerSeriesTrunc:
    """g_k = sum of x^(p^k) over the subsequence, cut at degree N."""
    c = np.zeros(N + 1, dtype=np.int64)
    c[_powers(table, label, k, N)] = 1
    return PowerSeriesTrunc(N, c, k, label)


def _convolve(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    bound = int(a.max(initial=0)) * int(b.sum())
    if N + 1 <= SCHOOLBOOK_MAX:
        if bound >= 2**63:
            raise OverflowError("representation count exceeds int64")
        return np.convolve(a, b)[: N + 1]
    if bound >= FFT_EXACT_LIMIT:
        raise OverflowError("representation count too large for exact transform convolution")
    raw = fftconvolve(a.astype(np.float64), b.astype(np.float64))[: N + 1]
    out = np.rint(raw)
    if np.max(np.abs(raw - out), initial=0.0) >= ROUNDING_MARGIN:
        raise OverflowError("transform convolution lost its half-unit rounding margin")
    return out.astype(np.int64)


def power_counts(g: PowerSeriesTrunc, m: int) -> RepTable:
    """Coefficients of g^m up to degree N by repeated convolution.

    Schoolbook (exact int64) up to SCHOOLBOOK_MAX coefficients, FFT above
    it with every coefficient checked to sit within 0.25 of an integer.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    check_budget(8 * 6 * (g.N + 1), "power_counts")
    acc = np.array(g.coefficients, dtype=np.int64)
    for _ in range(m - 1):
        acc = _convolve(acc, g.coefficients, g.N)
    return RepTable(g.k, m, g.label, g.N, acc)


def brute_force_counts(
    table: PrimeTable,
    label: SubseqLabel,
    k: int,
    m: int,
    N: int,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> RepTable:
    """Enumerate ordered m-tuples of subsequence primes with sum of k-th powers <= N."""
    if m < 1:
        raise ValueError("m must be >= 1")
    pw = _powers(table, label, k, N)
    counts = np.zeros(N + 1, dtype=np.int64)
    visited = 0

    def walk(depth: int, base: int):
        nonlocal visited
        room = N - base
        stop = int(np.searchsorted(pw, room, side="right"))
        if depth == 1:
            visited += stop
            if visited > budget:
                raise ResourceLimitError(f"enumeration exceeded budget of {budget} tuples")
            counts[base + pw[:stop]] += 1  # distinct targets, so fancy += is exact
            return
        for q in pw[:stop]:
            walk(depth - 1, base + int(q))

    walk(m, 0)
    return RepTable(k, m, label, N, counts)


def goldbach_scan(table: PrimeTable, N: int) -> list[int]:
    """Even n in [4, N] with no ordered two-prime representation."""
    if N < 4:
        raise ValueError("N must be >= 4")
    rep = power_counts(gk_series(table, SubseqLabel(0, 0), 1, N), 2)
    even = np.arange(4, N + 1, 2)
    return [int(n) for n in even[rep.counts[even] == 0]]


@dataclass(frozen=True)
class QuadSpec:
    """Composite Gauss-Legendre rule in u = ln t: ``panels`` per unit length of u."""

    panels: float = 4.0
    order: int = 16
    refine_tol: float = 1e-10
    max_doublings: int = 6


@dataclass(frozen=True)
class MellinReport:
    series_side: complex
    integral_side: complex
    residual: float
    panels: float
    converged: bool

    def to_dict(self, params: dict | None = None) -> dict:
        out = {
            "series_side": {"re": self.series_side.real, "im": self.series_side.imag},
            "integral_side": {"re": self.integral_side.real, "im": self.integral_side.imag},
            "residual": self.residual,
            "panels": self.panels,
            "converged": self.converged,
        }
        if params is not None:
            out["params"] = params
        return out


def _mellin_integral(pk: np.ndarray, sk: complex, panels: float, order: int) -> complex:
    """int_{-inf}^{inf} e^{u sk} sum_p exp(-p^k e^u) du, split at u = 0 (t = 1)."""
    count = pk.size
    u_lo = -(math.log(count) + 40.0) / sk.real  # integrand ~ count * e^{u Re sk} below
    u_hi = math.log(40.0 / float(pk[0])) + 1.0  # exp(-p^k e^u) < e^-40 above
    u_hi = max(u_hi, 1.0)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    total = 0j
    for a, b in ((u_lo, 0.0), (0.0, u_hi)):
        n_pan = max(1, math.ceil(panels * (b - a)))
        edges = np.linspace(a, b, n_pan + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        u = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        t = np.exp(u)
        inner = np.zeros(u.size)
        for lo in range(0, count, 2048):  # bound the node x prime matrix
            inner += np.exp(-np.outer(t, pk[lo : lo + 2048])).sum(axis=1)
        total += complex(np.sum(w * np.exp(sk * u) * inner))
    return total


def mellin_report(
    table: PrimeTable, label: SubseqLabel, k: int, s, quad: QuadSpec = QuadSpec()
) -> MellinReport:
    """Gamma(s/k) * sum p^-s against the Mellin integral of g_k(e^-t), same finite prime set.

    The integral is refined by doubling the panel density until two
    successive values agree to ``quad.refine_tol``; ``converged`` is False
    when the doubling budget runs out first.
    """
    s = as_point(s)
    if s.real <= 0:
        raise DomainError("Mellin identity needs Re(s) > 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    seq = residue_subsequence(table, label).elements
    if seq.size == 0:
        return MellinReport(0j, 0j, 0.0, quad.panels, True)
    sk = s / k
    pf = seq.astype(np.float64)
    series = gamma_ref(sk) * complex(np.sum(np.exp(-s * np.log(pf))))
    pk = pf**k
    panels = quad.panels
    value = _mellin_integral(pk, sk, panels, quad.order)
    converged = False
    for _ in range(quad.max_doublings):
        panels *= 2
        finer = _mellin_integral(pk, sk, panels, quad.order)
        delta = abs(finer - value)
        value = finer
        if delta <= quad.refine_tol * max(1.0, abs(value)):
            converged = True
            break
    return MellinReport(series, value, abs(series - value), panels, converged)


def mellin_residual(
    table: PrimeTable, label: SubseqLabel, k: int, s, quad: QuadSpec = QuadSpec()
) -> float:
    return mellin_report(table, label, k, s, quad).residual


def mellin_single_pass(
    table: PrimeTable, label: SubseqLabel, k: int, s, panels: float, order: int = 16
) -> float:
    """Residual for one fixed quadrature resolution (no refinement loop)."""
    s = as_point(s)
    seq = residue_subsequence(table, label).elements.astype(np.float64)
    if seq.size == 0:
        return 0.0
    series = gamma_ref(s / k) * complex(np.sum(np.exp(-s * np.log(seq))))
    return abs(series - _mellin_integral(seq**k, s / k, panels, order))


@dataclass(frozen=True)
class ProbeRow:
    x: float
    alpha: float
    threshold: float

    @property
    def exceeds(self) -> bool:
        return self.alpha > self.threshold


def majorization_probe(
    g: PowerSeriesTrunc, m: int, x_grid, h: float = 0.01, resolution: float = 30.0
) -> list[ProbeRow]:
    """Local exponent alpha(x) = -d ln g / d ln(1-x) by centered differences.

    The step is h in ln(1-x).  A bound g(x) <= C (1-x)^(-1/m) would keep
    alpha below 1/m near x = 1; rows report alpha next to that threshold.
    Raises GridResolutionError unless x^N stays below e^-resolution at the
    outer stencil point, so the cut at degree N cannot bias g.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    rows = []
    for x in x_grid:
        x = float(x)
        if not 0.0 < x < 1.0:
            raise DomainError(f"probe point {x} outside (0, 1)")
        y = math.log1p(-x)
        x_out = -math.expm1(y - h)
        if g.N * -math.log(x_out) < resolution:
            raise GridResolutionError(
                f"x={x}: x^N not negligible for N={g.N}; move x away from 1 or raise N"
            )
        x_in = -math.expm1(y + h)
        g_out, g_in = g(x_out), g(x_in)
        if g_out <= 0.0 or g_in <= 0.0:
            alpha = 0.0
        else:
            alpha = -(math.log(g_out) - math.log(g_in)) / (-2.0 * h)
        rows.append(ProbeRow(x, alpha, 1.0 / m))
    return rows


def probe_to_json(rows: list[ProbeRow], params: dict) -> str:
    body = {
        "params": params,
        "rows": [{"x": r.x, "alpha": r.alpha, "threshold": r.threshold, "exceeds": r.exceeds} for r in rows],
    }
    return json.dumps(body, sort_keys=True)
