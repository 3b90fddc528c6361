"""Euler products: signed, general-factor, continued (Re(s) > 1/2) and scans."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    BaseSequence,
    EvalReport,
    SignSequence,
    TruncationPolicy,
    as_point,
    chunks,
    neg_power,
)
from .errors import DomainError, SingularFactorError
from .primes import PrimeTable, nth_prime
from .series import (
    DEFAULT_POLICY,
    _first_index_below,
    _model_cut,
    alternating_eval,
    prime_tail_model,
    prime_zeta_direct,
    prime_zeta_mobius,
    tail_model_error,
    zeta_ref,
)

SERIES_RADIUS = 0.5
CORRECTION_SERIES_RADIUS = 0.25


def log1m(x: np.ndarray) -> np.ndarray:
    """log(1 - x) elementwise, accurate for small |x| (complex or real)."""
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        out = np.empty_like(x, dtype=float)
        small = np.abs(x) < SERIES_RADIUS
        out[small] = np.log1p(-x[small])
        out[~small] = np.log(1.0 - x[~small])
        return out
    xr, xi = x.real, x.imag
    small = np.abs(x) < SERIES_RADIUS
    out = np.log(1.0 - x)
    re = 0.5 * np.log1p(-2.0 * xr[small] + xr[small] ** 2 + xi[small] ** 2)
    out[small] = re + 1j * np.arctan2(-xi[small], 1.0 - xr[small])
    return out


def log_correction(x: np.ndarray) -> np.ndarray:
    """-x - log(1 - x) = x^2/2 + x^3/3 + ..., the log of exp(-x)/(1 - x).

    The leading cancellation is removed explicitly (series on |x| <= 1/4).
    """
    x = np.asarray(x)
    out = -x - log1m(x)
    small = np.abs(x) <= CORRECTION_SERIES_RADIUS
    if np.any(small):
        xs = x[small]
        acc = np.zeros_like(xs)
        for k in range(32, 1, -1):
            acc = acc * xs + 1.0 / k
        out[small] = acc * xs * xs
    return out


def _reduce(parts: list) -> complex:
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _check_factors(one_minus: np.ndarray) -> None:
    # zero to working precision counts: rounding cannot tell 1e-16 from 0 here
    if np.any(np.abs(one_minus) <= 8.0 * np.finfo(float).eps):
        raise SingularFactorError("a factor 1 - x vanished")


# -- signed Euler products ---------------------------------------------------

def _model_log_tail(kernel_moments, s: complex, cut: float, density: float) -> complex:
    """sum_k w_k * P_{>cut}(k s) from the prime-count model; w_k from kernel_moments(k)."""
    total = 0j
    k = 1
    while True:
        w = kernel_moments(k)
        if k * s.real > 1.0 and w:
            term = w * prime_tail_model(k * s, cut, density)
            total += term
            if abs(term) < 1e-20:
                break
        if cut ** (1.0 - k * s.real) < 1e-22:
            break
        k += 1
    return total


def euler_product_eval(
    A: BaseSequence, l: SignSequence, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> EvalReport:
    """prod_n 1/(1 - l_n a_n**(-s)), accumulated as sum_n -log(1 - l_n a_n**(-s)).

    The omitted log-tail is bounded with |log(1-x)| < 3|x|/2.
    """
    s = as_point(s)
    if not A.euler_admissible:
        raise DomainError("Euler products need all a_n >= 2")
    if policy.max_terms == 0:
        raise ValueError("euler_product_eval needs max_terms >= 1")
    sigma = s.real
    m = min(policy.max_terms, len(A))
    support = l.support
    if support is not None:
        m = min(m, support)
    complete = (A.finite and m == len(A)) or (support is not None and m == support)
    amp = l.max_abs
    use_model = False
    if not complete:
        if sigma <= 1.0:
            raise DomainError("direct Euler product evaluation needs Re(s) > 1")

        def log_tail(a):
            return 1.5 * amp * a ** (1.0 - sigma) / (sigma - 1.0)

        m = min(m, _first_index_below(A.elements, log_tail, policy.target_tail / 4.0))
        use_model = (
            policy.tail_model
            and A.prime_density is not None
            and (l.is_constant or l.eventually_alternating)
            and log_tail(float(A.elements[m - 1])) > policy.target_tail / 4.0
        )
        if use_model:
            m = min(m, len(A) - 1)

    parts = []
    for lo, hi in chunks(m):
        x = l.segment(lo + 1, hi - lo) * neg_power(A.elements[lo:hi], s)
        _check_factors(1.0 - x)
        parts.append(complex(-np.sum(log1m(x))))
    log_value = _reduce(parts)
    notes = ()
    if complete:
        tau = 0.0
    elif use_model:
        cut = _model_cut(A.elements, m)
        log_value += _model_log_tail(lambda k: l.tail_moment(k) / k, s, cut, A.prime_density)
        tau = 1.5 * tail_model_error(sigma, cut, A.prime_density)
        notes = ("prime-count tail model",)
    else:
        tau = 1.5 * amp * float(A.elements[m - 1]) ** (1.0 - sigma) / (sigma - 1.0)
    value = complex(np.exp(log_value))
    tail = abs(value) * math.expm1(tau)
    return EvalReport(value, m, tail, tail <= policy.target_tail, notes)


# -- general factors -----------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceParams:
    C: float
    delta: float
    lambda_: float


@dataclass(frozen=True)
class GeneralFactor:
    """g(x) = sum_k coefficients[k-1] * x**k, a truncated power series with g(0) = 0.

    ``disc_radius`` declares where 1 - g must stay nonzero; construction checks
    a polar sample grid of that disc.
    """

    coefficients: tuple
    disc_radius: float = 0.5

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs or all(c == 0.0 for c in coeffs):
            raise ValueError("g must have a nonzero coefficient")
        object.__setattr__(self, "coefficients", coeffs)
        r = np.linspace(0.0, self.disc_radius, 64)[:, None]
        theta = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)[None, :]
        grid = (r * np.exp(1j * theta)).ravel()
        if np.min(np.abs(1.0 - self(grid))) < 1e-9:
            raise ValueError(f"1 - g(x) vanishes on |x| <= {self.disc_radius}")

    @classmethod
    def parse(cls, text: str, disc_radius: float = 0.5) -> "GeneralFactor":
        """'0,1' -> g(x) = x^2 (comma separated coefficients of x, x^2, ...)."""
        return cls(tuple(float(t) for t in text.split(",")), disc_radius)

    def __call__(self, x):
        x = np.asarray(x)
        acc = np.zeros_like(x, dtype=complex if np.iscomplexobj(x) else float)
        for c in reversed(self.coefficients):
            acc = (acc + c) * x
        return acc

    @property
    def lowest_degree(self) -> int:
        return next(k for k, c in enumerate(self.coefficients, start=1) if c != 0.0)

    @property
    def gap_degree(self) -> int | None:
        """Smallest degree >= 2 with a nonzero coefficient (m in 1 - l1 x - sum_{i>=m})."""
        return next((k for k, c in enumerate(self.coefficients, start=1) if k >= 2 and c != 0.0), None)

    @property
    def linear(self) -> float:
        return self.coefficients[0]

    def regularizer(self, x):
        """h(x) = (g(x) - l1 x)/(1 - l1 x), so that (1 - g)/(1 - l1 x) = 1 - h."""
        x = np.asarray(x)
        return (self(x) - self.linear * x) / (1.0 - self.linear * x)


def derive_convergence_params(g: GeneralFactor, delta: float = 0.5, regularized: bool = False) -> ConvergenceParams:
    """lambda = lowest degree; C = 1.1 * max |g(x)|/|x|**lambda over a grid of |x| <= delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if regularized:
        lam = g.gap_degree
        if lam is None:
            raise ValueError("g has no terms of degree >= 2")
        func = g.regularizer
    else:
        lam = g.lowest_degree
        func = g
    r = np.linspace(delta / 256, delta, 256)[:, None]
    theta = np.linspace(0.0, 2.0 * math.pi, 128, endpoint=False)[None, :]
    x = (r * np.exp(1j * theta)).ravel()
    ratio = np.abs(func(x)) / np.abs(x) ** lam
    return ConvergenceParams(1.1 * float(np.max(ratio)), delta, float(lam))


def general_product_eval(
    A: BaseSequence,
    g: GeneralFactor,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    regularized: bool = False,
    l: SignSequence | None = None,
) -> EvalReport:
    """prod_n 1/(1 - g(l_n a_n**(-s))) for Re(s) > 1/lambda.

    ``regularized`` evaluates prod_n (1 - l1 x_n)/(1 - g(x_n)) instead, the
    ratio to the plain linear product, which converges for Re(s) > 1/m with m
    the gap degree of g.
    """
    s = as_point(s)
    if not A.euler_admissible:
        raise DomainError("Euler products need all a_n >= 2")
    if policy.max_terms == 0:
        raise ValueError("general_product_eval needs max_terms >= 1")
    params = derive_convergence_params(g, regularized=regularized)
    lam, C = params.lambda_, params.C
    sigma = s.real
    signs = l if l is not None else SignSequence.constant(1.0)
    m = min(policy.max_terms, len(A))
    complete = A.finite and m == len(A)
    if not complete:
        if sigma * lam <= 1.0:
            raise DomainError(f"product needs Re(s) > 1/{lam:g}")

        def log_tail(a):
            return 1.5 * C * a ** (1.0 - lam * sigma) / (lam * sigma - 1.0)

        m = min(m, _first_index_below(A.elements, log_tail, policy.target_tail / 4.0))
    func = g.regularizer if regularized else g
    parts = []
    for lo, hi in chunks(m):
        x = signs.segment(lo + 1, hi - lo) * neg_power(A.elements[lo:hi], s)
        gx = func(x)
        _check_factors(1.0 - gx)
        parts.append(complex(-np.sum(log1m(gx))))
    value = complex(np.exp(_reduce(parts)))
    tau = 0.0 if complete else 1.5 * C * float(A.elements[m - 1]) ** (1.0 - lam * sigma) / (lam * sigma - 1.0)
    tail = abs(value) * math.expm1(tau)
    return EvalReport(value, m, tail, tail <= policy.target_tail)


# -- continuation into Re(s) > 1/2 ------------------------------------------------

def _correction_sum(A: BaseSequence, l: SignSequence, s: complex, m: int, sign: float = 1.0) -> complex:
    """sum_{n <= m} sign * (-x_n - log(1 - x_n)) with x_n = l_n a_n**(-s)."""
    parts = []
    for lo, hi in chunks(m):
        x = l.segment(lo + 1, hi - lo) * neg_power(A.elements[lo:hi], s)
        _check_factors(1.0 - x)
        parts.append(sign * complex(np.sum(log_correction(x))))
    return _reduce(parts)


def _correction_tail(A: BaseSequence, l: SignSequence, s: complex, m: int, policy: TruncationPolicy):
    """(model estimate, error size) for the omitted correction terms n > m."""
    sigma = s.real
    a = float(A.elements[m - 1])
    bound = 0.5 * a ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0) / (1.0 - a ** (-sigma))
    if policy.tail_model and A.prime_density is not None and m < len(A) and bound > policy.target_tail:
        cut = _model_cut(A.elements, m)
        est = _model_log_tail(
            lambda k: l.tail_moment(k) / k if k >= 2 else 0.0, s, cut, A.prime_density
        )
        return est, tail_model_error(2.0 * sigma, cut, A.prime_density)
    return 0j, bound


def continued_product_eval(
    A: BaseSequence, l: SignSequence, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> EvalReport:
    """zeta^l_A(s) = exp(D^l_A(s)) * prod_n exp(-l_n a_n**-s)/(1 - l_n a_n**-s), Re(s) > 1/2.

    The exponential factor comes from the accelerated alternating series; the
    correction product has factors 1 + O(a_n**(-2 sigma)).
    """
    s = as_point(s)
    if s.real <= 0.5:
        raise DomainError("continued product needs Re(s) > 1/2")
    if not l.eventually_alternating:
        raise ValueError("continued_product_eval needs an eventually alternating sign sequence")
    if not A.euler_admissible:
        raise DomainError("Euler products need all a_n >= 2")
    series = alternating_eval(A, l, s, policy)
    m = min(policy.max_terms, len(A))
    complete = A.finite and m == len(A)
    if policy.tail_model and A.prime_density is not None and not complete:
        m = min(m, len(A) - 1)
    log_corr = _correction_sum(A, l, s, m)
    if complete:
        est, err = 0j, 0.0
    else:
        est, err = _correction_tail(A, l, s, m, policy)
    value = complex(np.exp(series.value + log_corr + est))
    tail = abs(value) * math.expm1(series.tail_bound + err)
    if value == 0 or not np.isfinite(value):
        return EvalReport(value, m, math.inf, False, ("degenerate value",))
    return EvalReport(value, m, tail, tail <= policy.target_tail)


def exp_identity_sides(
    table: PrimeTable, s, policy: TruncationPolicy = DEFAULT_POLICY, n_max: int = 64
) -> tuple[complex, complex]:
    """(exp(P(s)), zeta(s) * prod_p exp(p**-s)(1 - p**-s)) for Re(s) > 1/2."""
    s = as_point(s)
    if s.real <= 0.5:
        raise DomainError("the regularized product needs Re(s) > 1/2")
    if s.real <= 1.0:
        P = prime_zeta_mobius(s, n_max).value
    else:
        P = prime_zeta_direct(table, s, policy).value
    A = table.sequence()
    l = SignSequence.constant(1.0)
    m = min(policy.max_terms, len(A))
    if policy.tail_model:
        m = min(m, len(A) - 1)
    log_corr = _correction_sum(A, l, s, m, sign=-1.0)
    est, _ = _correction_tail(A, l, s, m, policy)
    rhs = zeta_ref(s) * complex(np.exp(log_corr - est))
    return complex(np.exp(P)), rhs


def regularized_exp_identity_residual(
    table: PrimeTable, s, policy: TruncationPolicy = DEFAULT_POLICY, n_max: int = 64
) -> float:
    """|exp(P(s)) - zeta(s) prod_p exp(p**-s)(1 - p**-s)|."""
    lhs, rhs = exp_identity_sides(table, s, policy, n_max)
    return abs(lhs - rhs)


def truncation_discrepancy_check(
    table: PrimeTable, N: int, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> tuple[float, float]:
    """(|zeta(s) - zeta^{l^N}_P(s)|, 2 p_N**(1-sigma)/(sigma-1)) for Re(s) > 1.

    l^N is 1 below index N and (-1)**n from N on.
    """
    s = as_point(s)
    sigma = s.real
    if sigma <= 1.0:
        raise DomainError("the discrepancy bound needs Re(s) > 1")
    product = euler_product_eval(table.sequence(), SignSequence.tail_alternating(N, 1), s, policy)
    measured = abs(zeta_ref(s) - product.value)
    bound = 2.0 * nth_prime(table, N) ** (1.0 - sigma) / (sigma - 1.0)
    return measured, bound


# -- empirical abscissa scans ------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    sigma: float
    terms: int
    abs_delta: float
    rate: float
    flag: str


SCAN_HEADER = ("sigma", "terms", "abs_delta", "rate", "flag")


def convergence_scan(
    A: BaseSequence,
    g: GeneralFactor,
    sigma_grid: Sequence[float],
    ladder: Iterable[TruncationPolicy | int] = (1000, 2000, 4000, 8000, 16000, 32000),
    rate_threshold: float = 0.1,
) -> list[ScanRow]:
    """Decay of |L(2M) - L(M)| along a ladder of M, L(M) = sum_{n<=M} -log(1 - g(a_n**-sigma)).

    ``rate`` is the local exponent -dlog(delta)/dlog(M); cells with rate below
    ``rate_threshold`` are flagged ``no-convergence`` (decay not detected).
    """
    grid = [float(x) for x in sigma_grid]
    if grid != sorted(grid):
        raise ValueError("sigma_grid must be sorted ascending")
    sizes = [p.max_terms if isinstance(p, TruncationPolicy) else int(p) for p in ladder]
    if len(A) < 2 * max(sizes):
        raise ValueError(f"need {2 * max(sizes)} sequence elements, have {len(A)}")
    rows = []
    for sigma in grid:
        x = neg_power(A.elements[: 2 * max(sizes)], complex(sigma))
        gx = g(x)
        one_minus = 1.0 - gx
        if np.any(np.abs(one_minus) <= 8.0 * np.finfo(float).eps):
            raise SingularFactorError(f"singular factor at sigma={sigma}")
        logs = -log1m(gx)
        prev = None
        for M in sizes:
            delta = float(abs(np.sum(logs[M : 2 * M])))
            if prev is None:
                rate, flag = math.nan, "pending"
            else:
                M0, d0 = prev
                rate = math.log(d0 / delta) / math.log(M / M0) if delta > 0 else math.inf
                flag = "decay" if rate >= rate_threshold else "no-convergence"
            rows.append(ScanRow(sigma, M, delta, rate, flag))
            prev = (M, delta)
    return rows


def scan_verdicts(rows: Sequence[ScanRow]) -> dict[float, str]:
    """Last-rung flag per sigma."""
    out: dict[float, str] = {}
    for row in rows:
        out[row.sigma] = row.flag
    return out


def scan_to_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    for r in rows:
        writer.writerow([repr(r.sigma), r.terms, repr(r.abs_delta), repr(r.rate), r.flag])
    return buf.getvalue()
