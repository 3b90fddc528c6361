"""Dirichlet series D^l_A(s), zeta/gamma references and the prime zeta function."""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import bernoulli, exp1

from .core import (
    BaseSequence,
    EvalReport,
    SignSequence,
    TruncationPolicy,
    as_point,
    chunks,
    neg_power,
)
from .errors import BranchGuardError, DomainError, PoleError
from .primes import PrimeTable, mobius, mobius_range

DEFAULT_POLICY = TruncationPolicy()
AVERAGING_ORDER = 30

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_B2K = bernoulli(60)[2::2]  # B_2, B_4, ..., B_60


def _sum_terms(elements: np.ndarray, signs: SignSequence, s: complex, start: int = 1) -> complex:
    """Sum l_n * a_n**(-s) over a contiguous slice whose first index is ``start``."""
    total_re, total_im = [], []
    for lo, hi in chunks(len(elements)):
        terms = signs.segment(start + lo, hi - lo) * neg_power(elements[lo:hi], s)
        part = complex(np.sum(terms))
        total_re.append(part.real)
        total_im.append(part.imag)
    return complex(math.fsum(total_re), math.fsum(total_im))


def _first_index_below(elements: np.ndarray, bound_of_a, target: float) -> int:
    """Smallest M >= 1 with bound_of_a(a_M) <= target (bound decreasing in a), else len."""
    if elements.size == 0:
        return 0
    lo, hi = 0, elements.size - 1
    if bound_of_a(float(elements[hi])) > target:
        return elements.size
    while lo < hi:
        mid = (lo + hi) // 2
        if bound_of_a(float(elements[mid])) <= target:
            hi = mid
        else:
            lo = mid + 1
    return lo + 1


# -- tail model -------------------------------------------------------------

def prime_tail_model(s, x: float, density: float = 1.0) -> complex:
    """Estimate sum_{p > x} p**(-s) from Riemann's R(t) prime-count density.

    Uses d R = sum_n mu(n)/n * t**(1/n - 1)/log t dt, integrated in closed form
    with the exponential integral.  Needs Re(s) > 1.  ``density`` rescales the
    count for subsequences holding a fixed share of the primes.
    """
    s = as_point(s)
    if s.real <= 1.0:
        raise DomainError("tail model needs Re(s) > 1")
    lx = math.log(x)
    mu = mobius_range(max(2, int(lx / math.log(2.0))))
    total = 0j
    for n in range(1, mu.size):
        if mu[n]:
            total += int(mu[n]) / n * complex(exp1((s - 1.0 / n) * lx))
    return density * total


def tail_model_error(sigma: float, x: float, density: float = 1.0) -> float:
    """Rough size of the tail model's error: RH-scale prime-count fluctuation
    sqrt(x) log(x) / (8 pi), weighted by x**(-sigma)."""
    return 2.0 * density * math.sqrt(x) * math.log(x) / (8.0 * math.pi) * x ** (-sigma)


def _model_cut(elements: np.ndarray, m: int) -> float:
    """Midpoint between the last used element and the next one."""
    if m < elements.size:
        return 0.5 * (float(elements[m - 1]) + float(elements[m]))
    return float(elements[m - 1]) + 0.5


# -- Dirichlet series -------------------------------------------------------

def dirichlet_eval(
    A: BaseSequence, l: SignSequence, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> EvalReport:
    """Truncated sum_n l_n a_n**(-s) with an a-posteriori tail bound.

    Constant signs need Re(s) > 1 (bound 2*max|l|*a_M**(1-sigma)/(sigma-1));
    eventually alternating signs need Re(s) > 0 (bound |s|/sigma * a_M**(-sigma)).
    """
    s = as_point(s)
    if policy.max_terms == 0:
        raise ValueError("dirichlet_eval needs max_terms >= 1")
    sigma = s.real
    elements = A.elements
    m = min(policy.max_terms, len(A))
    support = l.support
    if support is not None:
        m = min(m, support)
    complete = (A.finite and m == len(A)) or (support is not None and m == support)
    if complete:
        return EvalReport(_sum_terms(elements[:m], l, s), m, 0.0, True)

    amp = l.max_abs
    use_model = False
    if l.eventually_alternating and sigma > 0.0:
        start = l.N if l.kind == "tail_alternating" else 1

        def bound(a):
            return abs(s) / sigma * a ** (-sigma)

        m = max(min(m, _first_index_below(elements, bound, policy.target_tail)), min(m, start))
        nxt = float(elements[m]) if m < len(A) else float(elements[m - 1])
        tail = bound(nxt) if m + 1 >= start else math.inf
    elif sigma > 1.0:

        def bound(a):
            return 2.0 * amp * a ** (1.0 - sigma) / (sigma - 1.0)

        m = min(m, _first_index_below(elements, bound, policy.target_tail))
        tail = bound(float(elements[m - 1]))
        use_model = (
            policy.tail_model
            and l.is_constant
            and A.prime_density is not None
            and tail > policy.target_tail
        )
        if use_model:
            m = min(m, len(A) - 1)
    else:
        m = min(m, len(A))
        value = _sum_terms(elements[:m], l, s)
        return EvalReport(value, m, math.inf, False, ("outside convergence region",))

    value = _sum_terms(elements[:m], l, s)
    notes = ()
    if use_model:
        cut = _model_cut(elements, m)
        value += l.c * prime_tail_model(s, cut, A.prime_density)
        tail = tail_model_error(sigma, cut, A.prime_density) * amp
        notes = ("prime-count tail model",)
    return EvalReport(value, m, tail, tail <= policy.target_tail, notes)


def _alternating_start(l: SignSequence) -> int:
    if l.kind == "alternating":
        return 1
    if l.kind == "tail_alternating":
        return l.N
    raise ValueError("alternating_eval needs an eventually alternating sign sequence")


def alternating_eval(
    A: BaseSequence,
    l: SignSequence,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    order: int = AVERAGING_ORDER,
) -> EvalReport:
    """Accelerated sum of an eventually alternating Dirichlet series, Re(s) > 0.

    Partial sums S_M, ..., S_{M+order} are combined with binomial weights
    (Euler's transformation applied to the sequence of partial sums).  The
    reported tail bound is the spread of the accelerated value under shifting
    the window by one to four terms.
    """
    s = as_point(s)
    start = _alternating_start(l)
    if s.real <= 0.0:
        return EvalReport(complex("nan"), 0, math.inf, False, ("Re(s) <= 0",))
    n_avail = min(policy.max_terms, len(A))
    if A.finite and n_avail == len(A):
        return EvalReport(_sum_terms(A.elements, l, s), n_avail, 0.0, True)
    shifts = 4
    order = min(order, max(0, n_avail - start - shifts - 1))
    m = n_avail - order
    if m < start + shifts or m < 1:
        value = _sum_terms(A.elements[:n_avail], l, s)
        return EvalReport(value, n_avail, math.inf, False, ("too few terms",))

    base_end = m - shifts - 1  # S_{base_end} summed in bulk
    base = _sum_terms(A.elements[:base_end], l, s)
    extra = l.segment(base_end + 1, n_avail - base_end) * neg_power(A.elements[base_end:n_avail], s)
    partial = base + np.cumsum(extra)  # partial[k] = S_{base_end + 1 + k}
    weights = np.array([math.comb(order, k) for k in range(order + 1)], dtype=float) / 2.0**order

    def accelerated(first: int) -> complex:
        lo = first - base_end - 1  # position of S_first in ``partial``
        return complex(np.dot(weights, partial[lo : lo + order + 1]))

    value = accelerated(m)
    spread = max(abs(value - accelerated(m - k)) for k in range(1, shifts + 1))
    return EvalReport(value, n_avail, spread, spread <= policy.target_tail)


# -- zeta and gamma references ---------------------------------------------

def _eta_cvz(s: complex) -> complex:
    """Dirichlet eta by the Cohen-Rodriguez Villegas-Zagier Chebyshev scheme."""
    sigma = s.real
    n = int(math.ceil((40.0 + 0.5 * math.pi * abs(s.imag) + max(0.0, -math.log(sigma))) / math.log(3.0 + math.sqrt(8.0)))) + 2
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    total = 0j
    for k in range(n):
        c = b - c
        total += c * cmath.exp(-s * math.log(k + 1))
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return total / d


def zeta_euler_maclaurin(s, minus_one: bool = False) -> complex:
    """zeta(s) by Euler-Maclaurin summation; ``minus_one`` drops the n = 1 term."""
    s = as_point(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    N = max(30, int(abs(s)) + 20)
    ns = np.arange(2 if minus_one else 1, N, dtype=float)
    head = complex(np.sum(np.exp(-s * np.log(ns)))) if ns.size else 0j
    logN = math.log(N)
    total = head + cmath.exp((1 - s) * logN) / (s - 1) + 0.5 * cmath.exp(-s * logN)
    rising = s  # s (s+1) ... (s+2k-2)
    power = cmath.exp((-s - 1) * logN)  # N**(-s-2k+1)
    fact = 2.0  # (2k)!
    for k, b2k in enumerate(_B2K, start=1):
        term = b2k / fact * rising * power
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= N * N
        fact *= (2 * k + 1) * (2 * k + 2)
    return total


def zeta_ref(s) -> complex:
    """Reference zeta(s) for Re(s) > 0 via eta(s) / (1 - 2**(1-s))."""
    s = as_point(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= 0.0:
        raise DomainError("zeta_ref covers Re(s) > 0 only")
    denom = 1.0 - cmath.exp((1.0 - s) * math.log(2.0))
    if abs(denom) < 1e-3:
        # eta and the factor vanish together at 1 + 2 pi i k / log 2
        return zeta_euler_maclaurin(s)
    return _eta_cvz(s) / denom


def zeta_minus_one(s) -> complex:
    """zeta(s) - 1 without cancellation for large Re(s)."""
    s = as_point(s)
    if s.real >= 4.0:
        return zeta_euler_maclaurin(s, minus_one=True)
    return zeta_ref(s) - 1.0


def gamma_ref(s) -> complex:
    """Gamma(s) by the Lanczos approximation (g = 7, 9 terms) with reflection."""
    s = as_point(s)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real):
        raise PoleError(f"Gamma has a pole at {s.real:g}")
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * gamma_ref(1.0 - s))
    z = s - 1.0
    x = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        x += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    value = math.sqrt(2.0 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * x
    return complex(value.real, 0.0) if s.imag == 0.0 else value


# -- prime zeta -------------------------------------------------------------

def prime_zeta_direct(
    table: PrimeTable, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> EvalReport:
    """P(s) = sum_p p**(-s) over the table's primes, Re(s) > 1."""
    s = as_point(s)
    if table.count == 0:
        return EvalReport(0j, 0, math.inf, False, ("empty prime table",))
    return dirichlet_eval(table.sequence(), SignSequence.constant(1.0), s, policy)


def _zeta_excess_bound(sigma: float) -> float:
    """Upper bound for zeta(sigma) - 1, sigma > 1."""
    return 2.0**-sigma + 2.0 ** (1.0 - sigma) / (sigma - 1.0)


def prime_zeta_mobius(s, n_max: int = 64, target_tail: float = 1e-12) -> EvalReport:
    """P(s) = sum_{n <= n_max} mu(n) log(zeta(n s)) / n, Re(s) > 1/2.

    The n = 1 logarithm is the principal branch.  For n >= 2 the principal
    branch equals the prime-power series value whenever log zeta(Re(ns)) < pi,
    since that series bounds |Im log zeta(ns)|; otherwise BranchGuardError.
    """
    s = as_point(s)
    if s.real <= 0.5:
        raise DomainError("Moebius inversion needs Re(s) > 1/2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    for n in range(1, n_max + 1):
        if n * s == 1:
            raise PoleError(f"zeta(ns) has its pole at n = {n}")
    for n in range(2, n_max + 1):
        sig = n * s.real
        if sig <= 1.0 or math.log(zeta_ref(sig).real) >= math.pi:
            raise BranchGuardError(f"principal log of zeta({n}s) not guaranteed (Re(ns) = {sig:g})")
        if sig > 60:
            break
    parts = []
    for n in range(1, n_max + 1):
        mu = mobius(n)
        if mu == 0:
            continue
        w = n * s
        if n == 1 and w.real <= 4.0:
            z = zeta_ref(w)
            if z == 0:
                raise DomainError(f"s = {s} is a zero of zeta")
            if z.imag == 0.0:
                z = complex(z.real, 0.0)  # upper side of the cut for real negative values
            log_z = cmath.log(z)
        else:
            log_z = _log1p_complex(zeta_minus_one(w))
        parts.append(mu * log_z / n)
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    tail = 0.0
    n = n_max + 1
    while True:
        term = _zeta_excess_bound(n * s.real) / n
        tail += term
        if term < 1e-30 or term < 1e-6 * tail:
            tail *= 2.0  # geometric remainder
            break
        n += 1
    return EvalReport(value, n_max, tail, tail <= target_tail)


def _log1p_complex(x: complex) -> complex:
    """log(1 + x) accurate for small |x|."""
    if abs(x) > 0.5:
        return cmath.log(1.0 + x)
    re = 0.5 * math.log1p(2.0 * x.real + x.real * x.real + x.imag * x.imag)
    return complex(re, math.atan2(x.imag, 1.0 + x.real))


def z_deformed_prime_zeta(
    table: PrimeTable, z, s, policy: TruncationPolicy = DEFAULT_POLICY
) -> EvalReport:
    """sum_p z**p p**(-s): |z| < 1 with Re(s) > 0, or |z| = 1 with Re(s) > 1."""
    s = as_point(s)
    z = complex(z)
    r = abs(z)
    if z == 0:
        return EvalReport(0j, 0, 0.0, True)
    if r == 1.0 and z == 1.0:
        return prime_zeta_direct(table, s, policy)
    if r < 1.0 and s.real > 0.0:
        sigma, logr = s.real, math.log(r)

        def bound(p):
            return math.exp((p + 1) * logr) * (p + 1) ** (-sigma) / (1.0 - r)

    elif r == 1.0 and s.real > 1.0:
        sigma = s.real

        def bound(p):
            return 2.0 * p ** (1.0 - sigma) / (sigma - 1.0)

    else:
        raise DomainError(f"z-deformation undefined for |z| = {r:g}, Re(s) = {s.real:g}")
    P = table.primes
    m = min(policy.max_terms, P.size, _first_index_below(P, bound, policy.target_tail))
    if m == 0:
        return EvalReport(0j, 0, math.inf, False, ("empty prime table",))
    log_z = cmath.log(z)
    parts = []
    for lo, hi in chunks(m):
        p = P[lo:hi].astype(float)
        parts.append(complex(np.sum(np.exp(p * log_z - s * np.log(p)))))
    value = complex(math.fsum(v.real for v in parts), math.fsum(v.imag for v in parts))
    tail = bound(float(P[m - 1]))
    return EvalReport(value, m, tail, tail <= policy.target_tail)
