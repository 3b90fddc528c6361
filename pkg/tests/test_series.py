import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import GOLDEN, golden_complex
from eulerlab.core import BaseSequence, SignSequence, TruncationPolicy
from eulerlab.errors import BranchGuardError, DomainError, PoleError
from eulerlab.series import (
    alternating_eval,
    dirichlet_eval,
    gamma_ref,
    prime_zeta_direct,
    prime_zeta_mobius,
    z_deformed_prime_zeta,
    zeta_euler_maclaurin,
    zeta_ref,
)

ONE = SignSequence.constant(1.0)
ALT = SignSequence.alternating(1)


# -- dirichlet_eval ---------------------------------------------------------------

def test_zeta2_over_naturals():
    rep = dirichlet_eval(BaseSequence.naturals(10**6), ONE, 2)
    assert abs(rep.value - math.pi**2 / 6) <= rep.tail_bound
    assert rep.tail_bound < 3e-6


def test_alternating_harmonic_plain():
    rep = dirichlet_eval(BaseSequence.naturals(10**6), ALT, 1)
    assert abs(rep.value + math.log(2)) <= rep.tail_bound


def test_single_term_and_zero_terms():
    rep = dirichlet_eval(BaseSequence.explicit([2]), ONE, 1)
    assert rep.value == 0.5 and rep.converged and rep.tail_bound == 0.0
    with pytest.raises(ValueError):
        dirichlet_eval(BaseSequence.explicit([2]), ONE, 1, TruncationPolicy(max_terms=0))


def test_explicit_signs_are_finite_support():
    rep = dirichlet_eval(BaseSequence.naturals(100), SignSequence.explicit([1, -1, 0.5]), 1)
    assert rep.value == pytest.approx(1 - 0.5 + 0.5 / 3)
    assert rep.tail_bound == 0.0


def test_outside_region_flags_nonconvergence():
    rep = dirichlet_eval(BaseSequence.naturals(1000), ONE, 0.9)
    assert not rep.converged and math.isinf(rep.tail_bound)


def test_tail_alternating_sum():
    A = BaseSequence.naturals(10**5)
    l = SignSequence.tail_alternating(4, 1)
    # 1 + 2^-s + 3^-s + sum_{n>=4} (-1)^n n^-s at s = 2
    head = 1 + 1 / 4 + 1 / 9
    alt_tail = float(mp.nsum(lambda n: (-1) ** n / n**2, [4, mp.inf]))
    rep = alternating_eval(A, l, 2)
    assert abs(rep.value - (head + alt_tail)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=2.0, max_value=6.0), st.floats(min_value=-10, max_value=10))
def test_tail_bound_soundness(sigma, t):
    s = complex(sigma, t)
    A = BaseSequence.naturals(20000)
    short = dirichlet_eval(A, ONE, s, TruncationPolicy(5000, 0.0))
    long = dirichlet_eval(A, ONE, s, TruncationPolicy(10000, 0.0))
    ulp_slack = 8 * np.finfo(float).eps * abs(long.value)  # summation rounding
    assert abs(long.value - short.value) <= short.tail_bound + ulp_slack


# -- alternating_eval -------------------------------------------------------------

def test_alternating_eval_examples(golden):
    A = BaseSequence.naturals(10**4)
    assert abs(alternating_eval(A, ALT, 1).value + math.log(2)) < 1e-13
    assert abs(alternating_eval(A, ALT, 0.5).value + golden["eta_half"]) < 1e-12
    assert abs(alternating_eval(A, ALT, 0.5).value + 0.6048986) < 1e-7


def test_alternating_eval_matches_plain_at_2():
    A = BaseSequence.naturals(10**5)
    acc = alternating_eval(A, ALT, 2).value
    plain = dirichlet_eval(A, ALT, 2, TruncationPolicy(10**5, 0.0)).value
    assert abs(acc - plain) < 1e-10


def test_alternating_eval_rejects_nonpositive():
    rep = alternating_eval(BaseSequence.naturals(100), ALT, -0.5)
    assert not rep.converged
    with pytest.raises(ValueError):
        alternating_eval(BaseSequence.naturals(100), ONE, 2)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=-20.0, max_value=20.0))
def test_eta_relation(sigma, t):
    s = complex(sigma, t)
    assume(abs(s - 1) > 1e-3)
    acc = alternating_eval(BaseSequence.naturals(20000), ALT, s).value
    assert abs(zeta_ref(s) * (1 - 2 ** (1 - s)) + acc) < 1e-9


# -- zeta_ref / gamma_ref ---------------------------------------------------------

@pytest.mark.parametrize("key", sorted(GOLDEN["zeta"]))
def test_zeta_ref_golden(key):
    expect = golden_complex("zeta", key)
    assert abs(zeta_ref(complex(key)) - expect) < 1e-12 * max(1, abs(expect))


def test_zeta_closed_forms():
    assert abs(zeta_ref(2) - math.pi**2 / 6) < 1e-13
    assert abs(zeta_ref(4) - math.pi**4 / 90) < 1e-13
    with pytest.raises(PoleError):
        zeta_ref(1)
    with pytest.raises(DomainError):
        zeta_ref(-1)


def test_zeta_near_eta_cancellation():
    # 1 - 2^(1-s) vanishes at 1 + 2 pi i / ln 2; the reference switches method there
    s = 1 + 2j * math.pi / math.log(2) + 1e-5
    mp.mp.dps = 30
    assert abs(zeta_ref(s) - complex(mp.zeta(s))) < 1e-11
    mp.mp.dps = 15


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.1, max_value=20.0), st.floats(min_value=-40.0, max_value=40.0))
def test_zeta_ref_against_mpmath(sigma, t):
    s = complex(sigma, t)
    assume(abs(s - 1) > 1e-2)
    assert abs(zeta_ref(s) - complex(mp.zeta(s))) < 1e-11 * max(1.0, abs(complex(mp.zeta(s))))


def test_euler_maclaurin_agrees():
    for s in (2, 3.5, 0.5 + 10j, 7 - 3j):
        assert abs(zeta_euler_maclaurin(s) - zeta_ref(s)) < 1e-12


@pytest.mark.parametrize("key", sorted(GOLDEN["gamma"]))
def test_gamma_golden(key):
    expect = golden_complex("gamma", key)
    assert abs(gamma_ref(complex(key)) - expect) <= 1e-10 * abs(expect)


def test_gamma_examples_and_poles():
    assert gamma_ref(2) == pytest.approx(1, rel=1e-14)
    assert gamma_ref(0.5).real == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_ref(5).real == pytest.approx(24, rel=1e-14)
    for bad in (0, -1, -7):
        with pytest.raises(PoleError):
            gamma_ref(bad)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.01, max_value=50.0), st.floats(min_value=-30.0, max_value=30.0))
def test_gamma_relative_error(sigma, t):
    s = complex(sigma, t)
    ref = complex(mp.gamma(s))
    assert abs(gamma_ref(s) - ref) <= 1e-10 * abs(ref)


# -- prime zeta ---------------------------------------------------------------------

@pytest.mark.parametrize("s", [2, 3])
def test_prime_zeta_direct_golden(table_1e7, s):
    rep = prime_zeta_direct(table_1e7, s, TruncationPolicy(10**7, 1e-12, tail_model=True))
    expect = GOLDEN["prime_zeta"][str(s)][0]
    assert abs(rep.value - expect) < 1e-10
    assert abs(rep.value - expect) <= rep.tail_bound * 10  # the model error is a scale, not a rigorous bound


def test_prime_zeta_direct_plain_bound_is_rigorous(table_1e6):
    for s in (1.5, 2, 3):
        rep = prime_zeta_direct(table_1e6, s, TruncationPolicy(10**6, 0.0))
        assert abs(rep.value - GOLDEN["prime_zeta"][str(s)][0]) <= rep.tail_bound


def test_prime_zeta_direct_leading_terms(table_1e4):
    v = prime_zeta_direct(table_1e4, 10).value.real
    assert 0 < v - 2**-10 - 3**-10 < 1e-6


def test_prime_zeta_direct_flags_divergent(table_1e4):
    assert not prime_zeta_direct(table_1e4, 1.0).converged


@pytest.mark.parametrize("s", ["1.5", "2", "3", "4", "6", "10", "0.75"])
def test_prime_zeta_mobius_golden(s):
    expect = golden_complex("prime_zeta", s)
    assert abs(prime_zeta_mobius(float(s)).value - expect) < 1e-13


def test_prime_zeta_mobius_errors():
    with pytest.raises(DomainError):
        prime_zeta_mobius(0.5)
    with pytest.raises(PoleError):
        prime_zeta_mobius(1.0)
    # Re(2s) = 1.1 still leaves log zeta(1.1) ~ 2.35 < pi; 0.52 gives Re(2s) = 1.04, log zeta > pi
    prime_zeta_mobius(0.55)
    with pytest.raises(BranchGuardError):
        prime_zeta_mobius(0.52)


def test_inverse_identity(table_1e6):
    policy = TruncationPolicy(10**6, 1e-13, tail_model=True)
    total = sum(prime_zeta_direct(table_1e6, 2 * n, policy).value / n for n in range(1, 41))
    assert abs(total - GOLDEN["log_zeta_2"]) < 1e-10
    total_m = sum(prime_zeta_mobius(2 * n).value / n for n in range(1, 41))
    assert abs(total_m - cmath.log(zeta_ref(2))) < 1e-13


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1.5, max_value=6.0))
def test_mobius_direct_within_bounds(s):
    table = _cached_table()
    d = prime_zeta_direct(table, s, TruncationPolicy(10**6, 0.0))
    m = prime_zeta_mobius(s)
    assert abs(d.value - m.value) <= d.tail_bound + m.tail_bound + 1e-14


_TABLE = {}


def _cached_table():
    from eulerlab.primes import sieve

    if "t" not in _TABLE:
        _TABLE["t"] = sieve(10**6)
    return _TABLE["t"]


def test_deformed_examples(table_1e4, golden):
    assert z_deformed_prime_zeta(table_1e4, 0, 3).value == 0
    one = z_deformed_prime_zeta(table_1e4, 1, 2)
    assert one.value == prime_zeta_direct(table_1e4, 2).value
    half = z_deformed_prime_zeta(table_1e4, 0.5, 1)
    assert half.converged
    assert abs(half.value - golden["deformed_half_s1"]) <= half.tail_bound
    tight = z_deformed_prime_zeta(table_1e4, 0.5, 1, TruncationPolicy(10**6, 1e-15))
    assert abs(tight.value - golden["deformed_half_s1"]) < 1e-15
    assert abs(half.value - 0.1741) < 1e-4


def test_deformed_domain(table_1e4):
    with pytest.raises(DomainError):
        z_deformed_prime_zeta(table_1e4, 1.5, 2)
    with pytest.raises(DomainError):
        z_deformed_prime_zeta(table_1e4, 1j, 1.0)
    rep = z_deformed_prime_zeta(table_1e4, 1j, 2.0)
    direct = sum((1j) ** int(p) * float(p) ** -2 for p in table_1e4.primes)
    assert abs(rep.value - direct) <= rep.tail_bound + 1e-12


def test_deformation_monotone_continuity(table_1e6):
    zs = [0.0, 0.3, 0.6, 0.9, 0.99, 0.999, 0.9999, 1.0]
    vals = [z_deformed_prime_zeta(table_1e6, z, 2).value.real for z in zs]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] - vals[-2] < 1e-3
