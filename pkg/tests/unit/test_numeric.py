import pytest
from hypothesis import given
from hypothesis import strategies as st

from squarekit.algorithms.numeric import (
    BitWidthPlan,
    cpm,
    cpm3,
    halve_exact,
    pm,
    pm_minus,
    square,
)
from squarekit.models.ledger import OpLedger
from squarekit.models.scalars import CScalar, Domain, Scalar
from squarekit.utils.errors import DomainMismatchError, OddDoubledResultError

ints64 = st.integers(min_value=-(2**63), max_value=2**63 - 1)


def S(v):
    return Scalar.of(v)


def test_pm_recovers_twice_the_product():
    """(3+4)^2 - 9 - 16 = 24 = 2*12."""
    assert pm(S(3), S(4)).value == 49
    assert pm(S(3), S(4)).value - 9 - 16 == 24


def test_pm_minus_recovers_negated_product():
    assert pm_minus(S(3), S(4)).value == 1
    assert pm_minus(S(3), S(4)).value - 9 - 16 == -24


@given(ints64, ints64)
def test_pm_identity_exact(a, b):
    doubled = pm(S(a), S(b)).value - a * a - b * b
    assert doubled % 2 == 0
    assert doubled == 2 * a * b


@given(ints64, ints64)
def test_pm_minus_identity_exact(a, b):
    assert pm_minus(S(a), S(b)).value - a * a - b * b == -2 * a * b


def test_pm_counts_one_squaring():
    ledger = OpLedger()
    pm(S(1), S(2), ledger)
    assert ledger.squarings == 1
    assert ledger.multiplications == 0


def test_pm_rejects_mixed_domains():
    with pytest.raises(DomainMismatchError):
        pm(S(1), S(2.0))


def test_cpm_worked_example():
    re, im = cpm(CScalar.of(1, 2), CScalar.of(3, 4))
    assert (re.value, im.value) == (20, 50)
    sx, sy = -5, -25
    assert (re.value + sx + sy) // 2 == -5
    assert (im.value + sx + sy) // 2 == 10


def test_cpm3_worked_example():
    t1, t2, t3 = cpm3(CScalar.of(1, 2), CScalar.of(3, 4))
    assert (t1.value, t2.value, t3.value) == (36, 81, 4)
    sab, scs, sba, ssc = -5, 40, -10, -10
    assert (t1.value - t2.value + sab + scs) // 2 == -5
    assert (t1.value + t3.value + sba + ssc) // 2 == 10


def test_cpm3_counts_three_squarings():
    ledger = OpLedger()
    cpm3(CScalar.of(1, 2), CScalar.of(3, 4), ledger)
    assert ledger.squarings == 3
    ledger = OpLedger()
    cpm(CScalar.of(1, 2), CScalar.of(3, 4), ledger)
    assert ledger.squarings == 4


@given(ints64, ints64, ints64, ints64)
def test_cpm_matches_complex_product(a, b, c, s):
    re, im = cpm(CScalar.of(a, b), CScalar.of(c, s))
    bias = -(a * a + b * b) - (c * c + s * s)
    assert re.value + bias == 2 * (a * c - b * s)
    assert im.value + bias == 2 * (b * c + a * s)


@given(ints64, ints64, ints64, ints64)
def test_cpm3_matches_complex_product(a, b, c, s):
    t1, t2, t3 = cpm3(CScalar.of(a, b), CScalar.of(c, s))
    sab = -((a + b) ** 2) + b * b
    sba = -((a + b) ** 2) - a * a
    scs = -c * c + (c + s) ** 2
    ssc = -c * c - (s - c) ** 2
    assert t1.value - t2.value + sab + scs == 2 * (a * c - b * s)
    assert t1.value + t3.value + sba + ssc == 2 * (b * c + a * s)


def test_halve_exact():
    assert halve_exact(S(38)).value == 19
    assert halve_exact(S(-6)).value == -3
    assert halve_exact(S(3.0)).value == 1.5


def test_halve_exact_rejects_odd():
    with pytest.raises(OddDoubledResultError) as exc:
        halve_exact(S(7))
    assert exc.value.code == "odd_doubled_result"


def test_square_float_domain():
    assert square(S(1.5)).value == 2.25
    assert square(S(1.5)).domain is Domain.FLOAT


def test_scalar_domain_inference():
    assert Scalar.of(3).domain is Domain.EXACT_INT
    assert Scalar.of(3.0).domain is Domain.FLOAT
    assert CScalar.of(1, 2.5).domain is Domain.FLOAT


def test_bitwidth_plan_fields():
    plan = BitWidthPlan.for_inputs(8, 16)
    assert plan.sum_bits == 9
    assert plan.square_bits == 18
    assert plan.wide_sum_bits == 10
    assert plan.wide_square_bits == 20
    assert plan.accumulator_bits == 18 + 4 + 2
    assert plan.input_limit() == 127


def test_bitwidth_plan_bounds_hold_at_extremes():
    plan = BitWidthPlan.for_inputs(8, 16)
    worst_sum = -128 + -128
    assert BitWidthPlan.fits(worst_sum, plan.sum_bits)
    assert BitWidthPlan.fits(worst_sum**2, plan.square_bits)
    assert not BitWidthPlan.fits(256, plan.sum_bits)


def test_bitwidth_plan_single_term():
    assert BitWidthPlan(input_bits=4).accumulator_bits == 10 + 0 + 2
