import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cfgeom.cf_core import (ProjectiveRatio, continuant_pair, continuants, eval_cf, expand_rational,
                            expand_real, format_scalar, parse_scalar, parse_seq, serialize_seq)
from oracles import fold_cf, random_rational, same_projective

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=9)
PR = ProjectiveRatio


# -- continuants --------------------------------------------------------------


def test_symbolic_three_term_pair():
    rng = random.Random(3)
    for _ in range(50):
        a, b, c = (random_rational(rng) for _ in range(3))
        pq = continuant_pair([a, b, c])
        assert (pq.p, pq.q) == (a * b * c + a + c, b * c + 1)
    pq = continuant_pair([1, 2, 2])
    assert (pq.p, pq.q) == (7, 5)
    assert fold_cf([1, 2, 2]) == (7, 5)


def test_figure_sequence_pairs():
    pq = continuant_pair([2, -1, 3, -2, 1])
    assert (pq.p, pq.q) == (0, 1)
    assert [(c.p, c.q) for c in continuants([5])] == [(5, 1)]


def test_continuants_reject_empty():
    with pytest.raises(ValueError):
        continuants([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-5, 5).map(F) | rationals, min_size=1, max_size=12))
def test_determinant_identity(seq):
    pairs = [(F(1), F(0))] + [(c.p, c.q) for c in continuants(seq)]
    for k in range(1, len(pairs)):
        (p1, q1), (p0, q0) = pairs[k], pairs[k - 1]
        # prefix index is k-1, so the sign is (-1)^k
        assert p1 * q0 - p0 * q1 == (-1) ** k


def test_matches_bottom_up_fold():
    rng = random.Random(11)
    through_infinity = 0
    for i in range(300):
        n = rng.randint(1, 10)
        # small integers make intermediate zero denominators common
        seq = [F(rng.randint(-2, 2)) if i % 2 else random_rational(rng) for _ in range(n)]
        num, den = fold_cf(seq)
        if num == 0 and den == 0:
            continue
        for k in range(1, n):
            if fold_cf(seq[k:])[0] == 0:
                through_infinity += 1
                break
        assert same_projective((num, den), eval_cf(seq))
    assert through_infinity >= 10


def test_eval_examples():
    assert eval_cf([2, -1, 3, -2, 1]) == PR(0, 1)
    assert eval_cf([1, -2, 2, F(-1, 2), -4]) == PR(-1, 1)
    assert eval_cf([F(7, 3)]) == PR(7, 3)
    assert eval_cf([1, 0, -1]) == PR(0, 1)
    v = eval_cf([1, 0])
    assert v.is_infinite and (v.p, v.q) == (1, 0)


def test_projective_ratio_semantics():
    assert PR(2, 4) == PR(-1, -2)
    assert hash(PR(2, 4)) == hash(PR(1, 2))
    assert PR(-3, 0) == PR(1, 0)
    c = PR(-6, -4).canonical()
    assert (c.p, c.q) == (3, 2)
    c = PR(4, -6).canonical()
    assert (c.p, c.q) == (-2, 3)
    assert str(PR(5, 0)) == "1/0"
    assert PR(F(1, 2), 3).value == F(1, 6)
    assert PR(1, 0).value == math.inf
    assert PR(3, -6).to_json() == {"p": "3", "q": "-6"}
    with pytest.raises(ValueError):
        PR(0, 0)


def test_float_sequences_evaluate():
    v = eval_cf([1.5, 2.0])
    assert v.value == pytest.approx(2.0)
    assert eval_cf([1.0, 0.0]).is_infinite


# -- expansions -----------------------------------------------------------------


def test_expand_rational_examples():
    assert expand_rational(F(7, 5), "odd") == [1, 2, 2]
    assert expand_rational(F(7, 5), "even") == [1, 2, 1, 1]
    assert expand_rational(1, "odd") == [1]
    assert expand_rational(1, "even") == [0, 1]
    assert expand_rational(F(-7, 3), "odd") == [-3, 1, 2]


def test_expand_rational_rejects_bad_parity():
    with pytest.raises(ValueError):
        expand_rational(F(1, 2), "both")


def test_expand_rational_roundtrip_500():
    rng = random.Random(500)
    for _ in range(500):
        x = F(rng.randint(-10_000, 10_000), rng.randint(1, 2_000))
        for parity in ("odd", "even"):
            seq = expand_rational(x, parity)
            assert eval_cf(seq) == PR(x.numerator, x.denominator)
            assert len(seq) % 2 == (1 if parity == "odd" else 0)
            assert all(a.denominator == 1 for a in seq)
            assert all(a >= 1 for a in seq[1:])


@given(st.fractions(max_denominator=10_000))
def test_expand_rational_property(x):
    for parity in ("odd", "even"):
        seq = expand_rational(x, parity)
        assert eval_cf(seq) == PR(x.numerator, x.denominator)
        assert len(seq) % 2 == (parity == "odd")


def _convergent_bound_holds(x, seq):
    for k in range(1, len(seq) + 1):
        pq = eval_cf(seq[:k])
        # the floor steps run in floating point, hence the relative slack
        assert abs(x - pq.p / pq.q) <= 1 / pq.q**2 + 1e-10 * max(1.0, abs(x))


def test_expand_real_examples():
    phi = (1 + math.sqrt(5)) / 2
    seq = expand_real(phi, 10)
    assert seq == [1] * 10
    _convergent_bound_holds(phi, seq)
    seq = expand_real(math.sqrt(2), 5)
    assert seq == [1, 2, 2, 2, 2]
    _convergent_bound_holds(math.sqrt(2), seq)
    assert expand_real(1.4, 20, 1e-9) == expand_rational(F(7, 5), "odd")


@given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
def test_expand_real_convergent_bound(x):
    seq = expand_real(x, 12, 1e-9)
    assert all(a >= 1 for a in seq[1:])
    _convergent_bound_holds(x, seq)


def test_expand_real_rejects_bad_input():
    for bad in (math.inf, math.nan):
        with pytest.raises(ValueError):
            expand_real(bad)
    with pytest.raises(ValueError):
        expand_real(1.5, 0)
    with pytest.raises(ValueError):
        expand_real(1.5, 5, 0.0)


def test_continuant_growth_with_equal_elements():
    for s in (10**3, 10**6):
        for k in range(0, 6):
            pq = continuant_pair([F(s)] * (k + 1))
            assert abs(pq.p / F(s) ** (k + 1) - 1) <= F(1, 100)


# -- parsing and serialization --------------------------------------------------


def test_parse_and_serialize():
    assert parse_seq("2,-1, 3,-1/2") == [2, -1, 3, F(-1, 2)]
    assert isinstance(parse_scalar("0.5"), float)
    assert parse_scalar("6/4") == F(3, 2)
    assert serialize_seq([F(3, 2), 4, F(-1, 1)]) == ["3/2", "4", "-1"]
    assert format_scalar(0.25) == "0.25"
    with pytest.raises(ValueError):
        parse_scalar("1/0")
    with pytest.raises(ValueError):
        parse_seq(" , ")


@given(st.lists(rationals, min_size=1, max_size=8))
def test_serialization_roundtrip(seq):
    assert parse_seq(",".join(serialize_seq(seq))) == seq
