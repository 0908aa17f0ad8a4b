from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from singlink.errors import NotCoprime, OutOfRange, ParseError, WeightTooSmall
from singlink.graph import determinant, is_bamboo, is_negative_definite
from singlink.lens import (
    HJBamboo,
    LensParams,
    hj_evaluate,
    hj_expand,
    is_S1xS2,
    is_S3,
    lens_equivalent,
    lens_of_bamboo,
    lens_of_quasi_ordinary,
    parse_fraction,
    parse_lens,
    resolve_quasi_ordinary,
    resolve_quasi_ordinary_by_line_blowups,
)


def coprime_pairs(limit):
    return [(n, q) for n in range(2, limit + 1) for q in range(1, n) if gcd(n, q) == 1]


@pytest.mark.parametrize("n,q,weights", [
    (12, 5, [3, 2, 3]),
    (5, 1, [5]),
    (5, 4, [2, 2, 2, 2]),
    (7, 3, [3, 2, 2]),
    (7, 2, [4, 2]),
    (2, 1, [2]),
    (13, 8, [2, 3, 3]),
])
def test_expand_examples(n, q, weights):
    assert hj_expand(n, q) == weights
    assert hj_evaluate(weights) == (n, q)


def test_bamboo_display():
    assert str(hj_expand(12, 5)) == "[3,2,3]"
    assert str(HJBamboo()) == "[]"


def test_expand_rejects_bad_input():
    with pytest.raises(OutOfRange):
        hj_expand(5, 0)
    with pytest.raises(OutOfRange):
        hj_expand(5, 5)
    with pytest.raises(OutOfRange):
        hj_expand(5, 7)
    with pytest.raises(NotCoprime):
        hj_expand(12, 4)


def test_weights_must_be_at_least_two():
    with pytest.raises(WeightTooSmall):
        HJBamboo((3, 1))
    with pytest.raises(WeightTooSmall):
        hj_evaluate([2, 0])


def test_round_trip_up_to_200():
    for n, q in coprime_pairs(200):
        w = hj_expand(n, q)
        assert all(b >= 2 for b in w)
        assert hj_evaluate(w) == (n, q)


@given(st.lists(st.integers(2, 9), min_size=1, max_size=10))
def test_evaluate_then_expand(weights):
    n, q = hj_evaluate(weights)
    assert gcd(n, q) == 1 and 0 < q < n
    assert hj_expand(n, q) == weights


def test_reversal_inverts_q():
    for n, q in coprime_pairs(60):
        n2, q2 = hj_evaluate(hj_expand(n, q).reversed())
        assert n2 == n and (q * q2) % n == 1 % n


def test_bamboo_graph_determinant():
    for n, q in coprime_pairs(50):
        g = hj_expand(n, q).as_graph()
        assert is_bamboo(g)
        assert is_negative_definite(g)
        assert abs(determinant(g)) == n


def test_quasi_ordinary_families():
    for n in range(2, 52):
        assert resolve_quasi_ordinary(n, n - 1) == [n]
        if n % 2 and n >= 3 and n - 2 >= 1:
            assert resolve_quasi_ordinary(n, n - 2) == [(n + 1) // 2, 2]
    assert resolve_quasi_ordinary(5, 1) == [2, 2, 2, 2]


def test_line_blowup_oracle_agrees():
    for n, q in coprime_pairs(50):
        assert resolve_quasi_ordinary_by_line_blowups(n, q) == hj_expand(n, n - q)


def test_lens_of_quasi_ordinary():
    assert lens_of_quasi_ordinary(5, 4) == LensParams(5, 1)
    assert str(lens_of_quasi_ordinary(12, 7)) == "L(12,5)"
    for n, q in coprime_pairs(50):
        lens = lens_of_quasi_ordinary(n, q)
        assert lens == LensParams(n, n - q)
        assert lens_equivalent(lens_of_bamboo(resolve_quasi_ordinary(n, q)), lens)


def test_lens_params_validation():
    assert LensParams.of(7, -2) == LensParams(7, 5)
    assert LensParams(0, -1) == LensParams(0, 1)
    assert is_S1xS2(LensParams(0, 1))
    assert is_S3(LensParams(1, 0))
    assert is_S3(lens_of_bamboo([]))
    with pytest.raises(NotCoprime):
        LensParams(6, 2)
    with pytest.raises(OutOfRange):
        LensParams(5, 5)
    with pytest.raises(OutOfRange):
        LensParams(-3, 1)


def test_lens_equivalence_examples():
    assert lens_equivalent(LensParams(5, 2), LensParams(5, 3), oriented=True)  # 2*3 = 1
    assert not lens_equivalent(LensParams(5, 1), LensParams(5, 2))
    assert not lens_equivalent(LensParams(5, 1), LensParams(5, 4))
    assert lens_equivalent(LensParams(5, 1), LensParams(5, 4), oriented=False)
    assert lens_equivalent(LensParams(7, 2), LensParams(7, 4))
    assert not lens_equivalent(LensParams(7, 1), LensParams(7, 2), oriented=False)
    assert not lens_equivalent(LensParams(7, 1), LensParams(8, 1))
    assert lens_equivalent(LensParams(0, 1), LensParams(0, 1))


def _naive_classes(n, oriented):
    """Orbits of q under inversion (and negation when unoriented)."""
    units = [q for q in range(1, n) if gcd(n, q) == 1]
    inv = {q: pow(q, -1, n) for q in units}
    rel = {}
    for q in units:
        orbit = {q, inv[q]}
        if not oriented:
            orbit |= {(-x) % n for x in orbit}
        rel[q] = orbit
    return rel


def test_lens_equivalence_against_orbits():
    for n in range(3, 40):
        for oriented in (True, False):
            rel = _naive_classes(n, oriented)
            for q1 in rel:
                for q2 in rel:
                    assert lens_equivalent(LensParams(n, q1), LensParams(n, q2), oriented) == (q2 in rel[q1])


def test_lens_equivalence_is_an_equivalence_relation():
    for n in range(3, 25):
        units = [q for q in range(1, n) if gcd(n, q) == 1]
        for oriented in (True, False):
            for a in units:
                la = LensParams(n, a)
                assert lens_equivalent(la, la, oriented)
                for b in units:
                    lb = LensParams(n, b)
                    assert lens_equivalent(la, lb, oriented) == lens_equivalent(lb, la, oriented)


def test_parsing():
    assert parse_fraction(" 12 / 5 ") == (12, 5)
    assert parse_lens("L(7, 9)") == LensParams(7, 2)
    with pytest.raises(ParseError):
        parse_fraction("12:5")
    with pytest.raises(ParseError):
        parse_lens("L(7)")


def test_listed_lens_examples():
    for n in range(2, 30):
        assert hj_expand(n, 1) == [n]
        assert resolve_quasi_ordinary(n, 1) == [2] * (n - 1)
        assert lens_of_quasi_ordinary(n, n - 1) == LensParams(n, 1)
        assert lens_of_bamboo([n]) == LensParams(n, 1)
        if n % 2 and n > 2:
            assert lens_of_quasi_ordinary(n, n - 2) == LensParams(n, 2)
    assert hj_expand(5, 3) == [2, 3]
    assert hj_evaluate([]) == (1, 0)
    for k in range(1, 9):
        assert hj_evaluate([2] * k) == (k + 1, k)
    assert lens_of_quasi_ordinary(2, 1) == LensParams(2, 1)
    assert not lens_equivalent(LensParams(7, 2), LensParams(7, 5))
    assert lens_equivalent(LensParams(7, 2), LensParams(7, 5), oriented=False)
    assert not lens_equivalent(LensParams(5, 1), LensParams(7, 1), oriented=False)
    l12 = LensParams(12, 5)
    assert not is_S3(l12) and not is_S1xS2(l12)
