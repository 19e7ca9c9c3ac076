import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cfdirichlet.core import (
    BasicInterval,
    CFWord,
    EmptyWordError,
    basic_interval,
    check_growth_bounds,
    convergents,
    deletion_ratio,
    evaluate,
    expand_rational,
    expand_real,
    format_word,
    interval_length,
    parse_word,
    q_of,
    seeds,
)

digits = st.integers(min_value=1, max_value=10**6)
words = st.lists(digits, min_size=1, max_size=50)


def nested(word):
    # independent oracle: evaluate the continued fraction top-down by recursion
    if len(word) == 1:
        return Fraction(1, word[0])
    return 1 / (word[0] + nested(word[1:]))


def test_word_rejects_zero_digit():
    with pytest.raises(ValueError):
        CFWord((2, 0, 3))


def test_empty_word_is_root_cylinder():
    iv = basic_interval(CFWord())
    assert (iv.left, iv.right, iv.closed_left, iv.closed_right, iv.order) == (0, 1, True, False, 0)
    (pm1, p0) = seeds()
    assert (pm1.p, pm1.q, p0.p, p0.q) == (1, 0, 0, 1)
    assert q_of(()) == 1


def test_word_serialization_roundtrip():
    w = parse_word("2,3,10000000000000000000000")
    assert format_word(w) == "2,3,10000000000000000000000"
    assert parse_word("") == CFWord()
    with pytest.raises(ValueError):
        parse_word("2,x")


@pytest.mark.parametrize(
    "word, expected",
    [
        ([1], [(1, 1)]),
        ([2, 3], [(1, 2), (3, 7)]),
        ([1, 2, 3], [(1, 1), (2, 3), (7, 10)]),
    ],
)
def test_convergents_examples(word, expected):
    assert [(c.p, c.q) for c in convergents(word)] == expected


def test_convergents_empty_word():
    with pytest.raises(EmptyWordError, match="empty word has no convergents"):
        convergents([])
    with pytest.raises(EmptyWordError):
        evaluate([])


@pytest.mark.parametrize(
    "word, value",
    [([1], Fraction(1)), ([2, 3], Fraction(3, 7)), ([1, 1, 1, 1, 1], Fraction(5, 8))],
)
def test_evaluate_examples(word, value):
    assert evaluate(word) == value == nested(word)


def test_convergent_matches_evaluate_exhaustive():
    for n in range(1, 5):
        for w in itertools.product(range(1, 5), repeat=n):
            assert convergents(w)[-1].value == evaluate(w)


@given(words)
def test_determinant_identity(word):
    p_prev, q_prev = 0, 1
    for k, c in enumerate(convergents(word), start=1):
        assert c.p * q_prev - p_prev * c.q == (-1) ** (k - 1)
        if k >= 2:
            assert c.q > q_prev
        p_prev, q_prev = c.p, c.q


def test_convergents_are_exact_for_huge_digits():
    w = [10**40, 10**40 + 7, 3]
    assert convergents(w)[-1].value == nested(w)


@pytest.mark.parametrize(
    "value, word, trusted",
    [(Fraction(3, 7), [2, 3], 2), (Fraction(1, 2), [2], 1), ("3/7", [2, 3], 2), ("0.5", [2], 1)],
)
def test_expand_exact(value, word, trusted):
    assert expand_real(value) == (CFWord(tuple(word)), trusted)


def test_expand_is_canonical():
    w, _ = expand_real(Fraction(3, 7))
    assert w[-1] >= 2


@pytest.mark.parametrize("bad", [Fraction(0), Fraction(1), Fraction(6, 5), "1.2", "-0.1"])
def test_expand_domain(bad):
    with pytest.raises(ValueError):
        expand_real(bad)


def test_expand_decimal_interval():
    # oracle: expand both interval endpoints exactly and keep the common prefix
    lo = expand_rational(Fraction("0.41420"))
    hi = expand_rational(Fraction("0.41422"))
    common = []
    for a, b in zip(lo, hi):
        if a != b:
            break
        common.append(a)
    word, trusted = expand_real("0.41421", precision=5)
    assert list(word) == [2, 2, 2, 2, 2]
    assert trusted == 5
    # the last common endpoint digit may still straddle a cylinder boundary
    assert list(word) == common[: len(word)]


def test_expand_decimal_precision_exhausted():
    word, trusted = expand_real("0.5", precision=1)
    assert (len(word), trusted) == (0, 0)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6), st.integers(3, 30))
def test_expand_decimal_digits_are_certified(word, k):
    # every certified digit is shared by both ends of the uncertainty interval
    x = evaluate(word)
    assume_in = Fraction(1, 10**k) < x < 1 - Fraction(1, 10**k)
    if not assume_in:
        return
    v = Fraction(round(x * 10**k), 10**k)
    if not 0 < v < 1:
        return
    got, trusted = expand_real(v, precision=k)
    for end in (v - Fraction(1, 10**k), v + Fraction(1, 10**k)):
        if 0 < end < 1:
            assert list(expand_rational(end))[:trusted] == list(got)


def test_expand_inverts_evaluate_small():
    for n in range(1, 6):
        for w in itertools.product(range(1, 5), repeat=n):
            if n >= 2 and w[-1] < 2:
                continue
            if n == 1 and w[0] == 1:
                continue  # [1] = 1 is outside (0, 1)
            assert tuple(expand_real(evaluate(w))[0]) == w


@pytest.mark.parametrize(
    "word, left, right, closed_left, closed_right, length",
    [
        ([1], Fraction(1, 2), Fraction(1), False, True, Fraction(1, 2)),
        ([2], Fraction(1, 3), Fraction(1, 2), False, True, Fraction(1, 6)),
        ([1, 2], Fraction(2, 3), Fraction(3, 4), True, False, Fraction(1, 12)),
    ],
)
def test_basic_interval_examples(word, left, right, closed_left, closed_right, length):
    iv = basic_interval(word)
    assert (iv.left, iv.right, iv.closed_left, iv.closed_right) == (left, right, closed_left, closed_right)
    assert iv.length == length == interval_length(word)


@given(st.lists(st.integers(1, 50), min_size=1, max_size=12))
def test_basic_interval_contains_its_points(word):
    iv = basic_interval(word)
    assert evaluate(word) in iv
    # p_n/q_n sits at the closed end, so the point belongs and the mediant end does not
    if len(word) >= 1:
        longer = list(word) + [3, 5]
        assert evaluate(longer) in iv


def test_interval_serialization():
    iv = basic_interval([1, 2])
    d = json.loads(iv.to_json())
    assert d == {"left": "2/3", "right": "3/4", "closed_left": True, "closed_right": False, "order": 2}
    assert BasicInterval.from_dict(d) == iv


def test_cylinders_with_digits_one_two_do_not_overlap():
    for n in range(1, 7):
        ivs = sorted((basic_interval(w) for w in itertools.product((1, 2), repeat=n)), key=lambda i: i.left)
        assert len(ivs) == 2**n
        for a, b in zip(ivs, ivs[1:]):
            assert a.right <= b.left
        total = sum(i.length for i in ivs)
        # exact union length: endpoints sorted, no overlaps, so sum == measure of union
        assert total == sum(b.right - b.left for b in ivs)
        # consecutive cylinders of the same parent touch exactly
        touching = sum(1 for a, b in zip(ivs, ivs[1:]) if a.right == b.left)
        assert touching >= 2 ** (n - 1)


def test_growth_examples():
    rows = check_growth_bounds([1, 1, 1])
    assert rows[-1].q == 3 and all(r.ok for r in rows)
    (row,) = check_growth_bounds([5])
    assert row.q == 5 and row.ok


@settings(max_examples=300)
@given(words)
def test_growth_bounds_hold(word):
    assert all(r.ok for r in check_growth_bounds(word))


def test_deletion_ratio_examples():
    d = deletion_ratio([2], 1)
    assert (d.ratio, d.lower, d.upper) == (2, Fraction(3, 2), 3) and d.ok
    d = deletion_ratio([1, 2, 3], 2)
    assert d.ratio == Fraction(5, 2) and d.ok


def test_deletion_ratio_range():
    with pytest.raises(IndexError):
        deletion_ratio([1, 2], 3)
    with pytest.raises(IndexError):
        deletion_ratio([1, 2], 0)


@given(words, st.data())
def test_deletion_ratio_bounds(word, data):
    k = data.draw(st.integers(1, len(word)))
    assert deletion_ratio(word, k).ok
