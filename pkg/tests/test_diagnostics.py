import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cfdirichlet.core import denominators
from cfdirichlet.diagnostics import (
    ApproximationRate,
    DirichletThresholdError,
    Psi_function,
    dirichlet_ratio_trace,
    g_psi_hits,
    gauss_kuzmin_word,
    levy_to_csv,
    levy_trace,
    psi_to_Psi,
    tau_estimate,
)
from cfdirichlet.logspace import LogWord


def test_tau_geometric_digits():
    est = tau_estimate([2**n for n in range(1, 1001)])
    assert 0 <= est.value <= 0.02


def test_tau_linear_digits():
    est = tau_estimate(list(range(1, 10_001)))
    assert 0.95 <= est.value <= 1.05
    assert est.window == (5000, 10_000)
    # corroboration: the partial sum just above the estimate is the smaller one
    (s_lo, sum_lo), (s_hi, sum_hi) = est.partial_sums
    assert s_lo < s_hi and sum_hi < sum_lo


def test_tau_all_ones_is_infinite():
    assert math.isinf(tau_estimate([1] * 200).value)


def test_tau_short_window():
    with pytest.raises(ValueError, match="window too short"):
        tau_estimate([5] * 99)


@settings(max_examples=30)
@given(st.lists(st.integers(1, 10**9), min_size=100, max_size=300), st.randoms())
def test_tau_depends_only_on_rearrangement(digits, rnd):
    shuffled = list(digits)
    rnd.shuffle(shuffled)
    assert tau_estimate(digits).value == tau_estimate(shuffled).value


def test_tau_gauss_kuzmin_words_are_infinite():
    hits = sum(math.isinf(tau_estimate(gauss_kuzmin_word(2000, seed)).value) for seed in range(20))
    assert hits >= 19


def test_gauss_kuzmin_law():
    digits = gauss_kuzmin_word(200_000, seed=7)
    for k in (1, 2, 3):
        p = math.log2(1 + 1 / (k * (k + 2)))
        freq = digits.count(k) / len(digits)
        assert abs(freq - p) < 0.005


def test_ratio_trace_all_ones():
    tr = dirichlet_ratio_trace([1] * 12)
    assert [r for _, r in tr.entries] == [0.0] * 10
    assert set(tr.running_sup) == {0.0}


def test_ratio_trace_example():
    tr = dirichlet_ratio_trace([1, 1, 1, 1, 8])
    assert [n for n, _ in tr.entries] == [2, 3, 4]
    n, r = tr.entries[-1]
    assert n == 4
    assert r == pytest.approx(math.log(8) / math.log(5), rel=1e-12)
    assert r == pytest.approx(1.292, abs=1e-3)


def test_ratio_trace_csv_header():
    text = dirichlet_ratio_trace([1, 2, 3, 4]).to_csv()
    assert text.splitlines()[0] == "n,ratio,running_sup"


@settings(max_examples=50)
@given(st.lists(st.integers(1, 10**6), min_size=3, max_size=40), st.lists(st.integers(1, 10**6), max_size=10))
def test_running_sup_monotone_under_extension(word, extra):
    short = dirichlet_ratio_trace(word)
    long = dirichlet_ratio_trace(word + extra)
    assert all(a <= b for a, b in zip(long.running_sup, long.running_sup[1:]))
    assert long.running_sup[: len(short.running_sup)] == short.running_sup
    assert all(r >= 0 for _, r in long.entries)


def test_ratio_trace_logword_matches_exact():
    rng = random.Random(3)
    word = [rng.randint(1, 10**12) for _ in range(40)]
    exact = dirichlet_ratio_trace(word)
    approx = dirichlet_ratio_trace(LogWord(tuple(math.log(a) for a in word)))
    for (_, a), (_, b) in zip(exact.entries, approx.entries):
        assert a == pytest.approx(b, rel=1e-12)


def test_levy_examples():
    trace = levy_trace([1] * 10)
    assert trace[-1] == (10, pytest.approx(math.log(89) / 10, rel=1e-12))
    assert trace[-1][1] == pytest.approx(0.449, abs=1e-3)
    assert levy_trace([5]) == [(1, pytest.approx(math.log(5)))]
    assert levy_to_csv(trace).splitlines()[0] == "n,levy"


def test_levy_increasing_for_linear_digits():
    trace = levy_trace(list(range(1, 400)))
    values = [v for _, v in trace]
    assert all(a < b for a, b in zip(values, values[1:]))
    # q_n >= n! so log q_n / n >= log(n!)/n
    assert values[-1] >= math.lgamma(400) / 399


def test_psi_to_Psi_examples():
    assert psi_to_Psi(ApproximationRate(Fraction(1, 2), 1), 17) == 1
    assert psi_to_Psi(ApproximationRate(1, 2), 10) == Fraction(1, 9)
    with pytest.raises(DirichletThresholdError, match="Dirichlet threshold exceeded"):
        psi_to_Psi(ApproximationRate(1, 1), 5)


def test_psi_to_Psi_noninteger_gamma():
    rate = ApproximationRate(1, Fraction(3, 2))
    q = 100
    x = q**-0.5
    assert psi_to_Psi(rate, q) == pytest.approx(x / (1 - x), rel=1e-12)


@given(st.fractions(min_value=0, max_value=Fraction(999, 1000)), st.fractions(min_value=0, max_value=Fraction(999, 1000)))
def test_Psi_strictly_increasing(x, y):
    if x == y:
        return
    # gamma = 1 makes q psi(q) = c, so c sweeps [0, 1)
    fx = psi_to_Psi(ApproximationRate(x, 1), 3) if x > 0 else Fraction(0)
    fy = psi_to_Psi(ApproximationRate(y, 1), 3) if y > 0 else Fraction(0)
    assert (fx < fy) == (x < y)


def test_g_psi_hits_examples():
    ones = [1] * 8
    assert g_psi_hits(ones, 1) == list(range(1, 8))
    assert g_psi_hits(ones, 2) == []
    alt = [1, 3] * 5
    assert g_psi_hits(alt, lambda q: 3) == list(range(1, 10))


def test_g_psi_float_tolerance():
    assert g_psi_hits([1, 3, 1], lambda q: 3.0000000001) == [1, 2]
    assert g_psi_hits([1, 3, 1], lambda q: 3.001) == []


@settings(max_examples=50)
@given(st.lists(st.integers(1, 10**4), min_size=3, max_size=30), st.integers(2, 4))
def test_sandwich_containment(word, gamma):
    rate = ApproximationRate(Fraction(1, 3), gamma)
    Psi = Psi_function(rate)
    strict = set(g_psi_hits(word, Psi))
    loose = set(g_psi_hits(word, lambda q: Psi(q) / 4))
    assert strict <= loose


def test_hits_compare_exactly_for_rationals():
    word = [2, 5, 1]
    qs = denominators(word)
    # Psi(q_1) exactly equal to the product counts as a hit
    assert 1 in g_psi_hits(word, lambda q: Fraction(10) if q == qs[1] else Fraction(10**9))
