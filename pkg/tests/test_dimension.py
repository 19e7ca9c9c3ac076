import math
import random
from fractions import Fraction

import pytest

from cfdirichlet.construct import build_schedule, insert, lambda_of, make_params, seed_word
from cfdirichlet.core import basic_interval, interval_length
from cfdirichlet.dimension import (
    AT_M,
    AT_M_PLUS_1,
    GENERIC,
    InadmissibleError,
    LevelSpec,
    dimension_formula,
    fundamental_interval,
    fundamental_length,
    gap,
    gap_components,
    hausdorff_verdict,
    jarnik_bounds,
    length_from,
    level_count,
    level_spec_from_schedule,
    local_dim_probe,
    mass,
)
from cfdirichlet.verify import adjacent_gaps, synthetic_specs


@pytest.mark.parametrize(
    "alpha, beta, value",
    [
        ("inf", 2, Fraction(1, 2)),
        (1, Fraction(3, 2), Fraction(1, 3)),
        (5, 0, Fraction(1, 2)),
        (0, 0, Fraction(1, 2)),
        (math.inf, 0, Fraction(1)),
        (2, Fraction(8, 3), Fraction(1, 4)),
    ],
)
def test_dimension_closed_forms(alpha, beta, value):
    assert dimension_formula(alpha, beta) == value


def test_dimension_identity_random_beta():
    rng = random.Random(0)
    for _ in range(100):
        beta = rng.uniform(1e-9, 10)
        d = dimension_formula(1, beta)
        assert abs(d - 1 / (lambda_of(beta) + 1)) <= 1e-12


def test_dimension_decreasing_in_beta():
    betas = [Fraction(k, 4) for k in range(0, 41)]
    for alpha in (1, "inf"):
        vals = [float(dimension_formula(alpha, b)) for b in betas]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_dimension_domain():
    with pytest.raises(ValueError):
        dimension_formula(1, -1)
    with pytest.raises(ValueError):
        dimension_formula(-1, 1)


def test_jarnik():
    lo, hi = jarnik_bounds(8)
    assert lo == pytest.approx(0.8197, abs=1e-4)
    assert hi == pytest.approx(0.9925, abs=1e-4)
    assert lo == pytest.approx(1 - 1 / (8 * math.log(2)), rel=1e-15)
    with pytest.raises(ValueError, match="m >= 8"):
        jarnik_bounds(7)


def test_verdict_grid_gamma_two():
    grid = [Fraction(k, 1000) for k in range(1000)]
    verdicts = [hausdorff_verdict(2, s) for s in grid]
    flips = [s for s, a, b in zip(grid[1:], verdicts, verdicts[1:]) if a != b]
    assert flips == [Fraction(501, 1000)]
    assert hausdorff_verdict(2, Fraction(1, 2)) == "infinite"
    assert hausdorff_verdict(2, 0.6) == "zero"


@pytest.mark.parametrize("gamma", [1, 3, Fraction(1, 2)])
def test_verdict_threshold(gamma):
    t = Fraction(2) / (2 + Fraction(gamma))
    assert hausdorff_verdict(gamma, t) == "infinite"
    assert hausdorff_verdict(gamma, t + Fraction(1, 10**6)) == "zero"


def test_verdict_domain():
    with pytest.raises(ValueError):
        hausdorff_verdict(2, 1)


def test_level_count_and_mass():
    spec = LevelSpec.doubled([2, 1, 3])
    assert [level_count(spec, n) for n in range(4)] == [1, 2, 2, 6]
    assert mass((3, 2), spec) == Fraction(1, 2)
    # total mass is one and splits evenly over children
    for n in range(3):
        words = list(spec.admissible_words(n))
        assert sum(mass(w, spec) for w in words) == 1
    with pytest.raises(InadmissibleError):
        mass((5,), spec)


def test_length_worked_example():
    # q_n = 3, q_{n-1} = 2, next range [3, 4]
    assert length_from(3, 2, 3, 4) == Fraction(2, 187)
    assert length_from(3, 2, 3, 4) == Fraction(1, 11 * 14) + Fraction(1, 14 * 17)
    # single child is just the child cylinder
    assert length_from(3, 2, 2, 2) == Fraction(1, (2 * 3 + 2) * (3 * 3 + 2))


def test_gap_worked_example():
    # (1, 1, 1) has q_3 = 3, q_2 = 2
    spec = LevelSpec.synthetic([(1, 1), (1, 1), (1, 1), (3, 4)])
    w = (1, 1, 1)
    assert fundamental_length(w, spec) == Fraction(2, 187)
    assert gap(w, spec) == Fraction(1, 42)
    assert gap(w, spec) >= fundamental_length(w, spec)


def test_fundamental_length_child_sum_exhaustive():
    for spec in synthetic_specs():
        for n in range(len(spec)):
            for w in spec.admissible_words(n):
                nxt = spec[n + 1]
                kids = sum(interval_length(w + (s,)) for s in range(nxt.lo, nxt.hi + 1))
                left, right = fundamental_interval(w, spec)
                assert fundamental_length(w, spec) == kids == right - left


def test_gap_components_match_endpoints():
    for spec in synthetic_specs(3, 3):
        for n in range(1, len(spec)):
            for w in spec.admissible_words(n):
                iv = basic_interval(w)
                left, right = fundamental_interval(w, spec)
                assert sorted(gap_components(w, spec)) == sorted((left - iv.left, iv.right - right))
                assert gap(w, spec) >= fundamental_length(w, spec)


def test_gap_is_lower_bound_for_neighbour_distance():
    for spec in synthetic_specs(3, 3):
        for n in range(1, len(spec)):
            for w, d in adjacent_gaps(spec, n).items():
                assert gap(w, spec) <= d


def test_holder_worked_example():
    mu, J = Fraction(1, 12), Fraction(2, 187)
    assert math.log(mu) / math.log(J) == pytest.approx(math.log(12) / math.log(187 / 2))
    assert math.log(12) / math.log(187 / 2) == pytest.approx(0.547, abs=1e-3)


def test_probe_synthetic_exact():
    spec = LevelSpec.doubled([2, 2, 3, 2])
    probes = local_dim_probe((3, 4, 5), spec, [1, 2, 3])
    for pr in probes:
        assert pr.mu == mass((3, 4, 5)[: pr.n], spec)
        assert pr.J_length == fundamental_length((3, 4, 5)[: pr.n], spec)
        assert 0 < pr.mu <= 1 and pr.J_length > 0 and pr.gap >= pr.J_length
        assert pr.holder == pytest.approx(math.log(pr.mu) / math.log(pr.J_length))


@pytest.fixture(scope="module")
def construction():
    p = make_params(1, Fraction(3, 2))
    s = seed_word(p)
    sch = build_schedule(p, s, 5, "exact")
    w = insert(s, sch)
    return p, s, sch, w


def test_spec_from_schedule(construction):
    p, s, sch, w = construction
    spec = level_spec_from_schedule(sch, s)
    assert len(spec) == len(w)
    for lv in sch.levels:
        assert spec.position_class(lv.m) == AT_M
        assert spec.position_class(lv.m + 1) == AT_M_PLUS_1
        assert (spec[lv.m + 1].lo, spec[lv.m + 1].hi) == (lv.Mc + 1, 2 * lv.Mc)
    assert spec.position_class(1) == GENERIC
    for k, d in enumerate(w, 1):
        assert spec[k].admits(d)


def test_probe_log_path_matches_exact(construction):
    p, s, sch, w = construction
    spec = level_spec_from_schedule(sch, s)
    ls = build_schedule(p, seed_word(p), 5, "logspace")
    lw = insert(seed_word(p), ls)
    lspec = level_spec_from_schedule(ls, seed_word(p))
    depths = [lv.m for lv in sch.levels]
    exact = local_dim_probe(w, spec, depths)
    approx = local_dim_probe(lw, lspec, depths)
    for a, b in zip(exact, approx):
        assert a.mu is not None
        assert a.holder == pytest.approx(b.holder, rel=1e-6)
