"""Property suites for the classical continued-fraction bounds, runnable from the CLI.

Each suite returns a ``SuiteResult`` counting checked cases and violations;
none of them raise on a violation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .core import (
    basic_interval,
    check_growth_bounds,
    convergents,
    deletion_ratio,
    evaluate,
    interval_length,
)
from .dimension import LevelSpec, fundamental_interval, fundamental_length, gap, gap_components


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    violations: int = 0
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.cases > 0

    def fail(self, example) -> None:
        self.violations += 1
        if len(self.examples) < 5:
            self.examples.append(example)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "violations": self.violations,
            "ok": self.ok,
            "examples": [str(e) for e in self.examples],
        }


def small_words(max_len: int = 6, max_digit: int = 4):
    for n in range(1, max_len + 1):
        yield from itertools.product(range(1, max_digit + 1), repeat=n)


def random_words(count: int, max_len: int, max_digit: int, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_len)
        yield tuple(rng.randint(1, max_digit) for _ in range(n))


def convergent_oracle(max_len: int = 6, max_digit: int = 4) -> SuiteResult:
    """Recursion against nested-fraction evaluation, plus the determinant identity."""
    res = SuiteResult("convergent-oracle")
    for w in small_words(max_len, max_digit):
        res.cases += 1
        cs = convergents(w)
        if cs[-1].value != evaluate(w):
            res.fail(w)
            continue
        p_prev, q_prev = 0, 1  # (p_0, q_0)
        for k, c in enumerate(cs, start=1):
            if c.p * q_prev - p_prev * c.q != (-1) ** (k - 1):
                res.fail(w)
                break
            p_prev, q_prev = c.p, c.q
    return res


def growth_suite(count: int = 10_000, max_len: int = 50, max_digit: int = 10**6, seed: int = 0) -> SuiteResult:
    res = SuiteResult("growth-bounds")
    for w in random_words(count, max_len, max_digit, seed):
        res.cases += 1
        if not all(c.ok for c in check_growth_bounds(w)):
            res.fail(w)
    return res


def deletion_suite(count: int = 10_000, max_len: int = 50, max_digit: int = 10**6, seed: int = 1) -> SuiteResult:
    res = SuiteResult("deletion-ratio")
    rng = random.Random(seed)
    for w in random_words(count, max_len, max_digit, seed):
        k = rng.randint(1, len(w))
        res.cases += 1
        if not deletion_ratio(w, k).ok:
            res.fail((w, k))
    return res


def interval_suite(max_len: int = 6, max_digit: int = 4, count: int = 10_000, seed: int = 0) -> SuiteResult:
    """Closed-form length against endpoint difference, small words plus the random corpus."""
    res = SuiteResult("basic-interval-length")
    corpus = itertools.chain(small_words(max_len, max_digit), random_words(count, 50, 10**6, seed))
    for w in corpus:
        res.cases += 1
        iv = basic_interval(w)
        if iv.length != interval_length(w) or iv.length <= 0:
            res.fail(w)
    return res


def synthetic_specs(max_positions: int = 4, max_size: int = 3):
    """Every doubled-range spec with 2..max_positions positions and sizes 1..max_size."""
    for n in range(2, max_positions + 1):
        for sizes in itertools.product(range(1, max_size + 1), repeat=n):
            yield LevelSpec.doubled(sizes)


def fundamental_length_suite(max_positions: int = 4, max_size: int = 3) -> SuiteResult:
    res = SuiteResult("fundamental-length")
    for spec in synthetic_specs(max_positions, max_size):
        for n in range(0, len(spec)):
            for w in spec.admissible_words(n):
                res.cases += 1
                nxt = spec[n + 1]
                child_sum = sum(interval_length(w + (s,)) for s in range(nxt.lo, nxt.hi + 1))
                if fundamental_length(w, spec) != child_sum:
                    res.fail((spec, w))
    return res


def gap_suite(max_positions: int = 4, max_size: int = 3) -> SuiteResult:
    """gap >= |J_n| and the exact endpoint gaps match interval arithmetic."""
    res = SuiteResult("gap-bounds")
    for spec in synthetic_specs(max_positions, max_size):
        for n in range(1, len(spec)):
            for w in spec.admissible_words(n):
                res.cases += 1
                J = fundamental_length(w, spec)
                left, right = fundamental_interval(w, spec)
                iv = basic_interval(w)
                d1, d2 = gap_components(w, spec)
                if gap(w, spec) < J or sorted((d1, d2)) != sorted((left - iv.left, iv.right - right)):
                    res.fail((spec, w))
    return res


def adjacent_gaps(spec: LevelSpec, n: int) -> dict:
    """Brute-force min distance from each J_n to its nearest same-order neighbour.

    All admissible words of length n are enumerated and their closed
    fundamental intervals sorted by left endpoint. Words with no neighbour
    (a single admissible word) are left out.
    """
    ivs = sorted((fundamental_interval(w, spec), w) for w in spec.admissible_words(n))
    out = {}
    for i, ((left, right), w) in enumerate(ivs):
        cands = []
        if i > 0:
            cands.append(left - ivs[i - 1][0][1])
        if i + 1 < len(ivs):
            cands.append(ivs[i + 1][0][0] - right)
        if cands:
            out[w] = min(cands)
    return out


def gap_oracle_suite(max_positions: int = 4, max_size: int = 3) -> SuiteResult:
    """gap() against the brute-force adjacent-interval distance, exact equality."""
    res = SuiteResult("gap-oracle")
    for spec in synthetic_specs(max_positions, max_size):
        for n in range(1, len(spec)):
            for w, d in adjacent_gaps(spec, n).items():
                res.cases += 1
                if gap(w, spec) != d:
                    res.fail((tuple((p.lo, p.hi) for p in spec.positions), w, gap(w, spec), d))
    return res


def run_all(quick: bool = False) -> list[SuiteResult]:
    count = 1000 if quick else 10_000
    return [
        convergent_oracle(),
        growth_suite(count),
        deletion_suite(count),
        interval_suite(count=count),
        fundamental_length_suite(),
        gap_suite(),
        gap_oracle_suite(),
    ]
