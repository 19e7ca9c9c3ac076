"""Seed families, the insertion schedule and the splice map.

A seed x = [a_1, a_2, ...] is drawn digit by digit from F(alpha)
(floor((N0+n)^(1/alpha)) + 1 <= a_n <= 2 floor((N0+n)^(1/alpha))) or, when
alpha = 0, from F(0) (floor(e^n) + 1 <= a_n <= floor(2 e^n)). Pairs (c_j, e_j)
of size about n_j^(lam-1) and n_j^(lam^2-lam) are spliced in right after the
seed digit a_{r_j}, where r_j is the first seed index at which the
denominator of the partially built word reaches n_j.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ._numeric import (
    certified_floor,
    floor_exp,
    floor_rational_power,
    int_to_str,
    log_int,
    to_fraction,
)
from .core import CFWord
from .diagnostics import ratio_at
from .logspace import LogWord, log_denominators, log_q_step

DEFAULT_DIGIT_BUDGET = 10**5
DEFAULT_ALPHA0_N1 = 10**6
SELECTORS = ("min", "max", "seeded-random")
MODES = ("exact", "logspace")


class BudgetExceeded(RuntimeError):
    def __init__(self, level: int, digits: float, budget: int):
        super().__init__(
            f"level j={level}: n_j has about {digits:.0f} decimal digits, over the budget of {budget}"
        )
        self.level = level
        self.digits = digits
        self.budget = budget


class FingerprintMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# lambda and parameters


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def lambda_exact(beta) -> Optional[Fraction]:
    """The positive root of lam^2 - beta*lam - 1 = 0 when it is rational."""
    beta = to_fraction(beta)
    root = _exact_sqrt(beta * beta + 4)
    if root is None:
        return None
    return (beta + root) / 2


def lambda_of(beta) -> float:
    """Positive root of lam^2 - beta lam - 1 = 0, i.e. lam - 1/lam = beta."""
    b = float(to_fraction(beta))
    if not b > 0:
        raise ValueError("beta must be positive for the construction")
    return (b + math.sqrt(b * b + 4.0)) / 2.0


@dataclass(frozen=True)
class ConstructionParams:
    alpha: Fraction
    beta: Fraction
    lam: float
    lam_exact: Optional[Fraction]
    N0: Optional[int]
    n1: int

    @property
    def alpha_zero(self) -> bool:
        return self.alpha == 0

    @property
    def c_exponent(self) -> float:
        return self.lam - 1.0

    @property
    def e_exponent(self) -> float:
        return self.lam * self.lam - self.lam

    def _interval_lambda(self, ctx):
        b = ctx.mpf(self.beta.numerator) / self.beta.denominator
        return (b + ctx.sqrt(b * b + 4)) / 2

    def _exponent(self, which: str) -> tuple[Fraction, Fraction]:
        """Exponent as A + B*lam, using lam^2 = beta*lam + 1."""
        if which == "c":
            return Fraction(-1), Fraction(1)
        if which == "e":
            return Fraction(1), self.beta - 1
        raise ValueError(f"unknown exponent {which!r}")

    def floor_power(self, n: int, which: str) -> int:
        """floor(n^(lam-1)) for which='c', floor(n^(lam^2-lam)) for which='e'."""
        A, B = self._exponent(which)
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return 1
        if self.lam_exact is not None or B == 0:
            lam = self.lam_exact if self.lam_exact is not None else Fraction(0)
            return floor_rational_power(n, A + B * lam)
        t_float = self.c_exponent if which == "c" else self.e_exponent
        bits = int(n.bit_length() * t_float) + 8

        # an irrational algebraic exponent never gives an integer power, so this terminates
        def expr(ctx):
            lam = self._interval_lambda(ctx)
            t = ctx.mpf(A.numerator) / A.denominator + ctx.mpf(B.numerator) / B.denominator * lam
            return ctx.exp(t * ctx.log(ctx.mpf(n)))

        return certified_floor(expr, bits)

    def seed_floor(self, i: int) -> int:
        """floor((N0+i)^(1/alpha)), the seed range parameter for alpha > 0."""
        return floor_rational_power(self.N0 + i, 1 / self.alpha)

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "lambda": self.lam,
            "lambda_exact": None if self.lam_exact is None else str(self.lam_exact),
            "N0": self.N0,
            "n1": int_to_str(self.n1),
        }


def make_params(alpha, beta, n1: Optional[int] = None) -> ConstructionParams:
    """Populate (alpha, beta, lam, N0, n1).

    For alpha > 0, N0 = floor(2^alpha) + 1 and
    n1 = max(N0, floor((N0+10)^((2 N0 + 20)/alpha))) + 1. For alpha = 0 the
    n1 formula is undefined; ``n1`` is then a size knob (default 10^6) and N0
    is unused.
    """
    if isinstance(alpha, float) and math.isinf(alpha) or alpha in ("inf", "infinity"):
        raise NotImplementedError("alpha = infinity has no construction here")
    alpha = to_fraction(alpha)
    beta = to_fraction(beta)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    lam = lambda_of(beta)
    lam_ex = lambda_exact(beta)
    if alpha == 0:
        return ConstructionParams(alpha, beta, lam, lam_ex, None, n1 if n1 is not None else DEFAULT_ALPHA0_N1)
    N0 = floor_rational_power(2, alpha) + 1
    if n1 is None:
        n1 = max(N0, floor_rational_power(N0 + 10, Fraction(2 * N0 + 20) / alpha)) + 1
    return ConstructionParams(alpha, beta, lam, lam_ex, N0, n1)


# ---------------------------------------------------------------------------
# seeds


class SeedWord:
    """Lazily extended seed digits a_1, a_2, ... from F(alpha) or F(0).

    Reproducible from (params, selector, rng_seed): the seeded-random selector
    draws from one ``random.Random`` stream in index order.
    """

    def __init__(self, params: ConstructionParams, selector: str = "min", rng_seed: int = 0):
        if selector not in SELECTORS:
            raise ValueError(f"unknown selector {selector!r}")
        self.params = params
        self.selector = selector
        self.rng_seed = rng_seed
        self._rng = random.Random(rng_seed)
        self._digits: list[int] = []

    @property
    def family(self) -> str:
        return "F(0)" if self.params.alpha_zero else f"F({self.params.alpha})"

    def bounds(self, i: int) -> tuple[int, int]:
        """Admissible range [lo, hi] for seed digit a_i (1-based)."""
        if i < 1:
            raise IndexError("seed digits are 1-based")
        if self.params.alpha_zero:
            return floor_exp(i) + 1, floor_exp(i, 2)
        m = self.params.seed_floor(i)
        return m + 1, 2 * m

    def digit(self, i: int) -> int:
        while len(self._digits) < i:
            lo, hi = self.bounds(len(self._digits) + 1)
            if self.selector == "min":
                d = lo
            elif self.selector == "max":
                d = hi
            else:
                d = self._rng.randint(lo, hi)
            self._digits.append(d)
        return self._digits[i - 1]

    def prefix(self, n: int) -> CFWord:
        if n > 0:
            self.digit(n)
        return CFWord(tuple(self._digits[:n]))

    def __len__(self) -> int:
        return len(self._digits)

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(self._digits)

    def fingerprint(self) -> str:
        return fingerprint(self.params, self.selector, self.rng_seed)


def fingerprint(params: ConstructionParams, selector: str, rng_seed: int) -> str:
    blob = json.dumps(
        {"params": params.to_dict(), "seed_selector": selector, "rng_seed": rng_seed},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def seed_word(params: ConstructionParams, selector: str = "min", length: int = 1, rng_seed: int = 0) -> SeedWord:
    if length < 1:
        raise ValueError("length must be >= 1")
    seed = SeedWord(params, selector, rng_seed)
    seed.digit(length)
    return seed


def seed_in_family(seed_digits, params: ConstructionParams) -> bool:
    probe = SeedWord(params)
    return all(lo <= a <= hi for a, (lo, hi) in ((a, probe.bounds(i)) for i, a in enumerate(seed_digits, 1)))


# ---------------------------------------------------------------------------
# schedule


@dataclass(frozen=True)
class Level:
    j: int
    log_n: float
    r: int
    m: int
    log_c: float
    log_e: float
    # floor(n_j^(lam-1)) and floor(n_j^(lam^2-lam)): range sizes of c_j and e_j
    log_Mc: float
    log_Me: float
    log_q_m: float
    log_q_m_minus_1: float
    n: Optional[int] = None
    c: Optional[int] = None
    e: Optional[int] = None
    Mc: Optional[int] = None
    Me: Optional[int] = None

    def to_dict(self, mode: str) -> dict:
        d = {
            "j": self.j,
            "log_n_j": self.log_n,
            "r_j": self.r,
            "m_j": self.m,
            "log_q_m_j": self.log_q_m,
            "mode": mode,
        }
        if self.c is not None:
            d["c_j"] = int_to_str(self.c)
            d["e_j"] = int_to_str(self.e)
            d["n_j"] = int_to_str(self.n)
        else:
            d["log_c_j"] = self.log_c
            d["log_e_j"] = self.log_e
        return d


@dataclass(frozen=True)
class Schedule:
    levels: tuple[Level, ...]
    mode: str
    selector: str
    fingerprint: str
    params: ConstructionParams = field(repr=False)

    def __len__(self) -> int:
        return len(self.levels)

    def level(self, j: int) -> Level:
        return self.levels[j - 1]

    @property
    def r(self) -> list[int]:
        return [lv.r for lv in self.levels]

    @property
    def m(self) -> list[int]:
        return [lv.m for lv in self.levels]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "selector": self.selector,
            "fingerprint": self.fingerprint,
            "params": self.params.to_dict(),
            "levels": [lv.to_dict(self.mode) for lv in self.levels],
        }


def _log_n_levels(params: ConstructionParams, j_max: int) -> list[float]:
    """log n_j for j = 1..j_max from n_{j+1} = n_j^j."""
    logs = [log_int(params.n1)]
    for j in range(1, j_max):
        logs.append(j * logs[-1])
    return logs


def _log_floor_plus(log_x: float, plus: int, double: bool) -> float:
    """log(floor(X) + plus) or log(2 floor(X)) from log X, for log-space runs."""
    if log_x < 34.0:
        fx = math.floor(math.exp(log_x))
        return math.log(2 * fx) if double else math.log(fx + plus)
    base = log_x + (math.log(2.0) if double else 0.0)
    return base


def build_schedule(
    params: ConstructionParams,
    seed: SeedWord,
    j_max: int,
    mode: str = "exact",
    selector: str = "min",
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> Schedule:
    """Compute (n_j, c_j, e_j, r_j, m_j) for j = 1..j_max.

    The word is built progressively: after the level j-1 insertion, seed
    digits are appended one at a time until q >= n_j (at least one is always
    appended, so r_j is strictly increasing). In exact mode q is an exact
    integer; in log-space mode only log q is carried through the recursion
    log q_n = log a_n + log q_{n-1} + log(1 + q_{n-2}/(a_n q_{n-1})).
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if selector not in ("min", "max"):
        raise ValueError("c_j/e_j selector must be 'min' or 'max'")
    log_ns = _log_n_levels(params, j_max)
    if mode == "exact":
        for j, ln in enumerate(log_ns, start=1):
            digits = ln / math.log(10.0)
            if digits > digit_budget:
                raise BudgetExceeded(j, digits, digit_budget)
        return _build_exact(params, seed, j_max, selector, log_ns)
    return _build_logspace(params, seed, j_max, selector, log_ns)


def _build_exact(params, seed, j_max, selector, log_ns) -> Schedule:
    levels = []
    q_prev, q = 0, 1
    r = 0
    n = params.n1
    for j in range(1, j_max + 1):
        if j > 1:
            n = n ** (j - 1)
        # seed digits until the threshold is reached
        while True:
            r += 1
            a = seed.digit(r)
            q_prev, q = q, a * q + q_prev
            if q >= n:
                break
        Mc = params.floor_power(n, "c")
        Me = params.floor_power(n, "e")
        c = Mc + 1 if selector == "min" else 2 * Mc
        e = Me + 1 if selector == "min" else 2 * Me
        levels.append(
            Level(
                j=j,
                log_n=log_int(n),
                r=r,
                m=r + 2 * (j - 1),
                log_c=log_int(c),
                log_e=log_int(e),
                log_Mc=log_int(Mc),
                log_Me=log_int(Me),
                log_q_m=log_int(q),
                log_q_m_minus_1=log_int(q_prev),
                n=n,
                c=c,
                e=e,
                Mc=Mc,
                Me=Me,
            )
        )
        q_prev, q = q, c * q + q_prev
        q_prev, q = q, e * q + q_prev
    return Schedule(tuple(levels), "exact", selector, seed.fingerprint(), params)


def _build_logspace(params, seed, j_max, selector, log_ns) -> Schedule:
    levels = []
    lq_prev: Optional[float] = None  # log q_{-1} = log 0
    lq = 0.0
    r = 0
    tc, te = params.c_exponent, params.e_exponent
    for j in range(1, j_max + 1):
        ln = log_ns[j - 1]
        while True:
            r += 1
            la = log_int(seed.digit(r))
            lq_prev, lq = lq, log_q_step(la, lq, lq_prev)
            if lq >= ln:
                break
        log_Mc = _log_floor_plus(tc * ln, 0, False)
        log_Me = _log_floor_plus(te * ln, 0, False)
        double = selector == "max"
        log_c = _log_floor_plus(tc * ln, 1, double)
        log_e = _log_floor_plus(te * ln, 1, double)
        levels.append(
            Level(
                j=j,
                log_n=ln,
                r=r,
                m=r + 2 * (j - 1),
                log_c=log_c,
                log_e=log_e,
                log_Mc=log_Mc,
                log_Me=log_Me,
                log_q_m=lq,
                log_q_m_minus_1=lq_prev,
            )
        )
        lq_prev, lq = lq, log_q_step(log_c, lq, lq_prev)
        lq_prev, lq = lq, log_q_step(log_e, lq, lq_prev)
    return Schedule(tuple(levels), "logspace", selector, seed.fingerprint(), params)


def insert(seed: SeedWord, schedule: Schedule, tail: int = 1):
    """Splice (c_j, e_j) in after seed digit a_{r_j} for every level.

    Returns a CFWord for exact schedules and a LogWord for log-space ones.
    ``tail`` extra seed digits follow the last insertion so that the ratio at
    m_j + 2 is defined at the last level.
    """
    if seed.fingerprint() != schedule.fingerprint:
        raise FingerprintMismatch("seed and schedule were built from different parameters or seed policy")
    exact_digits: list[Optional[int]] = []
    log_digits: list[float] = []
    pos = 0
    for lv in schedule.levels:
        for i in range(pos + 1, lv.r + 1):
            a = seed.digit(i)
            exact_digits.append(a)
            log_digits.append(log_int(a))
        pos = lv.r
        exact_digits += [lv.c, lv.e]
        log_digits += [lv.log_c, lv.log_e]
    for i in range(pos + 1, pos + tail + 1):
        a = seed.digit(i)
        exact_digits.append(a)
        log_digits.append(log_int(a))
    if schedule.mode == "exact":
        return CFWord(tuple(exact_digits))
    return LogWord(tuple(log_digits), tuple(exact_digits))


def seed_subsequence(word, schedule: Schedule) -> list[int]:
    """Seed digits recovered from a constructed word by removing the inserted pairs."""
    inserted = set()
    for lv in schedule.levels:
        inserted.update((lv.m + 1, lv.m + 2))
    digits = word.exact if isinstance(word, LogWord) else tuple(word)
    return [d for k, d in enumerate(digits, start=1) if k not in inserted]


# ---------------------------------------------------------------------------
# membership diagnostics

TAU_EPSILONS = (0.1, 0.05, 0.025)


@dataclass(frozen=True)
class LevelReport:
    j: int
    m: int
    ratio_m: float  # -> lam - 1
    ratio_m1: float  # -> beta
    ratio_m2: Optional[float]  # -> 1 - 1/lam
    offblock_max: Optional[float]
    q_band: float  # log q_{m_j} / log n_j
    tau_partial: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "m_j": self.m,
            "ratio_m_j": self.ratio_m,
            "ratio_m_j_plus_1": self.ratio_m1,
            "ratio_m_j_plus_2": self.ratio_m2,
            "offblock_max": self.offblock_max,
            "log_q_m_over_log_n": self.q_band,
            "tau_partial_sums": [list(row) for row in self.tau_partial],
        }


@dataclass(frozen=True)
class MembershipReport:
    levels: tuple[LevelReport, ...]
    limit_m: float
    limit_m1: float
    limit_m2: float

    def to_dict(self) -> dict:
        return {
            "limits": {"m_j": self.limit_m, "m_j_plus_1": self.limit_m1, "m_j_plus_2": self.limit_m2},
            "levels": [lv.to_dict() for lv in self.levels],
        }


def membership_report(constructed, schedule: Schedule, params: ConstructionParams) -> MembershipReport:
    """Per-level block ratios, off-block maxima and tau partial sums.

    At n = m_j, m_j + 1, m_j + 2 the ratios log(b_n b_{n+1}) / log q_n tend to
    lam - 1, beta and 1 - 1/lam; between blocks they should shrink.
    """
    if len(schedule) < 2:
        raise ValueError("membership report needs schedule depth >= 2")
    lq = log_denominators(constructed)
    N = len(constructed)
    lam = params.lam
    alpha = float(params.alpha)
    sums = {eps: 0.0 for eps in TAU_EPSILONS}
    out = []
    for idx, lv in enumerate(schedule.levels):
        m = lv.m
        r0 = ratio_at(constructed, m, lq)
        r1 = ratio_at(constructed, m + 1, lq)
        r2 = ratio_at(constructed, m + 2, lq) if m + 3 <= N else None
        stop = schedule.levels[idx + 1].m - 1 if idx + 1 < len(schedule) else N - 1
        between = [ratio_at(constructed, n, lq) for n in range(m + 3, stop + 1)]
        for eps in TAU_EPSILONS:
            s = alpha + eps
            sums[eps] += math.exp(-s * lv.log_c) + math.exp(-s * lv.log_e)
        out.append(
            LevelReport(
                j=lv.j,
                m=m,
                ratio_m=r0,
                ratio_m1=r1,
                ratio_m2=r2,
                offblock_max=max(between) if between else None,
                q_band=lq[m] / lv.log_n,
                tau_partial=tuple((eps, sums[eps]) for eps in TAU_EPSILONS),
            )
        )
    return MembershipReport(tuple(out), lam - 1.0, float(params.beta), 1.0 - 1.0 / lam)


__all__ = [
    "BudgetExceeded",
    "ConstructionParams",
    "FingerprintMismatch",
    "Level",
    "LevelReport",
    "MembershipReport",
    "Schedule",
    "SeedWord",
    "build_schedule",
    "fingerprint",
    "insert",
    "lambda_exact",
    "lambda_of",
    "make_params",
    "membership_report",
    "seed_in_family",
    "seed_subsequence",
    "seed_word",
]
