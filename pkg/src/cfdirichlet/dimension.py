"""Closed-form dimensions and the measure on the Cantor-type set.

The symbolic level sets are described by a ``LevelSpec``: an admissible
range [lo_k, hi_k] per digit position. The measure gives every admissible
word of length n the same mass 1 / #D_n, and a fundamental interval J_n is
the union of the closed child cylinders over the admissible next digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ._numeric import log_int, to_fraction
from .core import as_word, endpoints
from .logspace import LogWord, log_denominators

GENERIC = "generic"
AT_M = "m_j"
AT_M_PLUS_1 = "m_j_plus_1"


# ---------------------------------------------------------------------------
# closed forms


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x) or (isinstance(x, str) and x.strip().lower() in ("inf", "infinity"))


def dimension_formula(alpha, beta):
    """Hausdorff dimension of G(alpha, beta) = E(alpha, beta).

    alpha = inf gives 2/(beta+2); finite alpha gives 2/(beta + 2 + sqrt(beta^2 + 4)).
    Returned as a Fraction whenever the value is rational, float otherwise.
    """
    if _is_inf(beta):
        raise ValueError("beta must be finite")
    b = to_fraction(beta)
    if b < 0:
        raise ValueError("beta must be >= 0")
    if _is_inf(alpha):
        return 2 / (b + 2)
    if to_fraction(alpha) < 0:
        raise ValueError("alpha must be >= 0")
    d = b * b + 4
    rn, rd = math.isqrt(d.numerator), math.isqrt(d.denominator)
    if rn * rn == d.numerator and rd * rd == d.denominator:
        return 2 / (b + 2 + Fraction(rn, rd))
    bf = float(b)
    return 2.0 / (bf + 2.0 + math.sqrt(bf * bf + 4.0))


def jarnik_bounds(m: int) -> tuple[float, float]:
    """(1 - 1/(m log 2), 1 - 1/(8 m log m)) bounding hdim of digits <= m."""
    if m < 8:
        raise ValueError("Jarnik bound requires m >= 8")
    return 1.0 - 1.0 / (m * math.log(2.0)), 1.0 - 1.0 / (8.0 * m * math.log(m))


def hausdorff_verdict(gamma, s) -> str:
    """'zero' or 'infinite' for H^s of G(Psi) with Psi(t) = t^gamma.

    The series sum t^(1-2s) Psi(t)^-s = sum t^(1-(2+gamma)s) converges exactly
    when s > 2/(2+gamma); the boundary is the harmonic series.
    """
    g = to_fraction(gamma)
    s = to_fraction(s)
    if g < 0:
        raise ValueError("gamma must be >= 0")
    if not 0 <= s < 1:
        raise ValueError("s must lie in [0, 1)")
    return "zero" if 1 - (2 + g) * s < -1 else "infinite"


# ---------------------------------------------------------------------------
# level specs


@dataclass(frozen=True)
class PositionRange:
    """Admissible digits at one position: [lo, hi], exact or by logs only."""

    lo: Optional[int]
    hi: Optional[int]
    log_size: float
    kind: str = "seed"  # seed | c | e
    level: int = 0

    @classmethod
    def exact(cls, lo: int, hi: int, kind: str = "seed", level: int = 0) -> PositionRange:
        if lo < 1 or hi < lo:
            raise ValueError(f"bad range [{lo}, {hi}]")
        return cls(lo, hi, log_int(hi - lo + 1), kind, level)

    @property
    def is_exact(self) -> bool:
        return self.lo is not None

    @property
    def size(self) -> int:
        if not self.is_exact:
            raise ValueError("range known only in log space")
        return self.hi - self.lo + 1

    def admits(self, d: int) -> bool:
        if not self.is_exact:
            raise ValueError("range known only in log space")
        return self.lo <= d <= self.hi


@dataclass(frozen=True)
class LevelSpec:
    positions: tuple[PositionRange, ...]
    # m_j for each level j, used to label position classes
    block_starts: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, k: int) -> PositionRange:
        """1-based position k."""
        return self.positions[k - 1]

    @classmethod
    def synthetic(cls, ranges: Iterable[tuple[int, int]]) -> LevelSpec:
        return cls(tuple(PositionRange.exact(lo, hi) for lo, hi in ranges))

    @classmethod
    def doubled(cls, sizes: Iterable[int]) -> LevelSpec:
        """Ranges [M+1, 2M] for the given floor quantities M."""
        return cls.synthetic((M + 1, 2 * M) for M in sizes)

    def position_class(self, n: int) -> str:
        for m in self.block_starts:
            if n == m:
                return AT_M
            if n == m + 1:
                return AT_M_PLUS_1
        return GENERIC

    def admissible_words(self, n: int):
        """Every admissible word of length n (small synthetic specs only)."""
        from itertools import product

        return product(*(range(p.lo, p.hi + 1) for p in self.positions[:n]))


def level_spec_from_schedule(schedule, seed, tail: int = 1) -> LevelSpec:
    """LevelSpec of the construction: seed ranges, then c_j / e_j ranges at m_j+1, m_j+2."""
    positions: list[PositionRange] = []
    i = 0
    for lv in schedule.levels:
        while i < lv.r:
            i += 1
            lo, hi = seed.bounds(i)
            positions.append(PositionRange.exact(lo, hi))
        if lv.Mc is not None:
            positions.append(PositionRange.exact(lv.Mc + 1, 2 * lv.Mc, "c", lv.j))
            positions.append(PositionRange.exact(lv.Me + 1, 2 * lv.Me, "e", lv.j))
        else:
            positions.append(PositionRange(None, None, lv.log_Mc, "c", lv.j))
            positions.append(PositionRange(None, None, lv.log_Me, "e", lv.j))
    for _ in range(tail):
        i += 1
        lo, hi = seed.bounds(i)
        positions.append(PositionRange.exact(lo, hi))
    return LevelSpec(tuple(positions), tuple(schedule.m))


class InadmissibleError(ValueError):
    pass


def check_admissible(prefix, spec: LevelSpec) -> None:
    if len(prefix) > len(spec):
        raise InadmissibleError(f"prefix length {len(prefix)} exceeds spec length {len(spec)}")
    digits = prefix.exact if isinstance(prefix, LogWord) else tuple(prefix)
    for k, d in enumerate(digits, start=1):
        pos = spec[k]
        if d is None or not pos.is_exact:
            continue
        if not pos.admits(d):
            raise InadmissibleError(f"digit {d} at position {k} outside [{pos.lo}, {pos.hi}]")


# ---------------------------------------------------------------------------
# measure, lengths, gaps


def level_count(spec: LevelSpec, n: int) -> int:
    """#D_n: product of the range sizes at positions 1..n (exact)."""
    if n > len(spec):
        raise ValueError(f"n={n} exceeds spec length {len(spec)}")
    total = 1
    for pos in spec.positions[:n]:
        total *= pos.size
    return total


def log_level_count(spec: LevelSpec, n: int) -> float:
    if n > len(spec):
        raise ValueError(f"n={n} exceeds spec length {len(spec)}")
    return math.fsum(pos.log_size for pos in spec.positions[:n])


def mass(prefix, spec: LevelSpec) -> Fraction:
    """mu(J_n(prefix)) = 1 / #D_n for an admissible prefix."""
    check_admissible(prefix, spec)
    return Fraction(1, level_count(spec, len(prefix)))


def _next_range(prefix, spec: LevelSpec) -> PositionRange:
    n = len(prefix)
    if n + 1 > len(spec):
        raise ValueError(f"spec exhausted: no range for position {n + 1}")
    return spec[n + 1]


def fundamental_length(prefix, spec: LevelSpec) -> Fraction:
    """|J_n|, the summed length of the admissible child cylinders.

    The sum over sigma in [lo, hi] telescopes to
    (hi - lo + 1) / ((lo q_n + q_{n-1}) ((hi + 1) q_n + q_{n-1})), which for
    the range [M+1, 2M] is M / (((M+1) q_n + q_{n-1}) ((2M+1) q_n + q_{n-1})).
    """
    word = as_word(prefix)
    check_admissible(word, spec)
    nxt = _next_range(word, spec)
    _, q, _, q1 = endpoints(word)
    return length_from(q, q1, nxt.lo, nxt.hi)


def length_from(q: int, q1: int, lo: int, hi: int) -> Fraction:
    """|J| for denominators (q_n, q_{n-1}) and next-digit range [lo, hi]."""
    return Fraction(hi - lo + 1, (lo * q + q1) * ((hi + 1) * q + q1))


def gap(prefix, spec: LevelSpec) -> Fraction:
    """Case-selected gap bound g = 1 / ((hi q_n + q_{n-1}) q_n).

    ``hi`` is the top of the next admissible range (2M for ranges [M+1, 2M]),
    so g = 1/((2M q_n + q_{n-1}) q_n) in all three position classes.
    """
    word = as_word(prefix)
    check_admissible(word, spec)
    nxt = _next_range(word, spec)
    _, q, _, q1 = endpoints(word)
    return gap_from(q, q1, nxt.hi)


def gap_from(q: int, q1: int, hi: int) -> Fraction:
    return Fraction(1, (hi * q + q1) * q)


def gap_components(prefix, spec: LevelSpec) -> tuple[Fraction, Fraction]:
    """Exact distances from J_n to the two endpoints of I_n.

    Returned as (towards p_n/q_n, towards (p_n+p_{n-1})/(q_n+q_{n-1})). The
    outermost admissible children are sigma = hi (next to p_n/q_n) and
    sigma = lo (next to the mediant endpoint).
    """
    word = as_word(prefix)
    check_admissible(word, spec)
    nxt = _next_range(word, spec)
    _, q, _, q1 = endpoints(word)
    lo, hi = nxt.lo, nxt.hi
    near_pq = Fraction(1, ((hi + 1) * q + q1) * q)
    near_mediant = Fraction(lo - 1, (lo * q + q1) * (q + q1))
    return near_pq, near_mediant


def fundamental_interval(prefix, spec: LevelSpec) -> tuple[Fraction, Fraction]:
    """Closed J_n as (left, right)."""
    word = as_word(prefix)
    nxt = _next_range(word, spec)
    p, q, p1, q1 = endpoints(word)
    a = Fraction(nxt.lo * p + p1, nxt.lo * q + q1)
    b = Fraction((nxt.hi + 1) * p + p1, (nxt.hi + 1) * q + q1)
    return (a, b) if a < b else (b, a)


# ---------------------------------------------------------------------------
# local dimension probes


@dataclass(frozen=True)
class MeasureProbe:
    n: int
    position_class: str
    log_mu: float
    log_J: float
    log_gap: float
    mu: Optional[Fraction] = None
    J_length: Optional[Fraction] = None
    gap: Optional[Fraction] = None

    @property
    def holder(self) -> float:
        return self.log_mu / self.log_J

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "position_class": self.position_class,
            "log_mu": self.log_mu,
            "log_J": self.log_J,
            "holder": self.holder,
        }


def _log_affine(log_k: float, lq: float, lq1: float) -> float:
    """log(K q + q') from log K, log q, log q'."""
    base = log_k + lq
    return base + math.log1p(math.exp(lq1 - base))


def local_dim_probe(constructed, spec: LevelSpec, depths: Sequence[int]) -> list[MeasureProbe]:
    """Holder quotients log mu(J_n) / log |J_n| at the requested depths.

    Exact rationals are used whenever the word and the next range are exact;
    otherwise lengths come from log q_n and the log range size, with
    log |J_n| = log M - log((M+1) q_n + q_{n-1}) - log((2M+1) q_n + q_{n-1}).
    """
    exact_word = not isinstance(constructed, LogWord) or constructed.is_exact()
    word = constructed.to_word() if isinstance(constructed, LogWord) and exact_word else constructed
    lq = None
    out = []
    for n in depths:
        if n < 1 or n + 1 > len(spec) or n > len(word):
            raise ValueError(f"depth {n} outside the computed range")
        prefix = word[:n] if exact_word else None
        nxt = spec[n + 1]
        cls_ = spec.position_class(n)
        if exact_word and nxt.is_exact and all(p.is_exact for p in spec.positions[:n]):
            mu = mass(prefix, spec)
            J = fundamental_length(prefix, spec)
            g = gap(prefix, spec)
            out.append(
                MeasureProbe(n, cls_, -log_int(mu.denominator), _log_frac(J), _log_frac(g), mu, J, g)
            )
            continue
        if lq is None:
            lq = log_denominators(constructed)
        log_mu = -log_level_count(spec, n)
        # next range is [M+1, 2M] with M = size
        log_M = nxt.log_size
        log_M1 = log_M + math.log1p(math.exp(-log_M))  # log(M + 1)
        log_2M1 = math.log(2.0) + log_M + math.log1p(math.exp(-log_M) / 2)  # log(2M + 1)
        log_J = log_M - _log_affine(log_M1, lq[n], lq[n - 1]) - _log_affine(log_2M1, lq[n], lq[n - 1])
        log_2M = math.log(2.0) + log_M
        log_g = -(_log_affine(log_2M, lq[n], lq[n - 1]) + lq[n])
        out.append(MeasureProbe(n, cls_, log_mu, log_J, log_g))
    return out


def _log_frac(x: Fraction) -> float:
    return log_int(x.numerator) - log_int(x.denominator)
