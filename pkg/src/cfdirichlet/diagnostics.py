"""Pointwise diagnostics on finite words.

Convergence-exponent estimates, Dirichlet ratio traces
log(a_n a_{n+1}) / log q_n, Levy traces log q_n / n, and the map from an
approximation rate psi(q) = c q^-gamma to the threshold function
Psi(q) = q psi(q) / (1 - q psi(q)).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional, Sequence

import numpy as np

from ._numeric import log_int, to_fraction
from .core import as_word, denominators
from .logspace import LogWord, log_denominators, log_digits_of

MIN_TAU_WINDOW = 100
HIT_RTOL = 1e-9


@dataclass(frozen=True)
class ExponentEstimate:
    value: float  # may be math.inf
    window: tuple[int, int]
    method: str = "sorted-quantile"
    partial_sums: tuple[tuple[float, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "value": "inf" if math.isinf(self.value) else self.value,
            "window": list(self.window),
            "method": self.method,
            "partial_sums": [list(row) for row in self.partial_sums],
        }


def _sorted_digits(word) -> tuple[list[float], Optional[list[int]]]:
    if isinstance(word, LogWord) and not word.is_exact():
        return sorted(word.log_digits), None
    digits = sorted(word.exact if isinstance(word, LogWord) else as_word(word))
    return [log_int(a) for a in digits], digits


def tau_estimate(word) -> ExponentEstimate:
    """Finite-window estimate of the convergence exponent of the digits.

    The digits are sorted ascending into b_1 <= ... <= b_N. If the median
    b_ceil(N/2) is at most 2 the digits are not tending to infinity and the
    estimate is +inf. Otherwise it is max(log n / log b_n) over the upper
    half-window n in [ceil(N/2), N].
    """
    logs, exact = _sorted_digits(word)
    N = len(logs)
    if N < MIN_TAU_WINDOW:
        raise ValueError("window too short for estimation")
    half = (N + 1) // 2
    window = (half, N)
    median_small = exact[half - 1] <= 2 if exact is not None else logs[half - 1] <= math.log(2)
    if median_small:
        return ExponentEstimate(math.inf, window)
    value = max(math.log(n) / logs[n - 1] for n in range(half, N + 1))
    sums = []
    arr = np.asarray(logs)
    for s in (max(value - 0.1, 0.0), value + 0.1):
        sums.append((s, float(np.exp(-s * arr).sum())))
    return ExponentEstimate(value, window, partial_sums=tuple(sums))


@dataclass(frozen=True)
class RatioTrace:
    entries: tuple[tuple[int, float], ...]
    running_sup: tuple[float, ...]

    @property
    def sup(self) -> float:
        return self.running_sup[-1] if self.running_sup else -math.inf

    def argsup(self) -> int:
        """Index n of the first entry attaining the supremum."""
        best = max(r for _, r in self.entries)
        for n, r in self.entries:
            if r == best:
                return n
        raise ValueError("empty trace")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "ratio", "running_sup"])
        for (n, r), s in zip(self.entries, self.running_sup):
            w.writerow([n, repr(r), repr(s)])
        return buf.getvalue()

    def to_rows(self) -> list[dict]:
        return [
            {"n": n, "ratio": r, "running_sup": s}
            for (n, r), s in zip(self.entries, self.running_sup)
        ]


def dirichlet_ratio_trace(word) -> RatioTrace:
    """log(a_n a_{n+1}) / log q_n for n = 2..N-1 with its running supremum."""
    if len(word) < 3:
        raise ValueError("ratio trace needs a word of length >= 3")
    la = log_digits_of(word)
    lq = log_denominators(word)
    entries = []
    sups = []
    sup = -math.inf
    for n in range(2, len(la)):
        r = (la[n - 1] + la[n]) / lq[n]
        sup = max(sup, r)
        entries.append((n, r))
        sups.append(sup)
    return RatioTrace(tuple(entries), tuple(sups))


def ratio_at(word, n: int, log_q: Optional[Sequence[float]] = None) -> float:
    """Single Dirichlet ratio log(b_n b_{n+1}) / log q_n (1-based n)."""
    la = log_digits_of(word)
    lq = log_q if log_q is not None else log_denominators(word)
    return (la[n - 1] + la[n]) / lq[n]


def levy_trace(word) -> list[tuple[int, float]]:
    """(n, log q_n / n) for n = 1..N."""
    if len(word) < 1:
        raise ValueError("Levy trace needs a nonempty word")
    lq = log_denominators(word)
    return [(n, lq[n] / n) for n in range(1, len(lq))]


def levy_to_csv(trace: Sequence[tuple[int, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "levy"])
    for n, v in trace:
        w.writerow([n, repr(v)])
    return buf.getvalue()


@dataclass(frozen=True)
class ApproximationRate:
    """psi(q) = c * q^-gamma."""

    c: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", to_fraction(self.c))
        object.__setattr__(self, "gamma", to_fraction(self.gamma))
        if self.c <= 0:
            raise ValueError("rate coefficient c must be positive")

    def q_psi(self, q: int):
        """q * psi(q): exact Fraction when gamma is an integer, float otherwise."""
        e = 1 - self.gamma
        if e.denominator == 1:
            return self.c * Fraction(q) ** int(e)
        return float(self.c) * math.exp(float(e) * log_int(q))

    def to_dict(self) -> dict:
        return {"c": str(self.c), "gamma": str(self.gamma)}

    @classmethod
    def from_dict(cls, d: dict) -> ApproximationRate:
        return cls(Fraction(d["c"]), Fraction(d["gamma"]))


class DirichletThresholdError(ValueError):
    pass


def psi_to_Psi(rate: ApproximationRate, q: int):
    """Psi(q) = q psi(q) / (1 - q psi(q)); requires q psi(q) < 1."""
    x = rate.q_psi(q)
    if x >= 1:
        raise DirichletThresholdError("Dirichlet threshold exceeded")
    return x / (1 - x)


def Psi_function(rate: ApproximationRate) -> Callable[[int], object]:
    return lambda q: psi_to_Psi(rate, q)


def g_psi_hits(word, Psi) -> list[int]:
    """Indices n (1 <= n < N) with a_n a_{n+1} >= Psi(q_n).

    ``Psi`` is a callable on q or a constant. Rational thresholds are compared
    exactly; float thresholds allow a relative slack of 1e-9.
    """
    word = as_word(word)
    if len(word) < 3:
        raise ValueError("hit report needs a word of length >= 3")
    f = Psi if callable(Psi) else (lambda q, _c=Psi: _c)
    qs = denominators(word)
    hits = []
    for n in range(1, len(word)):
        prod = word[n - 1] * word[n]
        t = f(qs[n])
        if isinstance(t, (int, Rational)):
            hit = prod >= t
        else:
            hit = prod >= float(t) * (1 - HIT_RTOL)
        if hit:
            hits.append(n)
    return hits


def traces_to_json(**parts) -> str:
    return json.dumps(parts, sort_keys=True, indent=2)


def gauss_kuzmin_word(n: int, seed: int = 0) -> list[int]:
    """n i.i.d. digits with P(a = k) = log2(1 + 1/(k(k+2))).

    If u is uniform on (0, 1] then x = 2^u - 1 follows the Gauss measure and
    floor(1/x) has the Gauss-Kuzmin law.
    """
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # (0, 1]
    x = np.exp2(u) - 1.0
    return [int(a) for a in np.floor(1.0 / x)]
