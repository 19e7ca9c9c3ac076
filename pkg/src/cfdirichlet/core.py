"""Exact continued-fraction kernel.

Words of partial quotients, their convergents, the cylinder (basic) intervals
they cut out of [0, 1), and the classical growth inequalities for q_n.
Everything here is exact: Python ints and ``fractions.Fraction`` only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from ._numeric import fraction_to_str, int_to_str, str_to_int, to_fraction


class EmptyWordError(ValueError):
    pass


@dataclass(frozen=True)
class CFWord(Sequence[int]):
    """Finite word (a_1, ..., a_n) of positive partial quotients.

    The empty word is allowed and stands for the root cylinder [0, 1).
    """

    digits: tuple[int, ...] = ()

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        for i, d in enumerate(digits, start=1):
            if d < 1:
                raise ValueError(f"partial quotient a_{i} = {d} is not positive")
        object.__setattr__(self, "digits", digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return CFWord(self.digits[i])
        return self.digits[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __add__(self, other) -> CFWord:
        return CFWord(self.digits + tuple(as_word(other)))

    def __str__(self) -> str:
        return format_word(self)

    @classmethod
    def parse(cls, text: str) -> CFWord:
        return parse_word(text)


def as_word(word: CFWord | Iterable[int]) -> CFWord:
    return word if isinstance(word, CFWord) else CFWord(tuple(word))


def parse_word(text: str) -> CFWord:
    text = text.strip()
    if not text:
        return CFWord()
    try:
        return CFWord(tuple(str_to_int(tok) for tok in text.split(",")))
    except ValueError as exc:
        raise ValueError(f"cannot parse word {text!r}: {exc}") from None


def format_word(word: CFWord | Iterable[int]) -> str:
    return ",".join(int_to_str(d) for d in word)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def seeds() -> tuple[Convergent, Convergent]:
    """The recursion seeds (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (0, 1)."""
    return Convergent(1, 0, -1), Convergent(0, 1, 0)


def iter_convergents(word: Iterable[int]) -> Iterator[Convergent]:
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for n, a in enumerate(word, start=1):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield Convergent(p, q, n)


def convergents(word: CFWord | Sequence[int]) -> list[Convergent]:
    """All convergents p_k/q_k, k = 1..n, via the three-term recursion."""
    word = as_word(word)
    if not word:
        raise EmptyWordError("empty word has no convergents")
    return list(iter_convergents(word))


def denominators(word: Iterable[int]) -> list[int]:
    """[q_0, q_1, ..., q_n]; q_0 = 1 is always included."""
    q_prev, q = 0, 1
    out = [1]
    for a in word:
        q_prev, q = q, a * q + q_prev
        out.append(q)
    return out


def q_of(word: Iterable[int]) -> int:
    """q_n of a word (q_0 = 1 for the empty word)."""
    q_prev, q = 0, 1
    for a in word:
        q_prev, q = q, a * q + q_prev
    return q


def evaluate(word: CFWord | Sequence[int]) -> Fraction:
    """Nested-fraction value [a_1, ..., a_n], folded from the bottom up."""
    word = as_word(word)
    if not word:
        raise EmptyWordError("empty word has no value")
    x = Fraction(0)
    for a in reversed(word.digits):
        x = 1 / (a + x)
    return x


def expand_rational(x: Fraction) -> CFWord:
    """Canonical (Euclidean) expansion of a rational in (0, 1]."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"{x} is outside (0, 1]")
    num, den = x.numerator, x.denominator
    digits = []
    while num:
        a, r = divmod(den, num)
        digits.append(a)
        num, den = r, num
    return CFWord(tuple(digits))


def expand_real(value, max_terms: int = 64, precision: int | None = None) -> tuple[CFWord, int]:
    """Expand a number in (0, 1) into partial quotients.

    Without ``precision`` the value is exact (Fraction, int ratio or decimal
    string) and the whole Euclidean expansion is returned, truncated at
    ``max_terms``. With ``precision=k`` the value v stands for the interval
    [v - 10^-k, v + 10^-k]; a digit is emitted only while that whole interval
    sits inside a single cylinder, so every returned digit is shared by all
    numbers in the interval. Returns ``(word, trusted_length)``.
    """
    x = to_fraction(value)
    if not 0 < x < 1:
        raise ValueError(f"value {x} is outside (0, 1)")
    if precision is None:
        word = expand_rational(x)
        word = word[:max_terms]
        return word, len(word)
    if precision < 0:
        raise ValueError("precision must be >= 0")
    eps = Fraction(1, 10**precision)
    lo, hi = x - eps, x + eps
    digits: list[int] = []
    # Track the interval under the Gauss map; the map reverses orientation.
    while len(digits) < max_terms:
        if lo <= 0 or hi >= 1:
            break
        a_lo = math.floor(1 / hi)
        a_hi = math.floor(1 / lo)
        if a_lo != a_hi:
            break
        a = a_lo
        new_lo, new_hi = 1 / hi - a, 1 / lo - a
        digits.append(a)
        if new_lo == 0:
            # hi = 1/a exactly: the expansion of hi stops here
            break
        lo, hi = new_lo, new_hi
    word = CFWord(tuple(digits))
    return word, len(word)


@dataclass(frozen=True)
class BasicInterval:
    left: Fraction
    right: Fraction
    closed_left: bool
    closed_right: bool
    order: int

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x >= self.left if self.closed_left else x > self.left
        below = x <= self.right if self.closed_right else x < self.right
        return above and below

    def to_dict(self) -> dict:
        return {
            "left": fraction_to_str(self.left),
            "right": fraction_to_str(self.right),
            "closed_left": self.closed_left,
            "closed_right": self.closed_right,
            "order": self.order,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> BasicInterval:
        return cls(
            Fraction(d["left"]),
            Fraction(d["right"]),
            bool(d["closed_left"]),
            bool(d["closed_right"]),
            int(d["order"]),
        )


def endpoints(word: CFWord | Sequence[int]) -> tuple[int, int, int, int]:
    """(p_n, q_n, p_{n-1}, q_{n-1}) for a word, seeds included for n = 0."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in word:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q, p_prev, q_prev


def basic_interval(word: CFWord | Sequence[int]) -> BasicInterval:
    """Cylinder of all x in [0, 1) whose expansion starts with ``word``.

    Endpoints p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}); even order is
    closed on the left, odd order closed on the right.
    """
    word = as_word(word)
    n = len(word)
    if n == 0:
        return BasicInterval(Fraction(0), Fraction(1), True, False, 0)
    p, q, p1, q1 = endpoints(word)
    a = Fraction(p, q)
    b = Fraction(p + p1, q + q1)
    if n % 2 == 0:
        return BasicInterval(a, b, True, False, n)
    return BasicInterval(b, a, False, True, n)


def interval_length(word: CFWord | Sequence[int]) -> Fraction:
    """1 / (q_n (q_n + q_{n-1}))."""
    _, q, _, q1 = endpoints(word)
    return Fraction(1, q * (q + q1))


@dataclass(frozen=True)
class GrowthCheck:
    n: int
    q: int
    power_of_two_ok: bool  # q_n >= 2^((n-1)/2)
    lower_product_ok: bool  # prod a_k <= q_n
    upper_product_ok: bool  # q_n <= prod (a_k + 1)

    @property
    def ok(self) -> bool:
        return self.power_of_two_ok and self.lower_product_ok and self.upper_product_ok


def check_growth_bounds(word: CFWord | Sequence[int]) -> list[GrowthCheck]:
    """The three growth comparisons for q_n at every prefix, all exact."""
    word = as_word(word)
    out = []
    lower = upper = 1
    q_prev, q = 0, 1
    for n, a in enumerate(word, start=1):
        q_prev, q = q, a * q + q_prev
        lower *= a
        upper *= a + 1
        out.append(
            GrowthCheck(
                n=n,
                q=q,
                # squared to stay in integers: q^2 >= 2^(n-1)
                power_of_two_ok=q * q >= 1 << (n - 1),
                lower_product_ok=lower <= q,
                upper_product_ok=q <= upper,
            )
        )
    return out


@dataclass(frozen=True)
class DeletionRatio:
    ratio: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def ok(self) -> bool:
        return self.lower <= self.ratio <= self.upper


def deletion_ratio(word: CFWord | Sequence[int], k: int) -> DeletionRatio:
    """q_n(word) / q_{n-1}(word with a_k removed), with its bounds [(a_k+1)/2, a_k+1]."""
    word = as_word(word)
    n = len(word)
    if not 1 <= k <= n:
        raise IndexError(f"position k={k} outside 1..{n}")
    a_k = word[k - 1]
    deleted = word.digits[: k - 1] + word.digits[k:]
    ratio = Fraction(q_of(word), q_of(deleted))
    return DeletionRatio(ratio, Fraction(a_k + 1, 2), Fraction(a_k + 1))
