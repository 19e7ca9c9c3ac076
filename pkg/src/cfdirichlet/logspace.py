"""Log-space words: partial quotients too large to hold exactly."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ._numeric import log_int
from .core import CFWord, as_word, denominators


def log_q_step(log_a: float, log_q1: float, log_q2: Optional[float]) -> float:
    """log q_n from log a_n, log q_{n-1} and log q_{n-2} (None when q_{n-2} = 0)."""
    base = log_a + log_q1
    if log_q2 is None:
        return base
    return base + math.log1p(math.exp(log_q2 - base))


@dataclass(frozen=True)
class LogWord:
    """Word whose digits are carried as natural logs.

    ``exact`` keeps the integer digit wherever it is known (seed digits), and
    ``None`` where only the log survives (inserted digits in log-space runs).
    """

    log_digits: tuple[float, ...]
    exact: tuple[Optional[int], ...] = field(default=())

    def __post_init__(self):
        if not self.exact:
            object.__setattr__(self, "exact", (None,) * len(self.log_digits))
        if len(self.exact) != len(self.log_digits):
            raise ValueError("exact and log_digits lengths differ")

    def __len__(self) -> int:
        return len(self.log_digits)

    @classmethod
    def from_word(cls, word: Iterable[int]) -> LogWord:
        digits = tuple(as_word(word))
        return cls(tuple(log_int(a) for a in digits), digits)

    def is_exact(self) -> bool:
        return all(d is not None for d in self.exact)

    def to_word(self) -> CFWord:
        if not self.is_exact():
            raise ValueError("log-space word has digits without exact values")
        return CFWord(tuple(self.exact))

    def log_denominators(self) -> list[float]:
        return log_denominators_from_logs(self.log_digits)


def log_denominators_from_logs(log_digits: Sequence[float]) -> list[float]:
    """[log q_0, ..., log q_n] by the log recursion."""
    out = [0.0]
    prev: Optional[float] = None
    for la in log_digits:
        nxt = log_q_step(la, out[-1], prev)
        prev = out[-1]
        out.append(nxt)
    return out


def log_digits_of(word) -> list[float]:
    if isinstance(word, LogWord):
        return list(word.log_digits)
    return [log_int(a) for a in as_word(word)]


def log_denominators(word) -> list[float]:
    """[log q_0, ..., log q_n] for a CFWord (exact q, then logged) or a LogWord."""
    if isinstance(word, LogWord):
        if word.is_exact():
            return [log_int(q) for q in denominators(word.exact)]
        return word.log_denominators()
    return [log_int(q) for q in denominators(as_word(word))]
