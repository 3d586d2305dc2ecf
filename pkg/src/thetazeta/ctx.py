"""Working-precision bookkeeping.

All evaluations run at ``digits + guard`` decimal digits internally; a few
cancellation-heavy spots (entire-function evaluation at large argument) may
escalate further, capped by ``max_ramp`` extra digits.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

from mpmath import mp


@dataclass(frozen=True)
class PrecisionContext:
    digits: int
    guard: int = 15
    max_ramp: int = 1000

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError("digits must be >= 10")
        if self.guard < 0:
            raise ValueError("guard must be >= 0")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def eps(self):
        """10^(-digits): the accuracy target for reported results."""
        with self.workdps():
            return mp.mpf(10) ** (-self.digits)

    @property
    def tail_eps(self):
        """Truncation target, half the guard below the reporting target."""
        with self.workdps():
            return mp.mpf(10) ** (-(self.digits + self.guard // 2))

    @contextmanager
    def workdps(self, extra: int = 0):
        if extra > self.max_ramp:
            from .errors import PrecisionExhausted
            raise PrecisionExhausted(
                f"requested precision ramp {extra} exceeds max_ramp={self.max_ramp}")
        old = mp.dps
        mp.dps = self.dps + extra
        try:
            yield mp
        finally:
            mp.dps = old


DEFAULT_CTX = PrecisionContext(digits=30)
