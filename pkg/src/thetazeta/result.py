"""Evaluation result: value + claimed absolute error bound + diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class EvalResult:
    value: object            # mpf or mpc
    err: object              # mpf, claimed absolute error bound
    diagnostics: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.value
        yield self.err
