"""Uniform pass/fail report used by all check routines."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Report:
    name: str
    passed: bool
    residuals: dict = field(default_factory=dict)
    flags: tuple = ()
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residuals": _plain(self.residuals),
            "flags": list(self.flags),
            "details": _plain(self.details),
        }
