from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class InsufficientData(ValueError):
    pass


class DegenerateVariance(ValueError):
    pass


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson's r. Raises InsufficientData below two pairs, DegenerateVariance on a constant axis."""
    if len(x) != len(y):
        raise ValueError("x and y differ in length")
    if len(x) < 2:
        raise InsufficientData(f"need at least 2 pairs, got {len(x)}")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("one coordinate is constant")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
