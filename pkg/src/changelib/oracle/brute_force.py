"""Slow reference implementations of the distance and the single estimator.

Nothing here reuses the counting or scanning code of ``changelib.distance``:
every count is taken window by window with plain dictionaries, so agreement
between the two paths is evidence that both are right.
"""

import math
from typing import Dict, Sequence, Tuple

from ..errors import DegenerateWindowError, InvalidInputError

TIE_TOLERANCE = 1e-12


def _cell_counts(x: Sequence[float], m: int, l: int) -> Dict[Tuple[int, ...], int]:
    scale = 2.0**l
    counts: Dict[Tuple[int, ...], int] = {}
    for i in range(len(x) - m + 1):
        key = tuple(math.floor(v * scale) for v in x[i : i + m])
        counts[key] = counts.get(key, 0) + 1
    return counts


def brute_force_distance(x1: Sequence[float], x2: Sequence[float], m_max: int, l_max: int) -> float:
    x1 = [float(v) for v in x1]
    x2 = [float(v) for v in x2]
    total = 0.0
    for m in range(1, m_max + 1):
        for l in range(1, l_max + 1):
            c1 = _cell_counts(x1, m, l)
            c2 = _cell_counts(x2, m, l)
            w1 = len(x1) - m + 1
            w2 = len(x2) - m + 1
            stratum = 0.0
            for key in set(c1) | set(c2):
                f1 = c1.get(key, 0) / w1 if w1 > 0 else 0.0
                f2 = c2.get(key, 0) / w2 if w2 > 0 else 0.0
                stratum += abs(f1 - f2)
            total += stratum / (m * (m + 1)) / (l * (l + 1))
    return total


def brute_force_phi(x: Sequence[float], a: int, b: int, alpha: float, m_max: int, l_max: int) -> int:
    """Exhaustive scan of every admissible split, scored with ``brute_force_distance``."""
    x = [float(v) for v in x]
    n = len(x)
    if not (1 <= a <= b <= n):
        raise InvalidInputError(f"window ({a}, {b}) is not inside 1..{n}")
    reach = math.floor(n * alpha)
    lo = max(1, a - reach)
    hi = min(n, b + reach)
    margin = max(2, m_max)

    scored = []
    for t in range(a, b + 1):
        left = x[lo - 1 : t]
        right = x[t - 1 : hi]
        if len(left) < margin or len(right) < margin:
            continue
        scored.append((t, brute_force_distance(left, right, m_max, l_max)))
    if not scored:
        raise DegenerateWindowError(f"no admissible split in {a}..{b}")

    best = max(score for _, score in scored)
    for t, score in scored:
        if score >= best - TIE_TOLERANCE:
            return t
