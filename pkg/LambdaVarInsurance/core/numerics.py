"""Monotone bisection helpers shared by the risk engines and the solvers.

Every infimum in this package has the shape inf{x : P(x)} for a predicate
that is False below some point and True from it on. Working on the predicate
rather than on a sign change keeps the search valid across the jumps of step
Λ functions and of empirical CDFs.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, List, Optional, Tuple

from .validation import NumericError

logger = logging.getLogger(__name__)

BISECTION_TOL = 1e-9
BISECTION_MAX_ITER = 200
# Doubling search for an accepted upper end stops here and reports +inf.
GROWTH_LIMIT = 1e300

Probe = Tuple[float, float]


def bracket_crossing(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    *,
    tol: float = BISECTION_TOL,
    max_iter: int = BISECTION_MAX_ITER,
) -> Tuple[float, float]:
    """Shrink ``[lo, hi]`` around the switch point of a monotone predicate.

    Requires ``predicate(lo)`` False and ``predicate(hi)`` True; both stay
    that way for the returned pair.
    """
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def first_true(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    *,
    tol: float = BISECTION_TOL,
    max_iter: int = BISECTION_MAX_ITER,
) -> float:
    """Smallest x in ``[lo, hi]`` (to ``tol``) where a monotone predicate holds."""
    if predicate(lo):
        return lo
    if not predicate(hi):
        raise NumericError(f"predicate does not hold at the upper bracket end {hi}")
    _, hi = bracket_crossing(predicate, lo, hi, tol=tol, max_iter=max_iter)
    return hi


def grow_upper(predicate: Callable[[float], bool], start: float = 1.0) -> float:
    """Double ``start`` until the predicate holds; +inf if it never does."""
    hi = max(start, 1.0)
    while not predicate(hi):
        hi *= 2.0
        if hi > GROWTH_LIMIT:
            return math.inf
    return hi


def infimum_below_diagonal(
    func: Callable[[float], float],
    upper: float,
    *,
    breakpoints: Iterable[float] = (),
    probes: Optional[List[Probe]] = None,
    tol: float = BISECTION_TOL,
    max_iter: int = BISECTION_MAX_ITER,
) -> float:
    """Return inf{x >= 0 : func(x) <= x} for a weakly decreasing ``func``.

    Parameters
    ----------
    func:
        Weakly decreasing, right-continuous map.
    upper:
        A point known to satisfy ``func(upper) <= upper``.
    breakpoints:
        Jump locations of ``func``; when the acceptance set starts at one of
        them the exact location is returned instead of a bisection bound.
    probes:
        Optional list collecting every ``(x, func(x))`` evaluation.

    Returns
    -------
    float
        The left edge of the acceptance set.
    """

    def accepted(x: float) -> bool:
        value = func(x)
        if probes is not None:
            probes.append((x, value))
        logger.debug("probe x=%.12g value=%.12g", x, value)
        return value <= x

    if math.isinf(upper):
        raise NumericError("fixed-point search needs a finite upper bracket")
    if accepted(0.0):
        return 0.0
    if not accepted(upper):
        raise NumericError(f"upper bracket {upper} is not accepted")
    lo, hi = bracket_crossing(accepted, 0.0, upper, tol=tol, max_iter=max_iter)

    # func is flat around most crossings, so its value at hi is often exact.
    snapped = func(hi)
    if lo <= snapped < hi and accepted(snapped):
        hi = snapped
    for point in sorted(breakpoints):
        if lo <= point < hi and accepted(point):
            hi = point
            break
    return hi
