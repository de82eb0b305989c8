"""Dynamic time warping between two motion series, with the moves of the optimal alignment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accessors import register_class_accessor
from .model import MotionTrace

MATCH, EXPANSION, CONTRACTION = 0, 1, 2
"Kinds of the alignment moves: ``(1, 1)``, ``(1, 0)`` and ``(0, 1)`` steps."


@dataclass(frozen=True, eq=False)
class DtwResult:
    """Optimal alignment of two series.

    ``path`` lists the aligned ``(i, j)`` cells, ``costs`` their local cost and ``kinds`` the
    move that reached each cell. The first cell counts as a match.
    """

    distance: float
    matches: int
    expansions: int
    contractions: int
    overlap_points: int
    path: np.ndarray
    costs: np.ndarray
    kinds: np.ndarray

    @property
    def path_length(self) -> int:
        """Total number of moves."""
        return self.matches + self.expansions + self.contractions

    @property
    def moves(self) -> tuple[int, int, int]:
        """The (match, expansion, contraction) counts."""
        return self.matches, self.expansions, self.contractions

    def penalized(self, penalty: float = 2.0) -> float:
        """Path cost with the cells reached by a non match move weighted by ``penalty``."""
        weights = np.where(self.kinds == MATCH, 1.0, penalty)
        return float(np.sum(self.costs * weights))


def resample(trace: MotionTrace, rate_hz: float) -> MotionTrace:
    """Linearly interpolate a trace onto a uniform grid spanning the trace.

    Parameters:
        trace: The trace to resample, at least 2 points.
        rate_hz: The rate of the output grid.

    Returns:
        A trace sampled at ``trace.start + k / rate_hz``.
    """
    if rate_hz <= 0:
        raise ValueError(f"rate_hz must be positive, got {rate_hz}")
    if len(trace) < 2:
        raise ValueError("Resampling needs a trace of at least 2 points")
    n = int(np.floor((trace.end - trace.start) * rate_hz + 1e-6)) + 1
    t = trace.start + np.arange(n) / rate_hz
    values = np.column_stack([np.interp(t, trace.t, trace.values[:, i]) for i in range(len(trace.axes))])
    values[0] = 0.0
    return MotionTrace(t, values, trace.source)


def overlap_epsilon(a: np.ndarray, b: np.ndarray, fraction: float = 0.05) -> float:
    """Tolerance under which two aligned points overlap: a fraction of the combined value range."""
    both = np.concatenate([a, b])
    return float(fraction * (both.max() - both.min()))


def dtw(a: np.ndarray, b: np.ndarray, epsilon: float | None = None, fraction: float = 0.05) -> DtwResult:
    """Align two series with dynamic time warping.

    The local cost is ``|a_i - b_j|`` and the allowed steps are match ``(1, 1)``, expansion
    ``(1, 0)`` and contraction ``(0, 1)``. Ties in the traceback prefer a match, then an
    expansion, then a contraction.

    Parameters:
        a: The first series.
        b: The second series.
        epsilon: Overlap tolerance, defaults to ``fraction`` of the combined value range.
        fraction: See ``epsilon``.

    Returns:
        The alignment with its total cost and move counts.

    Examples:
        .. code-block:: python

            from liveproof.dtw import dtw

            dtw([0, 1], [0, 0, 1]).moves  # (2, 0, 1)
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("DTW needs two non empty series")
    if epsilon is None:
        epsilon = overlap_epsilon(a, b, fraction)

    # padded accumulated cost, D[i + 1, j + 1] is the cost of the best path ending at (i, j)
    r, c = a.size, b.size
    local = np.abs(a[:, None] - b[None, :])
    D = np.full((r + 1, c + 1), np.inf)
    D[0, 0] = 0.0
    cost = local.tolist()
    acc = D.tolist()
    for i in range(r):
        previous, current, row_cost = acc[i], acc[i + 1], cost[i]
        for j in range(c):
            current[j + 1] = row_cost[j] + min(previous[j], previous[j + 1], current[j])
    D = np.array(acc)

    # traceback
    i, j = r - 1, c - 1
    cells, kinds = [(i, j)], []
    while i > 0 or j > 0:
        step = int(np.argmin((D[i, j], D[i, j + 1], D[i + 1, j])))
        kinds.append(step)
        if step == MATCH:
            i, j = i - 1, j - 1
        elif step == EXPANSION:
            i -= 1
        else:
            j -= 1
        cells.append((i, j))
    kinds.append(MATCH)
    path = np.array(cells[::-1])
    kind = np.array(kinds[::-1])
    costs = local[path[:, 0], path[:, 1]]
    counts = np.bincount(kind, minlength=3)
    return DtwResult(
        distance=float(D[r, c]),
        matches=int(counts[MATCH]),
        expansions=int(counts[EXPANSION]),
        contractions=int(counts[CONTRACTION]),
        overlap_points=int(np.sum(costs <= epsilon)),
        path=path,
        costs=costs,
        kinds=kind,
    )


@register_class_accessor(MotionTrace, "liveproof")
class MotionTraceAccessor:
    """Toolbox for the :py:class:`~liveproof.model.MotionTrace` class."""

    def __init__(self, obj: MotionTrace):
        """Initialize the MotionTrace accessor."""
        self._obj = obj

    def resample(self, rate_hz: float) -> MotionTrace:
        """Uniform resampling, see :py:func:`resample`."""
        return resample(self._obj, rate_hz)

    def dtw(self, other: MotionTrace, axis: str = "x", rate_hz: float | None = None) -> DtwResult:
        """Align one axis of this trace with the same axis of ``other``.

        Both traces are resampled at ``rate_hz`` first when it is given.
        """
        a, b = self._obj, other
        if rate_hz is not None:
            a, b = resample(a, rate_hz), resample(b, rate_hz)
        return dtw(a.axis(axis), b.axis(axis))
