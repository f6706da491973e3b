"""Weisfeiler-Leman stabilisation and the fissions built from it."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .budget import Budget, BudgetExceeded, resolve
from .core import CoherentConfiguration, is_fission

log = logging.getLogger(__name__)

__all__ = [
    "PairColoring",
    "coherent_closure",
    "graph_closure",
    "is_fission",
    "m_extension",
    "point_extension",
]


@dataclass(frozen=True)
class PairColoring:
    """An arbitrary colouring of the pairs of ``n`` points."""

    n: int
    color: np.ndarray

    @classmethod
    def from_matrix(cls, matrix) -> PairColoring:
        return cls(len(matrix), _factorize(matrix))

    def normalized(self) -> np.ndarray:
        """Integer labels with diagonal colours kept apart from off-diagonal ones."""
        lab = self.color
        n = self.n
        lab = lab + np.where(np.eye(n, dtype=bool), int(lab.max()) + 1, 0)
        return np.unique(lab.ravel(), return_inverse=True)[1].reshape(n, n)


def _factorize(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim == 2 and a.dtype != object:
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        return np.unique(a.ravel(), return_inverse=True)[1].reshape(a.shape)
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("expected a square matrix")
    ids: dict = {}
    out = np.empty((n, n), dtype=np.int64)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = ids.setdefault(v, len(ids))
    return out


def _refine_round(C: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    n = C.shape[0]
    CT = C.T
    new = np.empty_like(C)
    ids: dict[bytes, int] = {}
    for a in range(n):
        multiset = np.sort(C[a][:, None] * k + C, axis=0).T
        rows = np.concatenate([C[a][:, None], CT[a][:, None], multiset], axis=1)
        uniq, inv = np.unique(rows, axis=0, return_inverse=True)
        local = np.array([ids.setdefault(u.tobytes(), len(ids)) for u in uniq], dtype=np.int64)
        new[a] = local[inv.ravel()]
    return new, len(ids)


def stable_coloring(color, budget: Budget | None = None) -> np.ndarray:
    """Iterate 2-dim WL recolouring until the number of colours stops growing.

    The new colour of ``(a, b)`` is the old colour of ``(a, b)`` and of
    ``(b, a)`` together with the multiset of ``(c(a, g), c(g, b))``.
    """
    if not isinstance(color, PairColoring):
        color = PairColoring.from_matrix(color)
    budget = resolve(budget)
    if color.n > budget.closure_points:
        raise BudgetExceeded(f"closure on {color.n} points exceeds budget {budget.closure_points}")
    C = color.normalized().astype(np.int64)
    k = int(C.max()) + 1
    rounds = 0
    while True:
        C2, k2 = _refine_round(C, k)
        rounds += 1
        if k2 == k:
            break
        C, k = C2, k2
    log.debug("WL stabilised after %d rounds with %d colours", rounds, k)
    return C


def coherent_closure(color, budget: Budget | None = None) -> CoherentConfiguration:
    """The coarsest coherent configuration whose relations refine ``color``."""
    return CoherentConfiguration.from_color_matrix(stable_coloring(color, budget))


def point_extension(X: CoherentConfiguration, alpha: int, budget: Budget | None = None) -> CoherentConfiguration:
    """Minimal fission of ``X`` in which ``{(alpha, alpha)}`` is a basis relation."""
    if not 0 <= alpha < X.n:
        raise IndexError(f"point {alpha} out of range")
    C = np.array(X.colors)
    C[alpha, alpha] = X.rank
    return coherent_closure(C, budget)


def m_extension(X: CoherentConfiguration, m: int = 2, budget: Budget | None = None) -> CoherentConfiguration:
    """The 2-extension of ``X`` on the point set ``X x X``.

    Point ``(a1, a2)`` is numbered ``a1 * n + a2``.
    """
    if m != 2:
        raise ValueError(f"only m = 2 is supported, got {m}")
    budget = resolve(budget)
    n, r = X.n, X.rank
    if n > budget.m_extension_points:
        raise BudgetExceeded(f"2-extension of degree {n} exceeds budget {budget.m_extension_points}")
    C = X.colors
    sq = (C[:, None, :, None] * r + C[None, :, None, :]).reshape(n * n, n * n)
    on_diag = np.arange(n) * (n + 1)
    sq[on_diag, on_diag] += r * r
    return coherent_closure(sq, budget)


def graph_closure(arcs, n: int, budget: Budget | None = None) -> CoherentConfiguration:
    """WL closure of the graph with the given arcs on points ``0..n-1``."""
    C = np.zeros((n, n), dtype=np.int64) + 2
    np.fill_diagonal(C, 0)
    for a, b in arcs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"arc ({a},{b}) out of range")
        if a == b:
            raise ValueError(f"reflexive arc ({a},{a})")
        C[a, b] = 1
    return coherent_closure(C, budget)
