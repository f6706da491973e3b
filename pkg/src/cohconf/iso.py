"""Automorphisms, isomorphisms and algebraic isomorphisms at desk scale.

Point searches use individualisation and refinement: both sides carry a
cell labelling of the points, refined until equitable with labels derived
from sorted signatures, so equal labels on the two sides mean the same thing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .budget import Budget, BudgetExceeded, resolve
from .builders import PermGroup, compose, orbital_config
from .core import CoherentConfiguration


class _Search:
    """Colour-preserving bijections between two labelled pair colourings."""

    def __init__(self, C: np.ndarray, D: np.ndarray, rank: int, budget: Budget):
        self.C, self.D = C, D
        self.n = C.shape[0]
        self.EC = C * rank + C.T
        self.ED = D * rank + D.T
        self.budget = budget
        self.nodes = 0

    def refine(self, PC: np.ndarray, PD: np.ndarray):
        n = self.n
        cells = len(np.unique(PC))
        while True:
            k = int(max(PC.max(), PD.max())) + 1
            sc = np.sort(self.EC * k + PC[None, :], axis=1)
            sd = np.sort(self.ED * k + PD[None, :], axis=1)
            rows = np.concatenate([np.column_stack([PC, sc]), np.column_stack([PD, sd])])
            uniq, inv = np.unique(rows, axis=0, return_inverse=True)
            inv = inv.ravel()
            nc, nd = inv[:n], inv[n:]
            m = len(uniq)
            if not np.array_equal(np.bincount(nc, minlength=m), np.bincount(nd, minlength=m)):
                return None
            new_cells = len(np.unique(nc))
            if new_cells == cells:
                return nc, nd
            PC, PD, cells = nc, nd, new_cells

    @staticmethod
    def individualize(P: np.ndarray, a: int) -> np.ndarray:
        P = P.copy()
        P[a] = P.max() + 1
        return P

    @staticmethod
    def target_cell(P: np.ndarray) -> int | None:
        counts = np.bincount(P)
        big = np.flatnonzero(counts > 1)
        return int(big[0]) if len(big) else None

    def find(self, PC: np.ndarray, PD: np.ndarray):
        """One bijection f with D[f(a), f(b)] == C[a, b] respecting the cells, or None."""
        self.nodes += 1
        if self.nodes > self.budget.search_nodes:
            raise BudgetExceeded(f"search exceeded {self.budget.search_nodes} nodes")
        res = self.refine(PC, PD)
        if res is None:
            return None
        PC, PD = res
        cell = self.target_cell(PC)
        if cell is None:
            f = np.empty(self.n, dtype=np.int64)
            f[np.argsort(PC)] = np.argsort(PD)
            if np.array_equal(self.D[np.ix_(f, f)], self.C):
                return tuple(int(x) for x in f)
            return None
        a = int(np.flatnonzero(PC == cell)[0])
        PCa = self.individualize(PC, a)
        for b in np.flatnonzero(PD == cell):
            f = self.find(PCa, self.individualize(PD, int(b)))
            if f is not None:
                return f
        return None


def _check_size(X: CoherentConfiguration, budget: Budget):
    if X.n > budget.search_points:
        raise BudgetExceeded(f"degree {X.n} exceeds search budget {budget.search_points}")


def _orbit(a: int, gens: list) -> set[int]:
    orbit = {a}
    frontier = [a]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


def automorphism_group(X: CoherentConfiguration, budget: Budget | None = None) -> PermGroup:
    """``aut(X)`` with a strong generating set found along a base.

    The order is the product of the basic orbit lengths, each of which is
    computed exactly by testing every candidate image in the target cell.
    """
    budget = resolve(budget)
    _check_size(X, budget)
    C = X.colors
    search = _Search(C, C, X.rank, budget)
    P = np.diagonal(C).astype(np.int64)
    P = search.refine(P, P)[0]
    base, cells, parts = [], [], []
    while (cell := search.target_cell(P)) is not None:
        a = int(np.flatnonzero(P == cell)[0])
        base.append(a)
        cells.append([int(b) for b in np.flatnonzero(P == cell)])
        parts.append(P)
        P = search.refine(*(search.individualize(P, a),) * 2)[0]

    gens: list[tuple[int, ...]] = []
    order = 1
    for i in reversed(range(len(base))):
        a = base[i]
        prefix = base[:i]
        stab = [g for g in gens if all(g[b] == b for b in prefix)]
        orbit = _orbit(a, stab)
        rejected: set[int] = set()
        Pa = search.individualize(parts[i], a)
        for b in cells[i]:
            if b in orbit or b in rejected:
                continue
            f = search.find(Pa, search.individualize(parts[i], b))
            if f is None:
                rejected |= _orbit(b, stab)
            else:
                gens.append(f)
                stab.append(f)
                orbit = _orbit(a, stab)
        order *= len(orbit)
    return PermGroup.from_generators(gens, X.n, order=order)


def find_isomorphism(X: CoherentConfiguration, Y: CoherentConfiguration, phi=None, budget: Budget | None = None):
    """A point bijection ``f`` with ``r_Y(f a, f b) == phi(r_X(a, b))``, or None.

    Without ``phi`` every algebraic isomorphism is tried in turn.
    """
    budget = resolve(budget)
    if X.n != Y.n or X.rank != Y.rank:
        return None
    _check_size(X, budget)
    if phi is None:
        for m in algebraic_isomorphisms(X, Y, budget):
            f = find_isomorphism(X, Y, m.phi, budget)
            if f is not None:
                return f
        return None
    inv = np.empty(X.rank, dtype=np.int64)
    inv[np.asarray(phi)] = np.arange(X.rank)
    D = inv[Y.colors]
    search = _Search(X.colors, D, X.rank, budget)
    return search.find(np.diagonal(X.colors).astype(np.int64), np.diagonal(D).astype(np.int64))


def induced_map(X: CoherentConfiguration, Y: CoherentConfiguration, f) -> tuple[int, ...]:
    """The relation map ``r -> r^f`` of an isomorphism ``f``."""
    f = np.asarray(f)
    phi = np.full(X.rank, -1, dtype=np.int64)
    phi[X.colors.ravel()] = Y.colors[np.ix_(f, f)].ravel()
    return tuple(int(v) for v in phi)


# -- algebraic isomorphisms ----------------------------------------------------

@dataclass(frozen=True)
class AlgebraicMap:
    source: CoherentConfiguration
    target: CoherentConfiguration
    phi: tuple[int, ...]

    def __call__(self, r: int) -> int:
        return self.phi[r]

    def image(self, rels) -> frozenset:
        return frozenset(self.phi[r] for r in rels)

    def is_valid(self) -> bool:
        X, Y, phi = self.source, self.target, np.asarray(self.phi)
        if X.rank != Y.rank or sorted(self.phi) != list(range(X.rank)):
            return False
        if not np.array_equal(Y.reflexive[phi], X.reflexive):
            return False
        if not np.array_equal(Y.converse[phi], phi[X.converse]):
            return False
        if not np.array_equal(Y.valency[phi], X.valency):
            return False
        TX, TY = X.tensor.entries, Y.tensor.entries
        if len(TX) != len(TY):
            return False
        return all(TY.get((phi[r], phi[s], phi[t]), 0) == v for (r, s, t), v in TX.items())


def _fingerprints(X: CoherentConfiguration, T: np.ndarray) -> list[tuple]:
    out = []
    for r in range(X.rank):
        out.append((
            bool(X.reflexive[r]),
            int(X.valency[r]),
            int(X.valency[X.converse[r]]),
            bool(X.converse[r] == r),
            tuple(sorted(T[r][T[r] > 0].tolist())),
            tuple(sorted(T[:, :, r][T[:, :, r] > 0].tolist())),
        ))
    return out


def tensor_fingerprint(X: CoherentConfiguration) -> tuple:
    """Invariant of ``X`` under algebraic isomorphism; equal fingerprints are a cheap pre-screen."""
    return (X.n, X.rank, tuple(sorted(_fingerprints(X, X.tensor.dense()))))


def algebraic_isomorphisms(
    X: CoherentConfiguration, Y: CoherentConfiguration, budget: Budget | None = None
) -> list[AlgebraicMap]:
    """All relation bijections preserving every intersection number."""
    budget = resolve(budget)
    if X.rank != Y.rank:
        return []
    rank = X.rank
    if rank > budget.aiso_rank:
        raise BudgetExceeded(f"rank {rank} exceeds algebraic-isomorphism budget {budget.aiso_rank}")
    TX, TY = X.tensor.dense(), Y.tensor.dense()
    fx, fy = _fingerprints(X, TX), _fingerprints(Y, TY)
    if sorted(fx) != sorted(fy):
        return []
    cand = [[s for s in range(rank) if fy[s] == fx[r]] for r in range(rank)]
    order = sorted(range(rank), key=lambda r: (not X.reflexive[r], len(cand[r]), r))
    singletons = {k: next(iter(v)) for k, v in X.products.items() if len(v) == 1}
    convX, convY = X.converse, Y.converse
    results: list[tuple[int, ...]] = []
    nodes = 0

    def assign(phi, used, r, s, assigned):
        stack = [(r, s)]
        while stack:
            r, s = stack.pop()
            if phi[r] >= 0:
                if phi[r] != s:
                    return False
                continue
            if used[s] or fx[r] != fy[s]:
                return False
            phi[r] = s
            used[s] = True
            assigned.append(r)
            stack.append((int(convX[r]), int(convY[s])))
            # c_{e r}^r = 1 exactly for the source relation e of r
            stack.append((int(X.source[r]), int(Y.source[s])))
            for u in list(assigned):
                for a, b in ((r, u), (u, r)):
                    t = singletons.get((a, b))
                    if t is None:
                        continue
                    img = Y.product(phi[a], phi[b])
                    if len(img) != 1:
                        return False
                    stack.append((t, next(iter(img))))
        return True

    def consistent(assigned, start, phi):
        # only entries touching relations assigned since ``start`` are new
        A = np.asarray(assigned)
        B = phi[A]
        N, M = A[start:], B[start:]
        return (
            np.array_equal(TX[np.ix_(N, A, A)], TY[np.ix_(M, B, B)])
            and np.array_equal(TX[np.ix_(A, N, A)], TY[np.ix_(B, M, B)])
            and np.array_equal(TX[np.ix_(A, A, N)], TY[np.ix_(B, B, M)])
        )

    def rec(phi, used, assigned):
        nonlocal nodes
        nodes += 1
        if nodes > budget.search_nodes:
            raise BudgetExceeded(f"algebraic isomorphism search exceeded {budget.search_nodes} nodes")
        nxt = next((r for r in order if phi[r] < 0), None)
        if nxt is None:
            results.append(tuple(int(v) for v in phi))
            if len(results) > budget.aiso_maps:
                raise BudgetExceeded(f"more than {budget.aiso_maps} algebraic isomorphisms")
            return
        for s in cand[nxt]:
            if used[s]:
                continue
            phi2, used2, assigned2 = phi.copy(), used.copy(), list(assigned)
            if assign(phi2, used2, nxt, s, assigned2) and consistent(assigned2, len(assigned), phi2):
                rec(phi2, used2, assigned2)

    rec(np.full(rank, -1, dtype=np.int64), np.zeros(rank, dtype=bool), [])
    return [AlgebraicMap(X, Y, phi) for phi in sorted(results)]


def algebraic_automorphisms(X: CoherentConfiguration, budget: Budget | None = None) -> list[AlgebraicMap]:
    return algebraic_isomorphisms(X, X, budget)


# -- isomorphisms and separability ----------------------------------------------

def _induced_representatives(X, Y, budget):
    """Pairs ``(phi, f)`` with ``f`` inducing ``phi``, one per induced ``phi``."""
    out, missing = [], []
    for m in algebraic_isomorphisms(X, Y, budget):
        f = find_isomorphism(X, Y, m.phi, budget)
        if f is None:
            missing.append(m)
        else:
            out.append((m, f))
    return out, missing


def isomorphisms(X: CoherentConfiguration, Y: CoherentConfiguration, *, count_only: bool = False,
                 budget: Budget | None = None):
    """All isomorphisms from ``X`` to ``Y`` (or just their number).

    Every isomorphism induces an algebraic isomorphism, and those inducing a
    fixed one form a coset of ``aut(X)``; the search runs per coset.
    """
    budget = resolve(budget)
    if X.n != Y.n or X.rank != Y.rank:
        return 0 if count_only else []
    aut = automorphism_group(X, budget)
    reps, _ = _induced_representatives(X, Y, budget)
    if count_only:
        return len(reps) * aut.order
    elems = aut.elements(budget)
    return sorted(compose(g, f) for _, f in reps for g in elems)


@dataclass(frozen=True)
class Witness:
    holds: bool
    iso_count: int
    aut_order: int
    aiso_count: int
    not_induced: tuple = ()

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "iso": self.iso_count,
            "aut": self.aut_order,
            "iso_over_aut": self.iso_count // self.aut_order,
            "aiso": self.aiso_count,
            "not_induced": [list(m) for m in self.not_induced],
        }


def separability_witness(X: CoherentConfiguration, budget: Budget | None = None) -> Witness:
    """Check ``|iso(X)| / |aut(X)| == |Aiso(X)|``."""
    budget = resolve(budget)
    aut = automorphism_group(X, budget)
    reps, missing = _induced_representatives(X, X, budget)
    iso_count = len(reps) * aut.order
    aiso = len(reps) + len(missing)
    return Witness(
        holds=iso_count // aut.order == aiso,
        iso_count=iso_count,
        aut_order=aut.order,
        aiso_count=aiso,
        not_induced=tuple(m.phi for m in missing),
    )


def is_schurian(X: CoherentConfiguration, budget: Budget | None = None) -> bool:
    """``X == inv(aut(X))``."""
    return orbital_config(automorphism_group(X, budget), validate=False) == X


def brute_force_automorphisms(X: CoherentConfiguration) -> list[tuple[int, ...]]:
    """Filter all ``n!`` permutations; only for tiny ``n``."""
    C = X.colors
    out = []
    for f in itertools.permutations(range(X.n)):
        fa = np.asarray(f)
        if np.array_equal(C[np.ix_(fa, fa)], C):
            out.append(f)
    return out
