"""Coherent configurations stored as dense relation-index matrices.

A configuration on ``n`` points is an ``n x n`` matrix whose entry
``(a, b)`` is the index of the basis relation containing the pair.  Indices
are always canonical: reflexive relations come first, ordered by their least
point, then the irreflexive ones ordered by their lexicographically least
pair.  Two configurations with the same partition therefore have identical
matrices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class AxiomError(ValueError):
    """The matrix does not describe a coherent configuration."""

    axiom = "coherent configuration"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DiagonalError(AxiomError):
    axiom = "diagonal is a union of basis relations"


class ConverseError(AxiomError):
    axiom = "converse of a basis relation is a basis relation"


class CoherenceError(AxiomError):
    axiom = "intersection numbers are constant"


def canonical_labels(matrix) -> tuple[np.ndarray, int]:
    """Relabel an arbitrary square label matrix into canonical relation order."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("configuration needs at least one point")
    _, first, inv = np.unique(a.ravel(), return_index=True, return_inverse=True)
    on_diag = (first // n) == (first % n)
    order = np.lexsort((first, ~on_diag))
    relabel = np.empty(len(order), dtype=np.int64)
    relabel[order] = np.arange(len(order))
    return relabel[inv.reshape(n, n)], len(order)


@dataclass(frozen=True)
class IntersectionTensor:
    """Nonzero intersection numbers ``c[r, s, t]``."""

    entries: dict
    rank: int

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    def dense(self) -> np.ndarray:
        out = np.zeros((self.rank,) * 3, dtype=np.int64)
        for (r, s, t), v in self.entries.items():
            out[r, s, t] = v
        return out


class CoherentConfiguration:
    """A validated coherent configuration; immutable after construction."""

    def __init__(self, colors: np.ndarray, rank: int, *, _trusted: bool = False):
        if not _trusted:
            raise TypeError("use CoherentConfiguration.from_color_matrix")
        colors = np.ascontiguousarray(colors, dtype=np.int64)
        colors.setflags(write=False)
        self.colors = colors
        self.n = colors.shape[0]
        self.rank = rank
        flat = colors.ravel()
        _, first = np.unique(flat, return_index=True)
        self._first = first
        self.rep = np.stack([first // self.n, first % self.n], axis=1)
        self.reflexive = self.rep[:, 0] == self.rep[:, 1]
        conv = np.empty(rank, dtype=np.int64)
        conv[colors.ravel()] = colors.T.ravel()
        conv.setflags(write=False)
        self.converse = conv
        diag = np.diagonal(colors)
        self.fibers = tuple(
            tuple(int(a) for a in np.flatnonzero(diag == e)) for e in range(rank) if self.reflexive[e]
        )
        # source/target reflexive relation of each basis relation
        self.source = diag[self.rep[:, 0]]
        self.target = diag[self.rep[:, 1]]
        val = np.empty(rank, dtype=np.int64)
        for s in range(rank):
            val[s] = np.count_nonzero(colors[self.rep[s, 0]] == s)
        val.setflags(write=False)
        self.valency = val

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_color_matrix(cls, matrix, *, validate: bool = True) -> CoherentConfiguration:
        """Canonicalise and (by default) validate a relation-index matrix.

        Raises the first violated axiom as a :class:`DiagonalError`,
        :class:`ConverseError` or :class:`CoherenceError` carrying a witness.
        """
        colors, rank = canonical_labels(matrix)
        if validate:
            _check_diagonal(colors)
            _check_coherence(colors, rank)
            _check_converse(colors)
        return cls(colors, rank, _trusted=True)

    # -- basic structure ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, CoherentConfiguration):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.colors, other.colors)

    def __hash__(self):
        return hash((self.n, self.colors.tobytes()))

    def __repr__(self):
        return f"<CoherentConfiguration n={self.n} rank={self.rank}>"

    def __call__(self, a: int, b: int) -> int:
        """Index of the basis relation containing ``(a, b)``."""
        return int(self.colors[a, b])

    @property
    def is_homogeneous(self) -> bool:
        return len(self.fibers) == 1

    @property
    def is_discrete(self) -> bool:
        return self.rank == self.n * self.n

    def relations(self) -> range:
        return range(self.rank)

    def irreflexive(self) -> list[int]:
        return [s for s in range(self.rank) if not self.reflexive[s]]

    def pairs(self, s: int) -> np.ndarray:
        return np.argwhere(self.colors == s)

    def neighbourhood(self, a: int, s: int) -> np.ndarray:
        """Points ``b`` with ``(a, b)`` in relation ``s``."""
        return np.flatnonzero(self.colors[a] == s)

    def _check_relation(self, *rels):
        for r in rels:
            if not 0 <= r < self.rank:
                raise IndexError(f"relation {r} out of range for rank {self.rank}")

    # -- intersection numbers -------------------------------------------------

    def _slice_counts(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.rep[t]
        keys = self.colors[a] * self.rank + self.colors[:, b]
        return np.unique(keys, return_counts=True)

    @cached_property
    def tensor(self) -> IntersectionTensor:
        entries = {}
        for t in range(self.rank):
            keys, counts = self._slice_counts(t)
            for k, c in zip(keys.tolist(), counts.tolist()):
                entries[(k // self.rank, k % self.rank, t)] = c
        return IntersectionTensor(entries, self.rank)

    @cached_property
    def products(self) -> dict:
        """``products[(r, s)]`` is the complex product ``rs`` as a frozenset."""
        acc = defaultdict(set)
        for r, s, t in self.tensor.entries:
            acc[(r, s)].add(t)
        return {k: frozenset(v) for k, v in acc.items()}

    def product(self, r: int, s: int) -> frozenset:
        return self.products.get((r, s), frozenset())

    @cached_property
    def indistinguishing(self) -> np.ndarray:
        """``c(s)`` for every relation (reflexive entries hold ``n``-like counts)."""
        out = np.zeros(self.rank, dtype=np.int64)
        conv = self.converse
        for (r, s, t), v in self.tensor.entries.items():
            if s == conv[r]:
                out[t] += v
        return out

    @property
    def max_valency(self) -> int:
        return int(self.valency.max())


# -- validation --------------------------------------------------------------

def _check_diagonal(colors: np.ndarray) -> None:
    diag = np.diagonal(colors)
    mask = np.isin(colors, diag)
    np.fill_diagonal(mask, False)
    if mask.any():
        a, b = (int(v) for v in np.argwhere(mask)[0])
        s = int(colors[a, b])
        c = int(np.flatnonzero(diag == s)[0])
        raise DiagonalError(
            f"relation {s} contains the diagonal pair ({c},{c}) and the off-diagonal pair ({a},{b})",
            witness=(s, (c, c), (a, b)),
        )


def _check_converse(colors: np.ndarray) -> None:
    flat, flat_t = colors.ravel(), colors.T.ravel()
    rank = int(flat.max()) + 1
    keys = np.unique(flat * rank + flat_t)
    src = keys // rank
    dup = np.flatnonzero(np.diff(src) == 0)
    if len(dup):
        s = int(src[dup[0]])
        t1, t2 = int(keys[dup[0]] % rank), int(keys[dup[0] + 1] % rank)
        n = colors.shape[0]
        p1 = np.flatnonzero((flat == s) & (flat_t == t1))[0]
        p2 = np.flatnonzero((flat == s) & (flat_t == t2))[0]
        raise ConverseError(
            f"pairs {divmod(int(p1), n)} and {divmod(int(p2), n)} lie in relation {s} "
            f"but their reversals lie in relations {t1} and {t2}",
            witness=(s, divmod(int(p1), n), divmod(int(p2), n)),
        )


def _check_coherence(C: np.ndarray, rank: int) -> None:
    n = C.shape[0]
    first = np.unique(C.ravel(), return_index=True)[1]
    rep = np.stack([first // n, first % n], axis=1)
    reps = np.empty((rank, n), dtype=np.int64)
    for t in range(rank):
        a, b = rep[t]
        reps[t] = np.sort(C[a] * rank + C[:, b])
    for a in range(n):
        cols = np.sort(C[a][:, None] * rank + C, axis=0).T  # row b: sorted keys over gamma
        expected = reps[C[a]]
        bad = np.flatnonzero((cols != expected).any(axis=1))
        if len(bad):
            b = int(bad[0])
            t = int(C[a, b])
            a0, b0 = (int(v) for v in rep[t])
            got = dict(zip(*np.unique(cols[b], return_counts=True)))
            want = dict(zip(*np.unique(expected[b], return_counts=True)))
            key = min(k for k in set(got) | set(want) if got.get(k, 0) != want.get(k, 0))
            r, s = divmod(int(key), rank)
            raise CoherenceError(
                f"|a r & b s*| differs over relation {t}: r={r}, s={s} gives "
                f"{want.get(key, 0)} at ({a0},{b0}) but {got.get(key, 0)} at ({a},{b})",
                witness=((r, s, t), (a0, b0), (a, b)),
            )


# -- operation-level API -----------------------------------------------------

def from_color_matrix(matrix) -> CoherentConfiguration:
    return CoherentConfiguration.from_color_matrix(matrix)


def intersection_number(X: CoherentConfiguration, r: int, s: int, t: int) -> int:
    """``c_{rs}^t = |a r & b s*|`` counted at the representative pair of ``t``."""
    X._check_relation(r, s, t)
    a, b = X.rep[t]
    return int(np.count_nonzero((X.colors[a] == r) & (X.colors[:, b] == s)))


def full_tensor(X: CoherentConfiguration) -> IntersectionTensor:
    return X.tensor


def valencies(X: CoherentConfiguration) -> np.ndarray:
    return X.valency


def max_valency(X: CoherentConfiguration) -> int:
    return X.max_valency


def indistinguishing_set(X: CoherentConfiguration, a: int, b: int) -> np.ndarray:
    """Points ``g`` with ``r(g, a) == r(g, b)``."""
    return np.flatnonzero(X.colors[:, a] == X.colors[:, b])


def indistinguishing_number(X: CoherentConfiguration, s: int) -> int:
    X._check_relation(s)
    if X.reflexive[s]:
        raise ValueError(f"relation {s} is reflexive")
    return int(X.indistinguishing[s])


def max_indistinguishing(X: CoherentConfiguration) -> int:
    """``c(X)``; zero when there is no irreflexive relation."""
    irr = ~X.reflexive
    return int(X.indistinguishing[irr].max()) if irr.any() else 0


def complex_product(X: CoherentConfiguration, r: int, s: int) -> frozenset:
    X._check_relation(r, s)
    return X.product(r, s)


def restrict_at_singleton(X: CoherentConfiguration, alpha: int) -> CoherentConfiguration:
    """Drop a point that forms a fiber on its own; the rest is a configuration."""
    if not 0 <= alpha < X.n:
        raise IndexError(f"point {alpha} out of range")
    if (alpha,) not in X.fibers:
        raise ValueError(f"{{{alpha}}} is not a fiber")
    keep = np.array([a for a in range(X.n) if a != alpha], dtype=np.int64)
    if len(keep) == 0:
        raise ValueError("restriction would leave no points")
    return CoherentConfiguration.from_color_matrix(X.colors[np.ix_(keep, keep)])


def is_fission(Y: CoherentConfiguration, X: CoherentConfiguration, *, check_lemma: bool = True) -> bool:
    """True iff every basis relation of ``X`` is a union of basis relations of ``Y``.

    With ``check_lemma`` a positive answer also asserts that refining cannot
    raise the maximal valency or the indistinguishing number.
    """
    if Y.n != X.n:
        raise ValueError(f"degree mismatch: {Y.n} vs {X.n}")
    # each Y-relation must sit inside a single X-relation
    keys = np.unique(Y.colors.ravel() * X.rank + X.colors.ravel())
    fission = len(keys) == Y.rank
    if fission and check_lemma:
        assert Y.max_valency <= X.max_valency, "fission raised the maximal valency"
        assert max_indistinguishing(Y) <= max_indistinguishing(X), "fission raised c(X)"
    return fission
