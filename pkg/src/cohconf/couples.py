"""Arrows between points, couples of triangles and their extensions.

For a base point ``mu`` we write ``a <- b`` (``arrow(X, mu, a, b)``) when
``c_{xr}^y == 1`` for ``x = r(mu, a)``, ``r = r(a, b)`` and ``y = r(mu, b)``;
then ``a`` is the only point of ``mu x`` joined to ``b`` by ``r``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .budget import Budget, resolve
from .core import CoherentConfiguration

HOLDS = "holds"
HOLDS_ON_SAMPLE = "holds-on-sample"
FAILS = "fails"
SKIPPED = "skipped"


# -- arrows --------------------------------------------------------------------

def arrow(X: CoherentConfiguration, mu: int, a: int, b: int) -> bool:
    C = X.colors
    x, r = C[mu, a], C[a, b]
    return int(np.count_nonzero((C[mu] == x) & (C[:, b] == r))) == 1


def arrow_weak(X: CoherentConfiguration, mu: int, a: int, b: int) -> bool:
    return arrow(X, mu, a, b) or arrow(X, mu, b, a)


def arrow_matrix(X: CoherentConfiguration, mu: int) -> np.ndarray:
    """Boolean matrix ``A[a, b] = (a <- b)`` for base point ``mu``."""
    C, R, n = X.colors, X.rank, X.n
    row = C[mu] * R
    A = np.empty((n, n), dtype=bool)
    for b in range(n):
        keys = row + C[:, b]
        u, cnt = np.unique(keys, return_counts=True)
        A[:, b] = cnt[np.searchsorted(u, keys)] == 1
    return A


def relation_arrow(X: CoherentConfiguration, x: int, r: int, y: int) -> bool:
    """``x ->_r y``: the intersection number ``c_{xr}^y`` equals one."""
    return X.tensor[x, r, y] == 1


# -- couples --------------------------------------------------------------------

@dataclass(frozen=True)
class Couple:
    x: int
    y: int
    z: int
    r: int
    s: int
    t: int

    def key(self) -> tuple[int, ...]:
        return (self.x, self.y, self.z, self.r, self.s, self.t)

    def is_valid(self, X: CoherentConfiguration) -> bool:
        cv = X.converse
        return (
            self.r in X.product(cv[self.x], self.y)
            and self.s in X.product(cv[self.y], self.z)
            and self.t in X.product(cv[self.z], self.x)
        )

    @classmethod
    def checked(cls, X: CoherentConfiguration, *rels: int) -> Couple:
        Q = cls(*(int(v) for v in rels))
        if not Q.is_valid(X):
            raise ValueError(f"{Q} violates r in x*y, s in y*z, t in z*x")
        return Q


def couple_at(X: CoherentConfiguration, mu: int, a: int, b: int, g: int) -> Couple:
    """The couple ``Q_mu(a, b, g)``; ``(a, b, g)`` is a mu-representation of it."""
    C = X.colors
    return Couple(int(C[mu, a]), int(C[mu, b]), int(C[mu, g]), int(C[a, b]), int(C[b, g]), int(C[g, a]))


class Extension(NamedTuple):
    m: int
    xb: int
    yb: int
    zb: int


def find_m_extension(X: CoherentConfiguration, Q: Couple, mu: int | None = None) -> Extension | None:
    """First ``(m, xb, yb, zb)`` in ascending order extending ``Q``.

    The triangle must satisfy ``xb in m*x`` (and likewise for y, z) and
    ``x*y & xb*yb == {r}``, ``y*z & yb*zb == {s}``, ``z*x & zb*xb == {t}``.
    With ``mu`` given only relations ``m`` with ``mu m`` nonempty are tried.
    """
    cv = X.converse
    prod = X.product
    xy, yz, zx = prod(cv[Q.x], Q.y), prod(cv[Q.y], Q.z), prod(cv[Q.z], Q.x)
    want_r, want_s, want_t = {Q.r}, {Q.s}, {Q.t}
    ms = range(X.rank) if mu is None else sorted(set(X.colors[mu].tolist()))
    for m in ms:
        mx = sorted(prod(cv[m], Q.x))
        my = sorted(prod(cv[m], Q.y))
        mz = sorted(prod(cv[m], Q.z))
        for xb in mx:
            for yb in my:
                if xy & prod(cv[xb], yb) != want_r:
                    continue
                for zb in mz:
                    if yz & prod(cv[yb], zb) == want_s and zx & prod(cv[zb], xb) == want_t:
                        return Extension(int(m), int(xb), int(yb), int(zb))
    return None


# -- the two conditions --------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status in (HOLDS, HOLDS_ON_SAMPLE)

    def as_dict(self) -> dict:
        return {"status": self.status, "witness": None if self.witness is None else list(self.witness)}


@dataclass(frozen=True)
class ConditionReport:
    mu: int
    condition_i: Verdict
    condition_ii: Verdict
    stats: dict = field(default_factory=dict)

    @property
    def fully_holds(self) -> bool:
        return self.condition_i.status == HOLDS and self.condition_ii.status == HOLDS

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "condition_i": self.condition_i.as_dict(),
            "condition_ii": self.condition_ii.as_dict(),
            "stats": dict(self.stats),
        }


def _condition_i(X, A, delta_size, budget, rng, stats) -> Verdict:
    n = X.n
    bits = [int("".join("1" if v else "0" for v in A[d][::-1]), 2) for d in range(n)]
    full = (1 << n) - 1
    top = min(delta_size, n)
    if n <= budget.condition_sets:
        checked = 0
        for size in range(1, top + 1):
            for delta in itertools.combinations(range(n), size):
                acc = full
                for d in delta:
                    acc &= bits[d]
                    if not acc:
                        break
                checked += 1
                if not acc:
                    stats["delta_sets"] = checked
                    return Verdict(FAILS, delta)
        stats["delta_sets"] = checked
        return Verdict(HOLDS)
    if budget.sample_size <= 0:
        return Verdict(SKIPPED)
    for i in range(budget.sample_size):
        delta = tuple(sorted(rng.sample(range(n), top)))
        acc = full
        for d in delta:
            acc &= bits[d]
        if not acc:
            stats["delta_sets"] = i + 1
            return Verdict(FAILS, delta)
    stats["delta_sets"] = budget.sample_size
    return Verdict(HOLDS_ON_SAMPLE)


def _condition_ii(X, mu, budget, rng, stats) -> Verdict:
    n, C = X.n, X.colors
    if n <= budget.condition_sets:
        idx = np.indices((n, n, n)).reshape(3, -1)
        status = HOLDS
    elif budget.sample_size > 0:
        idx = np.array([[rng.randrange(n) for _ in range(3)] for _ in range(budget.sample_size)]).T
        status = HOLDS_ON_SAMPLE
    else:
        return Verdict(SKIPPED)
    a, b, g = idx
    row = C[mu]
    keys = np.stack([row[a], row[b], row[g], C[a, b], C[b, g], C[g, a]], axis=1)
    uniq, first = np.unique(keys, axis=0, return_index=True)
    stats["triples"] = idx.shape[1]
    stats["couples"] = len(uniq)
    for j in np.argsort(first):
        if find_m_extension(X, Couple(*(int(v) for v in uniq[j])), mu) is None:
            k = first[j]
            return Verdict(FAILS, (int(a[k]), int(b[k]), int(g[k])))
    return Verdict(status)


def check_theorem_conditions(
    X: CoherentConfiguration,
    mu: int,
    budget: Budget | None = None,
    *,
    delta_size: int = 4,
    seed: int = 0,
) -> ConditionReport:
    """Verify conditions (i) and (ii) for base point ``mu``.

    (i)  every set of at most ``delta_size`` points has a common ``lambda``
         with ``delta <- lambda`` for all its members;
    (ii) every couple ``Q_mu(a, b, g)`` has an ``m``-extension with ``mu m``
         nonempty.

    Full enumeration up to ``budget.condition_sets`` points, uniform samples
    beyond that.
    """
    if not 0 <= mu < X.n:
        raise IndexError(f"point {mu} out of range")
    budget = resolve(budget)
    rng = random.Random(seed)
    stats: dict = {"n": X.n, "delta_size": delta_size}
    A = arrow_matrix(X, mu)
    ci = _condition_i(X, A, delta_size, budget, rng, stats)
    cii = _condition_ii(X, mu, budget, rng, stats)
    return ConditionReport(mu, ci, cii, stats)


def lemma_091119f_check(X: CoherentConfiguration) -> bool:
    """Arrows never decrease valency, and arrows out of a maximal valency are symmetric."""
    val = X.valency
    for (x, r, y), v in X.tensor.entries.items():
        if v == 1 and val[x] > val[y]:
            return False
    k = X.max_valency
    for mu in range(X.n):
        A = arrow_matrix(X, mu)
        top = val[X.colors[mu]] == k
        if np.any(A[top] & ~A.T[top]):
            return False
    return True
