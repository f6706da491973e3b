"""Constructors for the schemes studied here.

Points of schemes over a field ``F`` are element codes (see :mod:`cohconf.gf`),
so point 0 is the zero element.  Schemes on ``F^x`` use point ``i`` for the
element with code ``i + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .budget import Budget, BudgetExceeded, resolve
from .closure import graph_closure
from .core import CoherentConfiguration
from .gf import FieldElement, FiniteField, build_field, multiplicative_subgroup, prime_power

Perm = tuple[int, ...]


def _as_perm(g: Sequence[int], n: int) -> Perm:
    g = tuple(int(x) for x in g)
    if len(g) != n or sorted(g) != list(range(n)):
        raise ValueError(f"not a permutation of {n} points: {g!r}")
    return g


@dataclass(frozen=True)
class PermGroup:
    """A permutation group on ``range(degree)`` given by generators.

    Permutations are image tuples: ``g[i]`` is the image of ``i``.  Products
    apply the left factor first.
    """

    degree: int
    generators: tuple[Perm, ...]
    known_order: int | None = dc_field(default=None, compare=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], degree: int, order: int | None = None) -> PermGroup:
        perms = []
        for g in gens:
            p = _as_perm(g, degree)
            if p != tuple(range(degree)) and p not in perms:
                perms.append(p)
        return cls(degree, tuple(perms), order)

    @cached_property
    def order(self) -> int:
        if self.known_order is not None:
            return self.known_order
        if not self.generators:
            return 1
        from sympy.combinatorics import Permutation, PermutationGroup

        return int(PermutationGroup([Permutation(list(g)) for g in self.generators]).order())

    def elements(self, budget: Budget | None = None) -> list[Perm]:
        """All elements, by closing the generators under composition."""
        budget = resolve(budget)
        if self.order > budget.group_order:
            raise BudgetExceeded(f"group of order {self.order} exceeds budget {budget.group_order}")
        ident = tuple(range(self.degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.generators:
                    hg = tuple(g[i] for i in h)
                    if hg not in seen:
                        seen.add(hg)
                        nxt.append(hg)
            frontier = nxt
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        labels = _components(self.degree, [np.asarray(g) for g in self.generators])
        out: dict[int, list[int]] = {}
        for a, c in enumerate(labels):
            out.setdefault(int(c), []).append(a)
        return list(out.values())


def compose(f: Perm, g: Perm) -> Perm:
    """Apply ``f`` then ``g``."""
    return tuple(g[i] for i in f)


def inverse(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, j in enumerate(f):
        out[j] = i
    return tuple(out)


def _components(size: int, maps: list[np.ndarray]) -> np.ndarray:
    if not maps:
        return np.arange(size)
    src = np.concatenate([np.arange(size)] * len(maps))
    dst = np.concatenate(maps)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size))
    return connected_components(graph, directed=True, connection="weak")[1]


def orbital_config(K: PermGroup, *, validate: bool = True) -> CoherentConfiguration:
    """``inv(K)``: the basis relations are the orbits of ``K`` on pairs.

    Orbits are found by joining every pair with its images under the
    generators, so the group order never has to be enumerated.
    """
    n = K.degree
    pair_maps = []
    for g in K.generators:
        g = np.asarray(g, dtype=np.int64)
        pair_maps.append((g[:, None] * n + g[None, :]).ravel())
    labels = _components(n * n, pair_maps).reshape(n, n)
    return CoherentConfiguration.from_color_matrix(labels, validate=validate)


# -- small families -----------------------------------------------------------

def trivial_scheme(n: int) -> CoherentConfiguration:
    C = np.ones((n, n), dtype=np.int64)
    np.fill_diagonal(C, 0)
    return CoherentConfiguration.from_color_matrix(C)


def discrete_configuration(n: int) -> CoherentConfiguration:
    return CoherentConfiguration.from_color_matrix(np.arange(n * n).reshape(n, n))


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append([1, 0] + list(range(2, n)))
    if n >= 3:
        gens.append(list(range(1, n)) + [0])
    return PermGroup.from_generators(gens, n, order=_factorial(n))


def cyclic_group(n: int) -> PermGroup:
    return PermGroup.from_generators([[(i + 1) % n for i in range(n)]], n, order=n)


def dihedral_group(n: int) -> PermGroup:
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return PermGroup.from_generators([rot, ref], n, order=2 * n if n > 2 else None)


def trivial_group(n: int) -> PermGroup:
    return PermGroup(n, (), 1)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# -- schemes over finite fields ------------------------------------------------

def _subgroup_index(field: FiniteField, M) -> int:
    elems = frozenset(field(m) for m in M)
    if not elems or any(m.code == 0 for m in elems):
        raise ValueError("M must be a nonempty subset of the multiplicative group")
    size = len(elems)
    if (field.q - 1) % size or elems != multiplicative_subgroup(field, (field.q - 1) // size):
        raise ValueError("M is not a subgroup of the multiplicative group")
    return (field.q - 1) // size


def cyclotomic_scheme(field: FiniteField, M) -> CoherentConfiguration:
    """Scheme on ``F`` with relations ``{(x, y): y - x in M a}``.

    ``M`` is a multiplicative subgroup given by its elements; an ``int`` is
    read as the index of the subgroup.
    """
    index = M if isinstance(M, int) else _subgroup_index(field, M)
    if index < 1 or (field.q - 1) % index:
        raise ValueError(f"index {index} does not divide q - 1")
    diff = field.difference_table()
    logs = field.log_table[diff]
    colors = np.where(diff == 0, -1, logs % index)
    return CoherentConfiguration.from_color_matrix(colors)


def affine_group(field: FiniteField, index: int) -> PermGroup:
    """``{x -> m x + b : m in M, b in F}`` for the subgroup ``M`` of given index."""
    q = field.q
    gens = []
    m = field.pow_code(field.xi, index)
    if m != 1:
        gens.append([field.mul_code(m, x) for x in range(q)])
    for i in range(field.d):
        e = field.p**i
        gens.append([field.add_code(x, e) for x in range(q)])
    return PermGroup.from_generators(gens, q, order=q * ((q - 1) // index))


def semilinear_group(field: FiniteField) -> PermGroup:
    """``F^x`` (multiplications) extended by the Frobenius map, acting on ``F^x``."""
    n = field.q - 1
    gens = []
    if n > 1:
        gens.append([field.mul_code(field.xi, i + 1) - 1 for i in range(n)])
    if field.d > 1:
        frob = field.frobenius_table()
        gens.append([int(frob[i + 1]) - 1 for i in range(n)])
    return PermGroup.from_generators(gens, n, order=n * field.d)


def c_scheme(field: FiniteField, *, validate: bool = True) -> CoherentConfiguration:
    """The scheme ``C(F)``: orbitals of ``F^x`` extended by ``aut(F)`` on ``F^x``."""
    return orbital_config(semilinear_group(field), validate=validate)


def c_scheme_from_relations(field: FiniteField) -> CoherentConfiguration:
    """``C(F)`` built literally from the sets ``{(a x^s, a y^s)}``.

    Slow; kept as an independent route for cross-checking :func:`c_scheme`.
    """
    n = field.q - 1
    powers = [field.p**i for i in range(field.d)]
    C = np.full((n, n), -1, dtype=np.int64)
    label = 0
    for x in range(1, field.q):
        for y in range(1, field.q):
            if C[x - 1, y - 1] >= 0:
                continue
            for e in powers:
                xs, ys = field.pow_code(x, e), field.pow_code(y, e)
                for a in range(1, field.q):
                    C[field.mul_code(a, xs) - 1, field.mul_code(a, ys) - 1] = label
            label += 1
    return CoherentConfiguration.from_color_matrix(C)


@dataclass(frozen=True)
class Paley:
    field: FiniteField
    kind: str
    arcs: frozenset
    scheme: CoherentConfiguration

    @property
    def q(self) -> int:
        return self.field.q


def paley(q: int, kind: str = "graph") -> Paley:
    """Paley graph (q = 1 mod 4) or tournament (q = 3 mod 4) and its WL closure."""
    pd = prime_power(q)
    if pd is None:
        raise ValueError(f"{q} is not a prime power")
    if q % 2 == 0:
        raise ValueError(f"Paley structures need odd q, got {q}")
    if kind == "graph":
        if q % 4 != 1:
            raise ValueError(f"Paley graph needs q = 1 mod 4, got {q}")
    elif kind == "tournament":
        if q % 4 != 3:
            raise ValueError(f"Paley tournament needs q = 3 mod 4, got {q}")
    else:
        raise ValueError(f"kind must be 'graph' or 'tournament', got {kind!r}")
    F = build_field(*pd)
    squares = {m.code for m in multiplicative_subgroup(F, 2)}
    diff = F.difference_table()
    arcs = frozenset((x, y) for x in range(q) for y in range(q) if int(diff[x, y]) in squares)
    return Paley(F, kind, arcs, graph_closure(sorted(arcs), q))


def field_points(field: FiniteField) -> list[FieldElement]:
    """Field elements in point order."""
    return field.elements()
