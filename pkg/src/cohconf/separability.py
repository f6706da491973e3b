"""Separability certificates from parameters, and the exceptional (p, d) table.

All arithmetic on the inequalities is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .budget import Budget
from .builders import c_scheme, cyclotomic_scheme
from .closure import point_extension
from .core import CoherentConfiguration, is_fission, max_indistinguishing, restrict_at_singleton
from .couples import ConditionReport, check_theorem_conditions
from .gf import FiniteField, is_prime, prime_power

SEPARABLE = "separable-certified"
FISSION_SEPARABLE = "fission-separable-certified"
INCONCLUSIVE = "inconclusive"
TWO_SEPARABLE = "2-separable-certified"

# primes 2..23 and degrees 2..33 cover every pair the crude estimate leaves open
PRIME_RANGE = (2, 23)
DEGREE_RANGE = (2, 33)

# (p, d) settled by direct computation on C(p^d) and its cyclotomic schemes
COMPUTED_SEPARABLE = frozenset({(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)})

# Published list of possible non-2-separable degrees, kept only for cross-checking.
PUBLISHED_TABLE = {5: (4, 5, 6), 3: (4, 5, 6, 8, 10), 2: (6, 7, 8, 9, 10, 11, 12, 14, 15, 16, 18, 20)}

# Published Paley exceptions, kept only for cross-checking.
PUBLISHED_PALEY_EXCEPTIONS = {
    "graph": frozenset({3**4, 3**6, 3**8, 3**10, 5**4, 5**6}),
    "tournament": frozenset({3**5}),
}


def c_bound(p: int, d: int) -> int:
    """Upper bound ``sum_{i=1}^{d-1} (p^gcd(i, d) - 1)`` on c(C(p^d))."""
    return sum(p ** gcd(i, d) - 1 for i in range(1, d))


def c_bound_by_divisors(p: int, d: int) -> int:
    """Same sum grouped by ``e = gcd(i, d)``: ``phi(d/e)`` terms equal ``p^e - 1``."""
    total = 0
    for e in range(1, d):
        if d % e == 0:
            total += _totient(d // e) * (p**e - 1)
    return total


def _totient(m: int) -> int:
    return sum(1 for i in range(1, m + 1) if gcd(i, m) == 1)


@dataclass(frozen=True)
class ExceptionalPair:
    p: int
    d: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def as_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def inequality_180120a(p: int, d: int) -> tuple[bool, int, int]:
    """``3 * c_bound(p, d) * (d - 1) * d < p^d - 1`` as ``(holds, lhs, rhs)``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 2:
        raise ValueError(f"degree must be at least 2, got {d}")
    lhs = 3 * c_bound(p, d) * (d - 1) * d
    rhs = p**d - 1
    return lhs < rhs, lhs, rhs


def exceptional_pairs() -> list[ExceptionalPair]:
    """Pairs in the open range where the refined inequality fails, sorted by (p, d)."""
    out = []
    for p in range(PRIME_RANGE[0], PRIME_RANGE[1] + 1):
        if not is_prime(p):
            continue
        for d in range(DEGREE_RANGE[0], DEGREE_RANGE[1] + 1):
            holds, lhs, rhs = inequality_180120a(p, d)
            if not holds:
                out.append(ExceptionalPair(p, d, lhs, rhs))
    return out


def is_exceptional(p: int, d: int) -> bool:
    if d < 2:
        return False
    return not inequality_180120a(p, d)[0]


def table_inconsistencies() -> list[dict]:
    """Rows of the published table that disagree with the computed exceptions."""
    remaining: dict[int, list[int]] = {}
    for e in exceptional_pairs():
        if (e.p, e.d) not in COMPUTED_SEPARABLE:
            remaining.setdefault(e.p, []).append(e.d)
    out = []
    for p in sorted(set(remaining) | set(PUBLISHED_TABLE)):
        got, published = tuple(remaining.get(p, ())), PUBLISHED_TABLE.get(p, ())
        if got != published:
            out.append({
                "p": p,
                "computed": list(got),
                "published": list(published),
                "missing_from_published": sorted(set(got) - set(published)),
                "not_computed": sorted(set(published) - set(got)),
            })
    return out


# -- analysis of a single configuration -----------------------------------------

@dataclass
class AnalysisReport:
    n: int
    k: int
    c: int
    rhs: int
    inequality: bool
    condition_report: ConditionReport | None = None
    conclusion: str = INCONCLUSIVE

    @property
    def margin(self) -> int:
        return self.n - self.rhs

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "c": self.c,
            "rhs": self.rhs,
            "margin": self.margin,
            "inequality_031119l": self.inequality,
            "condition_report": None if self.condition_report is None else self.condition_report.as_dict(),
            "conclusion": self.conclusion,
        }


def analyze(X: CoherentConfiguration, deep: bool = False, budget: Budget | None = None) -> AnalysisReport:
    """Evaluate ``n > 3 c (k - 1) k`` and optionally the two point conditions.

    When the inequality holds every fission of ``X`` is covered as well; a
    discrete configuration has no proper fission, so it is reported plainly
    as separable.
    """
    k = X.max_valency
    c = max_indistinguishing(X)
    rhs = 3 * c * (k - 1) * k
    holds = X.n > rhs
    report = AnalysisReport(X.n, k, c, rhs, holds)
    if deep:
        report.condition_report = check_theorem_conditions(X, 0, budget)
    if holds:
        report.conclusion = SEPARABLE if X.is_discrete else FISSION_SEPARABLE
    elif report.condition_report is not None and report.condition_report.fully_holds:
        report.conclusion = SEPARABLE
    return report


# -- cyclotomic schemes ----------------------------------------------------------

@dataclass
class TwoSeparabilityReport:
    p: int
    d: int
    index: int
    rank: int
    extension_rank: int
    restricted_rank: int
    restricted_is_fission_of_c: bool
    exceptional: bool
    restricted_analysis: AnalysisReport
    conclusion: str
    reasons: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "restricted_analysis"}
        out["restricted_analysis"] = self.restricted_analysis.as_dict()
        return out


def two_separability_report(field_: FiniteField, M, budget: Budget | None = None) -> TwoSeparabilityReport:
    """Certify 2-separability of a cyclotomic scheme through its extension at 0.

    ``M`` is a multiplicative subgroup (elements) or its index.
    """
    X = cyclotomic_scheme(field_, M)
    index = X.rank - 1
    Xa = point_extension(X, 0, budget)
    X0 = restrict_at_singleton(Xa, 0) if field_.q > 2 else None
    if X0 is None:
        raise ValueError("GF(2) leaves no points after removing 0")
    fission = is_fission(X0, c_scheme(field_))
    exceptional = is_exceptional(field_.p, field_.d)
    sub = analyze(X0, budget=budget)
    reasons = []
    if not exceptional:
        reasons.append(f"(p, d) = ({field_.p}, {field_.d}) is not exceptional")
    if sub.conclusion != INCONCLUSIVE:
        reasons.append(f"restricted extension is {sub.conclusion}")
    return TwoSeparabilityReport(
        p=field_.p,
        d=field_.d,
        index=index,
        rank=X.rank,
        extension_rank=Xa.rank,
        restricted_rank=X0.rank,
        restricted_is_fission_of_c=fission,
        exceptional=exceptional,
        restricted_analysis=sub,
        conclusion=TWO_SEPARABLE if reasons else INCONCLUSIVE,
        reasons=reasons,
    )


# -- Paley graphs and tournaments --------------------------------------------------

def paley_exceptions(kind: str) -> frozenset[int]:
    """Orders q of the given kind not covered by the bound, computed from the table."""
    out = set()
    for e in exceptional_pairs():
        if e.p % 2 == 0 or (e.p, e.d) in COMPUTED_SEPARABLE:
            continue
        q = e.p**e.d
        if (kind == "graph" and q % 4 == 1) or (kind == "tournament" and q % 4 == 3):
            out.add(q)
    return frozenset(out)


@dataclass(frozen=True)
class PaleyBound:
    q: int
    kind: str
    bound: int | str
    computed_exceptions: tuple
    published_exceptions: tuple
    inconsistencies: tuple

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "kind": self.kind,
            "bound": self.bound,
            "computed_exceptions": list(self.computed_exceptions),
            "published_exceptions": list(self.published_exceptions),
            "inconsistencies": [dict(i) for i in self.inconsistencies],
        }


def paley_wl_bound(q: int, kind: str | None = None) -> PaleyBound:
    """WL-dimension bound 3 for the Paley graph/tournament on q vertices, or "unknown"."""
    pd = prime_power(q)
    if pd is None or q % 2 == 0:
        raise ValueError(f"{q} is not an odd prime power")
    natural = "graph" if q % 4 == 1 else "tournament"
    kind = kind or natural
    if kind not in ("graph", "tournament"):
        raise ValueError(f"kind must be 'graph' or 'tournament', got {kind!r}")
    if kind != natural:
        raise ValueError(f"no Paley {kind} on {q} vertices")
    computed = paley_exceptions(kind)
    published = PUBLISHED_PALEY_EXCEPTIONS[kind]
    flags = tuple(
        {"q": x, "computed": "unknown" if x in computed else 3, "published": "unknown" if x in published else 3}
        for x in sorted(computed ^ published)
    )
    return PaleyBound(
        q=q,
        kind=kind,
        bound="unknown" if q in computed else 3,
        computed_exceptions=tuple(sorted(computed)),
        published_exceptions=tuple(sorted(published)),
        inconsistencies=flags,
    )
