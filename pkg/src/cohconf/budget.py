"""Search budgets shared by the expensive routines.

Defaults can be overridden globally through ``COHCONF_BUDGET``, a comma
separated list of ``key=value`` pairs, e.g. ``COHCONF_BUDGET=search_points=60``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "COHCONF_BUDGET"


class BudgetExceeded(RuntimeError):
    """A search or enumeration would exceed its configured budget."""


@dataclass(frozen=True)
class Budget:
    search_points: int = 40  # degree cap for automorphism/isomorphism search
    group_order: int = 10**7  # explicit element enumeration cap
    aiso_rank: int = 256  # dense-tensor cap for algebraic isomorphism search
    aiso_maps: int = 10**5  # number of algebraic isomorphisms enumerated
    search_nodes: int = 10**6  # backtracking nodes per search
    m_extension_points: int = 40  # degree cap for the 2-extension
    condition_sets: int = 40  # full enumeration of condition (i)/(ii) up to this degree
    sample_size: int = 20000  # samples drawn when enumeration is skipped
    closure_points: int = 2000  # degree cap for coherent closure

    def with_(self, **kw) -> Budget:
        return replace(self, **kw)


def _from_env() -> Budget:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return Budget()
    known = {f.name for f in fields(Budget)}
    kw = {}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"{ENV_VAR}: unknown budget key {key!r}")
        kw[key] = int(value)
    return Budget(**kw)


def default_budget() -> Budget:
    return _from_env()


def resolve(budget: Budget | None) -> Budget:
    return default_budget() if budget is None else budget
