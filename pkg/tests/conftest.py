from __future__ import annotations

import functools

import pytest

from cohconf.builders import (
    PermGroup,
    cyclic_group,
    cyclotomic_scheme,
    dihedral_group,
    discrete_configuration,
    orbital_config,
    symmetric_group,
    trivial_group,
    trivial_scheme,
)
from cohconf.gf import build_field, prime_power

PRIME_POWERS_32 = [q for q in range(2, 33) if prime_power(q)]


def divisors(m: int) -> list[int]:
    return [i for i in range(1, m + 1) if m % i == 0]


def small_groups() -> dict[str, PermGroup]:
    klein = PermGroup.from_generators([[1, 0, 3, 2], [2, 3, 0, 1]], 4)
    alt4 = PermGroup.from_generators([[1, 2, 0, 3], [0, 2, 3, 1]], 4)
    # S3 acting on itself, and S3 x S2 on 3 + 2 points (intransitive)
    regular_s3 = PermGroup.from_generators([[1, 0, 3, 2, 5, 4], [2, 4, 0, 5, 1, 3]], 6)
    split = PermGroup.from_generators([[1, 0, 2, 3, 4], [1, 2, 0, 3, 4], [0, 1, 2, 4, 3]], 5)
    return {
        "S4": symmetric_group(4),
        "C5": cyclic_group(5),
        "D5": dihedral_group(5),
        "D6": dihedral_group(6),
        "C6": cyclic_group(6),
        "1_3": trivial_group(3),
        "V4": klein,
        "A4": alt4,
        "S3reg": regular_s3,
        "S3xS2": split,
    }


@functools.lru_cache(maxsize=None)
def cyclotomic_corpus():
    out = []
    for q in PRIME_POWERS_32:
        F = build_field(*prime_power(q))
        for index in divisors(q - 1):
            out.append((f"cyc{q}/{index}", cyclotomic_scheme(F, index)))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def group_corpus():
    return tuple((f"inv({name})", orbital_config(K)) for name, K in small_groups().items())


@functools.lru_cache(maxsize=None)
def family_corpus():
    out = []
    for n in range(1, 13):
        out.append((f"trivial{n}", trivial_scheme(n)))
        out.append((f"discrete{n}", discrete_configuration(n)))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def full_corpus():
    return cyclotomic_corpus() + group_corpus() + family_corpus()


def corpus_where(pred):
    return [(name, X) for name, X in full_corpus() if pred(X)]


@pytest.fixture(scope="session")
def corpus():
    return full_corpus()


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
