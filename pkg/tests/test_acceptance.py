"""Acceptance criteria 1-8, each timed against its stated limit.

Every test prints a ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line;
the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import time

import pytest

import test_ccf
import test_closure
import test_core
import test_couples
import test_iso
import test_separability
from cohconf.builders import c_scheme, cyclotomic_scheme, paley
from cohconf.cli import main
from cohconf.closure import graph_closure, point_extension
from cohconf.core import max_indistinguishing
from cohconf.couples import check_theorem_conditions
from cohconf.gf import build_field, prime_power
from cohconf.iso import is_schurian, separability_witness
from cohconf.separability import FISSION_SEPARABLE, SEPARABLE, analyze, c_bound, paley_wl_bound
from conftest import ACCEPTANCE_LINES, PRIME_POWERS_32, divisors, full_corpus

EXPECTED_TABLE = (
    {(2, d) for d in (2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 15, 16, 18, 20)}
    | {(3, d) for d in (2, 3, 4, 5, 6, 8, 10)}
    | {(5, d) for d in (2, 3, 4, 6)}
)


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_exceptional_table():
    import io
    import json

    t = time.perf_counter()
    out = io.StringIO()
    code = main(["exceptional-table"], out)
    rows = [json.loads(x) for x in out.getvalue().splitlines()]
    got = {(r["p"], r["d"]) for r in rows if r["report"] == "exceptional-pair"}
    dt = time.perf_counter() - t
    ok = code == 0 and got == EXPECTED_TABLE and dt < 1.0
    extra = sorted(got - EXPECTED_TABLE)
    missing = sorted(EXPECTED_TABLE - got)
    report(1, ok, f"{len(got)} exceptional pairs, extra={extra} missing={missing}, {dt:.3f}s (limit 1s)")


def test_criterion_2_valency_and_indistinguishing():
    t = time.perf_counter()
    bad, checked = [], []
    for q in range(4, 513):
        pd = prime_power(q)
        if pd is None or pd[1] < 2:
            continue
        p, d = pd
        X = c_scheme(build_field(p, d))
        k, c = X.max_valency, max_indistinguishing(X)
        checked.append(q)
        if k != d or c > c_bound(p, d):
            bad.append((q, k, c, c_bound(p, d)))
    dt = time.perf_counter() - t
    report(2, not bad and dt < 60, f"{len(checked)} schemes C(q), q <= 512, violations={bad}, {dt:.1f}s (limit 60s)")


def test_criterion_3_inequality_implies_conditions():
    t = time.perf_counter()
    candidates = list(full_corpus())
    # point extensions add configurations with intermediate valencies
    for name, X in full_corpus():
        if 1 < X.n <= 40 and not X.is_discrete:
            candidates.append((f"{name}@0", point_extension(X, 0)))
    certified, counter = 0, []
    for name, X in candidates:
        if X.n > 40:
            continue
        rep = analyze(X)
        if rep.conclusion not in (SEPARABLE, FISSION_SEPARABLE) or not rep.inequality:
            continue
        certified += 1
        cond = check_theorem_conditions(X, 0)
        if not cond.fully_holds:
            counter.append(name)
    dt = time.perf_counter() - t
    report(
        3,
        certified > 0 and not counter,
        f"{certified} certified configurations of {len(candidates)} (n <= 40, full enumeration), counterexamples={counter}, {dt:.1f}s",
    )


@pytest.mark.parametrize("pd", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_criterion_4_witness(pd):
    t = time.perf_counter()
    w = separability_witness(c_scheme(build_field(*pd)))
    dt = time.perf_counter() - t
    q = pd[0] ** pd[1]
    report(
        4,
        w.holds and dt < 300,
        f"C({pd[0]}^{pd[1]}) on {q - 1} points: |iso|/|aut| = {w.iso_count}/{w.aut_order} = {w.aiso_count} = |Aiso|, {dt:.2f}s (limit 300s)",
    )


def test_criterion_5_schurity():
    t = time.perf_counter()
    count, bad = 0, []
    for q in PRIME_POWERS_32:
        F = build_field(*prime_power(q))
        for index in divisors(q - 1):
            X = cyclotomic_scheme(F, index)
            for Y, tag in ((X, "X"), (point_extension(X, 0), "X_0")):
                count += 1
                if not is_schurian(Y):
                    bad.append((q, index, tag))
    dt = time.perf_counter() - t
    report(5, not bad, f"{count} cyclotomic schemes and point extensions, q <= 32, non-schurian={bad}, {dt:.1f}s")


def test_criterion_6_paley_structure():
    bad = []
    for q in (5, 9, 13, 17, 25):
        P = paley(q)
        X = graph_closure(sorted(P.arcs), q)
        a, b = next(iter(sorted(P.arcs)))
        s = int(X.colors[a, b])
        t = next(r for r in range(X.rank) if not X.reflexive[r] and r != s)
        T = X.tensor
        got = (X.rank, X.n, int(X.valency[s]), T[s, s, s], T[s, s, t])
        if got != (3, q, (q - 1) // 2, (q - 5) // 4, (q - 1) // 4):
            bad.append((q, got))
    for q in (7, 11):
        X = graph_closure(sorted(paley(q, "tournament").arcs), q)
        if sorted(X.valency.tolist()) != [1, (q - 1) // 2, (q - 1) // 2]:
            bad.append((q, X.valency.tolist()))
    report(6, not bad, f"SRG parameters for q in 5,9,13,17,25 and tournament valencies for q in 7,11, mismatches={bad}")


def test_criterion_7_paley_bound():
    got = {q: paley_wl_bound(q).bound for q in (13, 17, 25, 29, 3**4, 3**6, 3**5)}
    want = {13: 3, 17: 3, 25: 3, 29: 3, 81: "unknown", 729: "unknown", 243: "unknown"}
    flags = [dict(i) for i in paley_wl_bound(13).inconsistencies]
    flagged = any(f["q"] == 5**3 for f in flags)
    report(7, got == want and flagged, f"bounds {got}, flagged p=5 discrepancy {flags}")


def _property_suites(corpus):
    # each entry runs one property over the generated corpus
    return [
        ("axiom round-trip", lambda: test_core.test_round_trip_corpus(corpus)),
        ("random matrices validate or raise", test_core.test_random_matrices_validate_or_raise),
        ("product bound (i)", lambda: test_core.test_complex_product_bounded_by_valency(corpus)),
        ("product equivalences (ii)", lambda: test_core.test_complex_product_equivalences(corpus)),
        ("product lifting (iii)", lambda: test_core.test_product_lifting(corpus)),
        ("two-point extension lemma", lambda: test_couples.test_lemma_091119f_on_corpus(corpus)),
        ("two-sided determination replay", test_couples.test_lemma_25119b_replay),
        ("monotonicity under point extension", lambda: test_separability.test_monotone_under_point_extension(corpus)),
        ("algebraic maps respect products", lambda: test_iso.test_algebraic_maps_respect_products(corpus)),
        ("arrows preserved", lambda: test_couples.test_arrows_preserved_by_algebraic_automorphisms(corpus)),
        ("closure idempotence", lambda: test_closure.test_idempotence_on_corpus(corpus)),
        ("CCF round-trip", lambda: test_ccf.test_round_trip_corpus(corpus)),
        ("parser fuzz on bytes", test_ccf.test_parser_never_crashes_on_bytes),
        ("parser fuzz on near misses", test_ccf.test_parser_never_crashes_on_near_misses),
    ]


def test_criterion_8_property_suites(corpus):
    t = time.perf_counter()
    failed = []
    for name, run in _property_suites(corpus):
        try:
            run()
        except AssertionError as e:
            failed.append(f"{name}: {e}")
    dt = time.perf_counter() - t
    n = len(_property_suites(corpus))
    report(8, not failed and dt < 600, f"{n} property suites over {len(corpus)} corpus configurations, failed={failed}, {dt:.1f}s (limit 600s)")
