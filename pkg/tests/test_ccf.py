from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohconf.builders import c_scheme, cyclotomic_scheme, paley, trivial_scheme
from cohconf.ccf import (
    MAGIC,
    CatalogError,
    CCFError,
    ingest_catalog,
    locate,
    parse_ccf,
    read_document,
    write_catalog,
    write_ccf,
)
from cohconf.core import CoherenceError, from_color_matrix
from cohconf.gf import build_field

FOUR_CYCLE = "ccf 1\n4 3\n0 1 2 2\n2 0 1 2\n2 2 0 1\n1 2 2 0\n"


def test_round_trip_paley5():
    X = paley(5).scheme
    text = write_ccf(X)
    assert text.startswith(MAGIC + "\n5 3\n")
    Y = parse_ccf(text)
    assert np.array_equal(Y.colors, X.colors)


def test_round_trip_corpus(corpus):
    for name, X in corpus:
        text = write_ccf(X)
        Y = parse_ccf(text)
        assert Y == X, name
        assert write_ccf(Y) == text, name
        assert parse_ccf(text.encode("ascii")) == X


def test_writer_is_canonical():
    X = c_scheme(build_field(3, 2))
    shuffle = np.random.default_rng(2).permutation(X.rank) * 7 + 3
    assert write_ccf(from_color_matrix(shuffle[X.colors])) == write_ccf(X)


def test_missing_row_is_dimension_error():
    with pytest.raises(CCFError) as e:
        parse_ccf("ccf 1\n3 2\n0 1 1\n1 0 1\n")
    assert e.value.kind == "dimension"
    assert "row 3" in str(e.value)
    assert e.value.line == 5


def test_four_cycle_axiom_error():
    with pytest.raises(CCFError) as e:
        parse_ccf(FOUR_CYCLE)
    assert e.value.kind == "axiom"
    assert isinstance(e.value.cause, CoherenceError)
    assert e.value.witness is not None and len(e.value.witness[0]) == 3


@pytest.mark.parametrize(
    "text,kind,line,col",
    [
        ("ccf 1 \n1 1\n0\n", "lexical", 1, 6),
        ("ccf 2\n1 1\n0\n", "lexical", 1, 1),
        ("ccf 1\n1 1\n0 \n", "lexical", 3, 2),
        ("ccf 1\n2 2\n0 01\n1 0\n", "lexical", 3, 3),
        ("ccf 1\n2 2\n0  1\n1 0\n", "lexical", 3, 3),
        ("ccf 1\n2 2\n0\t1\n1 0\n", "lexical", 3, 2),
        ("ccf 1\r\n1 1\r\n0\r\n", "lexical", 1, 6),
        ("ccf 1\n2 2\n0 1\n", "dimension", 4, 1),
        ("ccf 1\n2 2\n0 1 1\n1 0\n", "dimension", 3, 1),
        ("ccf 1\n2 2\n0 2\n1 0\n", "dimension", 3, 3),
        ("ccf 1\n2 3\n0 1\n1 0\n", "dimension", 2, 1),
        ("ccf 1\n1 1\n0\n0\n", "dimension", 4, 1),
        ("ccf 1\n0 0\n", "dimension", 2, 1),
        ("ccf 1\n99999 1\n", "dimension", 2, 1),
        ("# note\n# more\nccf 1\n1 1\n0 \n", "lexical", 5, 2),
        ("", "lexical", 1, 1),
    ],
)
def test_error_positions(text, kind, line, col):
    with pytest.raises(CCFError) as e:
        parse_ccf(text)
    assert (e.value.kind, e.value.line, e.value.col) == (kind, line, col)
    d = e.value.as_dict()
    assert d["error"] == kind and d["line"] == line


def test_non_ascii_bytes():
    with pytest.raises(CCFError) as e:
        parse_ccf(b"ccf 1\n1 1\n\xff\n")
    assert (e.value.kind, e.value.line, e.value.col) == ("lexical", 3, 1)


def test_comments_only_before_header():
    assert parse_ccf("# a comment\nccf 1\n1 1\n0\n") == from_color_matrix([[0]])
    with pytest.raises(CCFError):
        parse_ccf("ccf 1\n# no\n1 1\n0\n")


def test_read_document_skips_axioms():
    doc = read_document(FOUR_CYCLE)
    assert (doc.n, doc.rank, doc.matrix.shape) == (4, 3, (4, 4))


# -- catalogs ---------------------------------------------------------------------

def test_two_blocks():
    text = write_catalog([paley(5).scheme, trivial_scheme(3)])
    got = ingest_catalog(text)
    assert got == [paley(5).scheme, trivial_scheme(3)]


def test_strict_catalog_reports_block():
    text = write_catalog([trivial_scheme(3)]) + "\n" + FOUR_CYCLE
    with pytest.raises(CatalogError) as e:
        ingest_catalog(text)
    assert e.value.block == 2
    assert e.value.as_dict()["detail"]["error"] == "axiom"
    errors = []
    got = ingest_catalog(text, strict=False, errors=errors)
    assert got == [trivial_scheme(3)]
    assert [err.block for err in errors] == [2]


def test_empty_catalog():
    for text in ("", "\n\n", b""):
        with pytest.raises(CatalogError) as e:
            ingest_catalog(text)
        assert e.value.block is None


def test_unknown_format():
    with pytest.raises(ValueError):
        ingest_catalog("x", format="json")


def test_matrix_list():
    text = "3\n0 1 1\n1 0 1\n1 1 0\n\n2\n0  1\n2  3\n"
    got = ingest_catalog(text, format="matrix-list")
    assert [X.n for X in got] == [3, 2]
    assert got[0] == trivial_scheme(3)
    assert got[1].rank == 4
    with pytest.raises(CatalogError) as e:
        ingest_catalog("2\n0 1\n", format="matrix-list")
    assert e.value.block == 1
    with pytest.raises(CatalogError):
        ingest_catalog("2\n0 x\n1 0\n", format="matrix-list")


def test_crlf_catalog():
    text = write_catalog([trivial_scheme(2), trivial_scheme(4)]).replace("\n", "\r\n")
    assert len(ingest_catalog(text)) == 2


def test_locate_paley13():
    F = build_field(13, 1)
    # schemes on 13 points, with the Paley scheme relabelled in the middle
    X = paley(13).scheme
    perm = np.random.default_rng(5).permutation(13)
    hidden = from_color_matrix(X.colors[np.ix_(perm, perm)])
    catalog = ingest_catalog(write_catalog([trivial_scheme(13), hidden, cyclotomic_scheme(F, 3)]))
    assert locate(catalog, X) == [1]
    assert locate(catalog, c_scheme(build_field(2, 3))) == []


# -- fuzz -------------------------------------------------------------------------

ALLOWED = (CCFError, CatalogError)


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=80))
def test_parser_never_crashes_on_bytes(raw):
    try:
        parse_ccf(raw)
    except ALLOWED:
        pass
    try:
        ingest_catalog(raw)
    except ALLOWED:
        pass


CCF_ALPHABET = st.sampled_from(list("ccf 1\n0123 \n#\r\t-x"))


@settings(max_examples=300, deadline=None)
@given(st.lists(CCF_ALPHABET, max_size=60).map("".join), st.booleans())
def test_parser_never_crashes_on_near_misses(body, prefixed):
    text = ("ccf 1\n" if prefixed else "") + body
    for fn in (parse_ccf, lambda t: ingest_catalog(t, strict=False), lambda t: ingest_catalog(t, format="matrix-list", strict=False)):
        try:
            fn(text)
        except ALLOWED:
            pass


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.integers(0, 3), min_size=n * n, max_size=n * n)))
def test_valid_or_structured_error(vals):
    n = int(round(len(vals) ** 0.5))
    rows = [vals[i * n:(i + 1) * n] for i in range(n)]
    text = f"ccf 1\n{n} {len(set(vals))}\n" + "".join(" ".join(map(str, r)) + "\n" for r in rows)
    try:
        X = parse_ccf(text)
    except CCFError as e:
        assert e.kind in ("dimension", "axiom")
        return
    assert parse_ccf(write_ccf(X)) == X
