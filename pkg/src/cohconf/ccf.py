"""Text formats for coherent configurations.

CCF, one configuration per document::

    # optional comment lines, only before the header
    ccf 1
    <n> <rank>
    <n rows of n relation indices separated by single spaces>

Lines end with LF, carry no trailing whitespace and numbers have no leading
zeros.  :func:`write_ccf` always emits the canonical relation ordering, so
output is byte-identical for equal configurations.

Catalogs are blocks separated by blank lines, either CCF documents
(``ccf-multi``) or ``matrix-list`` blocks: a line holding ``n`` followed by
``n`` rows of whitespace-separated indices.  The rank of a matrix-list block
is the number of distinct indices it uses.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import numpy as np

from .budget import Budget
from .core import AxiomError, CoherentConfiguration

log = logging.getLogger(__name__)

MAGIC = "ccf 1"
FORMATS = ("ccf-multi", "matrix-list")
# a header may not promise more than this many points
MAX_POINTS = 1 << 14

_NUMBER = re.compile(r"0|[1-9][0-9]*")


class CCFError(ValueError):
    """Parse failure with a 1-based position.

    ``kind`` is ``"lexical"``, ``"dimension"`` or ``"axiom"``; axiom failures
    keep the underlying :class:`AxiomError` as ``cause`` and its witness.
    """

    def __init__(self, kind: str, message: str, line: int | None = None, col: int | None = None, cause=None):
        where = "" if line is None else f"line {line}" + ("" if col is None else f", column {col}") + ": "
        super().__init__(where + message)
        self.kind = kind
        self.line = line
        self.col = col
        self.cause = cause

    @property
    def witness(self):
        return getattr(self.cause, "witness", None)

    def as_dict(self) -> dict:
        return {"error": self.kind, "line": self.line, "column": self.col, "message": str(self)}


class CatalogError(ValueError):
    """A catalog block failed; ``block`` counts from 1."""

    def __init__(self, block: int | None, message: str, cause: Exception | None = None):
        super().__init__(message if block is None else f"block {block}: {message}")
        self.block = block
        self.cause = cause

    def as_dict(self) -> dict:
        out = {"error": "catalog", "block": self.block, "message": str(self)}
        if isinstance(self.cause, CCFError):
            out["detail"] = self.cause.as_dict()
        return out


@dataclass(frozen=True)
class CCFDocument:
    version: int
    n: int
    rank: int
    matrix: np.ndarray


def _decode(text) -> str:
    if isinstance(text, (bytes, bytearray, memoryview)):
        raw = bytes(text)
        try:
            return raw.decode("ascii")
        except UnicodeDecodeError as e:
            line = raw.count(b"\n", 0, e.start) + 1
            col = e.start - (raw.rfind(b"\n", 0, e.start) + 1) + 1
            raise CCFError("lexical", f"non-ASCII byte 0x{raw[e.start]:02x}", line, col) from None
    if not isinstance(text, str):
        raise TypeError(f"expected str or bytes, got {type(text).__name__}")
    return text


def _numbers(line: str, lineno: int) -> list[int]:
    """Split a line into single-space separated decimals, reporting the first bad column."""
    if not line:
        raise CCFError("lexical", "empty line", lineno, 1)
    out = []
    pos = 0
    while True:
        m = _NUMBER.match(line, pos)
        if m is None:
            ch = line[pos] if pos < len(line) else "end of line"
            raise CCFError("lexical", f"expected a decimal number, found {ch!r}", lineno, pos + 1)
        end = m.end()
        if end < len(line) and line[end].isdigit():
            raise CCFError("lexical", "leading zero", lineno, pos + 1)
        out.append(int(m.group()))
        if end == len(line):
            return out
        if line[end] != " ":
            raise CCFError("lexical", f"unexpected character {line[end]!r}", lineno, end + 1)
        if end + 1 == len(line):
            raise CCFError("lexical", "trailing whitespace", lineno, end + 1)
        pos = end + 1


def _split_lines(text: str) -> list[str]:
    cr = text.find("\r")
    if cr >= 0:
        line = text.count("\n", 0, cr) + 1
        raise CCFError("lexical", "carriage return; lines must end with LF", line, cr - text.rfind("\n", 0, cr))
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def read_document(text, *, first_line: int = 1) -> CCFDocument:
    """Lexical and dimensional checks only; no axioms."""
    lines = _split_lines(_decode(text))
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        i += 1
    offset = first_line + i

    def lineno(k: int) -> int:
        return offset + k

    body = lines[i:]
    if not body:
        raise CCFError("lexical", f"missing header {MAGIC!r}", lineno(0), 1)
    if body[0] != MAGIC:
        if body[0].startswith(MAGIC) and body[0].rstrip() == MAGIC:
            raise CCFError("lexical", "trailing whitespace", lineno(0), len(MAGIC) + 1)
        raise CCFError("lexical", f"expected {MAGIC!r}", lineno(0), 1)
    if len(body) < 2:
        raise CCFError("lexical", "missing size line", lineno(1), 1)
    head = _numbers(body[1], lineno(1))
    if len(head) != 2:
        raise CCFError("dimension", f"size line needs '<n> <rank>', got {len(head)} numbers", lineno(1), 1)
    n, rank = head
    if n < 1:
        raise CCFError("dimension", "n must be positive", lineno(1), 1)
    if n > MAX_POINTS:
        raise CCFError("dimension", f"n = {n} exceeds the reader limit {MAX_POINTS}", lineno(1), 1)
    rows = body[2:]
    M = np.empty((n, n), dtype=np.int64)
    for k in range(n):
        if k >= len(rows):
            raise CCFError("dimension", f"row {k + 1} missing: expected {n} matrix rows, found {len(rows)}", lineno(2 + k), 1)
        vals = _numbers(rows[k], lineno(2 + k))
        if len(vals) != n:
            raise CCFError("dimension", f"row {k + 1}: expected {n} entries, found {len(vals)}", lineno(2 + k), 1)
        for j, v in enumerate(vals):
            if v >= rank:
                col = sum(len(str(u)) + 1 for u in vals[:j]) + 1
                raise CCFError("dimension", f"index {v} outside [0, {rank})", lineno(2 + k), col)
        M[k] = vals
    if len(rows) > n:
        raise CCFError("dimension", f"unexpected line after {n} matrix rows", lineno(2 + n), 1)
    used = len(np.unique(M))
    if used != rank:
        raise CCFError("dimension", f"header rank {rank} but {used} indices used", lineno(1), 1)
    return CCFDocument(1, n, rank, M)


def _validated(M: np.ndarray, line: int | None) -> CoherentConfiguration:
    try:
        return CoherentConfiguration.from_color_matrix(M)
    except AxiomError as e:
        raise CCFError("axiom", str(e), line, None, cause=e) from e


def parse_ccf(text) -> CoherentConfiguration:
    """Parse and validate one CCF document."""
    doc = read_document(text)
    return _validated(doc.matrix, None)


def write_ccf(X: CoherentConfiguration) -> str:
    rows = "\n".join(" ".join(map(str, r)) for r in X.colors.tolist())
    return f"{MAGIC}\n{X.n} {X.rank}\n{rows}\n"


# -- catalogs ------------------------------------------------------------------

def _blocks(text: str) -> list[tuple[int, list[str]]]:
    """``(first line number, lines)`` per block; blank lines separate blocks."""
    out: list[tuple[int, list[str]]] = []
    cur: list[str] = []
    start = 1
    for k, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            if cur:
                out.append((start, cur))
                cur = []
            continue
        if not cur:
            start = k
        cur.append(line)
    if cur:
        out.append((start, cur))
    return out


def _matrix_list_block(lines: list[str], first: int) -> np.ndarray:
    def ints(line: str, lineno: int) -> list[int]:
        out = []
        for tok in line.split():
            if not tok.isdigit() or not tok.isascii():
                raise CCFError("lexical", f"bad token {tok!r}", lineno, line.find(tok) + 1)
            out.append(int(tok))
        return out

    head = ints(lines[0], first)
    if len(head) != 1:
        raise CCFError("dimension", "block must start with a line holding n", first, 1)
    n = head[0]
    if not 1 <= n <= MAX_POINTS:
        raise CCFError("dimension", f"n = {n} out of range", first, 1)
    if len(lines) - 1 != n:
        raise CCFError("dimension", f"expected {n} rows, found {len(lines) - 1}", first + min(len(lines), n + 1), 1)
    M = np.empty((n, n), dtype=np.int64)
    for k, line in enumerate(lines[1:], start=1):
        vals = ints(line, first + k)
        if len(vals) != n:
            raise CCFError("dimension", f"expected {n} entries, found {len(vals)}", first + k, 1)
        M[k - 1] = vals
    return M


def ingest_catalog(
    text,
    format: str = "ccf-multi",
    *,
    strict: bool = True,
    errors: list | None = None,
) -> list[CoherentConfiguration]:
    """Read every block of a catalog.

    A bad block raises :class:`CatalogError` when ``strict``; otherwise it is
    skipped, logged, and appended to ``errors`` if a list is given.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown catalog format {format!r}; expected one of {FORMATS}")
    try:
        text = _decode(text)
    except CCFError as e:
        raise CatalogError(None, str(e), e) from e
    if "\r" in text:
        text = text.replace("\r\n", "\n")
    blocks = _blocks(text)
    if not blocks:
        raise CatalogError(None, "empty catalog")
    out = []
    for idx, (first, lines) in enumerate(blocks, start=1):
        try:
            if format == "ccf-multi":
                doc = read_document("\n".join(lines) + "\n", first_line=first)
                M = doc.matrix
            else:
                M = _matrix_list_block(lines, first)
            out.append(_validated(M, first))
        except CCFError as e:
            err = CatalogError(idx, str(e), e)
            if strict:
                raise err from e
            log.warning("%s", err)
            if errors is not None:
                errors.append(err)
    return out


def write_catalog(configs) -> str:
    return "\n".join(write_ccf(X) for X in configs)


def locate(catalog: list[CoherentConfiguration], X: CoherentConfiguration, budget: Budget | None = None) -> list[int]:
    """Positions of catalog entries algebraically isomorphic to ``X``.

    Entries are screened by fingerprint first; survivors need an explicit
    algebraic isomorphism.
    """
    from .iso import algebraic_isomorphisms, tensor_fingerprint

    want = tensor_fingerprint(X)
    hits = []
    for i, Y in enumerate(catalog):
        if Y.n != X.n or Y.rank != X.rank:
            continue
        if tensor_fingerprint(Y) == want and algebraic_isomorphisms(X, Y, budget):
            hits.append(i)
    return hits
