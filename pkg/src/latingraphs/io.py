"""Text formats for squares and graphs, and checksummed JSON/CSV for reports.

Square format::

    n
    s00 s01 ... s0(n-1)
    ...

Edge-list format: a header ``"n m"`` then ``m`` lines ``"i j w"``, sorted by
``(i, j)`` with ``i < j`` and loops (``i == i``) last.  For multigraphs ``w``
is the edge multiplicity; for a loop it is the number of loops, each of which
adds 2 to the diagonal of the weight matrix.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .exceptions import ChecksumError, LatinSquareError, ParseError
from .latin import LatinSquare, validate_latin
from .models import Graph, MultiGraph

CSV_COLUMNS = ("trial", "seed", "n", "param", "property", "value", "micros")


# -- squares ----------------------------------------------------------------------


def format_square(L: LatinSquare) -> str:
    lines = [str(L.order)]
    lines += [" ".join(str(s) for s in row) for row in L.cells.tolist()]
    return "\n".join(lines) + "\n"


def _reindex(tokens, n):
    """Map an arbitrary alphabet of exactly ``n`` symbols onto ``0..n-1``."""
    flat = [t for row in tokens for t in row]
    try:
        values = [int(t) for t in flat]
        distinct = sorted(set(values))
        key = values
    except ValueError:
        distinct = sorted(set(flat))
        key = flat
    if len(distinct) != n:
        return None
    index = {s: i for i, s in enumerate(distinct)}
    return np.array([index[s] for s in key], dtype=np.int64).reshape(n, n)


def parse_square(text: str) -> LatinSquare:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing order line", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"order must be an integer, got {lines[0].strip()!r}", line=1) from None
    if n < 1:
        raise ParseError("order must be >= 1", line=1)
    rows = []
    for r in range(n):
        lineno = r + 2
        if lineno > len(lines):
            raise ParseError(f"expected {n} rows, file ends after {r}", line=lineno)
        toks = lines[lineno - 1].split()
        if len(toks) != n:
            raise ParseError(f"expected {n} symbols, found {len(toks)}", line=lineno)
        rows.append(toks)
    extra = [i for i in range(n + 1, len(lines)) if lines[i].strip()]
    if extra:
        raise ParseError("trailing content after the last row", line=extra[0] + 1)
    try:
        cells = np.array([[int(t) for t in row] for row in rows], dtype=np.int64)
        if not ((cells >= 0) & (cells < n)).all():
            raise ValueError
    except ValueError:
        cells = _reindex(rows, n)
        if cells is None:
            raise ParseError(f"alphabet does not have exactly {n} symbols", line=2) from None
    try:
        return validate_latin(cells)
    except LatinSquareError as exc:
        where = exc.where
        line = where[1] + 2 if where and where[0] in ("row", "cell") else (
            where[2] + 2 if where else None
        )
        raise ParseError(str(exc), line=line) from exc


def save_square(L: LatinSquare, path):
    Path(path).write_text(format_square(L))


def load_square(path) -> LatinSquare:
    return parse_square(Path(path).read_text())


# -- graphs -----------------------------------------------------------------------


def format_edge_list(G) -> str:
    if isinstance(G, MultiGraph):
        W = G.weights
        n = G.n
        iu, ju = np.nonzero(np.triu(W, 1))
        lines = [f"{i} {j} {W[i, j]}" for i, j in zip(iu.tolist(), ju.tolist())]
        loops = [f"{i} {i} {W[i, i] // 2}" for i in range(n) if W[i, i]]
        lines += loops
    else:
        n = G.n
        lines = [f"{i} {j} 1" for i, j in G.edges()]
    return "\n".join([f"{n} {len(lines)}"] + lines) + "\n"


def parse_edge_list(text: str, multigraph: bool | None = None):
    """Parse the edge-list format.

    Returns a :class:`MultiGraph` when ``multigraph`` is true, or when it is
    ``None`` and the file has loops or multiplicities above 1.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError("missing header", line=1)
    head = lines[0].split()
    try:
        n, m = (int(t) for t in head)
    except ValueError:
        raise ParseError("header must be 'n m'", line=1) from None
    if len(lines) - 1 < m:
        raise ParseError(f"expected {m} edge lines, found {len(lines) - 1}", line=len(lines) + 1)
    W = np.zeros((n, n), dtype=np.int64)
    has_multi = False
    for idx in range(m):
        lineno = idx + 2
        toks = lines[lineno - 1].split()
        if len(toks) != 3:
            raise ParseError("edge line must be 'i j w'", line=lineno)
        try:
            i, j, w = (int(t) for t in toks)
        except ValueError:
            raise ParseError("non-integer field", line=lineno) from None
        if not (0 <= i < n and 0 <= j < n) or w < 1:
            raise ParseError(f"bad edge {i} {j} {w}", line=lineno)
        if i == j:
            W[i, i] += 2 * w
            has_multi = True
        else:
            W[i, j] += w
            W[j, i] += w
            has_multi = has_multi or w > 1
    if multigraph is None:
        multigraph = has_multi
    if multigraph:
        sums = W.sum(axis=1)
        if n and not (sums == sums[0]).all():
            raise ParseError("multigraph rows do not share a common degree", line=1)
        deg = int(sums[0]) if n else 0
        if deg % 2:
            raise ParseError("multigraph degree must be even (2k)", line=1)
        return MultiGraph(W, deg // 2)
    return Graph(W > 0)


def save_graph(G, path):
    Path(path).write_text(format_edge_list(G))


def load_graph(path, multigraph=None):
    return parse_edge_list(Path(path).read_text(), multigraph)


# -- reports ----------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def checksum(payload) -> str:
    blob = json.dumps(_jsonable(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def dump_report(payload: dict, path):
    body = _jsonable(payload)
    body = dict(body)
    body.pop("checksum", None)
    body["checksum"] = checksum(body)
    Path(path).write_text(json.dumps(body, indent=2, sort_keys=True))


def load_report(path) -> dict:
    try:
        body = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    stored = body.pop("checksum", None)
    if stored is None:
        raise ChecksumError("report has no checksum")
    if checksum(body) != stored:
        raise ChecksumError("report checksum mismatch")
    body["checksum"] = stored
    return body


def _csv_value(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def records_to_csv(records, path=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_csv_value(getattr(rec, c) if c != "property" else rec.prop) for c in CSV_COLUMNS])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv_rows(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ParseError(f"unexpected CSV columns {reader.fieldnames}", line=1)
        return list(reader)


def io_roundtrip(artifact):
    """Write ``artifact`` to a temporary file and read it back."""
    fd, name = tempfile.mkstemp()
    os.close(fd)
    try:
        if isinstance(artifact, LatinSquare):
            save_square(artifact, name)
            return load_square(name)
        if isinstance(artifact, (Graph, MultiGraph)):
            save_graph(artifact, name)
            return load_graph(name, multigraph=isinstance(artifact, MultiGraph))
        if isinstance(artifact, dict):
            dump_report(artifact, name)
            return load_report(name)
        raise TypeError(f"cannot round-trip {type(artifact).__name__}")
    finally:
        os.unlink(name)
