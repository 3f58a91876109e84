"""JSON documents and text renderings.

A document is one JSON object with keys ``kind``, ``n`` and one payload:
``edges`` for a tournament, ``order`` for an ordered algorithm, ``rows``
for per-row query lists (``null`` marks an empty slot). Loading validates.
"""

from __future__ import annotations

import json
import os
import tempfile

from .asynchronous import RowOrderedAlgorithm
from .core import OrderedAlgorithm, Tournament, ValidationError
from .generators import GAP, RowLayout

PAYLOAD = {"tournament": "edges", "ordered": "order", "rows": "rows"}


def to_document(obj) -> dict:
    if isinstance(obj, Tournament):
        return {"kind": "tournament", "n": obj.n, "edges": [list(e) for e in obj.edges()]}
    if isinstance(obj, OrderedAlgorithm):
        return {"kind": "ordered", "n": obj.n, "order": obj.order.tolist()}
    if isinstance(obj, (RowLayout, RowOrderedAlgorithm)):
        return {"kind": "rows", "n": obj.n, "rows": obj.rows()}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _int(x, what: str) -> int:
    # bool is an int subclass but never a site
    if not isinstance(x, int) or isinstance(x, bool):
        raise ValidationError(f"{what} must be an integer, got {x!r}")
    return x


def _pairs(raw, what: str) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise ValidationError(f"{what} must be a list")
    out = []
    for e in raw:
        if not isinstance(e, list) or len(e) != 2:
            raise ValidationError(f"{what} entries must be [from, to] pairs, got {e!r}")
        out.append((_int(e[0], "site"), _int(e[1], "site")))
    return out


def from_document(doc) -> Tournament | OrderedAlgorithm | RowLayout | RowOrderedAlgorithm:
    """Rebuild and validate. Rows with an empty slot come back as a
    :class:`RowLayout`, otherwise as a :class:`RowOrderedAlgorithm`."""
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in PAYLOAD:
        raise ValidationError(f"unknown kind {kind!r}")
    expected = {"kind", "n", PAYLOAD[kind]}
    if set(doc) != expected:
        raise ValidationError(f"{kind} document needs exactly the keys {sorted(expected)}")
    n = _int(doc["n"], "n")
    if n < 2:
        raise ValidationError("n must be at least 2")

    if kind == "tournament":
        obj = Tournament.from_edges(n, _pairs(doc["edges"], "edges"))
        if len(doc["edges"]) != obj.num_edges:
            raise ValidationError("tournament must list every pair exactly once")
        obj.validate()
        return obj
    if kind == "ordered":
        obj = OrderedAlgorithm.from_order(n, _pairs(doc["order"], "order"))
        obj.validate()
        return obj

    rows = doc["rows"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ValidationError(f"rows must be a list of {n} lists")
    for r in rows:
        if not isinstance(r, list):
            raise ValidationError("each row must be a list")
        for x in r:
            if x is not None:
                _int(x, "row entry")
    if any(x is None for r in rows for x in r):
        obj = RowLayout.from_rows(rows)
        obj.to_row_ordered().validate()
        return obj
    obj = RowOrderedAlgorithm(rows)
    obj.validate()
    return obj


def dumps(obj) -> str:
    return json.dumps(to_document(obj), separators=(",", ":"))


def loads(text: str):
    """One document, or several on separate lines (first returned)."""
    return load_all(text)[0]


def load_all(text: str) -> list:
    docs = []
    for line in text.splitlines():
        if line.strip():
            try:
                docs.append(json.loads(line))
            except json.JSONDecodeError:
                docs = None
                break
    if docs is None:
        try:
            docs = [json.loads(text)]
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from None
    if not docs:
        raise ValidationError("no document found")
    return [from_document(d) for d in docs]


def write_atomic(path: str, data: str | bytes) -> None:
    """Write to a temporary file beside ``path`` and move it into place."""
    mode = "wb" if isinstance(data, bytes) else "w"
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_matrix(obj) -> str:
    """Rows as text, one ``i:`` line per site.

    An ordered algorithm gets one column per time step, so each query sits
    in its own column and the rest of the line is blank. Row lists print
    their entries in order with ``*`` for empty slots. Trailing whitespace
    is stripped.
    """
    if isinstance(obj, OrderedAlgorithm):
        n = obj.n
        w = len(str(n - 1))
        lw = len(f"{n - 1}:")
        grid = [[" " * w] * len(obj.order) for _ in range(n)]
        for t, (a, b) in enumerate(obj.order.tolist()):
            grid[a][t] = str(b).rjust(w)
        lines = [(f"{i}:".ljust(lw) + "".join(" " + c for c in row)).rstrip()
                 for i, row in enumerate(grid)]
        return "\n".join(lines) + "\n"
    if isinstance(obj, Tournament):
        rows = [obj.row(i) for i in range(obj.n)]
    elif isinstance(obj, (RowLayout, RowOrderedAlgorithm)):
        rows = obj.rows()
    else:
        raise TypeError(f"cannot render {type(obj).__name__}")
    out = []
    for i, r in enumerate(rows):
        cells = ["*" if x is None or x == GAP else str(x) for x in r]
        out.append(" ".join([f"{i}:"] + cells).rstrip())
    return "\n".join(out) + "\n"


def _adjacency(obj):
    if isinstance(obj, Tournament):
        return obj.adj
    if isinstance(obj, OrderedAlgorithm):
        return obj.tournament.adj
    if isinstance(obj, (RowLayout, RowOrderedAlgorithm)):
        return obj.tournament().adj
    raise TypeError(f"cannot render {type(obj).__name__}")


def render_pbm(obj) -> str:
    """Plain PBM: pixel (row i, column j) is black iff ``i`` queries ``j``."""
    adj = _adjacency(obj)
    n = adj.shape[0]
    body = "\n".join(" ".join("1" if v else "0" for v in row) for row in adj.tolist())
    return f"P1\n{n} {n}\n{body}\n"


RENDERERS = {"matrix": render_matrix, "pbm": render_pbm}


def render(obj, fmt: str) -> str:
    try:
        return RENDERERS[fmt](obj)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {sorted(RENDERERS)}") from None
