"""Text formats: edge lists, degree prescriptions, weight matrices."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .digraph import Digraph

FORMAT_VERSION = "1"


class FormatError(ValueError):
    pass


def _content_lines(text: str) -> list[list[str]]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


def _parse_multi(tok: str) -> bool:
    if tok.lower() in ("1", "true", "multi", "yes"):
        return True
    if tok.lower() in ("0", "false", "simple", "no"):
        return False
    raise FormatError(f"bad multi flag {tok!r}")


def parse_edge_list(text: str) -> Digraph:
    """Parse ``n m [multi]`` followed by ``u v`` lines.

    Labels that are not already the integers ``0..n-1`` are remapped to dense
    indices in sorted order.
    """
    rows = _content_lines(text)
    if not rows:
        raise FormatError("empty edge list")
    head = rows[0]
    if len(head) not in (2, 3):
        raise FormatError("header must be 'n m [multi]'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"bad header {' '.join(head)!r}") from exc
    multi = _parse_multi(head[2]) if len(head) == 3 else False
    body = rows[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}")
    pairs = []
    for row in body:
        if len(row) != 2:
            raise FormatError(f"edge line must have two labels: {' '.join(row)!r}")
        pairs.append((row[0], row[1]))
    labels = {x for p in pairs for x in p}
    if all(x.lstrip("-").isdigit() and 0 <= int(x) < n for x in labels):
        index = {x: int(x) for x in labels}
    else:
        def key(x: str):
            return (0, int(x), x) if x.lstrip("-").isdigit() else (1, 0, x)
        ordered = sorted(labels, key=key)
        if len(ordered) > n:
            raise FormatError(f"{len(ordered)} distinct labels exceed n={n}")
        index = {x: i for i, x in enumerate(ordered)}
    try:
        return Digraph(n, tuple((index[a], index[b]) for a, b in pairs), multi)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_edge_list(g: Digraph) -> str:
    lines = [f"{g.n} {g.m} {int(g.multi)}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def read_digraph(path: str | Path) -> Digraph:
    return parse_edge_list(Path(path).read_text())


def write_digraph(g: Digraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))


def parse_prescription(text: str, n: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Parse a ``v out in`` table into (out_targets, in_targets)."""
    rows = _content_lines(text)
    table: dict[int, tuple[int, int]] = {}
    for row in rows:
        if len(row) != 3:
            raise FormatError(f"prescription line must be 'v out in': {' '.join(row)!r}")
        try:
            v, o, i = (int(x) for x in row)
        except ValueError as exc:
            raise FormatError(f"non-integer prescription line {' '.join(row)!r}") from exc
        if o < 0 or i < 0:
            raise FormatError("targets must be non-negative")
        if v in table:
            raise FormatError(f"vertex {v} listed twice")
        table[v] = (o, i)
    size = n if n is not None else (max(table) + 1 if table else 0)
    if any(not 0 <= v < size for v in table):
        raise FormatError("prescription vertex outside the graph")
    outs = tuple(table.get(v, (0, 0))[0] for v in range(size))
    ins = tuple(table.get(v, (0, 0))[1] for v in range(size))
    return outs, ins


def parse_weight_matrix(text: str) -> list[list[Fraction | None]]:
    """Parse ``n`` then an n-by-n table with ``-`` on the diagonal."""
    rows = _content_lines(text)
    if not rows or len(rows[0]) != 1:
        raise FormatError("weight file must start with a line holding n")
    try:
        n = int(rows[0][0])
    except ValueError as exc:
        raise FormatError("bad n") from exc
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise FormatError(f"expected a {n}x{n} table")
    w: list[list[Fraction | None]] = []
    for i, row in enumerate(body):
        out: list[Fraction | None] = []
        for j, tok in enumerate(row):
            if i == j:
                if tok != "-":
                    raise FormatError(f"diagonal entry ({i},{i}) must be '-'")
                out.append(None)
                continue
            try:
                val = Fraction(tok)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"bad weight {tok!r} at ({i},{j})") from exc
            if val < 0:
                raise FormatError(f"negative weight at ({i},{j})")
            out.append(val)
        w.append(out)
    return w


def format_weight_matrix(w) -> str:
    n = len(w)
    lines = [str(n)]
    for i in range(n):
        lines.append(" ".join("-" if i == j else str(w[i][j]) for j in range(n)))
    return "\n".join(lines) + "\n"
