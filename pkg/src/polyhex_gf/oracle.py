"""Brute-force enumeration of fixed polyhexes and their column statistics.

Cells use axial coordinates ``(x, y)``: ``x`` is the column, ``y`` the position
inside it. The six neighbours of ``(x, y)`` are ``(x, y+-1)``, ``(x+1, y)``,
``(x+1, y-1)``, ``(x-1, y)`` and ``(x-1, y+1)``.

:func:`count_series` runs Redelmeier's algorithm rooted at the lexicographically
smallest cell, so every fixed polyhex is visited exactly once and nothing is
stored. Column component counts are maintained incrementally as cells are
added and removed, which makes classification O(1) per polyhex.
:func:`count_series_hashset` is a slower, independent second oracle that grows
canonical cell sets level by level.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import LimitExceeded

DEFAULT_LIMIT = 12
HASHSET_LIMIT = 10

HexCell = tuple[int, int]

NEIGHBOR_STEPS: tuple[HexCell, ...] = ((0, 1), (0, -1), (1, 0), (1, -1), (-1, 0), (-1, 1))


def neighbors(c: HexCell) -> list[HexCell]:
    x, y = c
    return [(x + dx, y + dy) for dx, dy in NEIGHBOR_STEPS]


def canonical(cells: Iterable[HexCell]) -> frozenset[HexCell]:
    """Translate so the leftmost column is x=0 and its lowest cell is y=0."""
    cells = list(cells)
    x0 = min(x for x, _ in cells)
    y0 = min(y for x, y in cells if x == x0)
    return frozenset((x - x0, y - y0) for x, y in cells)


def is_connected(cells: frozenset[HexCell]) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        for nb in neighbors(stack.pop()):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Polyhex:
    cells: frozenset[HexCell]

    @classmethod
    def of(cls, cells: Iterable[HexCell]) -> "Polyhex":
        cs = canonical(cells)
        if not is_connected(cs):
            raise ValueError("cells are not edge-connected")
        return cls(cs)

    @property
    def area(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class ColumnProfile:
    components: tuple[int, ...]  # per column, left to right

    @property
    def column_convex(self) -> bool:
        return all(c == 1 for c in self.components)

    @property
    def two_column(self) -> bool:
        return all(c <= 2 for c in self.components)

    @property
    def simple_2_column(self) -> bool:
        if not self.two_column:
            return False
        return not any(a == 2 and b == 2 for a, b in zip(self.components, self.components[1:]))

    @property
    def two_comp_count(self) -> int:
        return sum(1 for c in self.components if c == 2)


def _runs(ys: list[int]) -> int:
    ys = sorted(ys)
    return 1 + sum(1 for a, b in zip(ys, ys[1:]) if b != a + 1)


def classify(p: Polyhex | Iterable[HexCell]) -> ColumnProfile:
    cells = p.cells if isinstance(p, Polyhex) else frozenset(p)
    cols: dict[int, list[int]] = {}
    for x, y in cells:
        cols.setdefault(x, []).append(y)
    xs = sorted(cols)
    if xs != list(range(xs[0], xs[-1] + 1)):
        raise ValueError("occupied columns are not an interval")
    return ColumnProfile(tuple(_runs(cols[x]) for x in xs))


@dataclass
class CountTable:
    n_max: int
    total: list[int]
    column_convex: list[int]
    two_column: list[int]
    simple_2_column: list[int]
    refined: list[dict[int, int]] = field(default_factory=list)

    @classmethod
    def empty(cls, n_max: int) -> "CountTable":
        z = [0] * (n_max + 1)
        return cls(n_max, list(z), list(z), list(z), list(z), [dict() for _ in range(n_max + 1)])

    def merge(self, other: "CountTable") -> "CountTable":
        if other.n_max != self.n_max:
            raise ValueError("cannot merge tables of different sizes")
        out = CountTable.empty(self.n_max)
        for n in range(self.n_max + 1):
            out.total[n] = self.total[n] + other.total[n]
            out.column_convex[n] = self.column_convex[n] + other.column_convex[n]
            out.two_column[n] = self.two_column[n] + other.two_column[n]
            out.simple_2_column[n] = self.simple_2_column[n] + other.simple_2_column[n]
            for src in (self.refined[n], other.refined[n]):
                for m, c in src.items():
                    out.refined[n][m] = out.refined[n].get(m, 0) + c
        return out

    def add(self, profile: ColumnProfile, area: int) -> None:
        self.total[area] += 1
        if profile.column_convex:
            self.column_convex[area] += 1
        if profile.two_column:
            self.two_column[area] += 1
        if profile.simple_2_column:
            self.simple_2_column[area] += 1
            m = profile.two_comp_count
            self.refined[area][m] = self.refined[area].get(m, 0) + 1

    def rows(self) -> Iterator[tuple[int, int, int, int, int, int]]:
        """CSV rows: one per (n, m) with a nonzero refined count."""
        for n in range(1, self.n_max + 1):
            for m in sorted(self.refined[n]):
                yield (n, self.total[n], self.column_convex[n], self.simple_2_column[n],
                       m, self.refined[n][m])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {
            "n_max": self.n_max,
            "total": self.total,
            "column_convex": self.column_convex,
            "two_column": self.two_column,
            "simple_2_column": self.simple_2_column,
            "refined": [{str(m): c for m, c in sorted(d.items())} for d in self.refined],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


CSV_COLUMNS = ("n", "total", "column_convex", "simple_2_column", "m", "count")


def _check_limit(n_max: int, limit: int) -> None:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > limit:
        raise LimitExceeded(f"n_max={n_max} exceeds the configured limit {limit}")


def _redelmeier(n_max: int, visit) -> None:
    """Drive Redelmeier's search; ``visit(cell_index, size)`` after each addition.

    Cells are encoded as ``x * stride + (y + n_max)``; the allowed half-plane
    (x > 0, or x == 0 and y >= 0) is exactly ``index >= n_max``.
    """
    stride = 2 * n_max + 1
    origin = n_max
    steps = (1, -1, stride, stride - 1, -stride, -stride + 1)
    seen = bytearray(stride * (n_max + 2))
    seen[origin] = 1

    def rec(untried: list[int], size: int) -> None:
        while untried:
            c = untried.pop()
            visit(c, size + 1)
            if size + 1 < n_max:
                new = []
                for d in steps:
                    nb = c + d
                    if nb >= origin and not seen[nb]:
                        seen[nb] = 1
                        new.append(nb)
                rec(untried + new, size + 1)
                for nb in new:
                    seen[nb] = 0
            visit(c, -(size + 1))

    rec([origin], 0)


def count_series(n_max: int, limit: int = DEFAULT_LIMIT) -> CountTable:
    """Exhaustive counts of fixed polyhexes of every area <= n_max, by class."""
    _check_limit(n_max, limit)
    stride = 2 * n_max + 1
    occ = bytearray(stride * (n_max + 2))
    # comps[x + 1] = number of vertical runs in column x; padded on both sides
    comps = [0] * (n_max + 3)
    # state[0]=#cols with 2 runs, [1]=#cols with >=3 runs, [2]=#adjacent (2,2) pairs
    state = [0, 0, 0]
    total = [0] * (n_max + 1)
    convex = [0] * (n_max + 1)
    twocol = [0] * (n_max + 1)
    s2c = [0] * (n_max + 1)
    refined = [[0] * (n_max + 1) for _ in range(n_max + 1)]

    def set_comps(j: int, new: int) -> None:
        old = comps[j]
        if old == new:
            return
        if old == 2:
            state[0] -= 1
            state[2] -= (comps[j - 1] == 2) + (comps[j + 1] == 2)
        elif old >= 3:
            state[1] -= 1
        comps[j] = new
        if new == 2:
            state[0] += 1
            state[2] += (comps[j - 1] == 2) + (comps[j + 1] == 2)
        elif new >= 3:
            state[1] += 1

    def visit(c: int, size: int) -> None:
        j = c // stride + 1
        if size > 0:
            occ[c] = 1
            set_comps(j, comps[j] + 1 - occ[c - 1] - occ[c + 1])
            total[size] += 1
            if state[1] == 0:
                twocol[size] += 1
                if state[0] == 0:
                    convex[size] += 1
                if state[2] == 0:
                    s2c[size] += 1
                    refined[size][state[0]] += 1
        else:
            occ[c] = 0
            set_comps(j, comps[j] - 1 + occ[c - 1] + occ[c + 1])

    _redelmeier(n_max, visit)
    table = CountTable(n_max, total, convex, twocol, s2c)
    table.refined = [{m: v for m, v in enumerate(row) if v} for row in refined]
    return table


def enumerate_polyhexes(n_max: int, limit: int = DEFAULT_LIMIT) -> Iterator[Polyhex]:
    """Yield every fixed polyhex of area <= n_max exactly once (canonical form)."""
    _check_limit(n_max, limit)
    stride = 2 * n_max + 1
    found: list[frozenset[HexCell]] = []
    current: list[int] = []

    def visit(c: int, size: int) -> None:
        if size > 0:
            current.append(c)
            found.append(frozenset(divmod(i, stride) for i in current))
        else:
            current.pop()

    _redelmeier(n_max, visit)
    for cells in found:
        yield Polyhex(canonical((x, y - n_max) for x, y in cells))


def count_series_hashset(n_max: int, limit: int = HASHSET_LIMIT) -> CountTable:
    """Second oracle: grow canonical cell sets one cell at a time with a global set per level."""
    _check_limit(n_max, limit)
    table = CountTable.empty(n_max)
    level = {frozenset({(0, 0)})}
    for n in range(1, n_max + 1):
        for cells in level:
            table.add(classify(cells), n)
        if n == n_max:
            break
        nxt: set[frozenset[HexCell]] = set()
        for cells in level:
            for c in cells:
                for nb in neighbors(c):
                    if nb not in cells:
                        nxt.add(canonical(cells | {nb}))
        level = nxt
    return table
