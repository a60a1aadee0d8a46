"""Graph families on lattice cells, token graphs and weight-2 words.

Lattice cells are ``Cell(x, y)`` with ``x`` the column and ``y`` the row.
The triangular region ``T(n)`` is ``{(x, y) : 1 <= x <= y <= n}``; every
window of it is described by a :class:`WindowSpec`.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, NamedTuple

from .errors import InvalidParameter


class Cell(NamedTuple):
    x: int
    y: int


class Graph:
    """Finite undirected simple graph with stable, hashable vertex labels.

    Vertex ``i`` carries ``labels[i]``; the order given at construction is
    kept, so indices are reproducible across runs.
    """

    def __init__(self, labels: Iterable[Hashable], edges: Iterable[tuple[int, int]] = ()):
        self.labels = tuple(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise InvalidParameter("vertex labels must be pairwise distinct")
        adj = [set() for _ in self.labels]
        n = len(self.labels)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameter(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.adjacency = tuple(frozenset(a) for a in adj)

    def __repr__(self):
        return f"Graph(vertices={self.vertex_count}, edges={self.edge_count})"

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in sorted(nbrs) if u < v]

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label) -> int:
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise InvalidParameter(f"{label!r} is not a vertex of this graph") from None

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[i]

    def has_edge(self, u, v) -> bool:
        return self.index(v) in self.adjacency[self.index(u)]

    def bfs(self, source: int, max_depth: int | None = None) -> dict[int, int]:
        """Distances from vertex index ``source`` to every vertex it reaches."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            d = dist[u]
            if max_depth is not None and d >= max_depth:
                continue
            for w in self.adjacency[u]:
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist


def lattice_graph(cells: Iterable[tuple[int, int]]) -> Graph:
    """Subgraph of the integer grid induced by ``cells``, vertices sorted by (x, y)."""
    ordered = sorted({Cell(*c) for c in cells})
    index = {c: i for i, c in enumerate(ordered)}
    edges = []
    for i, (x, y) in enumerate(ordered):
        for other in ((x + 1, y), (x, y + 1)):
            j = index.get(other)
            if j is not None:
                edges.append((i, j))
    return Graph(ordered, edges)


def path_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidParameter(f"path length must be >= 1, got {n}")
    return Graph(range(1, n + 1), [(i, i + 1) for i in range(n - 1)])


def grid_cells(p: int, q: int) -> list[Cell]:
    if p < 1 or q < 1:
        raise InvalidParameter(f"grid dimensions must be positive, got {p}x{q}")
    return [Cell(x, y) for x in range(1, q + 1) for y in range(1, p + 1)]


def grid_graph(p: int, q: int) -> Graph:
    """The p x q grid: p rows (y = 1..p) and q columns (x = 1..q)."""
    return lattice_graph(grid_cells(p, q))


@dataclass(frozen=True, order=True)
class WindowSpec:
    """Cells ``(x, y)`` of ``T(n)`` with ``x_lo <= x <= x_hi`` and ``y_lo <= y <= y_hi``."""

    n: int
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise InvalidParameter(f"n must be positive, got {n}")
        if not (1 <= self.x_lo <= self.x_hi <= n and 1 <= self.y_lo <= self.y_hi <= n):
            raise InvalidParameter(f"window bounds out of range: {self}")
        if self.x_lo > self.y_hi:
            raise InvalidParameter(f"window has no cells with x <= y: {self}")

    @classmethod
    def triangle(cls, n: int) -> WindowSpec:
        return cls(n, 1, n, 1, n)

    @classmethod
    def rows(cls, n: int, k: int, r: int, x_lo: int = 1, x_hi: int | None = None) -> WindowSpec:
        """Rows ``k..r`` restricted to columns ``x_lo..x_hi``."""
        return cls(n, x_lo, n if x_hi is None else x_hi, k, r)

    @classmethod
    def strip(cls, n: int, ell: int, x_lo: int = 1, x_hi: int | None = None) -> WindowSpec:
        """The top ``ell`` rows ``n-ell+1..n``, optionally limited to some columns."""
        if not 1 <= ell <= n:
            raise InvalidParameter(f"strip height {ell} outside 1..{n}")
        return cls.rows(n, n - ell + 1, n, x_lo, x_hi)

    @property
    def is_triangle(self) -> bool:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi) == (1, self.n, 1, self.n)

    def __contains__(self, cell) -> bool:
        x, y = cell
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi and x <= y

    def column(self, x: int) -> list[Cell]:
        if not self.x_lo <= x <= self.x_hi:
            return []
        return [Cell(x, y) for y in range(max(x, self.y_lo), self.y_hi + 1)]

    def cells(self) -> tuple[Cell, ...]:
        return _window_cells(self)

    def graph(self) -> Graph:
        return triangle_window(self)

    def header(self) -> str:
        return f"host {self.n} {self.x_lo} {self.x_hi} {self.y_lo} {self.y_hi}"


@lru_cache(maxsize=512)
def _window_cells(w: WindowSpec) -> tuple[Cell, ...]:
    return tuple(c for x in range(w.x_lo, w.x_hi + 1) for c in w.column(x))


def grid_window(p: int, q: int) -> WindowSpec:
    """A window of some ``T(n)`` that is a p-row by q-column rectangle."""
    if p < 1 or q < 1:
        raise InvalidParameter(f"grid dimensions must be positive, got {p}x{q}")
    n = p + q - 1
    return WindowSpec(n, 1, q, q, n)


@lru_cache(maxsize=256)
def triangle_window(spec: WindowSpec) -> Graph:
    return lattice_graph(spec.cells())


def token_graph(g: Graph, k: int) -> Graph:
    """k-token graph: k-subsets of V(g), adjacent when their symmetric difference is an edge."""
    n = g.vertex_count
    if not 1 <= k <= n:
        raise InvalidParameter(f"token count k={k} outside 1..{n}")
    subsets = list(itertools.combinations(range(n), k))
    index = {s: i for i, s in enumerate(subsets)}
    edges = []
    for i, s in enumerate(subsets):
        members = set(s)
        for u in s:
            for v in g.adjacency[u]:
                if v in members:
                    continue
                t = tuple(sorted((members - {u}) | {v}))
                j = index[t]
                if i < j:
                    edges.append((i, j))
    labels = [tuple(g.labels[i] for i in s) for s in subsets]
    return Graph(labels, edges)


def gamma_graph(n: int) -> Graph:
    """Weight-2 words of length n, adjacent under one adjacent-bit transposition.

    Labels are bit strings with bit 1 leftmost, listed in the same order as
    the 2-subsets of positions.
    """
    if n < 2:
        raise InvalidParameter(f"word length must be >= 2, got {n}")
    words = []
    for a, b in itertools.combinations(range(n), 2):
        bits = ["0"] * n
        bits[a] = bits[b] = "1"
        words.append("".join(bits))
    index = {w: i for i, w in enumerate(words)}
    edges = set()
    for i, w in enumerate(words):
        for p in range(n - 1):
            if w[p] != w[p + 1]:
                swapped = w[:p] + w[p + 1] + w[p] + w[p + 2:]
                j = index[swapped]
                edges.add((min(i, j), max(i, j)))
    return Graph(words, sorted(edges))


def graph_distance(g: Graph, u, v) -> int | float:
    """Shortest-path length between labels ``u`` and ``v``; ``math.inf`` if disconnected."""
    i, j = g.index(u), g.index(v)
    return g.bfs(i).get(j, math.inf)


def conflict_graph(g: Graph) -> Graph:
    """Same vertices as ``g``; an edge whenever the distance in ``g`` is 1 or 2."""
    edges = []
    for i in range(g.vertex_count):
        for j in g.bfs(i, max_depth=2):
            if i < j:
                edges.append((i, j))
    return Graph(g.labels, edges)


def is_packing(g: Graph, cells: Iterable) -> bool:
    """True iff the given vertices are pairwise at distance >= 3 in ``g``."""
    chosen = {g.index(c) for c in cells}
    for i in chosen:
        near = g.bfs(i, max_depth=2)
        if any(j != i and j in chosen for j in near):
            return False
    return True


def check_isomorphism(g: Graph, h: Graph, mapping: dict) -> bool:
    """True iff ``mapping`` (label of g -> label of h) is an isomorphism."""
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    if set(mapping) != set(g.labels):
        return False
    image = {mapping[label] for label in g.labels}
    if len(image) != h.vertex_count or any(label not in h for label in image):
        return False
    for u, v in g.edges():
        if not h.has_edge(mapping[g.labels[u]], mapping[g.labels[v]]):
            return False
    return True


def triangle_to_token(cell) -> tuple[int, int]:
    """Cell (x, y) of T(n) as the 2-subset {x, y + 1} of the path P_{n+1}."""
    x, y = cell
    return (x, y + 1)


def token_to_word(subset, n: int) -> str:
    bits = ["0"] * n
    for i in subset:
        bits[i - 1] = "1"
    return "".join(bits)


def reflection_automorphism(n: int) -> dict[Cell, Cell]:
    """The anti-diagonal reflection (x, y) -> (n+1-y, n+1-x) of T(n)."""
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n}")
    return {c: Cell(n + 1 - c.y, n + 1 - c.x) for c in WindowSpec.triangle(n).cells()}


@dataclass(frozen=True)
class PackingSet:
    """A set of cells (or vertex labels) claimed to be a packing of ``host``.

    ``host`` is a :class:`WindowSpec` for lattice packings or a :class:`Graph`
    otherwise. Membership is checked on construction; the distance condition
    is checked by :meth:`is_valid`.
    """

    host: WindowSpec | Graph
    cells: frozenset

    def __post_init__(self):
        if isinstance(self.host, WindowSpec):
            cells = frozenset(Cell(*c) for c in self.cells)
            outside = [c for c in cells if c not in self.host]
        else:
            cells = frozenset(self.cells)
            outside = [c for c in cells if c not in self.host]
        if outside:
            raise InvalidParameter(f"cells outside the host: {sorted(outside)[:5]}")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list:
        return sorted(self.cells)

    def host_graph(self) -> Graph:
        return self.host.graph() if isinstance(self.host, WindowSpec) else self.host

    def is_valid(self) -> bool:
        return is_packing(self.host_graph(), self.cells)


def restrict(s: PackingSet, w: WindowSpec) -> PackingSet:
    """The cells of ``s`` lying in ``w``, re-hosted on ``w``."""
    if not isinstance(s.host, WindowSpec) or s.host.n != w.n:
        raise InvalidParameter("restrict needs a packing hosted on a window of the same n")
    return PackingSet(w, frozenset(c for c in s.cells if c in w))


def format_packing(s: PackingSet) -> str:
    if not isinstance(s.host, WindowSpec):
        raise InvalidParameter("only window-hosted packings have a text form")
    lines = [s.host.header()] + [f"{x},{y}" for x, y in s.sorted()]
    return "\n".join(lines) + "\n"


def parse_packings(text: str) -> list[PackingSet]:
    """Parse one or more packing blocks separated by blank lines."""
    result = []
    for block in text.split("\n\n"):
        lines = [ln.strip() for ln in block.strip().splitlines() if ln.strip()]
        if not lines:
            continue
        head = lines[0].split()
        if len(head) != 6 or head[0] != "host":
            raise InvalidParameter(f"bad packing header: {lines[0]!r}")
        host = WindowSpec(*map(int, head[1:]))
        cells = []
        for ln in lines[1:]:
            try:
                x, y = ln.split(",")
                cells.append(Cell(int(x), int(y)))
            except ValueError:
                raise InvalidParameter(f"bad cell line: {ln!r}") from None
        result.append(PackingSet(host, frozenset(cells)))
    return result


def parse_packing(text: str) -> PackingSet:
    blocks = parse_packings(text)
    if len(blocks) != 1:
        raise InvalidParameter(f"expected one packing block, found {len(blocks)}")
    return blocks[0]
