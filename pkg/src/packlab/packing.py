"""Exact 2-packing numbers.

Two independent engines:

* branch and bound for a maximum independent set of the conflict graph
  (any finite graph, capped by vertex count), and
* a column-profile dynamic program for lattice regions whose columns hold at
  most ``H_MAX`` cells.  The conflict relation has radius 2, so the state is
  the selection in the two preceding columns.

Both honour a :class:`Constraint`; enumeration reuses the column engine.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import EnumerationLimitExceeded, InvalidParameter, SizeCapExceeded
from .graphs import Cell, Graph, PackingSet, WindowSpec, lattice_graph

H_MAX = 12
DEFAULT_MAX_VERTICES = 120
DEFAULT_ENUMERATION_LIMIT = 10**6
INFEASIBLE = -math.inf
MAX_VERTICES_ENV = "PACKLAB_MAX_VERTICES"


def max_vertices_cap() -> int:
    raw = os.environ.get(MAX_VERTICES_ENV)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"{MAX_VERTICES_ENV} must be an integer, got {raw!r}") from None


# -- constraints --------------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """Side conditions on a packing.

    ``column_bounds`` maps a column x to ``(min, max)``; ``region_bounds`` is a
    sequence of ``(region, min, max)`` where a region is a WindowSpec or a
    collection of cells.  ``max=None`` means unbounded.
    """

    forced: frozenset = frozenset()
    forbidden: frozenset = frozenset()
    column_bounds: dict = field(default_factory=dict)
    region_bounds: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "forced", frozenset(Cell(*c) for c in self.forced))
        object.__setattr__(self, "forbidden", frozenset(Cell(*c) for c in self.forbidden))
        both = self.forced & self.forbidden
        if both:
            raise InvalidParameter(f"cells both forced and forbidden: {sorted(both)}")
        bounds = {}
        for x, (lo, hi) in self.column_bounds.items():
            bounds[int(x)] = _check_bounds(lo, hi)
        object.__setattr__(self, "column_bounds", bounds)
        regions = []
        for region, lo, hi in self.region_bounds:
            if not isinstance(region, WindowSpec):
                region = frozenset(Cell(*c) for c in region)
            regions.append((region, *_check_bounds(lo, hi)))
        object.__setattr__(self, "region_bounds", tuple(regions))

    def __hash__(self):
        return hash((self.forced, self.forbidden, tuple(sorted(self.column_bounds.items())),
                     self.region_bounds))

    @property
    def is_empty(self) -> bool:
        return not (self.forced or self.forbidden or self.column_bounds or self.region_bounds)

    def check_host(self, cells: set):
        outside = sorted(c for c in self.forced | self.forbidden if c not in cells)
        if outside:
            raise InvalidParameter(f"constraint cells outside the host: {outside[:5]}")
        columns = {c.x for c in cells}
        missing = sorted(x for x in self.column_bounds if x not in columns)
        if missing:
            raise InvalidParameter(f"constraint columns outside the host: {missing}")

    def satisfied_by(self, cells: Iterable) -> bool:
        chosen = {Cell(*c) for c in cells}
        if not self.forced <= chosen or self.forbidden & chosen:
            return False
        for x, (lo, hi) in self.column_bounds.items():
            k = sum(1 for c in chosen if c.x == x)
            if k < lo or (hi is not None and k > hi):
                return False
        for region, lo, hi in self.region_bounds:
            k = sum(1 for c in chosen if c in region)
            if k < lo or (hi is not None and k > hi):
                return False
        return True

    @classmethod
    def from_json(cls, data: dict | str) -> Constraint:
        if isinstance(data, str):
            data = json.loads(data)
        regions = []
        for r in data.get("regions", []):
            if "window" in r:
                region = WindowSpec(*r["window"])
            else:
                region = [tuple(c) for c in r["cells"]]
            regions.append((region, r.get("min", 0), r.get("max")))
        return cls(
            forced=[tuple(c) for c in data.get("forced", [])],
            forbidden=[tuple(c) for c in data.get("forbidden", [])],
            column_bounds={int(x): tuple(b) for x, b in data.get("columns", {}).items()},
            region_bounds=regions,
        )

    def to_json(self) -> dict:
        regions = []
        for region, lo, hi in self.region_bounds:
            if isinstance(region, WindowSpec):
                entry = {"window": [region.n, region.x_lo, region.x_hi, region.y_lo, region.y_hi]}
            else:
                entry = {"cells": [list(c) for c in sorted(region)]}
            regions.append({**entry, "min": lo, "max": hi})
        return {
            "forced": [list(c) for c in sorted(self.forced)],
            "forbidden": [list(c) for c in sorted(self.forbidden)],
            "columns": {str(x): [lo, hi] for x, (lo, hi) in sorted(self.column_bounds.items())},
            "regions": regions,
        }


def _check_bounds(lo, hi):
    lo = int(lo)
    hi = None if hi is None else int(hi)
    if lo < 0 or (hi is not None and hi < lo):
        raise InvalidParameter(f"bad cardinality bounds [{lo}, {hi}]")
    return lo, hi


NO_CONSTRAINT = Constraint()


# -- results -------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    optimum: int | float
    witness: PackingSet | None
    node_count: int
    method: str

    @property
    def feasible(self) -> bool:
        return self.optimum != INFEASIBLE

    def to_json(self) -> dict:
        return {
            "optimum": self.optimum if self.feasible else None,
            "feasible": self.feasible,
            "witness": None if self.witness is None else packing_to_json(self.witness),
            "node_count": self.node_count,
            "method": self.method,
        }


@dataclass(frozen=True)
class EnumerationResult:
    count: int
    solutions: tuple = ()
    canonical_classes: int | None = None
    target_size: int | None = None

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "target_size": self.target_size,
            "canonical_classes": self.canonical_classes,
            "solutions": [packing_to_json(s) for s in self.solutions],
        }


def packing_to_json(s: PackingSet) -> dict:
    if isinstance(s.host, WindowSpec):
        h = s.host
        host = [h.n, h.x_lo, h.x_hi, h.y_lo, h.y_hi]
        cells = [list(c) for c in s.sorted()]
    else:
        host = None
        cells = [list(c) if isinstance(c, tuple) else c for c in sorted(s.cells, key=s.host.index)]
    return {"host": host, "size": len(s), "cells": cells}


# -- region helpers -----------------------------------------------------------

def region_cells(region) -> list[Cell]:
    if isinstance(region, WindowSpec):
        return list(region.cells())
    return sorted({Cell(*c) for c in region})


def _host_for(region, cells):
    return region if isinstance(region, WindowSpec) else lattice_graph(cells)


def max_column_height(region) -> int:
    heights = {}
    for c in region_cells(region):
        heights[c.x] = heights.get(c.x, 0) + 1
    return max(heights.values(), default=0)


# -- branch and bound ---------------------------------------------------------

def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _clique_cover(cand: int, nbr: list[int]) -> int:
    k = 0
    while cand:
        v = _lowest(cand)
        cand &= ~(1 << v)
        grow = cand & nbr[v]
        while grow:
            u = _lowest(grow)
            cand &= ~(1 << u)
            grow &= nbr[u] & ~(1 << u)
        k += 1
    return k


class _BranchAndBound:
    def __init__(self, nbr: list[int], groups: list[tuple[int, int, int | None]]):
        self.nbr = nbr
        self.groups = groups
        self.best = -1
        self.best_set = 0
        self.nodes = 0

    def feasible(self, cand: int, chosen: int) -> bool:
        for mask, lo, hi in self.groups:
            k = (chosen & mask).bit_count()
            if hi is not None and k > hi:
                return False
            if k + (cand & mask).bit_count() < lo:
                return False
        return True

    def expand(self, cand: int, chosen: int, size: int):
        self.nodes += 1
        if self.groups and not self.feasible(cand, chosen):
            return
        if not cand:
            if size > self.best:
                self.best, self.best_set = size, chosen
            return
        if size + _clique_cover(cand, self.nbr) <= self.best:
            return
        v = _lowest(cand)
        bit = 1 << v
        self.expand(cand & ~self.nbr[v] & ~bit, chosen | bit, size + 1)
        self.expand(cand & ~bit, chosen, size)

    def frontier(self, cand: int, chosen: int, size: int, depth: int) -> list[tuple[int, int, int]]:
        """Subproblems at a fixed branching depth, in DFS order."""
        if depth == 0 or not cand:
            return [(cand, chosen, size)]
        if self.groups and not self.feasible(cand, chosen):
            return []
        v = _lowest(cand)
        bit = 1 << v
        return (self.frontier(cand & ~self.nbr[v] & ~bit, chosen | bit, size + 1, depth - 1)
                + self.frontier(cand & ~bit, chosen, size, depth - 1))


def _solve_subproblem(args):
    nbr, groups, cand, chosen, size = args
    bb = _BranchAndBound(nbr, groups)
    bb.expand(cand, chosen, size)
    return bb.best, bb.best_set, bb.nodes


def _bnb(g: Graph, groups_by_label, forced, forbidden, threads: int):
    """Maximum independent set of the conflict graph of ``g`` under cardinality groups."""
    n = g.vertex_count
    conflicts = []
    for i in range(n):
        conflicts.append({j for j in g.bfs(i, max_depth=2) if j != i})
    # descending conflict degree, lowest index first on ties
    order = sorted(range(n), key=lambda i: (-len(conflicts[i]), i))
    pos = {v: p for p, v in enumerate(order)}
    nbr = [0] * n
    for v in range(n):
        m = 0
        for u in conflicts[v]:
            m |= 1 << pos[u]
        nbr[pos[v]] = m

    def mask_of(labels):
        m = 0
        for label in labels:
            m |= 1 << pos[g.index(label)]
        return m

    groups = [(mask_of(labels), lo, hi) for labels, lo, hi in groups_by_label]
    cand = (1 << n) - 1
    chosen = 0
    for label in forced:
        p = pos[g.index(label)]
        if not cand >> p & 1:
            return INFEASIBLE, None, 0
        chosen |= 1 << p
        cand &= ~nbr[p] & ~(1 << p)
    cand &= ~mask_of(forbidden)
    size = chosen.bit_count()

    bb = _BranchAndBound(nbr, groups)
    if threads <= 1:
        bb.expand(cand, chosen, size)
        best, best_set, nodes = bb.best, bb.best_set, bb.nodes
    else:
        depth = max(1, (4 * threads - 1).bit_length())
        subs = bb.frontier(cand, chosen, size, depth)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_solve_subproblem, [(nbr, groups, *s) for s in subs]))
        best, best_set, nodes = -1, 0, len(subs)
        # fixed reduction order: earliest subproblem wins ties
        for value, found, count in outcomes:
            nodes += count
            if value > best:
                best, best_set = value, found
    if best < 0:
        return INFEASIBLE, None, nodes
    labels = [g.labels[order[p]] for p in range(n) if best_set >> p & 1]
    return best, labels, nodes


def _constraint_groups(constraint: Constraint, cells: list[Cell]):
    groups = []
    for x, (lo, hi) in constraint.column_bounds.items():
        groups.append(([c for c in cells if c.x == x], lo, hi))
    for region, lo, hi in constraint.region_bounds:
        groups.append(([c for c in cells if c in region], lo, hi))
    return groups


def rho_exact(g, constraint: Constraint | None = None, *, max_vertices: int | None = None,
              threads: int = 1) -> SolveResult:
    """Packing number by branch and bound on the conflict graph.

    ``g`` is a Graph or a lattice region (WindowSpec or cell collection).
    Constraints are only meaningful for lattice hosts.
    """
    cap = max_vertices_cap() if max_vertices is None else max_vertices
    if isinstance(g, Graph):
        host, graph = g, g
        cells = None
    else:
        cells = region_cells(g)
        graph = lattice_graph(cells)
        host = _host_for(g, cells)
    if graph.vertex_count > cap:
        raise SizeCapExceeded(
            f"{graph.vertex_count} vertices exceeds the exact-solve cap of {cap}",
            cap_name="max_vertices", cap=cap)
    constraint = constraint or NO_CONSTRAINT
    if not constraint.is_empty:
        if cells is None:
            raise InvalidParameter("constraints need a lattice host")
        constraint.check_host(set(cells))
    groups = _constraint_groups(constraint, cells) if cells is not None else []
    best, labels, nodes = _bnb(graph, groups, sorted(constraint.forced),
                               sorted(constraint.forbidden), threads)
    witness = None if labels is None else PackingSet(host, frozenset(labels))
    return SolveResult(best, witness, nodes, "bnb")


# -- column-profile dynamic program ----------------------------------------------

class ColumnModel:
    """Per-column selection masks and radius-2 compatibility for a lattice region."""

    def __init__(self, region, constraint: Constraint | None = None, h_max: int = H_MAX):
        constraint = constraint or NO_CONSTRAINT
        cells = region_cells(region)
        if not cells:
            raise InvalidParameter("empty region")
        cell_set = set(cells)
        constraint.check_host(cell_set)
        self.region = region
        self.cells = cells
        self.graph = lattice_graph(cells)
        self.x0 = cells[0].x
        self.width = cells[-1].x - self.x0 + 1
        self.columns = [[] for _ in range(self.width)]
        for c in cells:
            self.columns[c.x - self.x0].append(c)
        tallest = max(len(col) for col in self.columns)
        if tallest > h_max:
            raise SizeCapExceeded(
                f"a column holds {tallest} cells, above the profile limit {h_max}",
                cap_name="h_max", cap=h_max)
        self.bit = {c: i for col in self.columns for i, c in enumerate(col)}

        # conflict masks: same column, one column right, two columns right
        near = [[[0] * len(col) for col in self.columns] for _ in range(3)]
        g = self.graph
        for i, c in enumerate(g.labels):
            k = c.x - self.x0
            for j in g.bfs(i, max_depth=2):
                d = g.labels[j]
                dx = d.x - c.x
                if j == i or dx < 0:
                    continue
                assert dx <= 2
                near[dx][k][self.bit[c]] |= 1 << self.bit[d]
        self.near = near

        self.candidates = []
        for k, col in enumerate(self.columns):
            forced = sum(1 << self.bit[c] for c in col if c in constraint.forced)
            forbidden = sum(1 << self.bit[c] for c in col if c in constraint.forbidden)
            lo, hi = constraint.column_bounds.get(self.x0 + k, (0, None))
            subsets = [s for s in self._independent_subsets(k)
                       if s & forced == forced and not s & forbidden
                       and lo <= s.bit_count() and (hi is None or s.bit_count() <= hi)]
            self.candidates.append(subsets)
        self.spread1 = [self._spread(k, 1) for k in range(self.width)]
        self.spread2 = [self._spread(k, 2) for k in range(self.width)]
        self._compat = {}

        self.regions = []
        for reg, lo, hi in constraint.region_bounds:
            masks = [0] * self.width
            for c in cells:
                if c in reg:
                    masks[c.x - self.x0] |= 1 << self.bit[c]
            self.regions.append((masks, lo, hi))
        self.region_last = []
        self.region_room = []
        for masks, _, _ in self.regions:
            used = [k for k, m in enumerate(masks) if m]
            self.region_last.append(used[-1] if used else -1)
            room = [0] * (self.width + 1)
            for k in range(self.width - 1, -1, -1):
                best = max(((s & masks[k]).bit_count() for s in self.candidates[k]), default=0)
                room[k] = room[k + 1] + best
            self.region_room.append(room)

    def _independent_subsets(self, k: int) -> list[int]:
        same = self.near[0][k]
        h = len(self.columns[k])
        out = []

        def grow(i, mask, blocked):
            if i == h:
                out.append(mask)
                return
            grow(i + 1, mask, blocked)
            if not blocked >> i & 1:
                grow(i + 1, mask | 1 << i, blocked | same[i])

        grow(0, 0, 0)
        return sorted(out)

    def _spread(self, k: int, dx: int) -> dict[int, int]:
        masks = self.near[dx][k]
        out = {}
        for s in self.candidates[k]:
            m = 0
            t = s
            while t:
                i = _lowest(t)
                m |= masks[i]
                t &= t - 1
            out[s] = m
        return out

    def blocked(self, k: int, a: int, b: int) -> int:
        """Cells of column k ruled out by selections a (column k-2) and b (column k-1)."""
        m = 0
        if k >= 1:
            m |= self.spread1[k - 1][b]
        if k >= 2:
            m |= self.spread2[k - 2][a]
        return m

    def compatible(self, k: int, b: int) -> list[int]:
        key = (k, b)
        lst = self._compat.get(key)
        if lst is None:
            block = self.spread1[k - 1][b] if k >= 1 else 0
            lst = [c for c in self.candidates[k] if not c & block]
            self._compat[key] = lst
        return lst

    def step_counts(self, k: int, counts: tuple, c: int):
        """Advance region counters past column k; None when a bound is violated."""
        if not self.regions:
            return counts
        out = []
        for r, (masks, lo, hi) in enumerate(self.regions):
            if k > self.region_last[r]:
                out.append(0)
                continue
            v = counts[r] + (c & masks[k]).bit_count()
            if hi is not None and v > hi:
                return None
            if v + self.region_room[r][k + 1] < lo:
                return None
            if k == self.region_last[r]:
                v = 0  # satisfied and finished; merge states
            out.append(v)
        return tuple(out)

    def initial_counts(self):
        counts = tuple(0 for _ in self.regions)
        for r, (masks, lo, hi) in enumerate(self.regions):
            if self.region_last[r] < 0 and lo > 0:
                return None
        return counts

    def cells_of(self, k: int, s: int) -> list[Cell]:
        col = self.columns[k]
        return [col[i] for i in range(len(col)) if s >> i & 1]


def _dp(model: ColumnModel):
    start = model.initial_counts()
    if start is None:
        return INFEASIBLE, None, 0
    layers = []
    states = {(0, 0, start): (0, None)}
    work = 0
    for k in range(model.width):
        nxt = {}
        spread2 = model.spread2[k - 2] if k >= 2 else None
        for key, (val, _) in states.items():
            a, b, counts = key
            block2 = spread2[a] if spread2 is not None else 0
            for c in model.compatible(k, b):
                work += 1
                if c & block2:
                    continue
                nc = model.step_counts(k, counts, c)
                if nc is None:
                    continue
                nk = (b, c, nc)
                v = val + c.bit_count()
                old = nxt.get(nk)
                if old is None or v > old[0]:
                    nxt[nk] = (v, key)
        layers.append(nxt)
        states = nxt
        if not states:
            return INFEASIBLE, None, work
    best_key = None
    best = -1
    for key, (val, _) in states.items():
        if val > best:
            best, best_key = val, key
    chosen = []
    key = best_key
    for k in range(model.width - 1, -1, -1):
        chosen.extend(model.cells_of(k, key[1]))
        key = layers[k][key][1]
    return best, chosen, work


def rho_window_dp(region, constraint: Constraint | None = None, *, h_max: int = H_MAX) -> SolveResult:
    """Packing number of a lattice region by column-profile dynamic programming."""
    model = ColumnModel(region, constraint, h_max)
    best, chosen, work = _dp(model)
    witness = None if chosen is None else PackingSet(_host_for(region, model.cells), frozenset(chosen))
    return SolveResult(best, witness, work, "dp")


def constrained_max(region, constraint: Constraint | None = None, *, method: str = "auto",
                    max_vertices: int | None = None, threads: int = 1) -> SolveResult:
    """Maximum packing size subject to ``constraint``; infeasibility is a normal result."""
    if method == "auto":
        method = "dp" if max_column_height(region) <= H_MAX else "bnb"
    if method == "dp":
        return rho_window_dp(region, constraint)
    if method == "bnb":
        return rho_exact(region, constraint, max_vertices=max_vertices, threads=threads)
    raise InvalidParameter(f"unknown method {method!r}")


# -- enumeration -------------------------------------------------------------------

def _suffix_bound(model: ColumnModel) -> Callable[[int, int, int], float]:
    """best(k, a, b): largest total over columns k.. given columns k-2, k-1 hold a, b."""
    memo = {}

    def best(k, a, b):
        if k == model.width:
            return 0
        key = (k, a, b)
        got = memo.get(key)
        if got is not None:
            return got
        block2 = model.spread2[k - 2][a] if k >= 2 else 0
        value = INFEASIBLE
        for c in model.compatible(k, b):
            if c & block2:
                continue
            v = c.bit_count() + best(k + 1, b, c)
            if v > value:
                value = v
        memo[key] = value
        return value

    return best


def iter_packings(region, constraint: Constraint | None = None,
                  target_size: int | None = None) -> Iterator[list[Cell]]:
    """Yield every packing of ``region`` meeting ``constraint`` (of the given size, if any)."""
    model = ColumnModel(region, constraint)
    start = model.initial_counts()
    if start is None:
        return
    best = _suffix_bound(model)
    picked = []

    def walk(k, a, b, counts, size):
        if k == model.width:
            if target_size is None or size == target_size:
                yield [c for col in picked for c in col]
            return
        block2 = model.spread2[k - 2][a] if k >= 2 else 0
        for c in model.compatible(k, b):
            if c & block2:
                continue
            rest = best(k + 1, b, c)
            if rest == INFEASIBLE:
                continue
            new_size = size + c.bit_count()
            if target_size is not None and (new_size > target_size or new_size + rest < target_size):
                continue
            nc = model.step_counts(k, counts, c)
            if nc is None:
                continue
            picked.append(model.cells_of(k, c))
            yield from walk(k + 1, b, c, nc, new_size)
            picked.pop()

    yield from walk(0, 0, 0, start, 0)


def canonical_form(cells: Iterable, group: Iterable[Callable | dict] = ()) -> tuple:
    """Lexicographically least image of ``cells`` under the identity and ``group``."""
    base = tuple(sorted(cells))
    best = base
    for g in group:
        apply = g.__getitem__ if isinstance(g, dict) else g
        image = tuple(sorted(apply(c) for c in base))
        if image < best:
            best = image
    return best


def enumerate_packings(region, constraint: Constraint | None = None,
                       target_size: int | str | None = "maximum", *,
                       group: Iterable[Callable | dict] | None = None,
                       count_only: bool = False,
                       limit: int = DEFAULT_ENUMERATION_LIMIT) -> EnumerationResult:
    """All packings of ``region`` meeting ``constraint``.

    ``target_size`` is an int, ``"maximum"`` or None (any size).  When a
    ``group`` of automorphisms is supplied the number of orbits is reported
    in ``canonical_classes``.
    """
    if target_size == "maximum":
        opt = rho_window_dp(region, constraint)
        if not opt.feasible:
            return EnumerationResult(0, (), 0 if group is not None else None, None)
        target_size = opt.optimum
    elif target_size is not None and not isinstance(target_size, int):
        raise InvalidParameter(f"target size must be an int, 'maximum' or None, got {target_size!r}")
    model_cells = region_cells(region)
    host = _host_for(region, model_cells)
    group = None if group is None else list(group)
    solutions = []
    classes = set()
    count = 0
    for cells in iter_packings(region, constraint, target_size):
        count += 1
        if count > limit:
            raise EnumerationLimitExceeded(
                f"more than {limit} solutions; raise the limit to continue", count - 1)
        if group is not None:
            classes.add(canonical_form(cells, group))
        if not count_only:
            solutions.append(PackingSet(host, frozenset(cells)))
    return EnumerationResult(count, tuple(solutions),
                             None if group is None else len(classes), target_size)


def column_profile_census(height: int, size: int | None = None) -> list[tuple[int, ...]]:
    """Row sets (1-based) of a single column with pairwise vertical distance >= 3."""
    if not 1 <= height <= H_MAX:
        raise InvalidParameter(f"column height must be in 1..{H_MAX}, got {height}")
    out = []

    def grow(row, picked):
        if row > height:
            if size is None or len(picked) == size:
                out.append(tuple(picked))
            return
        grow(row + 1, picked)
        picked.append(row)
        grow(row + 3, picked)
        picked.pop()

    grow(1, [])
    return sorted(out)
