"""Named, re-runnable certificates for the computational claims about T(n).

Every check returns a :class:`CheckReport`.  A report passes only when each
observed quantity equals its expected value exactly; a size-cap hit makes the
whole report ``skipped``.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import combinations
from typing import Callable

from . import codes, theory
from .errors import InvalidParameter, SizeCapExceeded
from .graphs import (
    WindowSpec, check_isomorphism, gamma_graph, graph_distance, grid_window,
    path_graph, reflection_automorphism, token_graph, token_to_word, triangle_to_token,
)
from .packing import (
    Constraint, column_profile_census, constrained_max, enumerate_packings,
    max_vertices_cap, rho_exact, rho_window_dp,
)


@dataclass(frozen=True)
class CheckConfig:
    table_max_n: int = 12
    strip5_max_m: int = 60
    strip10_max_n: int = 40
    fisher_max_p: int = 10
    fisher_max_q: int = 40
    fisher_bnb_max: int = 7
    construction_max_n: int = 60
    ogf_max_n: int = 1000
    code_max_n: int = 10
    iso_max_n: int = 9
    window_n: int = 29
    audit_n: int = 27
    max_vertices: int | None = None

    def with_overrides(self, **kwargs) -> CheckConfig:
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


@dataclass
class CheckReport:
    check_id: str
    name: str
    claim: str
    parameters: dict
    observed: dict
    expected: dict
    status: str
    wall_time: float
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return asdict(self)

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, default=str)


@dataclass(frozen=True)
class Check:
    check_id: str
    name: str
    claim: str
    run: Callable


class _Outcome:
    """Collects (observed, expected) pairs for one check."""

    def __init__(self):
        self.observed = {}
        self.expected = {}
        self.notes = {}
        self.parameters = {}

    def expect(self, key, observed, expected):
        self.observed[key] = observed
        self.expected[key] = expected


def _caps(config: CheckConfig) -> int:
    return max_vertices_cap() if config.max_vertices is None else config.max_vertices


# -- individual checks ----------------------------------------------------------

def _table_values(cfg: CheckConfig, out: _Outcome):
    ns = range(2, cfg.table_max_n + 1)
    out.parameters.update(n_range=[2, cfg.table_max_n], max_vertices=_caps(cfg))
    observed, expected, closed = {}, {}, {}
    for n in ns:
        observed[n] = rho_exact(WindowSpec.triangle(n), max_vertices=_caps(cfg)).optimum
        expected[n] = theory.KNOWN_VALUES.get(n, theory.a_closed(n))
        if n >= 6:
            closed[n] = theory.a_closed(n)
    out.expect("rho_triangle", observed, expected)
    out.expect("closed_form_n_ge_6", closed, {n: observed[n] for n in closed})


def _strip5(cfg: CheckConfig, out: _Outcome):
    out.parameters.update(m_range=[5, cfg.strip5_max_m])
    ms = range(5, cfg.strip5_max_m + 1)
    out.expect("rho_top5",
               {m: rho_window_dp(WindowSpec.strip(m, 5)).optimum for m in ms},
               {m: m - 1 for m in ms})


def _strip10(cfg: CheckConfig, out: _Outcome):
    out.parameters.update(n_range=[11, cfg.strip10_max_n])
    ns = range(12, cfg.strip10_max_n + 1)
    out.expect("rho_top10",
               {n: rho_window_dp(WindowSpec.strip(n, 10)).optimum for n in ns},
               {n: 2 * n - 8 for n in ns})
    out.expect("rho_top10_n11", rho_window_dp(WindowSpec.strip(11, 10)).optimum, 15)


def _fisher(cfg: CheckConfig, out: _Outcome):
    out.parameters.update(p_max=cfg.fisher_max_p, q_max=cfg.fisher_max_q,
                          bnb_max=cfg.fisher_bnb_max)
    dp_bad = []
    for p in range(1, cfg.fisher_max_p + 1):
        for q in range(1, cfg.fisher_max_q + 1):
            got = rho_window_dp(grid_window(p, q)).optimum
            if got != theory.fisher_rho(p, q):
                dp_bad.append([p, q, got, theory.fisher_rho(p, q)])
    bnb_bad = []
    for p in range(1, cfg.fisher_bnb_max + 1):
        for q in range(1, cfg.fisher_bnb_max + 1):
            got = rho_exact(grid_window(p, q), max_vertices=_caps(cfg)).optimum
            if got != theory.fisher_rho(p, q):
                bnb_bad.append([p, q, got, theory.fisher_rho(p, q)])
    out.expect("dp_mismatches", dp_bad, [])
    out.expect("bnb_mismatches", bnb_bad, [])
    specials = {}
    for p, q in ((7, 7), (8, 10)):
        if p <= cfg.fisher_max_p and q <= cfg.fisher_max_q:
            specials[f"{p}x{q}"] = rho_window_dp(grid_window(p, q)).optimum
    out.expect("special_values", specials,
               {k: v for k, v in {"7x7": 10, "8x10": 17}.items() if k in specials})


def _t10_enum(cfg: CheckConfig, out: _Outcome):
    tri = WindowSpec.triangle(10)
    group = [reflection_automorphism(10)]
    out.parameters.update(host=[10, 1, 10, 1, 10], group="identity + anti-diagonal reflection")
    res = enumerate_packings(tri, None, "maximum", group=group)
    out.expect("maximum_size", res.target_size, 13)
    out.expect("raw_count", res.count, 4)
    out.expect("reflection_classes", res.canonical_classes, 4)
    # Placed as the last ten columns of a 10-row strip, the column just left of
    # the block is column 0 in local coordinates; only one maximum set leaves room there.
    room = []
    for s in res.solutions:
        free = [y for y in range(1, 11)
                if all(abs(0 - c.x) + abs(y - c.y) >= 3 for c in s.cells)]
        room.append(free)
    out.expect("sets_admitting_left_column_cell", sum(1 for f in room if f), 1)
    out.expect("left_column_rows", sorted({y for f in room for y in f}), [7])
    out.notes["solutions"] = [[list(c) for c in s.sorted()] for s in res.solutions]


def _g105_census(cfg: CheckConfig, out: _Outcome):
    g = grid_window(10, 5)
    out.parameters.update(grid="10 rows x 5 columns", columns="exactly 2 per column")
    c = Constraint(column_bounds={x: (2, 2) for x in range(1, 6)})
    res = enumerate_packings(g, c, None)
    top = range(g.n - 4, g.n + 1)
    split = all(sum(1 for cell in s.cells if cell.x == 3 and cell.y in top) == 1
                for s in res.solutions)
    out.expect("count", res.count, 54)
    out.expect("middle_column_split_in_all", split, True)


def _column_configs(cfg: CheckConfig, out: _Outcome):
    four = column_profile_census(10, 4)
    out.expect("height10_size4_count", len(four), 1)
    out.expect("height10_size4_rows", [list(r) for r in four], [[1, 4, 7, 10]])

    g = grid_window(10, 3)
    top, bottom = g.n, g.n - 9
    c = Constraint(forced=[(2, top), (2, bottom)],
                   column_bounds={1: (2, 2), 2: (3, 3), 3: (1, 1)})
    out.parameters["three_column_encoding"] = {
        "grid": "10 rows x 3 columns", "forced": "top and bottom cell of the middle column",
        "column_counts": [2, 3, 1]}
    res = enumerate_packings(g, c, None)
    out.expect("three_column_configs", res.count, 4)

    # each configuration leaves at most one cell for the next column to the left
    g4 = grid_window(10, 4)
    c4 = Constraint(forced=[(3, g4.n), (3, g4.n - 9)],
                    column_bounds={2: (2, 2), 3: (3, 3), 4: (1, 1)})
    left = constrained_max(g4, Constraint(
        forced=c4.forced, column_bounds={**c4.column_bounds, 1: (2, None)}))
    out.expect("left_neighbour_at_most_one", not left.feasible, True)

    # a full column of four blocks both neighbouring columns
    rows = four[0]
    full = Constraint(forced=[(2, g.n - 10 + r) for r in rows])
    out.expect("size4_neighbours_empty", constrained_max(g, full).optimum, 4)


def _window26(cfg: CheckConfig, out: _Outcome):
    n = cfg.window_n
    out.parameters.update(n=n, window=[n, n - 14, n, n - 9, n])
    host = WindowSpec(n, n - 14, n, n - 9, n)

    def block(k, r, i, j=None):
        return WindowSpec(n, i, i if j is None else j, k, r)

    def upper(i, j=None):
        return block(n - 4, n, i, j)

    def lower(i, j=None):
        return block(n - 9, n - 5, i, j)

    base = [(block(n - 9, n, n - 9, n), 12, 12)]
    base += [(upper(i), 1, 1) for i in range(n - 14, n - 4)]
    base += [(upper(n - 4, n), 4, 4)]
    base += [(lower(n - 9, n - 5), 3, 3)]
    base += [(lower(i), 1, 1) for i in (n - 14, n - 13, n - 12)]
    extra = [(lower(n - 11), 1, 1), (lower(n - 10), 1, 1)]
    variant = [(lower(n - 10), 2, 2)]

    res = enumerate_packings(host, Constraint(region_bounds=base + extra), None)
    sub = lower(n - 14, n - 5)
    restricted = {frozenset(c for c in s.cells if c in sub) for s in res.solutions}
    out.expect("restricted_configurations", len(restricted), 26)
    alt = enumerate_packings(host, Constraint(region_bounds=base + variant), None, count_only=True)
    out.expect("variant_solutions", alt.count, 0)
    out.notes["full_window_solutions"] = res.count


def _n19_column8(cfg: CheckConfig, out: _Outcome):
    g = grid_window(10, 8)
    out.parameters.update(grid="10 rows x 8 columns", constraint="column 8 holds at most 2 cells")
    got = constrained_max(g, Constraint(column_bounds={8: (0, 2)})).optimum
    out.expect("constrained_max", got, 16)
    out.expect("unconstrained_formula", theory.fisher_rho(8, 10), 17)
    out.expect("strictly_below", got < theory.fisher_rho(8, 10), True)


def _constructions(cfg: CheckConfig, out: _Outcome):
    out.parameters.update(n_range=[11, cfg.construction_max_n])
    bad = []
    for n in range(11, cfg.construction_max_n + 1):
        a = theory.construction_A(n)
        if len(a) != theory.a_closed(n) or not a.is_valid():
            bad.append(n)
    out.expect("construction_failures", bad, [])
    strip_bad = []
    for r in range(5, cfg.strip5_max_m + 1):
        s = theory.strip_construction(r, 5)
        if len(s) != r - 1 or not s.is_valid():
            strip_bad.append([5, r])
    for r in range(12, cfg.strip10_max_n + 1):
        s = theory.strip_construction(r, 10)
        if len(s) != 2 * r - 8 or not s.is_valid():
            strip_bad.append([10, r])
    out.expect("strip_construction_failures", strip_bad, [])


def _ogf(cfg: CheckConfig, out: _Outcome):
    count = cfg.ogf_max_n + 1
    out.parameters.update(series=str(theory.CONJECTURED_OGF), coefficients=count)
    coeffs = theory.ogf_coefficients(theory.CONJECTURED_OGF, count)
    out.expect("table_prefix", coeffs[:17], [theory.KNOWN_VALUES[n + 1] for n in range(17)])
    bad = [n for n in range(5, count) if coeffs[n] != theory.a_closed(n + 1)]
    out.expect("closed_form_mismatches", bad, [])


def _code_equivalence(cfg: CheckConfig, out: _Outcome):
    out.parameters.update(max_length=cfg.code_max_n, iso_max_n=cfg.iso_max_n)
    counter = []
    pairs = 0
    for n in range(2, cfg.code_max_n + 1):
        g = gamma_graph(n)
        words = [codes.Codeword(w) for w in g.labels]
        for u, v in combinations(words, 2):
            pairs += 1
            disjoint = not (codes.transposition_ball(u) & codes.transposition_ball(v))
            far = graph_distance(g, u.bits, v.bits) >= 3
            if disjoint != far:
                counter.append([n, u.bits, v.bits])
    out.expect("counterexamples", counter, [])
    out.notes["pairs_checked"] = pairs
    iso_bad = []
    for n in range(1, cfg.iso_max_n + 1):
        tri = WindowSpec.triangle(n).graph()
        tok = token_graph(path_graph(n + 1), 2)
        gam = gamma_graph(n + 1)
        to_token = {c: triangle_to_token(c) for c in tri.labels}
        to_word = {s: token_to_word(s, n + 1) for s in tok.labels}
        if not (check_isomorphism(tri, tok, to_token) and check_isomorphism(tok, gam, to_word)):
            iso_bad.append(n)
    out.expect("isomorphism_failures", iso_bad, [])


def _proofstep_audits(cfg: CheckConfig, out: _Outcome):
    n = cfg.audit_n
    target = 2 * n - 8
    strip = WindowSpec.strip(n, 10)
    out.parameters.update(n=n, strip_optimum=target, columns=[10, n - 12])

    def below(c: Constraint) -> bool:
        return constrained_max(strip, c).optimum < target

    column_bad = []
    for j in range(10, n - 11):
        for lo, hi in ((0, 1), (3, None)):
            if not below(Constraint(column_bounds={j: (lo, hi)})):
                column_bad.append([j, "column", lo, hi])
        for part, (k, r) in (("upper", (n - 4, n)), ("lower", (n - 9, n - 5))):
            cells = WindowSpec(n, j, j, k, r)
            for lo, hi in ((0, 0), (2, None)):
                if not below(Constraint(region_bounds=[(cells, lo, hi)])):
                    column_bad.append([j, part, lo, hi])
    out.expect("column_count_violations_reach_optimum", column_bad, [])

    corner = WindowSpec.strip(n, 10, n - 9, n)
    out.expect("corner_at_most_11_below_optimum",
               below(Constraint(region_bounds=[(corner, 0, 11)])), True)
    out.expect("corner_at_least_14_infeasible",
               constrained_max(strip, Constraint(region_bounds=[(corner, 14, None)])).feasible, False)

    top5 = WindowSpec.strip(n, 5)
    prefix = WindowSpec.strip(n, 5, 1, 9)
    infeasible = []
    for lo, hi in ((0, 8), (10, None)):
        c = Constraint(region_bounds=[(strip, target, target), (top5, n - 1, n - 1), (prefix, lo, hi)])
        infeasible.append(not constrained_max(strip, c).feasible)
    out.expect("prefix_not_nine_infeasible", infeasible, [True, True])


CHECKS: dict[str, Check] = {c.check_id: c for c in [
    Check("C1", "table-values",
          "rho(T(n)) equals A085680(n+1) for n = 2..12, and the closed form a(n) from n = 6", _table_values),
    Check("C2", "strip5", "the top 5 rows of T(m) have packing number m - 1", _strip5),
    Check("C3", "strip10",
          "the top 10 rows of T(n) have packing number 2n - 8 for n >= 12, and 15 at n = 11", _strip10),
    Check("C4", "fisher", "grid packing numbers follow Fisher's formula", _fisher),
    Check("C5", "t10-enum",
          "the maximum packings of T(10) have 13 cells and form exactly 4 reflection classes", _t10_enum),
    Check("C6", "g105-census",
          "the 10x5 grid has exactly 54 packings with two cells per column, each splitting "
          "the middle column between the upper and lower halves", _g105_census),
    Check("C7", "column-configs",
          "a height-10 column holds 4 cells in one way only; with counts (2,3,1) and both ends "
          "of the middle column chosen there are exactly 4 configurations", _column_configs),
    Check("C8", "window26",
          "the corner window admits exactly 26 restricted configurations under the fixed "
          "column counts, and none when the lower part of column n-10 holds 2", _window26),
    Check("C9", "n19-column8",
          "the 10x8 grid with at most 2 cells in its last column packs only 16 < 17", _n19_column8),
    Check("C10", "constructions",
          "the explicit packings of T(n) are valid with a(n) cells; strip packings reach m-1 and 2n-8",
          _constructions),
    Check("C11", "ogf",
          "the rational generating function reproduces A085680(n+2) and a(n+1)", _ogf),
    Check("C12", "code-equivalence",
          "ball disjointness equals distance >= 3 for weight-2 words; T(n), F_2(P_{n+1}) and "
          "Gamma_{n+1} are isomorphic", _code_equivalence),
    Check("C13", "proofstep-audits",
          "in a maximum packing of the top 10 rows of T(27): middle columns hold 2 cells split 1+1, "
          "the corner block holds 12 or 13, and the top 5 rows of columns 1..9 hold 9", _proofstep_audits),
]}

_BY_NAME = {c.name: c.check_id for c in CHECKS.values()}


def resolve_check_id(check_id: str) -> str:
    key = _BY_NAME.get(check_id, check_id)
    key = key.upper() if key.upper() in CHECKS else key
    if key not in CHECKS:
        raise InvalidParameter(
            f"unknown check {check_id!r}; valid ids: {', '.join(CHECKS)} or names "
            f"{', '.join(_BY_NAME)}")
    return key


def run_check(check_id: str, config: CheckConfig | None = None) -> CheckReport:
    config = config or CheckConfig()
    check = CHECKS[resolve_check_id(check_id)]
    out = _Outcome()
    start = time.perf_counter()
    try:
        check.run(config, out)
        status = "pass" if out.observed == out.expected else "fail"
    except SizeCapExceeded as exc:
        status = "skipped"
        out.notes["size_cap"] = {"name": exc.cap_name, "cap": exc.cap, "message": str(exc)}
    elapsed = time.perf_counter() - start
    return CheckReport(check.check_id, check.name, check.claim, _jsonable(out.parameters),
                       _jsonable(out.observed), _jsonable(out.expected), status, elapsed,
                       _jsonable(out.notes))


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=str))


def _run_one(args):
    check_id, config = args
    return run_check(check_id, config)


def run_all(check_ids=None, config: CheckConfig | None = None, threads: int = 1) -> list[CheckReport]:
    """Run checks and return reports in the order the ids were given."""
    ids = [resolve_check_id(c) for c in (check_ids or list(CHECKS))]
    config = config or CheckConfig()
    if threads <= 1:
        return [run_check(c, config) for c in ids]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, [(c, config) for c in ids]))


def exit_status(reports: list[CheckReport]) -> int:
    """0 iff every non-skipped report passed."""
    return 0 if all(r.status != "fail" for r in reports) else 1
