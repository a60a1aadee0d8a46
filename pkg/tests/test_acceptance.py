"""One test per acceptance criterion; each records a PASS/FAIL summary line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""
import itertools
import random
import time

from packlab.codes import Codeword, transposition_ball
from packlab.graphs import (
    WindowSpec, check_isomorphism, gamma_graph, graph_distance, grid_window, path_graph,
    reflection_automorphism, token_graph, token_to_word, triangle_to_token,
)
from packlab.packing import (
    Constraint, column_profile_census, constrained_max, enumerate_packings, rho_exact,
    rho_window_dp,
)
from packlab.papercheck import run_check
from packlab.theory import (
    CONJECTURED_OGF, KNOWN_VALUES, a_closed, a_recursive, chromatic_class, color,
    color_translated, construction_A, fisher_rho, ogf_coefficients,
)

TABLE = [1, 2, 3, 4, 6, 7, 9, 11, 13, 15, 17]


def test_criterion_01_triangle_values(acceptance):
    start = time.perf_counter()
    got = [rho_exact(WindowSpec.triangle(n)).optimum for n in range(2, 13)]
    elapsed = time.perf_counter() - start
    ok = got == TABLE and elapsed < 600
    acceptance(1, ok, f"rho(T(2..12)) = {got}, {elapsed:.2f}s (limit 600s)")
    assert ok


def test_criterion_02_strips(acceptance):
    start = time.perf_counter()
    bad5 = [m for m in range(5, 61) if rho_window_dp(WindowSpec.strip(m, 5)).optimum != m - 1]
    bad10 = [n for n in range(12, 41) if rho_window_dp(WindowSpec.strip(n, 10)).optimum != 2 * n - 8]
    eleven = rho_window_dp(WindowSpec.strip(11, 10)).optimum
    elapsed = time.perf_counter() - start
    ok = not bad5 and not bad10 and eleven == 15 and elapsed < 10
    acceptance(2, ok, f"T^5 mismatches {bad5}, T^10 mismatches {bad10}, T^10(11) = {eleven}, "
                      f"{elapsed:.2f}s (limit 10s)")
    assert ok


def test_criterion_03_fisher(acceptance):
    start = time.perf_counter()
    dp_bad = [(p, q) for p in range(1, 11) for q in range(1, 41)
              if rho_window_dp(grid_window(p, q)).optimum != fisher_rho(p, q)]
    specials = (rho_window_dp(grid_window(7, 7)).optimum, rho_window_dp(grid_window(8, 10)).optimum)
    bnb_bad = [(p, q) for p in range(1, 8) for q in range(1, 8)
               if rho_exact(grid_window(p, q)).optimum != fisher_rho(p, q)]
    elapsed = time.perf_counter() - start
    ok = not dp_bad and not bnb_bad and specials == (10, 17) and elapsed < 60
    acceptance(3, ok, f"DP mismatches {dp_bad}, B&B mismatches {bnb_bad}, (7,7),(8,10) -> "
                      f"{specials}, {elapsed:.2f}s (limit 60s)")
    assert ok


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def _t10():
    res = enumerate_packings(WindowSpec.triangle(10), None, "maximum",
                             group=[reflection_automorphism(10)])
    return res.target_size, res.count, res.canonical_classes


def _g105():
    g = grid_window(10, 5)
    res = enumerate_packings(g, Constraint(column_bounds={x: (2, 2) for x in range(1, 6)}), None)
    top = range(g.n - 4, g.n + 1)
    split = all(sum(1 for c in s.cells if c.x == 3 and c.y in top) == 1 for s in res.solutions)
    return res.count, split


def _configs():
    g = grid_window(10, 3)
    c = Constraint(forced=[(2, g.n), (2, g.n - 9)], column_bounds={1: (2, 2), 2: (3, 3), 3: (1, 1)})
    return len(column_profile_census(10, 4)), enumerate_packings(g, c, None).count


def _window(n=29):
    def w(k, r, i, j=None):
        return WindowSpec(n, i, i if j is None else j, k, r)
    host = WindowSpec(n, n - 14, n, n - 9, n)
    base = [(w(n - 9, n, n - 9, n), 12, 12), (w(n - 4, n, n - 4, n), 4, 4),
            (w(n - 9, n - 5, n - 9, n - 5), 3, 3)]
    base += [(w(n - 4, n, i), 1, 1) for i in range(n - 14, n - 4)]
    base += [(w(n - 9, n - 5, i), 1, 1) for i in (n - 14, n - 13, n - 12)]
    extra = [(w(n - 9, n - 5, n - 11), 1, 1), (w(n - 9, n - 5, n - 10), 1, 1)]
    res = enumerate_packings(host, Constraint(region_bounds=base + extra), None)
    sub = w(n - 9, n - 5, n - 14, n - 5)
    restricted = len({frozenset(c for c in s.cells if c in sub) for s in res.solutions})
    variant = enumerate_packings(host, Constraint(region_bounds=base + [(w(n - 9, n - 5, n - 10), 2, 2)]),
                                 None, count_only=True).count
    return restricted, variant


def test_criterion_04_enumeration_counts(acceptance):
    (size, raw, classes), t1 = _timed(_t10)
    (g105, split), t2 = _timed(_g105)
    (four, configs), t3 = _timed(_configs)
    (restricted, variant), t4 = _timed(_window)
    parts = {
        "T(10) 13-packings in 4 reflection classes": size == 13 and classes == 4 and t1 < 300,
        "G_10,5 two-per-column count 54 with split": g105 == 54 and split and t2 < 300,
        "height-10 size-4 column 1 and (2,3,1) configs 4": four == 1 and configs == 4 and t3 < 300,
        "window restricted 26 and variant 0": restricted == 26 and variant == 0 and t4 < 300,
    }
    ok = all(parts.values())
    detail = (f"T(10): size {size}, raw {raw}, classes {classes} (want 4); G_10,5: {g105}, split {split}; "
              f"columns: {four} and {configs}; window: {restricted} and {variant}; "
              f"times {t1:.2f}/{t2:.2f}/{t3:.2f}/{t4:.2f}s")
    failed = [k for k, v in parts.items() if not v]
    acceptance(4, ok, detail + (f"; failing: {failed}" if failed else ""))
    assert ok, failed


def test_criterion_05_column_bound(acceptance):
    res, elapsed = _timed(lambda: constrained_max(grid_window(10, 8), Constraint(column_bounds={8: (0, 2)})))
    ok = res.optimum == 16 < fisher_rho(8, 10) == 17 and elapsed < 5
    acceptance(5, ok, f"constrained max {res.optimum} vs unconstrained {fisher_rho(8, 10)}, "
                      f"{elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_06_constructions(acceptance):
    start = time.perf_counter()
    bad = [n for n in range(11, 61)
           if not construction_A(n).is_valid() or len(construction_A(n)) != a_closed(n)]
    exact = {n: rho_exact(WindowSpec.triangle(n)).optimum for n in (11, 12)}
    elapsed = time.perf_counter() - start
    ok = not bad and all(exact[n] == a_closed(n) for n in exact) and elapsed < 30
    acceptance(6, ok, f"failing n {bad}, exact rho at 11, 12 = {exact}, {elapsed:.2f}s (limit 30s)")
    assert ok


def test_criterion_07_generating_function(acceptance):
    start = time.perf_counter()
    c = ogf_coefficients(CONJECTURED_OGF, 1001)
    head = c[:17] == [KNOWN_VALUES[n + 1] for n in range(17)]
    tail = [n for n in range(5, 1001) if c[n] != a_closed(n + 1)]
    elapsed = time.perf_counter() - start
    ok = head and not tail and elapsed < 1
    acceptance(7, ok, f"first 17 match {head}, tail mismatches {tail}, {elapsed:.3f}s (limit 1s)")
    assert ok


def test_criterion_08_codes(acceptance):
    start = time.perf_counter()
    counter = 0
    for n in range(2, 11):
        g = gamma_graph(n)
        for u, v in itertools.combinations(g.labels, 2):
            disjoint = not (transposition_ball(Codeword(u)) & transposition_ball(Codeword(v)))
            counter += disjoint != (graph_distance(g, u, v) >= 3)
    iso_bad = []
    for n in range(1, 10):
        tri = WindowSpec.triangle(n).graph()
        tok = token_graph(path_graph(n + 1), 2)
        gam = gamma_graph(n + 1)
        if not (check_isomorphism(tri, tok, {c: triangle_to_token(c) for c in tri.labels})
                and check_isomorphism(tok, gam, {s: token_to_word(s, n + 1) for s in tok.labels})):
            iso_bad.append(n)
    elapsed = time.perf_counter() - start
    ok = counter == 0 and not iso_bad and elapsed < 60
    acceptance(8, ok, f"{counter} counterexamples, isomorphism failures {iso_bad}, "
                      f"{elapsed:.2f}s (limit 60s)")
    assert ok


def test_criterion_09_audits(acceptance):
    report = run_check("C13")
    ok = report.status == "pass" and report.wall_time < 300
    failed = [k for k in report.expected if report.observed.get(k) != report.expected[k]]
    acceptance(9, ok, f"status {report.status}, failing {failed}, {report.wall_time:.2f}s (limit 300s)")
    assert ok


def _coloring_violations():
    R = range(-50, 51)
    bad = 0
    for i in R:
        for j in R:
            bad += color(i, j) in (color(i + 1, j), color(i, j + 1))
    for m in range(5):
        for w in (WindowSpec.triangle(20), WindowSpec.strip(30, 10), WindowSpec(25, 4, 15, 8, 20)):
            bad += not chromatic_class(w, m).is_valid()
    for i in R:
        for d in range(-10, 11):
            bad += (color(i, 3) == color(i, 3 + d)) != (d % 5 == 0)
            bad += (color(3, i) == color(3 + d, i)) != (d % 5 == 0)
            bad += (color(i + 1, i) == color(i + d + 1, i + d)) != (d % 5 == 0)
    cells = [(a, b) for a in range(-15, 16) for b in range(-15, 16)]
    for t in (1, 2, 3, 4, 6):
        for i, j in [(0, 0), (3, -7), (-11, 5)]:
            lhs = {c for c in cells if color_translated(t, *c) == color(i - t, j)}
            rhs = {c for c in cells if color(*c) == color(i, j)}
            bad += lhs != rhs
    return bad


def _random_window(rng):
    while True:
        n = rng.randint(1, 20)
        kind = rng.choice(["triangle", "strip", "rect"])
        if kind == "triangle":
            w = WindowSpec.triangle(min(n, 10))
        elif kind == "strip":
            w = WindowSpec.strip(n, rng.randint(1, min(n, 10)))
        else:
            x_lo = rng.randint(1, n)
            x_hi = rng.randint(x_lo, n)
            y_hi = rng.randint(x_lo, n)
            w = WindowSpec(n, x_lo, x_hi, rng.randint(max(1, y_hi - 11), y_hi), y_hi)
        if len(w.cells()) <= 60:
            return w


def test_criterion_10_property_suites(acceptance):
    coloring = _coloring_violations()
    rng = random.Random(7)
    windows = [_random_window(rng) for _ in range(200)]
    oracle = sum(rho_window_dp(w).optimum != rho_exact(w).optimum for w in windows)
    a = {n: a_recursive(n) for n in range(1, 6)}
    for n in range(6, 100_001):
        a[n] = a[n - 5] + n - 2
    closed = sum(a[n] != a_closed(n) for n in a)
    ok = coloring == 0 and oracle == 0 and closed == 0
    acceptance(10, ok, f"coloring violations {coloring}, DP vs B&B disagreements {oracle}/200, "
                       f"closed form vs recurrence mismatches {closed}/100000")
    assert ok


if __name__ == "__main__":
    import sys

    def record(number, ok, detail):
        print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(record)
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
