import pytest
from hypothesis import given, settings, strategies as st

from packlab.errors import InvalidParameter
from packlab.graphs import Cell, WindowSpec
from packlab.theory import (
    A_MAX_N, CONJECTURED_OGF, INT64_MAX, KNOWN_VALUES, RationalSeries, a_closed, a_recursive,
    chromatic_class, color, color_translated, construction_A, fisher_rho, ogf_coefficients,
    strip_construction,
)


def test_closed_form_examples():
    assert [a_closed(n) for n in (6, 11, 12, 13, 18)] == [6, 15, 17, 20, 36]
    assert a_recursive(5) == 5 and a_recursive(6) == 6 and a_recursive(18) == 36


def test_closed_form_matches_table_from_six():
    for n in range(6, 19):
        assert a_closed(n) == KNOWN_VALUES[n]
    # the closed form overshoots the table on every n <= 5
    assert [n for n in range(1, 6) if a_closed(n) != KNOWN_VALUES[n]] == [1, 2, 3, 4, 5]


def test_closed_form_vs_recurrence_incremental():
    a = {n: a_recursive(n) for n in range(1, 6)}
    for n in range(6, 100_001):
        a[n] = a[n - 5] + n - 2
    assert all(a[n] == a_closed(n) for n in a)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10**6))
def test_recursive_function_agrees(n):
    assert a_recursive(n) == a_closed(n)


def test_closed_form_domain_and_overflow():
    with pytest.raises(InvalidParameter):
        a_closed(0)
    assert a_closed(A_MAX_N) * 10 <= INT64_MAX
    with pytest.raises(OverflowError):
        a_closed(A_MAX_N + 1)


def test_fisher_examples():
    assert fisher_rho(7, 7) == 10
    assert fisher_rho(8, 10) == 17 and fisher_rho(10, 8) == 17
    assert fisher_rho(10, 5) == 11
    assert fisher_rho(1, 1) == 1 and fisher_rho(1, 6) == 2
    with pytest.raises(InvalidParameter):
        fisher_rho(0, 3)


def test_color_examples():
    assert color(1, 1) == 3 and color(0, 0) == 0
    assert color(-1, 0) == 4
    assert color_translated(1, 1, 0) == color(0, 0)
    with pytest.raises(InvalidParameter):
        color_translated(0, 1, 1)


R = range(-50, 51)
small = st.integers(-50, 50)


def test_adjacent_cells_distinct_colors():
    for i in R:
        for j in R:
            assert color(i, j) != color(i + 1, j)
            assert color(i, j) != color(i, j + 1)


@pytest.mark.parametrize("window", [
    WindowSpec.triangle(15), WindowSpec.strip(20, 5), WindowSpec(18, 3, 9, 6, 15)])
def test_chromatic_classes_are_packings(window):
    sizes = []
    for m in range(5):
        cls = chromatic_class(window, m)
        assert cls.is_valid()
        sizes.append(len(cls))
    assert sum(sizes) == len(window.cells())


def test_color_classes_have_distance_three():
    cells = [(i, j) for i in range(-6, 7) for j in range(-6, 7)]
    for a in cells:
        for b in cells:
            if a != b and color(*a) == color(*b):
                assert abs(a[0] - b[0]) + abs(a[1] - b[1]) >= 3


@settings(max_examples=300)
@given(small, small, small)
def test_same_column_colors(i, j, j2):
    assert (color(i, j) == color(i, j2)) == ((j - j2) % 5 == 0)


@settings(max_examples=300)
@given(small, small, small)
def test_same_row_colors(i, i2, j):
    assert (color(i, j) == color(i2, j)) == ((i - i2) % 5 == 0)


@settings(max_examples=300)
@given(small, small)
def test_subdiagonal_colors(i, j):
    assert (color(i + 1, i) == color(j + 1, j)) == ((i - j) % 5 == 0)


@pytest.mark.parametrize("t", [1, 2, 3, 7])
def test_translation_identity(t):
    for i in range(-20, 21, 3):
        for j in range(-20, 21, 4):
            lhs = {(a, b) for a in R for b in R if color_translated(t, a, b) == color(i - t, j)}
            rhs = {(a, b) for a in R for b in R if color(a, b) == color(i, j)}
            assert lhs == rhs


def test_five_row_bands_hold_i_minus_two_per_color():
    for n in range(5, 31):
        for i in range(5, n + 1):
            band = WindowSpec.rows(n, i - 4, i)
            assert all(len(chromatic_class(band, m)) == i - 2 for m in range(5))


@pytest.mark.parametrize("n", range(11, 61))
def test_construction_valid_with_closed_size(n):
    s = construction_A(n)
    assert s.is_valid()
    assert len(s) == a_closed(n)


BAND_SUMMAND = {1: (4, 1, lambda i: 5 * i - 1), 2: (0, 1, lambda i: 5 * i),
                3: (0, 1, lambda i: 5 * i + 1), 4: (0, 1, lambda i: 5 * i + 2),
                0: (1, 2, lambda i: 5 * i - 2)}
BASE_TERM = {1: 2, 2: 2, 3: 3, 4: 4, 0: 5}


@pytest.mark.parametrize("n", range(11, 41))
def test_construction_band_sums(n):
    t = n % 5
    base, first, summand = BAND_SUMMAND[t]
    total = BASE_TERM[t]
    for i in range(first, (n - t) // 5 + 1):
        top = 5 * i + t
        band = WindowSpec.rows(n, top - 4, top)
        assert len(chromatic_class(band, base)) == summand(i)
        total += summand(i)
    assert total == len(construction_A(n)) == a_closed(n)


def test_construction_case_four_cells():
    n = 14
    s = construction_A(n).cells
    for c in [(1, 1), (1, 4), (3, 3), (n - 3, n), (n - 2, n - 2), (n, n)]:
        assert Cell(*c) in s
    for c in [(1, 2), (2, 4), (n - 2, n), (n - 3, n - 2)]:
        assert Cell(*c) not in s
        assert color(*c) == 0


def test_construction_domain():
    with pytest.raises(InvalidParameter):
        construction_A(10)


def test_strip_constructions():
    for r in range(5, 61):
        s = strip_construction(r, 5)
        assert s.is_valid() and len(s) == r - 1
        assert len(s.cells - {Cell(r, r)}) == r - 2
    for r in range(12, 41):
        s = strip_construction(r, 10)
        assert s.is_valid() and len(s) == 2 * r - 8
    for bad in [(4, 5), (11, 10), (20, 7)]:
        with pytest.raises(InvalidParameter):
            strip_construction(*bad)


def test_ogf_prefix_and_tail():
    c = ogf_coefficients(CONJECTURED_OGF, 1001)
    assert c[:6] == [1, 1, 2, 3, 4, 6]
    assert c[:17] == [KNOWN_VALUES[n + 1] for n in range(17)]
    assert all(c[n] == a_closed(n + 1) for n in range(5, 1001))


def test_series_parsing_and_errors():
    s = RationalSeries.parse("1 / 1,-1")
    assert ogf_coefficients(s, 5) == [1] * 5
    assert str(RationalSeries.parse(str(CONJECTURED_OGF))) == str(CONJECTURED_OGF)
    with pytest.raises(InvalidParameter):
        RationalSeries.parse("1,2")
    with pytest.raises(InvalidParameter):
        ogf_coefficients(RationalSeries((1,), (2, 1)), 3)
    with pytest.raises(InvalidParameter):
        RationalSeries((1,), (0, 1))
    with pytest.raises(OverflowError):
        ogf_coefficients(RationalSeries((1,), (1, -10)), 40)
