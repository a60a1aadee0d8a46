"""Closed forms and explicit constructions for packings of T(n)."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameter
from .graphs import Cell, PackingSet, WindowSpec

INT64_MAX = 2**63 - 1
# largest n with n^2 + n + 20 inside a signed 64-bit integer
A_MAX_N = 3_037_000_498

# A085680(n + 1) for n = 1..18
KNOWN_VALUES = {
    1: 1, 2: 1, 3: 2, 4: 3, 5: 4, 6: 6, 7: 7, 8: 9, 9: 11,
    10: 13, 11: 15, 12: 17, 13: 20, 14: 23, 15: 26, 16: 29, 17: 32, 18: 36,
}

_A_OFFSET = {0: 20, 4: 20, 1: 18, 3: 18, 2: 14}
_A_BASE = {1: 2, 2: 2, 3: 3, 4: 4, 5: 5}


def _check_n(n: int):
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    if n > A_MAX_N:
        raise OverflowError(f"a({n}) leaves the 64-bit range (n <= {A_MAX_N})")


def a_closed(n: int) -> int:
    """(n^2 + n + c) / 10 with c = 20, 18, 14 by n mod 5."""
    _check_n(n)
    num = n * n + n + _A_OFFSET[n % 5]
    q, r = divmod(num, 10)
    assert r == 0, f"n^2 + n + c not divisible by 10 at n={n}"
    return q


def a_recursive(n: int) -> int:
    """a(n) = a(n - 5) + n - 2 from the five base values."""
    _check_n(n)
    k = (n - 1) % 5 + 1
    value = _A_BASE[k]
    for m in range(k + 5, n + 1, 5):
        value += m - 2
    return value


def fisher_rho(p: int, q: int) -> int:
    """Packing number of the p x q grid graph."""
    if p < 1 or q < 1:
        raise InvalidParameter(f"grid dimensions must be positive, got {p}x{q}")
    if p > q:
        p, q = q, p
    if p <= 3:
        return -(-(p + 1) * q // 6)
    if p == 4:
        return -(-6 * q // 7) + (1 if q % 7 == 1 else 0)
    if (p, q) == (7, 7):
        return 10
    if p <= 7:
        return -(-(p * q + 2) // 5)
    if (p, q) == (8, 10):
        return 17
    return -(-p * q // 5)


def color(i: int, j: int) -> int:
    return (i + 2 * j) % 5


def color_translated(t: int, i: int, j: int) -> int:
    if t < 1:
        raise InvalidParameter(f"translation must be positive, got {t}")
    return color(i - t, j)


def chromatic_class(w: WindowSpec, m: int) -> PackingSet:
    if m not in range(5):
        raise InvalidParameter(f"color must be in 0..4, got {m}")
    return PackingSet(w, frozenset(c for c in w.cells() if color(*c) == m))


def construction_A(n: int) -> PackingSet:
    """Packing of T(n) of size a(n), built from one color class plus local repairs."""
    if n < 11:
        raise InvalidParameter(f"construction needs n >= 11, got {n}")
    t = n % 5
    tri = WindowSpec.triangle(n)
    if t == 1:
        base, drop, add = 4, [], [(1, 1), (n, n)]
    elif t == 2:
        base, drop, add = 0, [(1, 2), (2, 4)], [(1, 1), (1, 4), (3, 3)]
    elif t == 3:
        base, drop, add = 0, [(1, 2), (2, 4)], [(1, 1), (1, 4), (3, 3), (n, n)]
    elif t == 4:
        base = 0
        drop = [(1, 2), (2, 4), (n - 2, n), (n - 3, n - 2)]
        add = [(1, 1), (1, 4), (3, 3), (n - 3, n), (n - 2, n - 2), (n, n)]
    else:
        base = 1
        drop = [(1, 5), (2, 2), (2, 7), (3, 4), (4, 6)]
        add = [(1, 1), (1, 4), (1, 7), (3, 3), (3, 6), (5, 5), (n, n)]
    cells = set(chromatic_class(tri, base).cells)
    cells.difference_update(Cell(*c) for c in drop)
    cells.update(Cell(*c) for c in add)
    return PackingSet(tri, frozenset(cells))


def strip_construction(r: int, ell: int) -> PackingSet:
    """Packing of the top ``ell`` rows of T(r): one color class plus the corner (r, r)."""
    if ell == 5:
        if r < 5:
            raise InvalidParameter(f"5-row strip needs r >= 5, got {r}")
    elif ell == 10:
        if r < 12:
            raise InvalidParameter(f"10-row strip needs r >= 12, got {r}")
    else:
        raise InvalidParameter(f"strip height must be 5 or 10, got {ell}")
    w = WindowSpec.strip(r, ell)
    c = (3 * r - 4) % 5
    cells = set(chromatic_class(w, c).cells)
    cells.add(Cell(r, r))
    return PackingSet(w, frozenset(cells))


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class RationalSeries:
    """Power series numerator / denominator with integer coefficients, lowest power first."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(int(c) for c in self.numerator))
        object.__setattr__(self, "denominator", tuple(int(c) for c in self.denominator))
        if not self.denominator or self.denominator[0] == 0:
            raise InvalidParameter("denominator needs a nonzero constant term")

    @classmethod
    def parse(cls, text: str) -> RationalSeries:
        """Parse ``"1,-1,1 / 1,-2,1"`` (comma-separated ascending coefficients)."""
        try:
            num, den = text.split("/")
            return cls(
                tuple(int(c) for c in num.split(",") if c.strip()),
                tuple(int(c) for c in den.split(",") if c.strip()),
            )
        except ValueError:
            raise InvalidParameter(f"cannot parse series {text!r}") from None

    def __str__(self):
        return f"{','.join(map(str, self.numerator))} / {','.join(map(str, self.denominator))}"

    def coefficients(self, count: int) -> list[int]:
        return ogf_coefficients(self, count)


def ogf_coefficients(series: RationalSeries, count: int) -> list[int]:
    """First ``count`` Maclaurin coefficients, by the recurrence the denominator induces."""
    if count < 1:
        raise InvalidParameter(f"count must be positive, got {count}")
    d0 = series.denominator[0]
    if d0 not in (1, -1):
        raise InvalidParameter(f"denominator constant term must be +-1, got {d0}")
    num, den = series.numerator, series.denominator
    out = []
    for k in range(count):
        acc = num[k] if k < len(num) else 0
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        c = acc * d0  # d0 is its own inverse
        if abs(c) > INT64_MAX:
            raise OverflowError(f"coefficient {k} leaves the 64-bit range")
        out.append(c)
    return out


CONJECTURED_OGF = RationalSeries(
    (1, -1, 1, 0, 0, 0, 0, 0, 0, 0, -1, 1),
    tuple(poly_mul(poly_mul([1, -1], [1, -1]), [1, 0, 0, 0, 0, -1])),
)

