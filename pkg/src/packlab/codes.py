"""Weight-2 binary codes that correct one adjacent transposition."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import InvalidParameter
from .graphs import Cell, PackingSet, WindowSpec


@dataclass(frozen=True, order=True)
class Codeword:
    bits: str

    def __post_init__(self):
        if len(self.bits) < 2 or set(self.bits) - {"0", "1"}:
            raise InvalidParameter(f"not a binary word of length >= 2: {self.bits!r}")

    def __str__(self):
        return self.bits

    def __len__(self):
        return len(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.count("1")

    def support(self) -> tuple[int, ...]:
        """1-based positions of the ones."""
        return tuple(i + 1 for i, b in enumerate(self.bits) if b == "1")


@dataclass(frozen=True)
class Code:
    length: int
    words: frozenset

    def __post_init__(self):
        words = frozenset(w if isinstance(w, Codeword) else Codeword(w) for w in self.words)
        for w in words:
            if len(w) != self.length or w.weight != 2:
                raise InvalidParameter(f"{w} is not a weight-2 word of length {self.length}")
        object.__setattr__(self, "words", words)

    def __len__(self):
        return len(self.words)

    def sorted(self) -> list[Codeword]:
        return sorted(self.words, key=lambda w: w.support())


def subset_to_codeword(a: Iterable[int], n: int) -> Codeword:
    a = sorted(set(a))
    if len(a) != 2 or not all(1 <= i <= n for i in a):
        raise InvalidParameter(f"need a 2-subset of 1..{n}, got {a}")
    bits = ["0"] * n
    for i in a:
        bits[i - 1] = "1"
    return Codeword("".join(bits))


def codeword_to_subset(u: Codeword) -> tuple[int, int]:
    if u.weight != 2:
        raise InvalidParameter(f"{u} does not have weight 2")
    return u.support()


def transposition_ball(u: Codeword) -> set[Codeword]:
    """``u`` together with every word reachable by swapping one adjacent pair of bits."""
    s = u.bits
    ball = {u}
    for p in range(len(s) - 1):
        ball.add(Codeword(s[:p] + s[p + 1] + s[p] + s[p + 2:]))
    return ball


def find_ball_collision(code: Code):
    """First pair (in sorted order) whose balls meet, with a shared word; None if none."""
    words = code.sorted()
    balls = {w: transposition_ball(w) for w in words}
    for u, v in combinations(words, 2):
        common = balls[u] & balls[v]
        if common:
            return u, v, min(common)
    return None


def corrects_single_transposition(code: Code) -> bool:
    return find_ball_collision(code) is None


def code_from_packing(s: PackingSet) -> Code:
    """Length-(n+1) code from a packing of T(n), via (x, y) -> {x, y + 1}."""
    if not isinstance(s.host, WindowSpec) or not s.host.is_triangle:
        raise InvalidParameter("code_from_packing needs a packing of a full triangle T(n)")
    n = s.host.n + 1
    return Code(n, frozenset(subset_to_codeword((x, y + 1), n) for x, y in s.cells))


def packing_from_code(code: Code) -> PackingSet:
    """Inverse of :func:`code_from_packing`."""
    if code.length < 2:
        raise InvalidParameter("code length must be >= 2")
    cells = []
    for w in code.words:
        a, b = w.support()
        cells.append(Cell(a, b - 1))
    return PackingSet(WindowSpec.triangle(code.length - 1), frozenset(cells))


def format_code(code: Code) -> str:
    lines = [f"n={code.length} w=2"] + [w.bits for w in code.sorted()]
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> Code:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParameter("empty code file")
    head = dict(part.split("=", 1) for part in lines[0].split() if "=" in part)
    try:
        n, w = int(head["n"]), int(head["w"])
    except (KeyError, ValueError):
        raise InvalidParameter(f"bad code header: {lines[0]!r}") from None
    if w != 2:
        raise InvalidParameter(f"only weight-2 codes are supported, header says w={w}")
    return Code(n, frozenset(Codeword(b) for b in lines[1:]))
