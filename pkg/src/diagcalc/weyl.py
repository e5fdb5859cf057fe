"""Boson normal ordering and generalized Stirling matrices.

The Weyl algebra here has two generators, a creation letter ``a+`` and an
annihilation letter ``a``, subject to the single relation ``a a+ = a+ a + 1``.
Every element has a unique expansion over the normal-ordered monomials
``(a+)^k a^l``; :class:`NormalForm` stores that expansion with exact integer
coefficients.  For a homogeneous element the coefficients of its powers
assemble into a generalized Stirling matrix, and for a plain word the same
coefficients are rook numbers of a Ferrers board read off the word.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from math import comb, factorial

from .errors import ParseError

CREATION = "a+"
ANNIHILATION = "a"

_TOKEN_ALIASES = {"a": ANNIHILATION, "a+": CREATION, "ad": CREATION}


@dataclass(frozen=True)
class WeylWord:
    """A word over the alphabet {a, a+}; the empty word is the algebra unit."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        for ch in self.letters:
            if ch not in (CREATION, ANNIHILATION):
                raise ValueError(f"invalid letter {ch!r}; expected {CREATION!r} or {ANNIHILATION!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(self.letters)

    @property
    def creation_count(self) -> int:
        return sum(1 for ch in self.letters if ch == CREATION)

    @property
    def annihilation_count(self) -> int:
        return sum(1 for ch in self.letters if ch == ANNIHILATION)


def parse_word(text: str) -> WeylWord:
    """Parse whitespace-separated tokens "a" / "a+" (alias "ad") into a word."""
    letters = []
    for pos, token in enumerate(text.split(), start=1):
        letter = _TOKEN_ALIASES.get(token)
        if letter is None:
            raise ParseError(f"unknown token {token!r} at position {pos}")
        letters.append(letter)
    return WeylWord(tuple(letters))


class NormalForm:
    """Integer linear combination of normal-ordered monomials (a+)^k a^l.

    Keys are pairs (k, l) of nonnegative integers; zero coefficients are never
    stored, so equality of normal forms is equality of term maps.  Instances
    are immutable and hashable.
    """

    __slots__ = ("_terms", "_key")

    def __init__(self, terms=None):
        data: dict[tuple[int, int], int] = {}
        for key, coeff in dict(terms or {}).items():
            k, l = key
            if k < 0 or l < 0:
                raise ValueError(f"negative degree in key {key!r}")
            if coeff:
                data[(int(k), int(l))] = data.get((k, l), 0) + int(coeff)
        object.__setattr__(self, "_terms", {k: c for k, c in data.items() if c})
        object.__setattr__(self, "_key", tuple(sorted(self._terms.items())))

    @classmethod
    def unit(cls) -> "NormalForm":
        return cls({(0, 0): 1})

    @classmethod
    def zero(cls) -> "NormalForm":
        return cls()

    @classmethod
    def monomial(cls, k: int, l: int, coeff: int = 1) -> "NormalForm":
        return cls({(k, l): coeff})

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def coefficient(self, k: int, l: int) -> int:
        return self._terms.get((k, l), 0)

    def items_sorted(self):
        return self._key

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalForm) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"NormalForm({dict(self._key)!r})"

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return NormalForm(out)

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + (-other)

    def __neg__(self) -> "NormalForm":
        return NormalForm({key: -c for key, c in self._terms.items()})

    def __rmul__(self, scalar: int) -> "NormalForm":
        if not isinstance(scalar, int):
            return NotImplemented
        return NormalForm({key: scalar * c for key, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        if not isinstance(other, NormalForm):
            return NotImplemented
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (k1, l1), c1 in self._terms.items():
            for (k2, l2), c2 in other._terms.items():
                # a^l1 (a+)^k2 = sum_j C(l1,j) C(k2,j) j! (a+)^(k2-j) a^(l1-j)
                for j in range(min(l1, k2) + 1):
                    out[(k1 + k2 - j, l1 + l2 - j)] += (
                        c1 * c2 * comb(l1, j) * comb(k2, j) * factorial(j)
                    )
        return NormalForm(out)

    def __pow__(self, power: int) -> "NormalForm":
        if power < 0:
            raise ValueError("power must be nonnegative")
        result = NormalForm.unit()
        for _ in range(power):
            result = result * self
        return result

    def to_lines(self) -> str:
        """Serialize as lines "k l coefficient" sorted by (k, l)."""
        return "\n".join(f"{k} {l} {c}" for (k, l), c in self._key)


def _to_normal_form(element) -> NormalForm:
    if isinstance(element, NormalForm):
        return element
    if isinstance(element, WeylWord):
        nf = NormalForm.unit()
        for ch in element.letters:
            nf = nf * (NormalForm.monomial(1, 0) if ch == CREATION else NormalForm.monomial(0, 1))
        return nf
    raise TypeError(f"expected WeylWord or NormalForm, got {type(element).__name__}")


def normal_order(element, power: int = 1) -> NormalForm:
    """Normal form of element**power in the basis (a+)^k a^l."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    return _to_normal_form(element) ** power


def normal_order_by_rewriting(word: WeylWord, rng: random.Random | None = None) -> NormalForm:
    """Normal order a word by exhaustive rewriting  a a+  ->  a+ a  +  1.

    Reference path working on explicit words; exponential in the worst case.
    The result does not depend on the rewrite order (confluence); passing a
    seeded ``rng`` picks redexes at random, which the property tests use.
    """
    pending: list[tuple[tuple[str, ...], int]] = [(word.letters, 1)]
    out: dict[tuple[int, int], int] = defaultdict(int)
    while pending:
        pick = rng.randrange(len(pending)) if rng is not None else len(pending) - 1
        w, c = pending.pop(pick)
        redexes = [i for i in range(len(w) - 1) if w[i] == ANNIHILATION and w[i + 1] == CREATION]
        if not redexes:
            k = sum(1 for ch in w if ch == CREATION)
            out[(k, len(w) - k)] += c
            continue
        i = rng.choice(redexes) if rng is not None else redexes[0]
        pending.append((w[:i] + (CREATION, ANNIHILATION) + w[i + 2:], c))
        pending.append((w[:i] + w[i + 2:], c))
    return NormalForm(out)


def excess(omega) -> int:
    """The common value k - l over the terms of a homogeneous element."""
    nf = _to_normal_form(omega)
    if nf.is_zero():
        raise ValueError("the zero element has no excess")
    values = {}
    for (k, l), _ in nf.items_sorted():
        values.setdefault(k - l, (k, l))
        if len(values) > 1:
            (e1, t1), (e2, t2) = sorted(values.items())[:2]
            raise ValueError(
                f"element is not homogeneous: term (a+)^{t1[0]} a^{t1[1]} has excess {e1} "
                f"but term (a+)^{t2[0]} a^{t2[1]} has excess {e2}"
            )
    return next(iter(values))


def _mirror(nf: NormalForm) -> NormalForm:
    # image under the anti-automorphism exchanging a <-> a+ (term-wise swap of (k, l))
    return NormalForm({(l, k): c for (k, l), c in nf.terms.items()})


@dataclass(frozen=True)
class StirlingMatrix:
    """Row-finite matrix S(n, k) of the normal-ordering coefficients of powers.

    For excess e >= 0 the normal form of the n-th power reads
    ``(a+)^(n e) * sum_k S(n, k) (a+)^k a^k``; for e < 0 the mirrored form
    ``sum_k S(n, k) (a+)^k a^k * a^(n |e|)`` holds with the same entries.
    Rows are stored with trailing zeros trimmed.
    """

    rows: tuple[tuple[int, ...], ...]
    excess: int

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> int:
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else 0

    def rightmost_column(self, n: int) -> int:
        """Column index of the rightmost nonzero entry of row n."""
        return len(self.rows[n]) - 1

    def padded_rows(self, width: int | None = None) -> list[list[int]]:
        w = width if width is not None else max(len(r) for r in self.rows)
        return [list(r) + [0] * (w - len(r)) for r in self.rows]

    def to_csv(self) -> str:
        return "\n".join(",".join(str(v) for v in row) for row in self.padded_rows())

    def to_json(self) -> str:
        import json

        return json.dumps(self.padded_rows())


def stirling_matrix(omega, n_max: int) -> StirlingMatrix:
    """Generalized Stirling matrix of a homogeneous element, rows 0..n_max.

    Powers are computed by iterated normal-form multiplication, reusing the
    previous power at each step.  The negative-excess case is reduced to the
    nonnegative one through the anti-automorphism exchanging a and a+.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    nf = _to_normal_form(omega)
    e = excess(nf)
    work = _mirror(nf) if e < 0 else nf
    ae = abs(e)
    rows = []
    power = NormalForm.unit()
    for n in range(n_max + 1):
        row: dict[int, int] = {}
        for (k, l), c in power.items_sorted():
            assert k - l == n * ae, "power of a homogeneous element must stay homogeneous"
            row[l] = c
        width = max(row) + 1
        rows.append(tuple(row.get(j, 0) for j in range(width)))
        if n < n_max:
            power = power * work
    return StirlingMatrix(tuple(rows), e)


@dataclass(frozen=True)
class RookBoard:
    """A board of lattice cells; cell (i, j) sits in row i, column j."""

    cells: frozenset[tuple[int, int]]

    @property
    def row_count(self) -> int:
        return 1 + max((i for i, _ in self.cells), default=-1)

    @property
    def column_count(self) -> int:
        return 1 + max((j for _, j in self.cells), default=-1)


def rook_board(word: WeylWord) -> RookBoard:
    """Staircase board of a word: one row per creation letter, of width equal
    to the number of annihilation letters preceding it."""
    cells = set()
    row = 0
    seen_a = 0
    for ch in word.letters:
        if ch == ANNIHILATION:
            seen_a += 1
        else:
            cells.update((row, j) for j in range(seen_a))
            row += 1
    return RookBoard(frozenset(cells))


def rook_numbers(board: RookBoard) -> tuple[int, ...]:
    """Counts r(B, k) of placements of k non-attacking rooks on the board.

    Returned up to the largest k with a nonzero count; r(B, 0) = 1 always.
    """
    by_row: dict[int, list[int]] = defaultdict(list)
    for i, j in board.cells:
        by_row[i].append(j)
    counts: dict[int, int] = defaultdict(int, {0: 1})  # used-column bitmask -> ways
    for i in sorted(by_row):
        nxt = defaultdict(int)
        for mask, ways in counts.items():
            nxt[mask] += ways  # no rook in this row
            for j in by_row[i]:
                bit = 1 << j
                if not mask & bit:
                    nxt[mask | bit] += ways
        counts = nxt
    out: dict[int, int] = defaultdict(int)
    for mask, ways in counts.items():
        out[bin(mask).count("1")] += ways
    return tuple(out[k] for k in range(max(out) + 1))


def rook_normal_form(word: WeylWord) -> NormalForm:
    """Normal form reconstructed from rook numbers:
    sum_k r(B, k) (a+)^(r-k) a^(s-k) with r, s the letter counts of the word."""
    r = word.creation_count
    s = word.annihilation_count
    numbers = rook_numbers(rook_board(word))
    return NormalForm({(r - k, s - k): c for k, c in enumerate(numbers)})
