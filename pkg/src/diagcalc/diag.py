"""Packed matrices, diagrams, and the Hopf algebra operations on them.

A packed matrix (nonnegative integers, no all-zero row or column) is the same
thing as a labelled diagram: a bipartite multigraph with a column of white
spots (one per row) and a column of black spots (one per column), entry (i, j)
giving the number of edges between white spot i and black spot j.  A Diagram
is the class of a packed matrix under independent row and column permutations,
represented canonically.

The vector spaces spanned by packed matrices (labelled diagrams) and by
diagram classes carry a product ``star`` (block-diagonal superposition), two
cocommutative coproducts ``delta_ws`` / ``delta_bs`` (splitting over subsets
of rows, respectively columns, with repacking), the counit picking out the
coefficient of the empty matrix, and the antipode computed by the usual
graded recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb

from .errors import ParseError
from .partitions import PartitionType


@dataclass(frozen=True)
class PackedMatrix:
    """Nonnegative integer matrix with no all-zero row or column.

    The empty 0x0 matrix is allowed; it is the unit of the star product.
    """

    entries: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        entries = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        widths = {len(row) for row in entries}
        if len(widths) > 1:
            raise ValueError("rows must all have the same length")
        for row in entries:
            if any(v < 0 for v in row):
                raise ValueError("entries must be nonnegative")
            if not any(row):
                raise ValueError("matrix has an all-zero row; pack() removes those")
        cols = tuple(zip(*entries)) if entries else ()
        for col in cols:
            if not any(col):
                raise ValueError("matrix has an all-zero column; pack() removes those")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def weight(self) -> int:
        """Total entry sum, the number of edges of the diagram."""
        return sum(sum(row) for row in self.entries)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries)) if self.entries else ()

    def sort_key(self):
        return (self.rows, self.cols, self.entries)

    def __str__(self) -> str:
        return format_matrix(self)


EMPTY_MATRIX = PackedMatrix()


def pack(rows) -> PackedMatrix:
    """Delete all-zero rows and columns of a raw matrix, keeping the rest in order."""
    rows = [tuple(int(v) for v in row) for row in rows]
    for row in rows:
        if any(v < 0 for v in row):
            raise ValueError("entries must be nonnegative")
    kept_rows = [row for row in rows if any(row)]
    if not kept_rows:
        return EMPTY_MATRIX
    kept_cols = [j for j in range(len(kept_rows[0])) if any(row[j] for row in kept_rows)]
    return PackedMatrix(tuple(tuple(row[j] for j in kept_cols) for row in kept_rows))


@lru_cache(maxsize=None)
def _canonical_entries(entries: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    # Minimum of the row/column-permutation orbit in row-major order.  For a
    # fixed column order the best row order is the sorted one, so it suffices
    # to scan column permutations.
    if not entries:
        return ()
    cols = list(zip(*entries))
    best = None
    for perm in permutations(range(len(cols))):
        candidate = tuple(sorted(zip(*(cols[j] for j in perm))))
        if best is None or candidate < best:
            best = candidate
    return best


@dataclass(frozen=True)
class Diagram:
    """Row/column-permutation class of a packed matrix, stored canonically."""

    matrix: PackedMatrix

    def __post_init__(self):
        if self.matrix.entries != _canonical_entries(self.matrix.entries):
            raise ValueError("representative is not canonical; use canonicalize()")

    @property
    def weight(self) -> int:
        return self.matrix.weight

    def sort_key(self):
        return self.matrix.sort_key()

    def __str__(self) -> str:
        return format_matrix(self.matrix)


EMPTY_DIAGRAM = Diagram(EMPTY_MATRIX)


def canonicalize(m: PackedMatrix) -> Diagram:
    """Class of a packed matrix; equal classes iff the matrices differ by
    independent row and column permutations."""
    return Diagram(PackedMatrix(_canonical_entries(m.entries)))


def bitype(d: PackedMatrix | Diagram) -> tuple[PartitionType, PartitionType]:
    """Multiplicity types of the row sums and of the column sums.

    Invariant under row/column permutations, so well defined on classes.
    """
    m = d.matrix if isinstance(d, Diagram) else d
    return (_sum_type(m.row_sums()), _sum_type(m.col_sums()))


def _sum_type(sums: tuple[int, ...]) -> PartitionType:
    counts = [0] * (max(sums) if sums else 0)
    for s in sums:
        counts[s - 1] += 1
    return PartitionType(counts)


def _trim(exp) -> tuple[int, ...]:
    exp = tuple(int(e) for e in exp)
    while exp and exp[-1] == 0:
        exp = exp[:-1]
    return exp


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


@dataclass(frozen=True)
class Monomial:
    """Commutative monomial L^l_exp V^v_exp y^y_deg with trimmed exponent vectors."""

    l_exp: tuple[int, ...] = ()
    v_exp: tuple[int, ...] = ()
    y_deg: int = 0

    def __post_init__(self):
        object.__setattr__(self, "l_exp", _trim(self.l_exp))
        object.__setattr__(self, "v_exp", _trim(self.v_exp))
        if self.y_deg < 0 or any(e < 0 for e in self.l_exp + self.v_exp):
            raise ValueError("exponents must be nonnegative")

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(
            _add_exp(self.l_exp, other.l_exp),
            _add_exp(self.v_exp, other.v_exp),
            self.y_deg + other.y_deg,
        )

    def sort_key(self):
        return (self.y_deg, self.l_exp, self.v_exp)

    def __str__(self) -> str:
        return format_lvy(self.l_exp, self.v_exp, self.y_deg)


MONOMIAL_ONE = Monomial()


def format_lvy(l_exp, v_exp, y_deg: int) -> str:
    parts = []
    for name, exp in (("L", l_exp), ("V", v_exp)):
        for i, e in enumerate(exp, start=1):
            if e == 1:
                parts.append(f"{name}{i}")
            elif e > 1:
                parts.append(f"{name}{i}^{e}")
    if y_deg == 1:
        parts.append("y")
    elif y_deg > 1:
        parts.append(f"y^{y_deg}")
    return " ".join(parts) if parts else "1"


def monomial(d: PackedMatrix | Diagram) -> Monomial:
    """The monomial of a diagram: L to its row-sum type, V to its column-sum
    type, y to its edge count."""
    alpha, beta = bitype(d)
    m = d.matrix if isinstance(d, Diagram) else d
    return Monomial(alpha.counts, beta.counts, m.weight)


# --- linear combinations --------------------------------------------------

def _coerce_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


class _LinComb:
    """Formal linear combination with exact rational coefficients.

    Zero coefficients are dropped, so equality is equality of term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data: dict = {}
        for key, coeff in dict(terms or {}).items():
            coeff = _coerce_fraction(coeff)
            if coeff:
                data[key] = data.get(key, Fraction(0)) + coeff
        self._terms = {k: c for k, c in data.items() if c}

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def items_sorted(self):
        return sorted(self._terms.items(), key=lambda kv: _term_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._terms == other._terms

    def __hash__(self):
        raise TypeError(f"{type(self).__name__} is not hashable")

    def __repr__(self) -> str:
        body = ", ".join(f"{c} * {k}" for k, c in self.items_sorted())
        return f"{type(self).__name__}({body})"

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return type(self)(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        if isinstance(scalar, _LinComb):
            return NotImplemented
        scalar = _coerce_fraction(scalar)
        return type(self)({key: scalar * c for key, c in self._terms.items()})


def _term_key(key):
    if isinstance(key, tuple):
        return tuple(_term_key(k) for k in key)
    return key.sort_key()


class DiagElement(_LinComb):
    """Linear combination of packed matrices or of diagram classes."""

    @classmethod
    def of(cls, basis, coeff=1) -> "DiagElement":
        return cls({basis: coeff})

    def __mul__(self, other):
        if isinstance(other, (PackedMatrix, Diagram)):
            other = DiagElement.of(other)
        if not isinstance(other, DiagElement):
            return NotImplemented
        out: dict = {}
        for d1, c1 in self._terms.items():
            for d2, c2 in other._terms.items():
                key = star(d1, d2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return DiagElement(out)

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "terms": [
                    {"matrix": str(key), "coeff": str(c)} for key, c in self.items_sorted()
                ]
            }
        )


class TensorElement(_LinComb):
    """Linear combination of ordered pairs of basis elements."""

    @classmethod
    def of(cls, left, right, coeff=1) -> "TensorElement":
        return cls({(left, right): coeff})

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        out: dict = {}
        for (a, b), c1 in self._terms.items():
            for (u, v), c2 in other._terms.items():
                key = (star(a, u), star(b, v))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return TensorElement(out)

    def flip(self) -> "TensorElement":
        return TensorElement({(b, a): c for (a, b), c in self._terms.items()})

    def to_json(self) -> str:
        import json

        return json.dumps(
            [
                {"left": str(a), "right": str(b), "coeff": str(c)}
                for (a, b), c in self.items_sorted()
            ]
        )


# --- product and coproducts ------------------------------------------------

def star(d1, d2):
    """Superposition of diagrams: block-diagonal sum of packed matrices.

    Associative, with the empty diagram as unit; on classes the blocks are
    the canonical representatives and the result is canonicalized again.
    Linear combinations multiply bilinearly.
    """
    if isinstance(d1, PackedMatrix) and isinstance(d2, PackedMatrix):
        return _block_diag(d1, d2)
    if isinstance(d1, Diagram) and isinstance(d2, Diagram):
        return canonicalize(_block_diag(d1.matrix, d2.matrix))
    if isinstance(d1, (PackedMatrix, Diagram)) and isinstance(d2, (PackedMatrix, Diagram)):
        raise TypeError("cannot mix labelled and unlabelled bases in a product")
    left = d1 if isinstance(d1, DiagElement) else DiagElement.of(d1)
    right = d2 if isinstance(d2, DiagElement) else DiagElement.of(d2)
    return left * right


def _block_diag(m1: PackedMatrix, m2: PackedMatrix) -> PackedMatrix:
    if not m1.entries:
        return m2
    if not m2.entries:
        return m1
    top = tuple(row + (0,) * m2.cols for row in m1.entries)
    bottom = tuple((0,) * m1.cols + row for row in m2.entries)
    return PackedMatrix(top + bottom)


def _restrict_rows(m: PackedMatrix, keep: tuple[int, ...]) -> PackedMatrix:
    rows = [m.entries[i] for i in keep]
    if not rows:
        return EMPTY_MATRIX
    # kept rows are nonzero, so only columns can need packing
    cols = [j for j in range(m.cols) if any(row[j] for row in rows)]
    return PackedMatrix(tuple(tuple(row[j] for j in cols) for row in rows))


def _restrict_cols(m: PackedMatrix, keep: tuple[int, ...]) -> PackedMatrix:
    if not keep:
        return EMPTY_MATRIX
    rows = [tuple(row[j] for j in keep) for row in m.entries]
    return PackedMatrix(tuple(row for row in rows if any(row)))


def _delta_matrix(m: PackedMatrix, restrict) -> TensorElement:
    count = m.rows if restrict is _restrict_rows else m.cols
    out: dict = {}
    for mask in range(1 << count):
        inside = tuple(i for i in range(count) if mask >> i & 1)
        outside = tuple(i for i in range(count) if not mask >> i & 1)
        key = (restrict(m, inside), restrict(m, outside))
        out[key] = out.get(key, 0) + 1
    return TensorElement(out)


def _delta(x, restrict) -> TensorElement:
    if isinstance(x, PackedMatrix):
        return _delta_matrix(x, restrict)
    if isinstance(x, Diagram):
        out: dict = {}
        for (a, b), c in _delta_matrix(x.matrix, restrict).terms.items():
            key = (canonicalize(a), canonicalize(b))
            out[key] = out.get(key, Fraction(0)) + c
        return TensorElement(out)
    if isinstance(x, DiagElement):
        out = TensorElement()
        for d, c in x.terms.items():
            out = out + c * _delta(d, restrict)
        return out
    raise TypeError(f"cannot take a coproduct of {type(x).__name__}")


def delta_ws(x) -> TensorElement:
    """Coproduct over white spots: sum over all ordered complementary row
    subsets (X, Y) of the horizontally packed restrictions to X and Y."""
    return _delta(x, _restrict_rows)


def delta_bs(x) -> TensorElement:
    """Coproduct over black spots: the same splitting applied to columns."""
    return _delta(x, _restrict_cols)


def counit(x) -> Fraction:
    """Coefficient of the empty diagram."""
    if isinstance(x, (PackedMatrix, Diagram)):
        return Fraction(1 if x.weight == 0 else 0)
    if isinstance(x, DiagElement):
        return x.coefficient(_unit_basis_like(x))
    raise TypeError(f"cannot take the counit of {type(x).__name__}")


def _unit_basis_like(x: DiagElement):
    for d in x.terms:
        return EMPTY_DIAGRAM if isinstance(d, Diagram) else EMPTY_MATRIX
    return EMPTY_MATRIX


# keyed by (basis element, side); dict get/set are atomic under the GIL, and a
# lost race only recomputes an immutable value
_ANTIPODE_CACHE: dict = {}


def antipode(x, side: str = "ws") -> DiagElement:
    """Convolution inverse of the identity, by the graded recursion
    S(d) = -d - sum S(d') star d'' over the reduced coproduct of d."""
    if side not in ("ws", "bs"):
        raise ValueError("side must be 'ws' or 'bs'")
    if isinstance(x, (PackedMatrix, Diagram)):
        return _antipode_basis(x, side)
    if isinstance(x, DiagElement):
        out = DiagElement()
        for d, c in x.terms.items():
            out = out + c * _antipode_basis(d, side)
        return out
    raise TypeError(f"cannot take the antipode of {type(x).__name__}")


def _antipode_basis(d, side: str) -> DiagElement:
    if d.weight == 0:
        return DiagElement.of(d)
    key = (d, side)
    cached = _ANTIPODE_CACHE.get(key)
    if cached is not None:
        return cached
    delta = delta_ws(d) if side == "ws" else delta_bs(d)
    acc = -1 * DiagElement.of(d)
    for (a, b), c in delta.terms.items():
        if a.weight == 0 or b.weight == 0:
            continue
        acc = acc - c * (_antipode_basis(a, side) * DiagElement.of(b))
    _ANTIPODE_CACHE[key] = acc
    return acc


def double_variables(m: Monomial) -> TensorElement:
    """Coproduct of a monomial: replace every variable z by z' + z'', expand,
    and separate the primed part (left) from the double-primed part (right)."""
    exps = list(m.l_exp) + list(m.v_exp) + [m.y_deg]
    nl, nv = len(m.l_exp), len(m.v_exp)
    out: dict = {}
    for split in product(*(range(e + 1) for e in exps)):
        coeff = 1
        for e, i in zip(exps, split):
            coeff *= comb(e, i)
        left = Monomial(split[:nl], split[nl : nl + nv], split[-1])
        right = Monomial(
            tuple(e - i for e, i in zip(m.l_exp, split[:nl])),
            tuple(e - i for e, i in zip(m.v_exp, split[nl : nl + nv])),
            m.y_deg - split[-1],
        )
        key = (left, right)
        out[key] = out.get(key, 0) + coeff
    return TensorElement(out)


# --- enumeration by weight --------------------------------------------------

def _compositions(total: int, parts: int, minimum: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def packed_matrices_of_weight(n: int) -> list[PackedMatrix]:
    """All packed matrices with entry sum n, in a deterministic order."""
    if n < 0:
        raise ValueError("weight must be nonnegative")
    if n == 0:
        return [EMPTY_MATRIX]
    found = []
    for r in range(1, n + 1):
        for row_sums in _compositions(n, r, 1):
            for c in range(1, n + 1):
                for rows in product(*(_compositions(s, c, 0) for s in row_sums)):
                    if all(any(row[j] for row in rows) for j in range(c)):
                        found.append(PackedMatrix(rows))
    found.sort(key=PackedMatrix.sort_key)
    return found


def diagrams_of_weight(n: int) -> list[Diagram]:
    """All diagram classes with n edges, in a deterministic order."""
    classes = {canonicalize(m) for m in packed_matrices_of_weight(n)}
    return sorted(classes, key=Diagram.sort_key)


# --- text formats ------------------------------------------------------------

def format_matrix(m: PackedMatrix | Diagram) -> str:
    """Rows separated by ';', entries by spaces; the empty matrix is "[]"."""
    if isinstance(m, Diagram):
        m = m.matrix
    if not m.entries:
        return "[]"
    return ";".join(" ".join(str(v) for v in row) for row in m.entries)


def parse_matrix(text: str) -> PackedMatrix:
    """Inverse of format_matrix; the input must already be packed."""
    text = text.strip()
    if text in ("", "[]"):
        return EMPTY_MATRIX
    rows = []
    for row_text in text.split(";"):
        try:
            rows.append(tuple(int(tok) for tok in row_text.split()))
        except ValueError as exc:
            raise ParseError(f"invalid matrix row {row_text.strip()!r}") from exc
    try:
        return PackedMatrix(tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def to_dot(d: PackedMatrix | Diagram, name: str = "diagram") -> str:
    """Graphviz rendering of the bipartite multigraph: white spots unfilled,
    black spots filled, one parallel edge per unit of the entry."""
    m = d.matrix if isinstance(d, Diagram) else d
    lines = [f"graph {name} {{", "  rankdir=LR;"]
    for i in range(m.rows):
        lines.append(f'  w{i + 1} [shape=circle, style=solid, label="w{i + 1}"];')
    for j in range(m.cols):
        lines.append(
            f'  b{j + 1} [shape=circle, style=filled, fillcolor=black, '
            f'fontcolor=white, label="b{j + 1}"];'
        )
    for i, row in enumerate(m.entries):
        for j, v in enumerate(row):
            for _ in range(v):
                lines.append(f"  w{i + 1} -- b{j + 1};")
    lines.append("}")
    return "\n".join(lines)
