"""Exact truncated calculus of exponential generating functions.

A series is stored through its EGF coefficients a_0..a_N (the series being
sum a_n x^n / n!) as exact rationals at an explicit truncation order N.
Row-finite matrices act on series coefficient vectors; the matrices induced
by substitution (unit-slope series vanishing at 0) are unipotent and admit
exact powers for every rational exponent through the nilpotent logarithm.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import ParseError

Rat = Fraction | int


def _frac_tuple(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


class Egf:
    """Truncated EGF with exact rational coefficients.

    Binary operations require equal truncation orders; nothing ever changes
    the order silently.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = _frac_tuple(coeffs)
        if not coeffs:
            raise ValueError("an Egf stores at least the constant coefficient")
        self.coeffs = coeffs

    @classmethod
    def zero(cls, order: int) -> "Egf":
        return cls((0,) * (order + 1))

    @classmethod
    def constant(cls, value: Rat, order: int) -> "Egf":
        return cls((Fraction(value),) + (Fraction(0),) * order)

    @classmethod
    def x(cls, order: int) -> "Egf":
        if order < 1:
            raise ValueError("the coordinate series needs order >= 1")
        return cls((0, 1) + (0,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Egf) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Egf({[str(c) for c in self.coeffs]})"

    def _require_same_order(self, other: "Egf"):
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "Egf") -> "Egf":
        self._require_same_order(other)
        return Egf(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "Egf") -> "Egf":
        self._require_same_order(other)
        return Egf(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "Egf":
        return Egf(-a for a in self.coeffs)

    def scale(self, factor: Rat) -> "Egf":
        factor = Fraction(factor)
        return Egf(factor * a for a in self.coeffs)

    def __mul__(self, other: "Egf") -> "Egf":
        self._require_same_order(other)
        n_top = self.order
        return Egf(
            sum(comb(n, k) * self.coeffs[k] * other.coeffs[n - k] for k in range(n + 1))
            for n in range(n_top + 1)
        )

    # ordinary (power series) coefficients, used by composition and powers
    def _ordinary(self) -> tuple[Fraction, ...]:
        return tuple(a / factorial(n) for n, a in enumerate(self.coeffs))

    @classmethod
    def _from_ordinary(cls, ordinary) -> "Egf":
        return cls(c * factorial(n) for n, c in enumerate(ordinary))

    def compose(self, inner: "Egf") -> "Egf":
        """Composition self(inner(x)); the inner series must vanish at 0."""
        self._require_same_order(inner)
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n_top = self.order
        g_ord = inner._ordinary()
        acc = [Fraction(0)] * (n_top + 1)
        power = [Fraction(1)] + [Fraction(0)] * n_top
        for m in range(n_top + 1):
            fm = self.coeffs[m] / factorial(m)
            if fm:
                for i, c in enumerate(power):
                    acc[i] += fm * c
            if m < n_top:
                power = _poly_mul(power, g_ord, n_top)
        return Egf._from_ordinary(acc)

    def exp(self) -> "Egf":
        """Exponential of a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a series with zero constant term")
        n_top = self.order
        f_ord = self._ordinary()
        acc = [Fraction(0)] * (n_top + 1)
        acc[0] = Fraction(1)
        power = [Fraction(1)] + [Fraction(0)] * n_top
        for j in range(1, n_top + 1):
            power = _poly_mul(power, f_ord, n_top)
            inv = Fraction(1, factorial(j))
            for i, c in enumerate(power):
                acc[i] += inv * c
        return Egf._from_ordinary(acc)

    def log(self) -> "Egf":
        """Logarithm of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs a series with constant term 1")
        n_top = self.order
        u = list(self._ordinary())
        u[0] = Fraction(0)
        acc = [Fraction(0)] * (n_top + 1)
        power = [Fraction(1)] + [Fraction(0)] * n_top
        for j in range(1, n_top + 1):
            power = _poly_mul(power, u, n_top)
            sign = Fraction(1, j) if j % 2 else Fraction(-1, j)
            for i, c in enumerate(power):
                acc[i] += sign * c
        return Egf._from_ordinary(acc)

    def truncate(self, order: int) -> "Egf":
        """Drop coefficients beyond the given (smaller or equal) order."""
        if order < 0 or order > self.order:
            raise ValueError(f"cannot truncate order {self.order} to {order}")
        return Egf(self.coeffs[: order + 1])

    def to_json(self) -> str:
        import json

        return json.dumps({"order": self.order, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "Egf":
        import json

        data = json.loads(text)
        f = cls(Fraction(c) for c in data["coeffs"])
        if f.order != data["order"]:
            raise ValueError("order field disagrees with coefficient count")
        return f


def _poly_mul(p: list[Fraction], q, n_top: int) -> list[Fraction]:
    out = [Fraction(0)] * (n_top + 1)
    for i, a in enumerate(p):
        if a:
            for j in range(n_top + 1 - i):
                if q[j]:
                    out[i + j] += a * q[j]
    return out


def hadamard(f: Egf, g: Egf) -> Egf:
    """Coefficient-wise product; exp(x) (all coefficients 1) is the unit."""
    f._require_same_order(g)
    return Egf(a * b for a, b in zip(f.coeffs, g.coeffs))


def exponential_formula(connected: Egf) -> Egf:
    """Series of all structures from the series of connected ones: exp of it."""
    if connected.coeffs[0] != 0:
        raise ValueError("the connected-structure series must have zero constant term")
    return connected.exp()


class RowFiniteMatrix:
    """Square (N+1)x(N+1) matrix of exact rationals acting on EGF coefficients."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(_frac_tuple(r) for r in rows)
        if not rows:
            raise ValueError("matrix needs at least one row")
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square after truncation")
        self.rows = rows

    @classmethod
    def identity(cls, order: int) -> "RowFiniteMatrix":
        return cls(
            tuple(Fraction(1 if i == j else 0) for j in range(order + 1))
            for i in range(order + 1)
        )

    @classmethod
    def zeros(cls, order: int) -> "RowFiniteMatrix":
        return cls(((Fraction(0),) * (order + 1),) * (order + 1))

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> Fraction:
        return self.rows[n][k]

    def __eq__(self, other) -> bool:
        return isinstance(other, RowFiniteMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(order={self.order})"

    def __matmul__(self, other: "RowFiniteMatrix") -> "RowFiniteMatrix":
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        cols = tuple(zip(*other.rows))
        rows = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows
        )
        # unipotent matrices are closed under the product
        if isinstance(self, SubstitutionMatrix) and isinstance(other, SubstitutionMatrix):
            return SubstitutionMatrix(rows)
        return RowFiniteMatrix(rows)

    def apply(self, f: Egf) -> Egf:
        """Transform of a series: b_n = sum_k M(n, k) a_k."""
        if self.order != f.order:
            raise ValueError(f"order mismatch: matrix {self.order} vs series {f.order}")
        return Egf(sum(m * a for m, a in zip(row, f.coeffs)) for row in self.rows)

    def to_csv(self) -> str:
        return "\n".join(",".join(str(v) for v in row) for row in self.rows)


def _is_unipotent(rows) -> bool:
    return all(
        row[j] == (1 if i == j else 0)
        for i, row in enumerate(rows)
        for j in range(i, len(rows))
    )


class SubstitutionMatrix(RowFiniteMatrix):
    """Lower-triangular matrix with unit diagonal; encodes composition with a
    series f having f(0) = 0 and f'(0) = 1."""

    def __init__(self, rows):
        super().__init__(rows)
        if not _is_unipotent(self.rows):
            raise ValueError("matrix is not unipotent lower-triangular")


def apply_matrix(matrix: RowFiniteMatrix, f: Egf) -> Egf:
    return matrix.apply(f)


def substitution_matrix(f: Egf) -> SubstitutionMatrix:
    """Matrix M(n, k) = (n!/k!) [x^n] f(x)^k of the substitution g -> g o f.

    Requires f(0) = 0 and f'(0) = 1, which makes the matrix unipotent.
    """
    if f.coeffs[0] != 0:
        raise ValueError("substitution needs f(0) = 0")
    if f.coeffs[1] != 1:
        raise ValueError("substitution needs f'(0) = 1")
    n_top = f.order
    f_ord = list(f._ordinary())
    rows = [[Fraction(0)] * (n_top + 1) for _ in range(n_top + 1)]
    power = [Fraction(1)] + [Fraction(0)] * n_top
    for k in range(n_top + 1):
        for n in range(n_top + 1):
            if power[n]:
                rows[n][k] = Fraction(factorial(n), factorial(k)) * power[n]
        if k < n_top:
            power = _poly_mul(power, f_ord, n_top)
    return SubstitutionMatrix(rows)


def matrix_log(matrix: SubstitutionMatrix) -> RowFiniteMatrix:
    """Logarithm of a unipotent matrix; a finite sum since M - I is nilpotent."""
    n_top = matrix.order
    x = RowFiniteMatrix(
        tuple(v - (1 if i == j else 0) for j, v in enumerate(row))
        for i, row in enumerate(matrix.rows)
    )
    acc = RowFiniteMatrix.zeros(n_top)
    power = RowFiniteMatrix.identity(n_top)
    for j in range(1, n_top + 1):
        power = power @ x
        sign = Fraction(1, j) if j % 2 else Fraction(-1, j)
        acc = RowFiniteMatrix(
            tuple(a + sign * b for a, b in zip(ra, rb)) for ra, rb in zip(acc.rows, power.rows)
        )
    return acc


def one_param_power(matrix: SubstitutionMatrix, exponent: Rat) -> SubstitutionMatrix:
    """Exact power M^t = exp(t log M) for any rational t.

    Both series are finite because M - I (hence log M) is strictly lower
    triangular at the truncation order; the powers of M form a one-parameter
    group of substitution matrices.
    """
    if not isinstance(matrix, SubstitutionMatrix):
        raise ValueError("fractional powers need a unipotent substitution matrix")
    exponent = Fraction(exponent)
    n_top = matrix.order
    gen = matrix_log(matrix)
    scaled = RowFiniteMatrix(tuple(exponent * v for v in row) for row in gen.rows)
    acc = RowFiniteMatrix.identity(n_top)
    power = RowFiniteMatrix.identity(n_top)
    for j in range(1, n_top + 1):
        power = power @ scaled
        inv = Fraction(1, factorial(j))
        acc = RowFiniteMatrix(
            tuple(a + inv * b for a, b in zip(ra, rb)) for ra, rb in zip(acc.rows, power.rows)
        )
    return SubstitutionMatrix(acc.rows)


# --- tiny series-expression grammar -------------------------------------
#   expr   := ['-'] term (('+' | '-') term)*
#   term   := factor ('*' factor)*
#   factor := 'x' | 'exp' '(' expr ')' | 'log' '(' expr ')'
#           | INT ['/' INT] | '(' expr ')'

def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch in "()+-*/":
            tokens.append(ch)
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} in series expression")
    return tokens


class _SeriesParser:
    def __init__(self, tokens: list[str], order: int):
        self.tokens = tokens
        self.pos = 0
        self.order = order

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of series expression")
        self.pos += 1
        return tok

    def expect(self, token: str):
        tok = self.take()
        if tok != token:
            raise ParseError(f"expected {token!r} but found {tok!r}")

    def parse_expr(self) -> Egf:
        negate = False
        if self.peek() == "-":
            self.take()
            negate = True
        value = self.parse_term()
        if negate:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> Egf:
        value = self.parse_factor()
        while self.peek() == "*":
            self.take()
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> Egf:
        tok = self.take()
        if tok == "x":
            return Egf.x(self.order)
        if tok in ("exp", "log"):
            self.expect("(")
            inner = self.parse_expr()
            self.expect(")")
            try:
                return inner.exp() if tok == "exp" else inner.log()
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        if tok == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.isdigit():
            if self.peek() == "/":
                self.take()
                den = self.take()
                if not den.isdigit():
                    raise ParseError(f"expected an integer denominator, found {den!r}")
                return Egf.constant(Fraction(int(tok), int(den)), self.order)
            return Egf.constant(int(tok), self.order)
        raise ParseError(f"unexpected token {tok!r} in series expression")


def parse_series(text: str, order: int) -> Egf:
    """Evaluate a series expression ("exp(x)-1", "log(1+x)", "2*x", ...) at the
    given truncation order."""
    if order < 1:
        raise ValueError("series expressions need order >= 1")
    parser = _SeriesParser(_tokenize(text), order)
    value = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input starting at {parser.peek()!r}")
    return value
