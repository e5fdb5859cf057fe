"""Brute-force oracles connecting the series, partition and diagram layers.

Two independent expansions of the same two-alphabet generating identity are
computed here: one through Bell polynomials and Faa di Bruno coefficients,
the other by enumerating pairs of set partitions, mapping each pair to its
intersection-matrix class and tallying multiplicities.  Agreement of the two
is the central cross-check of the library.  A configurable axiom suite also
checks the Hopf algebra laws concretely on small diagrams.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import diag
from .diag import (
    DiagElement,
    Diagram,
    PackedMatrix,
    antipode,
    bitype,
    canonicalize,
    counit,
    delta_bs,
    delta_ws,
    format_lvy,
    star,
)
from .errors import BoundError
from .partitions import complete_bell, enumerate_partitions, intersection_matrix, orderings

DEFAULT_PAIR_BOUND = 6
_BOUND_ENV_VAR = "DIAGCALC_ENUM_BOUND"


def pair_enumeration_bound() -> int:
    """Largest ground-set size for exhaustive partition-pair enumeration.

    Defaults to 6; the DIAGCALC_ENUM_BOUND environment variable overrides it.
    """
    raw = os.environ.get(_BOUND_ENV_VAR)
    if raw is None:
        return DEFAULT_PAIR_BOUND
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{_BOUND_ENV_VAR} must be an integer, got {raw!r}") from exc


class BiPolynomial:
    """Polynomial in the L and V alphabets and y, with exact rational
    coefficients keyed by (l_exp, v_exp, y_deg)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data: dict[tuple[tuple[int, ...], tuple[int, ...], int], Fraction] = {}
        for key, coeff in dict(terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                l_exp, v_exp, y_deg = key
                norm = (diag._trim(l_exp), diag._trim(v_exp), int(y_deg))
                data[norm] = data.get(norm, Fraction(0)) + coeff
        self._terms = {k: c for k, c in data.items() if c}

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, l_exp, v_exp, y_deg) -> Fraction:
        return self._terms.get((diag._trim(l_exp), diag._trim(v_exp), int(y_deg)), Fraction(0))

    def items_sorted(self):
        return sorted(self._terms.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPolynomial) and self._terms == other._terms

    def __add__(self, other: "BiPolynomial") -> "BiPolynomial":
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BiPolynomial(out)

    def __repr__(self) -> str:
        return f"BiPolynomial({len(self._terms)} terms)"

    def to_text(self) -> str:
        lines = [
            f"{c}\t{format_lvy(l_exp, v_exp, y_deg)}"
            for (l_exp, v_exp, y_deg), c in self.items_sorted()
        ]
        return "\n".join(lines)


def expand_direct(n_max: int) -> BiPolynomial:
    """Order-by-order expansion through Bell polynomials: the y^n / n! term is
    the sum over type pairs of equal weight of the product of their Faa di
    Bruno coefficients times L^alpha V^beta."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > pair_enumeration_bound():
        raise BoundError(f"expansion bounded at n = {pair_enumeration_bound()}")
    terms: dict = {}
    for n in range(n_max + 1):
        bell = complete_bell(n)
        scale = Fraction(1, factorial(n))
        for alpha, ca in bell.items():
            for beta, cb in bell.items():
                key = (alpha.counts, beta.counts, n)
                terms[key] = terms.get(key, Fraction(0)) + scale * ca * cb
    return BiPolynomial(terms)


def diagram_multiplicities(n: int) -> dict[Diagram, int]:
    """Multiplicity of every diagram with n edges: the number of pairs of
    unordered partitions of {1..n} whose intersection-matrix class it is."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > pair_enumeration_bound():
        raise BoundError(f"pair enumeration bounded at n = {pair_enumeration_bound()}")
    parts = [next(orderings(q)) for q in enumerate_partitions(n)]
    tally: dict[Diagram, int] = {}
    for p1 in parts:
        for p2 in parts:
            d = canonicalize(intersection_matrix(p1, p2))
            tally[d] = tally.get(d, 0) + 1
    return tally


def multiplicity(d: Diagram, n: int) -> int:
    """Brute-force multiplicity of one diagram among partition pairs of {1..n}."""
    if n != d.weight:
        raise ValueError(f"diagram has {d.weight} edges but n = {n}")
    return diagram_multiplicities(n).get(d, 0)


def labelled_multiplicities(n: int) -> dict[PackedMatrix, int]:
    """Number of ordered partition pairs mapping to each packed matrix.

    The row/column permutation group acts on the ordered preimages of an
    unordered pair with uniform fibers, so each orbit member receives
    mult(class) * |stabilizer| ordered pairs.
    """
    out: dict[PackedMatrix, int] = {}
    for d, mult in diagram_multiplicities(n).items():
        stab = _stabilizer_order(d.matrix)
        for m in _orbit(d.matrix):
            out[m] = mult * stab
    return out


def _orbit(m: PackedMatrix) -> set[PackedMatrix]:
    from itertools import permutations

    seen = set()
    if not m.entries:
        return {m}
    for rperm in permutations(range(m.rows)):
        rows = [m.entries[i] for i in rperm]
        for cperm in permutations(range(m.cols)):
            seen.add(PackedMatrix(tuple(tuple(row[j] for j in cperm) for row in rows)))
    return seen


def _stabilizer_order(m: PackedMatrix) -> int:
    if not m.entries:
        return 1
    return factorial(m.rows) * factorial(m.cols) // len(_orbit(m))


def expand_by_diagrams(n_max: int) -> BiPolynomial:
    """The same expansion tallied over diagrams: the y^n / n! term is the sum
    over diagrams with n edges of multiplicity times L^alpha V^beta."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > pair_enumeration_bound():
        raise BoundError(f"expansion bounded at n = {pair_enumeration_bound()}")
    terms: dict = {}
    for n in range(n_max + 1):
        scale = Fraction(1, factorial(n))
        for d, mult in diagram_multiplicities(n).items():
            alpha, beta = bitype(d)
            key = (alpha.counts, beta.counts, n)
            terms[key] = terms.get(key, Fraction(0)) + scale * mult
    return BiPolynomial(terms)


# --- axiom checks ------------------------------------------------------------

def _triple_left(x, delta) -> dict:
    out: dict = {}
    for (a, b), c in delta(x).terms.items():
        for (u, v), c2 in delta(a).terms.items():
            key = (u, v, b)
            out[key] = out.get(key, Fraction(0)) + c * c2
    return {k: c for k, c in out.items() if c}


def _triple_right(x, delta) -> dict:
    out: dict = {}
    for (a, b), c in delta(x).terms.items():
        for (u, v), c2 in delta(b).terms.items():
            key = (a, u, v)
            out[key] = out.get(key, Fraction(0)) + c * c2
    return {k: c for k, c in out.items() if c}


def coassociativity_failure(x, delta) -> str | None:
    if _triple_left(x, delta) != _triple_right(x, delta):
        return f"coassociativity fails on {_describe(x)}"
    return None


def counit_failure(x, delta, counit_fn) -> str | None:
    element = x if isinstance(x, DiagElement) else DiagElement.of(x)
    left = DiagElement()
    right = DiagElement()
    for (a, b), c in delta(x).terms.items():
        left = left + (c * counit_fn(a)) * DiagElement.of(b)
        right = right + (c * counit_fn(b)) * DiagElement.of(a)
    if left != element or right != element:
        return f"counit law fails on {_describe(x)}"
    return None


def cocommutativity_failure(x, delta) -> str | None:
    d = delta(x)
    if d != d.flip():
        return f"cocommutativity fails on {_describe(x)}"
    return None


def multiplicativity_failure(x, y, delta) -> str | None:
    if delta(star(x, y)) != delta(x) * delta(y):
        return f"coproduct multiplicativity fails on {_describe(x)} and {_describe(y)}"
    return None


def antipode_failure(x, delta, antipode_fn, counit_fn, unit) -> str | None:
    expected = counit_fn(x) * DiagElement.of(unit)
    left = DiagElement()
    right = DiagElement()
    for (a, b), c in delta(x).terms.items():
        left = left + c * (antipode_fn(a) * DiagElement.of(b))
        right = right + c * (DiagElement.of(a) * antipode_fn(b))
    if left != expected:
        return f"left antipode identity fails on {_describe(x)}"
    if right != expected:
        return f"right antipode identity fails on {_describe(x)}"
    return None


def associativity_failure(x, y, z) -> str | None:
    if star(star(x, y), z) != star(x, star(y, z)):
        return f"associativity fails on {_describe(x)}, {_describe(y)}, {_describe(z)}"
    return None


def unit_failure(x, unit) -> str | None:
    element = x if isinstance(x, DiagElement) else DiagElement.of(x)
    left = star(DiagElement.of(unit), element)
    right = star(element, DiagElement.of(unit))
    if left != element or right != element:
        return f"unit law fails on {_describe(x)}"
    return None


def _describe(x) -> str:
    if isinstance(x, (PackedMatrix, Diagram)):
        return repr(str(x))
    return "element " + "; ".join(f"{c} * {k}" for k, c in x.items_sorted())


@dataclass
class AxiomResult:
    axiom: str
    algebra: str
    weight: int
    status: str
    counterexample: str | None = None


@dataclass
class HopfReport:
    entries: list[AxiomResult]

    @property
    def all_passed(self) -> bool:
        return all(entry.status == "pass" for entry in self.entries)

    def to_json(self) -> str:
        payload = []
        for entry in self.entries:
            item = {
                "axiom": entry.axiom,
                "algebra": entry.algebra,
                "weight": entry.weight,
                "status": entry.status,
            }
            if entry.counterexample is not None:
                item["counterexample"] = entry.counterexample
            payload.append(item)
        return json.dumps(payload, indent=2)


def _random_element(rng: random.Random, pool) -> DiagElement:
    terms = {}
    for _ in range(rng.randint(1, 3)):
        basis = rng.choice(pool)
        coeff = Fraction(rng.choice([c for c in range(-9, 10) if c]), rng.randint(1, 9))
        terms[basis] = terms.get(basis, Fraction(0)) + coeff
    element = DiagElement(terms)
    return element if not element.is_zero() else DiagElement.of(pool[0])


def hopf_axiom_suite(max_weight: int, sample_count: int = 100, rng_seed: int = 0) -> HopfReport:
    """Concrete check of the bialgebra and Hopf axioms on small diagrams.

    Exhaustive over all basis diagrams whose total weight stays within
    max_weight (pairs and triples are bounded by their combined weight),
    plus seeded random rational combinations, for the labelled and the
    unlabelled algebra and for both coproducts.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be nonnegative")
    if max_weight > 5:
        raise ValueError("the axiom suite is bounded at max_weight = 5")
    rng = random.Random(rng_seed)
    entries: list[AxiomResult] = []

    graded_l = [diag.packed_matrices_of_weight(w) for w in range(max_weight + 1)]
    graded_u = [diag.diagrams_of_weight(w) for w in range(max_weight + 1)]

    for algebra, graded, unit in (
        ("LDiag", graded_l, diag.EMPTY_MATRIX),
        ("Diag", graded_u, diag.EMPTY_DIAGRAM),
    ):
        basis = [d for level in graded for d in level]
        randoms = [_random_element(rng, basis) for _ in range(sample_count)]
        pairs = [
            (x, y)
            for wx, level_x in enumerate(graded)
            for x in level_x
            for wy in range(max_weight - wx + 1)
            for y in graded[wy]
        ]
        triples = [
            (x, y, z)
            for wx, level_x in enumerate(graded)
            for x in level_x
            for wy in range(max_weight - wx + 1)
            for y in graded[wy]
            for wz in range(max_weight - wx - wy + 1)
            for z in graded[wz]
        ]

        def run(axiom: str, failures) -> None:
            counterexample = next((f for f in failures if f is not None), None)
            entries.append(
                AxiomResult(
                    axiom=axiom,
                    algebra=algebra,
                    weight=max_weight,
                    status="pass" if counterexample is None else "fail",
                    counterexample=counterexample,
                )
            )

        run("product-associativity", (associativity_failure(x, y, z) for x, y, z in triples))
        run("product-unit", (unit_failure(x, unit) for x in basis + randoms))
        for side, delta in (("ws", delta_ws), ("bs", delta_bs)):
            anti = lambda v, _side=side: antipode(v, side=_side)
            run(
                f"coassociativity-{side}",
                (coassociativity_failure(x, delta) for x in basis + randoms),
            )
            run(
                f"counit-{side}",
                (counit_failure(x, delta, counit) for x in basis + randoms),
            )
            run(
                f"cocommutativity-{side}",
                (cocommutativity_failure(x, delta) for x in basis + randoms),
            )
            run(
                f"coproduct-multiplicativity-{side}",
                (multiplicativity_failure(x, y, delta) for x, y in pairs),
            )
            run(
                f"antipode-{side}",
                (antipode_failure(x, delta, anti, counit, unit) for x in basis + randoms),
            )
    return HopfReport(entries)
