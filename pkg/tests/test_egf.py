import random
from fractions import Fraction
from math import factorial

import pytest

from diagcalc.egf import (
    Egf,
    RowFiniteMatrix,
    SubstitutionMatrix,
    apply_matrix,
    exponential_formula,
    hadamard,
    matrix_log,
    one_param_power,
    parse_series,
    substitution_matrix,
)
from diagcalc.errors import ParseError

import oracles


def exp_x(order):
    return parse_series("exp(x)", order)


def random_series(rng, order, constant=None):
    coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(order + 1)]
    if constant is not None:
        coeffs[0] = Fraction(constant)
    return Egf(coeffs)


class TestEgfBasics:
    def test_order_and_storage(self):
        f = Egf([1, 2, 3])
        assert f.order == 2
        assert f.coeffs == (Fraction(1), Fraction(2), Fraction(3))

    def test_order_mismatch_rejected(self):
        with pytest.raises(ValueError, match="order mismatch"):
            Egf([1, 2]) + Egf([1, 2, 3])

    def test_truncate(self):
        f = Egf([5, 1, 4, 1])
        assert f.truncate(0) == Egf([5])
        with pytest.raises(ValueError):
            f.truncate(7)

    def test_product_is_binomial_convolution(self):
        # (e^x)^2 has EGF coefficients 2^n
        e = exp_x(6)
        assert (e * e).coeffs == tuple(Fraction(2**n) for n in range(7))

    def test_json_round_trip(self):
        f = Egf([Fraction(1, 3), 2, Fraction(-5, 7)])
        assert Egf.from_json(f.to_json()) == f


class TestHadamard:
    def test_exp_is_idempotent(self):
        e = exp_x(8)
        assert hadamard(e, e) == e

    def test_ordinary_geometric(self):
        f = Egf([factorial(n) for n in range(7)])
        assert hadamard(f, f).coeffs == tuple(Fraction(factorial(n) ** 2) for n in range(7))

    def test_exp_is_unit(self):
        rng = random.Random(3)
        f = random_series(rng, 8)
        assert hadamard(f, exp_x(8)) == f

    def test_commutative_associative(self):
        rng = random.Random(4)
        for _ in range(20):
            f, g, h = (random_series(rng, 10) for _ in range(3))
            assert hadamard(f, g) == hadamard(g, f)
            assert hadamard(hadamard(f, g), h) == hadamard(f, hadamard(g, h))


class TestApplyMatrix:
    def test_identity(self):
        rng = random.Random(5)
        f = random_series(rng, 6)
        assert apply_matrix(RowFiniteMatrix.identity(6), f) == f

    def test_zero(self):
        rng = random.Random(6)
        f = random_series(rng, 6)
        assert apply_matrix(RowFiniteMatrix.zeros(6), f) == Egf.zero(6)

    def test_stirling_transform_gives_bell_numbers(self):
        # frozen from the brute-force partition count: B_0..B_6
        bells = [oracles.bell_number(n) for n in range(7)]
        assert bells == [1, 1, 2, 5, 15, 52, 203]
        m = substitution_matrix(parse_series("exp(x)-1", 6))
        transformed = apply_matrix(m, exp_x(6))
        assert transformed.coeffs == tuple(Fraction(b) for b in bells)

    def test_normal_ordering_matrix_gives_same_transform(self):
        # the generalized Stirling matrix of the number operator induces the
        # same transform as the substitution matrix of exp(x)-1
        from diagcalc.weyl import parse_word, stirling_matrix

        s = stirling_matrix(parse_word("a+ a"), 6)
        m = RowFiniteMatrix(s.padded_rows(7))
        assert m == substitution_matrix(parse_series("exp(x)-1", 6))
        bells = [oracles.bell_number(n) for n in range(7)]
        assert apply_matrix(m, exp_x(6)).coeffs == tuple(Fraction(b) for b in bells)

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            apply_matrix(RowFiniteMatrix.identity(3), Egf.zero(4))


class TestSubstitutionMatrix:
    def test_coordinate_series_gives_identity(self):
        assert substitution_matrix(Egf.x(5)) == RowFiniteMatrix.identity(5)

    def test_stirling_second_kind_row(self):
        m = substitution_matrix(parse_series("exp(x)-1", 6))
        assert [int(v) for v in m.rows[4]] == [0, 1, 7, 6, 1, 0, 0]

    def test_first_kind_inverts_second_kind(self):
        second = substitution_matrix(parse_series("exp(x)-1", 6))
        first = substitution_matrix(parse_series("log(1+x)", 6))
        assert first @ second == RowFiniteMatrix.identity(6)
        assert second @ first == RowFiniteMatrix.identity(6)

    def test_precondition_errors(self):
        with pytest.raises(ValueError, match="f\\(0\\)"):
            substitution_matrix(Egf([1, 1, 0]))
        with pytest.raises(ValueError, match="f'\\(0\\)"):
            substitution_matrix(Egf([0, 2, 0]))

    def test_functoriality(self):
        rng = random.Random(7)
        for _ in range(10):
            f = random_series(rng, 6, constant=0)
            g = random_series(rng, 6, constant=0)
            f = Egf((0, 1) + f.coeffs[2:])
            g = Egf((0, 1) + g.coeffs[2:])
            assert substitution_matrix(f.compose(g)) == substitution_matrix(g) @ substitution_matrix(f)

    def test_matrix_realizes_composition(self):
        rng = random.Random(8)
        for _ in range(10):
            f = Egf((0, 1) + random_series(rng, 8).coeffs[2:])
            g = random_series(rng, 8)
            assert apply_matrix(substitution_matrix(f), g) == g.compose(f)


class TestOneParamGroup:
    def test_inverse_is_log_series(self):
        m = substitution_matrix(parse_series("exp(x)-1", 8))
        inverse = one_param_power(m, -1)
        assert inverse == substitution_matrix(parse_series("log(1+x)", 8))

    def test_square_is_double_exponential(self):
        f = parse_series("exp(x)-1", 8)
        m = substitution_matrix(f)
        assert one_param_power(m, 2) == substitution_matrix(f.compose(f))

    def test_half_power_squares_back(self):
        m = substitution_matrix(parse_series("exp(x)-1", 8))
        half = one_param_power(m, Fraction(1, 2))
        assert isinstance(half, SubstitutionMatrix)
        assert half @ half == m

    def test_integer_powers_match_products(self):
        m = substitution_matrix(parse_series("exp(x)-1", 6))
        inv = one_param_power(m, -1)
        acc = RowFiniteMatrix.identity(6)
        for k in range(4):
            assert one_param_power(m, k) == acc
            acc = acc @ m
        acc = RowFiniteMatrix.identity(6)
        for k in range(4):
            assert one_param_power(m, -k) == acc
            acc = acc @ inv

    def test_group_law(self):
        rng = random.Random(9)
        m = substitution_matrix(parse_series("exp(x)-1", 8))
        for _ in range(8):
            lam = Fraction(rng.randint(-8, 8), rng.randint(1, 5))
            mu = Fraction(rng.randint(-8, 8), rng.randint(1, 5))
            assert one_param_power(m, lam) @ one_param_power(m, mu) == one_param_power(m, lam + mu)

    def test_non_unipotent_rejected(self):
        with pytest.raises(ValueError):
            one_param_power(RowFiniteMatrix.identity(4), Fraction(1, 2))

    def test_log_exp_round_trip(self):
        m = substitution_matrix(parse_series("exp(x)-1", 6))
        gen = matrix_log(m)
        assert all(gen.rows[i][j] == 0 for i in range(7) for j in range(i, 7))
        assert one_param_power(m, 1) == m


class TestExponentialFormula:
    def test_connected_sets_give_bell_numbers(self):
        bells = [oracles.bell_number(n) for n in range(7)]
        all_structures = exponential_formula(parse_series("exp(x)-1", 6))
        assert all_structures.coeffs == tuple(Fraction(b) for b in bells)

    def test_zero_and_coordinate(self):
        assert exponential_formula(Egf.zero(5)) == Egf.constant(1, 5)
        assert exponential_formula(Egf.x(5)) == exp_x(5)

    def test_nonzero_constant_rejected(self):
        with pytest.raises(ValueError):
            exponential_formula(Egf.constant(1, 4))


class TestSeriesEngine:
    def test_exp_log_round_trip(self):
        rng = random.Random(10)
        for _ in range(10):
            f = random_series(rng, 8, constant=1)
            assert f.log().exp() == f

    def test_compose_matches_one_param_square(self):
        f = parse_series("exp(x)-1", 8)
        s2 = f.compose(f)
        m2 = one_param_power(substitution_matrix(f), 2)
        assert substitution_matrix(s2) == m2

    def test_compose_preconditions(self):
        with pytest.raises(ValueError):
            Egf.x(4).compose(Egf.constant(1, 4))

    def test_log_precondition(self):
        with pytest.raises(ValueError):
            Egf.zero(4).log()


class TestSeriesParser:
    def test_known_series(self):
        assert parse_series("x", 4) == Egf.x(4)
        assert parse_series("exp(x)", 4).coeffs == (1, 1, 1, 1, 1)
        assert parse_series("exp(x)-1", 4).coeffs == (0, 1, 1, 1, 1)

    def test_log_series(self):
        # EGF coefficients of log(1+x): a_n = (-1)^(n+1) (n-1)!
        f = parse_series("log(1+x)", 5)
        assert f.coeffs == (0, 1, -1, 2, -6, 24)

    def test_scalars_and_products(self):
        assert parse_series("2*x", 3) == Egf([0, 2, 0, 0])
        assert parse_series("1/2*x", 3) == Egf([0, Fraction(1, 2), 0, 0])
        assert parse_series("-x+1", 3) == Egf([1, -1, 0, 0])

    def test_parse_errors(self):
        for bad in ["exp(x", "y", "1//2", "exp()", "x x", "log(x)"]:
            with pytest.raises(ParseError):
                parse_series(bad, 4)

    def test_round_trip_through_json(self):
        f = parse_series("exp(exp(x)-1)", 7)
        assert Egf.from_json(f.to_json()) == f
