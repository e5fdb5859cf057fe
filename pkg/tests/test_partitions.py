from math import factorial

import pytest

from diagcalc.diag import PackedMatrix, format_matrix
from diagcalc.errors import BoundError, ParseError
from diagcalc.partitions import (
    OrderedSetPartition,
    PartitionType,
    SetPartition,
    complete_bell,
    enumerate_ordered_partitions,
    enumerate_partitions,
    faa_di_bruno,
    format_partition,
    intersection_matrix,
    make_ordered_partition,
    make_partition,
    matrix_class,
    orderings,
    parse_ordered_partition,
    parse_set_partition,
    type_of,
)

import oracles


class TestEnumeration:
    def test_empty_set_has_one_partition(self):
        ps = list(enumerate_partitions(0))
        assert len(ps) == 1
        assert ps[0].blocks == frozenset()

    def test_counts_match_brute_force(self):
        for n in range(7):
            assert len(list(enumerate_partitions(n))) == oracles.bell_number(n)

    def test_three_elements(self):
        ps = list(enumerate_partitions(3))
        assert len(ps) == 5
        # restricted-growth-string order: first the one-block partition,
        # last the all-singletons one
        assert ps[0] == make_partition(3, [{1, 2, 3}])
        assert ps[-1] == make_partition(3, [{1}, {2}, {3}])

    def test_no_duplicates(self):
        for n in range(7):
            ps = list(enumerate_partitions(n))
            assert len(set(ps)) == len(ps)

    def test_ordered_counts(self):
        for n in range(6):
            got = len(list(enumerate_ordered_partitions(n)))
            assert got == oracles.ordered_bell_number(n)

    def test_ordered_three_elements(self):
        assert len(list(enumerate_ordered_partitions(3))) == 13

    def test_deterministic_order(self):
        assert list(enumerate_partitions(5)) == list(enumerate_partitions(5))
        assert list(enumerate_ordered_partitions(4)) == list(enumerate_ordered_partitions(4))

    def test_bounds(self):
        with pytest.raises(BoundError):
            next(enumerate_partitions(13))
        with pytest.raises(BoundError):
            next(enumerate_ordered_partitions(10))

    def test_orderings_count_is_block_factorial(self):
        for n in range(7):
            for q in enumerate_partitions(n):
                os = list(orderings(q))
                assert len(os) == factorial(len(q.blocks))
                assert len(set(os)) == len(os)
                assert all(o.forget() == q for o in os)


class TestValidation:
    def test_overlapping_blocks_rejected(self):
        with pytest.raises(ValueError):
            make_partition(3, [{1, 2}, {2, 3}])

    def test_missing_elements_rejected(self):
        with pytest.raises(ValueError):
            make_partition(4, [{1, 2}, {3}])

    def test_empty_block_rejected(self):
        with pytest.raises(ValueError):
            make_ordered_partition(2, [{1, 2}, set()])


class TestTypes:
    def test_type_examples(self):
        p1 = make_partition(6, [{1, 2, 5}, {3, 4, 6}])
        assert type_of(p1) == PartitionType((0, 0, 2))
        p2 = make_partition(6, [{1, 2}, {3, 4}, {5, 6}])
        assert type_of(p2) == PartitionType((0, 3))
        assert type_of(make_partition(0, [])) == PartitionType(())

    def test_trailing_zeros_ignored(self):
        assert PartitionType((1, 0, 0)) == PartitionType((1,))
        assert PartitionType((0, 2, 0)).counts == (0, 2)

    def test_weight_and_size(self):
        t = PartitionType((1, 0, 2))
        assert t.weight == 7
        assert t.size == 3


class TestFaaDiBruno:
    def test_two_pair_blocks(self):
        # independently counted among partitions of a 4-set
        assert oracles.faa_count_by_enumeration(4, (0, 2)) == 3
        assert faa_di_bruno((0, 2)) == 3

    def test_all_singletons(self):
        for n in range(1, 7):
            alpha = (n,)
            assert faa_di_bruno(alpha) == 1
            assert oracles.faa_count_by_enumeration(n, alpha) == 1

    def test_two_triples(self):
        assert oracles.faa_count_by_enumeration(6, (0, 0, 2)) == 10
        assert faa_di_bruno((0, 0, 2)) == 10
        assert faa_di_bruno(PartitionType((0, 0, 2))) == factorial(6) // (6 * 6 * 2)

    def test_matches_enumeration_for_all_types(self):
        for n in range(7):
            for alpha in oracles.integer_partition_types(n):
                assert faa_di_bruno(alpha) == oracles.faa_count_by_enumeration(n, alpha)


class TestCompleteBell:
    def test_first_values(self):
        assert complete_bell(0) == {PartitionType(()): 1}
        assert complete_bell(1) == {PartitionType((1,)): 1}

    def test_degree_two_and_three(self):
        # frozen from the integer-partition oracle: Y2 = L1^2 + L2,
        # Y3 = L1^3 + 3 L1 L2 + L3
        assert complete_bell(2) == {PartitionType((2,)): 1, PartitionType((0, 1)): 1}
        assert complete_bell(3) == {
            PartitionType((3,)): 1,
            PartitionType((1, 1)): 3,
            PartitionType((0, 0, 1)): 1,
        }

    def test_coefficients_are_faa_di_bruno(self):
        for n in range(7):
            poly = complete_bell(n)
            expected = {
                tuple(alpha): oracles.faa_count_by_enumeration(n, alpha)
                for alpha in oracles.integer_partition_types(n)
            }
            got = {t.counts + (0,) * (n - len(t.counts)): c for t, c in poly.items()}
            assert got == {k[: n]: v for k, v in expected.items()} or got == expected

    def test_evaluation_at_one_gives_bell_number(self):
        for n in range(8):
            assert sum(complete_bell(n).values()) == oracles.bell_number(n)

    def test_type_sums_match_egf_bell_coefficients(self):
        # cross-module: total over types of weight n equals the n-th
        # coefficient of the transformed exponential series
        from diagcalc.egf import apply_matrix, parse_series, substitution_matrix

        m = substitution_matrix(parse_series("exp(x)-1", 8))
        bell_series = apply_matrix(m, parse_series("exp(x)", 8))
        for n in range(9):
            assert sum(complete_bell(n).values()) == bell_series.coeffs[n]

    def test_exponents_have_weight_n(self):
        for n in range(7):
            assert all(t.weight == n for t in complete_bell(n))


class TestIntersectionMatrix:
    def test_worked_example(self):
        p1 = make_ordered_partition(6, [{1, 2, 5}, {3, 4, 6}])
        p2 = make_ordered_partition(6, [{1, 2}, {3, 4}, {5, 6}])
        assert intersection_matrix(p1, p2).entries == ((2, 0, 1), (0, 2, 1))

    def test_self_intersection_is_diagonal(self):
        for n in range(1, 6):
            for q in enumerate_partitions(n):
                p = next(orderings(q))
                m = intersection_matrix(p, p)
                sizes = tuple(len(b) for b in p.blocks)
                assert m.entries == tuple(
                    tuple(sizes[i] if i == j else 0 for j in range(len(sizes)))
                    for i in range(len(sizes))
                )

    def test_against_one_block_partition(self):
        p = make_ordered_partition(5, [{1, 4}, {2, 3, 5}])
        whole = make_ordered_partition(5, [{1, 2, 3, 4, 5}])
        assert intersection_matrix(p, whole).entries == ((2,), (3,))

    def test_margins(self):
        for n in range(1, 6):
            parts = [next(orderings(q)) for q in enumerate_partitions(n)]
            for p1 in parts:
                for p2 in parts:
                    m = intersection_matrix(p1, p2)
                    assert m.row_sums() == tuple(len(b) for b in p1.blocks)
                    assert m.col_sums() == tuple(len(b) for b in p2.blocks)
                    assert m.weight == n

    def test_ground_mismatch(self):
        p1 = make_ordered_partition(2, [{1, 2}])
        p2 = make_ordered_partition(3, [{1, 2, 3}])
        with pytest.raises(ValueError, match="mismatch"):
            intersection_matrix(p1, p2)


class TestMatrixClass:
    def test_worked_example_has_six_matrices(self):
        q1 = make_partition(6, [{1, 2, 5}, {3, 4, 6}])
        q2 = make_partition(6, [{1, 2}, {3, 4}, {5, 6}])
        got = {m.entries for m in matrix_class(q1, q2)}
        assert got == {
            ((2, 0, 1), (0, 2, 1)),
            ((2, 1, 0), (0, 1, 2)),
            ((1, 2, 0), (1, 0, 2)),
            ((0, 2, 1), (2, 0, 1)),
            ((0, 1, 2), (2, 1, 0)),
            ((1, 0, 2), (1, 2, 0)),
        }
        # 2 orderings of q1 and 6 of q2 give 12 ordered preimages
        assert len(list(orderings(q1))) * len(list(orderings(q2))) == 12

    def test_singletons(self):
        q = make_partition(1, [{1}])
        assert {m.entries for m in matrix_class(q, q)} == {((1,),)}

    def test_single_block(self):
        q = make_partition(2, [{1, 2}])
        assert {m.entries for m in matrix_class(q, q)} == {((2,),)}

    def test_closed_under_row_column_permutations(self):
        for n in range(1, 6):
            qs = list(enumerate_partitions(n))
            for q1 in qs:
                for q2 in qs:
                    assert matrix_class(q1, q2) == _orbit_of(next(iter(matrix_class(q1, q2))))

    def test_closure_sampled_at_six(self):
        import random

        rng = random.Random(61)
        qs = list(enumerate_partitions(6))
        for _ in range(40):
            q1, q2 = rng.choice(qs), rng.choice(qs)
            cls = matrix_class(q1, q2)
            assert cls == _orbit_of(next(iter(cls)))


def _orbit_of(sample: PackedMatrix) -> set[PackedMatrix]:
    from itertools import permutations

    rows = sample.entries
    orbit = set()
    for rp in permutations(range(len(rows))):
        permuted = [rows[i] for i in rp]
        for cp in permutations(range(len(rows[0]))):
            orbit.add(PackedMatrix(tuple(tuple(row[j] for j in cp) for row in permuted)))
    return orbit


class TestTextFormat:
    def test_round_trip_unordered(self):
        for n in range(6):
            for q in enumerate_partitions(n):
                assert parse_set_partition(format_partition(q)) == q

    def test_round_trip_ordered(self):
        for n in range(5):
            for p in enumerate_ordered_partitions(n):
                assert parse_ordered_partition(format_partition(p)) == p

    def test_reading_order_is_preserved(self):
        p = parse_ordered_partition("{3,4,6}{1,2,5}")
        assert p.blocks == (frozenset({3, 4, 6}), frozenset({1, 2, 5}))

    def test_parse_errors(self):
        for bad in ["{1,2", "{}", "{1}{1}", "1,2", "{a}"]:
            with pytest.raises(ParseError):
                parse_set_partition(bad)

    def test_matrix_text(self):
        p1 = make_ordered_partition(6, [{1, 2, 5}, {3, 4, 6}])
        p2 = make_ordered_partition(6, [{1, 2}, {3, 4}, {5, 6}])
        assert format_matrix(intersection_matrix(p1, p2)) == "2 0 1;0 2 1"
