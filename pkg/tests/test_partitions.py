import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ferrpack.errors import CapacityError
from ferrpack.partitions import (
    Partition,
    PartitionCountTable,
    enumerate_partitions,
    exact_p,
    hardy_ramanujan_estimate,
    iter_partition_tuples,
)


def brute_force_partitions(n, maxpart=None):
    """Independent recursive enumeration oracle."""
    if maxpart is None:
        maxpart = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, maxpart), 0, -1):
        out.extend((first,) + rest for rest in brute_force_partitions(n - first, first))
    return out


class TestPartitionType:
    def test_rejects_nonpositive_parts(self):
        with pytest.raises(ValueError):
            Partition((3, 0))

    def test_rejects_increasing_parts(self):
        with pytest.raises(ValueError):
            Partition((1, 2))

    def test_structural_equality(self):
        assert Partition((3, 1)) == Partition([3, 1])
        assert Partition((3, 1)) != Partition((2, 2))

    def test_n_is_sum(self):
        assert Partition((4, 2, 1)).n == 7
        assert Partition(()).n == 0


class TestConjugate:
    def test_documented_example(self):
        assert Partition((4, 2, 1)).conjugate() == Partition((3, 2, 1, 1))

    def test_single_box(self):
        assert Partition((1,)).conjugate() == Partition((1,))

    def test_single_row(self):
        # column-count oracle: (5) has five columns of height 1
        assert Partition((5,)).conjugate() == Partition((1, 1, 1, 1, 1))

    @pytest.mark.parametrize("n", range(1, 31))
    def test_involution_exhaustive(self, n):
        for p in enumerate_partitions(n):
            assert p.conjugate().conjugate() == p

    @given(st.integers(1, 40), st.integers(0, 10**9))
    @settings(max_examples=60)
    def test_part_count_duality(self, n, pick):
        p = Partition(_nth_partition(n, pick))
        q = p.conjugate()
        assert q.n == p.n
        assert q.num_parts == p.first_part
        assert q.first_part == p.num_parts


def _nth_partition(n, pick):
    """Deterministic pick from the enumeration stream, without full listing."""
    it = iter_partition_tuples(n)
    chosen = next(it)
    for _ in range(pick % 300):
        nxt = next(it, None)
        if nxt is None:
            break
        chosen = nxt
    return chosen


class TestDurfee:
    @pytest.mark.parametrize(
        "parts,expected", [((4, 2, 1), 2), ((1,), 1), ((7,), 1), ((3, 3, 3), 3)]
    )
    def test_examples(self, parts, expected):
        assert Partition(parts).durfee_size() == expected

    def test_matches_brute_force_square_probe(self):
        def oracle(parts):
            cells = {(r, c) for r, x in enumerate(parts) for c in range(x)}
            d = 0
            while all((r, c) in cells for r in range(d + 1) for c in range(d + 1)):
                d += 1
            return d

        for n in range(1, 16):
            for p in enumerate_partitions(n):
                assert p.durfee_size() == oracle(p.parts)

    @pytest.mark.parametrize("n", [10, 17, 24])
    def test_conjugation_invariant(self, n):
        for p in enumerate_partitions(n):
            assert p.durfee_size() == p.conjugate().durfee_size()


class TestEnumeration:
    def test_n1(self):
        assert [p.parts for p in enumerate_partitions(1)] == [(1,)]

    def test_n4_descending_lex(self):
        assert [p.parts for p in enumerate_partitions(4)] == [
            (4,),
            (3, 1),
            (2, 2),
            (2, 1, 1),
            (1, 1, 1, 1),
        ]

    def test_n3_count(self):
        assert len(list(enumerate_partitions(3))) == 3

    @pytest.mark.parametrize("n", range(1, 21))
    def test_matches_recursive_oracle(self, n):
        assert [p.parts for p in enumerate_partitions(n)] == brute_force_partitions(n)

    @pytest.mark.parametrize("n", range(1, 31))
    def test_count_matches_exact_p(self, n):
        assert sum(1 for _ in enumerate_partitions(n)) == exact_p(n)

    def test_cap_enforced(self):
        with pytest.raises(CapacityError, match="60"):
            list(enumerate_partitions(61))
        assert sum(1 for _ in enumerate_partitions(61, cap=61)) == exact_p(61)

    def test_no_duplicates(self):
        seen = set()
        for p in enumerate_partitions(25):
            assert p.parts not in seen
            seen.add(p.parts)


class TestCountTable:
    def test_base_values(self):
        assert exact_p(0) == 1
        assert exact_p(4) == 5
        assert exact_p(12) == 77

    def test_known_value_n100(self):
        assert exact_p(100) == 190569292

    def test_pentagonal_vs_restricted_table(self):
        # two independent recurrences must agree
        table = PartitionCountTable(200)
        for m in range(201):
            assert table.count(m) == table.count_with_max_part(m, m)

    def test_restricted_recurrence_cell_by_cell(self):
        table = PartitionCountTable(80)
        for m in range(1, 81):
            for k in range(1, m + 1):
                expected = table.count_with_max_part(m, k - 1) + (
                    table.count_with_max_part(m - k, k)
                )
                assert table.count_with_max_part(m, k) == expected

    def test_restricted_boundaries(self):
        table = PartitionCountTable(50)
        for m in range(1, 51):
            assert table.count_with_max_part(m, 1) == 1
            assert table.count_with_max_part(m, 0) == 0
        assert table.count_with_max_part(0, 0) == 1

    def test_cap_is_enforced(self):
        table = PartitionCountTable(10)
        with pytest.raises(CapacityError, match="max_n"):
            table.count(11)
        with pytest.raises(CapacityError):
            table.count_with_max_part(11, 3)


class TestHardyRamanujan:
    def test_formula_at_n1(self):
        with mpmath.workdps(60):
            c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
            expected = mpmath.exp(c) / (4 * mpmath.sqrt(3))
            assert abs(hardy_ramanujan_estimate(1) - expected) < mpmath.mpf(10) ** -40

    def test_overestimates_at_n50(self):
        assert hardy_ramanujan_estimate(50) > exact_p(50)

    def test_ratio_band_at_n100(self):
        ratio = float(hardy_ramanujan_estimate(100) / exact_p(100))
        assert 1.0 <= ratio <= 1.1

    def test_ratio_decreasing_toward_one(self):
        ratios = [
            float(hardy_ramanujan_estimate(n) / exact_p(n))
            for n in (25, 50, 100, 200, 400)
        ]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert all(r > 1.0 for r in ratios)

    def test_fifty_digit_precision(self):
        est = hardy_ramanujan_estimate(400)
        with mpmath.workdps(80):
            c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
            reference = mpmath.exp(c * mpmath.sqrt(400)) / (4 * 400 * mpmath.sqrt(3))
            rel = abs(est - reference) / reference
            assert rel < mpmath.mpf(10) ** -50
