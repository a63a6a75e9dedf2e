import math

import pytest

from ferrpack.audit import (
    AuditConstants,
    _RowIntervalIndex,
    area_outside_apex_square,
    audit_lemma1,
    audit_lemma2_windows,
    first_extents_in_band,
    has_core_square,
    lemma1_reports_to_csv,
)
from ferrpack.errors import CapacityError, DegenerateWindowError
from ferrpack.geometry import (
    Packing,
    Placement,
    Rect,
    covered_area_in_window,
)
from ferrpack.partitions import Partition, enumerate_partitions, exact_p


def oracle_area_outside(parts, n, epsilon):
    """Brute-force cell-in-square count; pins the 0-based convention."""
    s = int(epsilon * math.sqrt(n) * math.log(n))
    cells = {(r, c) for r, x in enumerate(parts) for c in range(x)}
    return sum(1 for r, c in cells if r >= s or c >= s)


class TestExtentBand:
    def test_documented_shape_inside(self):
        # thresholds at n=7: (0.515, 20.6); width 4 and height 3 both inside
        assert math.isclose(0.1 * math.sqrt(7) * math.log(7), 0.5149, abs_tol=1e-3)
        assert first_extents_in_band(Partition((4, 2, 1)), 0.1, 4.0)

    def test_single_row_boundary_case(self):
        # (7) has height 1, which still clears the 0.515 lower threshold
        assert first_extents_in_band(Partition((7,)), 0.1, 4.0)
        # raising c1 pushes the lower threshold above 1 and drops it
        assert not first_extents_in_band(Partition((7,)), 0.25, 4.0)

    def test_empty_interval(self):
        assert not first_extents_in_band(Partition((4, 2, 1)), 2.0, 2.0)

    @pytest.mark.parametrize("n", [12, 20])
    def test_conjugation_symmetric(self, n):
        for p in enumerate_partitions(n):
            assert first_extents_in_band(p, 0.1, 4.0) == first_extents_in_band(
                p.conjugate(), 0.1, 4.0
            )


class TestAreaOutsideApexSquare:
    def test_shape_inside_square(self):
        # s = floor(0.5*sqrt(16)*ln 16) = 5; (4,4,4,4) fits entirely
        p = Partition((4, 4, 4, 4))
        assert area_outside_apex_square(p, 0.5) == 0

    def test_single_row_spillover(self):
        # epsilon chosen so the square side is 2: 5 of 7 boxes stick out
        p = Partition((7,))
        eps = 2.0 / (math.sqrt(7) * math.log(7)) + 1e-9
        assert int(eps * math.sqrt(7) * math.log(7)) == 2
        assert area_outside_apex_square(p, eps) == 5

    def test_documented_staircase(self):
        # side 2 on (4,2,1): row0 spills 2, row1 spills 0, row2 all outside
        p = Partition((4, 2, 1))
        eps = 2.0 / (math.sqrt(7) * math.log(7)) + 1e-9
        assert area_outside_apex_square(p, eps) == 3

    @pytest.mark.parametrize("n", [7, 11, 15])
    @pytest.mark.parametrize("epsilon", [0.05, 0.25, 0.6, 1.5])
    def test_matches_cell_oracle(self, n, epsilon):
        for p in enumerate_partitions(n):
            assert area_outside_apex_square(p, epsilon) == oracle_area_outside(
                p.parts, n, epsilon
            )

    @pytest.mark.parametrize("n", [10, 18])
    def test_conjugation_symmetric(self, n):
        for p in enumerate_partitions(n):
            assert area_outside_apex_square(p, 0.25) == area_outside_apex_square(
                p.conjugate(), 0.25
            )

    def test_bounded_by_n_with_square_deficit(self):
        n = 20
        s = int(0.25 * math.sqrt(n) * math.log(n))
        for p in enumerate_partitions(n):
            out = area_outside_apex_square(p, 0.25)
            assert 0 <= out <= n
            covers_square = len(p.parts) >= s and all(x >= s for x in p.parts[:s])
            if covers_square:
                assert out == n - s * s


class TestCoreSquare:
    def test_square_partition(self):
        # (4,4,4,4) at n=16: 4 parts of size 4 >= sqrt(16)
        assert has_core_square(Partition((4, 4, 4, 4)), 1.0)

    def test_single_row_fails_when_threshold_exceeds_one(self):
        # c3*sqrt(n) > 1 demands more than one long part
        assert not has_core_square(Partition((9,)), 0.5)

    def test_zero_threshold_vacuous(self):
        for p in enumerate_partitions(6):
            assert has_core_square(p, 0.0)


class TestAuditLemma1:
    def test_n1_trivial_fractions(self):
        report = audit_lemma1(1, exhaustive=True)
        assert report.sample_size == 1
        assert report.frac_violating_i in (0.0, 1.0)
        assert report.frac_violating_iii in (0.0, 1.0)

    def test_exhaustive_n20_matches_direct_loop(self):
        constants = AuditConstants()
        report = audit_lemma1(20, constants, exhaustive=True)
        assert report.exhaustive
        assert report.sample_size == exact_p(20) == 627
        viol = sum(
            0 if first_extents_in_band(p, constants.c1, constants.c2) else 1
            for p in enumerate_partitions(20)
        )
        assert report.frac_violating_i == viol / 627
        assert report.frac_violating_iii == 0.0
        assert report.max_area_outside == 17  # frozen from the cell oracle

    def test_sampled_smoke_n200(self):
        report = audit_lemma1(200, sample_size=2000, method="exact_dp", seed=3)
        assert report.sample_size == 2000
        assert 0.0 <= report.frac_violating_i <= 1.0
        assert 0.0 <= report.frac_violating_iii <= 1.0
        assert 0.0 <= report.mean_area_outside <= 200

    def test_exhaustive_cap(self):
        with pytest.raises(CapacityError):
            audit_lemma1(61, exhaustive=True)

    def test_deterministic_per_seed(self):
        a = audit_lemma1(60, sample_size=500, method="boltzmann", seed=8)
        b = audit_lemma1(60, sample_size=500, method="boltzmann", seed=8)
        assert a == b

    def test_csv_round_numbers(self):
        reports = [audit_lemma1(n, exhaustive=True) for n in (10, 20)]
        text = lemma1_reports_to_csv(reports)
        lines = text.strip().split("\n")
        assert lines[0].startswith("n,sample_size,method,seed,c1")
        assert len(lines) == 3
        assert lines[1].split(",")[0] == "10"


def diagonal_chain_packing():
    placements = (
        Placement(Partition((2, 2)), 0, 0, 0),
        Placement(Partition((3, 1)), 0, 2, 2),
    )
    return Packing(n=4, rect=Rect(4, 5), policy="fixed", placements=placements)


class TestAuditLemma2:
    def test_empty_packing_zero(self):
        pk = Packing(n=200, rect=Rect(200, 200), policy="fixed", placements=())
        report = audit_lemma2_windows(pk, c1=0.5, window_count=50, seed=1)
        assert report.max_covered == 0
        assert report.gamma_hat == 0.0

    def test_window_covering_whole_small_tiling(self):
        # c1 chosen so the window equals the full 4x5 rect height side 4
        pk = diagonal_chain_packing()
        c1 = 4.0 / (0.8 * math.sqrt(4) * math.log(4)) + 1e-9
        report = audit_lemma2_windows(pk, c1=c1, window_count=20, seed=0)
        assert report.window_side == 4
        assert report.max_covered == 8  # both shapes fully inside some window

    def test_degenerate_window_error(self):
        pk = diagonal_chain_packing()
        with pytest.raises(DegenerateWindowError, match="larger"):
            audit_lemma2_windows(pk, c1=0.01)

    def test_gamma_hat_definition(self):
        pk = diagonal_chain_packing()
        c1 = 2.0 / (0.8 * math.sqrt(4) * math.log(4)) + 1e-9
        report = audit_lemma2_windows(pk, c1=c1, window_count=100, seed=5)
        assert report.gamma_hat == report.max_covered / (4 * math.log(4))

    def test_index_matches_reference_window_counter(self):
        pk = diagonal_chain_packing()
        index = _RowIntervalIndex(pk)
        for top in range(0, 3):
            for left in range(0, 4):
                assert index.covered_in_window(top, left, 2) == covered_area_in_window(
                    pk, top, left, 2
                )

    def test_deterministic_per_seed(self):
        pk = diagonal_chain_packing()
        c1 = 2.0 / (0.8 * math.sqrt(4) * math.log(4)) + 1e-9
        a = audit_lemma2_windows(pk, c1=c1, window_count=64, seed=3)
        b = audit_lemma2_windows(pk, c1=c1, window_count=64, seed=3)
        assert a == b
