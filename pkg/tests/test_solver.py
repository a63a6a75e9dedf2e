import pytest

from ferrpack.errors import CapacityError
from ferrpack.geometry import Rect, orientations_for_policy, validate_packing
from ferrpack.partitions import Partition, enumerate_partitions, exact_p
from ferrpack.solver import (
    NO_TILING,
    TILING_EXISTS,
    TIMEOUT,
    Budget,
    build_cover_instance,
    max_packing,
    solve_exact_tiling,
    solve_result_to_json_dict,
)
from tests.test_geometry import oracle_oriented_cells


# --- independent oracle: exhaustive search over explicit cell subsets ---

def oracle_placements(parts, H, W, policy):
    images = []
    for o in orientations_for_policy(policy):
        cells = frozenset(oracle_oriented_cells(parts, o))
        if cells not in (c for c, _ in images):
            images.append((cells, o))
    out = set()
    for cells, _ in images:
        h = 1 + max(r for r, _ in cells)
        w = 1 + max(c for _, c in cells)
        for dr in range(H - h + 1):
            for dc in range(W - w + 1):
                out.add(frozenset((r + dr, c + dc) for r, c in cells))
    return sorted(out, key=sorted)


def oracle_tiling_exists(n, policy):
    shapes = [p.parts for p in enumerate_partitions(n)]
    H, W = n, exact_p(n)
    target = {(r, c) for r in range(H) for c in range(W)}
    pls = {s: oracle_placements(s, H, W, policy) for s in shapes}

    def bt(i, used):
        if i == len(shapes):
            return used == target
        return any(bt(i + 1, used | pl) for pl in pls[shapes[i]] if not (pl & used))

    return bt(0, frozenset())


def oracle_max_packing(n, H, W, policy):
    shapes = [p.parts for p in enumerate_partitions(n)]
    pls = {s: oracle_placements(s, H, W, policy) for s in shapes}
    best = 0

    def bt(i, used, count):
        nonlocal best
        best = max(best, count)
        if i == len(shapes) or count + len(shapes) - i <= best:
            return
        for pl in pls[shapes[i]]:
            if not (pl & used):
                bt(i + 1, used | pl, count + 1)
        bt(i + 1, used, count)

    bt(0, frozenset(), 0)
    return best


class TestCoverInstance:
    def test_n1_minimal(self):
        inst = build_cover_instance(1, "free")
        assert inst.num_cell_columns == 1
        assert inst.num_shape_columns == 1
        assert len(inst.rows) == 1

    def test_n2_fixed_hand_enumeration(self):
        # (2) lies flat in either row; (1,1) stands in either column
        inst = build_cover_instance(2, "fixed")
        assert inst.rect == Rect(2, 2)
        by_shape = {}
        for row in inst.rows:
            by_shape.setdefault(inst.shapes[row.shape_index].parts, []).append(row)
        assert len(by_shape[(2,)]) == 2
        assert len(by_shape[(1, 1)]) == 2

    def test_n3_column_counts(self):
        inst = build_cover_instance(3, "free")
        assert inst.num_shape_columns == 3
        assert inst.num_cell_columns == 9

    def test_each_row_covers_n_cells_and_one_shape(self):
        inst = build_cover_instance(4, "free")
        for row in inst.rows:
            assert len(row.cell_columns) == 4
            assert 0 <= row.shape_index < inst.num_shape_columns

    def test_symmetric_images_deduplicated(self):
        # the square shape (2,2) has a single distinct image under all 8
        inst = build_cover_instance(4, "free")
        square_rows = [
            r for r in inst.rows if inst.shapes[r.shape_index].parts == (2, 2)
        ]
        cellsets = {r.cell_columns for r in square_rows}
        assert len(cellsets) == len(square_rows)
        assert len(square_rows) == 3 * 4  # 3 vertical x 4 horizontal anchors

    def test_cap_error_names_cap_and_size(self):
        with pytest.raises(CapacityError) as err:
            build_cover_instance(99, "free")
        assert "cap 6" in str(err.value)


class TestSolve:
    @pytest.mark.parametrize(
        "n,policy,expected",
        [
            (1, "free", TILING_EXISTS),
            (1, "fixed", TILING_EXISTS),
            (2, "fixed", NO_TILING),
            (2, "rot180", NO_TILING),
            (2, "free", TILING_EXISTS),
            (3, "fixed", NO_TILING),
            (3, "rot180", NO_TILING),
            (3, "free", NO_TILING),
            (4, "free", TILING_EXISTS),
        ],
    )
    def test_small_cases(self, n, policy, expected):
        result = solve_exact_tiling(build_cover_instance(n, policy))
        assert result.status == expected

    @pytest.mark.parametrize("n,policy", [(1, "free"), (2, "free"), (3, "free"),
                                          (2, "fixed"), (3, "rot180")])
    def test_agrees_with_subset_enumeration_oracle(self, n, policy):
        result = solve_exact_tiling(build_cover_instance(n, policy))
        assert (result.status == TILING_EXISTS) == oracle_tiling_exists(n, policy)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_witness_is_a_complete_valid_tiling(self, n):
        result = solve_exact_tiling(build_cover_instance(n, "free"))
        pk = result.witness
        assert pk is not None
        report = validate_packing(pk)
        assert report.ok, report.summary()
        assert pk.covered_area == pk.rect.area
        assert len(pk.placements) == exact_p(n)

    def test_no_tiling_has_no_witness(self):
        result = solve_exact_tiling(build_cover_instance(3, "free"))
        assert result.witness is None
        assert result.nodes_explored > 0

    def test_node_counts_reproducible(self):
        runs = [
            solve_exact_tiling(build_cover_instance(4, "free")).nodes_explored
            for _ in range(3)
        ]
        assert len(set(runs)) == 1

    def test_budget_timeout(self):
        result = solve_exact_tiling(
            build_cover_instance(4, "free"), Budget(max_nodes=1)
        )
        assert result.status == TIMEOUT
        assert result.witness is None
        assert result.nodes_explored == 1

    def test_json_shape(self):
        result = solve_exact_tiling(build_cover_instance(2, "free"))
        d = solve_result_to_json_dict(result)
        assert list(d) == ["n", "policy", "status", "nodes", "elapsed_ms", "witness"]
        assert d["witness"]["n"] == 2


class TestMaxPacking:
    def test_single_box(self):
        result = max_packing(1, Rect(1, 1), "fixed")
        assert len(result.packing.placements) == 1
        assert result.optimal

    def test_n3_in_3x3_matches_brute_force(self):
        expected = oracle_max_packing(3, 3, 3, "free")
        assert expected == 2  # frozen from the oracle
        result = max_packing(3, Rect(3, 3), "free")
        assert len(result.packing.placements) == expected
        assert result.optimal
        assert validate_packing(result.packing).ok

    def test_n4_full_rectangle_reaches_full_tiling(self):
        result = max_packing(4, Rect(4, 5), "free")
        assert len(result.packing.placements) == 5
        assert result.optimal
        assert result.packing.covered_area == 20

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_never_below_tiling_implication(self, n):
        tiled = solve_exact_tiling(build_cover_instance(n, "free"))
        assert tiled.status == TILING_EXISTS
        result = max_packing(n, Rect(n, exact_p(n)), "free")
        assert result.optimal
        assert len(result.packing.placements) == exact_p(n)

    def test_budget_returns_best_effort(self):
        result = max_packing(4, Rect(4, 5), "free", budget=Budget(max_nodes=2))
        assert not result.optimal
        assert len(result.packing.placements) <= 5

    def test_cap_requires_budget(self):
        with pytest.raises(CapacityError, match="cap"):
            max_packing(8, Rect(8, 22), "free")

    def test_deterministic(self):
        a = max_packing(3, Rect(3, 3), "free")
        b = max_packing(3, Rect(3, 3), "free")
        assert a.packing == b.packing
        assert a.nodes_explored == b.nodes_explored
