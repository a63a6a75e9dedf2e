"""Exact tiling decisions and max-cardinality packings for small n.

The full question "can the n x p(n) rectangle be tiled by all p(n) shapes
of size n, each used once" is encoded as an exact cover: one primary
column per rectangle cell plus one per shape, one row per legal placement.
The cover is searched with dancing links and minimum-remaining-choices
column selection; tie-breaking is fixed (lowest column index, then lowest
row index) so node counts are reproducible.

``no_tiling`` is only ever reported after the search space is exhausted;
a spent budget yields ``timeout``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .errors import CapacityError
from .geometry import (
    Packing,
    Placement,
    Rect,
    orientations_for_policy,
    packing_to_json_dict,
)
from .partitions import Partition, enumerate_partitions, exact_p

DEFAULT_SOLVER_CAP = 6

TILING_EXISTS = "tiling_exists"
NO_TILING = "no_tiling"
TIMEOUT = "timeout"


@dataclass(frozen=True)
class Budget:
    """Search limits; ``max_nodes`` is the deterministic knob."""

    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


@dataclass(frozen=True)
class CoverRow:
    shape_index: int
    placement: Placement
    cell_columns: tuple[int, ...]


@dataclass(frozen=True)
class CoverInstance:
    n: int
    rect: Rect
    policy: str
    shapes: tuple[Partition, ...]
    rows: tuple[CoverRow, ...]

    @property
    def num_cell_columns(self) -> int:
        return self.rect.area

    @property
    def num_shape_columns(self) -> int:
        return len(self.shapes)


@dataclass(frozen=True)
class SolveResult:
    n: int
    policy: str
    status: str
    witness: Optional[Packing]
    nodes_explored: int
    elapsed: float


@dataclass(frozen=True)
class MaxPackResult:
    packing: Packing
    optimal: bool
    nodes_explored: int
    elapsed: float


def _distinct_oriented_forms(shape: Partition, policy: str):
    """(orientation, row_lengths, right_justified) per distinct cell set.

    Symmetric self-images (e.g. square shapes under rotation) collapse to
    the lowest orientation index, so the search tree sees each geometric
    placement once.
    """
    forms = []
    seen = set()
    for o in orientations_for_policy(policy):
        e = shape.conjugate().parts if o & 4 else shape.parts
        lengths = tuple(reversed(e)) if o & 2 else e
        right = bool(o & 1)
        width = max(lengths)
        cells = frozenset(
            (r, c if not right else width - 1 - c)
            for r, length in enumerate(lengths)
            for c in range(length)
        )
        if cells not in seen:
            seen.add(cells)
            forms.append((o, lengths, right))
    return forms


def _placements_of_form(o, lengths, right, H, W):
    """All in-bounds (placement, flat cell ids) of one oriented form."""
    h = len(lengths)
    w = max(lengths)
    out = []
    rel = []
    for r, length in enumerate(lengths):
        if right:
            rel.extend((r, w - length + c) for c in range(length))
        else:
            rel.extend((r, c) for c in range(length))
    for top in range(H - h + 1):
        for left in range(W - w + 1):
            anchor_row = top + (h - 1 if o & 2 else 0)
            anchor_col = left + (w - 1 if o & 1 else 0)
            cells = tuple((top + r) * W + (left + c) for r, c in rel)
            out.append(((o, anchor_row, anchor_col), cells))
    return out


def build_cover_instance(
    n: int, policy: str, cap: int = DEFAULT_SOLVER_CAP, width: Optional[int] = None
) -> CoverInstance:
    """Cover instance for the n x p(n) rectangle (or an explicit width)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapacityError(
            f"n={n} exceeds the solver cap {cap}: the instance would have "
            f"{n} x p({n}) = {n * exact_p(n)} cell columns; raise the cap "
            f"explicitly to proceed"
        )
    rect = Rect(n, exact_p(n) if width is None else width)
    shapes = tuple(enumerate_partitions(n, cap=max(n, 60)))
    rows = []
    for si, shape in enumerate(shapes):
        for o, lengths, right in _distinct_oriented_forms(shape, policy):
            for (orient, ar, ac), cells in _placements_of_form(
                o, lengths, right, rect.height, rect.width
            ):
                rows.append(
                    CoverRow(si, Placement(shape, orient, ar, ac), tuple(sorted(cells)))
                )
    return CoverInstance(n=n, rect=rect, policy=policy, shapes=shapes, rows=tuple(rows))


class _DancingLinks:
    """Knuth's DLX over integer-indexed node arrays; all columns primary."""

    def __init__(self, num_columns: int, rows):
        # node 0 is the root; nodes 1..C are column headers
        C = num_columns
        size = 1 + C + sum(len(r) for r in rows)
        self.L = list(range(size))
        self.R = list(range(size))
        self.U = list(range(size))
        self.D = list(range(size))
        self.C = [0] * size
        self.ROW = [-1] * size
        self.size = [0] * (C + 1)
        for c in range(C + 1):
            self.L[c] = (c - 1) % (C + 1)
            self.R[c] = (c + 1) % (C + 1)
        nxt = C + 1
        for ri, cols in enumerate(rows):
            first = None
            for col in cols:
                node = nxt
                nxt += 1
                header = col + 1
                self.C[node] = header
                self.ROW[node] = ri
                self.U[node] = self.U[header]
                self.D[node] = header
                self.D[self.U[header]] = node
                self.U[header] = node
                self.size[header] += 1
                if first is None:
                    first = node
                    self.L[node] = self.R[node] = node
                else:
                    self.L[node] = self.L[first]
                    self.R[node] = first
                    self.R[self.L[first]] = node
                    self.L[first] = node

    def cover(self, header):
        L, R, U, D, C, size = self.L, self.R, self.U, self.D, self.C, self.size
        R[L[header]] = R[header]
        L[R[header]] = L[header]
        i = D[header]
        while i != header:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                size[C[j]] -= 1
                j = R[j]
            i = D[i]

    def uncover(self, header):
        L, R, U, D, C, size = self.L, self.R, self.U, self.D, self.C, self.size
        i = U[header]
        while i != header:
            j = L[i]
            while j != i:
                size[C[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[header]] = header
        L[R[header]] = header


def solve_exact_tiling(inst: CoverInstance, budget: Optional[Budget] = None) -> SolveResult:
    """Decide the tiling question for a cover instance by complete search."""
    budget = budget or Budget()
    start = time.perf_counter()
    num_cols = inst.num_cell_columns + inst.num_shape_columns
    row_cols = [
        row.cell_columns + (inst.num_cell_columns + row.shape_index,)
        for row in inst.rows
    ]
    dlx = _DancingLinks(num_cols, row_cols)
    nodes = 0
    chosen: list[int] = []
    out_of_budget = False

    def over_budget() -> bool:
        if budget.max_nodes is not None and nodes >= budget.max_nodes:
            return True
        if budget.max_seconds is not None and nodes % 1024 == 0:
            return time.perf_counter() - start > budget.max_seconds
        return False

    def search() -> bool:
        nonlocal nodes, out_of_budget
        if dlx.R[0] == 0:
            return True
        # minimum remaining choices; first strict minimum = lowest column index
        best, best_size = 0, None
        h = dlx.R[0]
        while h != 0:
            if best_size is None or dlx.size[h] < best_size:
                best, best_size = h, dlx.size[h]
            h = dlx.R[h]
        if best_size == 0:
            return False
        dlx.cover(best)
        node = dlx.D[best]
        while node != best:
            nodes += 1
            if over_budget():
                out_of_budget = True
                break
            chosen.append(dlx.ROW[node])
            j = dlx.R[node]
            while j != node:
                dlx.cover(dlx.C[j])
                j = dlx.R[j]
            if search():
                dlx.uncover(best)
                return True
            j = dlx.L[node]
            while j != node:
                dlx.uncover(dlx.C[j])
                j = dlx.L[j]
            chosen.pop()
            if out_of_budget:
                break
            node = dlx.D[node]
        dlx.uncover(best)
        return False

    found = search()
    elapsed = time.perf_counter() - start
    if found:
        witness = Packing(
            n=inst.n,
            rect=inst.rect,
            policy=inst.policy,
            placements=tuple(inst.rows[ri].placement for ri in sorted(chosen)),
        )
        return SolveResult(inst.n, inst.policy, TILING_EXISTS, witness, nodes, elapsed)
    if out_of_budget:
        return SolveResult(inst.n, inst.policy, TIMEOUT, None, nodes, elapsed)
    return SolveResult(inst.n, inst.policy, NO_TILING, None, nodes, elapsed)


def max_packing(
    n: int,
    rect: Rect,
    policy: str,
    budget: Optional[Budget] = None,
    cap: int = DEFAULT_SOLVER_CAP,
) -> MaxPackResult:
    """Best-found count of distinct non-overlapping shapes in ``rect``.

    Branch-and-bound over shapes in canonical enumeration order with the
    bound count + min(free_area // n, shapes_left). The optimality flag is
    True only when the search space was exhausted (or the bound closed)
    within budget. Above the cap a budget is mandatory: results are then
    best-effort unless the flag says otherwise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap and budget is None:
        raise CapacityError(
            f"n={n} exceeds the solver cap {cap}; pass a Budget for a "
            f"best-effort (possibly non-optimal) search"
        )
    budget = budget or Budget()
    start = time.perf_counter()
    shapes = tuple(enumerate_partitions(n, cap=max(n, 60)))
    H, W = rect.height, rect.width
    candidates = []
    for shape in shapes:
        pls = []
        for o, lengths, right in _distinct_oriented_forms(shape, policy):
            pls.extend(_placements_of_form(o, lengths, right, H, W))
        candidates.append(pls)
    hard_max = min(rect.area // n, len(shapes))
    grid = bytearray(H * W)
    best_stack: list[Placement] = []
    stack: list[Placement] = []
    nodes = 0
    exhausted = True

    def over_budget() -> bool:
        if budget.max_nodes is not None and nodes >= budget.max_nodes:
            return True
        if budget.max_seconds is not None and nodes % 1024 == 0:
            return time.perf_counter() - start > budget.max_seconds
        return False

    def dfs(i: int, count: int, free: int) -> bool:
        """Returns True when the search should stop (budget or proven max)."""
        nonlocal nodes, exhausted, best_stack
        if count > len(best_stack):
            best_stack = list(stack)
            if count == hard_max:
                return True
        if i == len(shapes):
            return False
        if count + min(free // n, len(shapes) - i) <= len(best_stack):
            return False
        for (o, ar, ac), cells in candidates[i]:
            if any(grid[c] for c in cells):
                continue
            nodes += 1
            if over_budget():
                exhausted = False
                return True
            for c in cells:
                grid[c] = 1
            stack.append(Placement(shapes[i], o, ar, ac))
            stop = dfs(i + 1, count + 1, free - n)
            stack.pop()
            for c in cells:
                grid[c] = 0
            if stop:
                return True
        return dfs(i + 1, count, free)

    dfs(0, 0, rect.area)
    elapsed = time.perf_counter() - start
    packing = Packing(n=n, rect=rect, policy=policy, placements=tuple(best_stack))
    optimal = exhausted or len(best_stack) == hard_max
    return MaxPackResult(packing, optimal, nodes, elapsed)


def solve_result_to_json_dict(result: SolveResult) -> dict:
    return {
        "n": result.n,
        "policy": result.policy,
        "status": result.status,
        "nodes": result.nodes_explored,
        "elapsed_ms": round(result.elapsed * 1000.0, 3),
        "witness": packing_to_json_dict(result.witness) if result.witness else None,
    }
