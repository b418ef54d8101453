"""Betti-number engine: orchestrates enumeration, differentials, and ranks.

Every bigrade cell is enumerated once at its saturation truncation (length
n = p + 2q, beyond which the cell stops growing); the basis order is graded by
length, so the matrix at any smaller truncation is a column prefix of the
saturated matrix and one left-to-right modular elimination yields the ranks at
every truncation simultaneously.
"""
from __future__ import annotations

from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .basis import Monomial, enumerate_basis, monomial_length
from .differential import assemble_matrix
from .linalg import (
    CERTIFICATION_LIMIT,
    PRIMES,
    RankProfile,
    RationalMatrix,
    UnusablePrimeError,
    rank as exact_rank,
    rank_profile_modular,
)
from .rings import GradedRing, parse_ring, serialize_ring


class InternalConsistencyError(RuntimeError):
    """A provably nonnegative quantity came out negative: abort loudly."""


def vanishing_bound(ring: GradedRing, n: int) -> int:
    """Cohomological degree from which all Betti numbers of n points vanish."""
    return (ring.dimension - 1) * n + 2


class _CellBasis(NamedTuple):
    monomials: tuple[Monomial, ...]
    lengths: tuple[int, ...]  # nondecreasing; lengths[k] = length of monomial k


class BettiEngine:
    """Per-ring computation state: saturated cells, matrices, rank caches."""

    def __init__(
        self,
        ring: GradedRing,
        reduced: bool = True,
        exact_only: bool = False,
        primes: tuple[int, ...] = PRIMES,
    ):
        if ring.dimension % 2:
            raise ValueError("the spectral-sequence engine requires even dimension")
        self.ring = ring
        self.reduced = reduced
        self.exact_only = exact_only
        self.primes = primes
        self._bases: dict[tuple[int, int], _CellBasis] = {}
        self._matrices: dict[tuple[int, int], RationalMatrix] = {}
        self._profiles: dict[tuple[int, int], dict[int, tuple[int, RankProfile]]] = {}
        self._ranks: dict[tuple[int, int, int], int] = {}
        self._planned_cap: dict[tuple[int, int], int] = {}
        self.uncertified_cells: list[tuple[int, int, int]] = []

    # -- saturated cell data ------------------------------------------------

    def _saturation(self, p: int, q: int) -> int:
        return max(1, p + 2 * q)

    def cell_basis(self, p: int, q: int) -> _CellBasis:
        key = (p, q)
        cached = self._bases.get(key)
        if cached is None:
            if p < 0 or q < 0:
                cached = _CellBasis((), ())
            else:
                monomials = enumerate_basis(self.ring, p, q, self._saturation(p, q), self.reduced)
                cached = _CellBasis(monomials, tuple(monomial_length(m) for m in monomials))
            self._bases[key] = cached
        return cached

    def cell_matrix(self, p: int, q: int) -> RationalMatrix:
        """Differential on the saturated cell (p, q); columns in basis order."""
        key = (p, q)
        cached = self._matrices.get(key)
        if cached is None:
            cached = assemble_matrix(self.ring, p, q, self._saturation(p, q), self.reduced)
            self._matrices[key] = cached
        return cached

    def dim(self, p: int, q: int, n: int) -> int:
        """dim of cell (p, q) at truncation n: a prefix of the saturated cell."""
        if p < 0 or q < 0 or n < 1:
            return 0
        lengths = self.cell_basis(p, q).lengths
        return bisect_right(lengths, n)

    # -- ranks ----------------------------------------------------------------

    def _profile(self, p: int, q: int, slot: int, cap: int) -> RankProfile:
        """Prefix-rank profile for the slot-th usable prime, covering >= cap columns."""
        per_cell = self._profiles.setdefault((p, q), {})
        matrix = self.cell_matrix(p, q)
        want = max(cap, self._planned_cap.get((p, q), 0))
        usable = 0
        for prime in self.primes:
            cached = per_cell.get(prime)
            if cached is not None and cached[0] == -1:
                continue  # recorded as unusable
            if cached is None or cached[0] < cap:
                try:
                    profile = rank_profile_modular(matrix, prime, min(want, matrix.cols))
                except UnusablePrimeError:
                    per_cell[prime] = (-1, RankProfile(prime, [0], ()))
                    continue
                per_cell[prime] = (min(want, matrix.cols), profile)
            if usable == slot:
                return per_cell[prime][1]
            usable += 1
        raise UnusablePrimeError("all configured primes divide some denominator")

    def _exact_truncated_rank(self, p: int, q: int, n: int) -> int:
        return exact_rank(assemble_matrix(self.ring, p, q, n, self.reduced))

    def rank(self, p: int, q: int, n: int) -> int:
        """Rank of the differential leaving cell (p, q) at truncation n."""
        if q <= 0 or p < 0 or n < 1:
            return 0
        n_eff = min(n, p + 2 * q)
        key = (p, q, n_eff)
        cached = self._ranks.get(key)
        if cached is not None:
            return cached
        cols = self.dim(p, q, n_eff)
        if cols == 0:
            self._ranks[key] = 0
            return 0
        if self.exact_only:
            value = self._exact_truncated_rank(p, q, n_eff)
            self._ranks[key] = value
            return value
        value = self._hybrid_rank(p, q, n_eff, cols)
        self._ranks[key] = value
        return value

    def _hybrid_rank(self, p: int, q: int, n_eff: int, cols: int) -> int:
        codomain_dim = self.dim(p + self.ring.dimension, q - 1, n_eff)
        first = self._profile(p, q, 0, cols)
        candidate = first.prefix_ranks[cols]
        if candidate == min(cols, codomain_dim):
            return candidate  # a mod-p rank never exceeds the rational rank
        second = self._profile(p, q, 1, cols)
        if second.prefix_ranks[cols] != candidate:
            return self._exact_truncated_rank(p, q, n_eff)
        if candidate <= CERTIFICATION_LIMIT:
            pivots = first.pivots[:candidate]
            sub = self.cell_matrix(p, q).submatrix(
                [r for r, _ in pivots], [c for _, c in pivots]
            )
            if exact_rank(sub) != candidate:
                return self._exact_truncated_rank(p, q, n_eff)
        else:
            self.uncertified_cells.append((p, q, n_eff))
        return candidate

    # -- dimensions of the limit page and Betti numbers ------------------------

    def e_infinity_dim(self, p: int, q: int, n: int) -> int:
        if n < 1:
            raise ValueError("n must be at least 1")
        if p < 0 or q < 0:
            return 0
        cell_dim = self.dim(p, q, n)
        if cell_dim == 0:
            return 0
        outgoing = self.rank(p, q, n)
        incoming = self.rank(p - self.ring.dimension, q + 1, n)
        value = cell_dim - outgoing - incoming
        if value < 0:
            raise InternalConsistencyError(
                f"negative limit-page dimension {value} at (p={p}, q={q}, n={n})"
            )
        return value

    def _line_cells(self, i: int, n: int) -> list[tuple[int, int]]:
        row_weight = self.ring.dimension - 1
        cells = []
        for q in range(min(i // row_weight, n // 2) + 1):
            p = i - row_weight * q
            if p >= 0:
                cells.append((p, q))
        return cells

    def betti_raw(self, i: int, n: int) -> int:
        """Sum of limit-page dimensions along the line, with no vanishing shortcut."""
        if i < 0:
            return 0
        return sum(self.e_infinity_dim(p, q, n) for p, q in self._line_cells(i, n))

    def betti_number(self, i: int, n: int) -> int:
        if n < 1:
            raise ValueError("n must be at least 1")
        if i < 0:
            return 0
        if i >= vanishing_bound(self.ring, n):
            return 0
        return self.betti_raw(i, n)

    # -- planning and tables ----------------------------------------------------

    def required_ranks(self, n_min: int, n_max: int, i_max: int) -> list[tuple[int, int, int]]:
        """Distinct (p, q, n_eff) rank computations a table over the grid needs."""
        needed: set[tuple[int, int, int]] = set()
        for n in range(n_min, n_max + 1):
            top = min(i_max, vanishing_bound(self.ring, n) - 1)
            for i in range(top + 1):
                for p, q in self._line_cells(i, n):
                    for cell in ((p, q), (p - self.ring.dimension, q + 1)):
                        cp, cq = cell
                        if cq <= 0 or cp < 0 or 2 * cq > n:
                            continue
                        needed.add((cp, cq, min(n, cp + 2 * cq)))
        return sorted(needed)

    def _plan_caps(self, tasks: Iterable[tuple[int, int, int]]) -> None:
        for p, q, n_eff in tasks:
            cap = self.dim(p, q, n_eff)
            key = (p, q)
            if cap > self._planned_cap.get(key, 0):
                self._planned_cap[key] = cap

    def compute_ranks(self, tasks: list[tuple[int, int, int]], workers: int = 1) -> None:
        """Fill the rank cache for the given tasks, optionally with a process pool."""
        pending = [t for t in tasks if (t[0], t[1], min(t[2], t[0] + 2 * t[1])) not in self._ranks]
        self._plan_caps(pending)
        if workers <= 1 or len(pending) <= 1:
            for p, q, n_eff in pending:
                self.rank(p, q, n_eff)
            return
        by_cell: dict[tuple[int, int], list[int]] = {}
        for p, q, n_eff in pending:
            by_cell.setdefault((p, q), []).append(n_eff)
        jobs = sorted(
            ((p, q, tuple(sorted(set(ns)))) for (p, q), ns in by_cell.items()),
            key=lambda job: -(self.dim(job[0], job[1], job[2][-1]) ** 2),
        )
        init_args = (serialize_ring(self.ring), self.reduced, self.exact_only)
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_pool_init, initargs=init_args
        ) as pool:
            for p, q, pairs in pool.map(_pool_ranks, jobs, chunksize=1):
                for n_eff, value in pairs:
                    self._ranks[(p, q, n_eff)] = value


@dataclass
class BettiTable:
    """Grid of Betti numbers over an n range, with stabilization metadata."""

    ring: GradedRing
    n_min: int
    n_max: int
    i_max: int
    grid: dict[tuple[int, int], int]  # (n, i) -> Betti number
    stabilization_onsets: dict[int, int] = field(default_factory=dict)
    vanishing_bounds: dict[int, int] = field(default_factory=dict)

    def betti(self, n: int, i: int) -> int:
        return self.grid[(n, i)]

    def row(self, n: int) -> list[int]:
        return [self.grid[(n, i)] for i in range(self.i_max + 1)]


class DiagonalRun(NamedTuple):
    """A constant trailing run along the line i = slope * n + offset."""

    slope: int
    offset: int
    value: int
    n_start: int
    n_end: int


@dataclass
class StabilizationReport:
    """Observed in-grid constancy; never extrapolated beyond the grid."""

    onsets: dict[int, int]  # i -> smallest n with b_i constant through n_max
    diagonals: tuple[DiagonalRun, ...]


def _engine_key(ring: GradedRing, reduced: bool, exact_only: bool):
    return (ring, reduced, exact_only)


_ENGINES: dict[tuple, BettiEngine] = {}


def engine_for(ring: GradedRing, reduced: bool = True, exact_only: bool = False) -> BettiEngine:
    """Shared per-ring engine so rank caches persist across queries."""
    key = _engine_key(ring, reduced, exact_only)
    engine = _ENGINES.get(key)
    if engine is None:
        engine = BettiEngine(ring, reduced=reduced, exact_only=exact_only)
        _ENGINES[key] = engine
    return engine


def e_infinity_dim(ring: GradedRing, p: int, q: int, n: int, reduced: bool = True) -> int:
    return engine_for(ring, reduced).e_infinity_dim(p, q, n)


def betti_number(ring: GradedRing, i: int, n: int, reduced: bool = True) -> int:
    return engine_for(ring, reduced).betti_number(i, n)


def betti_table(
    ring: GradedRing,
    n_min: int,
    n_max: int,
    i_max: int,
    *,
    reduced: bool = True,
    exact_only: bool = False,
    workers: int = 1,
) -> BettiTable:
    if not 1 <= n_min <= n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    if i_max < 0:
        raise ValueError("i_max must be nonnegative")
    engine = engine_for(ring, reduced, exact_only)
    engine.compute_ranks(engine.required_ranks(n_min, n_max, i_max), workers=workers)
    grid: dict[tuple[int, int], int] = {}
    for n in range(n_min, n_max + 1):
        for i in range(i_max + 1):
            grid[(n, i)] = engine.betti_number(i, n)
    onsets: dict[int, int] = {}
    for i in range(i_max + 1):
        onset = n_max
        while onset > n_min and grid[(onset - 1, i)] == grid[(n_max, i)]:
            onset -= 1
        onsets[i] = onset
    bounds = {n: vanishing_bound(ring, n) for n in range(n_min, n_max + 1)}
    return BettiTable(
        ring=ring,
        n_min=n_min,
        n_max=n_max,
        i_max=i_max,
        grid=grid,
        stabilization_onsets=onsets,
        vanishing_bounds=bounds,
    )


def stable_betti(ring: GradedRing, i: int) -> int:
    """The stable value, evaluated at the provable stabilization point n = i + 1."""
    return betti_number(ring, i, max(i + 1, 1))


def detect_stabilization(table: BettiTable) -> StabilizationReport:
    """Per-i onsets and constant diagonal runs (slopes 1..D-1) observed in the grid."""
    runs: list[DiagonalRun] = []
    span = range(table.n_min, table.n_max + 1)
    for slope in range(1, table.ring.dimension):
        offsets = range(-slope * table.n_max, table.i_max + 1)
        for offset in offsets:
            points = [
                (n, table.grid[(n, slope * n + offset)])
                for n in span
                if 0 <= slope * n + offset <= table.i_max
            ]
            if len(points) < 3:
                continue
            value = points[-1][1]
            start = len(points) - 1
            while start > 0 and points[start - 1][1] == value:
                start -= 1
            if len(points) - start >= 3 and value > 0:
                runs.append(DiagonalRun(slope, offset, value, points[start][0], points[-1][0]))
    return StabilizationReport(
        onsets=dict(table.stabilization_onsets), diagonals=tuple(runs)
    )


def betti_odd_closed(ring: GradedRing, n: int) -> list[int]:
    """Betti numbers of n points on an odd-dimensional manifold, by closed formula.

    Dimensions, graded by cohomological degree, of the direct sum over
    i + j = n of Sym^i(even cohomology) tensor Exterior^j(odd cohomology).
    """
    if ring.dimension % 2 == 0:
        raise ValueError("even-dimensional rings take the spectral-sequence path")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [1]
    top_degree = n * ring.dimension
    # table[j][d]: ways to place j points with total cohomological degree d
    table = [[0] * (top_degree + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for index in range(ring.size):
        degree = ring.degree(index)
        if degree % 2 == 0:
            # symmetric factor: any number of points may share this class,
            # so row j reads the already-updated row j - 1
            for j in range(1, n + 1):
                row, prev = table[j], table[j - 1]
                for d in range(degree, top_degree + 1):
                    row[d] += prev[d - degree]
        else:
            # exterior factor: at most one point, so rows update top-down
            for j in range(n, 0, -1):
                row, prev = table[j], table[j - 1]
                for d in range(degree, top_degree + 1):
                    row[d] += prev[d - degree]
    return table[n]


def _pool_init(ring_json: str, reduced: bool, exact_only: bool) -> None:
    global _POOL_ENGINE
    _POOL_ENGINE = BettiEngine(parse_ring(ring_json), reduced=reduced, exact_only=exact_only)


def _pool_ranks(job: tuple[int, int, tuple[int, ...]]):
    p, q, truncations = job
    engine = _POOL_ENGINE
    engine._plan_caps((p, q, n_eff) for n_eff in truncations)
    return p, q, [(n_eff, engine.rank(p, q, n_eff)) for n_eff in truncations]
