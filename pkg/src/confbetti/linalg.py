"""Exact and modular rank computation for sparse rational matrices.

The exact path clears denominators per column and runs fraction-free
(Bareiss-style) integer elimination with Markowitz pivoting and deferred row
scaling. The modular path eliminates over a large prime field and records the
rank of every column prefix in one pass, so one elimination serves every
truncation of the same matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

# Fixed large primes for the modular pre-pass; later entries are retry spares.
PRIMES = (1000003, 999983, 999979, 999961, 999959)

# Above this many dense cells the modular path switches to sparse elimination.
_DENSE_CELL_LIMIT = 20_000_000

# Keep float64 entries exactly integral: reduce once sums could approach 2^53.
_FLOAT_EXACT_LIMIT = 4.0e15

# Largest pivot set certified by exact elimination on the hybrid path.
CERTIFICATION_LIMIT = 64


class UnusablePrimeError(ValueError):
    """The prime divides the denominator of some entry."""


@dataclass
class RationalMatrix:
    """Sparse exact-rational matrix: (row, col) -> nonzero coefficient."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def transpose(self) -> RationalMatrix:
        flipped = {(c, r): v for (r, c), v in self.entries.items()}
        return RationalMatrix(rows=self.cols, cols=self.rows, entries=flipped)

    def matmul(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        rows_by_inner: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, k), v in self.entries.items():
            rows_by_inner.setdefault(k, []).append((r, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (k, c), w in other.entries.items():
            for r, v in rows_by_inner.get(k, ()):
                key = (r, c)
                out[key] = out.get(key, Fraction(0)) + v * w
        out = {key: v for key, v in out.items() if v}
        return RationalMatrix(rows=self.rows, cols=other.cols, entries=out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
        row_pos = {r: i for i, r in enumerate(rows)}
        col_pos = {c: j for j, c in enumerate(cols)}
        picked = {
            (row_pos[r], col_pos[c]): v
            for (r, c), v in self.entries.items()
            if r in row_pos and c in col_pos
        }
        return RationalMatrix(rows=len(rows), cols=len(cols), entries=picked)

    def column_prefix(self, cols: int) -> RationalMatrix:
        kept = {(r, c): v for (r, c), v in self.entries.items() if c < cols}
        return RationalMatrix(rows=self.rows, cols=cols, entries=kept)

    def dump_triplets(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for (r, c), v in sorted(self.entries.items()):
            lines.append(f"{r} {c} {v}")
        return "\n".join(lines) + "\n"


def _integer_rows(m: RationalMatrix) -> dict[int, dict[int, int]]:
    """Clear denominators per column (a rank-preserving column scaling)."""
    col_scale: dict[int, int] = {}
    for (_, c), v in m.entries.items():
        col_scale[c] = lcm(col_scale.get(c, 1), v.denominator)
    rows: dict[int, dict[int, int]] = {}
    for (r, c), v in m.entries.items():
        value = int(v * col_scale[c])
        if value:
            rows.setdefault(r, {})[c] = value
    return rows


def rank(m: RationalMatrix) -> int:
    """Exact rank over Q by fraction-free elimination with Markowitz pivoting.

    Rows untouched for several steps carry a stamp and are rescaled lazily by
    the exact ratio of pivot minors, keeping the elimination single-pass over
    the sparse structure.
    """
    rows = _integer_rows(m)
    col_count: dict[int, int] = {}
    for row in rows.values():
        for c in row:
            col_count[c] = col_count.get(c, 0) + 1
    stamp = {r: 0 for r in rows}
    minors = [1]  # minors[t] = Bareiss pivot after step t
    steps = 0
    while rows:
        best: tuple[tuple[int, int, int], int, int] | None = None
        for r, row in rows.items():
            row_weight = len(row) - 1
            for c in row:
                key = (row_weight * (col_count[c] - 1), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
        assert best is not None
        _, pr, pc = best

        def materialize(r: int) -> dict[int, int]:
            row = rows[r]
            if stamp[r] != steps:
                num, den = minors[steps], minors[stamp[r]]
                row = {c: v * num // den for c, v in row.items()}
                rows[r] = row
                stamp[r] = steps
            return row

        pivot_row = materialize(pr)
        pivot = pivot_row[pc]
        previous = minors[steps]
        steps += 1
        minors.append(pivot)
        for c in pivot_row:
            col_count[c] -= 1
        del rows[pr]
        for r in list(rows):
            if pc not in rows[r]:
                continue
            row = materialize(r)
            multiplier = row.pop(pc)
            col_count[pc] -= 1
            updated: dict[int, int] = {}
            for c, v in row.items():
                if c == pc:
                    continue
                value = (v * pivot - multiplier * pivot_row.get(c, 0)) // previous
                if value:
                    updated[c] = value
                else:
                    col_count[c] -= 1
            for c in pivot_row:
                if c != pc and c not in row:
                    value = -multiplier * pivot_row[c] // previous
                    if value:
                        updated[c] = value
                        col_count[c] = col_count.get(c, 0) + 1
            if updated:
                rows[r] = updated
                stamp[r] = steps
            else:
                del rows[r]
                del stamp[r]
    return steps


@dataclass
class RankProfile:
    """Ranks of every column prefix of one matrix modulo one prime."""

    prime: int
    prefix_ranks: list[int]  # prefix_ranks[k] = rank of the first k columns
    pivots: tuple[tuple[int, int], ...]  # (row, col) in elimination order

    @property
    def rank(self) -> int:
        return self.prefix_ranks[-1]


def _residue_triples(m: RationalMatrix, prime: int, col_cap: int) -> list[tuple[int, int, int]]:
    triples = []
    for (r, c), v in m.entries.items():
        if c >= col_cap:
            continue
        if v.denominator % prime == 0:
            raise UnusablePrimeError(f"prime {prime} divides a denominator")
        residue = v.numerator % prime
        if v.denominator != 1:
            residue = residue * pow(v.denominator % prime, prime - 2, prime) % prime
        if residue:
            triples.append((r, c, residue))
    return triples


def _dense_profile(
    rows: int, col_cap: int, triples: list[tuple[int, int, int]], prime: int
) -> RankProfile:
    matrix = np.zeros((rows, col_cap), dtype=np.float64)
    for r, c, v in triples:
        matrix[r, c] = v
    free = np.ones(rows, dtype=bool)
    pivots: list[tuple[int, int]] = []
    prefix = [0]
    bound = float(prime - 1)
    step_growth = float(prime - 1) ** 2
    for j in range(col_cap):
        if free.any():
            matrix[free, j] %= prime
        candidates = np.nonzero(free & (matrix[:, j] != 0))[0]
        if candidates.size == 0:
            prefix.append(len(pivots))
            continue
        pivot_row = int(candidates[0])
        free[pivot_row] = False
        tail = matrix[pivot_row, j + 1 :]
        tail %= prime
        inverse = pow(int(matrix[pivot_row, j]), prime - 2, prime)
        targets = candidates[1:]
        if targets.size and tail.size:
            factors = (matrix[targets, j] * inverse) % prime
            matrix[np.ix_(targets, np.arange(j + 1, col_cap))] -= np.outer(factors, tail)
            bound += step_growth
            if bound > _FLOAT_EXACT_LIMIT:
                matrix[:, j + 1 :] %= prime
                bound = float(prime - 1)
        pivots.append((pivot_row, j))
        prefix.append(len(pivots))
        if len(pivots) == rows:
            prefix.extend([rows] * (col_cap - j - 1))
            break
    return RankProfile(prime=prime, prefix_ranks=prefix, pivots=tuple(pivots))


def _sparse_profile(
    rows: int, col_cap: int, triples: list[tuple[int, int, int]], prime: int
) -> RankProfile:
    by_row: dict[int, dict[int, int]] = {}
    for r, c, v in triples:
        by_row.setdefault(r, {})[c] = v
    live = dict(by_row)
    pivots: list[tuple[int, int]] = []
    prefix = [0]
    for j in range(col_cap):
        pivot_row = None
        for r in sorted(live):
            if live[r].get(j, 0) % prime:
                pivot_row = r
                break
        if pivot_row is None:
            prefix.append(len(pivots))
            continue
        pivot_entries = {c: v % prime for c, v in live.pop(pivot_row).items() if v % prime}
        inverse = pow(pivot_entries[j], prime - 2, prime)
        for r in list(live):
            row = live[r]
            factor = row.get(j, 0) % prime
            if not factor:
                row.pop(j, None)
                continue
            factor = factor * inverse % prime
            for c, v in pivot_entries.items():
                if c <= j:
                    continue
                row[c] = (row.get(c, 0) - factor * v) % prime
            row.pop(j, None)
            if not any(v % prime for v in row.values()):
                del live[r]
        pivots.append((pivot_row, j))
        prefix.append(len(pivots))
        if len(pivots) == rows:
            prefix.extend([rows] * (col_cap - j - 1))
            break
    return RankProfile(prime=prime, prefix_ranks=prefix, pivots=tuple(pivots))


def rank_profile_modular(
    m: RationalMatrix, prime: int, col_cap: int | None = None
) -> RankProfile:
    """Prefix ranks of m modulo prime, eliminating columns strictly left to right."""
    cap = m.cols if col_cap is None else min(col_cap, m.cols)
    triples = _residue_triples(m, prime, cap)
    if m.rows * cap <= _DENSE_CELL_LIMIT:
        return _dense_profile(m.rows, cap, triples, prime)
    return _sparse_profile(m.rows, cap, triples, prime)


def rank_modular(m: RationalMatrix, prime: int) -> int:
    """Rank of m reduced mod prime; always a lower bound for the exact rank."""
    if m.rows == 0 or m.cols == 0 or not m.entries:
        return 0
    return rank_profile_modular(m, prime).rank
