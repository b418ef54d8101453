"""Independent cross-checks: algebraic identities the computation must satisfy."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .differential import assemble_matrix
from .engine import engine_for, vanishing_bound
from .rings import GradedRing, euler_characteristic


class CheckResult(NamedTuple):
    passed: bool
    oracle: str
    ring: str
    coordinates: str
    expected: str
    actual: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.oracle} {self.ring} {self.coordinates} "
            f"expected={self.expected} actual={self.actual}"
        )


class OracleReport(NamedTuple):
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]


def _result(oracle, ring, coordinates, expected, actual) -> CheckResult:
    return CheckResult(
        passed=(expected == actual),
        oracle=oracle,
        ring=ring.name,
        coordinates=coordinates,
        expected=str(expected),
        actual=str(actual),
    )


def check_d_squared(
    ring: GradedRing, n: int, i_max: int, reduced: bool = True
) -> list[CheckResult]:
    """The differential composed with itself must vanish on every cell."""
    results = []
    mode = "reduced" if reduced else "unreduced"
    row_weight = ring.dimension - 1
    for q in range(2, n // 2 + 1):
        p = 0
        while p + row_weight * q <= i_max + ring.dimension:
            inner = assemble_matrix(ring, p, q, n, reduced)
            if inner.cols:
                outer = assemble_matrix(ring, p + ring.dimension, q - 1, n, reduced)
                composite = outer.matmul(inner)
                results.append(
                    _result(
                        f"d-squared[{mode}]",
                        ring,
                        f"(p={p},q={q},n={n})",
                        0,
                        len(composite.entries),
                    )
                )
            p += 1
    return results


def _binomial_euler(chi: Fraction, n: int) -> int:
    """Generalized binomial coefficient C(chi, n) as an exact integer."""
    value = Fraction(1)
    for t in range(n):
        value *= Fraction(chi) - t
    value /= math.factorial(n)
    if value.denominator != 1:
        raise ArithmeticError(f"Euler count C({chi}, {n}) is not an integer")
    return int(value)


def check_euler(ring: GradedRing, n: int, reduced: bool = True) -> CheckResult:
    """Alternating sum of Betti numbers equals the binomial Euler count."""
    engine = engine_for(ring, reduced)
    total = 0
    for i in range(vanishing_bound(ring, n)):
        total += engine.betti_number(i, n) * (1 if i % 2 == 0 else -1)
    expected = _binomial_euler(euler_characteristic(ring), n)
    return _result("euler", ring, f"(n={n})", expected, total)


def check_reduction_equivalence(ring: GradedRing, n: int, i_max: int) -> list[CheckResult]:
    """Dropping top-class-heavy monomials must not change any Betti number."""
    reduced_engine = engine_for(ring, reduced=True)
    full_engine = engine_for(ring, reduced=False)
    results = []
    for i in range(i_max + 1):
        results.append(
            _result(
                "reduction-equivalence",
                ring,
                f"(i={i},n={n})",
                full_engine.betti_number(i, n),
                reduced_engine.betti_number(i, n),
            )
        )
    return results


def check_theorems(ring: GradedRing, n_max: int, i_max: int) -> list[CheckResult]:
    """Structural facts: stabilization, vanishing, and surface sharpness."""
    engine = engine_for(ring, reduced=True)
    results = []
    for i in range(min(i_max, 8) + 1):
        for n in range(i + 1, min(i + 4, n_max)):
            results.append(
                _result(
                    "stability",
                    ring,
                    f"(i={i},n={n}->{n + 1})",
                    engine.betti_number(i, n),
                    engine.betti_number(i, n + 1),
                )
            )
    for n in range(1, n_max + 1):
        bound = vanishing_bound(ring, n)
        for i in range(bound, bound + 5):
            results.append(
                _result("vanishing", ring, f"(i={i},n={n})", 0, engine.betti_raw(i, n))
            )
    if ring.dimension == 2 and any(ring.is_odd(k) for k in range(ring.size)):
        for n in range(3, min(8, n_max) + 1):
            value = engine.betti_number(n + 1, n)
            results.append(
                _result("sharpness", ring, f"(i={n + 1},n={n})", True, value > 0)
            )
    return results


def run_all(
    ring: GradedRing, n_min: int, n_max: int, i_max: int
) -> OracleReport:
    """Every oracle over the grid; one result per individual assertion."""
    results: list[CheckResult] = []
    for n in range(n_min, n_max + 1):
        results.extend(check_d_squared(ring, n, i_max, reduced=True))
        results.extend(check_d_squared(ring, n, i_max, reduced=False))
    for n in range(n_min, n_max + 1):
        results.append(check_euler(ring, n))
    for n in range(n_min, min(n_max, 5) + 1):
        results.extend(check_reduction_equivalence(ring, n, i_max))
    results.extend(check_theorems(ring, n_max, i_max))
    return OracleReport(tuple(results))
