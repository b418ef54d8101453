"""Graded-commutative rational cohomology rings with Poincaré duality."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

# products[i][j] lists the nonzero structure constants of y_i * y_j.
ProductRow = tuple[tuple[int, Fraction], ...]
ProductTable = tuple[tuple[ProductRow, ...], ...]


class RingError(ValueError):
    """Base class for ring-document and ring-law failures."""


class RingFormatError(RingError):
    """Malformed ring-spec document."""


class RingValidationError(RingError):
    """A graded-algebra law is violated; message names the law and indices."""


class BasisClass(NamedTuple):
    label: str
    degree: int


@dataclass(frozen=True)
class GradedRing:
    """Finite-dimensional graded-commutative Q-algebra with unit and orientation class."""

    name: str
    dimension: int
    basis: tuple[BasisClass, ...]
    products: ProductTable
    unit_index: int
    orientation_index: int

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def top_generator_count(self) -> int:
        """m: basis elements other than the unit are indexed 1..m."""
        return len(self.basis) - 1

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def is_odd(self, i: int) -> bool:
        return self.basis[i].degree % 2 == 1


@dataclass(frozen=True)
class RingElement:
    """Sparse rational coefficient vector over a ring basis."""

    ring: GradedRing
    coeffs: tuple[tuple[int, Fraction], ...]  # (index, coefficient), sorted, nonzero

    def coefficient(self, i: int) -> Fraction:
        for j, c in self.coeffs:
            if j == i:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> Iterable[tuple[int, Fraction]]:
        return self.coeffs


def element(ring: GradedRing, coeffs: Mapping[int, Fraction]) -> RingElement:
    """Build a RingElement, dropping zeros and sorting by basis index."""
    cleaned = tuple(sorted((i, Fraction(c)) for i, c in coeffs.items() if c))
    return RingElement(ring, cleaned)


def basis_element(ring: GradedRing, i: int) -> RingElement:
    return RingElement(ring, ((i, Fraction(1)),))


def multiply(ring: GradedRing, u: RingElement, v: RingElement) -> RingElement:
    """Bilinear extension of the structure constants."""
    if u.ring != ring or v.ring != ring:
        raise RingError("elements are not over the given ring")
    out: dict[int, Fraction] = {}
    for a, ca in u.coeffs:
        row = ring.products[a]
        for b, cb in v.coeffs:
            scale = ca * cb
            for k, c in row[b]:
                out[k] = out.get(k, Fraction(0)) + scale * c
    return element(ring, out)


def euler_characteristic(ring: GradedRing) -> int:
    return sum(-1 if cls.degree % 2 else 1 for cls in ring.basis)


# ---------------------------------------------------------------------------
# exact linear solves for the pairing blocks


def _invert_matrix(rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Exact Gauss-Jordan inverse; None when singular."""
    size = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _indices_by_degree(ring: GradedRing) -> dict[int, list[int]]:
    by_degree: dict[int, list[int]] = {}
    for i, cls in enumerate(ring.basis):
        by_degree.setdefault(cls.degree, []).append(i)
    return by_degree


def _pairing_block(ring: GradedRing, rows: list[int], cols: list[int]) -> list[list[Fraction]]:
    """Entries: coefficient of the orientation class in y_a * y_b."""
    top = ring.orientation_index
    block = []
    for a in rows:
        block.append([dict(ring.products[a][b]).get(top, Fraction(0)) for b in cols])
    return block


def dual_basis(ring: GradedRing) -> list[RingElement]:
    """Elements y_i^v with the orientation coefficient of y_i * y_j^v equal to delta_ij."""
    by_degree = _indices_by_degree(ring)
    duals: dict[int, RingElement] = {}
    for deg, rows in by_degree.items():
        cols = by_degree.get(ring.dimension - deg, [])
        block = _pairing_block(ring, rows, cols)
        inverse = _invert_matrix(block) if len(rows) == len(cols) else None
        if inverse is None:
            raise RingValidationError(f"singular Poincaré pairing block in degree {deg}")
        for pos, i in enumerate(rows):
            # column pos of the inverse solves P * c = e_pos
            duals[i] = element(ring, {cols[r]: inverse[r][pos] for r in range(len(cols))})
    return [duals[i] for i in range(ring.size)]


# ---------------------------------------------------------------------------
# construction and validation


def _complete_products(
    size: int,
    degrees: list[int],
    sparse: Mapping[tuple[int, int], Mapping[int, Fraction]],
) -> ProductTable:
    """Extend an upper-triangular product table by graded commutativity."""
    full: list[list[ProductRow]] = [[() for _ in range(size)] for _ in range(size)]
    for (i, j), terms in sparse.items():
        row = tuple(sorted((k, Fraction(c)) for k, c in terms.items() if c))
        full[i][j] = row
        if i != j:
            sign = -1 if degrees[i] % 2 and degrees[j] % 2 else 1
            full[j][i] = tuple((k, sign * c) for k, c in row)
    return tuple(tuple(row) for row in full)


def _make_ring(
    name: str,
    dimension: int,
    basis: list[BasisClass],
    sparse: Mapping[tuple[int, int], Mapping[int, Fraction]],
) -> GradedRing:
    degrees = [cls.degree for cls in basis]
    units = [i for i, d in enumerate(degrees) if d == 0]
    if len(units) != 1:
        raise RingValidationError(f"need exactly one degree-0 class, found {len(units)}")
    if units[0] != 0:
        raise RingValidationError("basis element 0 must be the unit (degree 0)")
    tops = [i for i, d in enumerate(degrees) if d == dimension]
    if not tops:
        raise RingValidationError("no orientation class (degree equal to the dimension)")
    if len(tops) > 1 and dimension > 0:
        raise RingValidationError(f"multiple degree-{dimension} classes: {tops}")
    ring = GradedRing(
        name=name,
        dimension=dimension,
        basis=tuple(basis),
        products=_complete_products(len(basis), degrees, sparse),
        unit_index=0,
        orientation_index=tops[0],
    )
    validate_ring(ring)
    return ring


def validate_ring(ring: GradedRing) -> None:
    """Check every graded-algebra law; raise RingValidationError naming the first failure."""
    size = ring.size
    labels = [cls.label for cls in ring.basis]
    if len(set(labels)) != size:
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise RingValidationError(f"duplicate basis labels: {dupes}")
    if ring.dimension < 0:
        raise RingValidationError("dimension must be nonnegative")
    for i, cls in enumerate(ring.basis):
        if not 0 <= cls.degree <= ring.dimension:
            raise RingValidationError(f"degree of basis element {i} outside [0, {ring.dimension}]")

    # degree additivity; products above the top degree vanish
    for i in range(size):
        for j in range(size):
            total = ring.degree(i) + ring.degree(j)
            for k, c in ring.products[i][j]:
                if ring.degree(k) != total:
                    raise RingValidationError(
                        f"product y_{i}*y_{j} has a term in degree {ring.degree(k)}, expected {total}"
                    )

    # unit law
    for i in range(size):
        if ring.products[ring.unit_index][i] != ((i, Fraction(1)),):
            raise RingValidationError(f"unit law fails: y_0*y_{i} != y_{i}")

    # odd squares vanish (graded commutativity on the diagonal)
    for i in range(size):
        if ring.is_odd(i) and ring.products[i][i]:
            raise RingValidationError(f"odd-degree class y_{i} has nonzero square")

    # associativity on all basis triples
    for i in range(size):
        ei = basis_element(ring, i)
        for j in range(size):
            left_ij = multiply(ring, ei, basis_element(ring, j))
            for k in range(size):
                ek = basis_element(ring, k)
                left = multiply(ring, left_ij, ek)
                right = multiply(ring, ei, multiply(ring, basis_element(ring, j), ek))
                if left != right:
                    raise RingValidationError(f"associativity fails on (y_{i}, y_{j}, y_{k})")

    # Poincaré pairing blocks square and invertible
    by_degree = _indices_by_degree(ring)
    for deg, rows in by_degree.items():
        if deg > ring.dimension - deg:
            continue
        cols = by_degree.get(ring.dimension - deg, [])
        if len(rows) != len(cols):
            raise RingValidationError(
                f"pairing block degree {deg} is {len(rows)}x{len(cols)}, not square"
            )
        if _invert_matrix(_pairing_block(ring, rows, cols)) is None:
            raise RingValidationError(f"singular Poincaré pairing block in degree {deg}")


# ---------------------------------------------------------------------------
# ring-spec documents


def _parse_coefficient(value: object, where: str) -> Fraction:
    if isinstance(value, bool):
        raise RingFormatError(f"{where}: coefficient must be an integer or 'p/q' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise RingFormatError(f"{where}: bad rational {value!r}") from exc
    raise RingFormatError(f"{where}: coefficient must be an integer or 'p/q' string")


def parse_ring(text: str) -> GradedRing:
    """Parse and validate a ring-spec JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RingFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise RingFormatError("top level must be a JSON object")
    for field in ("name", "dimension", "basis", "products"):
        if field not in doc:
            raise RingFormatError(f"missing field {field!r}")
    name = doc["name"]
    dimension = doc["dimension"]
    if not isinstance(name, str):
        raise RingFormatError("'name' must be a string")
    if isinstance(dimension, bool) or not isinstance(dimension, int):
        raise RingFormatError("'dimension' must be an integer")
    raw_basis = doc["basis"]
    if not isinstance(raw_basis, list) or not raw_basis:
        raise RingFormatError("'basis' must be a nonempty array")
    basis: list[BasisClass] = []
    for pos, entry in enumerate(raw_basis):
        if not isinstance(entry, dict) or set(entry) != {"label", "degree"}:
            raise RingFormatError(f"basis[{pos}] must be an object with 'label' and 'degree'")
        label, degree = entry["label"], entry["degree"]
        if not isinstance(label, str) or not label:
            raise RingFormatError(f"basis[{pos}].label must be a nonempty string")
        if isinstance(degree, bool) or not isinstance(degree, int):
            raise RingFormatError(f"basis[{pos}].degree must be an integer")
        basis.append(BasisClass(label, degree))
    raw_products = doc["products"]
    if not isinstance(raw_products, list):
        raise RingFormatError("'products' must be an array")
    sparse: dict[tuple[int, int], dict[int, Fraction]] = {}
    size = len(basis)
    for pos, entry in enumerate(raw_products):
        where = f"products[{pos}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise RingFormatError(f"{where} must be [i, j, {{k: coefficient}}]")
        i, j, terms = entry
        for idx in (i, j):
            if isinstance(idx, bool) or not isinstance(idx, int) or not 0 <= idx < size:
                raise RingFormatError(f"{where}: index {idx!r} out of range")
        if i > j:
            raise RingFormatError(f"{where}: indices must satisfy i <= j")
        if (i, j) in sparse:
            raise RingFormatError(f"{where}: duplicate entry for pair ({i}, {j})")
        if not isinstance(terms, dict):
            raise RingFormatError(f"{where}: third item must be an object")
        parsed: dict[int, Fraction] = {}
        for key, value in terms.items():
            try:
                k = int(key)
            except ValueError as exc:
                raise RingFormatError(f"{where}: bad basis index key {key!r}") from exc
            if not 0 <= k < size:
                raise RingFormatError(f"{where}: index key {k} out of range")
            parsed[k] = _parse_coefficient(value, where)
        sparse[(i, j)] = parsed
    return _make_ring(name, dimension, basis, sparse)


def _format_coefficient(c: Fraction) -> int | str:
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize_ring(ring: GradedRing) -> str:
    """Canonical ring-spec JSON document; round-trips through parse_ring."""
    products = []
    for i in range(ring.size):
        for j in range(i, ring.size):
            row = ring.products[i][j]
            if row:
                products.append([i, j, {str(k): _format_coefficient(c) for k, c in row}])
    doc = {
        "name": ring.name,
        "dimension": ring.dimension,
        "basis": [{"label": cls.label, "degree": cls.degree} for cls in ring.basis],
        "products": products,
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# built-in rings


def _with_unit_rows(
    size: int, extra: Mapping[tuple[int, int], Mapping[int, Fraction]]
) -> dict[tuple[int, int], dict[int, Fraction]]:
    sparse = {(0, i): {i: Fraction(1)} for i in range(size)}
    sparse.update({pair: dict(terms) for pair, terms in extra.items()})
    return sparse


def ring_cp(k: int) -> GradedRing:
    """Q[x]/(x^(k+1)) with |x| = 2: complex projective k-space."""
    if k < 1:
        raise ValueError("k must be at least 1")
    basis = [BasisClass("1", 0)] + [
        BasisClass("x" if a == 1 else f"x{a}", 2 * a) for a in range(1, k + 1)
    ]
    extra = {
        (a, b): {a + b: Fraction(1)}
        for a in range(1, k + 1)
        for b in range(a, k + 1)
        if a + b <= k
    }
    return _make_ring(f"cp{k}", 2 * k, basis, _with_unit_rows(k + 1, extra))


def ring_surface(g: int) -> GradedRing:
    """Closed orientable surface of genus g; g = 0 gives ring_cp(1)."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if g == 0:
        return ring_cp(1)
    basis = (
        [BasisClass("1", 0)]
        + [BasisClass(f"a{i}", 1) for i in range(1, g + 1)]
        + [BasisClass(f"b{i}", 1) for i in range(1, g + 1)]
        + [BasisClass("t", 2)]
    )
    top = 2 * g + 1
    extra = {(i, g + i): {top: Fraction(1)} for i in range(1, g + 1)}
    return _make_ring(f"sigma{g}", 2, basis, _with_unit_rows(2 * g + 2, extra))


def ring_even_sphere(k: int) -> GradedRing:
    """Q[x]/(x^2) with |x| = 2k: the 2k-sphere; k = 1 gives ring_cp(1)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return ring_cp(1)
    basis = [BasisClass("1", 0), BasisClass("x", 2 * k)]
    return _make_ring(f"s{2 * k}", 2 * k, basis, _with_unit_rows(2, {}))


def ring_sphere(d: int) -> GradedRing:
    """The d-sphere for d >= 1; odd d gives an exterior class, even d defers to ring_even_sphere."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if d % 2 == 0:
        return ring_even_sphere(d // 2)
    basis = [BasisClass("1", 0), BasisClass("x", d)]
    return _make_ring(f"s{d}", d, basis, _with_unit_rows(2, {}))


def ring_product(r1: GradedRing, r2: GradedRing) -> GradedRing:
    """Künneth product with the Koszul sign; basis ordered left factor major."""
    size2 = r2.size
    basis = [
        BasisClass(f"{c1.label}|{c2.label}", c1.degree + c2.degree)
        for c1 in r1.basis
        for c2 in r2.basis
    ]
    size = len(basis)
    sparse: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(size):
        a, b = divmod(i, size2)
        for j in range(i, size):
            c, d = divmod(j, size2)
            sign = -1 if r2.is_odd(b) and r1.is_odd(c) else 1
            terms: dict[int, Fraction] = {}
            for k1, c1 in r1.products[a][c]:
                for k2, c2 in r2.products[b][d]:
                    k = k1 * size2 + k2
                    terms[k] = terms.get(k, Fraction(0)) + sign * c1 * c2
            terms = {k: c for k, c in terms.items() if c}
            if terms:
                sparse[(i, j)] = terms
    return _make_ring(f"{r1.name}x{r2.name}", r1.dimension + r2.dimension, basis, sparse)


def ring_projective_bundle_cp2() -> GradedRing:
    """Q[h, xi]/(h^3, xi^2 - h*xi): the plane bundle P(O + O(1)) over cp2."""
    basis = [
        BasisClass("1", 0),
        BasisClass("h", 2),
        BasisClass("xi", 2),
        BasisClass("h2", 4),
        BasisClass("hxi", 4),
        BasisClass("h2xi", 6),
    ]
    one = Fraction(1)
    extra = {
        (1, 1): {3: one},  # h*h = h2
        (1, 2): {4: one},  # h*xi = hxi
        (2, 2): {4: one},  # xi*xi = hxi
        (1, 4): {5: one},  # h*hxi = h2xi
        (2, 3): {5: one},  # xi*h2 = h2xi
        (2, 4): {5: one},  # xi*hxi = h2xi
    }
    return _make_ring("pbundle_cp2", 6, basis, _with_unit_rows(6, extra))
