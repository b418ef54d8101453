"""Named cohomology rings selectable from the command line."""
from __future__ import annotations

import re

from .rings import (
    GradedRing,
    ring_cp,
    ring_even_sphere,
    ring_product,
    ring_projective_bundle_cp2,
    ring_sphere,
    ring_surface,
)


def _build_registry() -> dict[str, GradedRing]:
    rings: dict[str, GradedRing] = {}
    for k in range(1, 7):
        rings[f"cp{k}"] = ring_cp(k)
    for g in range(1, 5):
        rings[f"sigma{g}"] = ring_surface(g)
    rings["cp1xcp1"] = ring_product(ring_cp(1), ring_cp(1))
    rings["cp1xcp1xcp1"] = ring_product(ring_product(ring_cp(1), ring_cp(1)), ring_cp(1))
    rings["cp1xcp2"] = ring_product(ring_cp(1), ring_cp(2))
    rings["pbundle_cp2"] = ring_projective_bundle_cp2()
    rings["sigma1xcp1"] = ring_product(ring_surface(1), ring_cp(1))
    return rings


REGISTRY: dict[str, GradedRing] = _build_registry()

_CP = re.compile(r"^cp([1-9]\d*)$")
_SIGMA = re.compile(r"^sigma(\d+)$")
_SPHERE = re.compile(r"^s([1-9]\d*)$")


def _resolve_factor(name: str) -> GradedRing | None:
    if name in REGISTRY:
        return REGISTRY[name]
    if m := _CP.match(name):
        return ring_cp(int(m.group(1)))
    if m := _SIGMA.match(name):
        return ring_surface(int(m.group(1)))
    if m := _SPHERE.match(name):
        d = int(m.group(1))
        return ring_even_sphere(d // 2) if d % 2 == 0 else ring_sphere(d)
    return None


def resolve_space(name: str) -> GradedRing:
    """Look up a registry name, a dynamic family, or an x-joined product."""
    ring = _resolve_factor(name)
    if ring is not None:
        return ring
    if "x" in name:
        parts = name.split("x")
        factors = [_resolve_factor(part) for part in parts]
        if all(f is not None for f in factors) and len(factors) >= 2:
            product = factors[0]
            for factor in factors[1:]:
                product = ring_product(product, factor)
            return product
    known = ", ".join(sorted(REGISTRY))
    raise KeyError(
        f"unknown space {name!r}; built-ins: {known}; also cpK, sigmaG, sK, "
        "and x-joined products such as cp1xs4"
    )


def space_names() -> list[str]:
    return sorted(REGISTRY)
