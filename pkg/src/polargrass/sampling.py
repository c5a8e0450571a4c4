"""Seeded random instances for scripted verification runs.

Every generator takes an explicit :class:`numpy.random.Generator`, so a
recorded 64-bit seed reproduces an instance bit-for-bit.  The JSON-level
factory :func:`generate_input` is what ``report-suite`` scenario configs
use; the matrix-level helpers are shared with the property tests.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .errors import FormatError
from .linalg import op_norm
from .polarization import complexify, eigensplit
from .siegel import BlockSymplectic, SiegelPoint, disk_to_halfspace, sp_from_siegel_point
from .triples import CompatibleTriple, ComplexStructure, pullback_triple, standard_triple

__all__ = [
    "random_orthogonal",
    "random_unitary",
    "random_invertible",
    "random_contraction",
    "random_symplectic",
    "generate_input",
]


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like real orthogonal matrix via the exponential of a skew matrix."""
    A = rng.standard_normal((n, n))
    return expm(A - A.T)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return expm(0.5 * (A - A.conj().T))


def random_invertible(n: int, rng: np.random.Generator) -> np.ndarray:
    """Well-conditioned real invertible matrix (exponential of a scaled one)."""
    return expm(0.4 * rng.standard_normal((n, n)))


def random_contraction(n: int, rng: np.random.Generator, margin: float = 0.15) -> np.ndarray:
    """Random complex symmetric matrix with operator norm below 1 - margin."""
    S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    S = 0.5 * (S + S.T)
    radius = (1.0 - margin) * rng.uniform(0.2, 1.0)
    return radius * S / max(1.0, op_norm(S) / 0.999)


def random_symplectic(n: int, rng: np.random.Generator) -> BlockSymplectic:
    """Block element through the disk: point stabilizer times a translation."""
    u = sp_from_siegel_point(SiegelPoint(random_contraction(n, rng)))
    return u.compose(BlockSymplectic.from_unitary(random_unitary(n, rng)))


def _pullback(n: int, rng: np.random.Generator) -> CompatibleTriple:
    return pullback_triple(random_invertible(2 * n, rng), standard_triple(n))


def generate_input(spec: dict, rng: np.random.Generator) -> dict:
    """Build a verb input object from a scenario ``generate`` block.

    The block names a recipe (``make``) plus its size parameters; the
    result is an ordinary JSON input object, so generated scenarios pass
    through exactly the same parsing path as hand-written ones.
    """
    from . import serialize as se  # local import to avoid a cycle at module load

    if not isinstance(spec, dict) or "make" not in spec:
        raise FormatError("generate block must be an object with a 'make' key")
    make = spec.get("make")
    known = {
        "standard_triple",
        "pullback_triple",
        "partial_triple",
        "negated_structure",
        "siegel_point",
        "halfspace_point",
        "symplectic_action",
        "orthogonal_subspace",
    }
    if make not in known:
        raise FormatError(f"unknown generate recipe {make!r}")
    extra = set(spec) - {"make", "n", "omit"}
    if extra:
        raise FormatError(f"unknown generate keys {sorted(extra)}")
    n = spec.get("n", 4)
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"generate size n must be a positive integer, got {n!r}")

    if make == "standard_triple":
        return se.triple_to_json(standard_triple(n))
    if make == "pullback_triple":
        return se.triple_to_json(_pullback(n, rng))
    if make == "partial_triple":
        omit = spec.get("omit")
        if omit not in ("g", "J", "omega"):
            raise FormatError(f"omit must be one of g/J/omega, got {omit!r}")
        obj = se.triple_to_json(_pullback(n, rng))
        del obj[omit]
        return obj
    if make == "negated_structure":
        t = _pullback(n, rng)
        return {
            "J": se.structure_to_json(ComplexStructure(-t.Jmat)),
            "omega": se.form_to_json(t.omega),
        }
    if make == "siegel_point":
        p = SiegelPoint(random_contraction(n, rng))
        return se.disk_point_to_json(p)
    if make == "halfspace_point":
        p = disk_to_halfspace(SiegelPoint(random_contraction(n, rng)))
        return se.disk_point_to_json(p)
    if make == "symplectic_action":
        u = random_symplectic(n, rng)
        p = SiegelPoint(random_contraction(n, rng))
        return {
            "a": se.matrix_to_json(u.a),
            "b": se.matrix_to_json(u.b),
            "Z": se.disk_point_to_json(p),
        }
    # orthogonal_subspace: a rotated standard polarization of R^2n.
    split = eigensplit(complexify(standard_triple(n)))
    w = random_orthogonal(2 * n, rng) @ split.lplus
    return {
        "frame": {**se.matrix_to_json(w), "ambient_dim": 2 * n},
    }
