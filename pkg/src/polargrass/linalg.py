"""Shared numerical substrate: norms, definiteness, frames, tolerances.

All matrices are dense complex128 numpy arrays.  Subspaces are carried by
:class:`Frame` objects whose columns are orthonormal for the *standard*
Hermitian pairing; metric-orthonormal bases (needed by the eigensplit
machinery) are handled in :mod:`polargrass.polarization`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    FormatError,
    NonHermitian,
    NotPositiveDefinite,
    RankMismatch,
)

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Tolerance ladder used across the package.

    Attributes
    ----------
    eq_tol
        Algebraic identity residuals (default 1e-10).
    spd_tol
        Strict-positivity margins for eigenvalue checks (default 1e-12).
    cr_tol
        Quadrature / finite-difference residuals (default 1e-6).
    """

    eq_tol: float = 1e-10
    spd_tol: float = 1e-12
    cr_tol: float = 1e-6

    def __post_init__(self) -> None:
        for field in ("eq_tol", "spd_tol", "cr_tol"):
            value = getattr(self, field)
            if not (value > 0.0 and np.isfinite(value)):
                raise FormatError(f"{field} must be positive and finite, got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite complex128 2-D array.

    Raises
    ------
    FormatError
        If the input is not 2-D, contains non-finite entries, or ``square``
        is requested and the shape is not square.
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise FormatError(f"expected a 2-D array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise FormatError("matrix contains non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise FormatError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def as_real_matrix(a, square: bool = False, tol: float = 1e-12) -> np.ndarray:
    """Like :func:`as_matrix` but require a negligible imaginary part."""
    arr = as_matrix(a, square=square)
    if np.abs(arr.imag).max(initial=0.0) > tol:
        raise FormatError("matrix has a non-negligible imaginary part")
    return arr.real.astype(np.float64)


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(np.asarray(a)))


def op_norm(a) -> float:
    """Operator (spectral) norm, i.e. the largest singular value."""
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, ord=2))


def is_hermitian(a, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    arr = as_matrix(a, square=True)
    return hs_norm(arr - arr.conj().T) <= tol * max(1.0, hs_norm(arr))


def is_positive_definite(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether a Hermitian matrix is positive definite with margin ``spd_tol``.

    Raises
    ------
    NonHermitian
        If ``a`` deviates from Hermitian symmetry beyond ``eq_tol``.
    """
    arr = as_matrix(a, square=True)
    dev = hs_norm(arr - arr.conj().T)
    if dev > tol.eq_tol * max(1.0, hs_norm(arr)):
        raise NonHermitian(f"Hermitian deviation {dev:.3e}")
    eigs = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
    return bool(eigs.min() > tol.spd_tol)


def min_eig_hermitian(a) -> float:
    arr = as_matrix(a, square=True)
    return float(np.linalg.eigvalsh(0.5 * (arr + arr.conj().T)).min())


def inverse_sqrt_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse square root of a Hermitian positive definite matrix.

    Computed through the eigendecomposition; the result is Hermitian
    positive definite and satisfies ``r @ a @ r = I`` to machine precision
    for well-conditioned input.

    Raises
    ------
    NonHermitian
        If ``a`` is not Hermitian within ``eq_tol``.
    NotPositiveDefinite
        If the smallest eigenvalue does not clear ``spd_tol``.
    """
    arr = as_matrix(a, square=True)
    dev = hs_norm(arr - arr.conj().T)
    if dev > tol.eq_tol * max(1.0, hs_norm(arr)):
        raise NonHermitian(f"Hermitian deviation {dev:.3e}")
    eigvals, eigvecs = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    if eigvals.min() <= tol.spd_tol:
        raise NotPositiveDefinite(f"minimum eigenvalue {eigvals.min():.3e}")
    return (eigvecs * (eigvals**-0.5)) @ eigvecs.conj().T


def sqrt_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian positive definite square root (same validation as the inverse)."""
    arr = as_matrix(a, square=True)
    dev = hs_norm(arr - arr.conj().T)
    if dev > tol.eq_tol * max(1.0, hs_norm(arr)):
        raise NonHermitian(f"Hermitian deviation {dev:.3e}")
    eigvals, eigvecs = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    if eigvals.min() <= tol.spd_tol:
        raise NotPositiveDefinite(f"minimum eigenvalue {eigvals.min():.3e}")
    return (eigvecs * (eigvals**0.5)) @ eigvecs.conj().T


class Frame:
    """A subspace carrier: a matrix with orthonormal columns.

    Orthonormality is with respect to the standard Hermitian pairing and is
    enforced at construction (deviation at most ``1e-10``).  Use
    :meth:`from_columns` to build a frame from an arbitrary spanning set.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        arr = as_matrix(matrix)
        if arr.shape[1] > arr.shape[0]:
            raise RankMismatch(
                f"rank {arr.shape[1]} exceeds ambient dimension {arr.shape[0]}"
            )
        gram = arr.conj().T @ arr
        dev = hs_norm(gram - np.eye(arr.shape[1]))
        if dev > ORTHO_TOL:
            raise RankMismatch(f"columns not orthonormal (deviation {dev:.3e})")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "matrix", arr)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Frame is immutable")

    @classmethod
    def from_columns(cls, columns) -> "Frame":
        """Orthonormalize ``columns`` (QR) and wrap the result.

        Raises
        ------
        RankMismatch
            If the columns are numerically dependent.
        """
        arr = as_matrix(columns)
        q, r = np.linalg.qr(arr)
        diag = np.abs(np.diag(r))
        if arr.shape[1] and diag.min() <= 1e-12 * max(1.0, diag.max()):
            raise RankMismatch("columns are numerically dependent")
        return cls(q)

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return self.matrix.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the column span (standard pairing)."""
        return self.matrix @ self.matrix.conj().T

    def conj(self) -> "Frame":
        """Frame spanning the entrywise-conjugate subspace."""
        return Frame(self.matrix.conj())

    def __repr__(self) -> str:
        return f"Frame(ambient_dim={self.ambient_dim}, rank={self.rank})"


def principal_angle_distance(f1: Frame, f2: Frame) -> float:
    """Gap distance between two subspaces of equal dimension.

    Computed as the operator norm of the difference of orthogonal
    projectors; equals the sine of the largest principal angle.

    Raises
    ------
    RankMismatch
        If the frames have different ambient dimension or rank.
    """
    if f1.ambient_dim != f2.ambient_dim or f1.rank != f2.rank:
        raise RankMismatch(
            f"incompatible frames: ({f1.ambient_dim},{f1.rank}) vs "
            f"({f2.ambient_dim},{f2.rank})"
        )
    return op_norm(f1.projector() - f2.projector())


def solve(a, b):
    """np.linalg.solve with a clearer error for singular systems."""
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        from .errors import NumericallySingular

        raise NumericallySingular(str(exc)) from exc


def smallest_singular_value(a) -> float:
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.svd(arr, compute_uv=False).min())
