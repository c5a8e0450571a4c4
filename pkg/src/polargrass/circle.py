"""Truncated Fourier models on the circle and the period map of a torus.

Boson model: real trigonometric polynomials of degree <= N without
constant term, with the H^{1/2}-type metric that weights mode n by |n|.
Composition with a circle diffeomorphism acts symplectically; its paired
blocks give the (truncated) Grunsky-type operator, a Siegel disk point.

Fermion model: complex coordinates indexed by shifted (half-integer)
frequency labels 0..N, metric 2 Re sum a_n conj(b_n), J = multiplication
by i; its (+i)-eigenspace is the nonnegative-label polarization.

Mode ordering for matrices in the boson mode basis is (-N..-1, 1..N);
the zero mode is excluded throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AliasingRisk,
    BlockSingular,
    DimensionMismatch,
    FormatError,
    NotIncreasing,
    NotUpperHalf,
)
from .linalg import (
    DEFAULT_TOL,
    Frame,
    Tolerances,
    hs_norm,
    op_norm,
    smallest_singular_value,
)
from .polarization import (
    ComplexifiedSpace,
    EigenSplit,
    OrthogonalPolarization,
    complexify,
)
from .siegel import BlockSymplectic, SiegelPoint, UpperHalfPoint
from .triples import BilinearForm, CompatibleTriple, ComplexStructure


def boson_triple(N: int) -> CompatibleTriple:
    """Triple on R^2N with interleaved (x_n, y_n) coordinates, n = 1..N.

    Coordinates are cosine/sine coefficients of a real trigonometric
    polynomial without constant term.  The metric weights plane n by n/2
    (the half-derivative pairing, giving the complex modes e_{+-n}
    g-norm-squared |n|), the structure is the harmonic conjugate
    J cos = sin, J sin = -cos (so the (+i)-eigenspace is spanned by the
    negative modes), and ``omega = g(J., .)`` matches the boundary area
    pairing ``(1/2 pi) int f dg`` on each plane.
    """
    if N < 1:
        raise DimensionMismatch("N must be at least 1")
    dim = 2 * N
    G = np.zeros((dim, dim))
    J = np.zeros((dim, dim))
    Om = np.zeros((dim, dim))
    for k in range(1, N + 1):
        x, y = 2 * (k - 1), 2 * (k - 1) + 1
        G[x, x] = G[y, y] = 0.5 * k
        J[x, y] = -1.0
        J[y, x] = 1.0
        Om[x, y] = 0.5 * k
        Om[y, x] = -0.5 * k
    return CompatibleTriple(
        BilinearForm("symmetric", G),
        ComplexStructure(J),
        BilinearForm("antisymmetric", Om),
    )


def mode_indices(N: int) -> list[int]:
    """Mode labels in matrix order: (-N..-1, 1..N)."""
    return list(range(-N, 0)) + list(range(1, N + 1))


def mode_position(m: int, N: int) -> int:
    if m == 0 or abs(m) > N:
        raise FormatError(f"mode {m} outside the cutoff {N}")
    return m + N if m < 0 else N + m - 1


class BosonModel:
    """The boson space at cutoff N with its mode basis and eigensplit.

    ``mode_matrix`` columns are the complex modes e_m expressed in real
    coordinates (order (-N..-1, 1..N)); the eigensplit uses the
    mode-aligned g-orthonormal frames e_{-k}/sqrt(k), which makes chart
    data directly comparable across cutoffs.
    """

    def __init__(self, N: int) -> None:
        self.N = int(N)
        self.triple = boson_triple(N)
        self.space: ComplexifiedSpace = complexify(self.triple)
        # Column for mode m: cos/sin coordinates of e^{im theta}, i.e.
        # x_{|m|} = 1, y_{|m|} = i sign(m); conjugation swaps m and -m.
        B = np.zeros((2 * N, 2 * N), dtype=np.complex128)
        for m in mode_indices(N):
            col = mode_position(m, N)
            k = abs(m)
            x, y = 2 * (k - 1), 2 * (k - 1) + 1
            B[x, col] = 1.0
            B[y, col] = 1j if m > 0 else -1j
        self.mode_matrix = B
        lplus = np.zeros((2 * N, N), dtype=np.complex128)
        for k in range(1, N + 1):
            lplus[:, k - 1] = B[:, mode_position(-k, N)] / np.sqrt(k)
        self.split = EigenSplit(self.space, self.triple.Jmat.astype(np.complex128), lplus)

    def to_real(self, mode_op: np.ndarray) -> np.ndarray:
        """Conjugate a mode-basis operator into real coordinates."""
        B = self.mode_matrix
        return B @ mode_op @ (0.5 * B.conj().T)

    def to_modes(self, real_op: np.ndarray) -> np.ndarray:
        B = self.mode_matrix
        return (0.5 * B.conj().T) @ real_op @ B

    def omega_mode_matrix(self) -> np.ndarray:
        """Bilinear symplectic pairing in mode coordinates:
        omega(e_m, e_n) = -i m [n == -m]."""
        N = self.N
        Om = np.zeros((2 * N, 2 * N), dtype=np.complex128)
        for m in mode_indices(N):
            Om[mode_position(m, N), mode_position(-m, N)] = -1j * m
        return Om


@dataclass(frozen=True)
class CircleDiffeo:
    """An orientation-preserving diffeomorphism of the circle.

    ``phi`` returns angle values with ``phi(t + 2 pi) = phi(t) + 2 pi``
    up to a multiple of 2 pi per branch choice; ``boundary`` returns
    ``exp(i phi(t))`` and is the quantity quadratures consume (exact for
    Mobius maps, avoiding branch cuts entirely).
    """

    kind: str
    params: dict
    phi: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    boundary: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)

    def check_increasing(self, K: int = 1024) -> None:
        """Validate strict monotonicity on a uniform grid.

        Raises NotIncreasing when the lifted angle fails to increase.
        """
        theta = np.linspace(0.0, 2.0 * np.pi, K, endpoint=False)
        values = np.unwrap(np.angle(self.boundary(theta)))
        if np.any(np.diff(values) <= 0.0):
            raise NotIncreasing(f"{self.kind} map is not strictly increasing on the grid")


def rotation_diffeo(delta: float) -> CircleDiffeo:
    delta = float(delta)
    return CircleDiffeo(
        kind="rotation",
        params={"delta": delta},
        phi=lambda t: np.asarray(t) + delta,
        boundary=lambda t: np.exp(1j * (np.asarray(t) + delta)),
    )


def mobius_diffeo(a: complex) -> CircleDiffeo:
    """Disk automorphism ``z -> (z - a)/(1 - conj(a) z)`` on the boundary."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise FormatError(f"|a| must be < 1, got {abs(a):.6f}")

    def boundary(t):
        z = np.exp(1j * np.asarray(t, dtype=float))
        return (z - a) / (1.0 - np.conj(a) * z)

    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.angle(boundary(t))

    return CircleDiffeo(kind="mobius", params={"a": a}, phi=phi, boundary=boundary)


def fourier_flow_diffeo(coeffs: Sequence[tuple[int, float]]) -> CircleDiffeo:
    """``phi(t) = t + sum amp * sin(k t)``; needs sum |k amp| < 1."""
    coeffs = [(int(k), float(amp)) for k, amp in coeffs]
    if any(k < 1 for k, _ in coeffs):
        raise FormatError("flow frequencies must be positive")

    def phi(t):
        t = np.asarray(t, dtype=float)
        out = t.astype(float).copy()
        for k, amp in coeffs:
            out = out + amp * np.sin(k * t)
        return out

    diffeo = CircleDiffeo(
        kind="fourier_flow",
        params={"coeffs": coeffs},
        phi=phi,
        boundary=lambda t: np.exp(1j * phi(t)),
    )
    diffeo.check_increasing()
    return diffeo


def compose_diffeos(outer: CircleDiffeo, inner: CircleDiffeo) -> CircleDiffeo:
    """The diffeomorphism ``t -> outer(inner(t))``."""

    def phi(t):
        return outer.phi(inner.phi(np.asarray(t, dtype=float)))

    def boundary(t):
        # outer's boundary value is 2 pi periodic in its angle argument,
        # so any branch of inner's angle works pointwise.
        return outer.boundary(np.angle(inner.boundary(np.asarray(t, dtype=float))))

    return CircleDiffeo(
        kind="compose",
        params={"outer": outer.kind, "inner": inner.kind},
        phi=phi,
        boundary=boundary,
    )


def diffeo_from_spec(spec: dict) -> CircleDiffeo:
    """Build a diffeomorphism from its JSON description."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise FormatError("diffeo spec must be an object with a 'kind' key")
    kind = spec["kind"]
    if kind == "rotation":
        return rotation_diffeo(spec["delta"])
    if kind == "mobius":
        re, im = spec["a"]
        return mobius_diffeo(complex(re, im))
    if kind == "fourier_flow":
        return fourier_flow_diffeo([(k, amp) for k, amp in spec["coeffs"]])
    raise FormatError(f"unknown diffeo kind {kind!r}")


def composition_operator(
    phi: CircleDiffeo, N: int, K: int | None = None, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Matrix of ``f -> f o phi`` on modes (-N..-1, 1..N) by quadrature.

    Entry (m, n) is the m-th Fourier coefficient of ``exp(i n phi)``,
    computed with the K-point uniform (trapezoid) rule.  K defaults to
    16 N; a warning is emitted below 8 N where aliasing becomes a risk.

    Raises
    ------
    NotIncreasing
        If phi fails strict monotonicity on the quadrature grid.
    """
    if N < 1:
        raise DimensionMismatch("N must be at least 1")
    if K is None:
        K = 16 * N
    K = int(K)
    if K < 8 * N:
        warnings.warn(
            f"K={K} below 8N={8 * N}: quadrature may alias", AliasingRisk, stacklevel=2
        )
    theta = 2.0 * np.pi * np.arange(K) / K
    w = phi.boundary(theta)
    lifted = np.unwrap(np.angle(w))
    if np.any(np.diff(lifted) <= 0.0):
        raise NotIncreasing("phi is not strictly increasing on the quadrature grid")
    modes = np.array(mode_indices(N))
    powers = w[:, None] ** modes[None, :]
    outgoing = np.exp(-1j * np.outer(modes, theta))
    return (outgoing @ powers) / K


@dataclass(frozen=True)
class CompositionBlocks:
    """Raw paired blocks (a, b) of a truncated composition operator.

    Hard truncation loses the Fourier mass that a near-cutoff mode
    spreads past the cutoff, so the exact relation ``a* a - b* b = I``
    only holds band-limited: ``identity_residual(M)`` measures it on the
    lowest M modes and decays as the cutoff grows past M.  The full-
    corner deviation ``identity_residual(N)`` is O(1) by design and is
    reported, not hidden.
    """

    a: np.ndarray
    b: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def identity_residual(self, M: int | None = None) -> float:
        M = self.n if M is None else int(M)
        D = self.a.conj().T @ self.a - self.b.conj().T @ self.b - np.eye(self.n)
        return hs_norm(D[:M, :M])

    def transform(self, Z: np.ndarray) -> np.ndarray:
        """Disk action ``Z -> (b + conj(a) Z)(a + conj(b) Z)^{-1}``."""
        den = self.a + self.b.conj() @ Z
        if smallest_singular_value(den) <= 1e-10 * max(1.0, op_norm(den)):
            raise BlockSingular("transform denominator is singular")
        return np.linalg.solve(den.T, (self.b + self.a.conj() @ Z).T).T


def composition_blocks(
    phi: CircleDiffeo, N: int, K: int | None = None, tol: Tolerances = DEFAULT_TOL
) -> CompositionBlocks:
    """Paired blocks of the truncated composition operator.

    Raises
    ------
    BlockSingular
        If the diagonal block is numerically singular.
    """
    model = BosonModel(N)
    C = model.to_real(composition_operator(phi, N, K, tol))
    M = model.split.compress(C)
    a, b = M[:N, :N], M[N:, :N]
    if smallest_singular_value(a) <= 1e-8 * max(1.0, op_norm(a)):
        raise BlockSingular("diagonal block of the composition operator is singular")
    return CompositionBlocks(a, b)


def grunsky(
    phi: CircleDiffeo,
    N: int,
    K: int | None = None,
    tol: Tolerances = DEFAULT_TOL,
    atol: float = 1e-6,
) -> SiegelPoint:
    """Grunsky-type Siegel point of a circle diffeomorphism at cutoff N.

    ``Z = b a^{-1}`` for the paired blocks of the composition operator;
    symmetric up to quadrature/truncation error and a strict contraction,
    vanishing (to quadrature accuracy) for Mobius maps, which preserve
    the polarization.

    Raises
    ------
    BlockSingular
        If the diagonal block is singular (pathological input).
    """
    blocks = composition_blocks(phi, N, K, tol=tol)
    Z = np.linalg.solve(blocks.a.T, blocks.b.T).T
    return SiegelPoint(Z, atol=atol)


def fermion_triple(N: int) -> CompatibleTriple:
    """Triple on R^{2(N+1)} for labels 0..N (shifted half-integer
    frequencies); metric 2I, J(u, v) = (-v, u), omega = g(J., .)."""
    if N < 0:
        raise DimensionMismatch("N must be at least 0")
    dim = 2 * (N + 1)
    J = np.zeros((dim, dim))
    Om = np.zeros((dim, dim))
    for k in range(N + 1):
        u, v = 2 * k, 2 * k + 1
        J[u, v] = -1.0
        J[v, u] = 1.0
        Om[u, v] = 2.0
        Om[v, u] = -2.0
    return CompatibleTriple(
        BilinearForm("symmetric", 2.0 * np.eye(dim)),
        ComplexStructure(J),
        BilinearForm("antisymmetric", Om),
    )


def fermion_polarization(N: int) -> OrthogonalPolarization:
    """The nonnegative-label polarization of the fermion model."""
    t = fermion_triple(N)
    space = complexify(t)
    dim = 2 * (N + 1)
    cols = np.zeros((dim, N + 1), dtype=np.complex128)
    for k in range(N + 1):
        cols[2 * k, k] = 1.0 / np.sqrt(2.0)
        cols[2 * k + 1, k] = -1j / np.sqrt(2.0)
    return OrthogonalPolarization(space, Frame(cols))


@dataclass(frozen=True)
class TorusPeriodReport:
    tau: complex
    period_a: complex
    period_b: complex
    point: UpperHalfPoint

    @property
    def residuals(self) -> dict[str, float]:
        return {
            "a_period": abs(self.period_a - 1.0),
            "b_period": abs(self.period_b - self.tau),
        }


def torus_period(tau: complex, tol: Tolerances = DEFAULT_TOL) -> TorusPeriodReport:
    """Period point of the lattice (1, tau) from explicit cycle integrals.

    Integrates the a-normalized harmonic forms ``eta_1 = dx - (tau_1/tau_2) dy``
    and ``eta_2 = dy / tau_2`` over the straight cycles 0 -> 1 and
    0 -> tau, then evaluates the holomorphic combination
    ``beta = eta_1 + tau eta_2`` whose b-period is the returned point.

    Raises
    ------
    NotUpperHalf
        If Im tau <= 0.
    """
    tau = complex(tau)
    if not np.isfinite(tau.real) or not np.isfinite(tau.imag):
        raise FormatError("tau must be finite")
    t1, t2 = tau.real, tau.imag
    if t2 <= 0.0:
        raise NotUpperHalf(f"Im tau = {t2:.6f} is not positive")

    def integrate(form_xy: tuple[complex, complex], delta: tuple[float, float]) -> complex:
        return form_xy[0] * delta[0] + form_xy[1] * delta[1]

    eta1 = (1.0, -t1 / t2)
    eta2 = (0.0, 1.0 / t2)
    cycle_a, cycle_b = (1.0, 0.0), (t1, t2)
    period_a = integrate(eta1, cycle_a) + tau * integrate(eta2, cycle_a)
    period_b = integrate(eta1, cycle_b) + tau * integrate(eta2, cycle_b)
    return TorusPeriodReport(tau, period_a, period_b, UpperHalfPoint(np.array([[period_b]])))
