import numpy as np
import pytest

from polargrass.errors import (
    FormatError,
    NonHermitian,
    NotPositiveDefinite,
    RankMismatch,
)
from polargrass.linalg import (
    DEFAULT_TOL,
    Frame,
    Tolerances,
    as_matrix,
    as_real_matrix,
    hs_norm,
    inverse_sqrt_hermitian,
    is_positive_definite,
    op_norm,
    principal_angle_distance,
    smallest_singular_value,
    sqrt_hermitian,
)


def test_hs_norm_hand_value():
    # sqrt(3^2 + 4^2) = 5
    assert hs_norm(np.array([[3.0, 4.0]])) == pytest.approx(5.0)


def test_op_norm_rank_one(rng):
    u = rng.standard_normal(4)
    v = rng.standard_normal(3)
    # |u v^T|_op = |u| |v|
    assert op_norm(np.outer(u, v)) == pytest.approx(
        np.linalg.norm(u) * np.linalg.norm(v)
    )


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(FormatError):
        as_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_as_matrix_rejects_nonsquare_when_required():
    with pytest.raises(FormatError):
        as_matrix(np.zeros((2, 3)), square=True)


def test_as_real_matrix_rejects_complex():
    with pytest.raises(FormatError):
        as_real_matrix(np.eye(2) * (1 + 1j))


def test_tolerances_reject_nonpositive():
    with pytest.raises(FormatError):
        Tolerances(eq_tol=0.0)
    with pytest.raises(FormatError):
        Tolerances(spd_tol=-1e-12)


def test_default_tolerances():
    assert DEFAULT_TOL.eq_tol == 1e-10
    assert DEFAULT_TOL.spd_tol == 1e-12


def test_sqrt_and_inverse_sqrt_diagonal():
    A = np.diag([4.0, 9.0]).astype(complex)
    assert np.allclose(sqrt_hermitian(A), np.diag([2.0, 3.0]))
    assert np.allclose(inverse_sqrt_hermitian(A), np.diag([0.5, 1.0 / 3.0]))


def test_inverse_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        inverse_sqrt_hermitian(np.diag([1.0, -1.0]).astype(complex))


def test_is_positive_definite_requires_hermitian():
    with pytest.raises(NonHermitian):
        is_positive_definite(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_frame_rejects_nonorthonormal_columns():
    with pytest.raises(RankMismatch):
        Frame(np.array([[1.0], [1.0]]))


def test_frame_from_columns_orthonormalizes(rng):
    cols = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    f = Frame.from_columns(cols)
    assert hs_norm(f.matrix.conj().T @ f.matrix - np.eye(2)) < 1e-12
    # same span: the projector reproduces the original columns
    proj = f.matrix @ f.matrix.conj().T
    assert hs_norm(proj @ cols - cols) < 1e-12


def test_frame_from_columns_rejects_dependent():
    v = np.array([[1.0], [2.0], [0.0]])
    with pytest.raises(RankMismatch):
        Frame.from_columns(np.hstack([v, 2 * v]))


def test_frame_is_immutable():
    f = Frame(np.eye(2))
    with pytest.raises(AttributeError):
        f.matrix = np.zeros((2, 2))
    with pytest.raises(ValueError):
        f.matrix[0, 0] = 5.0


def test_principal_angle_identical_and_orthogonal():
    e1 = Frame(np.eye(4)[:, :1])
    e2 = Frame(np.eye(4)[:, 1:2])
    assert principal_angle_distance(e1, e1) == pytest.approx(0.0, abs=1e-14)
    # orthogonal lines: projector difference has norm 1
    assert principal_angle_distance(e1, e2) == pytest.approx(1.0)


def test_principal_angle_hand_rotation():
    # span(e1) vs span(cos t e1 + sin t e2): distance is |sin t|
    t = 0.3
    a = Frame(np.eye(3)[:, :1])
    b = Frame(np.array([[np.cos(t)], [np.sin(t)], [0.0]]))
    assert principal_angle_distance(a, b) == pytest.approx(abs(np.sin(t)), abs=1e-12)


def test_principal_angle_rank_mismatch():
    with pytest.raises(RankMismatch):
        principal_angle_distance(Frame(np.eye(4)[:, :1]), Frame(np.eye(4)[:, :2]))


def test_smallest_singular_value_hand():
    assert smallest_singular_value(np.diag([3.0, 0.25])) == pytest.approx(0.25)
