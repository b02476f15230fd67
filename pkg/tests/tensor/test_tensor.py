import numpy as np
import pytest
from numpy.testing import assert_allclose

from kahler_lab.tensor.tensor import Bilinear, QuadTensor, SymmetricCubic, \
    DimensionError, SymmetryError, ConvergenceError, TensorError, phi, psi, \
    ricci, scalar, sym_eigen, gram_schmidt, constant_curvature, restrict, \
    is_curvature_like, random_curvature, random_symmetric, symmetrize_cubic, \
    defect_norm
from kahler_lab.ambient.ambient import standard_complex_structure


def test_metric_positive_definite():
    with pytest.raises(SymmetryError):
        Bilinear([[1., 0.], [0., -1.]], metric=True)


def test_symmetric_rejects_asymmetry():
    with pytest.raises(SymmetryError):
        Bilinear([[1., 2.], [0., 1.]], symmetric=True)


def test_dimension_limits():
    with pytest.raises(DimensionError):
        Bilinear(np.eye(25))
    with pytest.raises(DimensionError):
        QuadTensor(np.zeros((2, 2, 3, 2)))


def test_phi_of_metric():
    g = np.eye(2)
    assert phi(g, g).entries[0, 1, 1, 0] == 2.
    assert phi(g, g).curvature_like


def test_psi_of_metric_on_holomorphic_plane():
    g = np.eye(2)
    j = standard_complex_structure(1)
    t = psi(g, j, g)
    assert t.entries[0, 1, 1, 0] == 6.
    assert t.curvature_like


def test_psi_not_flagged_for_non_invariant_form():
    j = standard_complex_structure(1)
    assert not psi(np.eye(2), j, np.diag([1., 2.])).curvature_like


@pytest.mark.parametrize('d, c', [(2, 1.), (3, -2.), (5, 0.5)])
def test_constant_curvature_contractions(d, c):
    g = Bilinear(np.eye(d), metric=True)
    r = constant_curvature(g, c)
    assert_allclose(r.entries[0, 1, 1, 0], c)
    s = ricci(r, g)
    assert_allclose(s.entries, (d - 1) * c * np.eye(d), atol=1e-14)
    assert_allclose(scalar(s, g), d * (d - 1) * c)


def test_ricci_rejects_non_curvature(rng):
    with pytest.raises(SymmetryError):
        ricci(rng.uniform(-1., 1., size=(3, 3, 3, 3)), np.eye(3))


def test_random_curvature_is_curvature_like(rng):
    for d in (2, 4, 6):
        assert is_curvature_like(random_curvature(d, rng))
    assert not is_curvature_like(rng.uniform(-1., 1., size=(3, 3, 3, 3)))


def test_symmetrize_cubic_exact(rng):
    h = symmetrize_cubic(rng.uniform(-1., 1., size=(4, 4, 4)))
    for p in [(1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]:
        assert np.array_equal(h, np.transpose(h, p))
    assert SymmetricCubic(h).scaled(2.).entries[1, 2, 3] == 2. * h[1, 2, 3]


def test_sym_eigen_diagonal():
    s = sym_eigen(np.diag([3., 1., 2.]))
    assert_allclose(s.eigenvalues, [1., 2., 3.])
    assert s.sweeps == 0


def test_sym_eigen_random(rng):
    for d in (2, 5, 8):
        a = random_symmetric(d, rng)
        s = sym_eigen(a)
        assert_allclose(s.eigenvalues, np.linalg.eigvalsh(a), atol=1e-10)
        assert_allclose(s.reconstruct(), a, atol=1e-10)
        assert_allclose(s.eigenvectors.T @ s.eigenvectors, np.eye(d), atol=1e-12)


def test_sym_eigen_iteration_cap():
    with pytest.raises(ConvergenceError) as e:
        sym_eigen([[1., 1.], [1., 2.]], max_sweeps=0)
    assert e.value.residual == 1.


def test_gram_schmidt(rng):
    v = rng.standard_normal((3, 5))
    e = gram_schmidt(v)
    assert_allclose(e @ e.T, np.eye(3), atol=1e-14)
    with pytest.raises(TensorError):
        gram_schmidt([[1., 0.], [2., 0.]])
    with pytest.raises(TensorError):
        gram_schmidt([[0., 0.]])


def test_restrict_to_coordinate_frame(rng):
    r = random_curvature(4, rng)
    assert_allclose(restrict(r, np.eye(4)[[1, 3]]), r.entries[np.ix_([1, 3], [1, 3], [1, 3], [1, 3])])


def test_defect_norm():
    assert defect_norm(None) == 0.
    assert defect_norm(np.array([[0., -3.], [2., 1.]])) == 3.


def test_round_off_tensor_is_curvature_like(rng):
    assert is_curvature_like(1e-17 * rng.uniform(-1., 1., size=(4, 4, 4, 4)))
    assert QuadTensor(np.full((3, 3, 3, 3), 1e-16), curvature_like=True).curvature_like
    assert not is_curvature_like(1e-6 * rng.uniform(-1., 1., size=(4, 4, 4, 4)))
