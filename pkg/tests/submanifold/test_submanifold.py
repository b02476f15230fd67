from itertools import product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kahler_lab.tensor.tensor import is_curvature_like, defect_norm, \
    random_curvature, ricci, restrict
from kahler_lab.ambient.ambient import flat_curvature, product_ambient, \
    constant_hsc_curvature
from kahler_lab.submanifold.submanifold import SubmanifoldPoint, FrameError, \
    SubmanifoldError, shape_operators, mean_curvature, gauss_intrinsic, \
    gauss_bracket, weyl, weyl_tensor, normal_curvature_action, \
    semiparallel_defect, mc_semiparallel_defect, commutativity_defect, \
    conformal_flatness_defect
from kahler_lab.generate.generate import random_cubic, space_form_fixture, \
    unitary_frame


def canonical(n):
    return np.eye(2 * n)[:n]


def test_frame_validation():
    ambient = flat_curvature(2)
    h = np.zeros((2, 2, 2))
    with pytest.raises(FrameError):
        SubmanifoldPoint(ambient, [[1., 0., 0., 0.], [1., 0., 0., 0.]], h)
    # e_1 and Je_1
    with pytest.raises(FrameError):
        SubmanifoldPoint(ambient, [[1., 0., 0., 0.], [0., 0., 1., 0.]], h)
    with pytest.raises(FrameError):
        SubmanifoldPoint(ambient, canonical(2)[:1], h)
    with pytest.raises(FrameError):
        SubmanifoldPoint(ambient, canonical(2), np.zeros((3, 3, 3)))
    with pytest.raises(FrameError):
        SubmanifoldPoint(flat_curvature(1), canonical(1), np.zeros((1, 1, 1)))


def test_unitary_frame_is_totally_real(rng):
    p = SubmanifoldPoint(product_ambient(4, 2, 1.), unitary_frame(4, rng), np.zeros((4, 4, 4)))
    assert p.n == 4


def test_shape_operators_single_orbit():
    h = np.zeros((3, 3, 3))
    h[0, 0, 0] = 2.
    a = shape_operators(SubmanifoldPoint(flat_curvature(3), canonical(3), h))
    assert_allclose(a[0], np.diag([2., 0., 0.]))
    assert_allclose(a[1:], 0.)


def test_shape_operators_symmetric(rng):
    p = SubmanifoldPoint(flat_curvature(4), canonical(4), random_cubic(4, rng))
    a = shape_operators(p)
    for k, i, j in product(range(4), repeat=3):
        assert a[k][i][j] == a[i][k][j] == a[j][i][k]


def test_mean_curvature_trace_orbit():
    n = 4
    h = np.zeros((n, n, n))
    for i in range(n):
        h[0, i, i] = h[i, 0, i] = h[i, i, 0] = 1.
    p = SubmanifoldPoint(flat_curvature(n), canonical(n), h)
    h_normal, jh = mean_curvature(p)
    assert_allclose(jh, [-1., 0., 0., 0.])
    # H = -J(JH) = Je_1
    assert_allclose(h_normal, np.eye(2 * n)[n])


def test_mean_curvature_traceless(rng):
    p = SubmanifoldPoint(flat_curvature(5), canonical(5), random_cubic(5, rng, traceless=True))
    h_normal, jh = mean_curvature(p)
    assert np.max(np.abs(h_normal)) <= 1e-14
    assert np.max(np.abs(jh)) <= 1e-14


def test_gauss_totally_geodesic_flat():
    geom = gauss_intrinsic(SubmanifoldPoint(flat_curvature(4), canonical(4), np.zeros((4, 4, 4))))
    assert defect_norm(geom.r) == 0.
    assert defect_norm(geom.s) == 0.
    assert geom.tau == 0.


def brute_force_bracket(h):
    n = h.shape[0]
    out = np.zeros((n,) * 4)
    for i, j, k, l in product(range(n), repeat=4):
        ai, aj = h[i], h[j]
        out[i, j, k, l] = (ai @ aj - aj @ ai)[l, k]
    return out


@pytest.mark.parametrize('n', [4, 5, 6])
def test_gauss_flat_ambient_is_bracket(n, rng):
    p = SubmanifoldPoint(flat_curvature(n), canonical(n), random_cubic(n, rng))
    geom = gauss_intrinsic(p)
    assert_allclose(geom.r.entries, brute_force_bracket(p.h.entries), rtol=0, atol=1e-14)
    assert_allclose(geom.r.entries, gauss_bracket(p), rtol=0, atol=1e-14)
    assert is_curvature_like(geom.r)


def test_gauss_on_product_is_curvature_like(rng):
    for i in range(30):
        n = 4 + i % 3
        ambient = product_ambient(n, 1 + i % (n - 1), 2.5)
        p = SubmanifoldPoint(ambient, unitary_frame(n, rng), random_cubic(n, rng))
        assert is_curvature_like(gauss_intrinsic(p).r)


def test_commutative_gauss_is_restriction(rng):
    ambient = product_ambient(5, 3, -1.)
    p = SubmanifoldPoint(ambient, canonical(5), random_cubic(5, rng, commuting=True))
    assert commutativity_defect(p) == 0.
    geom = gauss_intrinsic(p)
    assert defect_norm(geom.r.entries - restrict(ambient.r, p.frame)) <= 1e-12


def test_totally_geodesic_product_is_conformally_flat():
    for n, k in [(4, 2), (5, 4), (6, 3)]:
        p = SubmanifoldPoint(product_ambient(n, k, 2.), canonical(n), np.zeros((n, n, n)))
        assert conformal_flatness_defect(gauss_intrinsic(p)) <= 1e-9


@pytest.mark.parametrize('n, c', [(4, 1.), (4, -1.), (5, 2.)])
def test_weyl_space_forms(n, c):
    assert defect_norm(weyl_tensor(space_form_fixture(n, c, skip=()))) <= 1e-12
    assert defect_norm(weyl_tensor(space_form_fixture(n, c))) <= 1e-10


def test_weyl_trace_free(rng):
    for n in (4, 5, 6):
        c = weyl_tensor(random_curvature(n, rng))
        assert defect_norm(ricci(c, np.eye(n))) <= 1e-10


def test_weyl_low_dimension():
    with pytest.raises(SubmanifoldError):
        weyl_tensor(np.zeros((3, 3, 3, 3)))
    geom = gauss_intrinsic(SubmanifoldPoint(flat_curvature(3), canonical(3), np.zeros((3, 3, 3))))
    assert geom.c is None
    assert conformal_flatness_defect(geom) is None
    with pytest.raises(SubmanifoldError):
        weyl(geom)


def test_weyl_of_geometry():
    p = SubmanifoldPoint(flat_curvature(4), canonical(4), np.zeros((4, 4, 4)),
                         fixture=space_form_fixture(4, 1., skip=()))
    assert defect_norm(weyl(gauss_intrinsic(p))) <= 1e-12


def test_normal_curvature_action_constant_curvature(rng):
    c = 1.5
    p = SubmanifoldPoint(flat_curvature(4), canonical(4), np.zeros((4, 4, 4)),
                         fixture=space_form_fixture(4, c, skip=()))
    geom = gauss_intrinsic(p)
    v = normal_curvature_action(geom, 0, 1, [0., 1., 0., 0.])
    assert_allclose(v, c * np.eye(8)[4])
    # linear in Z
    z1, z2 = rng.standard_normal(4), rng.standard_normal(4)
    assert_allclose(normal_curvature_action(geom, 2, 3, 2. * z1 - z2),
                    2. * normal_curvature_action(geom, 2, 3, z1)
                    - normal_curvature_action(geom, 2, 3, z2), atol=1e-14)
    with pytest.raises(IndexError):
        normal_curvature_action(geom, 0, 4, z1)


def test_normal_curvature_action_flat():
    geom = gauss_intrinsic(SubmanifoldPoint(flat_curvature(4), canonical(4), np.zeros((4, 4, 4))))
    assert np.all(normal_curvature_action(geom, 1, 2, [1., 2., 3., 4.]) == 0.)


def test_semiparallel_totally_geodesic():
    p = SubmanifoldPoint(constant_hsc_curvature(4, 1.), canonical(4), np.zeros((4, 4, 4)))
    assert semiparallel_defect(p, gauss_intrinsic(p)) == (0., 0.)


def test_semiparallel_paths_agree(rng):
    for n in (4, 5, 6):
        p = SubmanifoldPoint(product_ambient(n, 2, 1.), unitary_frame(n, rng), random_cubic(n, rng))
        first, second = semiparallel_defect(p, gauss_intrinsic(p))
        assert first > 0.
        assert abs(first - second) <= 1e-12 * max(1., first)


def test_mc_semiparallel_minimal_and_flat(rng):
    p = SubmanifoldPoint(flat_curvature(4), canonical(4), random_cubic(4, rng, traceless=True))
    assert mc_semiparallel_defect(gauss_intrinsic(p)) <= 1e-13
    h = np.zeros((4, 4, 4))
    h[1, 1, 1] = 3.
    p = SubmanifoldPoint(flat_curvature(4), canonical(4), h)
    assert mc_semiparallel_defect(gauss_intrinsic(p)) == 0.


def test_commutativity_defect_example():
    a = np.zeros((2, 3, 3))
    a[0, :2, :2] = [[0., 1.], [1., 0.]]
    a[1, :2, :2] = [[1., 0.], [0., -1.]]
    assert commutativity_defect(a) == 2.
    assert commutativity_defect(np.zeros((3, 3, 3))) == 0.


def test_skewed_frame_orthonormalized():
    skewed = canonical(4)
    skewed[1, 0] = 0.5
    with pytest.raises(FrameError):
        SubmanifoldPoint(flat_curvature(4), skewed, np.zeros((4, 4, 4)))
    p = SubmanifoldPoint(flat_curvature(4), skewed, np.zeros((4, 4, 4)), orthonormalize=True)
    assert_allclose(p.frame, canonical(4), atol=1e-15)


def test_dependent_frame_rejected_when_orthonormalizing():
    dependent = canonical(4)
    dependent[1] = 2. * dependent[0]
    with pytest.raises(FrameError):
        SubmanifoldPoint(flat_curvature(4), dependent, np.zeros((4, 4, 4)), orthonormalize=True)


def test_orthonormalized_frame_still_totally_real():
    frame = canonical(2)
    frame[1] = [0.5, 0., 1., 0.]  # picks up Je_1
    with pytest.raises(FrameError) as e:
        SubmanifoldPoint(flat_curvature(2), frame, np.zeros((2, 2, 2)), orthonormalize=True)
    assert 'totally real' in str(e.value)


def test_weyl_of_rotated_space_form(rng):
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    c = weyl_tensor(restrict(space_form_fixture(5, 1., skip=()), q))
    assert defect_norm(c.entries) <= 1e-12


def test_totally_geodesic_unitary_frame(rng):
    ambient = product_ambient(4, 2, 1.)
    p = SubmanifoldPoint(ambient, unitary_frame(4, rng), np.zeros((4, 4, 4)))
    geom = gauss_intrinsic(p)
    assert defect_norm(geom.r.entries - restrict(ambient.r, p.frame)) == 0.
