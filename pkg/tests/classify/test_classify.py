import numpy as np
import pytest
from numpy.testing import assert_allclose

from kahler_lab import tolerance
from kahler_lab.ambient.ambient import product_ambient, flat_curvature
from kahler_lab.submanifold.submanifold import SubmanifoldPoint, gauss_intrinsic
from kahler_lab.classify.classify import ClassifyError, Conclusion, Flag, \
    clusters, is_quasi_einstein, product_type_constant, proposition_residuals, \
    lemma_residuals, hypothesis_flags, classify_theorem_1_2, classify_theorem_3, \
    str2obj, FLAT, PRODUCT_TYPE, PRODUCT_SPLIT, HYPOTHESIS_VIOLATION, INDETERMINATE, \
    MC_SEMIPARALLEL, SEMIPARALLEL, MINIMAL_BRANCH, QUASI_EINSTEIN_BRANCH, \
    VIOLATION_BRANCH, EINSTEIN_ZERO_BRANCH, HOLDS, INACTIVE, NOT_APPLICABLE
from kahler_lab.generate.generate import gen_flat_instance, \
    gen_product_type_instance, gen_totally_geodesic_product, gen_random_instance, \
    gen_lemma_instance, gen_conformal_fixture, unitary_frame


def point_of(scenario):
    p = scenario.build()
    return p, gauss_intrinsic(p)


def classify(scenario, mode=None):
    p, geom = point_of(scenario)
    return str2obj[mode or scenario.resolved_mode]()(p, geom)


def test_clusters():
    assert len(clusters([1., 1., 1.])) == 1
    small, large = clusters([3., 0., 3., 3.])
    assert_allclose(small, [0.])
    assert_allclose(large, [3., 3., 3.])


@pytest.mark.parametrize('eigenvalues, c', [
    ([0., 3., 3., 3., 3.], 1.),
    ([-4., 0., -4., -4.], -2.),
    ([0., 3., 3.], 3.),
    ([1., 2., 3., 4.], None),
    ([0., 0., 0., 0.], None),
    ([1., 3., 3., 3.], None),
])
def test_product_type_constant(eigenvalues, c):
    if c is None:
        assert product_type_constant(eigenvalues) is None
    else:
        assert product_type_constant(eigenvalues) == pytest.approx(c)


def test_is_quasi_einstein():
    assert is_quasi_einstein([2., 2., 2., 5.])
    assert is_quasi_einstein([2., 2., 2., 2.])
    assert not is_quasi_einstein([1., 2., 3., 4.])


def test_flag_gate():
    assert Flag.gate('x', 1e-12, 1e-10).value
    assert not Flag.gate('x', 1e-8, 1e-10).value
    assert not Flag.gate('x', None, 1e-10).value


def test_conclusion_label():
    assert Conclusion(PRODUCT_TYPE, c=1.0).label == 'PRODUCT_TYPE(1.0)'
    assert Conclusion(PRODUCT_SPLIT, c1=0.5, c2=-0.5, k=4).label == 'PRODUCT_SPLIT(0.5, -0.5, 4)'
    with pytest.raises(ClassifyError):
        Conclusion('SPHERE')


@pytest.mark.parametrize('n', [4, 5, 6])
def test_flat_instance(n):
    verdict = classify(gen_flat_instance(n))
    assert verdict.kind == FLAT
    assert verdict.flags['mc_semiparallel'].value
    assert not verdict.flags['minimal'].value


@pytest.mark.parametrize('n, c, spectrum', [
    (5, 1., [0., 3., 3., 3., 3.]),
    (4, -2., [-4., -4., -4., 0.]),
])
def test_product_type_instance(n, c, spectrum):
    verdict = classify(gen_product_type_instance(n, c))
    assert verdict.kind == PRODUCT_TYPE
    assert verdict.conclusion.parameters['c'] == pytest.approx(c, abs=1e-10)
    assert_allclose(verdict.residuals['spectrum'], spectrum, atol=1e-10)
    for name in ('n_gt_3', 'conformally_flat', 'mc_semiparallel', 'commutative'):
        assert verdict.flags[name].value, name


def test_product_type_fixture_mode():
    verdict = classify(gen_product_type_instance(5, 2., fixture=True))
    assert verdict.kind == PRODUCT_TYPE
    assert 'fixture mode' in verdict.notes


def test_random_flat_ambient_violates_hypotheses():
    verdict = classify(gen_random_instance(5, 7))
    assert verdict.kind == HYPOTHESIS_VIOLATION
    assert verdict.notes


def test_low_dimension_violates_hypotheses():
    verdict = classify(gen_flat_instance(3))
    assert verdict.kind == HYPOTHESIS_VIOLATION
    assert 'n_gt_3 fails' in verdict.notes
    assert 'proposition' not in verdict.residuals


def test_proposition_minimal_branch():
    p, geom = point_of(gen_random_instance(5, 3, traceless=True))
    prop = proposition_residuals(p, geom)
    assert prop.branch == MINIMAL_BRANCH
    assert np.max(np.abs(prop.residual_21)) <= 1e-12


@pytest.mark.parametrize('n, c', [(4, 1.), (5, -1.), (6, 2.)])
def test_proposition_forward(n, c):
    p, geom = point_of(gen_product_type_instance(n, c))
    residual_21, s_jh_jh, quasi = proposition_residuals(p, geom)
    assert np.max(np.abs(residual_21)) <= 1e-10
    assert abs(s_jh_jh) <= 1e-10
    assert quasi


def test_proposition_violation():
    scenario = gen_conformal_fixture(4, [1., 2., 3., 5.], [1., 1., 1., 1.])
    p, geom = point_of(scenario)
    assert proposition_residuals(p, geom).branch == VIOLATION_BRANCH
    assert classify_theorem_1_2(p, geom).kind == HYPOTHESIS_VIOLATION
    assert scenario.expected == HYPOTHESIS_VIOLATION


def test_proposition_low_dimension():
    p, geom = point_of(gen_flat_instance(3))
    with pytest.raises(ClassifyError):
        proposition_residuals(p, geom)


def test_proposition_einstein_zero_branch():
    h = np.zeros((4, 4, 4))
    h[0, 1, 1] = h[1, 0, 1] = h[1, 1, 0] = 1.
    h[1, 2, 2] = h[2, 1, 2] = h[2, 2, 1] = 1.
    p = SubmanifoldPoint(flat_curvature(4), np.eye(8)[:4], h, fixture=np.zeros((4,) * 4))
    geom = gauss_intrinsic(p)
    prop = proposition_residuals(p, geom)
    assert prop.branch == EINSTEIN_ZERO_BRANCH
    assert_allclose(np.sort(np.abs(prop.jh_eigen)), [0., 0., 0.25, 0.25])
    assert np.all(prop.residual_21 == 0.)
    assert classify_theorem_1_2(p, geom).kind == FLAT


def test_lemma_instance():
    p, geom = point_of(gen_lemma_instance(5, 1., 1., 0.5))
    lemmas = lemma_residuals(p, geom)
    assert lemmas['residual_33'] <= 1e-9
    assert lemmas['residual_31'] <= 1e-9
    assert lemmas['status']['lemma_1'] == HOLDS
    assert lemmas['status']['lemma_2'] == HOLDS
    assert lemmas['status']['lemma_3'] == INACTIVE
    off_diagonal = ~np.eye(5, dtype=bool)
    assert np.max(np.abs(lemmas['vector_32'][off_diagonal])) <= 1e-9
    assert lemma_residuals(p, geom, hypotheses=False)['status']['lemma_1'] == NOT_APPLICABLE


def test_lemma_instance_classification():
    verdict = classify(gen_lemma_instance(5, 1., 1., 0.5))
    assert verdict.theorem == 'theorem_2'
    assert verdict.flags['semiparallel'].value
    assert verdict.kind == PRODUCT_TYPE
    assert 'lemmas' in verdict.residuals


def test_minimal_lemma_instance():
    p, geom = point_of(gen_lemma_instance(5, 1., -2., 0.5))
    assert lemma_residuals(p, geom)['status']['lemma_3'] == HOLDS


def test_semiparallel_mode_excludes_totally_geodesic():
    scenario = gen_totally_geodesic_product(4, 2, 1.)
    verdict = classify(scenario, SEMIPARALLEL)
    assert verdict.kind == HYPOTHESIS_VIOLATION
    assert 'totally_geodesic holds' in verdict.notes


def test_unknown_mode():
    p, geom = point_of(gen_flat_instance(4))
    with pytest.raises(ClassifyError):
        classify_theorem_1_2(p, geom, 'parallel')


def test_theorem_3_split():
    verdict = classify(gen_totally_geodesic_product(5, 4, 2.))
    assert verdict.kind == PRODUCT_SPLIT
    assert verdict.conclusion.label == 'PRODUCT_SPLIT(0.5, -0.5, 4)'
    assert verdict.residuals['residual_42'] <= 1e-10


def test_theorem_3_factor_curvatures():
    verdict = classify(gen_totally_geodesic_product(4, 2, 1.))
    assert verdict.kind == PRODUCT_SPLIT
    assert verdict.residuals['k_found'] == 2
    assert verdict.residuals['factor_1_sectional_mean'] == pytest.approx(0.25, abs=1e-10)
    assert verdict.residuals['factor_2_sectional_mean'] == pytest.approx(-0.25, abs=1e-10)
    assert verdict.residuals['check_conformally_flat'] <= 1e-9


def test_theorem_3_single_direction_factor():
    verdict = classify(gen_totally_geodesic_product(3, 2, -1.))
    assert verdict.kind == PRODUCT_SPLIT
    assert any('single direction' in x for x in verdict.notes)


def test_theorem_3_needs_product():
    p, geom = point_of(gen_flat_instance(4))
    with pytest.raises(ClassifyError):
        classify_theorem_3(p, geom)
    p = SubmanifoldPoint(product_ambient(3, 3, 1.), np.eye(6)[:3], np.zeros((3, 3, 3)))
    with pytest.raises(ClassifyError):
        classify_theorem_3(p, gauss_intrinsic(p))


def test_theorem_3_misaligned_frame(rng):
    p = SubmanifoldPoint(product_ambient(4, 2, 1.), unitary_frame(4, rng), np.zeros((4, 4, 4)))
    verdict = classify_theorem_3(p, gauss_intrinsic(p))
    assert verdict.kind == INDETERMINATE
    assert verdict.flags['semiparallel'].value


def test_theorem_3_not_commutative(rng):
    verdict = classify(gen_random_instance(4, 11, ambient='product', k=2))
    assert verdict.kind == HYPOTHESIS_VIOLATION


def test_looser_gate_does_not_change_flat():
    p, geom = point_of(gen_flat_instance(4))
    tol = tolerance.DEFAULT.update(gate=1e-6)
    assert classify_theorem_1_2(p, geom, MC_SEMIPARALLEL, tol).kind == FLAT


def test_verdict_to_dict_is_plain():
    d = classify(gen_product_type_instance(4, 1.)).to_dict()
    assert d['scope'] == 'pointwise-consistent'
    assert isinstance(d['residuals']['spectrum'], list)
    assert d['residuals']['proposition']['branch'] == QUASI_EINSTEIN_BRANCH
    assert d['conclusion']['kind'] == PRODUCT_TYPE


def test_theorem_3_low_dimension_noted():
    verdict = classify(gen_totally_geodesic_product(3, 2, -1.))
    assert 'n_gt_3 fails, outside the theorem' in verdict.notes
    verdict = classify(gen_totally_geodesic_product(5, 1, -2.))
    assert verdict.kind == PRODUCT_SPLIT
    assert 'k >= n - k fails (1 < 4), outside the theorem' in verdict.notes
    verdict = classify(gen_totally_geodesic_product(5, 4, 2.))
    assert not any('outside the theorem' in x for x in verdict.notes)


def scaled_point(scenario, t):
    p = scenario.build()
    q = SubmanifoldPoint(p.ambient, p.frame, p.h.scaled(t), fixture=p.fixture)
    return q, gauss_intrinsic(q)


def zero_gates(p, geom):
    gate = tolerance.DEFAULT.gate
    flags = hypothesis_flags(p, geom)
    lemmas = lemma_residuals(p, geom)
    return {
        'commutative': flags['commutative'].value,
        'minimal': flags['minimal'].value,
        'totally_geodesic': flags['totally_geodesic'].value,
        'gate_1': (np.abs(lemmas['gate_1']) > gate).tolist(),
        'gate_2': (np.abs(lemmas['gate_2']) > gate).tolist(),
    }


@pytest.mark.parametrize('generator, args', [
    (gen_product_type_instance, (5, 1.)),
    (gen_lemma_instance, (5, 1., -2., 0.5)),
    (gen_random_instance, (4, 7, 'flat', None, 1., False, True)),
])
@pytest.mark.parametrize('t', [1e-3, 1., 1e3])
def test_scaling_h_keeps_zero_gates(generator, args, t):
    scenario = generator(*args)
    expected = zero_gates(*scaled_point(scenario, 1.))
    assert zero_gates(*scaled_point(scenario, t)) == expected
    assert any(any(x) for x in expected['gate_2']) or any(any(x) for x in expected['gate_1'])
