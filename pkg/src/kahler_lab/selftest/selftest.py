"""Built-in identity suites

Each suite checks one family of identities against an independent oracle
and reports the largest defect it met.
"""
import logging
from itertools import product

import numpy as np

from kahler_lab import tolerance
from kahler_lab.tensor.tensor import Bilinear, phi, psi, ricci, restrict, \
    defect_norm, is_curvature_like, random_symmetric, random_curvature, _scale
from kahler_lab.ambient.ambient import make_standard_space, ProductModel, \
    product_curvature, product_curvature_entries, direct_sum_curvature, \
    bochner, holomorphic_sectional, random_kaehler_curvature, flat_curvature, \
    product_ambient
from kahler_lab.submanifold.submanifold import SubmanifoldPoint, gauss_intrinsic, \
    semiparallel_defect, mc_semiparallel_defect, commutativity_defect, \
    conformal_flatness_defect, weyl_tensor
from kahler_lab.classify.classify import proposition_residuals, \
    classify_theorem_1_2, classify_theorem_3, MC_SEMIPARALLEL, \
    HYPOTHESIS_VIOLATION, PRODUCT_SPLIT, QUASI_EINSTEIN_BRANCH
from kahler_lab.generate.generate import gen_product_type_instance, \
    gen_totally_geodesic_product, gen_conformal_fixture, random_cubic, \
    unitary_frame, space_form_fixture
from kahler_lab.support.support import timeit

SEED = 20240101
PRODUCT_GRID = [(n, k, mu) for n in range(2, 6) for k in range(1, n)
                for mu in (-1., 1., 2.5)]


class SuiteResult:
    """Outcome of a suite

    Args:
        name (str): suite name
        passed (bool): all checks passed
        defects (dict): check name -> largest defect met
        cases (int): number of instances checked
        failures (list of str): failed checks
    """

    def __init__(self, name, passed, defects, cases=0, failures=None):
        self.name = name
        self.passed = bool(passed)
        self.defects = dict(defects)
        self.cases = cases
        self.failures = [] if failures is None else list(failures)

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'cases': self.cases,
                'defects': dict(self.defects), 'failures': list(self.failures)}

    def __repr__(self):
        return f'SuiteResult({self.name}, passed={self.passed})'


class Suite:
    """Identity suite, subclasses implement check"""

    name = None

    def __init__(self, sabotage_sign=False):
        self.sabotage_sign = sabotage_sign
        self.defects = {}
        self.failures = []
        self.cases = 0

    def record(self, name, defect, bound=None, lower=None):
        """Keep the largest defect, fail when above bound or not above lower"""
        defect = float(defect)
        if lower is not None:
            self.defects[name] = min(self.defects.get(name, np.inf), defect)
            if not defect > lower:
                self.failures.append(f'{name}: {defect} <= {lower}')
            return
        self.defects[name] = max(self.defects.get(name, 0.), defect)
        if bound is not None and not defect <= bound:
            self.failures.append(f'{name}: {defect} > {bound}')

    def expect(self, name, condition, detail=''):
        if not condition:
            self.failures.append(f'{name}: {detail}')

    def check(self):
        raise NotImplementedError()

    def __call__(self):
        self.check()
        return SuiteResult(self.name, not self.failures, self.defects, self.cases,
                           self.failures)


class PhiPsiLinearity(Suite):
    name = 'phi_psi_linearity'

    def check(self):
        rng = np.random.default_rng(SEED)
        for n in (1, 2, 3, 4):
            space = make_standard_space(n)
            g, j = space.g, space.j
            for _ in range(5):
                q1, q2 = (random_symmetric(space.dim, rng) for _ in range(2))
                a, b = rng.uniform(-2., 2., size=2)
                q = a * q1 + b * q2
                lhs = phi(g, q).entries
                rhs = a * phi(g, q1).entries + b * phi(g, q2).entries
                self.record('phi', _scale(lhs - rhs), 1e-12)
                lhs = psi(g, j, q).entries
                rhs = a * psi(g, j, q1).entries + b * psi(g, j, q2).entries
                self.record('psi', _scale(lhs - rhs), 1e-12)
                self.cases += 1
            self.record('phi_g_sectional', abs(phi(g, g).entries[0, 1, 1, 0] - 2.), 1e-15)
            self.record('psi_g_holomorphic', abs(psi(g, j, g).entries[0, n, n, 0] - 6.), 1e-15)


class BochnerTraceFree(Suite):
    name = 'bochner_trace_free'

    def check(self):
        rng = np.random.default_rng(SEED + 1)
        for i in range(100):
            space = make_standard_space(2 + i % 3)
            k = random_kaehler_curvature(space, rng)
            b = bochner(k)
            self.record('ricci_of_bochner', defect_norm(ricci(b, space.g)), 1e-10)
            self.record('curvature_like', 0. if is_curvature_like(b) else 1., 0.)
            self.cases += 1


class BochnerProductVanishing(Suite):
    name = 'bochner_product_vanishing'

    def check(self):
        for n, k, mu in PRODUCT_GRID:
            self.record('direct_sum', defect_norm(bochner(direct_sum_curvature(n, k, mu))), 1e-10)
            model = ProductModel(make_standard_space(n), mu, k)
            self.record('product', defect_norm(bochner(product_curvature(model))), 1e-10)
            self.cases += 1
        self.record('flat', defect_norm(bochner(flat_curvature(3))), 0.)


class ProductCurvatureOracle(Suite):
    name = 'product_curvature_oracle'

    def check(self):
        sign = -1. if self.sabotage_sign else 1.
        for n, k, mu in PRODUCT_GRID:
            model = ProductModel(make_standard_space(n), mu, k)
            oracle = direct_sum_curvature(n, k, mu).r.entries
            corrected = product_curvature_entries(model, sign)
            flipped = product_curvature_entries(model, -sign)
            self.record('corrected_sign', _scale(corrected - oracle), 1e-12)
            self.record('flipped_sign', _scale(flipped - oracle) / abs(mu), lower=0.1)
            swapped = product_curvature_entries(model.negated(), sign)
            self.record('odd_in_mu', _scale(swapped - corrected), 1e-14)
            self.cases += 1
        logging.info(f'Flipped sign defect: {self.defects.get("flipped_sign")}')


class ConstantHscCalibration(Suite):
    name = 'constant_hsc_calibration'

    def check(self):
        rng = np.random.default_rng(SEED + 2)
        for n, mu in product((2, 3, 4), (-1., 1., 2.5)):
            space = make_standard_space(n)
            model = ProductModel(space, mu, n)
            k = product_curvature(model)
            for _ in range(5):
                x = rng.standard_normal(space.dim)
                self.record('holomorphic_sectional', abs(holomorphic_sectional(k, x) - mu), 1e-12)
            e = unitary_frame(n, rng)
            r = restrict(k.r, e)
            ks = [r[i, j, j, i] for i in range(n) for j in range(n) if i != j]
            self.record('totally_real_sectional', max(abs(x - mu / 4.) for x in ks), 1e-12)
            self.cases += 1


def random_points(count, seed):
    """Random points on flat and product ambients with canonical or unitary frames

    Every fourth point has a commuting cubic on a product ambient.
    """
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = 4 + i % 3
        if i % 2 == 0:
            ambient = flat_curvature(n)
        else:
            ambient = product_ambient(n, int(rng.integers(1, n)), float(rng.choice([-1., 1., 2.5])))
        frame = unitary_frame(n, rng) if i % 4 >= 2 else np.eye(2 * n)[:n]
        yield SubmanifoldPoint(ambient, frame, random_cubic(n, rng, commuting=i % 4 == 3))


def gauss_loops(p):
    """Component loops of R~(e_i,e_j,e_k,e_l) + g([A_i, A_j]e_k, e_l)"""
    h = p.h.entries
    n = p.n
    r = restrict(p.ambient.r, p.frame)
    out = np.zeros((n,) * 4)
    for i, j, k, l in product(range(n), repeat=4):
        s = 0.
        for m in range(n):
            s += h[i, l, m] * h[j, m, k] - h[j, l, m] * h[i, m, k]
        out[i, j, k, l] = r[i, j, k, l] + s
    return out


class GaussOracle(Suite):
    name = 'gauss_oracle'

    def check(self):
        for p in random_points(200, SEED + 3):
            geom = gauss_intrinsic(p)
            r = geom.r.entries
            self.record('gauss', _scale(r - gauss_loops(p)) / max(1., _scale(r)), 1e-14)
            self.record('curvature_like', 0. if is_curvature_like(r) else 1., 0.)
            if commutativity_defect(p) == 0.:
                self.record('commutative_restriction',
                            _scale(r - restrict(p.ambient.r, p.frame)), 1e-12)
            self.cases += 1


class SemiparallelDualPath(Suite):
    name = 'semiparallel_dual_path'

    def check(self):
        for p in random_points(200, SEED + 3):
            geom = gauss_intrinsic(p)
            first, second = semiparallel_defect(p, geom)
            self.record('disagreement', abs(first - second) / max(1., first, second), 1e-12)
            if commutativity_defect(p) > 0.:
                self.record('generic_defect', first, lower=0.)
            self.cases += 1


class PropositionForward(Suite):
    name = 'proposition_forward'

    def check(self):
        for i in range(100):
            n = 4 + i % 3
            c = (1., -1., 2., -2.)[i % 4]
            jh = 0.5 + 0.25 * (i % 5)
            s = gen_product_type_instance(n, c, jh=jh, fixture=i % 10 == 9)
            p = s.build()
            geom = gauss_intrinsic(p)
            prop = proposition_residuals(p, geom)
            self.record('residual_21', _scale(prop.residual_21), 1e-10)
            self.record('s_jh_jh', abs(prop.s_jh_jh), 1e-10)
            self.record('mc_semiparallel', mc_semiparallel_defect(geom), 1e-10)
            self.expect('quasi_einstein', prop.quasi_einstein, s.name)
            self.expect('branch', prop.branch == QUASI_EINSTEIN_BRANCH, f'{s.name}: {prop.branch}')
            self.cases += 1


class PropositionViolation(Suite):
    name = 'proposition_violation'

    def check(self):
        rng = np.random.default_rng(SEED + 4)
        for i in range(100):
            n = 4 + i % 3
            lam = np.sort(rng.uniform(-3., 3., size=n)) + np.arange(n)
            jh = rng.uniform(0.5, 1.5, size=n) * rng.choice([-1., 1.], size=n)
            s = gen_conformal_fixture(n, lam.tolist(), jh.tolist())
            p = s.build()
            geom = gauss_intrinsic(p)
            verdict = classify_theorem_1_2(p, geom, MC_SEMIPARALLEL)
            self.expect('verdict', verdict.kind == HYPOTHESIS_VIOLATION, f'{s.name}: {verdict}')
            self.record('mc_semiparallel', mc_semiparallel_defect(geom), lower=0.)
            self.cases += 1


class Theorem3(Suite):
    name = 'theorem_3'

    def check(self):
        for n, k, mu in PRODUCT_GRID:
            p = gen_totally_geodesic_product(n, k, mu).build()
            geom = gauss_intrinsic(p)
            verdict = classify_theorem_3(p, geom)
            self.expect('verdict', verdict.kind == PRODUCT_SPLIT, f'{(n, k, mu)}: {verdict}')
            res = verdict.residuals
            if k > 1:
                self.record('factor_1', abs(res['factor_1_sectional_mean'] - mu / 4.), 1e-10)
            if n - k > 1:
                self.record('factor_2', abs(res['factor_2_sectional_mean'] + mu / 4.), 1e-10)
            self.record('commutative', commutativity_defect(p), 0.)
            self.record('residual_42', res['residual_42'], 1e-10)
            if n > 3:
                self.record('weyl', conformal_flatness_defect(geom), 1e-9)
            self.cases += 1


class Weyl(Suite):
    name = 'weyl'

    def check(self):
        rng = np.random.default_rng(SEED + 5)
        for n, c in product((4, 5, 6), (-1., 1.)):
            self.record('space_form', defect_norm(weyl_tensor(space_form_fixture(n, c, skip=()))), 1e-10)
            self.record('product_with_segment', defect_norm(weyl_tensor(space_form_fixture(n, c))), 1e-10)
            self.cases += 2
        for i in range(20):
            n = 4 + i % 3
            c = weyl_tensor(random_curvature(n, rng))
            self.record('trace_free', defect_norm(ricci(c, Bilinear(np.eye(n), metric=True))), 1e-10)
            self.cases += 1


str2obj = {x.name: x for x in (
    PhiPsiLinearity, BochnerTraceFree, BochnerProductVanishing,
    ProductCurvatureOracle, ConstantHscCalibration, GaussOracle,
    SemiparallelDualPath, PropositionForward, PropositionViolation, Theorem3,
    Weyl)}


@timeit
def run_suites(pattern=None, sabotage_sign=False):
    """Run suites whose names contain pattern

    Returns:
        list of SuiteResult: results in registration order
    """
    results = []
    for name, cls in str2obj.items():
        if pattern is not None and pattern not in name:
            continue
        logging.info(f'Suite {name}')
        result = timeit(cls(sabotage_sign=sabotage_sign))()
        logging.info(f'{result}')
        results.append(result)
    return results
