"""Hypotheses and conclusions of the classification theorems at a point

Every verdict is pointwise: it states that the linear-algebraic data at the
point is consistent with the conclusion (Ricci spectrum shape, splitting
alignment, factor curvatures), the global step is out of reach.
"""
import logging

import numpy as np

from kahler_lab import tolerance
from kahler_lab.tensor.tensor import defect_norm, restrict, _scale
from kahler_lab.submanifold.submanifold import semiparallel_defect, \
    mc_semiparallel_defect, commutativity_defect, conformal_flatness_defect, \
    shape_operators

FLAT = 'FLAT'
PRODUCT_TYPE = 'PRODUCT_TYPE'
PRODUCT_SPLIT = 'PRODUCT_SPLIT'
EINSTEIN_ZERO = 'EINSTEIN_ZERO'
INDETERMINATE = 'INDETERMINATE'
HYPOTHESIS_VIOLATION = 'HYPOTHESIS_VIOLATION'
KINDS = (FLAT, PRODUCT_TYPE, PRODUCT_SPLIT, EINSTEIN_ZERO, INDETERMINATE,
         HYPOTHESIS_VIOLATION)

MC_SEMIPARALLEL = 'mc_semiparallel'
SEMIPARALLEL = 'semiparallel'
PRODUCT_SPLIT_MODE = 'product_split'

FLAG_NAMES = ('n_gt_3', 'conformally_flat', 'semiparallel', 'mc_semiparallel',
              'commutative', 'minimal', 'totally_geodesic')

MINIMAL_BRANCH = 'minimal'
QUASI_EINSTEIN_BRANCH = 'quasi_einstein'
EINSTEIN_ZERO_BRANCH = 'einstein_zero'
VIOLATION_BRANCH = 'hypothesis_violation'

NOT_APPLICABLE = 'not_applicable'
INACTIVE = 'inactive'
HOLDS = 'holds'
VIOLATED = 'violated'


class ClassifyError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


class Flag:
    """Named boolean with the defect that justified it

    Args:
        name (str): flag name
        value (bool): flag value
        defect (float or None): measured defect, None if not measurable
    """

    __slots__ = ('name', 'value', 'defect')

    def __init__(self, name, value, defect=None):
        self.name = name
        self.value = bool(value)
        self.defect = None if defect is None else float(defect)

    @classmethod
    def gate(cls, name, defect, tol):
        """True iff the defect is measurable and at most tol"""
        return cls(name, defect is not None and defect <= tol, defect)

    def to_dict(self):
        return {'value': self.value, 'defect': self.defect}

    def __eq__(self, other):
        return isinstance(other, Flag) and (self.name, self.value, self.defect) == (
            other.name, other.value, other.defect)

    def __repr__(self):
        return f'Flag({self.name}={self.value}, defect={self.defect})'


class Conclusion:
    """Conclusion kind with its parameters

    Args:
        kind (str): one of KINDS
        parameters (dict): c for PRODUCT_TYPE, c1, c2, k for PRODUCT_SPLIT
    """

    def __init__(self, kind, **parameters):
        if kind not in KINDS:
            raise ClassifyError(f'Unknown conclusion kind: {kind}')
        self.kind = kind
        self.parameters = parameters

    @property
    def label(self):
        if self.kind == PRODUCT_TYPE:
            return f'{self.kind}({self.parameters["c"]!r})'
        if self.kind == PRODUCT_SPLIT:
            p = self.parameters
            return f'{self.kind}({p["c1"]!r}, {p["c2"]!r}, {p["k"]!r})'
        return self.kind

    def to_dict(self):
        return {'kind': self.kind, 'parameters': dict(self.parameters)}

    def __eq__(self, other):
        return isinstance(other, Conclusion) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'Conclusion({self.label})'


class Verdict:
    """Outcome of a classification

    Args:
        theorem (str): classification that produced the verdict
        flags (dict): name -> Flag
        conclusion (Conclusion): conclusion
        residuals (dict): name -> float or np.ndarray or dict
        notes (list of str): diagnostics (violated hypotheses, fixture mode)
    """

    def __init__(self, theorem, flags, conclusion, residuals=None, notes=None):
        self.theorem = theorem
        self.flags = dict(flags)
        self.conclusion = conclusion
        self.residuals = {} if residuals is None else dict(residuals)
        self.notes = [] if notes is None else list(notes)

    @property
    def kind(self):
        return self.conclusion.kind

    def to_dict(self):
        return {
            'theorem': self.theorem,
            'scope': 'pointwise-consistent',
            'conclusion': self.conclusion.to_dict(),
            'label': self.conclusion.label,
            'flags': {k: v.to_dict() for k, v in self.flags.items()},
            'residuals': {k: _plain(v) for k, v in self.residuals.items()},
            'notes': list(self.notes),
        }

    def __repr__(self):
        return f'Verdict({self.theorem}, {self.conclusion.label})'


def _plain(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def clusters(eigenvalues, tol=tolerance.CLUSTER):
    """Split sorted eigenvalues at the largest gap

    Returns:
        list of np.ndarray: one tight cluster or the two sides of the
            largest gap, a side may be spread itself
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    scale = max(1., _scale(lam))
    if lam.size < 2 or lam[-1] - lam[0] <= tol * scale:
        return [lam]
    cut = int(np.argmax(np.diff(lam))) + 1
    return [lam[:cut], lam[cut:]]


def _tight(values, tol, scale):
    return values.size > 0 and values[-1] - values[0] <= tol * scale


def is_quasi_einstein(eigenvalues, tol=tolerance.CLUSTER):
    """At least n - 1 eigenvalues coincide within tol"""
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    n = lam.size
    scale = max(1., _scale(lam))
    parts = clusters(lam, tol)
    return any(x.size >= n - 1 and _tight(x, tol, scale) for x in parts)


def product_type_constant(eigenvalues, tol=tolerance.CLUSTER):
    """c of a {0, (n-2)c x (n-1)} spectrum, None for any other shape"""
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    n = lam.size
    scale = max(1., _scale(lam))
    parts = clusters(lam, tol)
    if len(parts) != 2:
        return None
    small, large = sorted(parts, key=len)
    if small.size != 1 or large.size != n - 1 or not _tight(large, tol, scale):
        return None
    if abs(small[0]) > tol * scale:
        return None
    m = float(np.mean(large))
    if abs(m) <= tol * scale:
        return None
    return m / (n - 2)


def eigenframe_cubic(p, geom):
    """h in the Ricci eigenframe"""
    e = geom.spectrum.eigenvectors
    return np.einsum('xyz,xa,yb,zc->abc', p.h.entries, e, e, e, optimize=True)


def eigenvalue_sums(geom):
    """lambda_j + lambda_k - tau / (n - 1)"""
    lam = geom.spectrum.eigenvalues
    return lam[:, None] + lam[None, :] - geom.tau / (geom.n - 1)


class PropositionResiduals:
    """Residual system of the quasi-Einstein proposition

    Unpacks as (residual_21, s_jh_jh, quasi_einstein).
    """

    def __init__(self, residual_21, s_jh_jh, quasi_einstein, jh_eigen, branch):
        self.residual_21 = residual_21
        self.s_jh_jh = s_jh_jh
        self.quasi_einstein = quasi_einstein
        self.jh_eigen = jh_eigen
        self.branch = branch

    def __iter__(self):
        return iter((self.residual_21, self.s_jh_jh, self.quasi_einstein))

    def to_dict(self):
        return {'residual_21': self.residual_21.tolist(),
                's_jh_jh': self.s_jh_jh,
                'quasi_einstein': self.quasi_einstein,
                'jh_eigen': self.jh_eigen.tolist(),
                'branch': self.branch}


def proposition_residuals(p, geom, tol=tolerance.DEFAULT):
    """(lambda_i + lambda_j - tau/(n-1)) g(e_j, JH) in the Ricci eigenframe

    Args:
        p (SubmanifoldPoint): the point
        geom (IntrinsicGeometry): its intrinsic geometry
        tol (Tolerances): tolerances

    Returns:
        PropositionResiduals: residual_21 (zero diagonal), S(JH, JH),
            quasi-Einstein flag and the branch of the argument
    """
    n = geom.n
    if n <= 3:
        raise ClassifyError(f'Proposition needs n > 3, got n={n}')
    jh = geom.jh_tangent
    jh_eigen = geom.spectrum.eigenvectors.T @ jh
    residual = eigenvalue_sums(geom) * jh_eigen[None, :]
    np.fill_diagonal(residual, 0.)
    s_jh_jh = float(jh @ geom.s.entries @ jh)
    quasi = is_quasi_einstein(geom.spectrum.eigenvalues, tol.cluster)
    nonzero = int(np.sum(np.abs(jh_eigen) > tol.gate))
    if nonzero == 0:
        branch = MINIMAL_BRANCH
    elif _scale(residual) > tol.gate:
        branch = VIOLATION_BRANCH
    elif nonzero >= 2:
        branch = EINSTEIN_ZERO_BRANCH
    elif quasi:
        branch = QUASI_EINSTEIN_BRANCH
    else:
        branch = VIOLATION_BRANCH
    logging.debug(f'Proposition branch: {branch}')
    return PropositionResiduals(residual, s_jh_jh, quasi, jh_eigen, branch)


def _zero_and_equal(lam, zero, tol, scale):
    """lambda_zero = 0 and all other eigenvalues equal"""
    rest = np.delete(lam, zero)
    spread = float(np.max(rest) - np.min(rest)) if rest.size else 0.
    return max(abs(lam[zero]), spread) <= tol * scale


def lemma_residuals(p, geom, hypotheses=True, tol=tolerance.DEFAULT):
    """Gating quantities and eigenvalue residuals of the semiparallel lemmas

    Args:
        p (SubmanifoldPoint): the point
        geom (IntrinsicGeometry): its intrinsic geometry
        hypotheses (bool): conformal flatness and semiparallelism hold,
            statuses are not_applicable otherwise
        tol (Tolerances): tolerances

    Returns:
        dict: gate_1[i][k] = g(A_{Je_i}e_i, e_k) (i != k),
            gate_2[i] = g(A_{Je_i}e_i, e_i), eigenvalue sums, the scaled
            vector residuals, the maxima of the fired eigenvalue residuals and a
            status per lemma
    """
    n = geom.n
    hp = eigenframe_cubic(p, geom)
    lam = geom.spectrum.eigenvalues
    scale = max(1., _scale(lam))
    sums = eigenvalue_sums(geom)
    idx = np.arange(n)
    gate_1 = hp[idx, idx, :].copy()
    np.fill_diagonal(gate_1, 0.)
    gate_2 = hp[idx, idx, idx].copy()
    # 2 A_i e_k + h[i][i][k] e_i - h[i][i][i] e_k, scaled by the sum
    vectors = 2. * np.transpose(hp, (0, 2, 1))
    vectors[idx, :, idx] += hp[idx, idx, :]
    vectors[:, idx, idx] -= gate_2[:, None]
    vectors = sums[:, :, None] * vectors
    residual_31, residual_33 = 0., 0.
    lemma_1, lemma_2 = INACTIVE, INACTIVE
    for i in range(n):
        for k in range(n):
            if i == k or abs(gate_1[i, k]) <= tol.gate:
                continue
            others = [j for j in range(n) if j != i and j != k]
            residual_31 = max([residual_31] + [abs(sums[j, k]) for j in others])
            residual_33 = max(residual_33, abs(sums[i, k]))
            ok = _zero_and_equal(lam, k, tol.cluster, scale)
            lemma_1 = VIOLATED if not ok or lemma_1 == VIOLATED else HOLDS
    for i in range(n):
        if abs(gate_2[i]) <= tol.gate:
            continue
        ok = _zero_and_equal(lam, i, tol.cluster, scale)
        lemma_2 = VIOLATED if not ok or lemma_2 == VIOLATED else HOLDS
    minimal = _scale(np.einsum('kii->k', hp)) <= tol.gate
    totally_geodesic = _scale(hp) <= tol.gate
    if not minimal or totally_geodesic:
        lemma_3 = INACTIVE
    elif any(_zero_and_equal(lam, k, tol.cluster, scale) for k in range(n)):
        lemma_3 = HOLDS
    else:
        lemma_3 = VIOLATED
    if not hypotheses:
        lemma_1 = lemma_2 = lemma_3 = NOT_APPLICABLE
    return {
        'gate_1': gate_1,
        'gate_2': gate_2,
        'eigenvalue_sums': sums,
        'vector_32': vectors,
        'residual_31': residual_31,
        'residual_33': residual_33,
        'status': {'lemma_1': lemma_1, 'lemma_2': lemma_2, 'lemma_3': lemma_3},
    }


def hypothesis_flags(p, geom, tol=tolerance.DEFAULT):
    """All hypothesis flags with their defects"""
    n = geom.n
    first, _ = semiparallel_defect(p, geom)
    h_norm = p.space.norm(geom.h_normal)
    return {
        'n_gt_3': Flag('n_gt_3', n > 3),
        'conformally_flat': Flag.gate('conformally_flat',
                                      conformal_flatness_defect(geom), tol.gate),
        'semiparallel': Flag.gate('semiparallel', first, tol.gate),
        'mc_semiparallel': Flag.gate('mc_semiparallel',
                                     mc_semiparallel_defect(geom), tol.gate),
        'commutative': Flag.gate('commutative', commutativity_defect(p), tol.gate),
        'minimal': Flag.gate('minimal', h_norm, tol.gate),
        'totally_geodesic': Flag.gate('totally_geodesic', defect_norm(p.h), tol.gate),
    }


def _violations(flags, required, excluded):
    out = [f'{x} fails' for x in required if not flags[x].value]
    out.extend(f'{x} holds' for x in excluded if flags[x].value)
    return out


def classify_theorem_1_2(p, geom, mode=MC_SEMIPARALLEL, tol=tolerance.DEFAULT):
    """Flat or M_1^{n-1}(c) x I under conformal flatness

    Args:
        p (SubmanifoldPoint): the point
        geom (IntrinsicGeometry): its intrinsic geometry
        mode (str): mc_semiparallel (mean curvature semiparallel, not
            minimal) or semiparallel (not totally geodesic)
        tol (Tolerances): tolerances

    Returns:
        Verdict: HYPOTHESIS_VIOLATION when a hypothesis fails, FLAT,
            PRODUCT_TYPE(c), EINSTEIN_ZERO or INDETERMINATE otherwise
    """
    if mode == MC_SEMIPARALLEL:
        theorem, required, excluded = 'theorem_1', ('mc_semiparallel',), ('minimal',)
    elif mode == SEMIPARALLEL:
        theorem, required, excluded = 'theorem_2', ('semiparallel',), ('totally_geodesic',)
    else:
        raise ClassifyError(f'Unknown mode: {mode}')
    flags = hypothesis_flags(p, geom, tol)
    lam = geom.spectrum.eigenvalues
    residuals = {
        'spectrum': lam.copy(),
        'tau': geom.tau,
        'mean_curvature_length': flags['minimal'].defect,
        'curvature': defect_norm(geom.r),
    }
    notes = ['fixture mode'] if geom.fixture_mode else []
    violations = _violations(flags, ('n_gt_3', 'conformally_flat') + required, excluded)
    if flags['n_gt_3'].value:
        if mode == MC_SEMIPARALLEL:
            prop = proposition_residuals(p, geom, tol)
            residuals['proposition'] = prop.to_dict()
        else:
            hypotheses = flags['conformally_flat'].value and flags['semiparallel'].value
            residuals['lemmas'] = lemma_residuals(p, geom, hypotheses, tol)
    if violations:
        notes.extend(violations)
        logging.info(f'{theorem}: hypotheses violated: {violations}')
        return Verdict(theorem, flags, Conclusion(HYPOTHESIS_VIOLATION), residuals, notes)
    n = geom.n
    c = product_type_constant(lam, tol.cluster)
    if defect_norm(geom.r) <= tol.gate:
        conclusion = Conclusion(FLAT)
    elif c is not None:
        conclusion = Conclusion(PRODUCT_TYPE, c=c)
    elif defect_norm(geom.s) <= tol.gate:
        conclusion = Conclusion(EINSTEIN_ZERO)
    else:
        conclusion = Conclusion(INDETERMINATE)
        notes.append(f'Spectrum is not of the form {{0, (n-2)c x {n - 1}}}')
        logging.warning(f'{theorem}: hypotheses hold but the conclusion does not')
    return Verdict(theorem, flags, conclusion, residuals, notes)


def alignment(p):
    """Per frame vector min(|Fe - e|, |Fe + e|) and the matching F sign"""
    model = p.ambient.model
    space = p.space
    fe = p.frame @ model.f.T
    plus = np.array([space.norm(x) for x in fe - p.frame])
    minus = np.array([space.norm(x) for x in fe + p.frame])
    return np.minimum(plus, minus), np.where(plus <= minus, 1, -1)


def factor_sectional(r, indices):
    """Sectional curvatures R(e_i, e_j, e_j, e_i) over pairs inside a factor"""
    r = np.asarray(r)
    return np.array([r[i, j, j, i] for a, i in enumerate(indices)
                     for j in indices[a + 1:]])


def classify_theorem_3(p, geom, tol=tolerance.DEFAULT):
    """Splitting M^k(mu/4) x M^{n-k} in a Kaehler product with opposite curvatures

    Args:
        p (SubmanifoldPoint): point on a product ambient
        geom (IntrinsicGeometry): its intrinsic geometry
        tol (Tolerances): tolerances

    Returns:
        Verdict: PRODUCT_SPLIT(mu/4, -mu/4, k) when every check passes
    """
    model = p.ambient.model
    if model is None:
        raise ClassifyError('Product splitting needs a product ambient')
    if model.k == model.n:
        raise ClassifyError('Product splitting needs two factors, got k = n')
    n, mu = geom.n, model.mu
    flags = hypothesis_flags(p, geom, tol)
    notes = ['fixture mode'] if geom.fixture_mode else []
    # recorded, not gating: low dimensions calibrate the checks
    if not flags['n_gt_3'].value:
        notes.append('n_gt_3 fails, outside the theorem')
    if model.k < n - model.k:
        notes.append(f'k >= n - k fails ({model.k} < {n - model.k}), outside the theorem')
    r = geom.r.entries
    triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)
               if len({i, j, k}) == 3]
    fy = restrict_bilinear(p.frame, p.space.g.entries @ model.f)
    residual_42 = max([abs(r[i, j, k, i] - mu / 8. * fy[j, k]) for i, j, k in triples],
                      default=0.)
    defects, signs = alignment(p)
    residuals = {
        'mean_curvature_length': flags['minimal'].defect,
        'gauss_restriction': defect_norm(r - restrict(p.ambient.r, p.frame)),
        'residual_42': residual_42,
        'alignment': defects,
        'model_k': model.k,
    }
    violations = _violations(flags, ('semiparallel', 'commutative'), ())
    if violations:
        notes.extend(violations)
        return Verdict('theorem_3', flags, Conclusion(HYPOTHESIS_VIOLATION), residuals, notes)
    if np.any(defects > tol.gate):
        notes.append(f'Frame vectors not F-aligned: {np.flatnonzero(defects > tol.gate).tolist()}')
        logging.warning('theorem_3: misaligned frame on a commutative semiparallel point')
        return Verdict('theorem_3', flags, Conclusion(INDETERMINATE), residuals, notes)
    one = np.flatnonzero(signs > 0).tolist()
    two = np.flatnonzero(signs < 0).tolist()
    a = shape_operators(p)
    checks = {
        'gauss_restriction': residuals['gauss_restriction'],
        'residual_42': residual_42,
        'mixed_sectional': max([abs(r[i, j, j, i]) for i in one for j in two], default=0.),
    }
    if n > 3:
        checks['conformally_flat'] = flags['conformally_flat'].defect
    for name, indices, c in (('factor_1', one, mu / 4.), ('factor_2', two, -mu / 4.)):
        if len(indices) < 2:
            notes.append(f'{name}: single direction, curvature check skipped')
            continue
        ks = factor_sectional(r, indices)
        residuals[f'{name}_sectional_mean'] = float(np.mean(ks))
        checks[f'{name}_sectional'] = float(np.max(np.abs(ks - c)))
        checks[f'{name}_totally_geodesic'] = _scale(a[:, indices][:, :, indices])
    residuals['k_found'] = len(one)
    residuals.update({f'check_{k}': v for k, v in checks.items()})
    failed = [k for k, v in checks.items() if v > tol.gate]
    if not one:
        failed.append('factor_1 empty')
    if failed:
        notes.append(f'Failed checks: {failed}')
        conclusion = Conclusion(INDETERMINATE)
    else:
        conclusion = Conclusion(PRODUCT_SPLIT, c1=mu / 4., c2=-mu / 4., k=len(one))
    return Verdict('theorem_3', flags, conclusion, residuals, notes)


def restrict_bilinear(frame, b):
    """b(e_i, e_j) on the rows of frame"""
    return frame @ b @ frame.T


class Mode:
    """Classification strategy selected by name"""

    name = None

    def __call__(self, p, geom, tol=tolerance.DEFAULT):
        raise NotImplementedError()


class McSemiparallel(Mode):
    name = MC_SEMIPARALLEL

    def __call__(self, p, geom, tol=tolerance.DEFAULT):
        return classify_theorem_1_2(p, geom, MC_SEMIPARALLEL, tol)


class Semiparallel(Mode):
    name = SEMIPARALLEL

    def __call__(self, p, geom, tol=tolerance.DEFAULT):
        return classify_theorem_1_2(p, geom, SEMIPARALLEL, tol)


class ProductSplit(Mode):
    name = PRODUCT_SPLIT_MODE

    def __call__(self, p, geom, tol=tolerance.DEFAULT):
        return classify_theorem_3(p, geom, tol)


str2obj = {
    McSemiparallel.name: McSemiparallel,
    Semiparallel.name: Semiparallel,
    ProductSplit.name: ProductSplit,
}
