"""Ambient Kaehler data at a point

Real dimension 2n with the standard basis e_1..e_n, e_{n+1}..e_{2n} and
J e_i = e_{n+i}, J e_{n+i} = -e_i. Arrays of J and F are operator matrices:
column a is the image of e_a.
"""
import logging

import numpy as np

from kahler_lab import tolerance
from kahler_lab.tensor.tensor import Bilinear, QuadTensor, phi, psi, ricci, \
    scalar, freeze, parse_vector, random_symmetric, entries_of, _scale

MAX_N = 12


class AmbientError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


def standard_complex_structure(n):
    j = np.zeros((2 * n, 2 * n))
    j[n:, :n] = np.eye(n)
    j[:n, n:] = -np.eye(n)
    return j


class AmbientSpace:
    """Hermitian vector space (T_p M, g, J) of real dimension 2n

    Args:
        n (int): complex dimension
        g (list of list or np.ndarray or Bilinear or None): metric, identity if None
        j (list of list or np.ndarray or None): complex structure, standard if None
        tol (float): tolerance of J^2 = -Id and g(Jx, Jy) = g(x, y)
    """

    def __init__(self, n, g=None, j=None, tol=tolerance.INTERNAL):
        if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_N:
            raise AmbientError(f'Complex dimension must be in [1, {MAX_N}]: {n}')
        self.n = int(n)
        g = np.eye(2 * n) if g is None else entries_of(g)
        self.g = Bilinear(g, metric=True)
        j = standard_complex_structure(n) if j is None else np.array(j, dtype=float)
        if j.shape != (2 * n, 2 * n):
            raise AmbientError(f'J must be {2 * n}x{2 * n}, got {j.shape}')
        square = _scale(j @ j + np.eye(2 * n))
        if square > tol:
            raise AmbientError(f'J is not a complex structure, |J^2 + Id| = {square}')
        ge = self.g.entries
        orthogonal = _scale(j.T @ ge @ j - ge)
        if orthogonal > tol:
            raise AmbientError(f'g is not J-invariant: {orthogonal}')
        self.j = freeze(j)

    @property
    def dim(self):
        return 2 * self.n

    def apply_j(self, v):
        """J applied to a vector (..., 2n)"""
        return np.asarray(v) @ self.j.T

    def inner(self, x, y):
        return float(np.asarray(x) @ self.g.entries @ np.asarray(y))

    def norm(self, x):
        return float(np.sqrt(self.inner(x, x)))

    def __repr__(self):
        return f'AmbientSpace(n={self.n})'


def make_standard_space(n):
    """Euclidean metric and standard J on R^{2n}, 1 <= n <= 12"""
    return AmbientSpace(n)


def factor_mask(n, k):
    """Boolean mask of the real basis vectors spanning the first factor C^k"""
    mask = np.zeros(2 * n, dtype=bool)
    mask[:k] = True
    mask[n:n + k] = True
    return mask


def canonical_involution(n, k):
    """F = pi_1 - pi_2 for the block split C^k + C^{n-k}"""
    return np.diag(np.where(factor_mask(n, k), 1., -1.))


class ProductModel:
    """Kaehler product M^{2k}(mu) x M^{2(n-k)}(-mu) at a point

    k = n is accepted as the single-factor calibration case (F = Id).

    Args:
        space (AmbientSpace): ambient space
        mu (float): holomorphic sectional curvature of the first factor, nonzero
        k (int): complex dimension of the first factor
        f (np.ndarray or None): involution pi_1 - pi_2, canonical if None
        tol (float): tolerance of the involution checks
    """

    def __init__(self, space, mu, k, f=None, tol=tolerance.INTERNAL):
        n = space.n
        if mu == 0:
            raise AmbientError('Product model needs mu != 0')
        if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
            raise AmbientError(f'Factor dimension k must be in [1, {n}]: {k}')
        f = canonical_involution(n, k) if f is None else np.array(f, dtype=float)
        if f.shape != (2 * n, 2 * n):
            raise AmbientError(f'F must be {2 * n}x{2 * n}, got {f.shape}')
        g, j = space.g.entries, space.j
        defects = {
            'involution': _scale(f @ f - np.eye(2 * n)),
            'symmetry': _scale(g @ f - (g @ f).T),
            'commutation': _scale(f @ j - j @ f),
        }
        for name, value in defects.items():
            if value > tol:
                raise AmbientError(f'Invalid F, {name} defect {value}')
        plus = int(round((np.trace(f) + 2 * n) / 2))
        if plus != 2 * k:
            raise AmbientError(f'+1 eigenspace of F has dimension {plus}, expected {2 * k}')
        self.space = space
        self.mu = float(mu)
        self.k = int(k)
        self.f = freeze(f)

    @property
    def n(self):
        return self.space.n

    def projectors(self):
        eye = np.eye(self.space.dim)
        return 0.5 * (eye + self.f), 0.5 * (eye - self.f)

    def negated(self):
        """Same product with factor roles swapped: (-mu, n - k, -F)"""
        return ProductModel(self.space, -self.mu, self.n - self.k, -self.f)

    def __repr__(self):
        return f'ProductModel(n={self.n}, k={self.k}, mu={self.mu})'


def kaehler_defect(space, r):
    """max |R(x,y,z,u) - R(x,y,Jz,Ju)| over basis vectors"""
    r = entries_of(r)
    j = space.j
    return _scale(r - np.einsum('ijab,ak,bl->ijkl', r, j, j))


class KaehlerCurvature:
    """Curvature tensor of a Kaehler manifold at a point with its contractions

    Args:
        space (AmbientSpace): ambient space
        r (QuadTensor or np.ndarray): curvature tensor
        model (ProductModel or None): product structure the tensor comes from
        kind (str): label of the construction
        tol (float): relative tolerance of the curvature and Kaehler checks
    """

    def __init__(self, space, r, model=None, kind='custom', tol=tolerance.INTERNAL):
        r = QuadTensor(entries_of(r), curvature_like=True, tol=tol)
        if r.dim != space.dim:
            raise AmbientError(f'Curvature dimension {r.dim} != {space.dim}')
        defect = kaehler_defect(space, r)
        if defect > tol * _scale(r.entries):
            raise AmbientError(f'Tensor is not Kaehler-symmetric: {defect}')
        self.space = space
        self.r = r
        self.ricci = ricci(r, space.g)
        self.tau = scalar(self.ricci, space.g)
        self.model = model
        self.kind = kind

    @property
    def n(self):
        return self.space.n

    def __repr__(self):
        return f'KaehlerCurvature(kind={self.kind}, n={self.n})'


def _pair(a, b):
    """a(x,u)b(y,z) - a(x,z)b(y,u)"""
    return np.einsum('ad,bc->abcd', a, b) - np.einsum('ac,bd->abcd', a, b)


def hsc_bracket(a, j):
    """a(x,u)a(y,z) - a(x,z)a(y,u) + a(Jx,u)a(Jy,z) - a(Jx,z)a(Jy,u) + 2a(x,Jy)a(Jz,u)

    With a = g this is 4/mu times the constant holomorphic sectional curvature mu tensor.
    """
    ja = j.T @ a  # a(Je_p, e_q)
    aj = a @ j  # a(e_p, Je_q)
    return _pair(a, a) + _pair(ja, ja) + 2. * np.einsum('ab,cd->abcd', aj, ja)


def direct_sum_curvature(n, k, mu):
    """Block construction of M^{2k}(mu) x M^{2(n-k)}(-mu), k = n for one factor

    Args:
        n (int): complex dimension
        k (int): complex dimension of the first factor, 1 <= k <= n
        mu (float): holomorphic sectional curvature of the first factor

    Returns:
        KaehlerCurvature: constant-HSC tensor with mu on the first factor,
            with -mu on the second one, zero on mixed slots
    """
    space = make_standard_space(n)
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise AmbientError(f'Factor dimension k must be in [1, {n}]: {k}')
    t = 0.25 * hsc_bracket(space.g.entries, space.j)
    m1 = factor_mask(n, k)
    m2 = ~m1
    inside1 = np.einsum('a,b,c,d->abcd', m1, m1, m1, m1).astype(bool)
    inside2 = np.einsum('a,b,c,d->abcd', m2, m2, m2, m2).astype(bool)
    r = mu * np.where(inside1, t, 0.) - mu * np.where(inside2, t, 0.)
    model = ProductModel(space, mu, k) if mu != 0 else None
    kind = 'constant_hsc' if k == n else 'direct_sum'
    return KaehlerCurvature(space, r, model=model, kind=kind)


def product_curvature_entries(model, sign=1.):
    """mu/8 {...} product curvature in terms of F

    Args:
        model (ProductModel): product structure
        sign (float): sign of the last term, +1 is the consistent one,
            -1 flips it and breaks the factor curvatures

    Returns:
        np.ndarray: 2n x 2n x 2n x 2n array
    """
    space, f = model.space, model.f
    g, j = space.g.entries, space.j
    fg = f.T @ g  # g(Fe_p, e_q)
    jg = j.T @ g  # g(Je_p, e_q)
    jfg = (j @ f).T @ g  # g(JFe_p, e_q)
    gj = g @ j  # g(e_p, Je_q)
    fgj = f.T @ g @ j  # g(Fe_p, Je_q)
    bracket = (_pair(fg, g) + _pair(g, fg) + _pair(jg, jfg) + _pair(jfg, jg)
               + 2. * np.einsum('ab,cd->abcd', fgj, jg)
               + sign * 2. * np.einsum('ab,cd->abcd', gj, jfg))
    return model.mu / 8. * bracket


def product_curvature(model):
    """Curvature of M^{2k}(mu) x M^{2(n-k)}(-mu) from the involution F"""
    return KaehlerCurvature(model.space, product_curvature_entries(model),
                            model=model, kind='product')


def bochner_tensor(space, r):
    """B = R - (phi + psi)(S)/(2(n+2)) + tau (phi + psi)(g)/(8(n+1)(n+2))

    Args:
        space (AmbientSpace): ambient space, n is its complex dimension
        r (QuadTensor or np.ndarray): Kaehler-symmetric curvature-like tensor

    Returns:
        QuadTensor: Bochner tensor, trace-free
    """
    m = space.n
    g, j = space.g, space.j
    s = ricci(r, g)
    tau = scalar(s, g)
    ps = phi(g, s).entries + psi(g, j, s).entries
    pg = phi(g, g).entries + psi(g, j, g).entries
    b = (entries_of(r) - ps / (2. * (m + 2))
         + tau / (8. * (m + 1) * (m + 2)) * pg)
    return QuadTensor(b, curvature_like=True)


def bochner(curvature):
    """Bochner tensor of a KaehlerCurvature"""
    return bochner_tensor(curvature.space, curvature.r)


def holomorphic_sectional(curvature, x):
    """R(x, Jx, Jx, x) / g(x, x)^2"""
    space = curvature.space
    x = parse_vector(x, space.dim)
    norm2 = space.inner(x, x)
    if not norm2 > 0:
        raise AmbientError('Holomorphic sectional curvature of a zero vector')
    jx = space.apply_j(x)
    return curvature.r(x, jx, jx, x) / norm2 ** 2


def random_kaehler_curvature(space, rng, n_terms=3):
    """Random Kaehler curvature tensor

    Sum of +-hsc_bracket(A, J) over random J-invariant symmetric A
    """
    j = space.j
    t = np.zeros((space.dim,) * 4)
    for _ in range(n_terms):
        a = random_symmetric(space.dim, rng)
        a = 0.5 * (a + j.T @ a @ j)
        t += rng.choice([-1., 1.]) * hsc_bracket(a, j)
    return KaehlerCurvature(space, t, kind='random')


def flat_curvature(n):
    return KaehlerCurvature(make_standard_space(n), np.zeros((2 * n,) * 4),
                            kind='flat')


def constant_hsc_curvature(n, mu):
    return direct_sum_curvature(n, n, mu)


def product_ambient(n, k, mu):
    model = ProductModel(make_standard_space(n), mu, k)
    logging.debug(f'Product ambient: {model}')
    return product_curvature(model)


str2obj = {
    'flat': flat_curvature,
    'constant_hsc': constant_hsc_curvature,
    'product': product_ambient,
}
