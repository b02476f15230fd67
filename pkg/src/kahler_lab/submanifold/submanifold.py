"""Totally real submanifold data at a point

Tangent frame e_1..e_n in the 2n-dimensional ambient space, normal frame
Je_1..Je_n. The second fundamental form is stored through the symmetric
cubic h[k][i][j] = g(sigma(e_i, e_j), Je_k), so A_{Je_k} = h[k].
"""
import logging

import numpy as np

from kahler_lab import tolerance
from kahler_lab.tensor.tensor import QuadTensor, SymmetricCubic, Bilinear, \
    phi, ricci, scalar, sym_eigen, restrict, defect_norm, freeze, entries_of, \
    gram_schmidt, TensorError, _scale


class SubmanifoldError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


class FrameError(SubmanifoldError):
    pass


class ConsistencyError(SubmanifoldError):
    """Two evaluation paths of the same quantity disagree

    Args:
        value (str): message
        first (float): first path value
        second (float): second path value
    """

    def __init__(self, value, first=None, second=None):
        super().__init__(value)
        self.first = first
        self.second = second


class SubmanifoldPoint:
    """Point of a totally real submanifold M^n of a Kaehler manifold

    Args:
        ambient (KaehlerCurvature): ambient curvature at the point
        frame (np.ndarray or list of list): n x 2n orthonormal tangent frame
        h (SymmetricCubic or np.ndarray): second fundamental form components
        fixture (QuadTensor or np.ndarray or None): intrinsic curvature
            replacing the Gauss equation (fixture mode)
        tol (float): frame tolerance
        orthonormalize (bool): replace a non-orthonormal frame by its
            Gram-Schmidt orthonormalization instead of rejecting it, a
            linearly dependent frame is still rejected
    """

    def __init__(self, ambient, frame, h, fixture=None, tol=tolerance.FRAME,
                 orthonormalize=False):
        space = ambient.space
        n = space.n
        if n < 2:
            raise FrameError(f'Totally real point needs n >= 2, got n={n}')
        e = np.array(frame, dtype=float)
        if e.shape != (n, 2 * n):
            raise FrameError(f'Frame must be {n}x{2 * n}, got {e.shape}')
        g = space.g.entries
        gram = e @ g @ e.T
        orthonormal = _scale(gram - np.eye(n))
        if orthonormal > tol and orthonormalize:
            try:
                e = gram_schmidt(e, g)
            except TensorError as err:
                raise FrameError(str(err)) from err
            logging.info(f'Frame orthonormalized, Gram defect was {orthonormal}')
        elif orthonormal > tol:
            raise FrameError(f'Frame is not orthonormal: {orthonormal}')
        reality = _scale(e @ g @ space.j @ e.T)
        if reality > tol:
            raise FrameError(f'Frame is not totally real: {reality}')
        if not isinstance(h, SymmetricCubic):
            h = SymmetricCubic(h)
        if h.dim != n:
            raise FrameError(f'h dimension {h.dim} != {n}')
        if fixture is not None:
            fixture = QuadTensor(entries_of(fixture), curvature_like=True)
            if fixture.dim != n:
                raise FrameError(f'Fixture dimension {fixture.dim} != {n}')
            logging.info('Fixture mode: intrinsic curvature bypasses the Gauss equation')
        self.ambient = ambient
        self.frame = freeze(e)
        self.h = h
        self.fixture = fixture

    @property
    def n(self):
        return self.ambient.n

    @property
    def space(self):
        return self.ambient.space

    @property
    def normal_frame(self):
        """Je_1..Je_n as rows"""
        return self.space.apply_j(self.frame)

    def __repr__(self):
        mode = ', fixture' if self.fixture is not None else ''
        return f'SubmanifoldPoint(n={self.n}, ambient={self.ambient.kind}{mode})'


def shape_operators(p):
    """A_{Je_k} as n x n matrices, A[k][i][j] = h[k][i][j]"""
    return np.array(p.h.entries)


def sigma(p):
    """sigma(e_i, e_j) as ambient vectors, shape (n, n, 2n)"""
    return np.einsum('kij,ka->ija', p.h.entries, p.normal_frame)


def mean_curvature(p):
    """Mean curvature vector and JH in the tangent frame

    Returns:
        tuple: H as an ambient vector, JH_tangent[l] = g(JH, e_l)
    """
    h = p.h.entries
    n = p.n
    traces = np.einsum('kii->k', h) / n
    h_normal = traces @ p.normal_frame
    jh = -traces
    jh_ambient = jh @ p.frame
    guard = _scale(p.space.apply_j(jh_ambient) + h_normal)
    if guard > tolerance.INTERNAL * max(1., _scale(h)):
        raise ConsistencyError(f'J(JH) != -H: {guard}')
    return h_normal, jh


def restricted_ambient(p):
    """Ambient curvature on the tangent frame"""
    return restrict(p.ambient.r, p.frame)


def gauss_bracket(p):
    """g([A_i, A_j]e_k, e_l)"""
    h = p.h.entries
    return (np.einsum('jkm,iml->ijkl', h, h)
            - np.einsum('ikm,jml->ijkl', h, h))


class IntrinsicGeometry:
    """Intrinsic curvature of the submanifold at the point in its frame

    Args:
        point (SubmanifoldPoint): the point
        r (QuadTensor): intrinsic curvature
        tol (Tolerances): tolerances
    """

    def __init__(self, point, r, tol=tolerance.DEFAULT):
        n = point.n
        g = np.eye(n)
        self.point = point
        self.r = r
        self.s = ricci(r, g)
        self.tau = scalar(self.s, g)
        self.c = weyl_tensor(r) if n > 3 else None
        self.spectrum = sym_eigen(self.s, tol=tol.eigen)
        self.h_normal, self.jh_tangent = mean_curvature(point)
        normality = _scale(point.frame @ point.space.g.entries @ self.h_normal)
        if normality > tol.frame * max(1., _scale(self.h_normal)):
            raise ConsistencyError(f'Mean curvature vector is not normal: {normality}')

    @property
    def n(self):
        return self.point.n

    @property
    def fixture_mode(self):
        return self.point.fixture is not None

    def __repr__(self):
        return f'IntrinsicGeometry(n={self.n}, tau={self.tau})'


def gauss_intrinsic(p, tol=tolerance.DEFAULT):
    """R(e_i,e_j,e_k,e_l) = R~(e_i,e_j,e_k,e_l) + g([A_i,A_j]e_k, e_l)

    The fixture replaces the sum in fixture mode.

    Args:
        p (SubmanifoldPoint): the point
        tol (Tolerances): tolerances

    Returns:
        IntrinsicGeometry: intrinsic curvature with contractions
    """
    if p.fixture is not None:
        r = p.fixture
    else:
        r = QuadTensor(restricted_ambient(p) + gauss_bracket(p), curvature_like=True,
                       tol=tol.internal)
    return IntrinsicGeometry(p, r, tol)


def weyl_tensor(r):
    """C = R - phi(S)/(n-2) + tau phi(g)/(2(n-1)(n-2)) in an orthonormal frame"""
    r = entries_of(r)
    n = r.shape[0]
    if n <= 3:
        raise SubmanifoldError(f'Weyl tensor needs n > 3, got n={n}')
    g = Bilinear(np.eye(n), metric=True)
    s = ricci(r, g)
    tau = scalar(s, g)
    c = (r - phi(g, s).entries / (n - 2)
         + tau / (2. * (n - 1) * (n - 2)) * phi(g, g).entries)
    return QuadTensor(c, curvature_like=True)


def weyl(geom, n=None):
    """Weyl conformal curvature tensor of the intrinsic geometry"""
    n = geom.n if n is None else n
    if n != geom.n:
        raise SubmanifoldError(f'Dimension {n} != {geom.n}')
    return weyl_tensor(geom.r)


def normal_curvature_action(geom, i, j, z):
    """R_perp(e_i, e_j)(JZ) = J(R(e_i, e_j)Z)

    Args:
        geom (IntrinsicGeometry): intrinsic geometry
        i (int): first frame index
        j (int): second frame index
        z (np.ndarray): tangent coordinates (..., n)

    Returns:
        np.ndarray: ambient vectors (..., 2n)
    """
    n = geom.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f'Frame indices out of range: {i}, {j}')
    coords = np.asarray(z, dtype=float) @ geom.r.entries[i, j]
    return coords @ geom.point.normal_frame


def _semiparallel_frame(p, geom):
    """Residual R(e_i,e_j)A_k e_l - A_k R(e_i,e_j)e_l - A_l R(e_i,e_j)e_k"""
    a = shape_operators(p)
    rop = geom.r.entries.transpose(0, 1, 3, 2)
    return (np.einsum('ijam,kml->ijkla', rop, a)
            - np.einsum('kam,ijml->ijkla', a, rop)
            - np.einsum('lam,ijmk->ijkla', a, rop))


def _semiparallel_normal(p, geom):
    """R_perp(e_i,e_j)sigma(e_k,e_l) - sigma(R(e_i,e_j)e_k,e_l) - sigma(e_k,R(e_i,e_j)e_l)"""
    n = p.n
    sig = sigma(p)
    w = np.transpose(p.h.entries, (1, 2, 0))  # sigma(e_k, e_l) = J(w[k, l])
    r = geom.r.entries
    out = np.empty((n, n, n, n, p.space.dim))
    for i in range(n):
        for j in range(n):
            out[i, j] = normal_curvature_action(geom, i, j, w)
    out -= np.einsum('ijkm,mla->ijkla', r, sig)
    out -= np.einsum('ijlm,kma->ijkla', r, sig)
    return out


def semiparallel_defect(p, geom, tol=tolerance.DUAL_PATH):
    """Semiparallel defect along two evaluation paths

    Args:
        p (SubmanifoldPoint): the point
        geom (IntrinsicGeometry): its intrinsic geometry
        tol (float): relative disagreement reported as a consistency failure

    Returns:
        tuple: frame path and normal path max norms over all basis 4-tuples
    """
    first = _semiparallel_frame(p, geom)
    first = float(np.max(np.linalg.norm(first, axis=-1))) if first.size else 0.
    second = _semiparallel_normal(p, geom)
    g = p.space.g.entries
    norms = np.sqrt(np.einsum('...a,ab,...b->...', second, g, second))
    second = float(np.max(norms)) if norms.size else 0.
    if abs(first - second) > tol * max(1., first, second):
        logging.warning(f'Semiparallel paths disagree: {first} != {second}')
        raise ConsistencyError(f'Semiparallel paths disagree: {first} != {second}',
                               first, second)
    return first, second


def mc_semiparallel_defect(geom):
    """max over i < j of |R(e_i, e_j)JH|"""
    n = geom.n
    v = np.einsum('ijma,m->ija', geom.r.entries, geom.jh_tangent)
    norms = np.linalg.norm(v, axis=-1)
    upper = norms[np.triu_indices(n, 1)]
    return float(np.max(upper)) if upper.size else 0.


def commutativity_defect(p):
    """max over k < l of |A_k A_l - A_l A_k|

    Args:
        p (SubmanifoldPoint or np.ndarray): point or stack of shape operators
    """
    a = shape_operators(p) if isinstance(p, SubmanifoldPoint) else np.asarray(p, dtype=float)
    if a.shape[0] < 2:
        return 0.
    c = np.einsum('kij,ljm->klim', a, a)
    c = c - np.transpose(c, (1, 0, 2, 3))
    return float(np.max(np.abs(c)))


def conformal_flatness_defect(geom):
    """Max-abs entry of the Weyl tensor, None for n <= 3"""
    if geom.c is None:
        return None
    return defect_norm(geom.c)
