"""Dense multilinear algebra at a single tangent space

Rank-2, rank-3 and rank-4 arrays over a d-dimensional real vector space
with a (not necessarily Euclidean) metric g. Slot convention of curvature
tensors: R(x, y, z, u) = g(R(x, y)z, u), sectional curvature
K(x, y) = R(x, y, y, x) for orthonormal x, y.
"""
import logging
from itertools import permutations

import numpy as np

from kahler_lab import tolerance

MAX_DIM = 24


class TensorError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


class DimensionError(TensorError):
    pass


class SymmetryError(TensorError):
    pass


class ConvergenceError(TensorError):
    """Jacobi iteration cap reached

    Args:
        value (str): message
        residual (float): max-abs off-diagonal entry at the last sweep
    """

    def __init__(self, value, residual=None):
        super().__init__(value)
        self.residual = residual


def freeze(a):
    """Mark array as read-only and return it"""
    a.setflags(write=False)
    return a


def parse_array(x, ndim=None, name='array'):
    """Copy of x as a float array with optional rank check"""
    a = np.array(x, dtype=float)
    if ndim is not None and a.ndim != ndim:
        raise DimensionError(f'{name} must have rank {ndim}, got shape {a.shape}')
    if a.ndim > 0 and len(set(a.shape)) != 1:
        raise DimensionError(f'{name} must be square, got shape {a.shape}')
    if a.ndim > 0 and a.shape[0] > MAX_DIM:
        raise DimensionError(f'{name} dimension {a.shape[0]} exceeds {MAX_DIM}')
    return a


def parse_vector(v, dim):
    """Vector of the declared space dimension"""
    a = np.array(v, dtype=float)
    if a.shape != (dim,):
        raise DimensionError(f'Vector must have length {dim}, got shape {a.shape}')
    return a


def entries_of(t):
    """Raw array behind a Bilinear, QuadTensor, SymmetricCubic or array-like"""
    if isinstance(t, (Bilinear, QuadTensor, SymmetricCubic)):
        return t.entries
    return np.asarray(t, dtype=float)


def _scale(a):
    return float(np.max(np.abs(a))) if a.size > 0 else 0.


class Bilinear:
    """Bilinear form (type (0,2) tensor) in a basis

    Args:
        entries (list of list or np.ndarray): d x d array
        symmetric (bool): symmetrize at construction, reject if the input
            asymmetry exceeds tol relative to max(1, max-abs entry)
        metric (bool): symmetric and positive definite
        tol (float): tolerance of the checks
    """

    def __init__(self, entries, symmetric=False, metric=False,
                 tol=tolerance.INTERNAL):
        e = parse_array(entries, 2, 'Bilinear')
        symmetric = symmetric or metric
        if symmetric:
            asymmetry = _scale(e - e.T)
            if asymmetry > tol * max(1., _scale(e)):
                raise SymmetryError(f'Bilinear form is not symmetric: {asymmetry}')
            e = 0.5 * (e + e.T)
        if metric:
            lowest = np.linalg.eigvalsh(e)[0] if e.size > 0 else 0.
            if not lowest > tol:
                raise SymmetryError(f'Metric is not positive definite: {lowest}')
        self.entries = freeze(e)
        self.symmetric = symmetric
        self.metric = metric

    @property
    def dim(self):
        return self.entries.shape[0]

    def __call__(self, x, y):
        return float(np.asarray(x) @ self.entries @ np.asarray(y))

    def inverse(self):
        return np.linalg.inv(self.entries)

    def __repr__(self):
        return f'Bilinear(dim={self.dim}, symmetric={self.symmetric}, metric={self.metric})'


def curvature_defects(t):
    """Absolute defects of the algebraic curvature identities

    Returns:
        dict: antisymmetry_12, antisymmetry_34, pair_symmetry, bianchi
    """
    r = entries_of(t)
    return {
        'antisymmetry_12': _scale(r + np.einsum('bacd->abcd', r)),
        'antisymmetry_34': _scale(r + np.einsum('abdc->abcd', r)),
        'pair_symmetry': _scale(r - np.einsum('cdab->abcd', r)),
        'bianchi': _scale(r + np.einsum('bcad->abcd', r)
                          + np.einsum('cabd->abcd', r)),
    }


def is_curvature_like(t, tol=tolerance.INTERNAL):
    """All curvature identities hold within tol relative to max(1, max-abs entry)"""
    r = entries_of(t)
    bound = tol * max(1., _scale(r))
    return all(v <= bound for v in curvature_defects(r).values())


class QuadTensor:
    """Type (0,4) tensor in a basis

    Args:
        entries (np.ndarray): d x d x d x d array
        curvature_like (bool): validate the curvature identities at construction
        tol (float): relative tolerance of the validator
    """

    def __init__(self, entries, curvature_like=False, tol=tolerance.INTERNAL):
        e = parse_array(entries, 4, 'QuadTensor')
        if curvature_like and not is_curvature_like(e, tol):
            defects = curvature_defects(e)
            raise SymmetryError(f'Tensor is not curvature-like: {defects}')
        self.entries = freeze(e)
        self.curvature_like = curvature_like

    @property
    def dim(self):
        return self.entries.shape[0]

    def __call__(self, x, y, z, u):
        return float(np.einsum('abcd,a,b,c,d->', self.entries, x, y, z, u))

    def __repr__(self):
        return f'QuadTensor(dim={self.dim}, curvature_like={self.curvature_like})'


_PERMUTATIONS = list(permutations(range(3)))


def symmetrize_cubic(entries):
    """Fully symmetric part with exact storage equality across permutations"""
    e = np.asarray(entries, dtype=float)
    mean = sum(np.transpose(e, p) for p in _PERMUTATIONS) / 6.
    idx = np.sort(np.indices(e.shape).reshape(3, -1), axis=0)
    return mean[idx[0], idx[1], idx[2]].reshape(e.shape)


class SymmetricCubic:
    """Fully symmetric n x n x n array

    h[k][i][j] = g(sigma(e_i, e_j), J e_k), symmetrized at construction

    Args:
        entries (np.ndarray or list): n x n x n array
    """

    def __init__(self, entries):
        e = parse_array(entries, 3, 'SymmetricCubic')
        self.entries = freeze(symmetrize_cubic(e))

    @property
    def dim(self):
        return self.entries.shape[0]

    def scaled(self, t):
        return SymmetricCubic(t * self.entries)

    def __repr__(self):
        return f'SymmetricCubic(dim={self.dim})'


class Spectrum:
    """Eigen decomposition of a symmetric form

    Args:
        eigenvalues (np.ndarray): ascending
        eigenvectors (np.ndarray): orthonormal columns
        residual (float): max-abs off-diagonal entry after diagonalization
        sweeps (int): number of Jacobi sweeps performed
    """

    def __init__(self, eigenvalues, eigenvectors, residual, sweeps=0):
        self.eigenvalues = freeze(np.array(eigenvalues, dtype=float))
        self.eigenvectors = freeze(np.array(eigenvectors, dtype=float))
        self.residual = float(residual)
        self.sweeps = sweeps

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        e = self.eigenvectors
        return e @ np.diag(self.eigenvalues) @ e.T


def _check_same_dim(*arrays):
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise DimensionError(f'Dimension mismatch: {sorted(dims)}')


def phi(g, q):
    """phi(Q)(x,y,z,u) = g(x,u)Q(y,z) - g(x,z)Q(y,u) + g(y,z)Q(x,u) - g(y,u)Q(x,z)

    Args:
        g (Bilinear or np.ndarray): metric
        q (Bilinear or np.ndarray): symmetric form

    Returns:
        QuadTensor: curvature-like when q is symmetric
    """
    g, q = entries_of(g), entries_of(q)
    _check_same_dim(g, q)
    t = (np.einsum('ad,bc->abcd', g, q) - np.einsum('ac,bd->abcd', g, q)
         + np.einsum('bc,ad->abcd', g, q) - np.einsum('bd,ac->abcd', g, q))
    symmetric = _scale(q - q.T) == 0.
    return QuadTensor(t, curvature_like=symmetric)


def psi(g, j, q, tol=tolerance.INTERNAL):
    """psi(Q)(x,y,z,u) = g(x,Ju)Q(y,Jz) - g(x,Jz)Q(y,Ju) - 2g(x,Jy)Q(z,Ju)
                       + g(y,Jz)Q(x,Ju) - g(y,Ju)Q(x,Jz) - 2g(z,Ju)Q(x,Jy)

    Args:
        g (Bilinear or np.ndarray): metric
        j (np.ndarray): complex structure, column a is J e_a
        q (Bilinear or np.ndarray): form
        tol (float): J-invariance tolerance, relative to max(1, max-abs of q)

    Returns:
        QuadTensor: flagged curvature-like only for symmetric J-invariant q
    """
    g, q = entries_of(g), entries_of(q)
    j = np.asarray(j, dtype=float)
    _check_same_dim(g, q, j)
    gj, qj = g @ j, q @ j
    t = (np.einsum('ad,bc->abcd', gj, qj) - np.einsum('ac,bd->abcd', gj, qj)
         - 2. * np.einsum('ab,cd->abcd', gj, qj)
         + np.einsum('bc,ad->abcd', gj, qj) - np.einsum('bd,ac->abcd', gj, qj)
         - 2. * np.einsum('cd,ab->abcd', gj, qj))
    scale = _scale(q)
    symmetric = _scale(q - q.T) == 0.
    invariant = _scale(j.T @ q @ j - q) <= tol * max(1., scale)
    return QuadTensor(t, curvature_like=symmetric and invariant)


def ricci(r, g, tol=tolerance.INTERNAL):
    """S(y,z) = sum_a R(e_a, y, z, e_a) over a g-orthonormal basis {e_a}

    Args:
        r (QuadTensor or np.ndarray): curvature-like tensor
        g (Bilinear or np.ndarray): metric

    Returns:
        Bilinear: symmetric Ricci form
    """
    r, g = entries_of(r), entries_of(g)
    _check_same_dim(r, g)
    if not is_curvature_like(r, tol):
        raise SymmetryError(f'Ricci of a non curvature-like tensor: '
                            f'{curvature_defects(r)}')
    s = np.einsum('ad,abcd->bc', np.linalg.inv(g), r)
    return Bilinear(0.5 * (s + s.T), symmetric=True)


def scalar(s, g):
    """tau = sum_a S(e_a, e_a) over a g-orthonormal basis"""
    s, g = entries_of(s), entries_of(g)
    _check_same_dim(s, g)
    return float(np.einsum('bc,bc->', np.linalg.inv(g), s))


def defect_norm(t):
    """Max-abs entry, the measure behind every "approximately zero" test"""
    if t is None:
        return 0.
    return _scale(entries_of(t))


def sym_eigen(s, tol=tolerance.EIGEN, max_sweeps=tolerance.MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a symmetric form

    Convergence when the max-abs off-diagonal entry is below
    tol * max(1, max-abs entry of S).

    Args:
        s (Bilinear or np.ndarray): symmetric form
        tol (float): convergence tolerance
        max_sweeps (int): iteration cap

    Returns:
        Spectrum: ascending eigenvalues with matching orthonormal eigenvectors
    """
    a = np.array(entries_of(s), dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f'sym_eigen needs a square matrix, got {a.shape}')
    if _scale(a - a.T) > tolerance.INTERNAL * _scale(a):
        raise SymmetryError('sym_eigen needs a symmetric matrix')
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1., _scale(a))
    off = np.abs(a - np.diag(np.diag(a)))
    residual = _scale(off)
    sweeps = 0
    while residual > threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(f'Jacobi did not converge in {max_sweeps} sweeps, '
                                   f'residual {residual}', residual)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.:
                    continue
                theta = (a[q, q] - a[p, p]) / (2. * a[p, q])
                t = (1. if theta >= 0. else -1.) / (abs(theta) + np.sqrt(1. + theta * theta))
                c = 1. / np.sqrt(1. + t * t)
                sn = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - sn * aq, sn * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - sn * aq, sn * ap + c * aq
                a[p, q] = a[q, p] = 0.
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - sn * vq, sn * vp + c * vq
        sweeps += 1
        residual = _scale(np.abs(a - np.diag(np.diag(a))))
    logging.debug(f'Jacobi: n={n}, sweeps={sweeps}, residual={residual}')
    values = np.diag(a)
    order = np.argsort(values, kind='stable')
    return Spectrum(values[order], v[:, order], residual, sweeps)


def gram_schmidt(vectors, g=None, tol=tolerance.DEPENDENCE):
    """g-orthonormalize rows by modified Gram-Schmidt with re-orthogonalization

    Args:
        vectors (np.ndarray or list of list): rows to orthonormalize
        g (Bilinear or np.ndarray or None): metric, identity if None
        tol (float): reject a row whose residual norm falls below tol
            times its original norm

    Returns:
        np.ndarray: orthonormal rows
    """
    vs = np.array(vectors, dtype=float)
    if vs.ndim != 2:
        raise DimensionError(f'Expected rows of vectors, got shape {vs.shape}')
    g = np.eye(vs.shape[1]) if g is None else entries_of(g)
    out = []
    for i, v in enumerate(vs):
        norm0 = np.sqrt(v @ g @ v)
        if not norm0 > 0:
            raise TensorError(f'Zero vector in frame at row {i}')
        w = v.copy()
        for _ in range(2):  # reorthogonalize
            for u in out:
                w = w - (u @ g @ w) * u
        norm = np.sqrt(w @ g @ w)
        if norm <= tol * norm0:
            raise TensorError(f'Linearly dependent frame at row {i}: '
                              f'relative residual {norm / norm0}')
        out.append(w / norm)
    return np.array(out)


def constant_curvature(g, c):
    """Constant sectional curvature c: R = c/2 phi(g)"""
    return QuadTensor(0.5 * c * phi(g, g).entries, curvature_like=True)


def restrict(t, frame):
    """Components of a (0,4) tensor on the rows of frame"""
    e = np.asarray(frame, dtype=float)
    r = entries_of(t)
    return np.einsum('abcd,ia,jb,kc,ld->ijkl', r, e, e, e, e, optimize=True)


def random_symmetric(d, rng):
    """Symmetric d x d matrix with entries uniform in [-1, 1]"""
    a = rng.uniform(-1., 1., size=(d, d))
    return 0.5 * (a + a.T)


def random_curvature(d, rng, n_terms=3):
    """Random curvature-like tensor, sum of +-(A(x,u)A(y,z) - A(x,z)A(y,u))"""
    t = np.zeros((d, d, d, d))
    for _ in range(n_terms):
        a = random_symmetric(d, rng)
        sign = rng.choice([-1., 1.])
        t += sign * (np.einsum('ad,bc->abcd', a, a) - np.einsum('ac,bd->abcd', a, a))
    return QuadTensor(t, curvature_like=True)
