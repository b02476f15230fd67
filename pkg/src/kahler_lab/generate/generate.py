"""Instance generators

Every generator returns a Scenario whose ``expected`` field is the
conclusion kind its own classification produces, so generated files
round-trip through classification.
"""
import logging

import numpy as np

from kahler_lab import tolerance
from kahler_lab.tensor.tensor import symmetrize_cubic
from kahler_lab.scenario.scenario import Scenario
from kahler_lab.submanifold.submanifold import gauss_intrinsic
from kahler_lab.classify.classify import str2obj as modes


class GenerateError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


def _check_n(n, lowest=2):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not lowest <= n <= 12:
        raise GenerateError(f'n must be an integer in [{lowest}, 12]: {n}')
    return int(n)


def _float(x):
    return float(x)


def cubic_entries(h, tol=0.):
    """1-based {indices, value} entries of the sorted-index orbit representatives"""
    h = np.asarray(h, dtype=float)
    n = h.shape[0]
    out = []
    for k in range(n):
        for i in range(k, n):
            for j in range(i, n):
                v = h[k, i, j]
                if abs(v) > tol:
                    out.append({'indices': [k + 1, i + 1, j + 1], 'value': _float(v)})
    return out


def curvature_entries(r, tol=0.):
    """1-based entries R_ijkl with i < j, k < l, (i, j) <= (k, l)"""
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a:]:
            v = r[i, j, k, l]
            if abs(v) > tol:
                out.append({'indices': [i + 1, j + 1, k + 1, l + 1], 'value': _float(v)})
    return out


def space_form_fixture(n, c, skip=(0,)):
    """R = c (g(x,u)g(y,z) - g(x,z)g(y,u)) on the span of e_i, i not in skip"""
    r = np.zeros((n,) * 4)
    idx = [i for i in range(n) if i not in skip]
    for i in idx:
        for j in idx:
            if i != j:
                r[i, j, j, i] = c
                r[i, j, i, j] = -c
    return r


def conformal_curvature(eigenvalues):
    """Conformally flat curvature with Ricci diag(eigenvalues)

    R = phi(S)/(n-2) - tau phi(g)/(2(n-1)(n-2)) in the canonical frame, its
    only nonzero entries are R_ijji = (l_i + l_j - tau/(n-1))/(n-2), i != j
    """
    lam = np.asarray(eigenvalues, dtype=float)
    n = lam.size
    if n < 4:
        raise GenerateError(f'Conformal fixture needs n > 3, got n={n}')
    tau = float(np.sum(lam))
    r = np.zeros((n,) * 4)
    for i in range(n):
        for j in range(n):
            if i != j:
                v = (lam[i] + lam[j] - tau / (n - 1)) / (n - 2)
                r[i, j, j, i] = v
                r[i, j, i, j] = -v
    return r


def advertise(scenario, tol=tolerance.DEFAULT):
    """Set the expected conclusion kind by classifying the scenario"""
    t = scenario.merged_tolerances(tol)
    point = scenario.build(t)
    geom = gauss_intrinsic(point, t)
    verdict = modes[scenario.resolved_mode]()(point, geom, t)
    scenario.expected = verdict.kind
    logging.info(f'Generated {scenario.name!r}: {verdict.conclusion.label}')
    return scenario


def gen_flat_instance(n):
    """Flat ambient, canonical frame, h[i][i][i] = 1: commuting, not minimal, R = 0"""
    n = _check_n(n)
    h = [{'indices': [i, i, i], 'value': 1.} for i in range(1, n + 1)]
    s = Scenario(f'flat_n{n}', {'kind': 'flat', 'n': n}, 'canonical', h,
                 mode='mc_semiparallel')
    return advertise(s)


def gen_product_type_instance(n, c, jh=1., fixture=False):
    """M_1^{n-1}(c) x I with JH = jh e_1

    For c != 0 the point is realized in the product of holomorphic sectional
    curvatures 4c and -4c with k = n - 1: the first frame vector lies in the
    one-dimensional factor, the others in the big one, where totally real
    sectional curvature is c. For c = 0 the ambient is flat. h has the single
    orbit h[1][1][1] = -n jh, so the shape operators commute and R is the
    restricted ambient curvature. fixture=True keeps the flat ambient and
    supplies R directly.

    Args:
        n (int): dimension, n > 3
        c (float): curvature of the factor
        jh (float): g(JH, e_1)
        fixture (bool): bypass the Gauss equation
    """
    n = _check_n(n, 4)
    c, jh = float(c), float(jh)
    h = [{'indices': [1, 1, 1], 'value': -n * jh}] if jh != 0. else []
    name = f'product_type_n{n}_c{c!r}'
    if fixture:
        s = Scenario(name + '_fixture', {'kind': 'flat', 'n': n}, 'canonical', h,
                     fixture=curvature_entries(space_form_fixture(n, c)),
                     mode='mc_semiparallel')
    elif c == 0.:
        s = Scenario(name, {'kind': 'flat', 'n': n}, 'canonical', h,
                     mode='mc_semiparallel')
    else:
        eye = np.eye(2 * n)
        frame = [eye[n - 1].tolist()] + [eye[i].tolist() for i in range(n - 1)]
        s = Scenario(name, {'kind': 'product', 'n': n, 'k': n - 1, 'mu': 4. * c},
                     frame, h, mode='mc_semiparallel')
    return advertise(s)


def gen_totally_geodesic_product(n, k, mu):
    """Canonical frame, k directions in the first factor, h = 0"""
    n = _check_n(n)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= n - 1:
        raise GenerateError(f'k must be an integer in [1, {n - 1}]: {k}')
    mu = float(mu)
    if mu == 0.:
        raise GenerateError('Product ambient needs mu != 0')
    s = Scenario(f'totally_geodesic_product_n{n}_k{k}_mu{mu!r}',
                 {'kind': 'product', 'n': n, 'k': int(k), 'mu': mu}, 'canonical', [],
                 mode='product_split')
    return advertise(s)


def random_cubic(n, rng, traceless=False, commuting=False):
    """Random symmetric cubic, entries uniform in [-1, 1]

    Args:
        n (int): dimension
        rng (np.random.Generator): generator
        traceless (bool): remove the trace part, sum_i h[k][i][i] = 0
        commuting (bool): only h[i][i][i] nonzero, simultaneously diagonal A_k
    """
    if commuting:
        h = np.zeros((n, n, n))
        idx = np.arange(n)
        h[idx, idx, idx] = rng.uniform(-1., 1., size=n)
    else:
        h = symmetrize_cubic(rng.uniform(-1., 1., size=(n, n, n)))
    if traceless:
        t = np.einsum('kii->k', h)
        g = np.eye(n)
        trace_part = (np.einsum('ij,k->kij', g, t) + np.einsum('ki,j->kij', g, t)
                      + np.einsum('kj,i->kij', g, t)) / 3.
        h = symmetrize_cubic(h - 3. / (n + 2) * trace_part)
    return h


def unitary_frame(n, rng):
    """Columns of a Haar unitary as a totally real frame, a + ib -> (a, b)"""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return np.hstack([q.real.T, q.imag.T])


def gen_random_instance(n, seed, ambient='flat', k=None, mu=1., traceless=False,
                        commuting=False, frame='canonical', mode=None):
    """Reproducible random instance

    Args:
        n (int): dimension
        seed (int): seed of np.random.default_rng
        ambient (str): flat or product
        k (int): first factor dimension of a product ambient, n - 1 if None
        mu (float): holomorphic sectional curvature of a product ambient
        traceless (bool): minimal instance
        commuting (bool): simultaneously diagonal shape operators
        frame (str): canonical or unitary
        mode (str): classification mode, by ambient kind if None
    """
    n = _check_n(n)
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise GenerateError(f'Seed must be an integer: {seed}')
    rng = np.random.default_rng(seed)
    h = random_cubic(n, rng, traceless, commuting)
    if frame == 'canonical':
        rows = 'canonical'
    elif frame == 'unitary':
        rows = unitary_frame(n, rng).tolist()
    else:
        raise GenerateError(f'Unknown frame {frame!r}, expected canonical or unitary')
    if ambient == 'flat':
        spec = {'kind': 'flat', 'n': n}
    elif ambient == 'product':
        k = n - 1 if k is None else k
        if not 1 <= k <= n - 1:
            raise GenerateError(f'k must be in [1, {n - 1}]: {k}')
        if float(mu) == 0.:
            raise GenerateError('Product ambient needs mu != 0')
        spec = {'kind': 'product', 'n': n, 'k': int(k), 'mu': float(mu)}
    else:
        raise GenerateError(f'Unknown ambient {ambient!r}, expected flat or product')
    s = Scenario(f'random_n{n}_seed{seed}', spec, rows, cubic_entries(h), seed=int(seed),
                 mode=mode)
    return advertise(s)


def gen_lemma_instance(n, c, a, b):
    """SO(n-1)-invariant cubic h = a x_1^3 + 3b x_1 |x'|^2 over R = c on span(e_2..e_n)

    The cubic is invariant under the rotations generated by R(X, Y), so
    the point is semiparallel. a = -(n - 1) b makes it minimal.
    """
    n = _check_n(n, 4)
    a, b = float(a), float(b)
    h = np.zeros((n, n, n))
    h[0, 0, 0] = a
    for i in range(1, n):
        h[0, i, i] = h[i, 0, i] = h[i, i, 0] = b
    s = Scenario(f'lemma_n{n}_c{float(c)!r}', {'kind': 'flat', 'n': n}, 'canonical',
                 cubic_entries(h), fixture=curvature_entries(space_form_fixture(n, float(c))),
                 mode='semiparallel')
    return advertise(s)


def gen_conformal_fixture(n, eigenvalues, jh):
    """Conformally flat fixture with Ricci diag(eigenvalues) and g(JH, e_k) = jh[k]

    The shape operators are diagonal, h[k][k][k] = -n jh[k].
    """
    n = _check_n(n, 4)
    lam = [float(x) for x in eigenvalues]
    jh = [float(x) for x in jh]
    if len(lam) != n or len(jh) != n:
        raise GenerateError(f'Expected {n} eigenvalues and {n} JH components')
    h = [{'indices': [i + 1, i + 1, i + 1], 'value': -n * x} for i, x in enumerate(jh) if x != 0.]
    s = Scenario(f'conformal_fixture_n{n}', {'kind': 'flat', 'n': n}, 'canonical', h,
                 fixture=curvature_entries(conformal_curvature(lam)), mode='mc_semiparallel')
    return advertise(s)


str2obj = {
    'flat': gen_flat_instance,
    'product_type': gen_product_type_instance,
    'totally_geodesic_product': gen_totally_geodesic_product,
    'random': gen_random_instance,
    'lemma': gen_lemma_instance,
    'conformal_fixture': gen_conformal_fixture,
}
