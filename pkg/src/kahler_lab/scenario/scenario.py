"""Scenario files: strict parsing, building and hashing

A scenario describes one totally real point: ambient model, tangent frame,
second fundamental form entries and an optional intrinsic curvature fixture.
Indices in files are 1-based.
"""
import json
import hashlib
import logging
from itertools import permutations
from pathlib import Path

import numpy as np
import yaml

from kahler_lab import tolerance
from kahler_lab.load import Loader, read_text, loads, dump
from kahler_lab.ambient.ambient import str2obj as ambients, MAX_N
from kahler_lab.submanifold.submanifold import SubmanifoldPoint

VERSION = 1
FIELDS = ('version', 'name', 'ambient', 'frame', 'h', 'fixture', 'tolerances',
          'seed', 'mode', 'expected')
REQUIRED = ('version', 'name', 'ambient', 'frame', 'h')
AMBIENT_FIELDS = {
    'flat': ('n',),
    'constant_hsc': ('n', 'mu'),
    'product': ('n', 'k', 'mu'),
}
MODES = ('mc_semiparallel', 'semiparallel', 'product_split')
TOLERANCE_FIELDS = ('gate', 'internal', 'eigen', 'cluster', 'frame')


class ScenarioError(Exception):
    """Rejected scenario

    Args:
        value (str): message
        field (str): path of the offending field, e.g. h[2].indices
        line (int): 1-based line in the source document
    """

    def __init__(self, value, field=None, line=None):
        self.value = value
        self.field = field
        self.line = line

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f'line {self.line}')
        if self.field is not None:
            where.append(f'field {self.field}')
        return f'{", ".join(where)}: {self.value}' if where else str(self.value)


def line_map(text):
    """Path tuple -> 1-based line of every node of a YAML document"""
    try:
        root = yaml.compose(text, Loader=Loader)
    except yaml.YAMLError:
        return {}
    lines = {}

    def walk(node, path):
        lines[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                lines[path + (key.value,)] = key.start_mark.line + 1
                walk(value, path + (key.value,))
        elif isinstance(node, yaml.SequenceNode):
            for i, value in enumerate(node.value):
                walk(value, path + (i,))

    if root is not None:
        walk(root, ())
    return lines


def _name(path):
    out = ''
    for x in path:
        out += f'[{x}]' if isinstance(x, int) else (f'.{x}' if out else x)
    return out


class _Parser:
    def __init__(self, lines):
        self.lines = {} if lines is None else lines

    def error(self, message, path):
        line = None
        for i in range(len(path), -1, -1):
            if path[:i] in self.lines:
                line = self.lines[path[:i]]
                break
        return ScenarioError(message, _name(path) or None, line)

    def mapping(self, x, path, allowed, required=()):
        if not isinstance(x, dict):
            raise self.error(f'Expected a mapping, got {type(x).__name__}', path)
        unknown = [k for k in x if k not in allowed]
        if unknown:
            raise self.error(f'Unknown field {unknown[0]!r}', path + (unknown[0],))
        missing = [k for k in required if k not in x]
        if missing:
            raise self.error(f'Missing field {missing[0]!r}', path)
        return x

    def integer(self, x, path):
        if isinstance(x, bool) or not isinstance(x, int):
            raise self.error(f'Expected an integer, got {x!r}', path)
        return x

    def real(self, x, path):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not np.isfinite(x):
            raise self.error(f'Expected a finite real, got {x!r}', path)
        return float(x)

    def text(self, x, path):
        if not isinstance(x, str):
            raise self.error(f'Expected text, got {x!r}', path)
        return x

    def sequence(self, x, path):
        if not isinstance(x, list):
            raise self.error(f'Expected a list, got {type(x).__name__}', path)
        return x

    def indices(self, x, path, count, n):
        x = self.sequence(x, path)
        if len(x) != count:
            raise self.error(f'Expected {count} indices, got {len(x)}', path)
        out = []
        for i, v in enumerate(x):
            v = self.integer(v, path + (i,))
            if not 1 <= v <= n:
                raise self.error(f'Index {v} out of range [1, {n}]', path + (i,))
            out.append(v)
        return tuple(out)


def _rel(a, b, tol):
    return abs(a - b) <= tol * max(1., abs(a), abs(b))


def close_cubic(entries, n, parser=None, tol=tolerance.INTERNAL):
    """Totally symmetric n x n x n array from (indices, value, path) entries"""
    parser = _Parser(None) if parser is None else parser
    h = np.zeros((n, n, n))
    seen = {}
    for indices, value, path in entries:
        for p in set(permutations(indices)):
            if p in seen and not _rel(seen[p][0], value, tol):
                raise parser.error(f'Conflicting values for indices {list(indices)}: '
                                   f'{value} != {seen[p][0]} (from {list(seen[p][1])})', path)
            seen[p] = (value, indices)
            h[tuple(x - 1 for x in p)] = value
    return h


def _riemann_orbit(i, j, k, l):
    """Index tuples tied by R_ijkl = -R_jikl = -R_ijlk = R_klij with their signs"""
    out = {}
    for a, b, c, d in ((i, j, k, l), (k, l, i, j)):
        out[(a, b, c, d)] = 1.
        out[(b, a, c, d)] = -1.
        out[(a, b, d, c)] = -1.
        out[(b, a, d, c)] = 1.
    return out


def close_curvature(entries, n, parser=None, tol=tolerance.INTERNAL):
    """Curvature-like n^4 array from (indices, value, path) entries"""
    parser = _Parser(None) if parser is None else parser
    r = np.zeros((n,) * 4)
    seen = {}
    for indices, value, path in entries:
        for p, sign in _riemann_orbit(*indices).items():
            v = sign * value
            if p in seen and not _rel(seen[p][0], v, tol):
                raise parser.error(f'Conflicting values for indices {list(indices)}: '
                                   f'{list(p)} would be {v} and {seen[p][0]}', path)
            seen[p] = (v, indices)
            r[tuple(x - 1 for x in p)] = v
    return r


class Scenario:
    """One totally real point described in a file

    Args:
        name (str): scenario name
        ambient (dict): kind, n and the kind's parameters k, mu
        frame (str or list of list): "canonical" or explicit 2n-coordinate rows
        h (list of dict): {indices: [k, i, j], value}, 1-based
        fixture (list of dict or None): {indices: [i, j, k, l], value}, 1-based
        tolerances (dict or None): overrides of the default tolerances
        seed (int or None): seed the scenario was generated with
        mode (str or None): classification mode, by ambient kind if None
        expected (str or None): advertised conclusion kind
    """

    def __init__(self, name, ambient, frame='canonical', h=None, fixture=None,
                 tolerances=None, seed=None, mode=None, expected=None):
        self.version = VERSION
        self.name = name
        self.ambient = dict(ambient)
        self.frame = frame
        self.h = [] if h is None else list(h)
        self.fixture = fixture
        self.tolerances = tolerances
        self.seed = seed
        self.mode = mode
        self.expected = expected
        self._h, self._fixture = None, None
        self._lines = {}

    @property
    def n(self):
        return self.ambient['n']

    @property
    def resolved_mode(self):
        if self.mode is not None:
            return self.mode
        return 'product_split' if self.ambient['kind'] == 'product' else 'mc_semiparallel'

    @classmethod
    def from_dict(cls, data, lines=None):
        """Strictly parsed scenario, ScenarioError on any deviation from the schema"""
        parser = _Parser(lines)
        data = parser.mapping(data, (), FIELDS, REQUIRED)
        version = parser.integer(data['version'], ('version',))
        if version != VERSION:
            raise parser.error(f'Unsupported version {version}, expected {VERSION}', ('version',))
        name = parser.text(data['name'], ('name',))
        ambient = cls._parse_ambient(parser, data['ambient'])
        n = ambient['n']
        frame = cls._parse_frame(parser, data['frame'], n)
        h = []
        for i, x in enumerate(parser.sequence(data['h'], ('h',))):
            path = ('h', i)
            parser.mapping(x, path, ('indices', 'value'), ('indices', 'value'))
            h.append({'indices': list(parser.indices(x['indices'], path + ('indices',), 3, n)),
                      'value': parser.real(x['value'], path + ('value',))})
        fixture = None
        if data.get('fixture') is not None:
            fixture = []
            for i, x in enumerate(parser.sequence(data['fixture'], ('fixture',))):
                path = ('fixture', i)
                parser.mapping(x, path, ('indices', 'value'), ('indices', 'value'))
                fixture.append({'indices': list(parser.indices(x['indices'], path + ('indices',), 4, n)),
                                'value': parser.real(x['value'], path + ('value',))})
        tolerances = None
        if data.get('tolerances') is not None:
            t = parser.mapping(data['tolerances'], ('tolerances',), TOLERANCE_FIELDS)
            tolerances = {}
            for k, v in t.items():
                v = parser.real(v, ('tolerances', k))
                if not v > 0:
                    raise parser.error(f'Tolerance must be positive: {v}', ('tolerances', k))
                tolerances[k] = v
        seed = None if data.get('seed') is None else parser.integer(data['seed'], ('seed',))
        mode = None
        if data.get('mode') is not None:
            mode = parser.text(data['mode'], ('mode',))
            if mode not in MODES:
                raise parser.error(f'Unknown mode {mode!r}, expected one of {MODES}', ('mode',))
        expected = None if data.get('expected') is None else parser.text(data['expected'], ('expected',))
        scenario = cls(name, ambient, frame, h, fixture, tolerances, seed, mode, expected)
        scenario._lines = parser.lines
        # Symmetry closures are part of parsing, conflicts are input errors
        scenario._h = close_cubic(
            [(tuple(x['indices']), x['value'], ('h', i)) for i, x in enumerate(h)], n, parser)
        if fixture is not None:
            scenario._fixture = close_curvature(
                [(tuple(x['indices']), x['value'], ('fixture', i)) for i, x in enumerate(fixture)],
                n, parser)
        return scenario

    @staticmethod
    def _parse_ambient(parser, x):
        path = ('ambient',)
        x = parser.mapping(x, path, ('kind', 'n', 'k', 'mu'), ('kind', 'n'))
        kind = parser.text(x['kind'], path + ('kind',))
        if kind not in AMBIENT_FIELDS:
            raise parser.error(f'Unknown ambient kind {kind!r}, '
                               f'expected one of {list(AMBIENT_FIELDS)}', path + ('kind',))
        allowed = AMBIENT_FIELDS[kind]
        for k in ('k', 'mu'):
            if k not in allowed and k in x:
                if kind == 'flat' and k == 'mu' and parser.real(x[k], path + (k,)) == 0.:
                    continue
                raise parser.error(f'Field {k!r} is not used by ambient kind {kind!r}', path + (k,))
            if k in allowed and k not in x:
                raise parser.error(f'Missing field {k!r} for ambient kind {kind!r}', path)
        n = parser.integer(x['n'], path + ('n',))
        if not 2 <= n <= MAX_N:
            raise parser.error(f'n must be in [2, {MAX_N}]: {n}', path + ('n',))
        out = {'kind': kind, 'n': n}
        if 'k' in allowed:
            k = parser.integer(x['k'], path + ('k',))
            if not 1 <= k <= n - 1:
                raise parser.error(f'k must be in [1, {n - 1}]: {k}', path + ('k',))
            out['k'] = k
        if 'mu' in allowed:
            mu = parser.real(x['mu'], path + ('mu',))
            if kind == 'product' and mu == 0.:
                raise parser.error('Product ambient needs mu != 0', path + ('mu',))
            out['mu'] = mu
        return out

    @staticmethod
    def _parse_frame(parser, x, n):
        path = ('frame',)
        if isinstance(x, str):
            if x != 'canonical':
                raise parser.error(f'Unknown frame {x!r}, expected "canonical" or rows', path)
            return x
        rows = parser.sequence(x, path)
        if len(rows) != n:
            raise parser.error(f'Expected {n} frame rows, got {len(rows)}', path)
        out = []
        for i, row in enumerate(rows):
            row = parser.sequence(row, path + (i,))
            if len(row) != 2 * n:
                raise parser.error(f'Expected {2 * n} coordinates, got {len(row)}', path + (i,))
            out.append([parser.real(v, path + (i, j)) for j, v in enumerate(row)])
        return out

    def to_dict(self):
        out = {'version': self.version, 'name': self.name, 'ambient': dict(self.ambient),
               'frame': self.frame, 'h': [dict(x) for x in self.h]}
        if self.fixture is not None:
            out['fixture'] = [dict(x) for x in self.fixture]
        for k in ('tolerances', 'seed', 'mode', 'expected'):
            v = getattr(self, k)
            if v is not None:
                out[k] = dict(v) if isinstance(v, dict) else v
        return out

    def hash(self):
        """SHA-256 of the canonical JSON document"""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(text.encode()).hexdigest()

    def cubic(self):
        if self._h is None:
            self._h = close_cubic(
                [(tuple(x['indices']), x['value'], ('h', i)) for i, x in enumerate(self.h)],
                self.n)
        return self._h

    def curvature_fixture(self):
        if self.fixture is None:
            return None
        if self._fixture is None:
            self._fixture = close_curvature(
                [(tuple(x['indices']), x['value'], ('fixture', i))
                 for i, x in enumerate(self.fixture)], self.n)
        return self._fixture

    def frame_rows(self):
        n = self.n
        if isinstance(self.frame, str):
            return np.eye(2 * n)[:n]
        return np.array(self.frame, dtype=float)

    def merged_tolerances(self, base=tolerance.DEFAULT):
        """Scenario overrides on top of base"""
        return base.update(**(self.tolerances or {}))

    def build(self, tol=tolerance.DEFAULT):
        """SubmanifoldPoint of the scenario

        Construction errors of the ambient, the frame and the tensors
        propagate with their own types.
        """
        kwargs = {k: v for k, v in self.ambient.items() if k != 'kind'}
        ambient = ambients[self.ambient['kind']](**kwargs)
        point = SubmanifoldPoint(ambient, self.frame_rows(), self.cubic(),
                                 fixture=self.curvature_fixture(), tol=tol.frame,
                                 orthonormalize=not isinstance(self.frame, str))
        logging.info(f'Scenario {self.name!r}: {point}')
        return point

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'Scenario({self.name!r}, {self.ambient})'


def parse(text, suffix='.yaml'):
    """Scenario from a document text"""
    try:
        data = loads(text, suffix)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        line = getattr(getattr(e, 'problem_mark', None), 'line', None)
        line = line + 1 if line is not None else getattr(e, 'lineno', None)
        raise ScenarioError(f'Malformed document: {e}', None, line)
    lines = line_map(text) if suffix != '.json' else {}
    return Scenario.from_dict(data, lines)


def load(path):
    """Scenario from a .json/.yml/.yaml file or standard input ("-")"""
    p = Path(path)
    suffix = '.yaml' if str(path) == '-' else p.suffix
    try:
        text = read_text(path)
    except OSError as e:
        raise ScenarioError(f'Cannot read scenario: {e}')
    if suffix not in ('.json', '.yml', '.yaml'):
        raise ScenarioError(f'Wrong file format {suffix!r}')
    return parse(text, suffix)


def save(scenario, path):
    dump(scenario.to_dict(), path)
