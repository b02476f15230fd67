"""Classification reports

Machine form is JSON with a fixed key order, floats in the shortest
round-trip decimal. Text form is a fixed-column listing for people.
"""
import json

import numpy as np

from kahler_lab import __version__

TOOL = 'kahler-lab'
FORMATS = ('text', 'machine')
KEYS = ('tool', 'version', 'scenario', 'mode', 'tolerances', 'verdict',
        'expected', 'matches_expected', 'duration')


class ReportError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


def _plain(x):
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


class ReportDocument:
    """Report of one classified scenario

    Args:
        scenario (dict): name and hash of the scenario
        mode (str): classification mode
        tolerances (dict): tolerances in effect
        verdict (dict): Verdict.to_dict()
        expected (str or None): advertised conclusion kind of the scenario
        duration (float): wall-clock seconds
        tool (str): tool name
        version (str): tool version
    """

    def __init__(self, scenario, mode, tolerances, verdict, expected=None,
                 duration=0., tool=TOOL, version=__version__):
        self.tool = tool
        self.version = version
        self.scenario = _plain(scenario)
        self.mode = mode
        self.tolerances = _plain(tolerances)
        self.verdict = _plain(verdict)
        self.expected = expected
        self.duration = float(duration)

    @property
    def matches_expected(self):
        if self.expected is None:
            return None
        return self.expected == self.verdict['conclusion']['kind']

    def to_dict(self):
        return {
            'tool': self.tool,
            'version': self.version,
            'scenario': self.scenario,
            'mode': self.mode,
            'tolerances': self.tolerances,
            'verdict': self.verdict,
            'expected': self.expected,
            'matches_expected': self.matches_expected,
            'duration': self.duration,
        }

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(KEYS)
        if unknown:
            raise ReportError(f'Unknown report fields: {sorted(unknown)}')
        return cls(data['scenario'], data['mode'], data['tolerances'], data['verdict'],
                   data.get('expected'), data.get('duration', 0.),
                   data.get('tool', TOOL), data.get('version', __version__))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + '\n'

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        v = self.verdict
        lines = [
            f'{"tool":<24}{self.tool} {self.version}',
            f'{"scenario":<24}{self.scenario["name"]}',
            f'{"hash":<24}{self.scenario["hash"]}',
            f'{"mode":<24}{self.mode}',
            f'{"theorem":<24}{v["theorem"]}',
            f'{"verdict":<24}{v["label"]} ({v["scope"]})',
        ]
        if self.expected is not None:
            lines.append(f'{"expected":<24}{self.expected} '
                         f'({"match" if self.matches_expected else "MISMATCH"})')
        lines.append('flags')
        for name, flag in v['flags'].items():
            defect = '-' if flag['defect'] is None else f'{flag["defect"]:.6e}'
            lines.append(f'  {name:<22}{str(flag["value"]):<8}{defect}')
        lines.append('residuals')
        for name, value in v['residuals'].items():
            lines.append(f'  {name:<22}{_short(value)}')
        for note in v['notes']:
            lines.append(f'{"note":<24}{note}')
        lines.append(f'{"duration":<24}{self.duration:.3f}s')
        return '\n'.join(lines) + '\n'

    def render(self, fmt='text'):
        if fmt == 'machine':
            return self.to_json()
        elif fmt == 'text':
            return self.to_text()
        raise ReportError(f'Unknown format {fmt!r}, expected one of {FORMATS}')

    def __eq__(self, other):
        return isinstance(other, ReportDocument) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'ReportDocument({self.scenario.get("name")!r}, {self.verdict.get("label")})'


def _short(value):
    if isinstance(value, float):
        return f'{value:.6e}'
    if isinstance(value, list):
        flat = np.asarray(value, dtype=float).ravel() if _numeric(value) else None
        if flat is not None:
            if flat.size <= 6:
                return '[' + ', '.join(f'{x:.6g}' for x in flat) + ']'
            return f'array of {flat.size}, max |.| {np.max(np.abs(flat)):.6e}'
    if isinstance(value, dict):
        return ', '.join(f'{k}={_short(v) if not isinstance(v, (list, dict)) else "..."}'
                         for k, v in value.items())
    return str(value)


def _numeric(value):
    try:
        np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        return False
    return True
