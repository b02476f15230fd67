import json
from pathlib import Path

import pytest

from kahler_lab import __version__, tolerance
from kahler_lab.scenario.scenario import load
from kahler_lab.submanifold.submanifold import gauss_intrinsic
from kahler_lab.classify.classify import str2obj
from kahler_lab.report.report import ReportDocument, ReportError, KEYS, TOOL

SCENARIOS = Path(__file__).parent.parent / 'scenario'


def report_of(name):
    s = load(SCENARIOS / name)
    p = s.build()
    verdict = str2obj[s.resolved_mode]()(p, gauss_intrinsic(p))
    return ReportDocument({'name': s.name, 'hash': s.hash()}, s.resolved_mode,
                          tolerance.DEFAULT.to_dict(), verdict.to_dict(), s.expected, 0.25)


@pytest.mark.parametrize('name', ['flat.yml', 'product_type.yml', 'product_split.yml',
                                  'random.yml', 'conformal_fixture.yml',
                                  'lemma.yml'])
def test_goldens_match_expected(name):
    assert report_of(name).matches_expected


def test_machine_round_trip():
    r = report_of('product_type.yml')
    text = r.render('machine')
    data = json.loads(text)
    assert tuple(data) == KEYS
    assert data['tool'] == TOOL
    assert data['version'] == __version__
    assert data['verdict']['label'] == 'PRODUCT_TYPE(1.0)'
    assert ReportDocument.from_json(text) == r


def test_text_listing():
    text = report_of('product_split.yml').render('text')
    lines = text.splitlines()
    assert lines[0].startswith('tool')
    assert 'PRODUCT_SPLIT(0.25, -0.25, 2) (pointwise-consistent)' in text
    assert 'PRODUCT_SPLIT (match)' in text
    assert any(x.startswith('  semiparallel') for x in lines)
    assert lines[-1].startswith('duration')


def test_no_expected():
    r = report_of('flat.yml')
    r.expected = None
    assert r.matches_expected is None
    assert 'expected' not in r.to_text()


def test_mismatch():
    r = report_of('flat.yml')
    r.expected = 'PRODUCT_TYPE'
    assert r.matches_expected is False
    assert 'MISMATCH' in r.to_text()


def test_errors():
    r = report_of('flat.yml')
    with pytest.raises(ReportError):
        r.render('html')
    data = r.to_dict()
    data['extra'] = 1
    with pytest.raises(ReportError):
        ReportDocument.from_dict(data)
