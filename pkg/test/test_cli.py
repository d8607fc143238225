'''
Tests for the ``intrinsic-curves`` command line.
'''
import json
import math

from click.testing import CliRunner
import numpy as np
import pytest

from icurves import cli, recipe


EXAMPLE = {
    'kind': 'example_helix',
    'params': {'phi0': 1},
    'grid': {'a': 0, 'b': 1, 'n': 1025},
}


def _write_recipe(tmp_path, json_=EXAMPLE, name='recipe.json'):
    path = tmp_path / name
    path.write_text(json.dumps(json_))
    return str(path)


def _run(*args):
    return CliRunner().invoke(cli.cli, [str(a) for a in args])


def test_generate_and_analyze(tmp_path):
    out = tmp_path / 'curve.csv'
    result = _run('generate', '--recipe', _write_recipe(tmp_path), '--out', out)
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == '# sigma: closed'
    assert len(lines) == 2 + 1025
    assert lines[2 + 512].split(',')[13].startswith('1.570796')

    report_path = tmp_path / 'report.json'
    result = _run('analyze', '--in', out, '--json', report_path)
    assert result.exit_code == 0
    report = json.loads(report_path.read_text())
    assert report['passed']
    assert report['grid'] == {'a': 0.0, 'b': 1.0, 'n': 1025}
    kappa = report['table']['kappa']
    assert kappa[512] == pytest.approx(1.5707963, rel=1e-3)


def test_generate_is_reproducible(tmp_path):
    path = _write_recipe(tmp_path)
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    assert _run('generate', '--recipe', path, '--out', first).exit_code == 0
    assert _run('generate', '--recipe', path, '--out', second).exit_code == 0
    assert first.read_bytes() == second.read_bytes()


def test_grid_size_flag(tmp_path, monkeypatch):
    monkeypatch.setenv('FRENET_DEFAULT_N', '129')
    json_ = dict(EXAMPLE, grid={'a': 0, 'b': 1})
    path = _write_recipe(tmp_path, json_)
    out = tmp_path / 'curve.csv'
    assert _run('generate', '--recipe', path, '--out', out).exit_code == 0
    assert len(out.read_text().splitlines()) == 2 + 129
    assert _run('generate', '--recipe', path, '--out', out, '--n', 65).exit_code == 0
    assert len(out.read_text().splitlines()) == 2 + 65
    assert _run('generate', '--recipe', path, '--out', out, '--n', 64).exit_code == 2


def test_generate_extra_outputs(tmp_path):
    json_ = dict(EXAMPLE, outputs=['csv', 'obj', 'gnuplot', 'report'])
    out = tmp_path / 'helix.csv'
    result = _run('generate', '--recipe', _write_recipe(tmp_path, json_), '--out', out)
    assert result.exit_code == 0
    obj = (tmp_path / 'helix.obj').read_text().splitlines()
    assert len(obj) == 1025 + 2
    assert str(out) in (tmp_path / 'helix.gp').read_text()
    report = json.loads((tmp_path / 'helix.report.json').read_text())
    assert {'checks', 'summary', 'table', 'passed', 'grid'} <= set(report)


def test_verify(tmp_path):
    path = _write_recipe(tmp_path)
    report_path = tmp_path / 'verify.json'
    result = _run('verify', '--recipe', path, '--json', report_path, '--n', 2049)
    assert result.exit_code == 0
    report = json.loads(report_path.read_text())
    assert report['passed']
    names = {c['name'] for c in report['checks']}
    assert {'unit_speed', 'closed_vs_numeric_kappa', 'closed_vs_numeric_tau',
        'lancret', 'closed_coordinates', 'oracle_closure'} <= names


def test_verify_failed_checks(tmp_path, monkeypatch):
    monkeypatch.setattr(recipe, 'UNIT_SPEED_TOL', -1.0)
    path = _write_recipe(tmp_path)
    report_path = tmp_path / 'verify.json'
    result = _run('verify', '--recipe', path, '--json', report_path)
    assert result.exit_code == cli.EXIT_FAILED_CHECKS
    report = json.loads(report_path.read_text())
    assert not report['passed']


def test_domain_violation(tmp_path):
    json_ = {
        'kind': 'intrinsic',
        'params': {'polar': '1', 'fraction': 0},
        'grid': {'a': 0, 'b': 1, 'n': 65},
    }
    out = tmp_path / 'curve.csv'
    result = _run('generate', '--recipe', _write_recipe(tmp_path, json_), '--out', out)
    assert result.exit_code == cli.EXIT_RECIPE
    assert not out.exists()


@pytest.mark.parametrize('text, code', [
    ('{"kind": ', cli.EXIT_RECIPE),
    (json.dumps(dict(EXAMPLE, kind='circle')), cli.EXIT_RECIPE),
    (json.dumps(dict(EXAMPLE, params={'phi0': 0})), cli.EXIT_RECIPE),
    (json.dumps({'kind': 'intrinsic', 'params': {'polar': 'sin(', 'fraction': 0},
        'grid': {'a': 0, 'b': 1}}), cli.EXIT_EXPRESSION),
    (json.dumps({'kind': 'intrinsic', 'params': {'polar': 'acos(-s/2)',
        'fraction': 'phi'}, 'grid': {'a': 0, 'b': 1}}), cli.EXIT_EXPRESSION),
])
def test_recipe_exit_codes(tmp_path, text, code):
    path = tmp_path / 'recipe.json'
    path.write_text(text)
    result = _run('generate', '--recipe', path, '--out', tmp_path / 'out.csv')
    assert result.exit_code == code


def test_bad_curve_file(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('s,x,y,z\n0,0,0,0\n1,1,0,0\n')
    result = _run('analyze', '--in', path)
    assert result.exit_code == cli.EXIT_CURVE_FILE
    result = _run('export', '--in', path, '--format', 'obj', '--out',
        tmp_path / 'bad.obj')
    assert result.exit_code == cli.EXIT_CURVE_FILE


def test_export(tmp_path):
    out = tmp_path / 'curve.csv'
    json_ = dict(EXAMPLE, grid={'a': 0, 'b': 1, 'n': 65})
    assert _run('generate', '--recipe', _write_recipe(tmp_path, json_),
        '--out', out).exit_code == 0

    obj = tmp_path / 'curve.obj'
    assert _run('export', '--in', out, '--format', 'obj', '--out', obj).exit_code == 0
    lines = obj.read_text().splitlines()
    assert sum(line.startswith('v ') for line in lines) == 65
    assert lines[-1].startswith('l 1 2 3')

    script = tmp_path / 'curve.gp'
    assert _run('export', '--in', out, '--format', 'gnuplot', '--out',
        script).exit_code == 0
    text = script.read_text()
    assert f"data = '{out}'" in text

    result = _run('export', '--in', out, '--format', 'pdf', '--out',
        tmp_path / 'curve.pdf')
    assert result.exit_code == cli.EXIT_FORMAT
    assert not (tmp_path / 'curve.pdf').exists()


def test_analyze_circular_helix(tmp_path):
    # radius 1 and pitch 2π, so κ = τ = 1/2
    s = np.linspace(0.0, 10.0, 1025)
    u = s / math.sqrt(2)
    rows = ['s,x,y,z'] + [f'{a:.17g},{x:.17g},{y:.17g},{z:.17g}'
        for a, x, y, z in zip(s, np.cos(u), np.sin(u), u)]
    path = tmp_path / 'helix.csv'
    path.write_text('\n'.join(rows) + '\n')
    report_path = tmp_path / 'report.json'
    assert _run('analyze', '--in', path, '--json', report_path).exit_code == 0
    summary = json.loads(report_path.read_text())['summary']
    assert summary['kappaMedian'] == pytest.approx(0.5, abs=1e-4)
    assert summary['tauMedian'] == pytest.approx(0.5, abs=1e-4)


def test_analyze_slant_helix(tmp_path):
    json_ = {
        'kind': 'slant_helix',
        'params': {'m': 0.5, 'fraction': 's'},
        'grid': {'a': -1, 'b': 1, 'n': 1025},
    }
    out = tmp_path / 'slant.csv'
    assert _run('generate', '--recipe', _write_recipe(tmp_path, json_),
        '--out', out).exit_code == 0
    report_path = tmp_path / 'report.json'
    assert _run('analyze', '--in', out, '--json', report_path).exit_code == 0
    report = json.loads(report_path.read_text())
    assert report['passed']
    assert report['summary']['sigmaMedian'] == pytest.approx(0.5, abs=1e-3)


def test_verify_domain_violation(tmp_path):
    json_ = {
        'kind': 'intrinsic',
        'params': {'polar': 's', 'fraction': 's', 'innerOffset': 0.9},
        'grid': {'a': 0.6, 'b': 1.6, 'n': 65},
    }
    result = _run('verify', '--recipe', _write_recipe(tmp_path, json_))
    assert result.exit_code == cli.EXIT_RECIPE


def test_recipe_not_utf8(tmp_path):
    path = tmp_path / 'recipe.json'
    path.write_bytes(b'\xff' + json.dumps(EXAMPLE).encode())
    result = _run('generate', '--recipe', path, '--out', tmp_path / 'out.csv')
    assert result.exit_code == cli.EXIT_RECIPE
    result = _run('verify', '--recipe', path)
    assert result.exit_code == cli.EXIT_RECIPE
