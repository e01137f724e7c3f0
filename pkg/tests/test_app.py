import json
import math
from pathlib import Path

import pytest

import app
import config

CORPUS = Path(__file__).resolve().parent.parent / 'data' / 'corpus.g6'


def run(capsys, *argv):
    code = app.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_analyze_petersen_with_oracles(capsys):
    report = run_json(capsys, 'analyze', '--graph', 'petersen', '--oracle')
    bounds = report['bounds']
    assert bounds['status'] == 'available'
    assert bounds['eta']['value'] == pytest.approx(12.5)
    assert bounds['eta_dual']['value'] == pytest.approx(1.2)
    assert bounds['eta_product']['value'] == pytest.approx(15.0)
    assert bounds['eta_status'] == 'equality'
    assert all(bounds['certificates'].values())
    assert report['oracle']['mc'] == 12
    assert 1.25 - 1e-9 <= report['oracle']['fcc'] <= 1.25 / 0.87856 + 1e-9
    assert report['membership']['kind'] == 'belongs'
    assert report['schema_version'] == '1.0'


@pytest.mark.parametrize('graph, eta, mc, fcc', [
    ('hypercube(4)', 32.0, 32, 1.0),
    ('cycle(9)', 9 / 4 * (2 - 2 * math.cos(8 * math.pi / 9)), 8, 9 / 8),
])
def test_analyze_larger_distance_regular_graphs(capsys, graph, eta, mc, fcc):
    report = run_json(capsys, 'analyze', '--graph', graph, '--oracle')
    bounds = report['bounds']
    assert bounds['eta']['value'] == pytest.approx(eta)
    assert bounds['eta_status'] == 'equality'
    assert all(bounds['certificates'].values())
    assert report['oracle']['mc'] == mc
    assert report['oracle']['fcc'] == pytest.approx(fcc)
    assert report['oracle']['fcc_sandwich']['within']


def test_gamma_on_nine_cycle(capsys):
    bounds = run_json(capsys, 'gamma', '--graph', 'cycle(9)', '--second', 'dist2')['bounds']
    assert bounds['gamma_dual']['value'] == pytest.approx(bounds['gamma_dual_lp']['value'], abs=1e-7)
    assert bounds['gamma_status'] in ('equality', 'strict')


def test_analyze_reports_the_eigenmatrix(capsys):
    report = run_json(capsys, 'analyze', '--graph', 'paley(9)')
    expected = [[1, 4, 4], [1, 1, -2], [1, -2, 1]]
    assert len(report['scheme']['P']) == 3
    for row, want in zip(report['scheme']['P'], expected):
        assert row == pytest.approx(want, abs=1e-9)
    assert report['input']['n'] == 9
    assert report['scheme']['intersection_array'] == {'b': [4, 2], 'c': [1, 2]}


def test_analyze_complete_graph(capsys):
    report = run_json(capsys, 'analyze', '--graph', 'complete(3)')
    assert report['bounds']['eta_product']['value'] == pytest.approx(3.0)


def test_output_is_byte_stable(capsys):
    _, first, _ = run(capsys, 'analyze', '--graph', 'petersen', '--oracle')
    _, second, _ = run(capsys, 'analyze', '--graph', 'petersen', '--oracle')
    assert first == second


def test_graph6_from_a_file(capsys, tmp_path):
    path = tmp_path / 'petersen.g6'
    path.write_text('\nIheA@GUAo\n', encoding='utf-8')
    report = run_json(capsys, 'analyze', '--graph', str(path))
    assert report['input']['n'] == 10
    assert report['bounds']['eta']['value'] == pytest.approx(12.5)


@pytest.mark.parametrize('graph, second, gamma, gamma_dual, status', [
    ('paley(9)', 'complement', 49.5, 0.75, 'strict'),
    ('petersen', 'dist2', 60.0, 0.75, 'equality'),
])
def test_gamma_pairs(capsys, graph, second, gamma, gamma_dual, status):
    bounds = run_json(capsys, 'gamma', '--graph', graph, '--second', second, '--oracle')['bounds']
    assert bounds['gamma']['value'] == pytest.approx(gamma)
    assert bounds['gamma_dual']['value'] == pytest.approx(gamma_dual)
    assert bounds['gamma_status'] == status


def test_gamma_closed_forms_agree_with_lp(capsys):
    report = run_json(capsys, 'gamma', '--graph', 'cycle(5)', '--second', 'dist2', '--oracle')
    bounds = report['bounds']
    assert bounds['gamma']['value'] == pytest.approx(bounds['gamma_lp']['value'], abs=1e-7)
    assert bounds['gamma_lp']['tolerance'] == config.CLOSED_FORM_TOL
    assert bounds['gamma_dual']['value'] == pytest.approx(bounds['gamma_dual_lp']['value'], abs=1e-7)
    assert report['oracle']['sandwich']['within']


def test_gamma_needs_diameter_two(capsys):
    code, _, err = run(capsys, 'gamma', '--graph', 'complete(4)', '--second', 'dist2')
    assert code == 2
    assert 'diameter' in err


def test_gamma_with_edgeless_second_graph(capsys):
    report = run_json(capsys, 'gamma', '--graph', 'complete(4)', '--second', 'complement', '--oracle', '--round', '200')
    bounds = report['bounds']
    assert bounds['status'] == 'available'
    assert bounds['gamma']['value'] == pytest.approx(8.0)
    assert bounds['gamma_dual'] is None
    assert bounds['gamma_dual_method'].startswith('not applicable')
    assert report['oracle']['qp'] == 8
    assert report['oracle']['sandwich']['within']
    assert 6 <= report['rounding']['best_value'] <= 8


def test_gamma_with_overlapping_graphs(capsys):
    report = run_json(capsys, 'gamma', '--graph', 'cycle(5)', '--second', 'cycle(5)')
    assert report['bounds']['status'] == 'unavailable'


def test_max2sat_satisfiable(capsys, tmp_path):
    path = tmp_path / 'small.cnf'
    path.write_text('c tiny\np cnf 2 2\n1 2 0\n-1 0\n', encoding='utf-8')
    report = run_json(capsys, 'max2sat', str(path))
    assert report['oracle']['max2sat'] == 2
    assert report['encoding']['truth_table'] is True
    assert report['input']['unit_clauses'] == 1


def test_max2sat_complete_instance(capsys, tmp_path):
    path = tmp_path / 'complete.cnf'
    path.write_text('p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n', encoding='utf-8')
    report = run_json(capsys, 'max2sat', str(path))
    assert report['oracle']['max2sat'] == 3
    assert report['bounds']['status'] == 'unavailable'
    assert report['encoding']['overlap'] is True


def test_max2sat_rejects_wide_clauses(capsys, tmp_path):
    path = tmp_path / 'wide.cnf'
    path.write_text('p cnf 3 1\n1 2 3 0\n', encoding='utf-8')
    code, _, err = run(capsys, 'max2sat', str(path))
    assert code == 2
    assert 'line 2' in err


def test_max2sat_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, 'max2sat', str(tmp_path / 'absent.cnf'))
    assert code == 2
    assert err.startswith('error:')


def test_batch_corpus(capsys):
    code, out, _ = run(capsys, 'batch', str(CORPUS))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith('line,n,edges,status')
    assert len(lines) == 14
    assert lines[-1] == '# summary equality=5 errors=0 rows=12 skipped=5 strict=2 violated=0'
    assert any(',not DRG,' in line for line in lines)


def test_batch_pair_as_jsonl(capsys, tmp_path):
    path = tmp_path / 'pair.g6'
    path.write_text('IheA@GUAo\nH{S{aSf\n', encoding='utf-8')
    code, out, _ = run(capsys, 'batch', str(path), '--format', 'jsonl', '--threads', '2')
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r['gamma_class'] for r in records[:2]] == ['equality', 'strict']
    assert records[-1]['summary']['equality'] == 1
    assert records[-1]['summary']['strict'] == 1


def test_batch_empty_file(capsys, tmp_path):
    path = tmp_path / 'empty.g6'
    path.write_text('', encoding='utf-8')
    code, out, _ = run(capsys, 'batch', str(path))
    assert code == 0
    assert out == '# summary equality=0 errors=0 rows=0 skipped=0 strict=0 violated=0\n'


@pytest.mark.parametrize('graph', ['D c', 'petersen(3)', 'nosuchgraph(4)'])
def test_invalid_graph_exits_with_input_error(capsys, graph):
    code, out, err = run(capsys, 'analyze', '--graph', graph)
    assert code == 2
    assert out == ''
    assert err.startswith('error:')


def test_oracles_skip_large_graphs(capsys):
    report = run_json(capsys, 'analyze', '--graph', 'cycle(30)', '--oracle')
    assert report['oracle'] == 'skipped (size)'
    assert report['bounds']['eta_status'] == 'equality'


def test_markdown_format(capsys):
    code, out, _ = run(capsys, 'analyze', '--graph', 'petersen', '--format', 'markdown')
    assert code == 0
    assert out.startswith('# Scheme Gauge Report')
    assert '## First Eigenmatrix' in out


def test_timing_and_rounding(capsys):
    report = run_json(capsys, 'analyze', '--graph', 'petersen', '--timing', '--round', '200', '--seed', '3')
    assert set(report['timing']) >= {'closure', 'scheme', 'bounds', 'rounding'}
    assert report['rounding']['trials'] == 200
    assert report['rounding']['best_value'] <= 12
    assert 'timing' not in run_json(capsys, 'analyze', '--graph', 'petersen')


def test_output_file(capsys, tmp_path):
    target = tmp_path / 'report.json'
    code, out, _ = run(capsys, 'analyze', '--graph', 'cycle(5)', '--output', str(target))
    assert code == 0
    assert out == ''
    assert json.loads(target.read_text(encoding='utf-8'))['bounds']['eta_status'] == 'equality'
