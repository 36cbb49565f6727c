"""
Command Line Test Suite
Scenario loading, overrides, fingerprints, report files and exit codes
"""

import json
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import cli
from cli import (EXIT_FAILED, EXIT_INVALID, EXIT_OK, SCENARIO_SCHEMA, SUMMARY_SCHEMA, ScenarioError, build_scenario,
                 load_scenario, main, parse_caps, parse_check_list, parse_element)
from verify import CHECKS, CheckReport

SMALL_SCENARIO = {
    "schema": SCENARIO_SCHEMA,
    "name": "sl2-small",
    "algebra": {"preset": "sl2"},
    "automorphisms": [{"preset": "chevalley_involution", "order": 2}, {"preset": "sign", "order": 2}],
    "level": 1,
    "caps": {"degree": 1, "weight": 0},
    "checks": ["delta_identity"],
    "seed": 0,
}


def write_scenario(tmp_path, **changes):
    data = dict(SMALL_SCENARIO, **changes)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return path


class TestParsing:
    """Command-line override strings"""

    def test_parse_caps(self):
        assert parse_caps("degree=2, mode_bound=1/2") == {'degree': '2', 'mode_bound': '1/2'}
        assert parse_caps(None) == {}
        assert parse_caps("") == {}

    def test_parse_caps_needs_key_value(self):
        with pytest.raises(ScenarioError):
            parse_caps("degree")

    def test_parse_check_list(self):
        assert parse_check_list(None) == tuple(CHECKS)
        assert parse_check_list("all") == tuple(CHECKS)
        assert parse_check_list("closure, jacobi") == ('closure', 'jacobi')
        assert parse_check_list(['mode_table']) == ('mode_table',)

    def test_unknown_or_empty_check_list(self):
        with pytest.raises(ScenarioError):
            parse_check_list("closure,telepathy")
        with pytest.raises(ScenarioError):
            parse_check_list(" , ")


class TestLoadScenario:
    """Validation and cap merging"""

    def test_loads_the_small_scenario(self, tmp_path):
        config = load_scenario(write_scenario(tmp_path), settings={})
        assert config.name == "sl2-small"
        assert config.r == 1
        assert config.degree_cap == 1 and config.weight_cap == 0
        assert config.checks == ('delta_identity',)
        assert config.out == "reports/sl2-small"

    def test_overrides_win(self, tmp_path):
        settings = {'default_caps': {'degree': 3, 'mode_bound': '3/2'}}
        config = load_scenario(write_scenario(tmp_path), checks="mode_table", caps="degree=2,t_bound=0",
                               seed=5, out=str(tmp_path / "out"), settings=settings)
        assert config.degree_cap == 2
        assert config.settings.t_bound == 0
        assert config.checks == ('mode_table',)
        assert config.seed == 5
        assert config.out == str(tmp_path / "out")

    def test_defaults_come_from_settings(self, tmp_path):
        path = tmp_path / "bare.json"
        data = {k: v for k, v in SMALL_SCENARIO.items() if k not in ('caps', 'name')}
        path.write_text(json.dumps(data))
        config = load_scenario(path, settings={'default_caps': {'degree': 2, 'weight': 1}, 'order_cap': 60})
        assert config.name == "bare"
        assert config.degree_cap == 2 and config.weight_cap == 1
        assert config.order_cap == 60

    @pytest.mark.parametrize("changes", [
        {"schema": "toroidal-scenario/0"},
        {"algebra": {"name": "sl2"}},
        {"automorphisms": []},
        {"automorphisms": [{"order": 2}]},
        {"automorphisms": [{"preset": "sign", "order": 0}]},
        {"r": 2},
        {"caps": {"degree": 0}},
        {"caps": {"weight": -1}},
        {"caps": {"telescope": 1}},
        {"checks": ["warp_drive"]},
    ])
    def test_invalid_scenarios(self, tmp_path, changes):
        with pytest.raises(ScenarioError):
            load_scenario(write_scenario(tmp_path, **changes), settings={})

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "missing.json", settings={})
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        with pytest.raises(ScenarioError):
            load_scenario(broken, settings={})

    def test_fingerprint(self, tmp_path):
        first = load_scenario(write_scenario(tmp_path), settings={})
        again = load_scenario(write_scenario(tmp_path), seed=11, settings={})
        wider = load_scenario(write_scenario(tmp_path), caps="weight=1", settings={})
        assert len(first.fingerprint) == 16
        assert first.fingerprint == again.fingerprint
        assert first.fingerprint != wider.fingerprint


class TestBuildScenario:
    def test_presets(self, tmp_path):
        scenario = build_scenario(load_scenario(write_scenario(tmp_path), settings={}))
        assert scenario.family.orders == (2, 2)
        assert scenario.W.graded_dims() == {Fraction(0): 1, Fraction(1, 2): 1, Fraction(1): 1}

    def test_structure_constants_and_matrices(self, tmp_path):
        constants = {
            "name": "sl2-by-hand", "dim": 3, "labels": ["e", "h", "f"],
            "brackets": [[0, 2, [0, 1, 0]], [1, 0, [2, 0, 0]], [1, 2, [0, 0, -2]]],
            "form": [[0, 0, 1], [0, 2, 0], [1, 0, 0]],
        }
        (tmp_path / "sl2.json").write_text(json.dumps(constants))
        path = write_scenario(tmp_path, algebra={"structure_constants": "sl2.json"}, automorphisms=[
            {"matrix": [[0, 0, -1], [0, -1, 0], [-1, 0, 0]], "name": "theta"},
            {"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "order": 1},
        ])
        scenario = build_scenario(load_scenario(path, settings={}))
        assert scenario.algebra.name == "sl2-by-hand"
        assert scenario.family.orders == (2, 1)

    def test_parse_element(self, tmp_path):
        scenario = build_scenario(load_scenario(write_scenario(tmp_path), settings={}))
        assert parse_element(scenario, "c", 'W') == scenario.tor.central()
        assert parse_element(scenario, "h@1/2,0", 'W')
        assert not parse_element(scenario, "h@0,0", 'W')
        assert parse_element(scenario, "e@1,1", 'V_L')
        for text in ("x@0,0", "h@1/2", "h"):
            with pytest.raises(ScenarioError):
                parse_element(scenario, text, 'W')


class TestMain:
    """Exit codes and files written by the entry point"""

    @pytest.fixture(autouse=True)
    def workdir(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        return tmp_path

    def test_lists_checks(self, capsys):
        assert main(['checks']) == EXIT_OK
        out = capsys.readouterr().out
        assert "delta_identity:" in out
        assert len(out.strip().splitlines()) == len(CHECKS)

    def test_passing_run(self, workdir):
        out = workdir / "out"
        status = main(['run', str(write_scenario(workdir)), '--out', str(out)])
        assert status == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary['schema'] == SUMMARY_SCHEMA
        assert summary['checks'] == {'delta_identity': True}
        assert summary['passed'] is True
        report = json.loads((out / "delta_identity.json").read_text())
        assert report['passed'] is True and report['checked'] > 0

    def test_failing_check_exits_one(self, workdir, monkeypatch):
        monkeypatch.setattr(cli, 'run_check', lambda name, scenario, settings, seed: CheckReport(name))
        out = workdir / "out"
        assert main(['run', str(write_scenario(workdir)), '--out', str(out)]) == EXIT_FAILED
        assert json.loads((out / "summary.json").read_text())['passed'] is False

    def test_invalid_scenario_writes_a_diagnostic(self, workdir):
        out = workdir / "out"
        path = write_scenario(workdir, schema="something-else")
        assert main(['run', str(path), '--out', str(out)]) == EXIT_INVALID
        diagnostic = json.loads((out / "diagnostic.json").read_text())
        assert diagnostic['error'] == 'ScenarioError'
        assert 'schema' in diagnostic['message']

    def test_bad_jobs(self, workdir):
        assert main(['run', str(write_scenario(workdir)), '--out', 'out', '--jobs', '0']) == EXIT_INVALID

    def test_parallel_run(self, workdir):
        out = workdir / "out"
        status = main(['run', str(write_scenario(workdir)), '--out', str(out), '--jobs', '2',
                       '--checks', 'delta_identity,mode_commutator', '--caps', 'commutator_bound=1,commutator_t_bound=1'])
        assert status == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary['checks'] == {'delta_identity': True, 'mode_commutator': True}

    def test_dump_basis(self, workdir):
        out = workdir / "dump"
        assert main(['dump', 'basis', str(write_scenario(workdir)), '--out', str(out)]) == EXIT_OK
        data = json.loads((out / "basis.json").read_text())
        assert data['scenario'] == "sl2-small"
        assert len(data['basis']['basis']) == 3

    def test_dump_operator_needs_an_element(self, workdir):
        out = workdir / "dump"
        assert main(['dump', 'operator', str(write_scenario(workdir)), '--out', str(out)]) == EXIT_INVALID
        assert main(['dump', 'operator', str(write_scenario(workdir)), '--out', str(out),
                     '--element', 'h@1/2,0']) == EXIT_OK
        assert json.loads((out / "operator.json").read_text())['operator']['module'] == 'W'

    def test_non_commuting_automorphisms(self, workdir):
        # Ad of an order-3 element of PSL2 against the sign automorphism
        out = workdir / "out"
        path = write_scenario(workdir, automorphisms=[
            {"matrix": [[0, 0, -1], [0, -1, 1], [-1, -2, 1]], "order": 3},
            {"preset": "sign", "order": 2},
        ])
        assert main(['run', str(path), '--out', str(out)]) == EXIT_INVALID
        diagnostic = json.loads((out / "diagnostic.json").read_text())
        assert diagnostic['error'] == 'NonCommutingError'
        assert "automorphisms do not commute" in diagnostic['message']

    def test_dump_closure_contains_the_identity(self, workdir):
        out = workdir / "dump"
        assert main(['dump', 'closure', str(write_scenario(workdir)), '--out', str(out),
                     '--caps', 'closure_depth=1,mode_bound=1']) == EXIT_OK
        members = json.loads((out / "closure.json").read_text())['closure']['members']
        assert members[0]['label'] == '1'
