"""
Toroidal Workbench Command Line
Loads a declarative scenario, builds the algebra, its automorphisms and the
modules, runs the registered identity checks and writes one JSON report per
check plus a summary
"""

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from liealg import load_structure_constants, preset, preset_automorphism
from run_logger import RunLogger
from scalars import Cyclotomic, matrix
from verify import CHECKS, CheckSettings, Scenario, run_check
from vertexops import ClosureCaps, generate_closure

logger = logging.getLogger('ToroidalWorkbench.CLI')

SCENARIO_SCHEMA = 'toroidal-scenario/1'
SUMMARY_SCHEMA = 'toroidal-summary/1'
CONFIG_PATH = Path(__file__).with_name('config.json')
MODULE_CAPS = ('degree', 'weight')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class ScenarioError(ValueError):
    """Raised when a scenario or an override does not validate"""


def load_settings(path: Path = CONFIG_PATH) -> Dict[str, Any]:
    """The "settings" block of config.json (empty when the file is missing)"""
    try:
        with open(path, 'r') as f:
            return json.load(f).get('settings', {})
    except FileNotFoundError:
        return {}
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Malformed {path}: {e}") from e


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    algebra: Dict[str, Any]
    automorphisms: Tuple[Dict[str, Any], ...]
    level: Any
    degree_cap: Fraction
    weight_cap: int
    checks: Tuple[str, ...]
    settings: CheckSettings
    seed: int
    out: str
    base_dir: str = '.'
    order_cap: Optional[int] = None

    @property
    def r(self) -> int:
        return len(self.automorphisms) - 1

    def canonical(self) -> Dict[str, Any]:
        """Everything that determines the mathematics, for fingerprinting"""
        return {
            'name': self.name,
            'algebra': self.algebra,
            'automorphisms': list(self.automorphisms),
            'level': str(self.level),
            'degree_cap': str(self.degree_cap),
            'weight_cap': self.weight_cap,
            'settings': self.settings.to_json(),
        }

    @property
    def fingerprint(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, default=str)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def parse_caps(text: Optional[str]) -> Dict[str, Any]:
    """'degree=2,mode_bound=1/2' -> {'degree': '2', 'mode_bound': '1/2'}"""
    caps: Dict[str, Any] = {}
    for item in filter(None, (part.strip() for part in (text or '').split(','))):
        if '=' not in item:
            raise ScenarioError(f"Cap override {item!r} is not key=value")
        key, value = item.split('=', 1)
        caps[key.strip()] = value.strip()
    return caps


def parse_check_list(value: Any) -> Tuple[str, ...]:
    if value in (None, 'all', ['all']):
        return tuple(CHECKS)
    names = value.split(',') if isinstance(value, str) else list(value)
    names = [name.strip() for name in names if name.strip()]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ScenarioError(f"Unknown check names: {', '.join(unknown)} (known: {', '.join(CHECKS)})")
    if not names:
        raise ScenarioError("No checks selected")
    return tuple(names)


def _positive(value: Any, name: str, kind=Fraction):
    try:
        number = kind(str(value)) if kind is Fraction else kind(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ScenarioError(f"{name} must be a number, got {value!r}") from e
    if number <= 0:
        raise ScenarioError(f"{name} must be positive, got {value}")
    return number


def load_scenario(path: Any, checks: Optional[str] = None, caps: Optional[str] = None,
                  seed: Optional[int] = None, out: Optional[str] = None,
                  settings: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    """Validate a scenario file, applying config.json defaults and the command-line overrides"""
    path = Path(path)
    settings = load_settings() if settings is None else settings
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ScenarioError(f"Scenario file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Malformed scenario {path}: {e}") from e

    if data.get('schema') != SCENARIO_SCHEMA:
        raise ScenarioError(f"Scenario schema must be {SCENARIO_SCHEMA!r}, got {data.get('schema')!r}")
    algebra = data.get('algebra')
    if not isinstance(algebra, dict) or not ({'preset', 'structure_constants'} & set(algebra)):
        raise ScenarioError("algebra needs a 'preset' name or a 'structure_constants' file/object")
    automorphisms = data.get('automorphisms')
    if not isinstance(automorphisms, list) or not automorphisms:
        raise ScenarioError("automorphisms must be a nonempty list (σ_0 first)")
    for index, auto in enumerate(automorphisms):
        if not isinstance(auto, dict) or not ({'preset', 'matrix', 'auto'} & set(auto)):
            raise ScenarioError(f"automorphism {index} needs 'preset', 'matrix' or 'auto'")
        if auto.get('order') is not None:
            _positive(auto['order'], f"order of automorphism {index}", int)
    if 'r' in data and int(data['r']) != len(automorphisms) - 1:
        raise ScenarioError(f"r = {data['r']} but {len(automorphisms)} automorphisms are listed")

    merged = dict(settings.get('default_caps', {}))
    merged.update(data.get('caps', {}))
    merged.update(parse_caps(caps))
    degree_cap = _positive(merged.pop('degree', 3), 'degree cap')
    weight_cap = int(merged.pop('weight', 3))
    if weight_cap < 0:
        raise ScenarioError("weight cap must be nonnegative")
    try:
        check_settings = CheckSettings.from_caps(merged)
    except (TypeError, ValueError) as e:
        raise ScenarioError(str(e)) from e

    name = data.get('name', path.stem)
    return ScenarioConfig(
        name=name,
        algebra=algebra,
        automorphisms=tuple(automorphisms),
        level=data.get('level', 1),
        degree_cap=degree_cap,
        weight_cap=weight_cap,
        checks=parse_check_list(checks if checks is not None else data.get('checks')),
        settings=check_settings,
        seed=int(seed if seed is not None else data.get('seed', 0)),
        out=out or data.get('out') or f"reports/{name}",
        base_dir=str(path.parent),
        order_cap=settings.get('order_cap'),
    )


def build_scenario(config: ScenarioConfig) -> Scenario:
    if config.order_cap:
        Cyclotomic.order_cap = int(config.order_cap)
    algebra = config.algebra
    if 'preset' in algebra:
        g, autos = preset(algebra['preset']), []
    else:
        source = algebra['structure_constants']
        if isinstance(source, str):
            source = Path(config.base_dir) / source
        g, autos = load_structure_constants(source)
    matrices, orders, names = [], [], []
    for index, auto in enumerate(config.automorphisms):
        if 'preset' in auto:
            matrices.append(preset_automorphism(g, auto['preset']))
            names.append(auto['preset'])
        elif 'matrix' in auto:
            matrices.append(matrix(auto['matrix']))
            names.append(auto.get('name', f"σ{index}"))
        else:
            try:
                matrices.append(autos[int(auto['auto'])])
            except (IndexError, ValueError) as e:
                raise ScenarioError(f"automorphism {index}: no auto {auto['auto']!r} in the structure constants") from e
            names.append(auto.get('name', f"σ{index}"))
        orders.append(auto.get('order'))
    return Scenario.build(g, matrices, orders, names, level=config.level, degree_cap=config.degree_cap,
                          weight_cap=config.weight_cap, name=config.name, fingerprint=config.fingerprint)


def write_json(path: Path, payload: Any):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, default=str))
        f.write('\n')


def _run_in_worker(config: ScenarioConfig, name: str) -> Dict[str, Any]:
    scenario = build_scenario(config)
    return run_check(name, scenario, config.settings, config.seed).to_json()


def run_scenario(config: ScenarioConfig, jobs: int = 1, run_logger: Optional[RunLogger] = None) -> int:
    """Run every selected check; exit status 0 iff all of them pass"""
    out = Path(config.out)
    reports: Dict[str, Dict[str, Any]] = {}
    if jobs > 1 and len(config.checks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {name: pool.submit(_run_in_worker, config, name) for name in config.checks}
            for name in config.checks:
                reports[name] = futures[name].result()
    else:
        scenario = build_scenario(config)
        for name in config.checks:
            reports[name] = run_check(name, scenario, config.settings, config.seed).to_json()

    for name in config.checks:
        report = reports[name]
        write_json(out / f"{name}.json", report)
        if run_logger:
            run_logger.log_check(name, report['passed'], report['checked'], report['skipped'],
                                 report['failure_count'])
    passed = all(report['passed'] for report in reports.values())
    write_json(out / 'summary.json', {
        'schema': SUMMARY_SCHEMA,
        'scenario': config.name,
        'fingerprint': config.fingerprint,
        'seed': config.seed,
        'checks': {name: reports[name]['passed'] for name in config.checks},
        'passed': passed,
    })
    return EXIT_OK if passed else EXIT_FAILED


def parse_element(scenario: Scenario, text: str, module: str):
    """'c', or '<basis label>@<t0 exponent>,<m_1>,...,<m_r>' (projected to τ on W, to L on V_L)"""
    tor = scenario.tor if module == 'W' else scenario.tor_L
    text = text.strip()
    if text == 'c':
        return tor.central()
    if '@' not in text:
        raise ScenarioError(f"Element {text!r} is neither 'c' nor label@p0,m")
    label, modes = text.split('@', 1)
    labels = scenario.algebra.labels
    if label not in labels:
        raise ScenarioError(f"Unknown basis label {label!r} (known: {', '.join(labels)})")
    parts = [part.strip() for part in modes.split(',')]
    if len(parts) != tor.r + 1:
        raise ScenarioError(f"Element needs a t0 exponent and {tor.r} t-exponents")
    p0, m = Fraction(parts[0]), tuple(int(x) for x in parts[1:])
    a = scenario.algebra.basis_vector(labels.index(label))
    if module == 'W':
        return tor.tau_component(a, p0, m)
    return tor.loop_component(a, p0, m)


def dump(what: str, config: ScenarioConfig, module: str = 'W', element: Optional[str] = None) -> Path:
    scenario = build_scenario(config)
    target = scenario.W if module == 'W' else scenario.V_L
    if what == 'basis':
        payload = target.dump_basis()
    elif what == 'operator':
        if not element:
            raise ScenarioError("dump operator needs --element")
        payload = target.dump_operator(parse_element(scenario, element, module))
    elif what == 'closure':
        settings = config.settings
        caps = ClosureCaps(depth=settings.closure_depth, t_bound=settings.t_bound, mode_bound=settings.mode_bound,
                           max_members=settings.closure_members, locality_cap=settings.locality_cap)
        currents = [scenario.current(idx, target) for idx in range(scenario.dim)]
        payload = generate_closure(currents, caps, scenario.probes(target, settings)).to_json()
    else:
        raise ScenarioError(f"Unknown dump target: {what}")
    path = Path(config.out) / f"{what}.json"
    write_json(path, {'scenario': config.name, 'fingerprint': config.fingerprint, what: payload})
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Toroidal Workbench: exact checks for twisted toroidal vertex algebras")
    parser.add_argument("--log-level", help="Override settings.log_level from config.json")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run the checks of a scenario")
    run.add_argument("config", help="Scenario JSON file")
    run.add_argument("--out", help="Report directory")
    run.add_argument("--seed", type=int, help="Seed of the randomized checks")
    run.add_argument("--checks", help="Comma-separated check names (overrides the scenario)")
    run.add_argument("--caps", help="Comma-separated key=value cap overrides")
    run.add_argument("--jobs", type=int, default=1, help="Worker processes across checks")

    dump_parser = sub.add_parser("dump", help="Write a JSON artifact of the scenario")
    dump_parser.add_argument("what", choices=["basis", "operator", "closure"])
    dump_parser.add_argument("config", help="Scenario JSON file")
    dump_parser.add_argument("--out", help="Output directory")
    dump_parser.add_argument("--caps", help="Comma-separated key=value cap overrides")
    dump_parser.add_argument("--module", choices=["W", "V_L"], default="W")
    dump_parser.add_argument("--element", help="Toroidal element for 'operator', e.g. c or h@-1/2,0")

    sub.add_parser("checks", help="List the registered checks")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "checks":
        for name, check in CHECKS.items():
            print(f"{name}: {check.anchor}")
        return EXIT_OK

    try:
        settings = load_settings()
    except ScenarioError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INVALID
    run_logger = RunLogger(logs_dir=settings.get('logs_dir', 'logs'),
                           level=args.log_level or settings.get('log_level', 'INFO'))
    out_hint = Path(args.out or '.')
    try:
        if args.command == "run":
            config = load_scenario(args.config, args.checks, args.caps, args.seed, args.out, settings)
        else:
            config = load_scenario(args.config, None, args.caps, None, args.out, settings)
        out_hint = Path(config.out)
        scenario_label = f"{config.name} [{config.fingerprint}]"
        if args.command == "run":
            run_logger.log_info(f"Running {len(config.checks)} checks on {scenario_label}, seed {config.seed}")
            if args.jobs < 1:
                raise ScenarioError("--jobs must be at least 1")
            status = run_scenario(config, args.jobs, run_logger)
            run_logger.log_info(f"{'🎉 all checks passed' if status == EXIT_OK else '🚨 some checks failed'}; "
                                f"reports in {config.out}")
            return status
        path = dump(args.what, config, args.module, args.element)
        run_logger.log_info(f"Wrote {path}")
        return EXIT_OK
    except ValueError as e:
        run_logger.log_error("Scenario rejected", e)
        write_json(out_hint / 'diagnostic.json', {'error': type(e).__name__, 'message': str(e)})
        return EXIT_INVALID
    finally:
        run_logger.close()


if __name__ == "__main__":
    sys.exit(main())
