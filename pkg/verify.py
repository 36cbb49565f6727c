"""
Identity Checks for the Toroidal Workbench
Expands both sides of each identity on a finite window, compares them exactly
and collects the outcome in machine-readable reports
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from formal import Window, delta_expand
from liealg import GradedDecomposition, GradedLieAlgebra, decompose, preset, preset_automorphism, validate_family
from repn import (VACUUM, VACUUM_TOP, Monomial, OperatorMatrix, TruncatedModule, Vector, add_into,
                  basis_vector, induce_twisted_vacuum, induce_vacuum, lift_automorphism, vectors_equal)
from scalars import ONE, Cyclotomic, binomial, parse_scalar
from toroidal import ToroidalAlgebra, check_mode_commutator
from vertexops import (METHODS, ClassError, ClosureCaps, CombinationSeries, IdentitySeries, LocalityWindowError,
                       ModeValue, NotLocalError, OperatorSeries, ProductSeries, default_probes,
                       find_locality_order, generate_closure, locality_defects, sigma, twisted_Y)

logger = logging.getLogger('ToroidalWorkbench.Verify')

REPORT_SCHEMA = 'toroidal-check/1'
MAX_REPORTED_FAILURES = 25
NEGATIVE_CONTROL_CHECKS = ('mode_commutator', 'mode_table', 'twisted_jacobi')
JACOBI_FORMS = ('homogeneous', 'swapped')


class VacuousCheckError(ValueError):
    """Raised when a check could not compare a single coefficient"""


class _StopCheck(Exception):
    pass


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _minus(p: Sequence[int], m: Sequence[int]) -> Tuple[int, ...]:
    return tuple(a - b for a, b in zip(p, m))


def _fractions(N: int, bound: Any) -> List[Fraction]:
    top = math.floor(Fraction(bound) * N)
    return [Fraction(k, N) for k in range(-top, top + 1)]


# -- reports ----------------------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one identity check

    Passing needs at least one compared coefficient and no failures.
    """

    identity: str
    anchor: str = ''
    scenario: str = ''
    seed: Optional[int] = None
    checked: int = 0
    skipped: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    fail_fast: bool = field(default=False, repr=False)

    @property
    def failure_count(self) -> int:
        return len(self.failures)

    @property
    def passed(self) -> bool:
        return self.error is None and self.checked > 0 and not self.failures

    def record(self, ok: bool, where: Dict[str, Any], lhs: Any = None, rhs: Any = None) -> bool:
        self.checked += 1
        if not ok:
            self.failures.append({'at': where, 'lhs': lhs, 'rhs': rhs})
            if self.fail_fast:
                raise _StopCheck()
        return ok

    def compare(self, lhs: Vector, rhs: Vector, where: Dict[str, Any], label: Callable[[Vector], str]) -> bool:
        if vectors_equal(lhs, rhs):
            return self.record(True, where)
        return self.record(False, where, label(lhs), label(rhs))

    def skip(self, count: int = 1):
        self.skipped += count

    def merge(self, other: 'CheckReport'):
        self.checked += other.checked
        self.skipped += other.skipped
        self.failures.extend(other.failures)
        if other.error and not self.error:
            self.error = other.error

    def require_nonvacuous(self):
        if self.checked == 0:
            raise VacuousCheckError(f"{self.identity}: no coefficient fits the window "
                                    f"({self.skipped} skipped by truncation)")

    def to_json(self) -> Dict[str, Any]:
        return {
            'schema': REPORT_SCHEMA,
            'identity': self.identity,
            'anchor': self.anchor,
            'scenario': self.scenario,
            'seed': self.seed,
            'checked': self.checked,
            'skipped': self.skipped,
            'passed': self.passed,
            'failure_count': self.failure_count,
            'failures': self.failures[:MAX_REPORTED_FAILURES],
            'details': self.details,
            'error': self.error,
        }


@dataclass(frozen=True)
class CheckSettings:
    """Windows, sample sizes and caps shared by the checks"""

    mode_bound: Fraction = Fraction(3, 2)
    t_bound: int = 1
    n_min: int = -1
    n_max: int = 1
    probe_degree: Fraction = Fraction(0)
    commutator_bound: Fraction = Fraction(4)
    commutator_t_bound: int = 4
    samples: int = 50
    ye_pairs: int = 20
    ye_depth: int = 1
    table_depth: int = 4
    table_bound: Fraction = Fraction(2)
    locality_cap: int = 8
    locality_bound: int = 2
    closure_depth: int = 2
    closure_members: int = 12
    equivariance_depth: int = 2
    equivariance_degree: Fraction = Fraction(2)
    delta_bound: int = 6
    delta_alphas: Tuple[Fraction, ...] = (Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))
    mutation_samples: Optional[int] = None
    fail_fast: bool = False

    @classmethod
    def from_caps(cls, caps: Dict[str, Any]) -> 'CheckSettings':
        known = {f.name: f for f in fields(cls)}
        values = {}
        for key, value in caps.items():
            if key not in known:
                raise ValueError(f"Unknown check setting: {key}")
            default = getattr(cls, key)
            if key == 'delta_alphas':
                values[key] = tuple(Fraction(str(a)) for a in value)
            elif key == 'mutation_samples':
                values[key] = None if value is None else int(value)
            elif isinstance(default, bool):
                values[key] = value.strip().lower() in ('1', 'true', 'yes') if isinstance(value, str) else bool(value)
            elif isinstance(default, Fraction):
                values[key] = Fraction(str(value))
            else:
                values[key] = int(value)
        settings = cls(**values)
        if (settings.mode_bound <= 0 or settings.t_bound < 0 or settings.commutator_t_bound < 0
                or settings.n_min > settings.n_max):
            raise ValueError("Check windows must be nonempty")
        return settings

    def window(self, r: int) -> Window:
        return Window([(-self.mode_bound, self.mode_bound)] + [(-self.t_bound, self.t_bound)] * r)

    def weights(self, r: int) -> List[Tuple[int, ...]]:
        return list(itertools.product(range(-self.t_bound, self.t_bound + 1), repeat=r))

    def to_json(self) -> Dict[str, Any]:
        result = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = [str(v) for v in value]
            elif isinstance(value, Fraction):
                value = str(value)
            result[f.name] = value
        return result


# -- scenario ---------------------------------------------------------------------------------

class Scenario:
    """Everything built from one configuration: g, the automorphisms, τ, L, W and V_L"""

    def __init__(self, decomposition: GradedDecomposition, level: Any = 1, degree_cap: Any = 3,
                 weight_cap: int = 3, name: str = 'scenario', fingerprint: str = ''):
        self.decomposition = decomposition
        self.algebra = decomposition.algebra
        self.family = decomposition.family
        self.level = parse_scalar(level)
        self.degree_cap = Fraction(degree_cap)
        self.weight_cap = int(weight_cap)
        self.name = name
        self.fingerprint = fingerprint or name
        self.tor = ToroidalAlgebra(decomposition)
        self.tor_L = ToroidalAlgebra(decomposition, 1)

    @classmethod
    def build(cls, algebra: GradedLieAlgebra, matrices: Sequence[np.ndarray], orders: Optional[Sequence[int]] = None,
              names: Optional[Sequence[str]] = None, **kwargs) -> 'Scenario':
        family = validate_family(algebra, matrices, orders, names)
        return cls(decompose(algebra, family), **kwargs)

    @classmethod
    def from_presets(cls, algebra: str = 'sl2', automorphisms: Sequence[str] = ('chevalley_involution', 'sign'),
                     **kwargs) -> 'Scenario':
        g = preset(algebra)
        matrices = [preset_automorphism(g, name) for name in automorphisms]
        kwargs.setdefault('name', f"{algebra}:{','.join(automorphisms)}")
        return cls.build(g, matrices, names=list(automorphisms), **kwargs)

    @cached_property
    def W(self) -> TruncatedModule:
        return induce_twisted_vacuum(self.tor, self.level, self.degree_cap, self.weight_cap)

    @cached_property
    def V_L(self) -> TruncatedModule:
        return induce_vacuum(self.tor_L, self.level, self.degree_cap, self.weight_cap)

    @property
    def dim(self) -> int:
        return len(self.decomposition.basis)

    def mutant(self, i: int, j: int, k: int, delta: Any = 1) -> 'Scenario':
        """The same scenario over a table with [b_i, b_j] shifted by delta·b_k"""
        algebra = self.algebra.mutate(i, j, k, delta)
        return Scenario(self.decomposition.with_algebra(algebra), self.level, self.degree_cap, self.weight_cap,
                        name=algebra.name, fingerprint=f"{self.fingerprint}~[{i},{j},{k}]+{delta}")

    def Y(self, v: Vector, target: Optional[TruncatedModule] = None, method: str = 'closed') -> OperatorSeries:
        return twisted_Y(self.V_L, v, self.W if target is None else target, method)

    def generator(self, idx: int) -> Vector:
        """Eigenbasis vector idx of g as a degree-1 vector of V_L"""
        return basis_vector(((), idx))

    def generators(self) -> List[Vector]:
        return [self.generator(idx) for idx in range(self.dim)]

    def current(self, idx: int, target: Optional[TruncatedModule] = None) -> OperatorSeries:
        return self.Y(self.generator(idx), target)

    def identity(self, target: Optional[TruncatedModule] = None) -> OperatorSeries:
        return self.Y(basis_vector(VACUUM), target)

    def current_combination(self, x: np.ndarray, target: Optional[TruncatedModule] = None) -> OperatorSeries:
        """x^τ (or x^L on V_L) for x in original coordinates"""
        target = self.W if target is None else target
        coords = self.decomposition.eigen_coordinates(x)
        return CombinationSeries(target, [(c, self.current(idx, target)) for idx, c in enumerate(coords) if c])

    def vl_class(self, v: Vector) -> Optional[int]:
        """σ̃_0-class of a V_L vector, None when it mixes classes"""
        residues = self.decomposition.residues
        classes = set()
        for gens, top in v:
            total = sum(residues[idx][0] for _, _, idx in gens)
            if top != VACUUM_TOP:
                total += residues[top][0]
            classes.add(total % self.family.N0)
        if not classes:
            return 0
        return classes.pop() if len(classes) == 1 else None

    def probes(self, target: TruncatedModule, settings: 'CheckSettings') -> List[Monomial]:
        if settings.probe_degree == 0:
            return [VACUUM]
        return default_probes(target, settings.probe_degree)


# -- shared comparison helpers ------------------------------------------------------------------

def _compare_series(report: CheckReport, left: OperatorSeries, right: Optional[OperatorSeries],
                    probes: Sequence[Monomial], settings: CheckSettings, where: Dict[str, Any]):
    """Mode by mode on the window; right = None stands for the zero series"""
    target = left.target
    for n0 in _fractions(left.N, settings.mode_bound):
        if not (left.supports(n0) or (right is not None and right.supports(n0))):
            continue
        for p, w in itertools.product(settings.weights(left.r), probes):
            a = left.mode(n0, p, basis_vector(w))
            b = right.mode(n0, p, basis_vector(w)) if right is not None else ModeValue({}, True)
            if not (a.valid and b.valid):
                report.skip()
                continue
            report.compare(a.vector, b.vector, {**where, 'n0': str(n0), 'p': list(p), 'w': target.label(w)},
                           target.vector_label)


def _compare_materialized(report: CheckReport, left, right, probes: Sequence[Monomial],
                          target: TruncatedModule, where: Dict[str, Any]):
    lhs, rhs = dict(left.items()), dict(right.items())
    for exponents in sorted(set(lhs) | set(rhs)):
        a, b = lhs.get(exponents, OperatorMatrix()), rhs.get(exponents, OperatorMatrix())
        for probe in probes:
            if probe in a.invalid or probe in b.invalid:
                report.skip()
                continue
            report.compare(a.columns.get(probe, {}), b.columns.get(probe, {}),
                           {**where, 'exponents': [str(e) for e in exponents], 'w': target.label(probe)},
                           target.vector_label)


def _table_candidates(scenario: Scenario, a_idx: int, b_idx: int, m: Sequence[int],
                      target: TruncatedModule) -> List[OperatorSeries]:
    """[a_(m), b]^τ and <a_(m), b>ℓ·1 from the matrix bracket"""
    g = scenario.algebra
    decomposition = scenario.decomposition
    a_m = decomposition.plus_component(decomposition.basis[a_idx], m)
    b = decomposition.basis[b_idx]
    bracket = scenario.current_combination(g.oracle_bracket(a_m, b), target)
    pairing = g.form(a_m, b) * target.level
    return [bracket, CombinationSeries(target, [(pairing, scenario.identity(target))])]


# -- delta identity -------------------------------------------------------------------------

def check_delta_identity(alpha: Any, window: Optional[Window] = None,
                         report: Optional[CheckReport] = None) -> CheckReport:
    """z0^-1 δ((z1-z2)/z0)((z1-z2)/z0)^α against z1^-1 δ((z0+z2)/z1)((z0+z2)/z1)^-α"""
    alpha = Fraction(alpha)
    report = report or CheckReport('delta_identity', ANCHORS['delta_identity'])
    window = window or Window([(-6, 6)] * 3)
    variables = ('z0', 'z1', 'z2')
    lhs = delta_expand(alpha, window, first='z1', second='z2', sign=-1, bottom='z0', variables=variables)
    rhs = delta_expand(-alpha, window, first='z0', second='z2', sign=1, bottom='z1', variables=variables)
    left, right = dict(lhs.items()), dict(rhs.items())
    zero = Cyclotomic.rational(0)
    for exponents in sorted(set(left) | set(right)):
        a, b = left.get(exponents, zero), right.get(exponents, zero)
        where = {'alpha': str(alpha), 'exponents': [str(e) for e in exponents]}
        report.record(a == b, where, str(a), str(b))
    return report


# -- mode table and bracket reading ----------------------------------------------------------

def _compare_commutators(report: CheckReport, A: OperatorSeries, B: OperatorSeries, m: Sequence[int],
                         cands: Sequence[OperatorSeries], bound: Any, weights: Sequence[Tuple[int, ...]],
                         probes: Sequence[Monomial], where: Dict[str, Any]):
    """[A_(n0, m), B_(q0, p)] w = Σ_j C(n0, j) c^(j)_(n0+q0-j, p+m) w for |n0|, |q0| <= bound"""
    target = A.target
    for n0, q0, p, w in itertools.product(A.modes(bound), B.modes(bound), weights, probes):
        v = basis_vector(w)
        ab_inner = B.mode(q0, p, v)
        ab = A.mode(n0, m, ab_inner.vector)
        ba_inner = A.mode(n0, m, v)
        ba = B.mode(q0, p, ba_inner.vector)
        lhs: Vector = {}
        add_into(lhs, ab.vector)
        add_into(lhs, ba.vector, -ONE)
        rhs: Vector = {}
        valid = ab_inner.valid and ab.valid and ba_inner.valid and ba.valid
        for j, c in enumerate(cands):
            value = c.mode(n0 + q0 - j, tuple(x + y for x, y in zip(p, m)), v)
            valid = valid and value.valid
            add_into(rhs, value.vector, binomial(n0, j))
        if not valid:
            report.skip()
            continue
        report.compare(lhs, rhs, {**where, 'pattern': [str(n0), list(m), str(q0), list(p)],
                                  'w': target.label(w)}, target.vector_label)


def check_mode_table(scenario: Scenario, settings: Optional[CheckSettings] = None,
                     report: Optional[CheckReport] = None) -> CheckReport:
    """a_{0,m}b = [a_(m), b]^τ, a_{1,m}b = <a_(m), b>ℓ·1_W, a_{j,m}b = 0 for j >= 2

    Mode brackets of every pair of currents are read against the table first,
    for |n0|, |q0| <= ``table_bound``; the products follow.
    """
    settings = settings or CheckSettings()
    report = report or CheckReport('mode_table', ANCHORS['mode_table'])
    W = scenario.W
    probes = scenario.probes(W, settings)
    labels = scenario.decomposition.labels
    weights = settings.weights(W.tor.r)
    pairs = list(itertools.product(range(scenario.dim), repeat=2))
    currents = [scenario.current(idx) for idx in range(scenario.dim)]
    expected = {(a_idx, b_idx, m): _table_candidates(scenario, a_idx, b_idx, m, W)
                for (a_idx, b_idx), m in itertools.product(pairs, weights)}
    for (a_idx, b_idx), m in itertools.product(pairs, weights):
        _compare_commutators(report, currents[a_idx], currents[b_idx], m, expected[(a_idx, b_idx, m)],
                             settings.table_bound, weights, probes, {'a': labels[a_idx], 'b': labels[b_idx]})
    for (a_idx, b_idx), m in itertools.product(pairs, weights):
        for j in range(settings.table_depth):
            product = ProductSeries(currents[a_idx], currents[b_idx], j, m, settings.table_depth)
            cands = expected[(a_idx, b_idx, m)]
            _compare_series(report, product, cands[j] if j < len(cands) else None, probes, settings,
                            {'a': labels[a_idx], 'b': labels[b_idx], 'j': j, 'm': list(m)})
    return report


def check_bracket_reading(A: OperatorSeries, B: OperatorSeries,
                          candidates: Callable[[Sequence[int]], List[OperatorSeries]],
                          settings: Optional[CheckSettings] = None, probes: Optional[Sequence[Monomial]] = None,
                          report: Optional[CheckReport] = None) -> CheckReport:
    """Read a_{j,m}b off the commutator pattern

    First confirms [A_(n0, m), B_(q0, p)] = Σ_j C(n0, j) c^(j)_(n0+q0-j, p+m) on the
    window, then that the products A_(j, m)B equal c^(j) and vanish past the last
    candidate. ``candidates(m)`` returns c^(0..k) for the t-index m.
    """
    settings = settings or CheckSettings()
    report = report or CheckReport('bracket_reading', ANCHORS['bracket_reading'])
    target = A.target
    probes = list(probes) if probes is not None else default_probes(target, settings.probe_degree)
    weights = settings.weights(A.r)
    where = {'A': A.label, 'B': B.label}
    for m in weights:
        cands = candidates(m)
        _compare_commutators(report, A, B, m, cands, settings.mode_bound, weights, probes, where)
        k = len(cands) + 2
        for j in range(k):
            product = ProductSeries(A, B, j, m, k)
            _compare_series(report, product, cands[j] if j < len(cands) else None, probes, settings,
                            {**where, 'j': j, 'm': list(m)})
    return report


# -- Y_E definitions ---------------------------------------------------------------------------

def check_ye_definitions(scenario: Scenario, rng: np.random.Generator, settings: Optional[CheckSettings] = None,
                         report: Optional[CheckReport] = None) -> CheckReport:
    """Closed form of the Y_E product against both residue forms on random local pairs

    Pairs are drawn from the closure of the currents, products included, and
    from random same-class combinations of currents.
    """
    settings = settings or CheckSettings()
    report = report or CheckReport('ye_definitions', ANCHORS['ye_definitions'])
    W = scenario.W
    probes = scenario.probes(W, settings)
    window = settings.window(W.tor.r)
    weights = settings.weights(W.tor.r)
    currents = [scenario.current(idx) for idx in range(scenario.dim)]
    caps = ClosureCaps(depth=settings.ye_depth, min_mode=0, t_bound=settings.t_bound,
                       mode_bound=settings.mode_bound, max_members=settings.closure_members,
                       locality_cap=settings.locality_cap)
    pool: List[OperatorSeries] = list(generate_closure(currents, caps, probes).members)
    by_class: Dict[int, List[OperatorSeries]] = {}
    for series in currents:
        by_class.setdefault(series.klass, []).append(series)
    for klass in sorted(by_class):
        members = by_class[klass]
        coeffs = [Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))) for _ in members]
        if any(coeffs):
            pool.append(CombinationSeries(W, list(zip(coeffs, members))))
    firsts = [series for series in pool if series.klass is not None]
    report.details['pool'] = [series.label for series in pool]
    pairs = report.details.setdefault('pairs', [])
    attempts = 0
    while len(pairs) < settings.ye_pairs and attempts < 5 * settings.ye_pairs:
        attempts += 1
        A = firsts[int(rng.integers(len(firsts)))]
        B = pool[int(rng.integers(len(pool)))]
        try:
            k = find_locality_order(A, B, window, probes, settings.locality_cap)
        except (NotLocalError, LocalityWindowError) as e:
            logger.debug(f"Skipping ({A.label}, {B.label}): {e}")
            report.skip()
            continue
        m0 = int(rng.integers(-2, max(k, 1)))
        m = weights[int(rng.integers(len(weights)))]
        pairs.append([A.label, B.label, m0, list(m), k])
        closed = ProductSeries(A, B, m0, m, k, 'closed')
        for method in METHODS[1:]:
            _compare_series(report, closed, ProductSeries(A, B, m0, m, k, method), probes, settings,
                            {'A': A.label, 'B': B.label, 'm0': m0, 'm': list(m), 'method': method})
    return report


# -- Jacobi identities ---------------------------------------------------------------------------

def _delta_coefficients(s: int, N: int, mu: Fraction, top: int, form: str) -> List[Any]:
    """c_j = coefficient of x0^{-1-mu} y0^{mu-j} z0^j in the delta factor of the Jacobi identity"""
    if top < 0:
        return []
    window = Window([(-1 - mu, -1 - mu), (mu - top, mu), (0, top)])
    variables = ('x0', 'y0', 'z0')
    if form == 'homogeneous':
        series = delta_expand(Fraction(-s, N), window, first='x0', second='z0', sign=-1, bottom='y0',
                              variables=variables, denominators=(N, N, 1))
    elif form == 'swapped':
        series = delta_expand(Fraction(s, N), window, first='y0', second='z0', sign=1, bottom='x0',
                              variables=variables, denominators=(N, N, 1))
    else:
        raise ValueError(f"Unknown Jacobi form: {form}")
    return [series.coefficient((-1 - mu, mu - j, j)) for j in range(top + 1)]


def _jacobi(scenario: Scenario, target: TruncatedModule, u: Vector, v: Vector, probes: Sequence[Monomial],
            settings: CheckSettings, form: str, report: CheckReport):
    """Borcherds form of the Jacobi identity, one coefficient per (w, n, mu, q, m, p)

    Σ_i C(n,i)(-1)^i u_(mu+n-i, m) v_(q+i, p-m) w - Σ_i C(n,i)(-1)^(n-i) v_(q+n-i, p-m) u_(mu+i, m) w
      = Σ_j c_j (u_(n+j, m) v)_(mu+q-j, p) w
    """
    source = scenario.V_L
    N = target.N
    s = scenario.vl_class(u) if N > 1 else 0
    if s is None:
        raise ClassError("The first vector of the Jacobi identity must be σ-homogeneous")
    Yu, Yv = scenario.Y(u, target), scenario.Y(v, target)
    Yu_source = scenario.Y(u, source)
    deg_u, deg_v = source.vector_degree(u), source.vector_degree(v)
    weights = settings.weights(target.tor.r)
    deltas: Dict[Tuple[Fraction, int], List[Any]] = {}
    where = {'u': source.vector_label(u), 'v': source.vector_label(v), 'form': form}
    for w in probes:
        w_vec = basis_vector(w)
        deg_w = target.degree(w)
        for n, mu, q, m, p in itertools.product(range(settings.n_min, settings.n_max + 1),
                                                Yu.modes(settings.mode_bound), Yv.modes(settings.mode_bound),
                                                weights, weights):
            lhs: Vector = {}
            valid = True
            top = math.floor(Yv.max_mode(deg_w) - q)
            for i in range(0, (min(top, n) if n >= 0 else top) + 1):
                inner = Yv.mode(q + i, _minus(p, m), w_vec)
                outer = Yu.mode(mu + n - i, m, inner.vector)
                valid = valid and inner.valid and outer.valid
                add_into(lhs, outer.vector, binomial(Fraction(n), i) * _sign(i))
            top = math.floor(Yu.max_mode(deg_w) - mu)
            for i in range(0, (min(top, n) if n >= 0 else top) + 1):
                inner = Yu.mode(mu + i, m, w_vec)
                outer = Yv.mode(q + n - i, _minus(p, m), inner.vector)
                valid = valid and inner.valid and outer.valid
                add_into(lhs, outer.vector, -binomial(Fraction(n), i) * _sign(n - i))
            rhs: Vector = {}
            top = math.floor(deg_u + deg_v - 1 - n)
            key = (mu, top)
            if key not in deltas:
                deltas[key] = _delta_coefficients(s, N, mu, top, form)
            for j, c in enumerate(deltas[key]):
                if not c:
                    continue
                product = Yu_source.mode(n + j, m, v)
                valid = valid and product.valid
                if not product.vector:
                    continue
                value = scenario.Y(product.vector, target).mode(mu + q - j, p, w_vec)
                valid = valid and value.valid
                add_into(rhs, value.vector, c)
            if not valid:
                report.skip()
                continue
            report.compare(lhs, rhs, {**where, 'w': target.label(w), 'n': n, 'mu': str(mu), 'q': str(q),
                                      'm': list(m), 'p': list(p)}, target.vector_label)


def check_twisted_jacobi(scenario: Scenario, u: Vector, v: Vector, probes: Optional[Sequence[Monomial]] = None,
                         settings: Optional[CheckSettings] = None, form: str = 'homogeneous',
                         report: Optional[CheckReport] = None) -> CheckReport:
    """Twisted Jacobi identity of Y_W for u of class s, acting on the probe vectors of W"""
    settings = settings or CheckSettings()
    report = report or CheckReport('twisted_jacobi', ANCHORS['twisted_jacobi'])
    probes = list(probes) if probes is not None else scenario.probes(scenario.W, settings)
    _jacobi(scenario, scenario.W, u, v, probes, settings, form, report)
    return report


def check_jacobi(scenario: Scenario, u: Vector, v: Vector, probes: Optional[Sequence[Monomial]] = None,
                 settings: Optional[CheckSettings] = None, form: str = 'homogeneous',
                 report: Optional[CheckReport] = None) -> CheckReport:
    """Untwisted Jacobi identity of V_L acting on itself"""
    settings = settings or CheckSettings()
    report = report or CheckReport('jacobi', ANCHORS['jacobi'])
    probes = list(probes) if probes is not None else scenario.probes(scenario.V_L, settings)
    _jacobi(scenario, scenario.V_L, u, v, probes, settings, form, report)
    return report


# -- weak commutativity and associativity ----------------------------------------------------------

def check_weak_commutativity(A: OperatorSeries, B: OperatorSeries, settings: Optional[CheckSettings] = None,
                             probes: Optional[Sequence[Monomial]] = None, bound: Optional[int] = None,
                             report: Optional[CheckReport] = None) -> CheckReport:
    settings = settings or CheckSettings()
    report = report or CheckReport('weak_commutativity', ANCHORS['weak_commutativity'])
    probes = list(probes) if probes is not None else default_probes(A.target, settings.probe_degree)
    window = settings.window(A.r)
    where = {'A': A.label, 'B': B.label}
    try:
        k = find_locality_order(A, B, window, probes, settings.locality_cap)
    except NotLocalError as e:
        report.record(False, where, str(e))
        return report
    report.details.setdefault('orders', []).append([A.label, B.label, k])
    checked, defects = locality_defects(A, B, k, window, probes)
    report.checked += checked - len(defects)
    for w, a, b, m, n in defects:
        report.record(False, {**where, 'k': k, 'modes': [str(a), list(m), str(b), list(n)],
                              'w': A.target.label(w)})
    if bound is not None:
        report.record(k <= bound, {**where, 'order': k}, k, f"<= {bound}")
    return report


def associativity_witness(Yu: OperatorSeries, w: Monomial, weights: Sequence[Tuple[int, ...]]) -> int:
    """Least ℓ >= 0 with u_(n0, m) w = 0 for every n0 >= ℓ + s/N, read off the supported modes"""
    shift = Fraction(Yu.klass or 0, Yu.N)
    top = Yu.max_mode(Yu.target.degree(w))
    ell = 0
    n0 = math.floor(top - shift) + shift
    while n0 >= shift:
        values = [Yu.mode(n0, m, basis_vector(w)) for m in weights]
        if any(value.vector or not value.valid for value in values):
            ell = math.floor(n0 - shift) + 1
            break
        n0 -= 1
    return ell


def check_weak_associativity(scenario: Scenario, u: Vector, v: Vector, probes: Optional[Sequence[Monomial]] = None,
                             settings: Optional[CheckSettings] = None,
                             report: Optional[CheckReport] = None) -> CheckReport:
    """Both expansions of (z0+y0)^{ℓ+s/N} against the module, coefficient of z0^a y0^b

    Σ_i C(a+i, i) u_(ℓ+s/N-1-a-i, m) v_(i-1-b, p-m) w
      = Σ_j C(ℓ+s/N, j) (u_(j-a-1, m) v)_(ℓ+s/N-j-1-b, p) w
    """
    settings = settings or CheckSettings()
    report = report or CheckReport('weak_associativity', ANCHORS['weak_associativity'])
    W, V = scenario.W, scenario.V_L
    probes = list(probes) if probes is not None else scenario.probes(W, settings)
    Yu, Yv, Yu_source = scenario.Y(u), scenario.Y(v), scenario.Y(u, V)
    if Yu.klass is None:
        raise ClassError("Weak associativity needs a σ-homogeneous u")
    shift = Fraction(Yu.klass, W.N)
    deg_u, deg_v = V.vector_degree(u), V.vector_degree(v)
    weights = settings.weights(W.tor.r)
    where = {'u': V.vector_label(u), 'v': V.vector_label(v)}
    witnesses = report.details.setdefault('witnesses', [])
    for w in probes:
        w_vec = basis_vector(w)
        ell = associativity_witness(Yu, w, weights)
        witnesses.append([where['u'], W.label(w), ell])
        power = ell + shift
        deg_w = W.degree(w)
        for a, b, m, p in itertools.product(range(settings.n_min - 1, settings.n_max + 1),
                                            _fractions(W.N, settings.mode_bound), weights, weights):
            lhs: Vector = {}
            valid = True
            for i in range(0, math.floor(Yv.max_mode(deg_w) + 1 + b) + 1):
                c = binomial(Fraction(a + i), i)
                if not c:
                    continue
                inner = Yv.mode(i - 1 - b, _minus(p, m), w_vec)
                outer = Yu.mode(power - 1 - a - i, m, inner.vector)
                valid = valid and inner.valid and outer.valid
                add_into(lhs, outer.vector, c)
            rhs: Vector = {}
            for j in range(0, math.floor(a + deg_u + deg_v) + 1):
                product = Yu_source.mode(j - a - 1, m, v)
                valid = valid and product.valid
                if not product.vector:
                    continue
                value = scenario.Y(product.vector).mode(power - j - 1 - b, p, w_vec)
                valid = valid and value.valid
                add_into(rhs, value.vector, binomial(power, j))
            if not valid:
                report.skip()
                continue
            report.compare(lhs, rhs, {**where, 'w': W.label(w), 'ell': ell, 'a': a, 'b': str(b),
                                      'm': list(m), 'p': list(p)}, W.vector_label)
    return report


# -- iterate formula ---------------------------------------------------------------------------------

def check_iterate_formula(scenario: Scenario, u: Vector, v: Vector, probes: Optional[Sequence[Monomial]] = None,
                          settings: Optional[CheckSettings] = None,
                          report: Optional[CheckReport] = None) -> CheckReport:
    """Y_W(u_(n, m) v) computed through V_L against Y_W(u)_(n, m) Y_W(v) in all three product forms"""
    settings = settings or CheckSettings()
    report = report or CheckReport('iterate_formula', ANCHORS['iterate_formula'])
    W, V = scenario.W, scenario.V_L
    probes = list(probes) if probes is not None else scenario.probes(W, settings)
    Yu, Yv, Yu_source = scenario.Y(u), scenario.Y(v), scenario.Y(u, V)
    k = math.floor(V.vector_degree(u) + V.vector_degree(v))
    where = {'u': V.vector_label(u), 'v': V.vector_label(v)}
    for n, m in itertools.product(range(settings.n_min, settings.n_max + 1), settings.weights(W.tor.r)):
        product = Yu_source.mode(n, m, v)
        if not product.valid:
            report.skip()
            continue
        iterate = scenario.Y(product.vector)
        for method in METHODS:
            _compare_series(report, iterate, ProductSeries(Yu, Yv, n, m, k, method), probes, settings,
                            {**where, 'n': n, 'm': list(m), 'method': method})
    return report


# -- automorphisms -----------------------------------------------------------------------------------

def _small_basis(target: TruncatedModule, settings: CheckSettings, degree: Any = 1) -> List[Monomial]:
    return [mono for mono in target.basis()
            if target.degree(mono) <= Fraction(degree)
            and all(abs(x) <= settings.t_bound for _, m, _ in mono[0] for x in m)]


def _power_is_identity(lift, target: TruncatedModule, report: CheckReport, where: Dict[str, Any]):
    step = lift.matrix()
    power = step
    for _ in range(lift.order - 1):
        power = step @ power
    identity = OperatorMatrix({mono: basis_vector(mono) for mono in target.basis()})
    report.record(power == identity, {**where, 'power': lift.order}, 'σ̃^N', 'identity')


def check_va_automorphism(scenario: Scenario, index: int, rng: np.random.Generator,
                          settings: Optional[CheckSettings] = None,
                          report: Optional[CheckReport] = None) -> CheckReport:
    """σ̃_i(1) = 1, σ̃_i(u_(m0, m) v) = (σ̃_i u)_(m0, m) σ̃_i v, σ̃_i^{N_i} = 1 on V_L"""
    settings = settings or CheckSettings()
    report = report or CheckReport('va_automorphism', ANCHORS['va_automorphism'])
    V = scenario.V_L
    lift = lift_automorphism(V, index)
    vacuum = basis_vector(VACUUM)
    report.compare(lift.apply(vacuum).vector, vacuum, {'index': index, 'vector': '1'}, V.vector_label)
    small = _small_basis(V, settings)
    weights = settings.weights(V.tor.r)
    collected = attempts = 0
    while collected < settings.samples and attempts < 4 * settings.samples:
        attempts += 1
        u = basis_vector(small[int(rng.integers(len(small)))])
        v = basis_vector(small[int(rng.integers(len(small)))])
        m0 = int(rng.integers(-2, 2))
        m = weights[int(rng.integers(len(weights)))]
        inner = scenario.Y(u, V).mode(m0, m, v)
        left = lift.apply(inner.vector)
        su, sv = lift.apply(u), lift.apply(v)
        right = scenario.Y(su.vector, V).mode(m0, m, sv.vector)
        if not (inner.valid and left.valid and su.valid and sv.valid and right.valid):
            report.skip()
            continue
        collected += 1
        report.compare(left.vector, right.vector, {'index': index, 'u': V.vector_label(u), 'v': V.vector_label(v),
                                                   'm0': m0, 'm': list(m)}, V.vector_label)
    report.details.setdefault('sampled_modes', {})[str(index)] = collected
    _power_is_identity(lift, V, report, {'index': index})
    return report


def check_automorphism_lift(scenario: Scenario, target: TruncatedModule, index: int, rng: np.random.Generator,
                            settings: Optional[CheckSettings] = None,
                            report: Optional[CheckReport] = None) -> CheckReport:
    """σ̃_i(x·v) = σ_i(x)·σ̃_i(v) for toroidal generators x, and σ̃_i^{N_i} = 1"""
    settings = settings or CheckSettings()
    report = report or CheckReport('automorphism_lift', ANCHORS['automorphism_lift'])
    lift = lift_automorphism(target, index)
    tor = target.tor
    d = target.module.d
    top = math.floor(settings.mode_bound * d)
    gens = [(p, m, idx) for p in range(-top, top + 1) for m in settings.weights(tor.r)
            for idx in range(len(tor.decomposition.basis)) if target.in_subalgebra((p, m, idx))]
    small = _small_basis(target, settings)
    for _ in range(settings.samples):
        p, m, idx = gens[int(rng.integers(len(gens)))]
        v = basis_vector(small[int(rng.integers(len(small)))])
        acted = target.act(tor.generator(idx, p, m), v)
        left = lift.apply(acted.vector)
        sv = lift.apply(v)
        right = target.act(lift.image_of_generator((p, m, idx)), sv.vector)
        if not (acted.valid and left.valid and sv.valid and right.valid):
            report.skip()
            continue
        report.compare(left.vector, right.vector,
                       {'module': target.name, 'index': index, 'x': tor.describe(tor.generator(idx, p, m)),
                        'v': target.vector_label(v)}, target.vector_label)
    _power_is_identity(lift, target, report, {'module': target.name, 'index': index})
    return report


def check_equivariance(scenario: Scenario, v: Vector, index: int, settings: Optional[CheckSettings] = None,
                       probes: Optional[Sequence[Monomial]] = None,
                       report: Optional[CheckReport] = None) -> CheckReport:
    """Y_W(σ̃_i v) against Y_W(v) with x_i -> ω_{N_i}^{-1} x_i (σ on the x0 side for i = 0)"""
    settings = settings or CheckSettings()
    report = report or CheckReport('equivariance', ANCHORS['equivariance'])
    W, V = scenario.W, scenario.V_L
    probes = list(probes) if probes is not None else scenario.probes(W, settings)
    window = settings.window(W.tor.r)
    image = lift_automorphism(V, index).apply(v)
    if not image.valid:
        report.skip()
        return report
    left = scenario.Y(image.vector).materialize(window, probes)
    if index == 0:
        right = sigma(scenario.Y(v)).materialize(window, probes)
    else:
        zeta = Cyclotomic.root_of_unity(scenario.family.orders[index], -1)
        right = scenario.Y(v).materialize(window, probes).twist(f'x{index}', zeta)
    _compare_materialized(report, left, right, probes, W, {'index': index, 'v': V.vector_label(v)})
    return report


# -- closure -----------------------------------------------------------------------------------------

def check_closure(scenario: Scenario, settings: Optional[CheckSettings] = None,
                  report: Optional[CheckReport] = None) -> CheckReport:
    """The currents generate a closed local set containing 1_W, and products obey the class law"""
    settings = settings or CheckSettings()
    report = report or CheckReport('closure', ANCHORS['closure'])
    W = scenario.W
    probes = scenario.probes(W, settings)
    currents = [scenario.current(idx) for idx in range(scenario.dim)]
    caps = ClosureCaps(depth=settings.closure_depth, min_mode=0, t_bound=settings.t_bound,
                       mode_bound=settings.mode_bound, max_members=settings.closure_members,
                       locality_cap=settings.locality_cap)
    closure = generate_closure(currents, caps, probes)
    report.details['closure'] = closure.to_json()
    report.record(isinstance(closure.members[0], IdentitySeries), {'property': 'contains 1_W'})
    report.record(closure.closed, {'property': 'closed within caps'}, closure.unclosed, [])
    weights = settings.weights(W.tor.r)
    window = settings.window(W.tor.r)
    for A, B in itertools.product(currents, repeat=2):
        k = find_locality_order(A, B, window, probes, settings.locality_cap)
        for m0, m in itertools.product(range(0, k), weights):
            product = ProductSeries(A, B, m0, m, k)
            for n0, p, w in itertools.product(_fractions(W.N, settings.mode_bound), weights, probes):
                if product.supports(n0):
                    continue
                value = product.evaluate(n0, p, basis_vector(w))
                if not value.valid:
                    report.skip()
                    continue
                report.compare(value.vector, {}, {'product': product.label, 'n0': str(n0), 'p': list(p),
                                                  'w': W.label(w)}, W.vector_label)
    return report


# -- negative controls ------------------------------------------------------------------------------

def check_negative_controls(scenario: Scenario, rng: np.random.Generator, settings: Optional[CheckSettings] = None,
                            report: Optional[CheckReport] = None) -> CheckReport:
    """Every check in NEGATIVE_CONTROL_CHECKS must report a mismatch once a structure constant is shifted by +1

    An exception inside a mutant run is recorded as a failure of its own, never as a detection.
    """
    settings = settings or CheckSettings()
    report = report or CheckReport('negative_controls', ANCHORS['negative_controls'])
    n = scenario.algebra.dim
    constants = list(itertools.product(range(n), repeat=3))
    if settings.mutation_samples is not None and settings.mutation_samples < len(constants):
        picks = sorted(int(i) for i in rng.choice(len(constants), size=settings.mutation_samples, replace=False))
        constants = [constants[i] for i in picks]
    strict = replace(settings, fail_fast=True, mutation_samples=0)
    labels = scenario.algebra.labels
    for i, j, k in constants:
        mutant = scenario.mutant(i, j, k)
        for name in NEGATIVE_CONTROL_CHECKS:
            outcome = run_check(name, mutant, strict, report.seed or 0)
            where = {'constant': f"[{labels[i]}, {labels[j]}] += {labels[k]}", 'check': name}
            crashes = [f for f in outcome.failures if 'exception' in f['at']]
            mismatches = outcome.failure_count - len(crashes)
            for crash in crashes:
                report.record(False, {**where, 'exception': crash['at']['exception']}, crash['lhs'], 'no exception')
            report.record(outcome.error is None and mismatches > 0, where,
                          f"{mismatches} mismatches" + (f" ({outcome.error})" if outcome.error else ''),
                          'at least one mismatch')
    return report


# -- registry -----------------------------------------------------------------------------------

ANCHORS = {
    'delta_identity': "z0^-1 δ((z1-z2)/z0)((z1-z2)/z0)^α = z1^-1 δ((z0+z2)/z1)((z0+z2)/z1)^-α",
    'mode_commutator': "[a^τ(p0,m), b^τ(q0,q)] from generating-function coefficients of the τ bracket",
    'ye_definitions': "Y_E product: closed form = residue form = swapped residue form",
    'mode_table': "a_{0,m}b = [a_(m),b]^τ, a_{1,m}b = <a_(m),b>ℓ 1_W, a_{j,m}b = 0 (j >= 2)",
    'twisted_jacobi': "σ-twisted Jacobi identity of Y_W in homogeneous single-delta form",
    'jacobi': "Jacobi identity of Y on V_L(ℓ,0)",
    'weak_commutativity': "(x0-y0)^k [Y_W(u;x0,x), Y_W(v;y0,y)] = 0",
    'weak_associativity': "(z0+y0)^{ℓ+s/N} Y_W(u;z0+y0)Y_W(v;y0)w = (y0+z0)^{ℓ+s/N} Y_W(Y(u;z0)v;y0)w",
    'iterate_formula': "Y_W(u_(n,m)v) = Y_W(u)_(n,m)Y_W(v) through the twisted iterate formula",
    'automorphism_lift': "σ̃_i(x·v) = σ_i(x)·σ̃_i(v) and σ̃_i^{N_i} = 1",
    'va_automorphism': "σ̃(1) = 1, σ̃(u_(m0,m)v) = (σ̃u)_(m0,m)σ̃v",
    'equivariance': "Y_W(σ_i v; x0, x) = Y_W(v; x0, x)|_{x_i -> ω_i^-1 x_i}",
    'bracket_reading': "a_{j,m}b read off the commutator pattern on a faithful module",
    'closure': "closure of the currents under Y_E products is local, graded and contains 1_W",
    'negative_controls': "perturbed structure constants are detected",
}


@dataclass(frozen=True)
class RegisteredCheck:
    name: str
    anchor: str
    run: Callable[[Scenario, CheckSettings, CheckReport, np.random.Generator], None]


CHECKS: Dict[str, RegisteredCheck] = {}


def register(name: str):
    def wrap(fn):
        CHECKS[name] = RegisteredCheck(name, ANCHORS[name], fn)
        return fn
    return wrap


@register('delta_identity')
def _run_delta_identity(scenario, settings, report, rng):
    window = Window([(-settings.delta_bound, settings.delta_bound)] * 3)
    for alpha in settings.delta_alphas:
        check_delta_identity(alpha, window, report)


@register('mode_commutator')
def _run_mode_commutator(scenario, settings, report, rng):
    tor = scenario.tor
    window = Window([(-settings.commutator_bound, settings.commutator_bound)]
                    + [(-settings.commutator_t_bound, settings.commutator_t_bound)] * tor.r)
    basis, labels = scenario.decomposition.basis, scenario.decomposition.labels
    for i, j in itertools.product(range(scenario.dim), repeat=2):
        result = check_mode_commutator(tor, basis[i], basis[j], window)
        report.checked += result.checked - len(result.failures)
        for failure in result.failures:
            report.record(False, {'pair': [labels[i], labels[j]], 'modes': failure['modes']},
                          failure.get('lhs'), failure.get('rhs'))


@register('ye_definitions')
def _run_ye_definitions(scenario, settings, report, rng):
    check_ye_definitions(scenario, rng, settings, report)


@register('mode_table')
def _run_mode_table(scenario, settings, report, rng):
    check_mode_table(scenario, settings, report)


@register('twisted_jacobi')
def _run_twisted_jacobi(scenario, settings, report, rng):
    probes = scenario.probes(scenario.W, settings)
    for form in JACOBI_FORMS:
        for u, v in itertools.product([basis_vector(VACUUM)] + scenario.generators(), scenario.generators()):
            check_twisted_jacobi(scenario, u, v, probes, settings, form, report)


@register('jacobi')
def _run_jacobi(scenario, settings, report, rng):
    probes = scenario.probes(scenario.V_L, settings)
    for u, v in itertools.product(scenario.generators(), repeat=2):
        check_jacobi(scenario, u, v, probes, settings, 'homogeneous', report)


@register('weak_commutativity')
def _run_weak_commutativity(scenario, settings, report, rng):
    probes = scenario.probes(scenario.W, settings)
    series = [scenario.identity()] + [scenario.current(idx) for idx in range(scenario.dim)]
    for A, B in itertools.product(series, repeat=2):
        check_weak_commutativity(A, B, settings, probes, settings.locality_bound, report)


@register('weak_associativity')
def _run_weak_associativity(scenario, settings, report, rng):
    probes = scenario.probes(scenario.W, settings)
    vectors = [basis_vector(VACUUM)] + scenario.generators()
    for u, v in itertools.product(vectors, repeat=2):
        check_weak_associativity(scenario, u, v, probes, settings, report)


@register('iterate_formula')
def _run_iterate_formula(scenario, settings, report, rng):
    probes = scenario.probes(scenario.W, settings)
    for u, v in itertools.product([basis_vector(VACUUM)] + scenario.generators(), scenario.generators()):
        check_iterate_formula(scenario, u, v, probes, settings, report)


@register('automorphism_lift')
def _run_automorphism_lift(scenario, settings, report, rng):
    for index in range(len(scenario.family.orders)):
        check_automorphism_lift(scenario, scenario.V_L, index, rng, settings, report)
        if index > 0:
            check_automorphism_lift(scenario, scenario.W, index, rng, settings, report)


@register('va_automorphism')
def _run_va_automorphism(scenario, settings, report, rng):
    for index in range(len(scenario.family.orders)):
        check_va_automorphism(scenario, index, rng, settings, report)


@register('equivariance')
def _run_equivariance(scenario, settings, report, rng):
    V = scenario.V_L
    probes = scenario.probes(scenario.W, settings)
    vectors = [mono for mono in _small_basis(V, settings, settings.equivariance_degree)
               if len(mono[0]) + (mono[1] != VACUUM_TOP) <= settings.equivariance_depth]
    report.details['vectors'] = len(vectors)
    for index in range(len(scenario.family.orders)):
        for mono in vectors:
            check_equivariance(scenario, basis_vector(mono), index, settings, probes, report)


@register('bracket_reading')
def _run_bracket_reading(scenario, settings, report, rng):
    W = scenario.W
    probes = scenario.probes(W, settings)
    for a_idx, b_idx in itertools.product(range(scenario.dim), repeat=2):
        check_bracket_reading(scenario.current(a_idx), scenario.current(b_idx),
                              lambda m, a=a_idx, b=b_idx: _table_candidates(scenario, a, b, m, W),
                              settings, probes, report)
    for idx in range(scenario.dim):
        check_bracket_reading(scenario.identity(), scenario.current(idx), lambda m: [], settings, probes, report)


@register('closure')
def _run_closure(scenario, settings, report, rng):
    check_closure(scenario, settings, report)


@register('negative_controls')
def _run_negative_controls(scenario, settings, report, rng):
    check_negative_controls(scenario, rng, settings, report)


def run_check(name: str, scenario: Scenario, settings: Optional[CheckSettings] = None, seed: int = 0) -> CheckReport:
    """Run one registered check; lower-layer errors become failure entries"""
    if name not in CHECKS:
        raise ValueError(f"Unknown check: {name}")
    settings = settings or CheckSettings()
    check = CHECKS[name]
    report = CheckReport(name, check.anchor, scenario.fingerprint, seed, fail_fast=settings.fail_fast)
    rng = np.random.default_rng(seed)
    try:
        check.run(scenario, settings, report, rng)
        report.require_nonvacuous()
    except _StopCheck:
        pass
    except VacuousCheckError as e:
        report.error = str(e)
    except (ClassError, NotLocalError, LocalityWindowError, ValueError) as e:
        report.failures.append({'at': {'exception': type(e).__name__}, 'lhs': str(e), 'rhs': None})
    status = "passed" if report.passed else "FAILED"
    logger.info(f"{name} on {scenario.name}: {status} ({report.checked} checked, {report.skipped} skipped, "
                f"{report.failure_count} failures)")
    return report


def run_checks(names: Sequence[str], scenario: Scenario, settings: Optional[CheckSettings] = None,
               seed: int = 0) -> List[CheckReport]:
    return [run_check(name, scenario, settings, seed) for name in names]
