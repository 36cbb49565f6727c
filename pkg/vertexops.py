"""
Vertex Operators for the Toroidal Workbench
Lazy operator-valued series on a truncated module, locality, the Y_E product
of local pairs, the twisted vertex operator map and closure generation
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from formal import FormalSeries, Window
from repn import (Monomial, OperatorMatrix, TruncatedModule, Vector, VACUUM_TOP,
                  add_into, basis_vector)
from scalars import ONE, Cyclotomic, EchelonBasis, binomial

logger = logging.getLogger('ToroidalWorkbench.VertexOps')

DEFAULT_LOCALITY_CAP = 8
METHODS = ('closed', 'residue', 'residue_swapped')

Weight = Tuple[int, ...]


class ClassError(ValueError):
    """Raised when a product needs a σ-homogeneous first factor"""


class NotLocalError(ValueError):
    pass


class LocalityWindowError(ValueError):
    pass


@dataclass
class ModeValue:
    vector: Vector
    valid: bool = True


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _shift(a: Sequence[int], b: Sequence[int], sign: int = 1) -> Weight:
    return tuple(x + sign * y for x, y in zip(a, b))


class OperatorSeries:
    """Σ A_(n0, n) x0^{-n0-1} x^{-n}, evaluated mode by mode on demand

    ``klass`` is s with modes n0 in s/N + Z (None when mixed); a mode n0
    shifts degree by ``weight`` - n0 - 1.
    """

    def __init__(self, target: TruncatedModule, klass: Optional[int], weight: Any, label: str):
        self.target = target
        self.N = target.N
        self.r = target.tor.r
        self.klass = None if klass is None else klass % self.N
        self.weight = Fraction(weight)
        self.label = label
        self._cache: Dict[Tuple[Fraction, Weight, Monomial], ModeValue] = {}

    def supports(self, n0: Fraction) -> bool:
        scaled = n0 * self.N
        if scaled.denominator != 1:
            return False
        return self.klass is None or (int(scaled) - self.klass) % self.N == 0

    def max_mode(self, degree: Fraction) -> Fraction:
        return degree + self.weight - 1

    def mode(self, n0: Any, n: Sequence[int], v: Vector) -> ModeValue:
        n0, n = Fraction(n0), tuple(n)
        if not self.supports(n0):
            return ModeValue({}, True)
        total: Vector = {}
        valid = True
        for mono, c in v.items():
            value = self.mode_monomial(n0, n, mono)
            valid = valid and value.valid
            add_into(total, value.vector, c)
        return ModeValue(total, valid)

    def mode_monomial(self, n0: Fraction, n: Weight, mono: Monomial) -> ModeValue:
        key = (n0, n, mono)
        value = self._cache.get(key)
        if value is None:
            if n0 > self.max_mode(self.target.degree(mono)):
                value = ModeValue({}, True)
            else:
                value = self._compute(n0, n, mono)
            self._cache[key] = value
        return value

    def evaluate(self, n0: Any, n: Sequence[int], v: Vector) -> ModeValue:
        """Like mode, without the class filter on n0"""
        n0, n = Fraction(n0), tuple(n)
        total: Vector = {}
        valid = True
        for mono, c in v.items():
            if n0 > self.max_mode(self.target.degree(mono)):
                continue
            value = self._compute(n0, n, mono)
            valid = valid and value.valid
            add_into(total, value.vector, c)
        return ModeValue(total, valid)

    def _compute(self, n0: Fraction, n: Weight, mono: Monomial) -> ModeValue:
        raise NotImplementedError

    def modes(self, bound: Any) -> List[Fraction]:
        """Supported n0 with |n0| <= bound"""
        top = int(Fraction(bound) * self.N)
        return [Fraction(k, self.N) for k in range(-top, top + 1) if self.supports(Fraction(k, self.N))]

    def materialize(self, window: Window, probes: Sequence[Monomial]) -> FormalSeries:
        """Coefficients on the window as sparse matrices over the probe vectors"""
        series = FormalSeries.toroidal(self.N, self.r, window, zero=OperatorMatrix())
        lo, hi = window.bounds[0]
        exps0 = [Fraction(k, self.N) for k in range(math.ceil(lo * self.N), math.floor(hi * self.N) + 1)]
        boxes = [range(math.ceil(b_lo), math.floor(b_hi) + 1) for b_lo, b_hi in window.bounds[1:]]
        for e0 in exps0:
            n0 = -e0 - 1
            if not self.supports(n0):
                continue
            for e in itertools.product(*boxes):
                n = tuple(-x for x in e)
                coeff = OperatorMatrix()
                for probe in probes:
                    value = self.mode(n0, n, basis_vector(probe))
                    if value.vector:
                        coeff.columns[probe] = value.vector
                    if not value.valid:
                        coeff.invalid.add(probe)
                if coeff.invalid:
                    series.truncated = True
                if coeff or coeff.invalid:
                    series.terms[series._scaled((e0,) + e)] = coeff
        return series

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"


class IdentitySeries(OperatorSeries):
    """1_W: the only nonzero mode is n0 = -1, n = 0"""

    def __init__(self, target: TruncatedModule):
        super().__init__(target, 0, 0, '1')

    def _compute(self, n0, n, mono):
        if n0 == -1 and not any(n):
            return ModeValue({mono: ONE}, True)
        return ModeValue({}, True)


class CurrentSeries(OperatorSeries):
    """a^τ(x0, x) on W, or a^L(x0, x) on V_L, for an eigenbasis vector a"""

    def __init__(self, target: TruncatedModule, idx: int):
        residue = target.tor.decomposition.residues[idx]
        klass = residue[0] if target.subalgebra == 'tau' else 0
        super().__init__(target, klass, 1, target.tor.labels[idx])
        self.idx = idx

    def _compute(self, n0, n, mono):
        p = n0 * self.target.module.d
        if p.denominator != 1:
            return ModeValue({}, True)
        gen = (int(p), n, self.idx)
        if not self.target.in_subalgebra(gen):
            return ModeValue({}, True)
        result = self.target.act(self.target.tor.generator(self.idx, int(p), n), {mono: ONE})
        return ModeValue(result.vector, result.valid)


class CombinationSeries(OperatorSeries):
    """Σ c_i S_i"""

    def __init__(self, target: TruncatedModule, terms: Sequence[Tuple[Any, OperatorSeries]]):
        self.terms = [(Cyclotomic.coerce(c), s) for c, s in terms if c]
        classes = {s.klass for _, s in self.terms}
        klass = classes.pop() if len(classes) == 1 else (0 if not classes else None)
        weight = max((s.weight for _, s in self.terms), default=Fraction(0))
        label = " + ".join(f"{c}*{s.label}" for c, s in self.terms) or '0'
        super().__init__(target, klass, weight, label)

    def supports(self, n0: Fraction) -> bool:
        return any(s.supports(n0) for _, s in self.terms) if self.terms else False

    def _compute(self, n0, n, mono):
        total: Vector = {}
        valid = True
        for c, s in self.terms:
            value = s.mode(n0, n, {mono: ONE})
            valid = valid and value.valid
            add_into(total, value.vector, c)
        return ModeValue(total, valid)


class ScaledSeries(CombinationSeries):
    """c · S"""

    def __init__(self, target: TruncatedModule, c: Any, series: OperatorSeries):
        super().__init__(target, [(c, series)])
        self.klass = series.klass
        self.weight = series.weight


class ProductSeries(OperatorSeries):
    """Y_E product A_(m0, m) B of a local pair of locality order k

    Three evaluators:
    closed           z0^k (y0+z0)^{j/N} Y_E(A, z0)B = [(x0-y0)^k x0^{j/N} A(x0)B(y0)] at x0 = y0+z0
    residue          Res_{x0} ((x0-z0)/y0)^{j/N} (δ-weighted A B minus δ-weighted B A)
    residue_swapped  Res_{x0} ((y0+z0)/x0)^{-j/N} (same two terms)
    A's t-index is m and B's t-index is p - m for the result mode p.
    """

    def __init__(self, A: OperatorSeries, B: OperatorSeries, m0: int, m: Sequence[int], k: int,
                 method: str = 'closed'):
        if A.klass is None:
            raise ClassError(f"First factor {A.label} is not σ-homogeneous")
        if A.target is not B.target:
            raise ValueError("Factors act on different modules")
        if method not in METHODS:
            raise ValueError(f"Unknown product method: {method}")
        klass = None if B.klass is None else A.klass + B.klass
        label = f"({A.label})_({m0};{','.join(map(str, m))})({B.label})"
        super().__init__(A.target, klass, A.weight + B.weight - m0 - 1, label)
        self.A, self.B = A, B
        self.m0, self.m, self.k = int(m0), tuple(m), int(k)
        self.jN = Fraction(A.klass, self.N)
        self.method = method
        self._F: Dict[Tuple[int, Fraction, Weight, Monomial], ModeValue] = {}

    def supports(self, n0: Fraction) -> bool:
        if self.klass is None:
            return (n0 * self.N).denominator == 1
        return super().supports(n0)

    def _compute(self, p0, p, mono):
        if self.m0 >= self.k:
            return ModeValue({}, True)
        if self.method == 'closed':
            return self._closed(p0, p, mono)
        if self.method == 'residue':
            return self._residue(p0, p, mono)
        return self._residue_swapped(p0, p, mono)

    def _AB(self, a: Fraction, b: Fraction, p: Weight, mono: Monomial) -> ModeValue:
        inner = self.B.mode(b, _shift(p, self.m, -1), {mono: ONE})
        if not inner.vector:
            return inner
        outer = self.A.mode(a, self.m, inner.vector)
        return ModeValue(outer.vector, inner.valid and outer.valid)

    def _BA(self, b: Fraction, a: Fraction, p: Weight, mono: Monomial) -> ModeValue:
        inner = self.A.mode(a, self.m, {mono: ONE})
        if not inner.vector:
            return inner
        outer = self.B.mode(b, _shift(p, self.m, -1), inner.vector)
        return ModeValue(outer.vector, inner.valid and outer.valid)

    # -- closed form ------------------------------------------------------------------

    def _closed(self, p0, p, mono):
        k, m0, jN = self.k, self.m0, self.jN
        deg = self.target.degree(mono)
        total: Vector = {}
        valid = True
        for t in range(0, k - m0):
            i = k - m0 - 1 - t
            g = -p0 - 1 + jN + t
            e_min = math.ceil(jN - deg - self.A.weight)
            e_max = math.floor(g + i + deg + self.B.weight)
            for e in range(e_min, e_max + 1):
                c = binomial(Fraction(e), i)
                if not c:
                    continue
                value = self._closed_F(e, g + i - e, p, mono)
                valid = valid and value.valid
                add_into(total, value.vector, binomial(-jN, t) * c)
        return ModeValue(total, valid)

    def _closed_F(self, e: int, f: Fraction, p: Weight, mono: Monomial) -> ModeValue:
        """Coefficient of x0^e y0^f in (x0-y0)^k x0^{j/N} A(x0) B(y0) w"""
        key = (e, f, p, mono)
        value = self._F.get(key)
        if value is None:
            total: Vector = {}
            valid = True
            for l in range(self.k + 1):
                term = self._AB(self.k - l + self.jN - 1 - e, l - 1 - f, p, mono)
                valid = valid and term.valid
                add_into(total, term.vector, binomial(Fraction(self.k), l) * _sign(l))
            value = ModeValue(total, valid)
            self._F[key] = value
        return value

    # -- residue forms ------------------------------------------------------------------

    def _residue(self, p0, p, mono):
        k, m0, jN = self.k, self.m0, self.jN
        deg = self.target.degree(mono)
        total: Vector = {}
        valid = True
        for i in range(0, k - m0):
            n = m0 + i
            outer = binomial(jN, i) * _sign(i)
            # B acts first: B_{p0+l-j/N} w vanishes once its mode passes deg w + wt B - 1
            l_top = math.floor(deg + self.B.weight - 1 - p0 + jN)
            for l in range(0, (min(l_top, n) if n >= 0 else l_top) + 1):
                term = self._AB(jN + m0 - l, p0 + l - jN, p, mono)
                valid = valid and term.valid
                add_into(total, term.vector, outer * binomial(Fraction(n), l) * _sign(l))
            l_top = math.floor(deg + self.A.weight - 1 - jN + i)
            for l in range(0, (min(l_top, n) if n >= 0 else l_top) + 1):
                term = self._BA(p0 + n - l - jN, jN - i + l, p, mono)
                valid = valid and term.valid
                add_into(total, term.vector, -outer * binomial(Fraction(n), l) * _sign(n - l))
        return ModeValue(total, valid)

    def _residue_swapped(self, p0, p, mono):
        k, m0, jN = self.k, self.m0, self.jN
        deg = self.target.degree(mono)
        total: Vector = {}
        valid = True
        for i in range(0, k - m0):
            n = m0 + i
            outer = binomial(-jN, i)
            l_top = math.floor(deg + self.B.weight - 1 - p0 + i + jN)
            for l in range(0, (min(l_top, n) if n >= 0 else l_top) + 1):
                term = self._AB(jN + n - l, p0 + l - i - jN, p, mono)
                valid = valid and term.valid
                add_into(total, term.vector, outer * binomial(Fraction(n), l) * _sign(l))
            l_top = math.floor(deg + self.A.weight - 1 - jN)
            for l in range(0, (min(l_top, n) if n >= 0 else l_top) + 1):
                term = self._BA(p0 + m0 - l - jN, jN + l, p, mono)
                valid = valid and term.valid
                add_into(total, term.vector, -outer * binomial(Fraction(n), l) * _sign(n - l))
        return ModeValue(total, valid)


def sigma(series: OperatorSeries) -> OperatorSeries:
    """σ on E(W, r; N): x0^{1/N} -> ω_N^{-1} x0^{1/N}, i.e. multiplication by ω_N^s on class s"""
    if isinstance(series, CombinationSeries):
        return CombinationSeries(series.target, [(c, sigma(s)) for c, s in series.terms])
    if series.klass is None:
        raise ClassError(f"{series.label} mixes classes")
    return ScaledSeries(series.target, Cyclotomic.root_of_unity(series.N, series.klass), series)


# -- locality ----------------------------------------------------------------------------

def default_probes(target: TruncatedModule, degree: Any = 0) -> List[Monomial]:
    return [mono for mono in target.basis() if target.degree(mono) <= Fraction(degree)]


def _window_bounds(window: Optional[Window], r: int) -> Tuple[Fraction, int]:
    if window is None:
        return Fraction(2), 1
    return window.bounds[0][1], int(window.bounds[1][1]) if r else 0


class CommutatorTable:
    """Memoized [A_(a, m), B_(b, n)] w on basis probes"""

    def __init__(self, A: OperatorSeries, B: OperatorSeries):
        self.A, self.B = A, B
        self._values: Dict[Tuple, ModeValue] = {}

    def __call__(self, a: Fraction, m: Weight, b: Fraction, n: Weight, w: Monomial) -> ModeValue:
        key = (a, m, b, n, w)
        value = self._values.get(key)
        if value is None:
            v = basis_vector(w)
            ab_inner = self.B.mode(b, n, v)
            ab = self.A.mode(a, m, ab_inner.vector)
            ba_inner = self.A.mode(a, m, v)
            ba = self.B.mode(b, n, ba_inner.vector)
            vector: Vector = {}
            add_into(vector, ab.vector)
            add_into(vector, ba.vector, -ONE)
            value = ModeValue(vector, ab_inner.valid and ab.valid and ba_inner.valid and ba.valid)
            self._values[key] = value
        return value


def locality_defects(A: OperatorSeries, B: OperatorSeries, k: int, window: Optional[Window] = None,
                     probes: Optional[Sequence[Monomial]] = None, table: Optional[CommutatorTable] = None,
                     first_only: bool = False) -> Tuple[int, List[Tuple]]:
    """Coefficients of (x0-y0)^k [A(x0, x), B(y0, y)] on the window

    Returns the number of fully determined coefficients and the nonzero ones
    as (probe, a, b, m, n) tuples.
    """
    probes = list(probes) if probes is not None else default_probes(A.target)
    table = table or CommutatorTable(A, B)
    P, T = _window_bounds(window, A.r)
    weights = list(itertools.product(range(-T, T + 1), repeat=A.r))
    checked = 0
    defects: List[Tuple] = []
    for w, a, b, m, n in itertools.product(probes, A.modes(P), B.modes(P), weights, weights):
        total: Vector = {}
        valid = True
        for l in range(k + 1):
            value = table(a + k - l, m, b + l, n, w)
            valid = valid and value.valid
            add_into(total, value.vector, binomial(Fraction(k), l) * _sign(l))
        if not valid:
            continue
        checked += 1
        if total:
            defects.append((w, a, b, m, n))
            if first_only:
                break
    return checked, defects


def find_locality_order(A: OperatorSeries, B: OperatorSeries, window: Optional[Window] = None,
                        probes: Optional[Sequence[Monomial]] = None, cap: int = DEFAULT_LOCALITY_CAP) -> int:
    """Least k <= cap with (x0-y0)^k [A(x0, x), B(y0, y)] = 0 on the window"""
    probes = list(probes) if probes is not None else default_probes(A.target)
    table = CommutatorTable(A, B)
    for k in range(cap + 1):
        checked, defects = locality_defects(A, B, k, window, probes, table, first_only=True)
        if checked == 0:
            raise LocalityWindowError(f"No commutator coefficient of {A.label}, {B.label} fits the truncation")
        if not defects:
            logger.debug(f"Locality order of ({A.label}, {B.label}) is {k}")
            return k
    raise NotLocalError(f"({A.label}, {B.label}) not local within cap {cap}")


def ye_product(A: OperatorSeries, B: OperatorSeries, m0: int, m: Sequence[int], k: Optional[int] = None,
               method: str = 'closed', window: Optional[Window] = None) -> ProductSeries:
    if k is None:
        k = find_locality_order(A, B, window)
    return ProductSeries(A, B, m0, m, k, method)


# -- the vertex operator map --------------------------------------------------------------

class VertexOperatorMap:
    """v -> Y(v; x0, x) on a target module, from V_L monomials

    Y(1) = 1, Y(a) = the current of a, Y(a⊗t0^{-j}t^m · v') = a_(-j, m) Y(v')
    with the locality order of the inner pair certified from V_L degrees.
    """

    def __init__(self, source: TruncatedModule, target: TruncatedModule, method: str = 'closed'):
        if source.subalgebra != 'L':
            raise ValueError("The source of the vertex operator map is V_L")
        self.source = source
        self.target = target
        self.method = method
        self._series: Dict[Monomial, OperatorSeries] = {}
        self._currents: Dict[int, CurrentSeries] = {}

    def current(self, idx: int) -> CurrentSeries:
        if idx not in self._currents:
            self._currents[idx] = CurrentSeries(self.target, idx)
        return self._currents[idx]

    def monomial_series(self, mono: Monomial) -> OperatorSeries:
        series = self._series.get(mono)
        if series is None:
            gens, top = mono
            if not gens:
                series = IdentitySeries(self.target) if top == VACUUM_TOP else self.current(top)
            else:
                (p, m, idx), rest = gens[0], (gens[1:], top)
                k = math.floor(self.source.degree(rest)) + 1
                series = ProductSeries(self.current(idx), self.monomial_series(rest), p, m, k, self.method)
            self._series[mono] = series
        return series

    def __call__(self, v: Vector) -> OperatorSeries:
        terms = [(c, self.monomial_series(mono)) for mono, c in sorted(v.items())]
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return CombinationSeries(self.target, terms)


def twisted_Y(source: TruncatedModule, v: Vector, target: TruncatedModule, method: str = 'closed') -> OperatorSeries:
    """Y_W(v) on target; one VertexOperatorMap per (source, method) lives in target.vertex_maps"""
    key = (id(source), method)
    vertex_map = target.vertex_maps.get(key)
    if vertex_map is None or vertex_map.source is not source:
        vertex_map = VertexOperatorMap(source, target, method)
        target.vertex_maps[key] = vertex_map
    return vertex_map(v)


# -- closure -------------------------------------------------------------------------------

@dataclass
class ClosureCaps:
    depth: int = 2
    min_mode: int = 0
    t_bound: int = 1
    mode_bound: Any = 1
    max_members: int = 12
    locality_cap: int = DEFAULT_LOCALITY_CAP


@dataclass
class ClosureReport:
    members: List[OperatorSeries]
    orders: Dict[Tuple[str, str], int] = field(default_factory=dict)
    unclosed: List[str] = field(default_factory=list)
    closed: bool = False
    depth: int = 0
    tested: int = 0

    def to_json(self) -> Dict[str, Any]:
        return {
            'members': [{'label': s.label, 'class': s.klass, 'weight': str(s.weight)} for s in self.members],
            'locality_orders': [[a, b, k] for (a, b), k in sorted(self.orders.items())],
            'unclosed': self.unclosed,
            'closed': self.closed,
            'depth': self.depth,
            'tested': self.tested,
        }


def fingerprint(series: OperatorSeries, probes: Sequence[Monomial], mode_bound: Any, t_bound: int) -> Dict:
    row = {}
    weights = itertools.product(range(-t_bound, t_bound + 1), repeat=series.r)
    for n, probe in itertools.product(list(weights), probes):
        for n0 in series.modes(mode_bound):
            value = series.mode(n0, n, basis_vector(probe))
            if value.valid:
                for mono, c in value.vector.items():
                    row[(n0, n, probe, mono)] = c
    return row


def generate_closure(U: Sequence[OperatorSeries], caps: Optional[ClosureCaps] = None,
                     probes: Optional[Sequence[Monomial]] = None) -> ClosureReport:
    """Span of U ∪ {1} closed under Y_E products, pruned by exact rank on fingerprints"""
    caps = caps or ClosureCaps()
    if not U:
        raise ValueError("Closure needs at least one generating series")
    target = U[0].target
    probes = list(probes) if probes is not None else default_probes(target)
    window = Window([(-caps.mode_bound, caps.mode_bound)] + [(-caps.t_bound, caps.t_bound)] * target.tor.r)
    echelon = EchelonBasis()
    report = ClosureReport(members=[])
    for series in [IdentitySeries(target)] + list(U):
        if echelon.add(fingerprint(series, probes, caps.mode_bound, caps.t_bound)) or not report.members:
            report.members.append(series)
    weights = list(itertools.product(range(-caps.t_bound, caps.t_bound + 1), repeat=target.tor.r))
    frontier = list(report.members)
    for depth in range(1, caps.depth + 1):
        report.depth = depth
        added = []
        for A, B in itertools.product(report.members, repeat=2):
            if A not in frontier and B not in frontier:
                continue
            if A.klass is None:
                continue
            try:
                k = find_locality_order(A, B, window, probes, caps.locality_cap)
            except (NotLocalError, LocalityWindowError) as e:
                report.unclosed.append(f"({A.label}, {B.label}): {e}")
                continue
            report.orders[(A.label, B.label)] = k
            for m0, m in itertools.product(range(caps.min_mode, k), weights):
                product = ProductSeries(A, B, m0, m, k)
                report.tested += 1
                if not echelon.add(fingerprint(product, probes, caps.mode_bound, caps.t_bound)):
                    continue
                if len(report.members) + len(added) < caps.max_members:
                    added.append(product)
                else:
                    report.unclosed.append(product.label)
        report.members.extend(added)
        frontier = added
        if not added:
            report.closed = not report.unclosed
            break
    logger.info(f"Closure: {len(report.members)} members, depth {report.depth}, closed={report.closed}")
    return report
