"""
Toroidal Lie Algebras for the Toroidal Workbench
The full loop algebra g ⊗ C[t0^{±1/d}, t^{±1}] ⊕ Cc, its twisted subalgebra τ,
the untwisted subalgebra L, and mode families a^τ, a^L
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from formal import Window
from liealg import GradedDecomposition
from scalars import ONE, ZERO, Cyclotomic, format_vector

logger = logging.getLogger('ToroidalWorkbench.Toroidal')

Weight = Tuple[int, ...]
TermKey = Tuple[int, Weight]
GeneratorKey = Tuple[int, Weight, int]


class NotHomogeneousError(ValueError):
    """Raised when an operation needs an element of a single eigenspace g_(k0, k)"""


class ToroidalElement:
    """Finite sum of x_idx ⊗ t0^{p/d} t^m plus a multiple of c

    ``terms`` maps (p, m) to sparse eigen-coordinates {idx: coefficient};
    p is the t0 exponent scaled by the denominator d.
    """

    __slots__ = ('terms', 'central', 'denominator')

    def __init__(self, denominator: int, terms: Optional[Dict[TermKey, Dict[int, Cyclotomic]]] = None,
                 central: Any = ZERO):
        self.denominator = denominator
        self.terms: Dict[TermKey, Dict[int, Cyclotomic]] = {}
        self.central = Cyclotomic.coerce(central)
        for key, coords in (terms or {}).items():
            for idx, c in coords.items():
                self._accumulate(key, idx, c)

    def _accumulate(self, key: TermKey, idx: int, c: Cyclotomic):
        if not c:
            return
        coords = self.terms.setdefault(key, {})
        value = coords.get(idx, ZERO) + c
        if value:
            coords[idx] = value
        else:
            coords.pop(idx, None)
            if not coords:
                del self.terms[key]

    def generators(self) -> Iterator[Tuple[GeneratorKey, Cyclotomic]]:
        for (p, m), coords in sorted(self.terms.items()):
            for idx, c in sorted(coords.items()):
                yield (p, m, idx), c

    def __add__(self, other: 'ToroidalElement') -> 'ToroidalElement':
        if self.denominator != other.denominator:
            raise ValueError("Elements live in loop algebras with different t0 denominators")
        result = ToroidalElement(self.denominator, self.terms, self.central + other.central)
        for (p, m, idx), c in other.generators():
            result._accumulate((p, m), idx, c)
        return result

    def __neg__(self) -> 'ToroidalElement':
        return self.scale(-ONE)

    def __sub__(self, other: 'ToroidalElement') -> 'ToroidalElement':
        return self + (-other)

    def scale(self, c: Any) -> 'ToroidalElement':
        c = Cyclotomic.coerce(c)
        result = ToroidalElement(self.denominator, central=self.central * c)
        for (p, m, idx), value in self.generators():
            result._accumulate((p, m), idx, value * c)
        return result

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ToroidalElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def describe(self, labels: Sequence[str]) -> str:
        parts = []
        for (p, m), coords in sorted(self.terms.items()):
            vector = [coords.get(i, ZERO) for i in range(len(labels))]
            exponent = Fraction(p, self.denominator)
            parts.append(f"({format_vector(labels, vector)})⊗t0^{exponent}t^{list(m)}")
        if self.central:
            parts.append(f"{self.central}c")
        return " + ".join(parts) if parts else "0"

    def to_json(self, labels: Sequence[str]) -> Dict[str, Any]:
        return {
            'terms': [{'t0': str(Fraction(p, self.denominator)), 't': list(m),
                       'element': {labels[i]: c.to_json() for i, c in sorted(coords.items())}}
                      for (p, m), coords in sorted(self.terms.items())],
            'central': self.central.to_json(),
        }

    def __repr__(self) -> str:
        return f"ToroidalElement(terms={len(self.terms)}, central={self.central})"


class ToroidalAlgebra:
    """Loop algebra L̂(g, d) built on the eigenbasis of a graded decomposition

    The τ-algebra uses d = N_0; the untwisted L uses d = 1. Brackets follow
    [a⊗t0^p t^m, b⊗t0^q t^n] = [a,b]⊗t0^{p+q}t^{m+n} + p<a,b>δ_{p+q,0}δ_{m+n,0}c
    with [a,b] read from the structure-constant table.
    """

    def __init__(self, decomposition: GradedDecomposition, denominator: Optional[int] = None):
        self.decomposition = decomposition
        self.algebra = decomposition.algebra
        self.family = decomposition.family
        self.N0 = self.family.N0
        self.N = self.family.N
        self.r = self.family.r
        self.denominator = denominator if denominator is not None else self.N0
        self.labels = decomposition.labels

    # -- construction --------------------------------------------------------------

    def zero(self) -> ToroidalElement:
        return ToroidalElement(self.denominator)

    def central(self, value: Any = ONE) -> ToroidalElement:
        return ToroidalElement(self.denominator, central=value)

    def scaled_exponent(self, p0: Any) -> int:
        scaled = Fraction(p0) * self.denominator
        if scaled.denominator != 1:
            raise ValueError(f"t0 exponent {p0} is not a multiple of 1/{self.denominator}")
        return int(scaled)

    def generator(self, idx: int, p: int, m: Sequence[int], coeff: Any = ONE) -> ToroidalElement:
        """Eigenbasis vector idx ⊗ t0^{p/d} t^m (p already scaled)"""
        return ToroidalElement(self.denominator, {(p, tuple(m)): {idx: Cyclotomic.coerce(coeff)}})

    def element(self, a: np.ndarray, p0: Any, m: Sequence[int]) -> ToroidalElement:
        """a ⊗ t0^{p0} t^m for a in the original basis"""
        p = self.scaled_exponent(p0)
        coords = self.decomposition.eigen_coordinates(a)
        return ToroidalElement(self.denominator, {(p, tuple(m)): {i: c for i, c in enumerate(coords) if c}})

    def tau_component(self, a: np.ndarray, p0: Any, m: Sequence[int]) -> ToroidalElement:
        """a^τ mode (p0, m): the g_(N0 p0, m) component of a, tensored with t0^{p0} t^m"""
        p = Fraction(p0) * self.N0
        if p.denominator != 1:
            raise ValueError(f"τ modes need p0 in (1/{self.N0})Z, got {p0}")
        part = self.decomposition.component(a, (int(p),) + tuple(m))
        return self.element(part, p0, m)

    def loop_component(self, a: np.ndarray, m0: Any, m: Sequence[int]) -> ToroidalElement:
        """a^L mode (m0, m) = a_(m) ⊗ t0^{m0} t^m"""
        if Fraction(m0).denominator != 1:
            raise ValueError(f"L modes need integral t0 exponents, got {m0}")
        return self.element(self.decomposition.plus_component(a, m), m0, m)

    # -- structure ---------------------------------------------------------------------

    def bracket(self, x: ToroidalElement, y: ToroidalElement) -> ToroidalElement:
        result = self.zero()
        table, form = self.decomposition.bracket_table, self.decomposition.form_table
        for (p, m, i), a in x.generators():
            for (q, n, j), b in y.generators():
                key = (p + q, tuple(u + v for u, v in zip(m, n)))
                for k, c in table.get((i, j), {}).items():
                    result._accumulate(key, k, a * b * c)
                if p + q == 0 and not any(key[1]) and (i, j) in form:
                    result.central = result.central + Fraction(p, self.denominator) * a * b * form[(i, j)]
        return result

    def generator_in_tau(self, p: int, m: Weight, idx: int) -> bool:
        k0, k = self.decomposition.residues[idx][0], self.decomposition.residues[idx][1:]
        if self.denominator == self.N0:
            t0_ok = (p - k0) % self.N0 == 0
        else:
            scaled = Fraction(p * self.N0, self.denominator)
            t0_ok = scaled.denominator == 1 and (int(scaled) - k0) % self.N0 == 0
        return t0_ok and all((mi - ki) % n == 0 for mi, ki, n in zip(m, k, self.N))

    def generator_in_loop(self, p: int, m: Weight, idx: int) -> bool:
        k = self.decomposition.residues[idx][1:]
        return p % self.denominator == 0 and all((mi - ki) % n == 0 for mi, ki, n in zip(m, k, self.N))

    def is_in_tau(self, x: ToroidalElement) -> bool:
        return all(self.generator_in_tau(p, m, idx) for (p, m, idx), _ in x.generators())

    def is_in_loop_subalgebra(self, x: ToroidalElement) -> bool:
        return all(self.generator_in_loop(p, m, idx) for (p, m, idx), _ in x.generators())

    def mode_family(self, a: np.ndarray, kind: str = 'tau') -> 'ModeFamily':
        return ModeFamily(self, a, kind)

    def describe(self, x: ToroidalElement) -> str:
        return x.describe(self.labels)


@dataclass
class ModeFamily:
    """The modes a^τ(n0, n) (kind 'tau') or a^L(n0, n) (kind 'L') of one algebra element"""

    algebra: ToroidalAlgebra
    element: np.ndarray
    kind: str = 'tau'

    def __post_init__(self):
        if self.kind not in ('tau', 'L'):
            raise ValueError(f"Unknown mode kind: {self.kind}")

    @property
    def residue(self) -> Optional[Tuple[int, ...]]:
        return self.algebra.decomposition.homogeneous_residue(self.element)

    def mode(self, n0: Any, n: Sequence[int]) -> ToroidalElement:
        if self.kind == 'tau':
            return self.algebra.tau_component(self.element, n0, n)
        return self.algebra.loop_component(self.element, n0, n)


@dataclass
class CommutatorReport:
    checked: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


def mode_grid(denominator: int, t0_bound: Any, t_bound: int, r: int) -> Iterator[Tuple[Fraction, Weight]]:
    """All (n0, n) with n0 in (1/denominator)Z, |n0| <= t0_bound, |n_i| <= t_bound"""
    top = int(Fraction(t0_bound) * denominator)
    for p in range(-top, top + 1):
        for n in itertools.product(range(-t_bound, t_bound + 1), repeat=r):
            yield Fraction(p, denominator), n


def check_mode_commutator(tor: ToroidalAlgebra, a: np.ndarray, b: np.ndarray,
                          window: Optional[Window] = None) -> CommutatorReport:
    """Compare [a^τ(p0, m), b^τ(q0, q)] with the generating-function coefficient

    Left side: bracket from the structure-constant table. Right side: the
    coefficient of x0^{-p0-1} y0^{-q0-1} y^{-q} in
    [a_(m),b_(q)]^τ(y0, y) y^m x0^{-1}δ(y0/x0)(y0/x0)^{k0/N0}
    + <a_(m),b_(q)> ∂_{y0}(x0^{-1}δ(y0/x0)(y0/x0)^{k0/N0}) δ_{m+q,0} c,
    read mode by mode from the independent bracket: the delta factor has
    x0^{-p0-1} coefficient y0^{p0} exactly when p0 is in k0/N0 + Z.
    ``window`` bounds the mode indices (t0 first).
    """
    decomposition = tor.decomposition
    res_a, res_b = decomposition.homogeneous_residue(a), decomposition.homogeneous_residue(b)
    if res_a is None or res_b is None:
        raise NotHomogeneousError("check_mode_commutator needs a and b in single eigenspaces")
    window = window or Window([(-2, 2)] + [(-1, 1)] * tor.r)
    P = window.bounds[0][1]
    T = int(window.bounds[1][1]) if tor.r else 0
    kappa = Fraction(res_a[0], tor.N0)
    g = tor.algebra
    grid = list(mode_grid(tor.N0, P, T, tor.r))
    a_modes = {key: tor.tau_component(a, *key) for key in grid}
    b_modes = {key: tor.tau_component(b, *key) for key in grid}
    pieces: Dict[Tuple[Weight, Weight], Tuple[np.ndarray, Cyclotomic]] = {}
    components: Dict[Tuple[Weight, Weight, Fraction, Weight], ToroidalElement] = {}

    def residues(m: Sequence[int]) -> Weight:
        return tuple(x % n for x, n in zip(m, tor.N))

    report = CommutatorReport()
    for p0, m in grid:
        x = a_modes[(p0, m)]
        on_lattice = (p0 - kappa).denominator == 1
        for q0, q in grid:
            lhs = tor.bracket(x, b_modes[(q0, q)])
            rhs = tor.zero()
            if on_lattice:
                # the generating functions pair the t-graded pieces a_(m), b_(q)
                key = (residues(m), residues(q))
                if key not in pieces:
                    a_m, b_q = decomposition.plus_component(a, m), decomposition.plus_component(b, q)
                    pieces[key] = (g.oracle_bracket(a_m, b_q), g.form(a_m, b_q))
                ab, pairing = pieces[key]
                n = tuple(u + v for u, v in zip(m, q))
                mode = key + (p0 + q0, n)
                if mode not in components:
                    components[mode] = tor.tau_component(ab, p0 + q0, n)
                rhs = components[mode]
                if pairing and p0 + q0 == 0 and not any(n):
                    rhs = rhs + tor.central(p0 * pairing)
            report.checked += 1
            if lhs != rhs:
                report.failures.append({
                    'modes': [str(p0), list(m), str(q0), list(q)],
                    'lhs': tor.describe(lhs),
                    'rhs': tor.describe(rhs),
                })
    logger.debug(f"Mode commutator: {report.checked} checked, {len(report.failures)} failures")
    return report
