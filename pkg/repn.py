"""
Induced Modules for the Toroidal Workbench
Exact PBW computation in modules induced from the nonnegative part of a loop
algebra: the twisted vacuum module W and the vacuum module V_L(ℓ, 0)
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from scalars import ONE, ZERO, Cyclotomic, parse_scalar
from toroidal import GeneratorKey, ToroidalAlgebra, ToroidalElement

logger = logging.getLogger('ToroidalWorkbench.Repn')

VACUUM_TOP = -1
Monomial = Tuple[Tuple[GeneratorKey, ...], int]
Vector = Dict[Monomial, Cyclotomic]

VACUUM: Monomial = ((), VACUUM_TOP)


class ModuleCapError(ValueError):
    """Raised when the degree cap cannot hold the seed of the module"""


# -- sparse vectors ------------------------------------------------------------------------

def add_into(acc: Vector, vec: Vector, scale: Any = ONE):
    for mono, c in vec.items():
        value = acc.get(mono, ZERO) + scale * c
        if value:
            acc[mono] = value
        else:
            acc.pop(mono, None)


def combine(*pairs: Tuple[Any, Vector]) -> Vector:
    """Σ scale_i · vec_i"""
    acc: Vector = {}
    for scale, vec in pairs:
        add_into(acc, vec, scale)
    return acc


def vectors_equal(u: Vector, v: Vector) -> bool:
    return not combine((ONE, u), (-ONE, v))


def basis_vector(mono: Monomial) -> Vector:
    return {mono: ONE}


@dataclass
class ActionResult:
    vector: Vector
    valid: bool
    reason: str = ''


class OperatorMatrix:
    """Sparse operator given by its columns on a set of basis monomials

    Columns whose evaluation left the truncation are recorded in ``invalid``
    and ignored by comparisons.
    """

    __slots__ = ('columns', 'invalid')

    def __init__(self, columns: Optional[Dict[Monomial, Vector]] = None, invalid: Optional[Set[Monomial]] = None):
        self.columns: Dict[Monomial, Vector] = {k: v for k, v in (columns or {}).items() if v}
        self.invalid: Set[Monomial] = set(invalid or ())

    def __add__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        columns = {k: dict(v) for k, v in self.columns.items()}
        for k, v in other.columns.items():
            add_into(columns.setdefault(k, {}), v)
        return OperatorMatrix(columns, self.invalid | other.invalid)

    def __neg__(self) -> 'OperatorMatrix':
        return self.scale(-ONE)

    def __sub__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        return self + (-other)

    def scale(self, c: Any) -> 'OperatorMatrix':
        c = Cyclotomic.coerce(c)
        return OperatorMatrix({k: combine((c, v)) for k, v in self.columns.items()}, self.invalid)

    def __mul__(self, other):
        if isinstance(other, OperatorMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        """Composition self ∘ other on other's columns"""
        columns: Dict[Monomial, Vector] = {}
        invalid = set(other.invalid)
        for k, v in other.columns.items():
            acc: Vector = {}
            for mono, c in v.items():
                if mono in self.invalid:
                    invalid.add(k)
                add_into(acc, self.columns.get(mono, {}), c)
            columns[k] = acc
        return OperatorMatrix(columns, invalid)

    def apply(self, v: Vector) -> Vector:
        acc: Vector = {}
        for mono, c in v.items():
            add_into(acc, self.columns.get(mono, {}), c)
        return acc

    def __bool__(self) -> bool:
        return any(v for k, v in self.columns.items() if k not in self.invalid)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        skip = self.invalid | other.invalid
        for k in set(self.columns) | set(other.columns):
            if k not in skip and not vectors_equal(self.columns.get(k, {}), other.columns.get(k, {})):
                return False
        return True

    __hash__ = None

    def to_json(self, label=str) -> Dict[str, Any]:
        return {
            'columns': {label(k): {label(m): c.to_json() for m, c in sorted(v.items())}
                        for k, v in sorted(self.columns.items())},
            'invalid': sorted(label(k) for k in self.invalid),
        }


class InducedModule:
    """U(L̂) ⊗ S for the full loop algebra L̂ = L̂(g, d), S a module for its nonnegative part

    Basis: PBW monomials u_1 ... u_k ⊗ s with creation generators sorted by
    key (t0 exponent ascending, then t-weight, then eigenbasis index). The
    seed S is either the trivial vacuum ('vacuum') or g ⊕ C with the level-ℓ
    action ('adjoint'). Nothing here is truncated.
    """

    def __init__(self, tor: ToroidalAlgebra, level: Any, seed: str = 'vacuum'):
        if seed not in ('vacuum', 'adjoint'):
            raise ValueError(f"Unknown seed: {seed}")
        self.tor = tor
        self.level = parse_scalar(level)
        self.seed = seed
        self.d = tor.denominator
        self._cache: Dict[Tuple[GeneratorKey, Monomial], Vector] = {}

    def seed_monomials(self) -> List[Monomial]:
        tops = [VACUUM_TOP]
        if self.seed == 'adjoint':
            tops += list(range(len(self.tor.decomposition.basis)))
        return [((), top) for top in tops]

    def top_degree(self, top: int) -> Fraction:
        return Fraction(0) if top == VACUUM_TOP else Fraction(1)

    def degree(self, mono: Monomial) -> Fraction:
        gens, top = mono
        return self.top_degree(top) + sum((Fraction(-p, self.d) for p, _, _ in gens), Fraction(0))

    def act_generator(self, gen: GeneratorKey, mono: Monomial) -> Vector:
        key = (gen, mono)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._act_generator(gen, mono)
            self._cache[key] = cached
        return cached

    def _act_generator(self, gen: GeneratorKey, mono: Monomial) -> Vector:
        gens, top = mono
        if gen[0] < 0 and (not gens or gen <= gens[0]):
            return {((gen,) + gens, top): ONE}
        if not gens:
            return self._act_seed(gen, top)
        # x u_1 rest = u_1 (x rest) + [x, u_1] rest
        first, rest = gens[0], (gens[1:], top)
        result: Vector = {}
        for mono2, c in self.act_generator(gen, rest).items():
            add_into(result, self.act_generator(first, mono2), c)
        bracket, central = self._bracket(gen, first)
        for gen2, c in bracket.items():
            add_into(result, self.act_generator(gen2, rest), c)
        if central:
            add_into(result, {rest: ONE}, central * self.level)
        return result

    def _bracket(self, x: GeneratorKey, y: GeneratorKey) -> Tuple[Dict[GeneratorKey, Cyclotomic], Cyclotomic]:
        (p, m, i), (q, n, j) = x, y
        weight = tuple(a + b for a, b in zip(m, n))
        decomposition = self.tor.decomposition
        terms = {(p + q, weight, k): c for k, c in decomposition.bracket_table.get((i, j), {}).items()}
        central = ZERO
        if p + q == 0 and not any(weight) and (i, j) in decomposition.form_table:
            central = Fraction(p, self.d) * decomposition.form_table[(i, j)]
        return terms, central

    def _act_seed(self, gen: GeneratorKey, top: int) -> Vector:
        if self.seed == 'vacuum' or top == VACUUM_TOP:
            return {}
        p, _, idx = gen
        decomposition = self.tor.decomposition
        if p == 0:
            return {((), k): c for k, c in decomposition.bracket_table.get((idx, top), {}).items()}
        if p == self.d:
            value = decomposition.form_table.get((idx, top), ZERO) * self.level
            return {VACUUM: value} if value else {}
        return {}

    def act(self, x: ToroidalElement, v: Vector) -> Vector:
        result: Vector = {}
        if x.central:
            add_into(result, v, x.central * self.level)
        for gen, coeff in x.generators():
            for mono, c in v.items():
                add_into(result, self.act_generator(gen, mono), coeff * c)
        return result

    def act_key(self, gen: GeneratorKey, v: Vector, coeff: Any = ONE) -> Vector:
        result: Vector = {}
        for mono, c in v.items():
            add_into(result, self.act_generator(gen, mono), coeff * c)
        return result


class TruncatedModule:
    """A module restricted to the box degree <= D and |m_i| <= B for every creation generator"""

    def __init__(self, module: InducedModule, degree_cap: Any, weight_cap: int, subalgebra: str, name: str):
        self.module = module
        self.tor = module.tor
        self.degree_cap = Fraction(degree_cap)
        self.weight_cap = int(weight_cap)
        self.subalgebra = subalgebra
        self.name = name
        self.N = self.tor.N0 if subalgebra == 'tau' else 1
        self._basis: Optional[List[Monomial]] = None
        # vertexops.VertexOperatorMap by (id(source), method), filled by twisted_Y
        self.vertex_maps: Dict[Tuple[int, str], Any] = {}

    @property
    def level(self) -> Cyclotomic:
        return self.module.level

    def in_subalgebra(self, gen: GeneratorKey) -> bool:
        p, m, idx = gen
        if self.subalgebra == 'tau':
            return self.tor.generator_in_tau(p, m, idx)
        return self.tor.generator_in_loop(p, m, idx)

    def in_box(self, mono: Monomial) -> bool:
        gens, _ = mono
        if any(abs(x) > self.weight_cap for _, m, _ in gens for x in m):
            return False
        return self.module.degree(mono) <= self.degree_cap

    def degree(self, mono: Monomial) -> Fraction:
        return self.module.degree(mono)

    def vector_degree(self, v: Vector) -> Fraction:
        return max((self.module.degree(mono) for mono in v), default=Fraction(0))

    def check(self, v: Vector) -> ActionResult:
        outside = [mono for mono in v if not self.in_box(mono)]
        if outside:
            return ActionResult(v, False, f"{len(outside)} terms outside degree {self.degree_cap} / weight {self.weight_cap}")
        return ActionResult(v, True)

    def act(self, x: ToroidalElement, v: Vector) -> ActionResult:
        if not all(self.in_box(mono) for mono in v):
            return ActionResult(self.module.act(x, v), False, "input outside the truncation")
        return self.check(self.module.act(x, v))

    def creation_generators(self) -> List[GeneratorKey]:
        d = self.module.d
        weights = list(itertools.product(range(-self.weight_cap, self.weight_cap + 1), repeat=self.tor.r))
        top = int(self.degree_cap * d)
        gens = []
        for p in range(-top, 0):
            for m in weights:
                for idx in range(len(self.tor.decomposition.basis)):
                    if self.in_subalgebra((p, m, idx)):
                        gens.append((p, m, idx))
        return sorted(gens)

    def basis(self) -> List[Monomial]:
        if self._basis is None:
            gens = self.creation_generators()
            d = self.module.d
            result = []
            for _, top in self.module.seed_monomials():
                budget = self.degree_cap - self.module.top_degree(top)
                if budget < 0:
                    continue

                def extend(start: int, chosen: Tuple[GeneratorKey, ...], left: Fraction):
                    result.append((chosen, top))
                    for k in range(start, len(gens)):
                        cost = Fraction(-gens[k][0], d)
                        if cost <= left:
                            extend(k, chosen + (gens[k],), left - cost)

                extend(0, (), budget)
            self._basis = sorted(result, key=lambda mono: (self.degree(mono), mono))
            logger.info(f"{self.name}: {len(self._basis)} basis vectors up to degree {self.degree_cap}")
        return self._basis

    def graded_dims(self) -> Dict[Fraction, int]:
        dims: Dict[Fraction, int] = {}
        for mono in self.basis():
            deg = self.degree(mono)
            dims[deg] = dims.get(deg, 0) + 1
        return dict(sorted(dims.items()))

    def operator_matrix(self, x: ToroidalElement, columns: Optional[Sequence[Monomial]] = None) -> OperatorMatrix:
        matrix = OperatorMatrix()
        for mono in columns if columns is not None else self.basis():
            result = self.act(x, basis_vector(mono))
            if result.vector:
                matrix.columns[mono] = result.vector
            if not result.valid:
                matrix.invalid.add(mono)
        return matrix

    def label(self, mono: Monomial) -> str:
        gens, top = mono
        labels = self.tor.labels
        parts = [f"({labels[idx]})[{Fraction(p, self.module.d)};{','.join(map(str, m))}]" for p, m, idx in gens]
        parts.append("|0>" if top == VACUUM_TOP else f"|{labels[top]}>")
        return " ".join(parts)

    def vector_label(self, v: Vector) -> str:
        if not v:
            return "0"
        return " + ".join(f"{c}*{self.label(mono)}" for mono, c in sorted(v.items()))

    def dump_basis(self) -> Dict[str, Any]:
        return {
            'module': self.name,
            'degree_cap': str(self.degree_cap),
            'weight_cap': self.weight_cap,
            'graded_dims': {str(k): v for k, v in self.graded_dims().items()},
            'basis': [{'degree': str(self.degree(mono)), 'label': self.label(mono)} for mono in self.basis()],
        }

    def dump_operator(self, x: ToroidalElement) -> Dict[str, Any]:
        return {
            'module': self.name,
            'element': self.tor.describe(x),
            'matrix': self.operator_matrix(x).to_json(self.label),
        }


def induce_vacuum(tor_L: ToroidalAlgebra, level: Any, degree_cap: Any, weight_cap: int) -> TruncatedModule:
    """V_L(ℓ, 0): induced from g ⊕ C, with g in degree 1 and the vacuum in degree 0"""
    if tor_L.denominator != 1:
        raise ValueError("V_L is built on the loop algebra with integral t0 exponents")
    if Fraction(degree_cap) < 1:
        raise ModuleCapError("cap too small to contain the degree-1 seed")
    return TruncatedModule(InducedModule(tor_L, level, 'adjoint'), degree_cap, weight_cap, 'L', 'V_L')


def induce_twisted_vacuum(tor: ToroidalAlgebra, level: Any, degree_cap: Any, weight_cap: int) -> TruncatedModule:
    """W: the τ-module induced from the trivial module of τ^{>=0}, c acting by ℓ"""
    if tor.denominator != tor.N0:
        raise ValueError("W is built on the loop algebra with t0 exponents in (1/N0)Z")
    if Fraction(degree_cap) < Fraction(1, tor.N0):
        raise ModuleCapError("cap too small to contain a creation layer")
    return TruncatedModule(InducedModule(tor, level, 'vacuum'), degree_cap, weight_cap, 'tau', 'W')


class LiftedAutomorphism:
    """σ̃_i: the automorphism σ_i of L̂ (σ_i on g, t-powers unchanged) lifted to a module"""

    def __init__(self, target: TruncatedModule, index: int):
        self.target = target
        self.index = index
        self.tor = target.tor
        family = self.tor.family
        self.order = family.orders[index]
        self._cache: Dict[Monomial, Vector] = {}

    def eigenvalue(self, idx: int) -> Cyclotomic:
        return Cyclotomic.root_of_unity(self.order, self.tor.decomposition.residues[idx][self.index])

    def image_of_generator(self, gen: GeneratorKey) -> ToroidalElement:
        p, m, idx = gen
        return self.tor.generator(idx, p, m, self.eigenvalue(idx))

    def _apply_monomial(self, mono: Monomial) -> Vector:
        cached = self._cache.get(mono)
        if cached is None:
            gens, top = mono
            module = self.target.module
            cached = {((), top): ONE if top == VACUUM_TOP else self.eigenvalue(top)}
            for gen in reversed(gens):
                cached = module.act(self.image_of_generator(gen), cached)
            self._cache[mono] = cached
        return cached

    def apply(self, v: Vector) -> ActionResult:
        result: Vector = {}
        for mono, c in v.items():
            add_into(result, self._apply_monomial(mono), c)
        return self.target.check(result)

    def matrix(self) -> OperatorMatrix:
        columns = {mono: self._apply_monomial(mono) for mono in self.target.basis()}
        return OperatorMatrix(columns)

    def order_on_truncation(self, cap: int = 64) -> Optional[int]:
        step = self.matrix()
        power = step
        identity = OperatorMatrix({mono: basis_vector(mono) for mono in self.target.basis()})
        for n in range(1, cap + 1):
            if power == identity:
                return n
            power = step @ power
        return None


def lift_automorphism(target: TruncatedModule, index: int) -> LiftedAutomorphism:
    if not 0 <= index < len(target.tor.family.orders):
        raise ValueError(f"No automorphism σ_{index}")
    if target.subalgebra == 'tau' and index == 0:
        raise ValueError("σ_0 does not act on the twisted module by a lift")
    return LiftedAutomorphism(target, index)
