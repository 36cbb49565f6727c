"""
Finite-Dimensional Lie Algebras for the Toroidal Workbench
Structure constants, invariant forms, commuting finite-order automorphisms
and the joint eigenspace decomposition they induce
"""

import itertools
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from scalars import (ONE, ZERO, Cyclotomic, format_vector, identity, inverse, is_zero, lcm,
                     mat_mul, matrix, nullspace, parse_scalar, row_reduce, zeros)
from scalars import equal as matrices_equal

logger = logging.getLogger('ToroidalWorkbench.LieAlg')

Residue = Tuple[int, ...]


class LieAlgebraError(ValueError):
    pass


class UnknownPresetError(LieAlgebraError):
    pass


class StructureConstantError(LieAlgebraError):
    """Malformed or inconsistent structure-constant input"""


class AutomorphismError(LieAlgebraError):
    pass


class MatrixShapeError(AutomorphismError):
    pass


class BracketNotPreservedError(AutomorphismError):
    pass


class FormNotPreservedError(AutomorphismError):
    pass


class WrongOrderError(AutomorphismError):
    pass


class NonCommutingError(AutomorphismError):
    pass


class GradedLieAlgebra:
    """Lie algebra given by a bracket table on a basis, plus a symmetric invariant form

    Vectors are numpy object arrays of Cyclotomic coordinates. When the
    algebra comes with defining matrices, ``oracle_bracket`` computes brackets
    from matrix commutators, independently of the table.
    """

    def __init__(self, name: str, labels: Sequence[str], table: Dict[Tuple[int, int], np.ndarray],
                 form: np.ndarray, matrices: Optional[List[np.ndarray]] = None, validate: bool = True):
        self.name = name
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = {key: value for key, value in table.items() if not is_zero(value)}
        self.form_matrix = form
        self.matrices = matrices
        self._oracle: Optional[Dict[Tuple[int, int], np.ndarray]] = None
        if form.shape != (self.dim, self.dim):
            raise StructureConstantError(f"Form must be {self.dim}x{self.dim}")
        if validate:
            self.validate()

    def basis_vector(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = ONE
        return v

    def zero(self) -> np.ndarray:
        return zeros(self.dim)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self._bilinear(self.table, x, y)

    def _bilinear(self, table, x, y) -> np.ndarray:
        result = zeros(self.dim)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and (i, j) in table:
                    result = result + (xi * yj) * table[(i, j)]
        return result

    def form(self, x: np.ndarray, y: np.ndarray) -> Cyclotomic:
        total = ZERO
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj and self.form_matrix[i, j]:
                        total = total + xi * yj * self.form_matrix[i, j]
        return total

    def oracle_bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.matrices is None:
            return self.bracket(x, y)
        if self._oracle is None:
            self._oracle = {}
            for i, j in itertools.product(range(self.dim), repeat=2):
                X, Y = self.matrices[i], self.matrices[j]
                value = self.coordinates(mat_mul(X, Y) - mat_mul(Y, X))
                if not is_zero(value):
                    self._oracle[(i, j)] = value
        return self._bilinear(self._oracle, x, y)

    def to_matrix(self, x: np.ndarray) -> np.ndarray:
        result = zeros(*self.matrices[0].shape)
        for xi, M in zip(x, self.matrices):
            if xi:
                result = result + xi * M
        return result

    def coordinates(self, X: np.ndarray) -> np.ndarray:
        """Coordinates of a matrix in the defining representation"""
        if self.matrices is None:
            raise LieAlgebraError(f"{self.name} has no defining matrices")
        flat = np.empty((X.size, self.dim), dtype=object)
        for j, M in enumerate(self.matrices):
            flat[:, j] = list(M.flat)
        system = np.concatenate([flat, np.array(list(X.flat), dtype=object).reshape(-1, 1)], axis=1)
        R, pivots = row_reduce(system)
        if self.dim in pivots:
            raise LieAlgebraError("Matrix is not in the span of the basis")
        coords = zeros(self.dim)
        for row, p in enumerate(pivots):
            coords[p] = R[row, self.dim]
        return coords

    def label(self, x: np.ndarray) -> str:
        return format_vector(self.labels, x)

    def validate(self):
        """Antisymmetry, Jacobi identity, form symmetry and invariance on basis elements"""
        basis = [self.basis_vector(i) for i in range(self.dim)]
        for i, j in itertools.product(range(self.dim), repeat=2):
            if not is_zero(self.bracket(basis[i], basis[j]) + self.bracket(basis[j], basis[i])):
                raise StructureConstantError(f"Bracket is not antisymmetric on ({self.labels[i]}, {self.labels[j]})")
            if self.form_matrix[i, j] != self.form_matrix[j, i]:
                raise StructureConstantError("Form is not symmetric")
        for i, j, k in itertools.combinations(range(self.dim), 3):
            x, y, z = basis[i], basis[j], basis[k]
            total = (self.bracket(x, self.bracket(y, z)) + self.bracket(y, self.bracket(z, x))
                     + self.bracket(z, self.bracket(x, y)))
            if not is_zero(total):
                raise StructureConstantError(
                    f"Jacobi identity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            x, y, z = basis[i], basis[j], basis[k]
            if self.form(self.bracket(x, y), z) != self.form(x, self.bracket(y, z)):
                raise StructureConstantError("Form is not invariant")

    def mutate(self, i: int, j: int, k: int, delta: Any = 1) -> 'GradedLieAlgebra':
        """Copy with the [b_i, b_j] coefficient on b_k shifted by delta, without validation"""
        table = {key: value.copy() for key, value in self.table.items()}
        value = table.get((i, j), zeros(self.dim)).copy()
        value[k] = value[k] + parse_scalar(delta)
        table[(i, j)] = value
        mutant = GradedLieAlgebra(f"{self.name}~c[{i},{j},{k}]", self.labels, table, self.form_matrix,
                                  self.matrices, validate=False)
        logger.debug(f"Mutated {self.name}: [{self.labels[i]},{self.labels[j]}] coefficient on {self.labels[k]}")
        return mutant

    def to_json(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'dim': self.dim,
            'labels': self.labels,
            'brackets': [[i, j, [c.to_json() for c in value]] for (i, j), value in sorted(self.table.items())],
            'form': [[c.to_json() for c in row] for row in self.form_matrix],
        }


# -- presets -------------------------------------------------------------------------

def _elementary(n: int, i: int, j: int) -> np.ndarray:
    E = zeros(n, n)
    E[i, j] = ONE
    return E


def _sl_basis(n: int) -> Tuple[List[str], List[np.ndarray]]:
    if n == 2:
        return ['e', 'h', 'f'], [_elementary(2, 0, 1), _elementary(2, 0, 0) - _elementary(2, 1, 1),
                                 _elementary(2, 1, 0)]
    if n == 3:
        E = lambda i, j: _elementary(3, i, j)
        labels = ['e1', 'e2', 'e3', 'h1', 'h2', 'f1', 'f2', 'f3']
        mats = [E(0, 1), E(1, 2), E(0, 2), E(0, 0) - E(1, 1), E(1, 1) - E(2, 2), E(1, 0), E(2, 1), E(2, 0)]
        return labels, mats
    raise UnknownPresetError(f"No sl{n} preset")


def _from_matrices(name: str, labels: List[str], mats: List[np.ndarray], coroot: int) -> GradedLieAlgebra:
    dim = len(mats)
    shell = GradedLieAlgebra(name, labels, {}, zeros(dim, dim), mats, validate=False)
    table = {}
    for i, j in itertools.product(range(dim), repeat=2):
        value = shell.coordinates(mat_mul(mats[i], mats[j]) - mat_mul(mats[j], mats[i]))
        if not is_zero(value):
            table[(i, j)] = value
    H = mats[coroot]
    scale = Cyclotomic.rational(2) / np.trace(mat_mul(H, H))
    form = zeros(dim, dim)
    for i, j in itertools.product(range(dim), repeat=2):
        form[i, j] = scale * np.trace(mat_mul(mats[i], mats[j]))
    return GradedLieAlgebra(name, labels, table, form, mats)


def preset(name: str) -> GradedLieAlgebra:
    """Built-in simple Lie algebras with the form normalized so long roots have square length 2"""
    if name == 'sl2':
        labels, mats = _sl_basis(2)
        return _from_matrices('sl2', labels, mats, coroot=1)
    if name == 'sl3':
        labels, mats = _sl_basis(3)
        return _from_matrices('sl3', labels, mats, coroot=3)
    raise UnknownPresetError(f"Unknown preset algebra: {name}")


def _matrix_map(n: int, name: str) -> Callable[[np.ndarray], np.ndarray]:
    if name == 'identity':
        return lambda X: X
    if name == 'chevalley_involution':
        return lambda X: -X.T
    if name == 'sign' and n == 2:
        D = matrix([[1, 0], [0, -1]])
        return lambda X: mat_mul(mat_mul(D, X), D)
    if name == 'diagram' and n == 3:
        J = matrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
        return lambda X: -mat_mul(mat_mul(J, X.T), J)
    if name == 'diagonal_order3' and n == 3:
        w = Cyclotomic.root_of_unity(3, 1)
        D, D_inv = identity(3), identity(3)
        D[1, 1], D[2, 2] = w, w * w
        D_inv[1, 1], D_inv[2, 2] = w ** -1, w ** -2
        return lambda X: mat_mul(mat_mul(D, X), D_inv)
    raise UnknownPresetError(f"Unknown automorphism preset {name!r} for sl{n}")


def preset_automorphism(g: GradedLieAlgebra, name: str) -> np.ndarray:
    """Matrix (column j = image of basis j) of a named automorphism of a preset algebra"""
    if g.matrices is None:
        raise UnknownPresetError(f"{g.name} has no named automorphisms")
    n = g.matrices[0].shape[0]
    fn = _matrix_map(n, name)
    S = zeros(g.dim, g.dim)
    for j, M in enumerate(g.matrices):
        S[:, j] = g.coordinates(fn(M))
    return S


def load_structure_constants(source: Union[str, Path, Dict[str, Any]]) -> Tuple[GradedLieAlgebra, List[np.ndarray]]:
    """Parse {dim, labels?, brackets: [[i, j, [coeffs]]], form, autos?}; returns the algebra and its autos"""
    if isinstance(source, (str, Path)):
        with open(source, 'r') as f:
            data = json.load(f)
    else:
        data = source
    try:
        dim = int(data['dim'])
        labels = data.get('labels') or [f"b{i}" for i in range(dim)]
        if len(labels) != dim:
            raise StructureConstantError("labels must have dim entries")
        table: Dict[Tuple[int, int], np.ndarray] = {}
        for i, j, coeffs in data.get('brackets', []):
            if len(coeffs) != dim:
                raise StructureConstantError(f"Bracket [{i},{j}] needs {dim} coefficients")
            table[(int(i), int(j))] = np.array([parse_scalar(c) for c in coeffs], dtype=object)
        for (i, j), value in list(table.items()):
            if (j, i) not in table:
                table[(j, i)] = np.array([-c for c in value], dtype=object)
        form = matrix(data['form'])
        autos = [matrix(a) for a in data.get('autos', [])]
    except (KeyError, TypeError) as e:
        raise StructureConstantError(f"Malformed structure constants: {e}") from e
    return GradedLieAlgebra(data.get('name', 'custom'), labels, table, form), autos


# -- automorphism families -------------------------------------------------------------

def automorphism_order(S: np.ndarray, cap: Optional[int] = None) -> Optional[int]:
    cap = cap or Cyclotomic.order_cap
    I = identity(S.shape[0])
    power = S
    for n in range(1, cap + 1):
        if matrices_equal(power, I):
            return n
        power = mat_mul(power, S)
    return None


class AutomorphismFamily:
    """Pairwise commuting automorphisms σ_0, ..., σ_r of finite orders N_0, ..., N_r"""

    def __init__(self, algebra: GradedLieAlgebra, matrices: List[np.ndarray], orders: Sequence[int],
                 names: Optional[Sequence[str]] = None):
        self.algebra = algebra
        self.matrices = matrices
        self.orders = tuple(orders)
        self.names = list(names) if names else [f"sigma{i}" for i in range(len(matrices))]

    @property
    def r(self) -> int:
        return len(self.matrices) - 1

    @property
    def N0(self) -> int:
        return self.orders[0]

    @property
    def N(self) -> Tuple[int, ...]:
        return self.orders[1:]

    @property
    def field_order(self) -> int:
        order = 1
        for n in self.orders:
            order = lcm(order, n)
        return order

    @property
    def N_plus(self) -> int:
        return int(np.prod(self.N)) if self.r else 1

    def apply(self, i: int, x: np.ndarray) -> np.ndarray:
        return mat_mul(self.matrices[i], x)

    def group_elements(self) -> List[Tuple[int, ...]]:
        """Exponent tuples (a_1..a_r) of the elements σ_1^{a_1}...σ_r^{a_r} of Ĝ₊"""
        return list(itertools.product(*(range(n) for n in self.N)))

    def group_matrix(self, gamma: Sequence[int]) -> np.ndarray:
        result = identity(self.algebra.dim)
        for S, a in zip(self.matrices[1:], gamma):
            for _ in range(a):
                result = mat_mul(S, result)
        return result

    def character(self, m: Sequence[int], gamma: Sequence[int]) -> Cyclotomic:
        """χ^m(γ) = prod ω_{N_i}^{m_i a_i}"""
        value = ONE
        for n, mi, a in zip(self.N, m, gamma):
            value = value * Cyclotomic.root_of_unity(n, mi * a)
        return value

    def to_json(self) -> Dict[str, Any]:
        return {
            'names': self.names,
            'orders': list(self.orders),
            'matrices': [[[c.to_json() for c in row] for row in S] for S in self.matrices],
        }


def validate_family(g: GradedLieAlgebra, matrices: Sequence[np.ndarray], intended_orders: Optional[Sequence[int]] = None,
                    names: Optional[Sequence[str]] = None) -> AutomorphismFamily:
    if not matrices:
        raise AutomorphismError("At least σ_0 is required")
    basis = [g.basis_vector(i) for i in range(g.dim)]
    orders = []
    for index, S in enumerate(matrices):
        if S.shape != (g.dim, g.dim):
            raise MatrixShapeError(f"Automorphism {index} must be {g.dim}x{g.dim}, got {S.shape}")
        for i, j in itertools.product(range(g.dim), repeat=2):
            if not matrices_equal(mat_mul(S, g.bracket(basis[i], basis[j])),
                                  g.bracket(mat_mul(S, basis[i]), mat_mul(S, basis[j]))):
                raise BracketNotPreservedError(
                    f"Automorphism {index} does not preserve [{g.labels[i]}, {g.labels[j]}]")
            if g.form(mat_mul(S, basis[i]), mat_mul(S, basis[j])) != g.form_matrix[i, j]:
                raise FormNotPreservedError(f"Automorphism {index} does not preserve the form")
        order = automorphism_order(S)
        if order is None:
            raise WrongOrderError(f"Automorphism {index} has no finite order within the cap")
        if intended_orders is not None and intended_orders[index] is not None and order != int(intended_orders[index]):
            raise WrongOrderError(f"Automorphism {index} has order {order}, expected {intended_orders[index]}")
        orders.append(order)
    for a, b in itertools.combinations(range(len(matrices)), 2):
        if not matrices_equal(mat_mul(matrices[a], matrices[b]), mat_mul(matrices[b], matrices[a])):
            raise NonCommutingError(f"automorphisms do not commute ({a}, {b})")
    family = AutomorphismFamily(g, list(matrices), orders, names)
    logger.info(f"Validated automorphisms of {g.name} with orders {tuple(orders)}")
    return family


# -- graded decomposition -----------------------------------------------------------------

class GradedDecomposition:
    """Joint eigenspaces g_(k0, k) of the family, with an eigenbasis and its tables"""

    def __init__(self, algebra: GradedLieAlgebra, family: AutomorphismFamily,
                 components: Dict[Residue, List[np.ndarray]]):
        self.algebra = algebra
        self.family = family
        self.components = components
        self.basis: List[np.ndarray] = []
        self.residues: List[Residue] = []
        for residue in sorted(components):
            for v in components[residue]:
                self.basis.append(v)
                self.residues.append(residue)
        self.change = zeros(algebra.dim, algebra.dim)
        for j, v in enumerate(self.basis):
            self.change[:, j] = v
        self.change_inverse = inverse(self.change)
        self.labels = [algebra.label(v) for v in self.basis]
        self.bracket_table = self._tables(algebra.bracket)
        self.form_table = {}
        for i, j in itertools.product(range(len(self.basis)), repeat=2):
            value = algebra.form(self.basis[i], self.basis[j])
            if value:
                self.form_table[(i, j)] = value

    def _tables(self, bracket) -> Dict[Tuple[int, int], Dict[int, Cyclotomic]]:
        table = {}
        for i, j in itertools.product(range(len(self.basis)), repeat=2):
            coords = self.eigen_coordinates(bracket(self.basis[i], self.basis[j]))
            sparse = {k: c for k, c in enumerate(coords) if c}
            if sparse:
                table[(i, j)] = sparse
        return table

    def with_algebra(self, algebra: GradedLieAlgebra) -> 'GradedDecomposition':
        """Same eigenspaces, tables rebuilt from another bracket on the same basis"""
        return GradedDecomposition(algebra, self.family, self.components)

    @property
    def dims(self) -> Dict[Residue, int]:
        return {residue: len(vectors) for residue, vectors in sorted(self.components.items())}

    def eigen_coordinates(self, x: np.ndarray) -> np.ndarray:
        return mat_mul(self.change_inverse, x)

    def from_eigen(self, coords: Sequence[Any]) -> np.ndarray:
        return mat_mul(self.change, np.array(list(coords), dtype=object))

    def component(self, x: np.ndarray, residue: Sequence[int]) -> np.ndarray:
        """Projection of x to g_(k0, k) (residues taken mod the orders)"""
        residue = tuple(k % n for k, n in zip(residue, self.family.orders))
        coords = self.eigen_coordinates(x)
        result = zeros(self.algebra.dim)
        for idx, c in enumerate(coords):
            if c and self.residues[idx] == residue:
                result = result + c * self.basis[idx]
        return result

    def plus_component(self, x: np.ndarray, m: Sequence[int]) -> np.ndarray:
        """Projection of x to g_m, the grading by σ_1..σ_r alone"""
        m = tuple(k % n for k, n in zip(m, self.family.N))
        coords = self.eigen_coordinates(x)
        result = zeros(self.algebra.dim)
        for idx, c in enumerate(coords):
            if c and self.residues[idx][1:] == m:
                result = result + c * self.basis[idx]
        return result

    def homogeneous_residue(self, x: np.ndarray) -> Optional[Residue]:
        found = {self.residues[idx] for idx, c in enumerate(self.eigen_coordinates(x)) if c}
        return found.pop() if len(found) == 1 else None

    def sigma0_class(self, x: np.ndarray) -> Optional[int]:
        found = {self.residues[idx][0] for idx, c in enumerate(self.eigen_coordinates(x)) if c}
        if not found:
            return 0
        return found.pop() if len(found) == 1 else None

    def to_json(self) -> Dict[str, Any]:
        return {
            'components': [{'residue': list(res), 'basis': [self.algebra.label(v) for v in vecs]}
                           for res, vecs in sorted(self.components.items())],
            'dims': {','.join(map(str, res)): n for res, n in self.dims.items()},
        }


def decompose(g: GradedLieAlgebra, family: AutomorphismFamily) -> GradedDecomposition:
    components: Dict[Residue, List[np.ndarray]] = {}
    I = identity(g.dim)
    for residue in itertools.product(*(range(n) for n in family.orders)):
        blocks = [S - Cyclotomic.root_of_unity(n, k) * I
                  for S, n, k in zip(family.matrices, family.orders, residue)]
        kernel = nullspace(np.concatenate(blocks, axis=0))
        if kernel:
            components[residue] = kernel
    total = sum(len(v) for v in components.values())
    if total != g.dim:
        raise AutomorphismError(f"Eigenspaces span dimension {total}, expected {g.dim}")
    decomposition = GradedDecomposition(g, family, components)
    logger.info(f"Decomposed {g.name}: {decomposition.dims}")
    return decomposition


def project_component(g: GradedLieAlgebra, family: AutomorphismFamily, a: np.ndarray, m: Sequence[int]) -> np.ndarray:
    """(1/N₊) Σ_γ χ^m(γ^{-1}) γ(a): the g_m component of a"""
    total = zeros(g.dim)
    for gamma in family.group_elements():
        weight = family.character(m, [-x for x in gamma])
        total = total + weight * mat_mul(family.group_matrix(gamma), a)
    return np.array([c / family.N_plus for c in total], dtype=object)
