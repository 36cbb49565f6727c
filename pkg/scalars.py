"""
Exact Scalars for the Toroidal Workbench
Rationals, cyclotomic numbers Q(ω_M) and exact linear algebra over them
"""

import logging
import numbers
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

logger = logging.getLogger('ToroidalWorkbench.Scalars')

Rational = Fraction
DEFAULT_ORDER_CAP = 360


class CyclotomicOrderError(ValueError):
    """Raised when an operation needs a root of unity above the order cap"""


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _relation(order: int) -> Tuple[int, ...]:
    """Low coefficients of the monic cyclotomic polynomial Φ_order"""
    x = sympy.Symbol('x')
    poly = sympy.Poly(sympy.cyclotomic_poly(order, x), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs[:-1])


@lru_cache(maxsize=None)
def _trace_weight(order: int, k: int) -> Fraction:
    # ω_order^k is a primitive d-th root; its normalized trace is μ(d)/φ(d)
    d = order // gcd(order, k)
    return Fraction(int(sympy.mobius(d)), int(sympy.totient(d)))


def _reduce(coeffs: Sequence[Fraction], order: int) -> List[Fraction]:
    relation = _relation(order)
    degree = len(relation)
    values = list(coeffs)
    for top in range(len(values) - 1, degree - 1, -1):
        c = values[top]
        if c:
            base = top - degree
            for j, r in enumerate(relation):
                if r:
                    values[base + j] -= c * r
    values = values[:degree]
    values.extend([Fraction(0)] * (degree - len(values)))
    return values


class Cyclotomic:
    """Element of Q(ω_order), stored as rational coordinates in the power basis mod Φ_order"""

    __slots__ = ('order', 'coeffs')

    order_cap = DEFAULT_ORDER_CAP

    def __init__(self, coeffs: Union[Iterable[Any], Any] = (0,), order: int = 1):
        if isinstance(coeffs, (numbers.Rational, str)):
            coeffs = (coeffs,)
        order = int(order)
        if order < 1:
            raise ValueError(f"Invalid cyclotomic order: {order}")
        if order > Cyclotomic.order_cap:
            raise CyclotomicOrderError(f"order {order} exceeds cap {Cyclotomic.order_cap}")
        values = _reduce([Fraction(c) for c in coeffs], order)
        self.order, self.coeffs = _canonical(order, values)

    @classmethod
    def _make(cls, order: int, coeffs: Sequence[Fraction]) -> 'Cyclotomic':
        obj = object.__new__(cls)
        obj.order, obj.coeffs = _canonical(order, coeffs)
        return obj

    @classmethod
    def rational(cls, value: Any) -> 'Cyclotomic':
        return cls._make(1, (Fraction(value),))

    @staticmethod
    @lru_cache(maxsize=None)
    def root_of_unity(order: int, power: int = 1) -> 'Cyclotomic':
        """ω_order^power with ω_order = exp(2πi/order)"""
        power %= order
        values = [Fraction(0)] * max(order, 1)
        values[power] = Fraction(1)
        return Cyclotomic(values, order)

    # -- coercion and embedding -------------------------------------------------

    @staticmethod
    def coerce(value: Any) -> 'Cyclotomic':
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, numbers.Rational):
            return Cyclotomic._make(1, (Fraction(value),))
        raise TypeError(f"Cannot use {type(value).__name__} as an exact scalar")

    def embed(self, order: int) -> List[Fraction]:
        """Coordinates of self inside Q(ω_order); order must be a multiple of self.order"""
        if order == self.order:
            return list(self.coeffs)
        if order % self.order:
            raise ValueError(f"Q(ω_{self.order}) does not embed in Q(ω_{order})")
        step = order // self.order
        values = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            values[k * step] = c
        return _reduce(values, order)

    def _common(self, other: 'Cyclotomic') -> int:
        order = lcm(self.order, other.order)
        if order > Cyclotomic.order_cap:
            raise CyclotomicOrderError(f"order {order} exceeds cap {Cyclotomic.order_cap}")
        return order

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return Cyclotomic._make(1, (self.coeffs[0] + other.coeffs[0],))
        order = self._common(other)
        return Cyclotomic._make(order, [a + b for a, b in zip(self.embed(order), other.embed(order))])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._make(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if other.order == 1:
            c = other.coeffs[0]
            return Cyclotomic._make(self.order, [a * c for a in self.coeffs])
        if self.order == 1:
            c = self.coeffs[0]
            return Cyclotomic._make(other.order, [c * b for b in other.coeffs])
        order = self._common(other)
        left, right = self.embed(order), other.embed(order)
        product = [Fraction(0)] * (len(left) + len(right) - 1)
        for i, a in enumerate(left):
            if a:
                for j, b in enumerate(right):
                    if b:
                        product[i + j] += a * b
        return Cyclotomic._make(order, _reduce(product, order))

    __rmul__ = __mul__

    def inverse(self) -> 'Cyclotomic':
        if not self:
            raise ZeroDivisionError("Cannot invert the zero cyclotomic number")
        if self.order == 1:
            return Cyclotomic._make(1, (1 / self.coeffs[0],))
        x = sympy.Symbol('x')
        num = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
                         x, domain=sympy.QQ)
        mod = sympy.Poly(sympy.cyclotomic_poly(self.order, x), x, domain=sympy.QQ)
        inv = num.invert(mod)
        values = []
        for c in reversed(inv.all_coeffs()):
            c = sympy.Rational(c)
            values.append(Fraction(int(c.p), int(c.q)))
        return Cyclotomic._make(self.order, _reduce(values, self.order))

    def __truediv__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, numbers.Integral):
            return NotImplemented
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Cyclotomic._make(1, (Fraction(1),))
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> 'Cyclotomic':
        """Complex conjugate (ω ↦ ω^-1)"""
        if self.order == 1:
            return self
        values = [Fraction(0)] * self.order
        for k, c in enumerate(self.coeffs):
            values[(-k) % self.order] += c
        return Cyclotomic._make(self.order, _reduce(values, self.order))

    # -- comparison and inspection -------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        order = lcm(self.order, other.order)
        return self.embed(order) == other.embed(order)

    def __hash__(self) -> int:
        return hash(self.trace())

    def trace(self) -> Fraction:
        """Normalized trace to Q; independent of the field the value is stored in"""
        if self.order == 1:
            return self.coeffs[0]
        return sum((c * _trace_weight(self.order, k) for k, c in enumerate(self.coeffs) if c), Fraction(0))

    def is_rational(self) -> bool:
        return self.order == 1

    def to_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __repr__(self) -> str:
        if self.order == 1:
            return f"Cyclotomic({self.coeffs[0]})"
        return f"Cyclotomic(order={self.order}, coeffs=({', '.join(str(c) for c in self.coeffs)}))"

    def __str__(self) -> str:
        if self.order == 1:
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                root = f"w{self.order}" + (f"^{k}" if k > 1 else "")
                parts.append(root if c == 1 else f"-{root}" if c == -1 else f"{c}*{root}")
        return "+".join(parts).replace("+-", "-")

    def to_json(self) -> Union[str, Dict[str, Any]]:
        if self.order == 1:
            return str(self.coeffs[0])
        return {'order': self.order, 'coeffs': [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(value: Any) -> 'Cyclotomic':
        return parse_scalar(value)


def _canonical(order: int, coeffs: Sequence[Fraction]) -> Tuple[int, Tuple[Fraction, ...]]:
    coeffs = tuple(coeffs)
    if order > 1 and not any(coeffs[1:]):
        return 1, (coeffs[0] if coeffs else Fraction(0),)
    return order, coeffs


ZERO = Cyclotomic._make(1, (Fraction(0),))
ONE = Cyclotomic._make(1, (Fraction(1),))


def parse_scalar(value: Any) -> Cyclotomic:
    """Read a JSON scalar: int, "p/q" string, or {"order": M, "coeffs": [...]}"""
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Invalid scalar: {value!r}")
    if isinstance(value, numbers.Rational):
        return Cyclotomic.rational(value)
    if isinstance(value, str):
        try:
            return Cyclotomic.rational(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Invalid scalar: {value!r}") from e
    if isinstance(value, dict) and 'order' in value and 'coeffs' in value:
        return Cyclotomic([Fraction(str(c)) for c in value['coeffs']], int(value['order']))
    raise ValueError(f"Invalid scalar: {value!r}")


@lru_cache(maxsize=65536)
def binomial(alpha: Fraction, i: int) -> Fraction:
    """Generalized binomial coefficient α(α-1)...(α-i+1)/i!"""
    if i < 0:
        return Fraction(0)
    alpha = Fraction(alpha)
    result = Fraction(1)
    for t in range(i):
        result = result * (alpha - t) / (t + 1)
    return result


# -- exact linear algebra over Q(ω) on numpy object arrays ----------------------------

def matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    """Object-dtype matrix of Cyclotomic entries"""
    n = len(rows)
    m = len(rows[0]) if n else 0
    A = np.empty((n, m), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != m:
            raise ValueError("Ragged matrix rows")
        for j, value in enumerate(row):
            A[i, j] = parse_scalar(value)
    return A


def vector(values: Sequence[Any]) -> np.ndarray:
    v = np.empty(len(values), dtype=object)
    for i, value in enumerate(values):
        v[i] = parse_scalar(value)
    return v


def zeros(*shape: int) -> np.ndarray:
    A = np.empty(shape, dtype=object)
    A.fill(ZERO)
    return A


def identity(n: int) -> np.ndarray:
    A = zeros(n, n)
    for i in range(n):
        A[i, i] = ONE
    return A


def is_zero(A: np.ndarray) -> bool:
    return not any(bool(x) for x in A.flat)


def equal(A: np.ndarray, B: np.ndarray) -> bool:
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))


def mat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[-1] == 0:
        return zeros(*(A.shape[:-1] + B.shape[1:]))
    return np.dot(A, B)


def matrix_power(A: np.ndarray, n: int) -> np.ndarray:
    result = identity(A.shape[0])
    for _ in range(n):
        result = mat_mul(result, A)
    return result


def row_reduce(A: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns"""
    A = A.copy()
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if A[i, c]), None)
        if pivot is None:
            continue
        if pivot != r:
            A[[r, pivot]] = A[[pivot, r]]
        scale = A[r, c].inverse()
        A[r] = [x * scale for x in A[r]]
        for i in range(rows):
            if i != r and A[i, c]:
                factor = A[i, c]
                A[i] = [x - factor * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(row_reduce(A)[1])


def nullspace(A: np.ndarray) -> List[np.ndarray]:
    """Kernel basis; each vector is scaled so its first nonzero coordinate is 1"""
    cols = A.shape[1]
    if A.shape[0] == 0:
        R, pivots = zeros(0, cols), []
    else:
        R, pivots = row_reduce(A)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = zeros(cols)
        v[free] = ONE
        for row, p in enumerate(pivots):
            v[p] = -R[row, free]
        lead = next(x for x in v if x)
        basis.append(np.array([x / lead for x in v], dtype=object))
    return basis


def inverse(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("Only square matrices are invertible")
    R, pivots = row_reduce(np.concatenate([A, identity(n)], axis=1))
    if pivots[:n] != list(range(n)):
        raise ValueError("Matrix is singular")
    return R[:, n:]


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Unique solution of A x = b for square invertible A"""
    return mat_mul(inverse(A), b)


class EchelonBasis:
    """Incremental row-echelon basis of sparse vectors (dict coordinate -> scalar)"""

    def __init__(self):
        self.rows: List[Tuple[Hashable, Dict[Hashable, Cyclotomic]]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, row: Dict[Hashable, Any]) -> Dict[Hashable, Cyclotomic]:
        row = {k: Cyclotomic.coerce(v) for k, v in row.items() if v}
        for pivot, basis_row in self.rows:
            factor = row.get(pivot)
            if factor:
                for k, v in basis_row.items():
                    value = row.get(k, ZERO) - factor * v
                    if value:
                        row[k] = value
                    else:
                        row.pop(k, None)
        return row

    def add(self, row: Dict[Hashable, Any]) -> bool:
        """Insert row; returns False when it was already in the span"""
        row = self.reduce(row)
        if not row:
            return False
        pivot = next(iter(row))
        scale = row[pivot].inverse()
        self.rows.append((pivot, {k: v * scale for k, v in row.items()}))
        return True


def format_vector(labels: Sequence[str], coords: Iterable[Any]) -> str:
    """Human-readable linear combination such as 'e-f' or '2h'"""
    parts = []
    for label, c in zip(labels, coords):
        if not c:
            continue
        c = Cyclotomic.coerce(c)
        if c == 1:
            parts.append(f"+{label}")
        elif c == -1:
            parts.append(f"-{label}")
        else:
            text = str(c)
            if c.is_rational() and c.to_fraction() > 0:
                parts.append(f"+{text}{label}" if '/' not in text else f"+({text}){label}")
            elif c.is_rational():
                parts.append(f"{text}{label}" if '/' not in text else f"-({text[1:]}){label}")
            else:
                parts.append(f"+({text}){label}")
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith('+') else text
