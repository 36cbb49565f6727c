"""
Formal Series for the Toroidal Workbench
Sparse multivariable series with fractional exponents on a finite window,
binomial expansions and delta-function expansions
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from scalars import ONE, ZERO, Cyclotomic, binomial

logger = logging.getLogger('ToroidalWorkbench.Formal')

Exponents = Tuple[Fraction, ...]


class IncompatibleSeriesError(ValueError):
    """Raised when two series disagree on variables or denominators, or their windows do not overlap"""


class WindowError(ValueError):
    """Raised for malformed windows and for coefficients requested outside one"""


class Window:
    """Inclusive exponent bounds, one (lo, hi) pair per variable"""

    __slots__ = ('bounds',)

    def __init__(self, bounds: Sequence[Tuple[Any, Any]]):
        parsed = []
        for lo, hi in bounds:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi:
                raise WindowError(f"Empty window bound [{lo}, {hi}]")
            parsed.append((lo, hi))
        self.bounds = tuple(parsed)

    @classmethod
    def default(cls, r: int) -> 'Window':
        return cls([(-6, 6)] + [(-4, 4)] * r)

    def contains(self, exponents: Sequence[Fraction]) -> bool:
        return all(lo <= e <= hi for e, (lo, hi) in zip(exponents, self.bounds))

    def __len__(self) -> int:
        return len(self.bounds)

    def intersect(self, other: 'Window') -> 'Window':
        if len(self) != len(other):
            raise WindowError(f"Windows over {len(self)} and {len(other)} variables cannot be intersected")
        return Window([(max(a_lo, b_lo), min(a_hi, b_hi))
                       for (a_lo, a_hi), (b_lo, b_hi) in zip(self.bounds, other.bounds)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Window) and self.bounds == other.bounds

    def __hash__(self) -> int:
        return hash(self.bounds)

    def __repr__(self) -> str:
        return f"Window({[(str(lo), str(hi)) for lo, hi in self.bounds]})"

    def to_json(self) -> List[List[str]]:
        return [[str(lo), str(hi)] for lo, hi in self.bounds]


class FormalSeries:
    """Finite slice of a formal series sum c_e x^e, e ranging over a window

    Exponents of variable i live in (1/denominators[i])Z and are stored scaled
    to integers. ``truncated`` records that terms were dropped because they
    left the window.
    """

    __slots__ = ('variables', 'denominators', 'window', 'terms', 'truncated', 'zero')

    def __init__(self, variables: Sequence[str], denominators: Sequence[int], window: Window,
                 terms: Optional[Dict[Exponents, Any]] = None, truncated: bool = False, zero: Any = ZERO):
        if len(variables) != len(denominators) or len(variables) != len(window):
            raise IncompatibleSeriesError("variables, denominators and window must have equal length")
        if any(int(d) < 1 for d in denominators):
            raise ValueError(f"Invalid exponent denominators: {denominators}")
        self.variables = tuple(variables)
        self.denominators = tuple(int(d) for d in denominators)
        self.window = window
        self.terms: Dict[Tuple[int, ...], Any] = {}
        self.truncated = truncated
        self.zero = zero
        for exponents, coeff in (terms or {}).items():
            self.add_term(exponents, coeff)

    @classmethod
    def toroidal(cls, N: int, r: int, window: Optional[Window] = None,
                 terms: Optional[Dict[Exponents, Any]] = None, zero: Any = ZERO) -> 'FormalSeries':
        """Series in x0^{1/N}, x1..xr"""
        names = ['x0'] + [f'x{i}' for i in range(1, r + 1)]
        return cls(names, [N] + [1] * r, window or Window.default(r), terms, zero=zero)

    @classmethod
    def monomial(cls, variables: Sequence[str], denominators: Sequence[int], window: Window,
                 exponents: Sequence[Any], coeff: Any = ONE) -> 'FormalSeries':
        series = cls(variables, denominators, window)
        series.add_term(tuple(Fraction(e) for e in exponents), coeff)
        return series

    @property
    def N(self) -> int:
        return self.denominators[0]

    @property
    def r(self) -> int:
        return len(self.variables) - 1

    def empty_like(self) -> 'FormalSeries':
        return FormalSeries(self.variables, self.denominators, self.window, zero=self.zero)

    # -- term access --------------------------------------------------------------

    def _scaled(self, exponents: Sequence[Any]) -> Tuple[int, ...]:
        if len(exponents) != len(self.variables):
            raise IncompatibleSeriesError(f"Expected {len(self.variables)} exponents, got {len(exponents)}")
        key = []
        for e, d in zip(exponents, self.denominators):
            scaled = Fraction(e) * d
            if scaled.denominator != 1:
                raise ValueError(f"Exponent {e} is not a multiple of 1/{d}")
            key.append(int(scaled))
        return tuple(key)

    def _unscaled(self, key: Tuple[int, ...]) -> Exponents:
        return tuple(Fraction(k, d) for k, d in zip(key, self.denominators))

    def add_term(self, exponents: Sequence[Any], coeff: Any) -> bool:
        """Accumulate coeff at exponents; returns False (and marks truncation) outside the window"""
        exponents = tuple(Fraction(e) for e in exponents)
        if not self.window.contains(exponents):
            if coeff:
                self.truncated = True
            return False
        key = self._scaled(exponents)
        value = self.terms[key] + coeff if key in self.terms else coeff
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)
        return True

    def coefficient(self, exponents: Sequence[Any]) -> Any:
        exponents = tuple(Fraction(e) for e in exponents)
        if not self.window.contains(exponents):
            raise WindowError(f"Exponents {[str(e) for e in exponents]} lie outside {self.window!r}")
        return self.terms.get(self._scaled(exponents), self.zero)

    def items(self) -> Iterator[Tuple[Exponents, Any]]:
        for key in sorted(self.terms):
            yield self._unscaled(key), self.terms[key]

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- algebra ------------------------------------------------------------------

    def _common_window(self, other: 'FormalSeries') -> Window:
        """Intersection of both windows; variables and denominators must agree"""
        if not isinstance(other, FormalSeries):
            raise TypeError(f"Expected FormalSeries, got {type(other).__name__}")
        if self.variables != other.variables or self.denominators != other.denominators:
            raise IncompatibleSeriesError(
                f"Series over {self.variables}/{self.denominators} and "
                f"{other.variables}/{other.denominators} cannot be combined")
        if self.window == other.window:
            return self.window
        try:
            return self.window.intersect(other.window)
        except WindowError:
            raise IncompatibleSeriesError(f"Windows {self.window!r} and {other.window!r} do not overlap") from None

    def restrict(self, window: Window) -> 'FormalSeries':
        """The terms inside window; truncated once the window shrinks"""
        result = FormalSeries(self.variables, self.denominators, window, zero=self.zero)
        result.truncated = self.truncated or window != self.window
        for key, coeff in self.terms.items():
            result.add_term(self._unscaled(key), coeff)
        return result

    def __add__(self, other: 'FormalSeries') -> 'FormalSeries':
        window = self._common_window(other)
        result = self.restrict(window)
        result.truncated = result.truncated or other.truncated or window != other.window
        for key, coeff in other.terms.items():
            result.add_term(other._unscaled(key), coeff)
        return result

    def __neg__(self) -> 'FormalSeries':
        return self.scale(-ONE)

    def __sub__(self, other: 'FormalSeries') -> 'FormalSeries':
        return self + (-other)

    def scale(self, c: Any) -> 'FormalSeries':
        result = self.empty_like()
        result.truncated = self.truncated
        for key, coeff in self.terms.items():
            value = c * coeff
            if value:
                result.terms[key] = value
        return result

    def __mul__(self, other: 'FormalSeries') -> 'FormalSeries':
        """Product; exact on the window when both factors are supported inside it"""
        window = self._common_window(other)
        result = FormalSeries(self.variables, self.denominators, window, zero=self.zero)
        result.truncated = self.truncated or other.truncated or window != self.window or window != other.window
        for key_a, a in self.terms.items():
            for key_b, b in other.terms.items():
                exponents = tuple(Fraction(x + y, d) for x, y, d in zip(key_a, key_b, self.denominators))
                result.add_term(exponents, a * b)
        return result

    def copy(self) -> 'FormalSeries':
        result = self.empty_like()
        result.terms = dict(self.terms)
        result.truncated = self.truncated
        return result

    def derivative(self, var: str) -> 'FormalSeries':
        """d/dvar, term by term"""
        index = self.variables.index(var)
        d = self.denominators[index]
        result = self.empty_like()
        result.truncated = self.truncated
        for key, coeff in self.terms.items():
            power = Fraction(key[index], d)
            if power:
                exponents = list(self._unscaled(key))
                exponents[index] -= 1
                result.add_term(exponents, power * coeff)
        return result

    def twist(self, var: str, zeta: Cyclotomic) -> 'FormalSeries':
        """Substitute var^{1/den} -> zeta * var^{1/den}"""
        index = self.variables.index(var)
        result = self.empty_like()
        result.truncated = self.truncated
        for key, coeff in self.terms.items():
            result.terms[key] = (zeta ** key[index]) * coeff
        return result

    def residue(self, var: str) -> 'FormalSeries':
        """Coefficient of var^{-1}, as a series in the remaining variables"""
        index = self.variables.index(var)
        lo, hi = self.window.bounds[index]
        if not lo <= -1 <= hi:
            raise WindowError(f"Window for {var} does not contain the exponent -1")
        keep = [i for i in range(len(self.variables)) if i != index]
        result = FormalSeries([self.variables[i] for i in keep], [self.denominators[i] for i in keep],
                              Window([self.window.bounds[i] for i in keep]), zero=self.zero)
        result.truncated = self.truncated
        target = -self.denominators[index]
        for key, coeff in self.terms.items():
            if key[index] == target:
                result.terms[tuple(key[i] for i in keep)] = coeff
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.variables == other.variables and self.denominators == other.denominators
                and self.terms == other.terms)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FormalSeries({self.variables}, terms={len(self.terms)}, truncated={self.truncated})"

    def to_json(self) -> Dict[str, Any]:
        terms = []
        for exponents, coeff in self.items():
            terms.append([[str(e) for e in exponents],
                          coeff.to_json() if hasattr(coeff, 'to_json') else str(coeff)])
        return {
            'variables': list(self.variables),
            'denominators': list(self.denominators),
            'N': self.N,
            'r': self.r,
            'window': self.window.to_json(),
            'terms': terms,
            'truncated': self.truncated,
        }


def _integer_range(lo: Fraction, hi: Fraction) -> range:
    return range(math.ceil(lo), math.floor(hi) + 1)


@lru_cache(maxsize=65536)
def expansion_coefficient(alpha: Fraction, i: int, sign: int = 1) -> Fraction:
    """Coefficient of first^{alpha-i} second^i in (first + sign*second)^alpha"""
    return binomial(Fraction(alpha), i) * (sign ** i)


def binomial_expand(alpha: Any, first: str, second: str, window: Window, sign: int = 1,
                    variables: Optional[Sequence[str]] = None,
                    denominators: Optional[Sequence[int]] = None) -> FormalSeries:
    """(first + sign*second)^alpha expanded in nonnegative integral powers of second"""
    alpha = Fraction(alpha)
    variables = tuple(variables or (first, second))
    if denominators is None:
        denominators = [alpha.denominator if v == first else 1 for v in variables]
    series = FormalSeries(variables, denominators, window)
    a, b = variables.index(first), variables.index(second)
    lo, hi = window.bounds[b]
    for i in _integer_range(max(lo, Fraction(0)), hi):
        exponents = [Fraction(0)] * len(variables)
        exponents[a] = alpha - i
        exponents[b] = Fraction(i)
        series.add_term(exponents, Cyclotomic.rational(expansion_coefficient(alpha, i, sign)))
    # the expansion is infinite when alpha is not a nonnegative integer
    if not (alpha.denominator == 1 and 0 <= alpha <= hi):
        series.truncated = True
    return series


def delta_expand(alpha: Any, window: Window, first: str = 'z1', second: Optional[str] = 'z2',
                 sign: int = -1, bottom: str = 'z0', variables: Optional[Sequence[str]] = None,
                 denominators: Optional[Sequence[int]] = None) -> FormalSeries:
    """bottom^{-1} δ(u/bottom) (u/bottom)^alpha with u = first + sign*second

    Equals sum_n bottom^{-1-n-alpha} u^{n+alpha}, each power of u expanded in
    nonnegative powers of ``second``. Every coefficient inside the window is a
    single term, so the slice is exact.
    """
    alpha = Fraction(alpha)
    if variables is None:
        variables = (bottom, first) if second is None else (bottom, first, second)
    variables = tuple(variables)
    if denominators is None:
        denominators = [alpha.denominator if v in (bottom, first) else 1 for v in variables]
    series = FormalSeries(variables, denominators, window)
    ib, ia = variables.index(bottom), variables.index(first)
    b_lo, b_hi = window.bounds[ib]
    a_lo, a_hi = window.bounds[ia]
    if second is None:
        i_range = range(0, 1)
    else:
        s_lo, s_hi = window.bounds[variables.index(second)]
        i_range = _integer_range(max(s_lo, Fraction(0)), s_hi)
    for n in _integer_range(-1 - alpha - b_hi, -1 - alpha - b_lo):
        for i in i_range:
            power = n + alpha - i
            if not a_lo <= power <= a_hi:
                continue
            exponents = [Fraction(0)] * len(variables)
            exponents[ib] = -1 - n - alpha
            exponents[ia] = power
            if second is not None:
                exponents[variables.index(second)] = Fraction(i)
            series.add_term(exponents, Cyclotomic.rational(expansion_coefficient(n + alpha, i, sign)))
    series.truncated = True
    return series


def delta_series(numerator: str, bottom: str, alpha: Any, window: Window,
                 denominators: Optional[Sequence[int]] = None) -> FormalSeries:
    """bottom^{-1} δ(numerator/bottom) (numerator/bottom)^alpha over the variables (bottom, numerator)"""
    return delta_expand(alpha, window, first=numerator, second=None, bottom=bottom,
                        variables=(bottom, numerator), denominators=denominators)
