"""
Exact arithmetic in real quadratic orders with star-conjugation, and
eigen-data of small integer matrices.
"""
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from .conf import get_setting
from .exceptions import (
    CoefficientOverflowError,
    ConfigurationError,
    SpectralConditioningWarning,
)

logger = logging.getLogger(__name__)

INT128_MIN = -(2 ** 127)
INT128_MAX = 2 ** 127 - 1


def check_int128(value, what='coefficient'):
    """
    Guard an exact integer against leaving the signed 128-bit range.

    Args:
        value: Python integer
        what: name used in the error message

    Returns:
        The value itself
    """
    if not INT128_MIN <= value <= INT128_MAX:
        raise CoefficientOverflowError(f"{what} {value} exceeds the 128-bit signed range")
    return value


def exact_sign(u, v, disc):
    """
    Sign of u + v*sqrt(disc) for rationals u, v and a positive integer disc.

    Args:
        u: integer or Fraction
        v: integer or Fraction
        disc: positive integer

    Returns:
        -1, 0 or 1
    """
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    # opposite signs: compare squares
    diff = u * u - v * v * disc
    if diff > 0:
        return su
    if diff < 0:
        return sv
    return 0


@dataclass(frozen=True)
class QuadraticOrder:
    """Order Z[theta] with theta**2 = trace*theta + norm."""
    trace: int
    norm: int

    def __post_init__(self):
        if self.discriminant <= 0:
            raise ConfigurationError(
                f"theta^2 = {self.trace}*theta + {self.norm} has no real roots"
            )

    @classmethod
    def golden(cls):
        return cls(1, 1)

    @classmethod
    def noble(cls, p):
        if p < 1:
            raise ConfigurationError(f"noble mean parameter must be >= 1, got {p}")
        return cls(p, 1)

    @property
    def discriminant(self):
        return self.trace * self.trace + 4 * self.norm

    @property
    def is_unit_order(self):
        """True when theta is a unit, so division by theta stays in the order."""
        return abs(self.norm) == 1

    @property
    def is_pisot(self):
        return self.theta > 1 > abs(self.theta_star)

    def theta_mp(self, star=False):
        """High-precision real embedding of theta (or of its conjugate)."""
        root = mpmath.sqrt(self.discriminant)
        return (self.trace - root) / 2 if star else (self.trace + root) / 2

    def evaluate(self, a, b, star=False):
        """
        Evaluate a + b*theta in one real embedding.

        The sum is formed at mpmath working precision before rounding, so
        large cancelling coefficients still give an accurate double.
        """
        with mpmath.workdps(get_setting('MP_DPS')):
            return float(a + b * self.theta_mp(star))

    @property
    def theta(self):
        return self.evaluate(0, 1)

    @property
    def theta_star(self):
        return self.evaluate(0, 1, star=True)

    @property
    def sqrt_discriminant(self):
        return math.sqrt(self.discriminant)

    def element(self, a, b=0):
        return AlgebraicNumber(a, b, self)

    def __str__(self):
        return f"Z[theta], theta^2 = {self.trace} theta + {self.norm}"


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """Exact element a + b*theta of a quadratic order."""
    a: int
    b: int
    order: QuadraticOrder

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("AlgebraicNumber coefficients must be integers")
        check_int128(self.a)
        check_int128(self.b)

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.order != self.order:
                raise ConfigurationError("cannot combine elements of different orders")
            return other
        if isinstance(other, int):
            return AlgebraicNumber(other, 0, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.a + other.a, self.b + other.b, self.order)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(-self.a, -self.b, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.a - other.a, self.b - other.b, self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t, n = self.order.trace, self.order.norm
        bd = self.b * other.b
        return AlgebraicNumber(
            self.a * other.a + bd * n,
            self.a * other.b + self.b * other.a + bd * t,
            self.order,
        )

    __rmul__ = __mul__

    def star(self):
        """Algebraic conjugate: theta -> theta_star = trace - theta."""
        return AlgebraicNumber(self.a + self.b * self.order.trace, -self.b, self.order)

    def norm(self):
        """Field norm x * star(x), an integer."""
        t, n = self.order.trace, self.order.norm
        return self.a * self.a + self.a * self.b * t - n * self.b * self.b

    def times_theta(self, times=1):
        x = self
        for _ in range(times):
            x = AlgebraicNumber(x.b * x.order.norm, x.a + x.b * x.order.trace, x.order)
        return x

    def divide_by_theta(self, times=1):
        """Exact division by theta**times; theta must be a unit."""
        if not self.order.is_unit_order:
            raise ConfigurationError(f"theta is not a unit in {self.order}")
        t, n = self.order.trace, self.order.norm
        x = self
        for _ in range(times):
            x = AlgebraicNumber(x.b - x.a * t * n, x.a * n, x.order)
        return x

    def exact_divide(self, other):
        """Quotient self/other when it lies in the order, else ValueError."""
        other = self._coerce(other)
        denominator = other.norm()
        if denominator == 0:
            raise ZeroDivisionError("division by zero element")
        numerator = self * other.star()
        if numerator.a % denominator or numerator.b % denominator:
            raise ValueError(f"{self} is not divisible by {other} in {self.order}")
        return AlgebraicNumber(numerator.a // denominator, numerator.b // denominator, self.order)

    def sign(self):
        t = self.order.trace
        return exact_sign(2 * self.a + self.b * t, self.b, self.order.discriminant)

    def compare(self, other):
        """Exact three-way comparison with an element, integer or rational."""
        if isinstance(other, float):
            other = Fraction(other)
        if isinstance(other, Fraction):
            t = self.order.trace
            return exact_sign(2 * (self.a - other) + self.b * t, self.b, self.order.discriminant)
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare AlgebraicNumber with {type(other).__name__}")
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return (self.a, self.b, self.order) == (other.a, other.b, other.order)
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, Fraction):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.order))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __float__(self):
        return self.order.evaluate(self.a, self.b)

    def star_value(self):
        return self.order.evaluate(self.a, self.b, star=True)

    def __repr__(self):
        return f"AlgebraicNumber({self.a}, {self.b}, t={self.order.trace}, n={self.order.norm})"

    def __str__(self):
        sign = '-' if self.b < 0 else '+'
        return f"{self.a} {sign} {abs(self.b)}theta"


def star(x):
    return x.star()


def fibonacci(n):
    """
    Fibonacci number f_n for any integer n, with f_0 = 0 and f_1 = 1.

    Args:
        n: index, negative values allowed (f_{-n} = (-1)**(n+1) f_n)

    Returns:
        Exact integer; CoefficientOverflowError past the 128-bit range
    """
    m = abs(n)
    previous, current = 0, 1
    if m == 0:
        return 0
    for _ in range(m - 1):
        previous, current = current, check_int128(previous + current, f"fibonacci({n})")
    if n < 0 and m % 2 == 0:
        return -current
    return current


@dataclass(frozen=True)
class IntegerMatrix:
    """Small square integer matrix (substitution matrices)."""
    rows: tuple

    MAX_DIMENSION = 8

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        d = len(rows)
        if d == 0 or d > self.MAX_DIMENSION or any(len(row) != d for row in rows):
            raise ConfigurationError(f"expected a square matrix of dimension 1..{self.MAX_DIMENSION}")
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def identity(cls, d):
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def dimension(self):
        return len(self.rows)

    @property
    def array(self):
        return np.array(self.rows, dtype=np.int64)

    @property
    def determinant(self):
        return int(sympy.Matrix(self.rows).det())

    def characteristic_polynomial(self):
        """Integer coefficients, leading first."""
        x = sympy.Symbol('x')
        return [int(c) for c in sympy.Matrix(self.rows).charpoly(x).all_coeffs()]

    def is_primitive(self):
        """Some power strictly positive; Wielandt bound (d-1)**2 + 1."""
        pattern = (self.array > 0).astype(np.int64)
        power = pattern.copy()
        for _ in range((self.dimension - 1) ** 2 + 1):
            if np.all(power > 0):
                return True
            power = np.minimum(power @ pattern, 1)
        return bool(np.all(power > 0))


@dataclass(frozen=True)
class SpectralData:
    """Perron-Frobenius data and full spectrum of an integer matrix."""
    matrix: IntegerMatrix
    pf_eigenvalue: float
    right: np.ndarray
    left: np.ndarray
    eigenvalues: np.ndarray
    moduli: tuple
    determinant: int

    @property
    def subdominant_moduli(self):
        """Distinct moduli below the PF eigenvalue, largest first."""
        return tuple(m for m in collapse(self.moduli[1:]) if m > 0)


def collapse(values, tol=1e-9):
    """Sort descending and merge entries closer than tol."""
    result = []
    for value in sorted(values, reverse=True):
        if result and (value == result[-1] or abs(value - result[-1]) <= tol):
            continue
        result.append(value)
    return result


def _polish_root(coefficients, root, steps=4):
    derivative = np.polyder(coefficients)
    for _ in range(steps):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        root = root - np.polyval(coefficients, root) / slope
    return root


def _null_vector(matrix):
    # right singular vector of the smallest singular value
    _, _, vh = np.linalg.svd(matrix)
    return np.abs(vh[-1].real)


def _moduli(M, eigenvalues, pf=None):
    moduli = np.abs(eigenvalues)
    if M.dimension == 3 and pf is not None:
        complex_pair = np.abs(eigenvalues.imag) > 1e-12
        if np.count_nonzero(complex_pair) == 2:
            moduli[complex_pair] = math.sqrt(abs(M.determinant) / pf)
    return moduli


def spectral_data(M):
    """
    Perron-Frobenius pair and full spectrum of a primitive integer matrix.

    Args:
        M: IntegerMatrix, primitive

    Returns:
        SpectralData with right eigenvector summing to 1 and left
        eigenvector with minimal entry 1
    """
    if not M.is_primitive():
        raise ConfigurationError(f"matrix {M.rows} is not primitive")
    A = M.array.astype(float)
    eigenvalues = np.linalg.eigvals(A)
    real_mask = np.abs(eigenvalues.imag) <= 1e-12
    pf = float(np.max(eigenvalues.real[real_mask]))
    pf = float(_polish_root(np.array(M.characteristic_polynomial(), dtype=float), pf))

    identity = np.eye(M.dimension)
    right = _null_vector(A - pf * identity)
    right = right / right.sum()
    left = _null_vector(A.T - pf * identity)
    left = left / left.min()

    order = np.argsort(-np.abs(eigenvalues), kind='stable')
    eigenvalues = eigenvalues[order]
    moduli = _moduli(M, eigenvalues, pf)
    moduli[0] = pf

    gap = get_setting('CONDITIONING_GAP')
    if M.dimension > 1 and moduli[1] > pf * (1 - gap):
        warnings.warn(
            f"PF eigenvalue {pf} is not separated from the subdominant modulus {moduli[1]}",
            SpectralConditioningWarning,
            stacklevel=2,
        )
    logger.debug("spectral data for %s: lambda=%.15g moduli=%s", M.rows, pf, moduli)
    return SpectralData(
        matrix=M,
        pf_eigenvalue=pf,
        right=right,
        left=left,
        eigenvalues=eigenvalues,
        moduli=tuple(float(m) for m in moduli),
        determinant=M.determinant,
    )


def lyapunov_spectrum(M):
    """
    Distinct log-moduli of the eigenvalues of M, largest first.

    A zero eigenvalue contributes -inf.
    """
    eigenvalues = np.linalg.eigvals(M.array.astype(float))
    pf = None
    if M.dimension == 3 and M.is_primitive():
        pf = spectral_data(M).pf_eigenvalue
    moduli = _moduli(M, eigenvalues, pf)
    logs = [math.log(m) if m > 1e-14 else float('-inf') for m in moduli]
    return collapse(logs)


def _signs(x):
    return (x > 0).astype(np.int64) - (x < 0).astype(np.int64)


def exact_sign_array(u, v, disc):
    """
    Vectorised exact_sign over integer arrays.

    Arrays with entries beyond 2**31 are promoted to Python integers so the
    squares cannot overflow.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    big = u.size and (np.max(np.abs(u)) > 2 ** 31 or np.max(np.abs(v)) > 2 ** 31)
    if big or u.dtype == object or v.dtype == object:
        u = u.astype(object)
        v = v.astype(object)
    su = _signs(u)
    sv = _signs(v)
    sd = _signs(u * u - v * v * disc)
    same = (su == 0) | (su == sv)
    opposite = np.where(sd > 0, su, np.where(sd < 0, sv, 0))
    return np.where(sv == 0, su, np.where(same, sv, opposite))
