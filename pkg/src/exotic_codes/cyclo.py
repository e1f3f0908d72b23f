"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis of ``zeta_N`` reduced modulo the
N-th cyclotomic polynomial; the polynomial arithmetic itself is delegated to
FLINT's ``fmpq_poly``.  Numeric shadows (float or mpmath) are produced on
demand through :meth:`CycloScalar.to_complex`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
import mpmath

__all__ = [
    "CycloField",
    "CycloScalar",
    "FieldMismatchError",
    "NumericConfig",
    "field_arithmetic",
    "galois_apply",
    "in_two_power_subfield",
    "make_field",
    "recognize_sqrt_rational",
    "two_power_part",
]

_P = flint.fmpq_poly


class FieldMismatchError(ValueError):
    """Raised when scalars from fields of different conductor are combined."""


# --------------------------------------------------------------------------
# numeric configuration


@dataclass(frozen=True)
class NumericConfig:
    """Precision and comparison tolerance for every numeric shadow.

    ``precision`` is ``"f64"`` (53-bit mantissa) or ``"hp"`` (128-bit).  The
    tolerance defaults to 1e-9 and 1e-30 respectively.
    """

    precision: str = "f64"
    tolerance: float | None = None

    def __post_init__(self):
        if self.precision not in ("f64", "hp"):
            raise ValueError(f"unknown precision {self.precision!r}")
        if self.tolerance is None:
            object.__setattr__(self, "tolerance", 1e-9 if self.precision == "f64" else 1e-30)

    @property
    def bits(self) -> int:
        return 53 if self.precision == "f64" else 128

    @property
    def high_precision(self) -> bool:
        return self.precision == "hp"

    @classmethod
    def from_env(cls, tolerance: float | None = None) -> NumericConfig:
        return cls(os.environ.get("EXOTIC_CODES_PRECISION", "f64"), tolerance)


F64 = NumericConfig()


# --------------------------------------------------------------------------
# fields


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def two_power_part(n: int) -> int:
    """Largest power of two dividing ``n``."""
    return n & -n


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _fraction(q: flint.fmpq) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class CycloField:
    """Context for Q(zeta_N).  Obtain instances through :func:`make_field`."""

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        self.modulus = _P(list(flint.fmpz_poly.cyclotomic(conductor).coeffs()))
        self.degree = self.modulus.degree()
        self.zero = CycloScalar._make(self, _P([]))
        self.one = CycloScalar._make(self, _P([1]))
        self._zeta_numeric: dict[int, list] = {}

    def __repr__(self):
        return f"CycloField({self.conductor})"

    def __reduce__(self):
        return make_field, (self.conductor,)

    # construction -----------------------------------------------------------

    def __call__(self, value) -> CycloScalar:
        if isinstance(value, CycloScalar):
            if value.field is self:
                return value
            return value.lift(self)
        return CycloScalar._make(self, _P([_to_fmpq(value)]))

    def from_coeffs(self, coeffs) -> CycloScalar:
        """Element sum_k coeffs[k] * zeta^k (reduced; any length allowed)."""
        return CycloScalar._make(self, _P([_to_fmpq(c) for c in coeffs]) % self.modulus)

    def zeta(self, k: int = 1) -> CycloScalar:
        k %= self.conductor
        return CycloScalar._make(self, _P([0] * k + [1]) % self.modulus)

    def reduce(self, poly) -> CycloScalar:
        return CycloScalar._make(self, poly % self.modulus)

    @property
    def i(self) -> CycloScalar:
        if self.conductor % 4:
            raise ValueError(f"i is not in Q(zeta_{self.conductor})")
        return self.zeta(self.conductor // 4)

    def sqrt(self, d: int) -> CycloScalar:
        """Principal square root of the integer ``d`` if it lies in this field.

        Built from quadratic Gauss sums; raises ``ValueError`` when the
        conductor of Q(sqrt(d)) does not divide N.
        """
        if d == 0:
            return self.zero
        square, free = 1, 1
        for p, e in _factor(abs(d)).items():
            square *= p ** (e // 2)
            if e % 2:
                free *= p
        N = self.conductor
        root = self.one
        for p in _factor(free):
            if p == 2:
                if N % 8:
                    raise ValueError(f"sqrt(2) is not in Q(zeta_{N})")
                root = root * (self.zeta(N // 8) + self.zeta(-N // 8))
            else:
                if N % p:
                    raise ValueError(f"sqrt({p}) is not in Q(zeta_{N})")
                step = N // p
                gauss = self.zero
                for a in range(1, p):
                    legendre = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
                    gauss = gauss + legendre * self.zeta(a * step)
                root = root * gauss
        target = d // (square * square)
        if root * root != target:
            # the Gauss sums produced sqrt(-target); rotate by i
            root = root * self.i
        if root * root != target:
            raise AssertionError("square root construction failed")
        value = root.to_complex()
        if (d > 0 and value.real < 0) or (d < 0 and value.imag < 0):
            root = -root
        return root * square

    @property
    def golden_ratio(self) -> CycloScalar:
        return (1 + self.sqrt(5)) / 2

    # numeric embedding --------------------------------------------------------

    def _zeta_powers(self, bits: int):
        table = self._zeta_numeric.get(bits)
        if table is None:
            with mpmath.workprec(bits + 40):
                table = [mpmath.expjpi(mpmath.mpf(2 * k) / self.conductor) for k in range(self.degree)]
            self._zeta_numeric[bits] = table
        return table


@lru_cache(maxsize=None)
def make_field(conductor: int) -> CycloField:
    """Shared field context for Q(zeta_N)."""
    return CycloField(conductor)


# --------------------------------------------------------------------------
# scalars


class CycloScalar:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("field", "poly", "_hash")

    @classmethod
    def _make(cls, field: CycloField, poly) -> CycloScalar:
        obj = object.__new__(cls)
        obj.field = field
        obj.poly = poly
        obj._hash = None
        return obj

    def __reduce__(self):
        return _rebuild_scalar, (self.field.conductor, [str(c) for c in self.poly.coeffs()])

    @property
    def conductor(self) -> int:
        return self.field.conductor

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Power-basis coordinates, length ``field.degree``."""
        raw = [_fraction(c) for c in self.poly.coeffs()]
        return tuple(raw + [Fraction(0)] * (self.field.degree - len(raw)))

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    # coercion -----------------------------------------------------------------

    def _coerce(self, other):
        if type(other) is CycloScalar:
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"conductor mismatch: {self.field.conductor} vs {other.field.conductor}"
                )
            return other.poly
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return _P([_to_fmpq(other)])
        return None

    # arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return CycloScalar._make(self.field, self.poly + p)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return CycloScalar._make(self.field, self.poly - p)

    def __rsub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return CycloScalar._make(self.field, p - self.poly)

    def __mul__(self, other):
        if type(other) is CycloScalar:
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"conductor mismatch: {self.field.conductor} vs {other.field.conductor}"
                )
            return CycloScalar._make(self.field, (self.poly * other.poly) % self.field.modulus)
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return CycloScalar._make(self.field, self.poly * _to_fmpq(other))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return CycloScalar._make(self.field, -self.poly)

    def __pos__(self):
        return self

    def inverse(self) -> CycloScalar:
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, s, _ = self.poly.xgcd(self.field.modulus)
        return CycloScalar._make(self.field, (s / g[0]) % self.field.modulus)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycloScalar._make(self.field, self.poly / _to_fmpq(other))
        if type(other) is CycloScalar:
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.field.one
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ---------------------------------------------------------------

    def __eq__(self, other):
        if type(other) is CycloScalar:
            return self.field is other.field and self.poly == other.poly
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.poly == _P([_to_fmpq(other)])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.poly.degree() <= 0:
                self._hash = hash(self.to_fraction())
            else:
                numer = tuple(int(c) for c in self.poly.numer().coeffs())
                self._hash = hash((self.field.conductor, numer, int(self.poly.denom())))
        return self._hash

    def __bool__(self):
        return not self.poly.is_zero()

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    # structure ----------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        if self.poly.is_zero():
            return Fraction(0)
        return _fraction(self.poly.coeffs()[0])

    def galois(self, k: int) -> CycloScalar:
        """Image under zeta -> zeta**k (k coprime to the conductor)."""
        N = self.field.conductor
        if math.gcd(k, N) != 1:
            raise ValueError(f"{k} is not coprime to the conductor {N}")
        k %= N
        if k == 1 or self.poly.degree() <= 0:
            return self
        coeffs = [flint.fmpq(0)] * N
        for i, c in enumerate(self.poly.coeffs()):
            coeffs[(i * k) % N] += c
        return CycloScalar._make(self.field, _P(coeffs) % self.field.modulus)

    def conj(self) -> CycloScalar:
        """Complex conjugate (the automorphism zeta -> zeta**-1)."""
        return self.galois(-1)

    def is_real(self) -> bool:
        return self == self.conj()

    def lift(self, target: CycloField | int) -> CycloScalar:
        """Same number viewed inside Q(zeta_M) for a multiple M of N."""
        if isinstance(target, int):
            target = make_field(target)
        N, M = self.field.conductor, target.conductor
        if target is self.field:
            return self
        if M % N:
            raise FieldMismatchError(f"Q(zeta_{N}) does not embed in Q(zeta_{M})")
        step = M // N
        coeffs = [flint.fmpq(0)] * (step * max(self.poly.length(), 1))
        for i, c in enumerate(self.poly.coeffs()):
            coeffs[i * step] = c
        return CycloScalar._make(target, _P(coeffs) % target.modulus)

    # numerics -----------------------------------------------------------------

    def to_complex(self, config: NumericConfig = F64):
        """Numeric embedding at zeta = exp(2 pi i / N).

        Returns a Python ``complex`` at 53 bits, an ``mpmath.mpc`` otherwise.
        The sum is carried out with 40 guard bits so the float result is
        correctly rounded in practice.
        """
        bits = config.bits
        table = self.field._zeta_powers(bits)
        with mpmath.workprec(bits + 40):
            total = mpmath.mpc(0)
            for c, z in zip(self.poly.coeffs(), table):
                if c != 0:
                    total += (mpmath.mpf(int(c.p)) / int(c.q)) * z
        if bits <= 53:
            return complex(float(total.real), float(total.imag))
        with mpmath.workprec(bits):
            return +total

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        if self.is_rational():
            return f"CycloScalar({self.field.conductor}, {self.to_fraction()})"
        return f"CycloScalar({self.field.conductor}, {self.poly})"


def _rebuild_scalar(conductor: int, coeffs: list[str]) -> CycloScalar:
    field = make_field(conductor)
    return CycloScalar._make(field, _P([flint.fmpq(*map(int, c.split("/"))) if "/" in c else flint.fmpq(int(c)) for c in coeffs]))


# --------------------------------------------------------------------------
# operation-level helpers


def field_arithmetic(a: CycloScalar, b: CycloScalar, op: str) -> CycloScalar:
    """``op`` is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(b, CycloScalar) and b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def galois_apply(a: CycloScalar, k: int) -> CycloScalar:
    return a.galois(k)


@lru_cache(maxsize=None)
def _fixing_exponents(conductor: int) -> tuple[int, ...]:
    # Galois elements of Q(zeta_N) that fix its maximal 2-power cyclotomic subfield
    two = two_power_part(conductor)
    return tuple(
        k for k in range(1, conductor) if math.gcd(k, conductor) == 1 and (k - 1) % two == 0 and k != 1
    )


def in_two_power_subfield(a: CycloScalar) -> bool:
    """True iff ``a`` lies in Q(zeta_{2^v}) with 2^v the 2-part of the conductor.

    For conductor 40 this is the test "a is in Q(zeta_8)"; any element failing
    it lies in no Q(zeta_{2^r}) at all.
    """
    return all(a.galois(k) == a for k in _fixing_exponents(a.field.conductor))


# --------------------------------------------------------------------------
# recognition of signed square roots of rationals


def _exact_fraction(x) -> Fraction:
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * (Fraction(2) ** int(exp))
    return Fraction(float(x))


def recognize_sqrt_rational(x, max_denominator: int = 2**20, config: NumericConfig = F64):
    """Find ``(sign, p/q)`` with ``sign * sqrt(p/q) ~= x`` and ``q <= max_denominator``.

    The candidate comes from the continued-fraction expansion of ``x**2``
    (``Fraction.limit_denominator``).  Returns ``None`` when no candidate is
    within ``config.tolerance``.
    """
    tol = config.tolerance
    if isinstance(x, (complex, mpmath.mpc)):
        if abs(x.imag) >= tol:
            return None
        x = x.real
    if abs(x) < tol:
        return (1, Fraction(0))
    sign = 1 if x > 0 else -1
    with mpmath.workprec(config.bits + 20):
        xm = mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x
        square = _exact_fraction(xm * xm) if config.high_precision else _exact_fraction(float(x) ** 2)
        candidate = square.limit_denominator(max_denominator)
        if candidate <= 0:
            return None
        back = mpmath.sqrt(mpmath.mpf(candidate.numerator) / candidate.denominator)
        if abs(sign * back - xm) >= tol:
            return None
    return (sign, candidate)
