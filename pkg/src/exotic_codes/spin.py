"""Spin-j representations of SU(2) elements and related multiplicities.

Two bases are used for the (2j+1)-dimensional spin space, both indexed by
the weight ``w = j - m`` (so row 0 is m = j):

* ``orthonormal``: the usual |j, m> basis.
* ``monomial``: e_w = sum of all |s> with Hamming weight w, the unnormalized
  Dicke vector.  It equals sqrt(C(n, w)) |j, j-w> with n = 2j, and as a
  symmetric polynomial it is C(n, w) x^(n-w) y^w.

In the monomial basis every D^j(g) has entries in the field of g, so the
exact pipeline never meets a square root.  The orthonormal entry is
``M[w', w] * sqrt(C(n, w') / C(n, w))``.  Inner products in monomial
coordinates use the diagonal metric C(n, w).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import flint
import mpmath
import numpy as np
import scipy.linalg

from .cyclo import F64, CycloScalar, NumericConfig
from .groups import Character2D, FiniteSubgroup, GroupElement

__all__ = [
    "as_two_j",
    "SpinOperator",
    "LieAlgebraElement",
    "wigner_d",
    "wigner_d_numeric",
    "angular_momentum",
    "dicke_index",
    "spin_character",
    "irrep_multiplicity",
    "tensor_multiplicity",
    "schur_weyl_multiplicity",
    "binomial_scaling",
    "metric",
]


def as_two_j(j) -> int:
    """2j as an int from an int, Fraction, float or string like '7/2'."""
    v = Fraction(j) if not isinstance(j, float) else Fraction(j).limit_denominator(2)
    two_j = 2 * v
    if two_j.denominator != 1 or two_j < 0:
        raise ValueError(f"{j!r} is not a nonnegative half-integer")
    return int(two_j)


def binomial_scaling(n: int) -> np.ndarray:
    """sqrt(C(n, w)): monomial coordinates times this give orthonormal ones."""
    return np.sqrt(np.array([float(comb(n, w)) for w in range(n + 1)]))


def metric(n: int) -> list[int]:
    return [comb(n, w) for w in range(n + 1)]


@dataclass(frozen=True)
class SpinOperator:
    """Operator on spin j; ``matrix`` is exact (monomial basis) or numeric
    (orthonormal basis), as recorded in ``basis``."""

    two_j: int
    matrix: np.ndarray
    basis: str = "monomial"

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def exact(self) -> bool:
        return self.basis == "monomial"

    def exact_entry(self, r: int, c: int) -> tuple[CycloScalar, Fraction]:
        """Orthonormal entry as ``(x, q)`` meaning ``x * sqrt(q)``."""
        if not self.exact:
            raise ValueError("numeric operator has no exact entries")
        n = self.two_j
        return self.matrix[r, c], Fraction(comb(n, r), comb(n, c))

    def numeric(self, config: NumericConfig = F64) -> np.ndarray:
        """Orthonormal-basis matrix as complex128 (f64) or mpc objects (hp)."""
        if not self.exact:
            return self.matrix
        n = self.two_j
        if config.high_precision:
            with mpmath.workprec(config.bits):
                s = [mpmath.sqrt(comb(n, w)) for w in range(n + 1)]
                out = np.empty((n + 1, n + 1), dtype=object)
                for r in range(n + 1):
                    for c in range(n + 1):
                        out[r, c] = _to_num(self.matrix[r, c], config) * s[r] / s[c]
            return out
        s = binomial_scaling(n)
        raw = np.array([[complex(_to_num(x, config)) for x in row] for row in self.matrix], dtype=complex)
        return raw * s[:, None] / s[None, :]

    def __matmul__(self, other: SpinOperator) -> SpinOperator:
        if self.basis != other.basis or self.two_j != other.two_j:
            raise ValueError("incompatible spin operators")
        return SpinOperator(self.two_j, self.matrix.dot(other.matrix), self.basis)


def _to_num(x, config):
    if isinstance(x, CycloScalar):
        return x.to_complex(config)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator if config.high_precision else x.numerator / x.denominator
    return x


def dicke_index(j, m) -> int:
    """Weight w = j - m of the Dicke state |D_w^{2j}> matching |j, m>."""
    two_j, two_m = as_two_j(j), 2 * Fraction(m)
    if two_m.denominator != 1 or abs(two_m) > two_j or (two_j - two_m) % 2:
        raise ValueError(f"m={m} is not a valid projection for j={j}")
    return int((two_j - two_m) // 2)


# --------------------------------------------------------------------------
# Wigner D, exact


def _powers(x, n, modulus):
    out = [x.field.one.poly]
    for _ in range(n):
        out.append((out[-1] * x.poly) % modulus)
    return out


def mono_columns(g: GroupElement, n: int, rows=None, cols=None) -> dict:
    """Unreduced monomial-basis entries of D^{n/2}(g) as raw fmpq_polys.

    Column w is the coefficient list of (a x + c y)^(n-w) (b x + d y)^w,
    rescaled by C(n, w) / C(n, r) to pass from monomials to weight sums.
    Returns ``{(r, c): poly}`` for the requested rows and columns.
    """
    mod = g.field.modulus
    rows = range(n + 1) if rows is None else rows
    cols = range(n + 1) if cols is None else cols
    pa, pb, pc, pd = (_powers(x, n, mod) for x in g.entries)
    out = {}
    for w in cols:
        k_max = n - w
        for r in rows:
            acc = None
            for k in range(max(0, r - w), min(k_max, r) + 1):
                l = r - k
                # C(n-w,k) a^(n-w-k) c^k * C(w,l) b^(w-l) d^l
                t = ((pa[k_max - k] * pc[k]) % mod) * ((pb[w - l] * pd[l]) % mod) * (comb(k_max, k) * comb(w, l))
                acc = t if acc is None else acc + t
            out[r, w] = acc * flint.fmpq(comb(n, w), comb(n, r))
    return out


def wigner_d(g: GroupElement, j) -> SpinOperator:
    """Exact D^j(g) in the monomial basis."""
    n = as_two_j(j)
    fld = g.field
    raw = mono_columns(g, n)
    M = np.empty((n + 1, n + 1), dtype=object)
    for (r, c), p in raw.items():
        M[r, c] = fld.zero if p is None else fld.reduce(p)
    return SpinOperator(n, M, "monomial")


# --------------------------------------------------------------------------
# Wigner D, numeric


def _ladders_numeric(n: int):
    w = np.arange(n + 1, dtype=float)
    jp = np.diag(np.sqrt(w[1:] * (n - w[1:] + 1)), 1)
    jz = np.diag(n / 2 - w)
    return jp, jz, jp.T.copy()


def wigner_d_numeric(g, j, config: NumericConfig = F64) -> np.ndarray:
    """Orthonormal-basis D^j(g) from the exponential of the spin-j generator.

    ``g`` may be a GroupElement or a 2x2 unitary with det 1.  For Re tr g < 0
    the matrix of -g is used together with D(-g) = (-1)^(2j) D(g).
    """
    n = as_two_j(j)
    if config.high_precision:
        return _wigner_d_hp(g, n, config)
    m = g.to_numpy() if isinstance(g, GroupElement) else np.asarray(g, dtype=complex)
    sign = 1
    if (m[0, 0] + m[1, 1]).real < 0:
        m, sign = -m, (-1) ** n
    K = (m - m.conj().T) / 2
    s = np.sqrt(max(0.0, np.linalg.det(K).real))  # det K = sin^2(alpha)
    alpha = np.arcsin(min(1.0, s))
    scale = alpha / s if s > 1e-300 else 1.0
    jp, jz, jm = _ladders_numeric(n)
    gen = scale * (K[0, 1] * jp + K[1, 0] * jm + (K[0, 0] - K[1, 1]) * jz)
    return sign * scipy.linalg.expm(gen)


def _wigner_d_hp(g, n, config):
    with mpmath.workprec(config.bits + 20):
        if isinstance(g, GroupElement):
            m = [[x.to_complex(config) for x in row] for row in ((g.a, g.b), (g.c, g.d))]
        else:
            m = [[mpmath.mpc(x) for x in row] for row in g]
        sign = 1
        if (m[0][0] + m[1][1]).real < 0:
            m = [[-x for x in row] for row in m]
            sign = (-1) ** n
        K = [[(m[r][c] - mpmath.conj(m[c][r])) / 2 for c in range(2)] for r in range(2)]
        detk = (K[0][0] * K[1][1] - K[0][1] * K[1][0]).real
        s = mpmath.sqrt(max(mpmath.mpf(0), detk))
        scale = mpmath.asin(min(mpmath.mpf(1), s)) / s if s > 0 else mpmath.mpf(1)
        gen = mpmath.zeros(n + 1, n + 1)
        for w in range(n + 1):
            gen[w, w] = scale * (K[0][0] - K[1][1]) * (mpmath.mpf(n) / 2 - w)
            if w >= 1:
                v = mpmath.sqrt(w * (n - w + 1))
                gen[w - 1, w] = scale * K[0][1] * v
                gen[w, w - 1] = scale * K[1][0] * v
        E = mpmath.expm(gen)
        out = np.empty((n + 1, n + 1), dtype=object)
        for r in range(n + 1):
            for c in range(n + 1):
                out[r, c] = sign * E[r, c]
    return out


# --------------------------------------------------------------------------
# angular momentum


def angular_momentum(j, alpha: str, basis: str = "monomial") -> SpinOperator:
    """J_+, J_z or J_- (``alpha`` in '+', 'z', '-').

    Monomial basis entries are rational: J_- e_w = (w+1) e_(w+1),
    J_+ e_w = (n-w+1) e_(w-1), J_z e_w = (n/2 - w) e_w.
    """
    n = as_two_j(j)
    if alpha not in ("+", "z", "-"):
        raise ValueError(f"unknown component {alpha!r}")
    if basis == "orthonormal":
        jp, jz, jm = _ladders_numeric(n)
        return SpinOperator(n, {"+": jp, "z": jz, "-": jm}[alpha].astype(complex), "orthonormal")
    M = np.full((n + 1, n + 1), Fraction(0), dtype=object)
    for w in range(n + 1):
        if alpha == "z":
            M[w, w] = Fraction(n, 2) - w
        elif alpha == "-" and w < n:
            M[w + 1, w] = Fraction(w + 1)
        elif alpha == "+" and w > 0:
            M[w - 1, w] = Fraction(n - w + 1)
    return SpinOperator(n, M, "monomial")


@dataclass(frozen=True)
class LieAlgebraElement:
    """c_plus J_+ + c_zero J_z + c_minus J_-, coefficients exact or complex."""

    c_plus: object = 0
    c_zero: object = 0
    c_minus: object = 0

    def defining(self, fld) -> np.ndarray:
        """2x2 realization at spin 1/2 over ``fld``."""
        cp, cz, cm = (fld(x) if not isinstance(x, CycloScalar) else x for x in (self.c_plus, self.c_zero, self.c_minus))
        return np.array([[cz / 2, cp], [cm, -cz / 2]], dtype=object)

    def realize(self, j, basis: str = "monomial") -> SpinOperator:
        ops = [angular_momentum(j, a, basis) for a in ("+", "z", "-")]
        M = sum(c * op.matrix for c, op in zip((self.c_plus, self.c_zero, self.c_minus), ops))
        return SpinOperator(ops[0].two_j, np.asarray(M), basis)

    @classmethod
    def basis(cls) -> dict[str, LieAlgebraElement]:
        return {"+": cls(1, 0, 0), "z": cls(0, 1, 0), "-": cls(0, 0, 1)}


# --------------------------------------------------------------------------
# characters and multiplicities


def _chebyshev(t, n):
    # character of spin n/2 at an element of trace t
    h_prev, h = t.field.one, t
    if n == 0:
        return h_prev
    for _ in range(n - 1):
        h_prev, h = h, t * h - h_prev
    return h


def spin_character(g: GroupElement, j) -> CycloScalar:
    return _chebyshev(g.trace(), as_two_j(j))


def _integer_or_fail(x: CycloScalar, what: str) -> int:
    if not x.is_rational():
        raise ArithmeticError(f"{what} is not rational: {x!r}")
    q = x.to_fraction()
    if q.denominator != 1 or q < 0:
        raise ArithmeticError(f"{what} is not a nonnegative integer: {q}")
    return int(q)


def _class_sum(G: FiniteSubgroup, chi: Character2D, f) -> CycloScalar:
    total = G.field.zero
    for c, members in enumerate(G.classes):
        total = total + len(members) * chi.values[c].conj() * f(G.representative(c))
    return total / G.order


def irrep_multiplicity(G: FiniteSubgroup, chi: Character2D, j) -> int:
    n = as_two_j(j)
    return _integer_or_fail(_class_sum(G, chi, lambda g: _chebyshev(g.trace(), n)), "multiplicity")


def tensor_multiplicity(G: FiniteSubgroup, chi: Character2D, n: int) -> int:
    return _integer_or_fail(_class_sum(G, chi, lambda g: g.trace() ** n), "tensor multiplicity")


def schur_weyl_multiplicity(n: int, j) -> int:
    """Multiplicity of spin j inside (C^2)^{tensor n}."""
    two_j = as_two_j(j)
    if n < 1 or two_j > n or (n - two_j) % 2:
        raise ValueError(f"spin {j} does not occur in {n} qubits")
    k = (n - two_j) // 2
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)
