"""Multiqubit view of spin codes and independent certification.

A spin code maps to a permutation-invariant n-qubit code by |j, m> ->
|D_{j-m}^n>.  Everything here checks the qubit side either by dense state
vectors (the oracle) or by Dicke-basis bilinear forms of symmetrized Pauli
errors, which scale to any n.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import comb

import mpmath
import numpy as np

from .cyclo import F64, CycloScalar, NumericConfig, make_field
from .forge import KLReport, SpinCode, kl_entry
from .groups import Character2D, FiniteSubgroup, GroupElement, star_conjugate
from .spin import binomial_scaling, wigner_d, wigner_d_numeric

__all__ = [
    "QubitCode",
    "WeightEnumerator",
    "NotPreserved",
    "TransversalReport",
    "to_multiqubit",
    "dicke_state",
    "expand",
    "pauli_kl_oracle",
    "symmetrized_kl_check",
    "weight_enumerators",
    "logical_action",
    "certify_transversal_group",
    "pauli_type",
    "ORACLE_MAX_N",
    "ENUMERATOR_MAX_N",
]

ORACLE_MAX_N = 21
ENUMERATOR_MAX_N = 9


@dataclass
class QubitCode:
    """Permutation-invariant code given by Dicke amplitudes.

    ``ket0[w]`` is the amplitude on |D_w^n> (normalized).  ``ket0_exact`` is
    the optional exact weight-sum coordinate vector (amplitude on each
    single string of weight w, up to a common scale).
    """

    n: int
    ket0: np.ndarray
    ket1: np.ndarray
    ket0_exact: np.ndarray | None = None
    ket1_exact: np.ndarray | None = None
    provenance: SpinCode | None = field(default=None, repr=False)
    config: NumericConfig = field(default=F64, repr=False)

    def __post_init__(self):
        if len(self.ket0) != self.n + 1 or len(self.ket1) != self.n + 1:
            raise ValueError("codewords must have one amplitude per Dicke weight")

    @property
    def exact(self) -> bool:
        return self.ket0_exact is not None

    @property
    def field(self):
        return next(x.field for x in self.ket0_exact if isinstance(x, CycloScalar)) if self.exact else None

    def sparse(self, which: int = 0) -> dict[int, complex]:
        ket = self.ket0 if which == 0 else self.ket1
        return {w: complex(x) for w, x in enumerate(ket) if abs(complex(x)) > 0}

    def kets(self):
        return (self.ket0, self.ket1)

    def norm_squared_exact(self):
        return sum((comb(self.n, w) * x * x.conj() for w, x in enumerate(self.ket0_exact)), self.field.zero)


def to_multiqubit(code: SpinCode) -> QubitCode:
    """Dicke map: the amplitude at weight w is the spin amplitude at m = j - w."""
    return QubitCode(code.two_j, code.ket0, code.ket1, code.ket0_exact, code.ket1_exact, code, code.config)


# --------------------------------------------------------------------------
# dense helpers


def _weights(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2**n, dtype=np.uint64)).astype(np.int64)


def dicke_state(n: int, w: int) -> np.ndarray:
    """|D_w^n> as a dense vector; qubit q is bit q of the index."""
    v = (_weights(n) == w).astype(float)
    return v / math.sqrt(comb(n, w))


def expand(ket, n: int) -> np.ndarray:
    """Dense 2^n vector of a Dicke-amplitude vector."""
    amps = np.asarray([complex(x) for x in ket]) / binomial_scaling(n)
    return amps[_weights(n)]


def _apply_pauli(v, x: int, z: int, t: np.ndarray) -> np.ndarray:
    y = bin(x & z).count("1")
    sign = 1 - 2 * (np.bitwise_count(np.uint64(z) & (t ^ np.uint64(x))) & 1).astype(np.int64)
    return (1j**y) * sign * v[t ^ np.uint64(x)]


_LETTER = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _pauli_name(x: int, z: int, n: int) -> str:
    return "".join(f"{_LETTER[(x >> q) & 1, (z >> q) & 1]}{q}" for q in range(n) if (x | z) >> q & 1)


def pauli_type(name: str) -> str:
    """Sorted letters of a Pauli string name, e.g. 'Z4X1' -> 'XZ'."""
    return "".join(sorted(c for c in name if c.isalpha()))


def pauli_kl_oracle(code: QubitCode, max_weight: int = 2) -> KLReport:
    """KL check on every Pauli string of weight 1..max_weight, using the full
    2^n state vectors."""
    n = code.n
    if n > ORACLE_MAX_N:
        raise ValueError(f"n = {n} exceeds the dense expansion bound {ORACLE_MAX_N}")
    t = np.arange(2**n, dtype=np.uint64)
    kets = [expand(k, n) for k in code.kets()]
    tol = code.config.tolerance
    entries = []
    for wt in range(1, max_weight + 1):
        for support in combinations(range(n), wt):
            for letters in product(((1, 0), (1, 1), (0, 1)), repeat=wt):
                x = sum(l[0] << q for l, q in zip(letters, support))
                z = sum(l[1] << q for l, q in zip(letters, support))
                imgs = [_apply_pauli(b, x, z, t) for b in kets]
                m = [[complex(np.vdot(a, b)) for b in imgs] for a in kets]
                entries.append(kl_entry(_pauli_name(x, z, n), wt, m, False, tol))
    return KLReport(max_weight, entries, False, "pauli-oracle")


# --------------------------------------------------------------------------
# symmetrized forms


def _type_form(n: int, nx: int, ny: int, nz: int) -> dict:
    """Integer part of <f_w'| X^nx Y^ny Z^nz |f_w> on weight-sum vectors.

    The full value is i^ny times the returned integer.  a, b, c count the
    ones among the X, Y and Z positions of the input string.
    """
    k = nx + ny + nz
    out: dict = {}
    for a in range(nx + 1):
        for b in range(ny + 1):
            for c in range(nz + 1):
                mult = comb(nx, a) * comb(ny, b) * comb(nz, c) * (-1) ** (b + c)
                shift = (nx - a) + (ny - b) + c - (a + b + c)
                for w in range(a + b + c, n - k + a + b + c + 1):
                    key = (w + shift, w)
                    out[key] = out.get(key, 0) + mult * comb(n - k, w - a - b - c)
    return {key: v for key, v in out.items() if v}


def _type_matrix_exact(code: QubitCode, nx, ny, nz, N):
    fld = code.field
    form = _type_form(code.n, nx, ny, nz)
    kets = (code.ket0_exact, code.ket1_exact)
    phase = fld.i**ny
    m = []
    for a in kets:
        row = []
        for b in kets:
            acc = fld.zero
            for (wp, w), v in form.items():
                if not a[wp].is_zero() and not b[w].is_zero():
                    acc = acc + v * a[wp].conj() * b[w]
            row.append(phase * acc / N)
        m.append(row)
    return m


def _type_matrix_numeric(code: QubitCode, nx, ny, nz):
    n = code.n
    form = _type_form(n, nx, ny, nz)
    phase = 1j**ny
    hp = code.config.high_precision
    kets = code.kets()
    m = [[0, 0], [0, 0]]
    for (wp, w), v in form.items():
        if hp:
            s = mpmath.mpf(v) / mpmath.sqrt(mpmath.mpf(comb(n, wp)) * comb(n, w))
        else:
            s = v / math.sqrt(comb(n, wp) * comb(n, w))
        for ia, a in enumerate(kets):
            for ib, b in enumerate(kets):
                m[ia][ib] = m[ia][ib] + s * _conj(a[wp]) * b[w]
    return [[phase * x for x in row] for row in m]


def _conj(x):
    return mpmath.conj(x) if isinstance(x, (mpmath.mpf, mpmath.mpc)) else np.conj(x)


def _types(weight: int):
    for combo in combinations_with_replacement("XYZ", weight):
        yield "".join(combo), combo.count("X"), combo.count("Y"), combo.count("Z")


def symmetrized_kl_check(code: QubitCode, max_weight: int = 2) -> KLReport:
    """KL check on one representative per Pauli type (X, Y, Z, XX, XY, ...).

    For a permutation-invariant code every Pauli string has the same M_E as
    its sorted type, and the symmetrized types of weight <= t span all
    permutation-symmetrized errors of weight <= t.  Works in the (n+1)-dim
    Dicke space, exactly when the code is exact.
    """
    if len(code.ket0) != code.n + 1:
        raise ValueError("code is not supported on the Dicke basis")
    entries = []
    if code.exact:
        N = code.norm_squared_exact()
        for wt in range(1, max_weight + 1):
            for name, nx, ny, nz in _types(wt):
                entries.append(kl_entry(name, wt, _type_matrix_exact(code, nx, ny, nz, N), True, 0))
        return KLReport(max_weight, entries, True, "symmetrized")
    tol = code.config.tolerance
    for wt in range(1, max_weight + 1):
        for name, nx, ny, nz in _types(wt):
            m = _type_matrix_numeric(code, nx, ny, nz)
            entries.append(kl_entry(name, wt, m, False, tol * max(1, code.n) ** wt))
    return KLReport(max_weight, entries, False, "symmetrized")


# --------------------------------------------------------------------------
# weight enumerators


@dataclass(frozen=True)
class WeightEnumerator:
    """Shor-Laflamme enumerators A_i, B_i for a K-dimensional code."""

    A: tuple
    B: tuple
    K: int = 2

    @property
    def distance(self) -> int:
        for i, (a, b) in enumerate(zip(self.A, self.B)):
            if not _close(a, b):
                return i
        return len(self.A)

    def as_integers(self):
        return tuple(int(a) for a in self.A), tuple(int(b) for b in self.B)


def _close(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) < 1e-8 * max(1.0, abs(float(b)))


def weight_enumerators(code: QubitCode, force_large: bool = False, method: str = "types") -> WeightEnumerator:
    """A_i = (1/K^2) sum_{wt E = i} |Tr(E P)|^2 and B_i = (1/K) sum Tr(E P E P).

    ``method='types'`` groups the 4^n strings into permutation classes
    (exact for exact codes); ``method='brute'`` enumerates every string with
    a Walsh-Hadamard transform on the dense vectors.
    """
    n = code.n
    if n > ENUMERATOR_MAX_N and not force_large:
        raise ValueError(f"n = {n} exceeds the enumeration bound {ENUMERATOR_MAX_N}; pass force_large")
    if n > ENUMERATOR_MAX_N:
        warnings.warn(f"enumerating 4^{n} Pauli strings", stacklevel=2)
    if method == "brute":
        return _enumerators_brute(code)
    if method != "types":
        raise ValueError(f"unknown method {method!r}")
    K = 2
    if code.exact:
        N = code.norm_squared_exact()
        zero = code.field.zero
        A = [zero] * (n + 1)
        B = [zero] * (n + 1)
    else:
        A = [0.0] * (n + 1)
        B = [0.0] * (n + 1)
    for nx in range(n + 1):
        for ny in range(n + 1 - nx):
            for nz in range(n + 1 - nx - ny):
                i = nx + ny + nz
                count = math.factorial(n) // (
                    math.factorial(nx) * math.factorial(ny) * math.factorial(nz) * math.factorial(n - i)
                )
                if code.exact:
                    m = _type_matrix_exact(code, nx, ny, nz, N)
                    tr = m[0][0] + m[1][1]
                    A[i] = A[i] + tr * tr.conj() * Fraction(count, K**2)
                    B[i] = B[i] + sum((x * x.conj() for row in m for x in row), zero) * Fraction(count, K)
                else:
                    m = _type_matrix_numeric(code, nx, ny, nz)
                    tr = complex(m[0][0] + m[1][1])
                    A[i] += count * abs(tr) ** 2 / K**2
                    B[i] += count * sum(abs(complex(x)) ** 2 for row in m for x in row) / K
    if code.exact:
        A = [a.to_fraction() for a in A]
        B = [b.to_fraction() for b in B]
    return WeightEnumerator(tuple(A), tuple(B), K)


def _fwht(a: np.ndarray) -> np.ndarray:
    # unnormalized Walsh-Hadamard transform along the last axis
    a = a.copy()
    h = 1
    size = a.shape[-1]
    while h < size:
        a = a.reshape(*a.shape[:-1], size // (2 * h), 2, h)
        x, y = a[..., 0, :].copy(), a[..., 1, :].copy()
        a[..., 0, :], a[..., 1, :] = x + y, x - y
        a = a.reshape(*a.shape[:-3], size)
        h *= 2
    return a


def _enumerators_brute(code: QubitCode) -> WeightEnumerator:
    n = code.n
    dim = 2**n
    t = np.arange(dim, dtype=np.uint64)
    kets = [expand(k, n) for k in code.kets()]
    A = np.zeros(n + 1)
    B = np.zeros(n + 1)
    zs = np.arange(dim, dtype=np.uint64)
    for x in range(dim):
        # <a|X^x Z^z|b> (up to i^{#Y}) for all z at once
        vals = [[_fwht(np.conj(a[t ^ np.uint64(x)]) * b) for b in kets] for a in kets]
        weight = np.bitwise_count(zs | np.uint64(x)).astype(np.int64)
        tr = vals[0][0] + vals[1][1]
        np.add.at(A, weight, np.abs(tr) ** 2 / 4)
        np.add.at(B, weight, sum(np.abs(v) ** 2 for row in vals for v in row) / 2)
    return WeightEnumerator(tuple(float(a) for a in A), tuple(float(b) for b in B), 2)


# --------------------------------------------------------------------------
# logical action


class NotPreserved:
    """Falsy marker: u^{tensor n} moves the code space; ``residual`` says how far."""

    def __init__(self, residual: float):
        self.residual = residual

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotPreserved(residual={self.residual:.3g})"


def _lift_vec(v, fld):
    return np.array([x.lift(fld) for x in v], dtype=object)


def logical_action(code: QubitCode, u):
    """Logical matrix L with u^{tensor n} B = B L, or NotPreserved.

    Exact when the code is exact and ``u`` is a GroupElement; otherwise ``u``
    is used numerically (any 2x2 special unitary).
    """
    n = code.n
    if isinstance(u, GroupElement) and code.exact:
        N1, N2 = code.field.conductor, u.field.conductor
        fld = make_field(math.lcm(N1, N2))
        ug = u.lift(fld)
        kets = [_lift_vec(k, fld) for k in (code.ket0_exact, code.ket1_exact)]
        M = wigner_d(ug, Fraction(n, 2)).matrix
        imgs = [M.dot(k) for k in kets]
        wts = [comb(n, w) for w in range(n + 1)]
        N = code.norm_squared_exact().lift(fld)
        L = [[sum((wts[w] * a[w].conj() * b[w] for w in range(n + 1)), fld.zero) / N for b in imgs] for a in kets]
        resid = 0.0
        for col, img in enumerate(imgs):
            r = img - L[0][col] * kets[0] - L[1][col] * kets[1]
            if any(not x.is_zero() for x in r):
                resid = max(resid, max(abs(x.to_complex()) for x in r))
        if resid > 0:
            return NotPreserved(resid)
        return np.array(L, dtype=object)
    u_num = u.to_numpy() if isinstance(u, GroupElement) else np.asarray(u, dtype=complex)
    if u_num.shape != (2, 2) or not np.allclose(u_num @ u_num.conj().T, np.eye(2), atol=1e-9):
        raise ValueError("u must be a 2x2 unitary")
    det = np.linalg.det(u_num)
    # D^j is defined on SU(2); a U(2) phase e^{i t} contributes e^{i n t}
    root = np.sqrt(det)
    D = wigner_d_numeric(u_num / root, n / 2) * root**n
    B = np.column_stack([np.asarray(code.ket0, dtype=complex), np.asarray(code.ket1, dtype=complex)])
    L = B.conj().T @ D @ B
    resid = float(np.linalg.norm(D @ B - B @ L))
    if resid > code.config.tolerance * max(1, n):
        return NotPreserved(resid)
    return L


@dataclass
class TransversalReport:
    passed: bool
    group: str
    character: str
    entries: list
    logical: dict = field(repr=False, default_factory=dict)

    def pairing(self, index: int) -> str:
        return self.entries[index]["pairing"]

    def to_dict(self):
        return {"passed": self.passed, "group": self.group, "character": self.character, "elements": self.entries}


def _as_element(L, fld):
    try:
        g = GroupElement(*(x for row in L for x in row))
    except StopIteration:
        return None
    return g.lift(fld) if g.field is not fld else g


def certify_transversal_group(code: QubitCode, G: FiniteSubgroup, chi: Character2D) -> TransversalReport:
    """Every g^{tensor n} must preserve the code with tr L(g) = chi(g).

    Each element also gets a pairing label: 'g', '-g', 'g*' or '-g*' when L(g)
    equals g, -g, star(g) or -star(g); otherwise 'other'.
    """
    entries, logical = [], {}
    ok_all = True
    exact = code.exact
    tol = code.config.tolerance
    for k, g in enumerate(G.elements):
        L = logical_action(code, g)
        rec = {"index": k, "preserved": L is not None and not isinstance(L, NotPreserved)}
        if not rec["preserved"]:
            rec.update(trace_ok=False, pairing="none", residual=L.residual)
            entries.append(rec)
            ok_all = False
            continue
        logical[k] = L
        if exact:
            Lg = _as_element(L, L[0][0].field)
            fld = Lg.field
            gg = g.lift(fld)
            trace_ok = Lg.trace() == chi(k).lift(fld)
            cands = {"g": gg, "-g": -gg, "g*": star_conjugate(gg), "-g*": -star_conjugate(gg)}
            pairing = next((lab for lab, h in cands.items() if h == Lg), "other")
        else:
            trace_ok = abs(complex(L[0, 0] + L[1, 1]) - chi(k).to_complex()) < tol * 10
            gm = g.to_numpy()
            sm = star_conjugate(g).to_numpy()
            cands = {"g": gm, "-g": -gm, "g*": sm, "-g*": -sm}
            pairing = next((lab for lab, h in cands.items() if np.abs(np.asarray(L, dtype=complex) - h).max() < tol * 10), "other")
        rec.update(trace_ok=bool(trace_ok), pairing=pairing)
        ok_all &= bool(trace_ok)
        entries.append(rec)
    return TransversalReport(ok_all, G.name, chi.label, entries, logical)
