"""Spin-code construction: projectors, codeword extraction, spin-side
Knill-Laflamme checks and the twisted group sum Gamma~.

Exact objects live in the weight-sum basis of :mod:`exotic_codes.spin`
(``f_w`` = sum of weight-w strings); numeric ones in the orthonormal basis.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

import mpmath
import numpy as np

from .cyclo import F64, CycloScalar, NumericConfig, recognize_sqrt_rational
from .groups import Character2D, FiniteSubgroup, GroupElement, faithful_2d_characters, gates, group_by_label
from .linalg import kernel
from .spin import (
    LieAlgebraElement,
    SpinOperator,
    as_two_j,
    binomial_scaling,
    irrep_multiplicity,
    mono_columns,
    wigner_d_numeric,
)

__all__ = [
    "NoIrrepAvailable",
    "EvenN",
    "SpinCode",
    "KLEntry",
    "KLReport",
    "EXCEPTIONAL_N",
    "EXACT_LIMIT",
    "group_projector",
    "logical_z_projector",
    "extract_codewords",
    "spin_kl_check",
    "gamma_tilde",
    "gamma_scan",
    "default_scan_pairs",
    "build_family",
    "character_by_label",
    "apply_ladders",
    "is_self_adjoint",
]

EXCEPTIONAL_N = (1, 3, 5, 9, 11, 15, 21)

# exact arithmetic is used up to this n unless told otherwise
EXACT_LIMIT = int(os.environ.get("EXOTIC_CODES_EXACT_LIMIT", "41"))


class NoIrrepAvailable(ValueError):
    """The requested irrep does not occur in spin j."""


class EvenN(ValueError):
    """Faithful 2-dim irreps only occur for an odd number of qubits."""


def character_by_label(G: FiniteSubgroup, label: str) -> Character2D:
    for ch in faithful_2d_characters(G):
        if ch.label == label:
            return ch
    raise KeyError(f"{G.name} has no faithful 2-dim character {label!r}")


# --------------------------------------------------------------------------
# projectors


def _kept_elements(G: FiniteSubgroup, chi: Character2D, n: int):
    # D(-g) = (-1)^n D(g) and chi(-g) = -chi(g) for faithful chi, so for odd n
    # the terms for g and -g coincide; keep one of each pair and double.
    minus = G.index.get(-G.elements[G.identity_index])
    if n % 2 == 1 and minus is not None and chi(minus) == -chi.degree:
        T = G.table
        return [k for k in range(G.order) if k < int(T[minus, k])], 2
    return list(range(G.order)), 1


def _projector_exact(G, chi, n, rows, cols):
    fld = G.field
    kept, mult = _kept_elements(G, chi, n)
    cls = G.class_of
    acc: dict[int, dict] = {}
    for k in kept:
        raw = mono_columns(G.elements[k], n, rows, cols)
        bucket = acc.setdefault(int(cls[k]), {})
        for key, p in raw.items():
            if p is None:
                continue
            bucket[key] = p if key not in bucket else bucket[key] + p
    scale = Fraction(2 * mult, G.order)
    out = np.empty((len(rows), len(cols)), dtype=object)
    for a, r in enumerate(rows):
        for b, c in enumerate(cols):
            total = None
            for ci, bucket in acc.items():
                p = bucket.get((r, c))
                if p is None:
                    continue
                t = (p % fld.modulus) * chi.values[ci].conj().poly
                total = t if total is None else total + t
            out[a, b] = fld.zero if total is None else fld.reduce(total) * scale
    return out


def _projector_hp(G, chi, n, idx, config):
    # exact sums, rounded once: cheaper than 120 mpmath exponentials and exact to the last bit
    P = _projector_exact(G, chi, n, idx, idx)
    with mpmath.workprec(config.bits + 20):
        s = [mpmath.sqrt(comb(n, w)) for w in idx]
        out = np.empty((len(idx), len(idx)), dtype=object)
        for a in range(len(idx)):
            for b in range(len(idx)):
                out[a, b] = P[a, b].to_complex(config) * s[a] / s[b]
    return out


def _projector_numeric(G, chi, n, config):
    if config.high_precision:
        return _projector_hp(G, chi, n, list(range(n + 1)), config)
    kept, mult = _kept_elements(G, chi, n)
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for k in kept:
        out += np.conj(chi(k).to_complex()) * wigner_d_numeric(G.elements[k], n / 2)
    return out * (2 * mult / G.order)


def group_projector(G: FiniteSubgroup, chi: Character2D, j, mode: str = "exact", config: NumericConfig = F64) -> SpinOperator:
    """(2/|G|) sum_g conj(chi(g)) D^j(g).

    ``mode='exact'`` gives the weight-sum-basis matrix over the field of G;
    ``mode='numeric'`` the orthonormal-basis matrix.
    """
    n = as_two_j(j)
    if mode == "exact":
        idx = list(range(n + 1))
        return SpinOperator(n, _projector_exact(G, chi, n, idx, idx), "monomial")
    if mode == "numeric":
        return SpinOperator(n, _projector_numeric(G, chi, n, config), "orthonormal")
    raise ValueError(f"unknown mode {mode!r}")


def logical_z_projector(j) -> SpinOperator:
    """Projector onto the even-weight span, (1 + Z^{tensor n}) / 2.

    In terms of the determinant-one Z this is (1 + i^n D^j(Z)) / 2, which
    keeps |0...0> and makes Z^{tensor n} act as logical -Z for n = 7.
    """
    n = as_two_j(j)
    if n % 2 == 0:
        raise ValueError("logical Z projector needs 2j odd")
    M = np.full((n + 1, n + 1), Fraction(0), dtype=object)
    for w in range(0, n + 1, 2):
        M[w, w] = Fraction(1)
    return SpinOperator(n, M, "monomial")


def is_self_adjoint(op: SpinOperator) -> bool:
    """Exact test that a weight-sum-basis operator is Hermitian in the
    orthonormal basis: C(n,w') M[w',w] = conj(C(n,w) M[w,w'])."""
    n = op.two_j
    M = op.matrix
    for r in range(n + 1):
        for c in range(r, n + 1):
            x, y = comb(n, r) * M[r, c], comb(n, c) * M[c, r]
            if x != (y.conj() if isinstance(y, CycloScalar) else y):
                return False
    return True


# --------------------------------------------------------------------------
# codes


@dataclass
class SpinCode:
    """Codeword pair of a spin-j code.

    ``ket0_exact``/``ket1_exact`` are weight-sum coordinates (unnormalized,
    real) or None in numeric mode; ``ket0``/``ket1`` are normalized
    orthonormal coordinates.  Row w is m = j - w.
    """

    two_j: int
    group: str
    character: str
    selector: tuple
    ket0: np.ndarray
    ket1: np.ndarray
    ket0_exact: np.ndarray | None = None
    ket1_exact: np.ndarray | None = None
    basis: np.ndarray | None = None
    config: NumericConfig = field(default=F64, repr=False)

    @property
    def n(self) -> int:
        return self.two_j

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def exact(self) -> bool:
        return self.ket0_exact is not None

    @property
    def mu(self) -> int | None:
        return None if self.basis is None else len(self.basis)

    @property
    def field(self):
        return next(x.field for x in self.ket0_exact if isinstance(x, CycloScalar)) if self.exact else None

    def norm_squared_exact(self) -> CycloScalar:
        n = self.two_j
        return sum((comb(n, w) * x * x.conj() for w, x in enumerate(self.ket0_exact)), self.field.zero)

    def squared_coefficients(self, which: int = 0) -> list:
        """|amplitude|^2 on each Dicke state, exact (Fraction where rational)."""
        if not self.exact:
            ket = self.ket0 if which == 0 else self.ket1
            return [abs(complex(x)) ** 2 for x in ket]
        ket = self.ket0_exact if which == 0 else self.ket1_exact
        N = self.norm_squared_exact()
        out = []
        for w, x in enumerate(ket):
            v = comb(self.two_j, w) * x * x.conj() / N
            out.append(v.to_fraction() if v.is_rational() else v)
        return out

    def signs(self, which: int = 0) -> list[int]:
        ket = self.ket0 if which == 0 else self.ket1
        tol = self.config.tolerance
        out = []
        for x in ket:
            re = complex(x).real if not self.config.high_precision else float(mpmath.re(x))
            out.append(0 if abs(re) < max(tol, 1e-300) else (1 if re > 0 else -1))
        return out

    def with_selector(self, selector) -> SpinCode:
        """Same eigenspace, different point on it; no projector is recomputed."""
        if self.basis is None:
            raise ValueError("code carries no eigenspace basis")
        sel = _parse_selector(selector, self.mu)
        n, cfg = self.two_j, self.config
        if self.exact:
            fld = self.field
            ket0 = np.full(n + 1, fld.zero, dtype=object)
            for s, row in zip(sel, self.basis):
                if s:
                    ket0 = ket0 + np.array([s * x for x in row], dtype=object)
            num0 = _to_numeric_vec(ket0, cfg)
            return replace(
                self, selector=sel, ket0_exact=ket0, ket1_exact=ket0[::-1].copy(),
                ket0=_normalize_numeric(num0, n, cfg), ket1=_normalize_numeric(num0[::-1], n, cfg),
            )
        if cfg.high_precision:
            with mpmath.workprec(cfg.bits + 20):
                o = sum((mpmath.mpf(s.numerator) / s.denominator * self.basis[i] for i, s in enumerate(sel)))
                mono = np.array([mpmath.re(x) / mpmath.sqrt(comb(n, w)) for w, x in enumerate(o)], dtype=object)
        else:
            o = sum(float(s) * self.basis[i] for i, s in enumerate(sel))
            mono = np.real(o / binomial_scaling(n))
        return replace(
            self, selector=sel,
            ket0=_normalize_numeric(mono, n, cfg), ket1=_normalize_numeric(mono[::-1], n, cfg),
        )

    def recognized(self, which: int = 0) -> list:
        """Per weight ``(sign, p/q)`` with amplitude sign*sqrt(p/q), or None."""
        sq = self.squared_coefficients(which)
        sg = self.signs(which)
        ket = self.ket0 if which == 0 else self.ket1
        out = []
        for s, q, x in zip(sg, sq, ket):
            if isinstance(q, Fraction):
                out.append((s if q else 1, q))
            elif self.exact:
                # exact square outside Q: no rational form exists
                out.append(None)
            else:
                out.append(recognize_sqrt_rational(x, config=self.config))
        return out


def _normalize_numeric(v_mono, n, config):
    # weight-sum coordinates -> normalized orthonormal coordinates
    if config.high_precision:
        with mpmath.workprec(config.bits + 20):
            o = [x * mpmath.sqrt(comb(n, w)) for w, x in enumerate(v_mono)]
            nrm = mpmath.sqrt(sum(abs(x) ** 2 for x in o))
            return np.array([x / nrm for x in o], dtype=object)
    o = np.asarray(v_mono, dtype=complex) * binomial_scaling(n)
    o = o / np.linalg.norm(o)
    return o.real.copy() if np.allclose(o.imag, 0, atol=config.tolerance) else o


def _parse_selector(selector, mu):
    if selector is None:
        selector = [1] + [0] * (mu - 1)
    sel = []
    for x in selector:
        if isinstance(x, str):
            sel.append(Fraction(x))
        elif isinstance(x, (int, Fraction)):
            sel.append(Fraction(x))
        else:
            sel.append(Fraction(float(x)))
    if len(sel) != mu:
        raise ValueError(f"selector has length {len(sel)}, multiplicity is {mu}")
    if all(x == 0 for x in sel):
        raise ValueError("selector is zero")
    return tuple(sel)


def _extract_exact(G, chi, n, sel, mu):
    fld = G.field
    even = list(range(0, n + 1, 2))
    P = _projector_exact(G, chi, n, even, even)
    A = P.copy()
    for k in range(len(even)):
        A[k, k] = A[k, k] - 1
    K = kernel(A, zero=fld.zero, one=fld.one)
    if len(K) != mu:
        raise AssertionError(f"eigenspace dimension {len(K)} differs from multiplicity {mu}")
    basis = np.full((mu, n + 1), fld.zero, dtype=object)
    basis[:, even] = K
    ket0 = np.full(n + 1, fld.zero, dtype=object)
    for s, row in zip(sel, basis):
        if s:
            ket0 = ket0 + np.array([s * x for x in row], dtype=object)
    return basis, ket0


def _rref_numeric(B, tol):
    B = np.array(B, dtype=complex)
    rows, cols = B.shape
    r, pivots = 0, []
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(B[r:, c])))
        if abs(B[p, c]) < tol:
            continue
        B[[r, p]] = B[[p, r]]
        B[r] = B[r] / B[r, c]
        for i in range(rows):
            if i != r:
                B[i] = B[i] - B[i, c] * B[r]
        pivots.append(c)
        r += 1
    return B[:r], pivots


def _extract_numeric(G, chi, n, sel, mu, config):
    even = np.arange(0, n + 1, 2)
    if config.high_precision:
        P = _projector_hp(G, chi, n, [int(e) for e in even], config)
        with mpmath.workprec(config.bits + 20):
            Pee = mpmath.matrix(P.tolist())
            Pee = (Pee + Pee.H) / 2
            E, Q = mpmath.eighe(Pee) if hasattr(mpmath, "eighe") else mpmath.eigh(Pee)
            idx = [k for k in range(len(even)) if E[k] > mpmath.mpf(1) / 2]
            vecs = [[Q[r, k] for r in range(len(even))] for k in idx]
            B, piv = _rref_numeric_mp(vecs)
            basis = np.full((mu, n + 1), mpmath.mpf(0), dtype=object)
            for i, (row, p) in enumerate(zip(B, piv)):
                sq = mpmath.sqrt(comb(n, int(even[p])))
                for k, e in enumerate(even):
                    basis[i, e] = row[k] * sq
            # basis rows are orthonormal-coordinate images of the canonical weight-sum rows
            o = sum((s * basis[i] for i, s in enumerate(sel)), np.full(n + 1, mpmath.mpf(0), dtype=object))
            mono = np.array([x / mpmath.sqrt(comb(n, w)) for w, x in enumerate(o)], dtype=object)
            return basis, mono, len(idx)
    P = _projector_numeric(G, chi, n, config)
    Pee = P[np.ix_(even, even)]
    Pee = (Pee + Pee.conj().T) / 2
    vals, vecs = np.linalg.eigh(Pee)
    keep = vals > 0.5
    B, piv = _rref_numeric(vecs[:, keep].T, 1e-8)
    basis = np.zeros((len(B), n + 1), dtype=complex)
    s = binomial_scaling(n)
    for i, p in enumerate(piv):
        basis[i, even] = B[i] * s[even[p]]
    o = sum(float(x) * basis[i] for i, x in enumerate(sel)) if len(B) == mu else np.zeros(n + 1)
    mono = o / s
    return basis, mono, int(keep.sum())


def _rref_numeric_mp(vecs):
    rows = [list(v) for v in vecs]
    cols = len(rows[0]) if rows else 0
    r, pivots = 0, []
    for c in range(cols):
        if r == len(rows):
            break
        p = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
        if abs(rows[p][c]) < mpmath.mpf(10) ** (-20):
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def extract_codewords(
    G: FiniteSubgroup,
    chi: Character2D,
    j,
    selector=None,
    mode: str = "exact",
    config: NumericConfig = F64,
) -> SpinCode:
    """Codewords from the +1 eigenspace of Pi_G Pi_Z.

    The eigenspace basis is the reduced echelon basis in weight-sum
    coordinates (first nonzero entry 1).  ``|0>`` is the selector combination
    of it and ``|1> = X^{tensor n} |0>``, i.e. weights reversed.
    """
    n = as_two_j(j)
    if n % 2 == 0:
        raise EvenN(f"n = {n} is even")
    mu = irrep_multiplicity(G, chi, Fraction(n, 2))
    if mu == 0:
        raise NoIrrepAvailable(f"{chi.label} of {G.name} does not occur at j = {n}/2")
    sel = _parse_selector(selector, mu)
    if mode == "exact":
        basis, ket0 = _extract_exact(G, chi, n, sel, mu)
        ket1 = ket0[::-1].copy()
        num0 = _to_numeric_vec(ket0, config)
        return SpinCode(
            n, G.name, chi.label, sel,
            _normalize_numeric(num0, n, config), _normalize_numeric(num0[::-1], n, config),
            ket0, ket1, basis, config,
        )
    if mode == "numeric":
        basis, mono, dim = _extract_numeric(G, chi, n, sel, mu, config)
        if dim != mu:
            raise AssertionError(f"numeric eigenspace dimension {dim} differs from multiplicity {mu}")
        mono_r = np.array([mpmath.re(x) for x in mono], dtype=object) if config.high_precision else np.real(mono)
        return SpinCode(
            n, G.name, chi.label, sel,
            _normalize_numeric(mono_r, n, config), _normalize_numeric(mono_r[::-1], n, config),
            None, None, basis, config,
        )
    raise ValueError(f"unknown mode {mode!r}")


def _to_numeric_vec(v, config):
    if config.high_precision:
        return np.array([mpmath.re(x.to_complex(config)) for x in v], dtype=object)
    return np.array([x.to_complex().real for x in v])


# --------------------------------------------------------------------------
# Knill-Laflamme on the spin side


def apply_ladders(word: str, v, n: int, zero=0):
    """Apply J_{word[0]} ... J_{word[-1]} (rightmost first) to weight-sum
    coordinates ``v`` (exact) using the integer ladder formulas."""
    v = list(v)
    for a in reversed(word):
        out = [zero] * (n + 1)
        for w, x in enumerate(v):
            if x == 0:
                continue
            if a == "z":
                out[w] = out[w] + x * Fraction(n - 2 * w, 2)
            elif a == "-" and w < n:
                out[w + 1] = out[w + 1] + x * (w + 1)
            elif a == "+" and w > 0:
                out[w - 1] = out[w - 1] + x * (n - w + 1)
        v = out
    return v


def _ladder_numeric(word, v, n):
    w = np.arange(n + 1, dtype=float)
    up = np.sqrt(w[1:] * (n - w[1:] + 1))  # <w-1|J+|w>
    v = np.asarray(v, dtype=complex)
    for a in reversed(word):
        out = np.zeros(n + 1, dtype=complex)
        if a == "z":
            out = (n / 2 - w) * v
        elif a == "-":
            out[1:] = up * v[:-1]
        else:
            out[:-1] = up * v[1:]
        v = out
    return v


def _ladder_mp(word, v, n):
    v = list(v)
    for a in reversed(word):
        out = [mpmath.mpf(0)] * (n + 1)
        for w in range(n + 1):
            if a == "z":
                out[w] = (mpmath.mpf(n) / 2 - w) * v[w]
            elif a == "-" and w < n:
                out[w + 1] = mpmath.sqrt((w + 1) * (n - w)) * v[w]
            elif a == "+" and w > 0:
                out[w - 1] = mpmath.sqrt(w * (n - w + 1)) * v[w]
        v = out
    return v


@dataclass
class KLEntry:
    name: str
    rank: int
    matrix: object
    deviation: float
    passed: bool
    zero: bool

    def to_dict(self):
        return {"error": self.name, "rank": self.rank, "deviation": self.deviation, "passed": self.passed, "zero": self.zero}


@dataclass
class KLReport:
    """Per-error 2x2 matrices M_E = [<a|E|b>] and verdicts.

    ``distance`` is the smallest checked rank that fails, or max_rank + 1.
    """

    max_rank: int
    entries: list
    exact: bool
    method: str = ""

    def by_rank(self) -> dict[int, bool]:
        out: dict[int, bool] = {}
        for e in self.entries:
            out[e.rank] = out.get(e.rank, True) and e.passed
        return out

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def distance(self) -> int:
        fails = [r for r, ok in self.by_rank().items() if not ok]
        return min(fails) if fails else self.max_rank + 1

    def rank_zero(self, rank: int) -> bool:
        return all(e.zero for e in self.entries if e.rank == rank)

    def entry(self, name: str) -> KLEntry:
        return next(e for e in self.entries if e.name == name)

    def to_dict(self):
        return {
            "method": self.method,
            "exact": self.exact,
            "max_rank": self.max_rank,
            "passed": self.passed,
            "distance": self.distance,
            "by_rank": {str(k): v for k, v in sorted(self.by_rank().items())},
            "max_deviation": max((e.deviation for e in self.entries), default=0.0),
            "errors": [e.to_dict() for e in self.entries],
        }


def kl_entry(name, rank, m, exact, tol) -> KLEntry:
    """Verdict for one 2x2 matrix M_E: is it a multiple of the identity?"""
    if exact:
        off = (m[0][1], m[1][0], m[0][0] - m[1][1])
        dev = max(abs(complex(x.to_complex() if isinstance(x, CycloScalar) else x)) for x in off)
        ok = all(x == 0 for x in off)
        zero = ok and m[0][0] == 0
        return KLEntry(name, rank, m, float(dev), ok, zero)
    off = (m[0][1], m[1][0], m[0][0] - m[1][1])
    dev = float(max(abs(x) for x in off))
    return KLEntry(name, rank, m, dev, dev < tol, dev < tol and float(abs(m[0][0])) < tol)


def spin_kl_check(code: SpinCode, d: int = 3) -> KLReport:
    """KL conditions for all words in J_+, J_z, J_- of length < d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = code.two_j
    entries = []
    if code.exact:
        fld = code.field
        kets = (code.ket0_exact, code.ket1_exact)
        N = code.norm_squared_exact()
        wts = [comb(n, w) for w in range(n + 1)]
        for p in range(0, d):
            for word in ("".join(t) for t in product("+z-", repeat=p)):
                imgs = [apply_ladders(word, k, n, fld.zero) for k in kets]
                m = [[sum((wts[w] * a[w].conj() * b[w] for w in range(n + 1)), fld.zero) / N for b in imgs] for a in kets]
                entries.append(kl_entry(word or "1", p, m, True, 0))
        return KLReport(d - 1, entries, True, "spin")
    kets = (code.ket0, code.ket1)
    tol = code.config.tolerance
    hp = code.config.high_precision
    for p in range(0, d):
        for word in ("".join(t) for t in product("+z-", repeat=p)):
            if hp:
                with mpmath.workprec(code.config.bits + 20):
                    imgs = [_ladder_mp(word, k, n) for k in kets]
                    m = [[mpmath.fsum(mpmath.conj(x) * y for x, y in zip(a, b)) for b in imgs] for a in kets]
            else:
                imgs = [_ladder_numeric(word, k, n) for k in kets]
                m = [[complex(np.vdot(a, b)) for b in imgs] for a in kets]
            scale = max(1.0, float((n / 2 + 1) ** p))
            entries.append(kl_entry(word or "1", p, m, False, tol * scale))
    return KLReport(d - 1, entries, False, "spin")


# --------------------------------------------------------------------------
# Gamma~


@lru_cache(maxsize=128)
def _adjoint_data(G: FiniteSubgroup):
    # g E g^{-1} for E in (J+, Jz, J-) at spin 1/2, entries as reduced polys
    fld = G.field
    basis = [e.defining(fld) for e in LieAlgebraElement.basis().values()]
    out = []
    for g in G.elements:
        gm, gi = g.matrix, g.inverse().matrix
        out.append([[[x.poly for x in row] for row in gm.dot(E).dot(gi)] for E in basis])
    return out


def gamma_tilde(G: FiniteSubgroup, chi: Character2D, g_prime, E: LieAlgebraElement) -> np.ndarray:
    """sum_g conj(chi(g)) conj(chi(g^-1 g')) g E g^-1 in the defining representation."""
    gp = _element_index(G, g_prime)
    coeffs = [G.field(x) if not isinstance(x, CycloScalar) else x for x in (E.c_plus, E.c_zero, E.c_minus)]
    return _gamma_matrix(G, chi, gp, coeffs)


def _element_index(G, g):
    if isinstance(g, (int, np.integer)):
        if not 0 <= g < G.order:
            raise ValueError("element index out of range")
        return int(g)
    if g not in G.index:
        raise ValueError("g' is not an element of G")
    return G.index[g]


def _gamma_matrix(G, chi, gp, coeffs):
    fld = G.field
    mod = fld.modulus
    adj = _adjoint_data(G)
    vals = [v.conj().poly for v in chi.per_element()]
    T, inv = G.table, G.inverse_index
    acc = [[None, None], [None, None]]
    active = [(b, c.poly) for b, c in enumerate(coeffs) if not c.is_zero()]
    for g in range(G.order):
        w = (vals[g] * vals[int(T[inv[g], gp])]) % mod
        if w.is_zero():
            continue
        for b, cb in active:
            wb = (w * cb) % mod if cb != 1 else w
            A = adj[g][b]
            for r in range(2):
                for c in range(2):
                    if A[r][c].is_zero():
                        continue
                    t = wb * A[r][c]
                    acc[r][c] = t if acc[r][c] is None else acc[r][c] + t
    return np.array(
        [[fld.zero if acc[r][c] is None else fld.reduce(acc[r][c]) for c in range(2)] for r in range(2)],
        dtype=object,
    )


@dataclass
class ScanRow:
    group: str
    character: str
    zero: bool
    witness: tuple | None = None

    def to_dict(self):
        return {"group": self.group, "character": self.character, "identically_zero": self.zero, "witness": self.witness}


def _scan_one(G: FiniteSubgroup, chi: Character2D) -> ScanRow:
    fld = G.field
    names = list(LieAlgebraElement.basis())
    ident = G.identity_index
    order = [ident] + [k for k in range(G.order) if k != ident]
    for gp in order:
        for b, name in enumerate(names):
            coeffs = [fld.one if k == b else fld.zero for k in range(3)]
            m = _gamma_matrix(G, chi, gp, coeffs)
            if any(not x.is_zero() for x in m.flat):
                return ScanRow(G.name, chi.label, False, (gp, name))
    return ScanRow(G.name, chi.label, True, None)


def _scan_label(args):
    label, ch_label = args
    G = group_by_label(label)
    return _scan_one(G, character_by_label(G, ch_label))


def default_scan_pairs(bdn_max: int = 50) -> list[tuple[str, str]]:
    labels = ["2T", "2O", "2I"] + [f"BD_{n}" for n in range(1, bdn_max + 1)]
    pairs = []
    for lab in labels:
        for ch in faithful_2d_characters(group_by_label(lab)):
            pairs.append((lab, ch.label))
    return pairs


def gamma_scan(groups, jobs: int = 1) -> list[ScanRow]:
    """Is Gamma~(g', E) identically zero over g' in G and the three basis E?

    ``groups`` holds (FiniteSubgroup, Character2D) pairs or (label, label)
    pairs; only labels can be farmed out to worker processes.  Each pair
    stops at its first nonzero value.
    """
    groups = list(groups)
    if jobs > 1 and all(isinstance(a, str) for a, _ in groups):
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_scan_label, groups, chunksize=1))
    out = []
    for G, chi in groups:
        if isinstance(G, str):
            out.append(_scan_label((G, chi)))
        else:
            out.append(_scan_one(G, chi))
    return out


# --------------------------------------------------------------------------
# the 2I family


def build_family(n: int, selector=None, mode: str = "auto", config: NumericConfig = F64) -> SpinCode:
    """Spin-n/2 code transforming in the twisted 2-dim irrep of 2I."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n % 2 == 0:
        raise EvenN(f"n = {n} is even; faithful irreps need odd n")
    if mode == "auto":
        mode = "exact" if n <= EXACT_LIMIT else "numeric"
    G = group_by_label("2I")
    chi = character_by_label(G, "pi2bar")
    try:
        return extract_codewords(G, chi, Fraction(n, 2), selector, mode, config)
    except NoIrrepAvailable:
        raise NoIrrepAvailable(
            f"no 2I code at n = {n}; the family skips n in {', '.join(map(str, EXCEPTIONAL_N))}"
        ) from None
