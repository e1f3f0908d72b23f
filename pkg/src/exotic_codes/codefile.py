"""JSON serialization of codes with exact square-root-of-rational amplitudes."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb, gcd
from pathlib import Path

import flint
import mpmath
import numpy as np

from .cyclo import F64, NumericConfig, make_field
from .forge import SpinCode
from .groups import group_by_label
from .qubit import QubitCode

__all__ = [
    "FORMAT_VERSION",
    "CoefficientRecord",
    "CodeFile",
    "MalformedCodeFile",
    "code_file_from_spin",
    "format_sqrt_rational",
    "display",
]

FORMAT_VERSION = 1
DECIMAL_DIGITS = 30

CONVENTIONS = {
    "basis": "Dicke states |D_w^n>, weight w = j - m",
    "ket1": "X^{tensor n} |0>, i.e. weights reversed",
    "canonical_basis": "reduced echelon basis of the +1 eigenspace in weight-sum coordinates",
    "amplitude": "sign * sqrt(sq_numerator / sq_denominator)",
}


class MalformedCodeFile(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientRecord:
    weight: int
    sign: int
    sq_numerator: int | None
    sq_denominator: int | None
    decimal: str

    @property
    def recognized(self) -> bool:
        return self.sq_numerator is not None

    @property
    def square(self) -> Fraction | None:
        return Fraction(self.sq_numerator, self.sq_denominator) if self.recognized else None


@dataclass
class CodeFile:
    n: int
    j: str
    group: str
    irrep: str
    selector: list
    ket0: list
    ket1: list
    distance: int = 3
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    format_version: int = FORMAT_VERSION

    # serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> CodeFile:
        try:
            d = json.loads(text)
            kets = [[CoefficientRecord(**r) for r in d[k]] for k in ("ket0", "ket1")]
            out = cls(
                n=int(d["n"]), j=str(d["j"]), group=str(d["group"]), irrep=str(d["irrep"]),
                selector=list(d["selector"]), ket0=kets[0], ket1=kets[1],
                distance=int(d.get("distance", 3)), conventions=dict(d.get("conventions", {})),
                format_version=int(d["format_version"]),
            )
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise MalformedCodeFile(f"cannot parse code file: {exc}") from exc
        if out.format_version != FORMAT_VERSION:
            raise MalformedCodeFile(f"unsupported format version {out.format_version}")
        for ket in (out.ket0, out.ket1):
            for r in ket:
                if not 0 <= r.weight <= out.n or r.sign not in (-1, 0, 1):
                    raise MalformedCodeFile(f"bad record {r}")
                if r.decimal.startswith("-") != (r.sign < 0):
                    raise MalformedCodeFile(f"sign and decimal disagree at weight {r.weight}")
        return out

    @classmethod
    def read(cls, path) -> CodeFile:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise MalformedCodeFile(str(exc)) from exc
        return cls.from_json(text)

    # content -----------------------------------------------------------------

    def check_normalization(self) -> bool:
        for ket in (self.ket0, self.ket1):
            if all(r.recognized for r in ket):
                if sum((r.square for r in ket), Fraction(0)) != 1:
                    return False
            else:
                with mpmath.workprec(128):
                    s = mpmath.fsum(mpmath.mpf(r.decimal) ** 2 for r in ket)
                    if abs(s - 1) > mpmath.mpf("1e-12"):
                        return False
        return True

    def to_qubit_code(self, config: NumericConfig = F64) -> QubitCode:
        """Rebuild codewords; exact weight-sum coordinates are attached when
        every amplitude ratio is a square root that lives in the group's field."""
        n = self.n
        kets_num = []
        for ket in (self.ket0, self.ket1):
            if config.high_precision:
                v = np.array([mpmath.mpf(0)] * (n + 1), dtype=object)
                for r in ket:
                    v[r.weight] = mpmath.mpf(r.decimal)
            else:
                v = np.zeros(n + 1)
                for r in ket:
                    v[r.weight] = float(r.decimal)
            kets_num.append(v)
        exact = self._exact_kets()
        return QubitCode(n, kets_num[0], kets_num[1], exact[0], exact[1], None, config)

    def to_spin_code(self, config: NumericConfig = F64) -> SpinCode:
        q = self.to_qubit_code(config)
        sel = tuple(Fraction(s) for s in self.selector)
        return SpinCode(self.n, self.group, self.irrep, sel, q.ket0, q.ket1, q.ket0_exact, q.ket1_exact, None, config)

    def _exact_kets(self):
        if not all(r.recognized for ket in (self.ket0, self.ket1) for r in ket):
            return None, None
        try:
            fld = group_by_label(self.group).field
        except KeyError:
            fld = make_field(40)
        ref = next((r for r in self.ket0 if r.sq_numerator), None)
        if ref is None:
            return None, None
        n = self.n
        base = ref.square / comb(n, ref.weight)
        out = []
        try:
            for ket in (self.ket0, self.ket1):
                v = np.array([fld.zero] * (n + 1), dtype=object)
                for r in ket:
                    if r.sq_numerator:
                        ratio = r.square / comb(n, r.weight) / base
                        v[r.weight] = r.sign * _field_sqrt(fld, ratio)
                out.append(v)
        except ValueError:
            return None, None
        return out[0], out[1]


def _field_sqrt(fld, q: Fraction):
    a, b = q.numerator, q.denominator
    root = fld.sqrt(a * b)
    return root / b


# --------------------------------------------------------------------------
# conversion


def _decimal(x) -> str:
    with mpmath.workprec(140):
        return mpmath.nstr(mpmath.mpf(x), DECIMAL_DIGITS, strip_zeros=False, min_fixed=-4, max_fixed=4)


def _exact_decimal(sign: int, q: Fraction) -> str:
    with mpmath.workprec(140):
        return _decimal(sign * mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator))


def _records(code: SpinCode, which: int) -> list:
    recs = []
    ket = code.ket0 if which == 0 else code.ket1
    squares = code.squared_coefficients(which) if code.exact else None
    hp = NumericConfig("hp", 1e-30)
    for w, (rec, x) in enumerate(zip(code.recognized(which), ket)):
        if rec is not None:
            sign, q = rec
            if q == 0:
                continue
            recs.append(CoefficientRecord(w, sign, q.numerator, q.denominator, _exact_decimal(sign, q)))
        else:
            re = mpmath.re(x) if code.config.high_precision else complex(x).real
            if abs(re) < code.config.tolerance:
                continue
            sign = 1 if re > 0 else -1
            if squares is not None:
                # full-precision digits from the exact square
                with mpmath.workprec(hp.bits + 20):
                    re = sign * mpmath.sqrt(mpmath.re(squares[w].to_complex(hp)))
            recs.append(CoefficientRecord(w, sign, None, None, _decimal(re)))
    return recs


def code_file_from_spin(code: SpinCode) -> CodeFile:
    return CodeFile(
        n=code.two_j,
        j=f"{code.two_j}/2",
        group=code.group,
        irrep=code.character,
        selector=[str(s) for s in code.selector],
        ket0=_records(code, 0),
        ket1=_records(code, 1),
    )


# --------------------------------------------------------------------------
# display


def format_sqrt_rational(q: Fraction) -> str:
    """sqrt(p/q) as a*sqrt(b)/c with b squarefree, e.g. 15/64 -> √15/8."""
    if q == 0:
        return "0"
    pq = q.numerator * q.denominator
    square, free = 1, 1
    for p, e in flint.fmpz(pq).factor():
        p = int(p)
        square *= p ** (e // 2)
        if e % 2:
            free *= p
    a, c = square, q.denominator
    g = gcd(a, c)
    a, c = a // g, c // g
    s = "" if a == 1 and free != 1 else str(a)
    if free != 1:
        s += f"√{free}"
    return s if c == 1 else f"{s}/{c}"


def display(cf: CodeFile) -> str:
    lines = [f"(({cf.n},2,{cf.distance})) code, {cf.group} irrep {cf.irrep}, selector ({', '.join(cf.selector)})"]
    for name, ket in (("|0>", cf.ket0), ("|1>", cf.ket1)):
        terms = []
        for r in ket:
            mag = format_sqrt_rational(r.square) if r.recognized else r.decimal.lstrip("-")
            terms.append(f"{'-' if r.sign < 0 else '+'} {mag} |D_{r.weight}^{cf.n}>")
        body = " ".join(terms)
        if body.startswith("+ "):
            body = body[2:]
        lines.append(f"{name} = {body}")
    return "\n".join(lines)
