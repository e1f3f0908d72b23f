import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exotic_codes.codefile import (
    CodeFile,
    MalformedCodeFile,
    code_file_from_spin,
    display,
    format_sqrt_rational,
)
from exotic_codes.forge import EXCEPTIONAL_N, build_family, spin_kl_check
from exotic_codes.qubit import symmetrized_kl_check

ROUND_TRIP_N = [n for n in range(7, 42, 2) if n not in EXCEPTIONAL_N]


@pytest.fixture(scope="module")
def cf7():
    return code_file_from_spin(build_family(7))


def test_display_n7(cf7):
    lines = display(cf7).splitlines()
    assert lines[1] == "|0> = √15/8 |D_0^7> + √7/8 |D_2^7> + √21/8 |D_4^7> - √21/8 |D_6^7>"
    assert lines[2] == "|1> = - √21/8 |D_1^7> + √21/8 |D_3^7> + √7/8 |D_5^7> + √15/8 |D_7^7>"


@pytest.mark.parametrize("q, text", [
    (Fraction(15, 64), "√15/8"),
    (Fraction(1, 4), "1/2"),
    (Fraction(1), "1"),
    (Fraction(0), "0"),
    (Fraction(8, 9), "2√2/3"),
    (Fraction(1, 2), "√2/2"),
    (Fraction(3510, 36864), "√390/64"),
])
def test_format_sqrt_rational(q, text):
    assert format_sqrt_rational(q) == text


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10**4), max_value=100, max_denominator=10**4))
def test_format_sqrt_rational_value(q):
    text = format_sqrt_rational(q)
    num, _, den = text.partition("/")
    a, _, b = num.partition("√")
    value = (int(a) if a else 1) * (int(b) ** 0.5 if b else 1) / (int(den) if den else 1)
    assert value == pytest.approx(float(q) ** 0.5, rel=1e-12)


@pytest.mark.parametrize("n", ROUND_TRIP_N)
def test_round_trip(n, tmp_path):
    code = build_family(n)
    cf = code_file_from_spin(code)
    path = tmp_path / "code.json"
    cf.write(path)
    back = CodeFile.read(path)
    assert back == cf
    assert back.to_json() == path.read_text()
    assert back.check_normalization()
    q = back.to_qubit_code()
    assert np.allclose(q.ket0, np.asarray(code.ket0, dtype=float), atol=1e-12)
    if q.exact:
        assert symmetrized_kl_check(q, 2).passed


def test_reconstructed_code_is_exact(cf7):
    q = cf7.to_qubit_code()
    assert q.exact and q.norm_squared_exact() != 0
    assert spin_kl_check(cf7.to_spin_code(), d=3).passed


def test_unrecognized_amplitudes_roundtrip():
    code = build_family(37, ["1", "2"])
    cf = code_file_from_spin(code)
    assert any(not r.recognized for r in cf.ket0)
    back = CodeFile.from_json(cf.to_json())
    assert back.check_normalization()
    assert not back.to_qubit_code().exact
    assert all(len(r.decimal.lstrip("-").replace(".", "")) >= 25 for r in back.ket0 if not r.recognized)


def test_json_is_deterministic():
    assert code_file_from_spin(build_family(13)).to_json() == code_file_from_spin(build_family(13)).to_json()


def test_sign_flip_breaks_kl(cf7):
    d = json.loads(cf7.to_json())
    d["ket0"][2]["sign"] *= -1
    d["ket0"][2]["decimal"] = "-" + d["ket0"][2]["decimal"]
    q = CodeFile.from_json(json.dumps(d)).to_qubit_code()
    assert not symmetrized_kl_check(q, 1).passed


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("ket0"),
    lambda d: d.update(format_version=99),
    lambda d: d["ket0"][0].update(weight=42),
    lambda d: d["ket0"][0].update(sign=3),
    lambda d: d["ket1"][0].update(colour="red"),
    lambda d: d.update(n="seven"),
    lambda d: d["ket0"][0].update(sign=-1),
])
def test_malformed(mutate, cf7):
    d = json.loads(cf7.to_json())
    mutate(d)
    with pytest.raises(MalformedCodeFile):
        CodeFile.from_json(json.dumps(d))


def test_malformed_text_and_path(tmp_path):
    with pytest.raises(MalformedCodeFile):
        CodeFile.from_json("{not json")
    with pytest.raises(MalformedCodeFile):
        CodeFile.read(tmp_path / "missing.json")


def test_bad_normalization_detected(cf7):
    d = json.loads(cf7.to_json())
    d["ket0"][0]["sq_numerator"] = 16
    assert not CodeFile.from_json(json.dumps(d)).check_normalization()
