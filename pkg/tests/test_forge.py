from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exotic_codes.cyclo import NumericConfig, make_field
from exotic_codes.forge import (
    EXCEPTIONAL_N,
    EvenN,
    NoIrrepAvailable,
    SpinCode,
    apply_ladders,
    build_family,
    character_by_label,
    extract_codewords,
    gamma_scan,
    gamma_tilde,
    group_projector,
    is_self_adjoint,
    logical_z_projector,
    spin_kl_check,
)
from exotic_codes.groups import gates, group_by_label, two_i
from exotic_codes.spin import LieAlgebraElement, wigner_d

F40 = make_field(40)
G2I = two_i()
PI2 = character_by_label(G2I, "pi2")
PI2BAR = character_by_label(G2I, "pi2bar")
GATES = gates(F40)

GOLDEN_7 = {0: Fraction(15, 64), 2: Fraction(7, 64), 4: Fraction(21, 64), 6: Fraction(21, 64)}
GOLDEN_13 = dict(zip(range(0, 13, 2), (Fraction(x, 4096) for x in (495, 858, 13, 156, 1625, 234, 715))))
SIGNS_13 = (1, 1, 1, -1, -1, 1, -1)


def exact_equal(A, B):
    return all(a == b for a, b in zip(np.asarray(A).flat, np.asarray(B).flat))


def matmul_exact(A, B):
    return A.dot(B)


def up_to_global_sign(signs, expected):
    return list(signs) == list(expected) or list(signs) == [-s for s in expected]


@pytest.fixture(scope="module")
def code7():
    return build_family(7)


@pytest.fixture(scope="module")
def code13():
    return build_family(13)


def test_projector_traces():
    P = group_projector(G2I, PI2BAR, Fraction(7, 2))
    assert sum((P.matrix[w, w] for w in range(8)), F40.zero) == 2
    Z = group_projector(G2I, PI2BAR, Fraction(5, 2))
    assert all(x == 0 for x in Z.matrix.flat)


@pytest.mark.parametrize("two_j", [7, 13])
def test_projector_idempotent_and_self_adjoint(two_j):
    P = group_projector(G2I, PI2BAR, Fraction(two_j, 2))
    assert exact_equal(P.matrix.dot(P.matrix), P.matrix)
    assert is_self_adjoint(P)
    # real entries in weight-sum coordinates
    assert all(x.is_real() for x in P.matrix.flat)


def test_numeric_projector_real_symmetric():
    P = group_projector(G2I, PI2BAR, Fraction(13, 2), mode="numeric").matrix
    assert np.allclose(P, P.T, atol=1e-12) and np.abs(P.imag).max() < 1e-12
    assert np.allclose(P @ P, P, atol=1e-12)
    assert np.trace(P).real == pytest.approx(2)


@pytest.mark.parametrize("two_j", [7, 13, 17])
def test_projectors_commute(two_j):
    P = group_projector(G2I, PI2BAR, Fraction(two_j, 2)).matrix
    Z = logical_z_projector(Fraction(two_j, 2)).matrix
    assert exact_equal(P.dot(Z), Z.dot(P))


def test_logical_z_projector():
    assert [logical_z_projector(Fraction(1, 2)).matrix[w, w] for w in range(2)] == [1, 0]
    Z = logical_z_projector(Fraction(7, 2)).matrix
    assert [Z[w, w] for w in range(8)] == [1, 0, 1, 0, 1, 0, 1, 0]
    Z13 = logical_z_projector(Fraction(13, 2)).matrix
    assert exact_equal(Z13.dot(Z13), Z13)
    with pytest.raises(ValueError):
        logical_z_projector(3)


def test_logical_z_is_z_tensor_power():
    # (1 + Z^{tensor n})/2 with Z^{tensor n} = i^n D(Z) for the determinant-one Z
    for n in (1, 7, 13):
        D = wigner_d(GATES["Z"], Fraction(n, 2)).matrix
        Zn = (F40.i ** n) * D
        P = logical_z_projector(Fraction(n, 2)).matrix
        assert exact_equal((np.eye(n + 1, dtype=int) + Zn) / 2, P)


def test_extract_n7(code7):
    assert code7.mu == 1 and code7.exact
    sq = code7.squared_coefficients(0)
    assert {w: q for w, q in enumerate(sq) if q} == GOLDEN_7
    signs = [s for s, q in zip(code7.signs(0), sq) if q]
    assert up_to_global_sign(signs, (1, 1, 1, -1))


def test_extract_n13(code13):
    sq = code13.squared_coefficients(0)
    assert {w: q for w, q in enumerate(sq) if q} == GOLDEN_13
    signs = [s for s, q in zip(code13.signs(0), sq) if q]
    assert up_to_global_sign(signs, SIGNS_13)


def test_codeword_invariants(code7, code13):
    for code in (code7, code13):
        n = code.n
        a, b = code.ket0_exact, code.ket1_exact
        assert all(x.is_real() for x in a)
        # weight supports are disjoint (even vs odd), hence orthogonal
        assert all(a[w] == 0 or b[w] == 0 for w in range(n + 1))
        assert exact_equal(b, a[::-1])
        # the i D(X) rule of the construction agrees up to a global sign
        img = (F40.i * wigner_d(GATES["X"], code.j).matrix).dot(a)
        assert exact_equal(img, b) or exact_equal(img, -b)
        assert np.isclose(np.linalg.norm(code.ket0), 1) and abs(np.vdot(code.ket0, code.ket1)) < 1e-14


def test_extract_errors():
    with pytest.raises(NoIrrepAvailable):
        extract_codewords(G2I, PI2BAR, Fraction(9, 2))
    with pytest.raises(ValueError):
        extract_codewords(G2I, PI2BAR, Fraction(7, 2), selector=[0])
    with pytest.raises(ValueError):
        extract_codewords(G2I, PI2BAR, Fraction(7, 2), selector=[1, 1])
    with pytest.raises(EvenN):
        extract_codewords(G2I, PI2BAR, 3)


@pytest.mark.parametrize("n", EXCEPTIONAL_N)
def test_build_family_exceptions(n):
    with pytest.raises(NoIrrepAvailable) as err:
        build_family(n)
    assert "1, 3, 5, 9, 11, 15, 21" in str(err.value)


def test_build_family_even_and_invalid():
    with pytest.raises(EvenN):
        build_family(8)
    with pytest.raises(ValueError):
        build_family(0)


def test_selector_default_matches_explicit(code7):
    other = build_family(7, selector=[1])
    assert exact_equal(other.ket0_exact, code7.ket0_exact)


def test_numeric_mode_matches_exact(code13):
    num = build_family(13, mode="numeric")
    assert num.ket0_exact is None
    assert np.abs(np.asarray(num.ket0) - np.asarray(code13.ket0, dtype=float)).max() < 1e-10


def test_hp_mode_matches_exact():
    hp = NumericConfig("hp")
    a = build_family(13, mode="numeric", config=hp)
    b = build_family(13, config=hp)
    assert max(abs(x - y) for x, y in zip(a.ket0, b.ket0)) < 1e-30


def test_with_selector_matches_rebuild():
    c = build_family(37)
    assert c.mu == 2
    d = c.with_selector(["1/3", "-2"])
    e = build_family(37, ["1/3", "-2"])
    assert exact_equal(d.ket0_exact, e.ket0_exact)
    with pytest.raises(ValueError):
        c.with_selector([1])


def test_recognized_forms(code7):
    rec = code7.recognized(0)
    assert rec[0] == (1, Fraction(15, 64)) or rec[0] == (-1, Fraction(15, 64))
    # at mu = 2 the squares can leave Q; those must not be force-fitted
    c = build_family(37, ["1", "2"])
    assert any(r is None for r in c.recognized(0))


def test_spin_kl_n7(code7):
    rep = spin_kl_check(code7, d=3)
    assert rep.passed and rep.exact and rep.distance == 3
    assert len([e for e in rep.entries if e.rank == 1]) == 3
    assert len([e for e in rep.entries if e.rank == 2]) == 9
    assert rep.rank_zero(1)


def test_spin_kl_numeric(code13):
    num = build_family(13, mode="numeric")
    rep = spin_kl_check(num, d=3)
    assert rep.passed and not rep.exact


def test_spin_kl_trivial_code_fails():
    one, zero = F40.one, F40.zero
    code = SpinCode(1, "none", "none", (Fraction(1),), np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                    np.array([one, zero], dtype=object), np.array([zero, one], dtype=object))
    rep = spin_kl_check(code, d=2)
    assert not rep.passed and rep.by_rank() == {0: True, 1: False} and rep.distance == 1
    with pytest.raises(ValueError):
        spin_kl_check(code, d=0)


def test_apply_ladders_matches_matrices():
    n = 5
    from exotic_codes.spin import angular_momentum

    v = [Fraction(k + 1) for k in range(n + 1)]
    for word in ("+", "z", "-", "+-", "z+", "--"):
        M = np.eye(n + 1, dtype=object) * Fraction(1)
        for a in word:
            M = M.dot(angular_momentum(Fraction(n, 2), a).matrix)
        assert list(M.dot(np.array(v, dtype=object))) == apply_ladders(word, v, n)


def test_gamma_tilde_examples():
    E = LieAlgebraElement.basis()
    for gp in G2I.elements[::7]:
        for e in E.values():
            assert all(x == 0 for x in gamma_tilde(G2I, PI2BAR, gp, e).flat)
    assert any(
        any(x != 0 for x in gamma_tilde(G2I, PI2, gp, e).flat) for gp in G2I.elements[:5] for e in E.values()
    )
    assert all(x == 0 for x in gamma_tilde(G2I, PI2, G2I.elements[3], LieAlgebraElement()).flat)
    with pytest.raises(ValueError):
        gamma_tilde(G2I, PI2, gates(make_field(40))["S"], E["+"])


def test_gamma_scan_small():
    rows = gamma_scan([(G2I, PI2BAR), (G2I, PI2)] + [(group_by_label("2T"), c) for c in
                                                     __import__("exotic_codes").faithful_2d_characters(group_by_label("2T"))])
    assert [r.zero for r in rows] == [True, False, False, False, False]


def test_gamma_scan_jobs_agree():
    pairs = [("2I", "pi2bar"), ("2O", "pi2"), ("BD_5", "pi2"), ("BD_6", "pi2")]
    assert [r.to_dict() for r in gamma_scan(pairs, jobs=1)] == [r.to_dict() for r in gamma_scan(pairs, jobs=2)]


@pytest.mark.parametrize("n", [7, 13, 17])
def test_gamma_zero_implies_rank_one_zero(n):
    # defining-representation vanishing and the spin-j rank-1 test agree
    assert spin_kl_check(build_family(n), d=2).rank_zero(1)


def test_rank_one_not_zero_for_pi2():
    # the untwisted irrep also occurs at j = 7/2 (as part of a larger space) but Gamma~ does not vanish
    rows = gamma_scan([(G2I, PI2)])
    assert not rows[0].zero and rows[0].witness is not None


# --- symmetric rank-2 operators at j = 37/2 over random selectors ----------

SYMMETRIC = (("++",), ("zz",), ("--",), ("+-", "-+"), ("z+", "+z"), ("z-", "-z"))


@pytest.fixture(scope="module")
def code37():
    return build_family(37)


def _form(code, word_sum):
    n = code.n
    from math import comb

    kets = (code.ket0_exact, code.ket1_exact)
    out = []
    for a in kets:
        row = []
        for b in kets:
            img = [F40.zero] * (n + 1)
            for word in word_sum:
                img = [x + y for x, y in zip(img, apply_ladders(word, b, n, F40.zero))]
            row.append(sum((comb(n, w) * a[w].conj() * img[w] for w in range(n + 1)), F40.zero))
        out.append(row)
    return out


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.fractions(min_value=-5, max_value=5, max_denominator=9))
def test_symmetric_rank2_property(code37, s0, s1):
    if s0 == 0 and s1 == 0:
        return
    code = code37.with_selector([s0, s1])
    assert spin_kl_check(code, d=2).rank_zero(1)
    for word_sum in SYMMETRIC:
        m = _form(code, word_sum)
        assert m[0][1] == 0 and m[1][0] == 0 and m[0][0] == m[1][1]
