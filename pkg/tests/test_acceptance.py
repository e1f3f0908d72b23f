"""End-to-end acceptance checks, one group per numbered criterion."""

import json
import os
import subprocess
import sys
import time
from fractions import Fraction
from math import comb, sqrt

import numpy as np
import pytest

from exotic_codes.cli import branching
from exotic_codes.cyclo import make_field
from exotic_codes.forge import (
    EXCEPTIONAL_N,
    apply_ladders,
    build_family,
    character_by_label,
    default_scan_pairs,
    gamma_scan,
    spin_kl_check,
)
from exotic_codes.groups import classify_hierarchy, gates, group_by_label, star_conjugate, two_i, two_t
from exotic_codes.qubit import (
    certify_transversal_group,
    dicke_state,
    logical_action,
    pauli_kl_oracle,
    pauli_type,
    symmetrized_kl_check,
    to_multiqubit,
    weight_enumerators,
)
from exotic_codes.spin import angular_momentum, irrep_multiplicity, wigner_d

F40 = make_field(40)
G2I = two_i()
PI2BAR = character_by_label(G2I, "pi2bar")

SQUARES = {
    7: ((15, 7, 21, 21), 64),
    13: ((495, 858, 13, 156, 1625, 234, 715), 4096),
    17: ((3510, 663, 9282, 357, 8976, 561, 3570, 3315, 6630), 36864),
}
SIGNS = {
    7: (1, 1, 1, -1),
    13: (1, 1, 1, -1, -1, 1, -1),
    17: (1, -1, 1, 1, 1, -1, -1, 1, 1),
}


def cli(*args):
    return subprocess.run([sys.executable, "-m", "exotic_codes.cli", *args], capture_output=True, text=True)


def check_golden(code, n):
    nums, den = SQUARES[n]
    for which in (0, 1):
        sq = code.squared_coefficients(which)
        signs = code.signs(which)
        support = range(0, n + 1, 2) if which == 0 else range(n, -1, -2)
        assert [sq[w] for w in support] == [Fraction(x, den) for x in nums]
        assert all(sq[w] == 0 for w in range(n + 1) if w not in support)
        pattern = [signs[w] for w in support]
        # |1> is the weight reversal of |0>; one global sign per codeword is free
        expected = list(SIGNS[n])
        assert pattern == expected or pattern == [-s for s in expected]


# 1 ---------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_golden_n7_cli():
    t = time.perf_counter()
    res = cli("construct", "--n", "7")
    elapsed = time.perf_counter() - t
    assert res.returncode == 0, res.stderr
    assert "|0> = √15/8 |D_0^7> + √7/8 |D_2^7> + √21/8 |D_4^7> - √21/8 |D_6^7>" in res.stdout
    assert elapsed < 1.0


@pytest.mark.criterion(1)
def test_golden_n7_exact():
    check_golden(build_family(7), 7)


# 2 ---------------------------------------------------------------------------


@pytest.mark.criterion(2)
@pytest.mark.parametrize("n", [13, 17])
def test_golden_n13_n17(n):
    t = time.perf_counter()
    code = build_family(n)
    elapsed = time.perf_counter() - t
    check_golden(code, n)
    assert elapsed < 5.0


# 3 ---------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_enumerators_n7():
    q = to_multiqubit(build_family(7))
    t = time.perf_counter()
    en = weight_enumerators(q)
    brute = weight_enumerators(q, method="brute")
    elapsed = time.perf_counter() - t
    A = (1, 0, 7, 0, 7, 0, 49, 0)
    B = (1, 0, 7, 42, 7, 84, 49, 66)
    assert en.A == tuple(Fraction(a) for a in A) and en.B == tuple(Fraction(b) for b in B)
    assert np.allclose(brute.A, A) and np.allclose(brute.B, B)
    assert en.distance == 3 and brute.distance == 3
    assert elapsed < 10.0


# 4 ---------------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_kl_certification():
    t = time.perf_counter()
    for n in (7, 13, 17):
        code = build_family(n)
        spin = spin_kl_check(code, d=3)
        assert spin.passed and spin.exact
        # rank-1 matrices vanish identically, not just up to a scalar
        assert all(all(x == 0 for row in e.matrix for x in row) for e in spin.entries if e.rank == 1)
        q = to_multiqubit(code)
        sym = symmetrized_kl_check(q, 2)
        assert sym.passed and sym.exact
        assert all(all(x == 0 for row in e.matrix for x in row) for e in sym.entries if e.rank == 1)
        oracle = pauli_kl_oracle(q, 2)
        assert oracle.passed and len(oracle.entries) == 3 * n + 9 * comb(n, 2)
        if n == 7:
            by_type = {e.name: e for e in sym.entries}
            for e in oracle.entries:
                s = by_type[pauli_type(e.name)]
                assert e.passed == s.passed
                ms = np.array([[complex(x) for x in row] for row in s.matrix])
                assert np.allclose(np.asarray(e.matrix, dtype=complex), ms, atol=1e-12)
    assert time.perf_counter() - t < 30.0


# 5 ---------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_gamma_uniqueness():
    pairs = default_scan_pairs(50)
    counts = {}
    for label, _ in pairs:
        counts[label] = counts.get(label, 0) + 1
    assert counts["2T"] == 3 and counts["2O"] == 2 and counts["2I"] == 2
    assert {lab for lab in counts if lab.startswith("BD_")} == {f"BD_{k}" for k in range(2, 51)}
    t = time.perf_counter()
    rows = gamma_scan(pairs, jobs=min(8, os.cpu_count() or 1))
    elapsed = time.perf_counter() - t
    assert [(r.group, r.character) for r in rows if r.zero] == [("2I", "pi2bar")]
    assert all(r.witness is not None for r in rows if not r.zero)
    assert elapsed < 300


# 6 ---------------------------------------------------------------------------


@pytest.mark.criterion(6)
def test_hierarchy_split():
    t = time.perf_counter()
    kinds = [classify_hierarchy(g) for g in G2I]
    assert kinds.count("clifford") == 24 and kinds.count("exotic") == 96
    T = {h.lift(F40) for h in two_t(8)}
    assert all((k == "exotic") == (g not in T) for g, k in zip(G2I, kinds))
    assert time.perf_counter() - t < 1.0


# 7 ---------------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_branching():
    t = time.perf_counter()
    assert branching(5, "2I")["totals"] == {"pi2": 5, "pi4": 4, "pi6": 1}
    seven = branching(7, "2I")
    assert seven["sectors"][0]["irreps"] == {"pi2bar": 1, "pi6": 1}
    assert seven["mu_pi2bar"] == 1
    for n in range(1, 100, 2):
        mu = irrep_multiplicity(G2I, PI2BAR, Fraction(n, 2))
        assert (mu == 0) == (n in EXCEPTIONAL_N), n
    assert irrep_multiplicity(G2I, PI2BAR, Fraction(37, 2)) == 2
    assert time.perf_counter() - t < 60


# 8 ---------------------------------------------------------------------------


@pytest.mark.criterion(8)
def test_transversality():
    t = time.perf_counter()
    for n in (7, 13, 17):
        rep = certify_transversal_group(to_multiqubit(build_family(n)), G2I, PI2BAR)
        assert rep.passed
    q7 = to_multiqubit(build_family(7))
    g = gates(F40)
    assert np.array_equal(logical_action(q7, g["X"]), (-g["X"]).matrix)
    assert np.array_equal(logical_action(q7, g["Z"]), (-g["Z"]).matrix)
    assert np.array_equal(logical_action(q7, g["Phi"]), star_conjugate(g["Phi"]).matrix)
    assert time.perf_counter() - t < 60


# 9 ---------------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_property_wigner_homomorphism():
    rng = np.random.default_rng(7)
    for i, k in rng.integers(0, 120, size=(30, 2)):
        a, b = G2I.elements[i], G2I.elements[k]
        for j in (Fraction(1, 2), Fraction(3), Fraction(7, 2)):
            lhs = wigner_d(a, j).matrix.dot(wigner_d(b, j).matrix)
            assert all(x == y for x, y in zip(lhs.flat, wigner_d(a * b, j).matrix.flat))


@pytest.mark.criterion(9)
def test_property_ladder_commutators():
    for two_j in range(0, 22):
        jp, jz, jm = (angular_momentum(Fraction(two_j, 2), a).matrix for a in "+z-")
        assert all(x == y for x, y in zip((jp.dot(jm) - jm.dot(jp)).flat, (2 * jz).flat))
        assert all(x == y for x, y in zip((jz.dot(jp) - jp.dot(jz)).flat, jp.flat))


@pytest.mark.criterion(9)
def test_property_dicke_unitarity():
    for n in range(1, 11):
        D = np.column_stack([dicke_state(n, w) for w in range(n + 1)])
        assert np.allclose(D.T @ D, np.eye(n + 1))
        code = build_family(7)
        assert np.isclose(np.linalg.norm(to_multiqubit(code).ket0), np.linalg.norm(code.ket0))


@pytest.mark.criterion(9)
def test_property_ladder_images():
    for n in range(1, 11):
        idx = np.arange(2**n)
        for w in range(n):
            d = dicke_state(n, w)
            out = np.zeros_like(d)
            for q in range(n):
                free = ((idx >> q) & 1) == 0
                out[idx[free] | (1 << q)] += d[free]
            assert np.allclose(out, sqrt((n - w) * (w + 1)) * dicke_state(n, w + 1))


@pytest.mark.criterion(9)
def test_property_symmetric_errors_n37():
    base = build_family(37)
    rng = np.random.default_rng(37)
    sums = (("++",), ("zz",), ("--",), ("+-", "-+"), ("z+", "+z"), ("z-", "-z"))
    weights = [comb(37, w) for w in range(38)]
    for _ in range(20):
        s = [Fraction(int(x), int(y)) for x, y in zip(rng.integers(-9, 10, 2), rng.integers(1, 10, 2))]
        if not any(s):
            s[0] = Fraction(1)
        code = base.with_selector(s)
        assert spin_kl_check(code, d=2).rank_zero(1)
        kets = (code.ket0_exact, code.ket1_exact)
        for words in sums:
            m = []
            for a in kets:
                row = []
                for b in kets:
                    img = [F40.zero] * 38
                    for word in words:
                        img = [x + y for x, y in zip(img, apply_ladders(word, b, 37, F40.zero))]
                    row.append(sum((weights[w] * a[w].conj() * img[w] for w in range(38)), F40.zero))
                m.append(row)
            assert m[0][1] == 0 and m[1][0] == 0 and m[0][0] == m[1][1]


@pytest.mark.criterion(9)
def test_property_deterministic_reruns(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"c{k}.json"
        assert cli("construct", "--n", "13", "--out", str(path)).returncode == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    r1 = cli("verify", str(tmp_path / "c0.json"), "--checks", "kl-sym,kl-spin,transversal")
    r2 = cli("verify", str(tmp_path / "c1.json"), "--checks", "kl-sym,kl-spin,transversal")
    assert r1.returncode == 0 and r1.stdout == r2.stdout
    pairs = default_scan_pairs(8)
    a = json.dumps([r.to_dict() for r in gamma_scan(pairs, jobs=1)], sort_keys=True)
    b = json.dumps([r.to_dict() for r in gamma_scan(pairs, jobs=2)], sort_keys=True)
    assert a == b
