"""Finite subgroups of SU(2) over cyclotomic fields.

Elements are exact 2x2 matrices; groups are enumerated breadth first and
carry an integer multiplication table so that conjugacy classes, cosets and
character sums run on indices rather than field arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .cyclo import CycloField, CycloScalar, in_two_power_subfield, make_field

__all__ = [
    "GroupElement",
    "FiniteSubgroup",
    "Character2D",
    "GroupOrderExceeded",
    "gates",
    "phase_gate",
    "t_gate",
    "generate_group",
    "conjugacy_classes",
    "faithful_2d_characters",
    "irreducible_characters",
    "clifford_membership",
    "classify_hierarchy",
    "coset_decomposition",
    "star_conjugate",
    "sqrt5_twist_exponent",
    "two_t",
    "two_o",
    "two_i",
    "two_i_star",
    "binary_dihedral",
    "group_by_label",
    "GROUP_LABELS",
]


class GroupOrderExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# elements


class GroupElement:
    """Exact 2x2 matrix [[a, b], [c, d]] with entries in one cyclotomic field."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a, b, c, d):
        f = next(x.field for x in (a, b, c, d) if isinstance(x, CycloScalar))
        self.a, self.b, self.c, self.d = (f(x) for x in (a, b, c, d))
        self._hash = None

    @classmethod
    def from_matrix(cls, m) -> GroupElement:
        return cls(m[0][0], m[0][1], m[1][0], m[1][1])

    @classmethod
    def identity(cls, fld: CycloField) -> GroupElement:
        return cls(fld.one, fld.zero, fld.zero, fld.one)

    @property
    def field(self) -> CycloField:
        return self.a.field

    @property
    def entries(self) -> tuple[CycloScalar, CycloScalar, CycloScalar, CycloScalar]:
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=object)

    def __mul__(self, o: GroupElement) -> GroupElement:
        return GroupElement(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self):
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> GroupElement:
        # det = 1
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def dagger(self) -> GroupElement:
        return GroupElement(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def conj(self) -> GroupElement:
        return GroupElement(*(x.conj() for x in self.entries))

    def galois(self, k: int) -> GroupElement:
        return GroupElement(*(x.galois(k) for x in self.entries))

    def lift(self, target) -> GroupElement:
        return GroupElement(*(x.lift(target) for x in self.entries))

    def trace(self) -> CycloScalar:
        return self.a + self.d

    def det(self) -> CycloScalar:
        return self.a * self.d - self.b * self.c

    def is_special_unitary(self) -> bool:
        if self.det() != 1:
            return False
        p = self * self.dagger()
        return p.a == 1 and p.d == 1 and p.b == 0 and p.c == 0

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and self.b == 0 and self.c == 0

    def to_numpy(self, config=None) -> np.ndarray:
        kw = {} if config is None else {"config": config}
        vals = [x.to_complex(**kw) for x in self.entries]
        if config is not None and config.high_precision:
            return np.array(vals, dtype=object).reshape(2, 2)
        return np.array(vals, dtype=complex).reshape(2, 2)

    def sort_key(self):
        return tuple(x.sort_key() for x in self.entries)

    def __eq__(self, o):
        if not isinstance(o, GroupElement):
            return NotImplemented
        return self.entries == o.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        z = [complex(x.to_complex()) for x in self.entries]
        return "GroupElement([[{:.4g}, {:.4g}], [{:.4g}, {:.4g}]])".format(*z)


# --------------------------------------------------------------------------
# gates


def gates(fld: CycloField) -> dict[str, GroupElement]:
    """Determinant-one gate set.  Needs 8 | N; Phi/Phi_star also need 5 | N.

    Y is taken as -i times the standard Pauli Y = [[0, -i], [i, 0]].
    """
    N = fld.conductor
    if N % 8:
        raise ValueError("the gate set needs zeta_8 in the field")
    i, one, zero = fld.i, fld.one, fld.zero
    z8 = fld.zeta(N // 8)
    r2 = fld.sqrt(2)
    out = {
        "I": GroupElement(one, zero, zero, one),
        "X": GroupElement(zero, -i, -i, zero),
        "Y": GroupElement(zero, -one, one, zero),
        "Z": GroupElement(-i, zero, zero, i),
        "H": GroupElement(-i / r2, -i / r2, -i / r2, i / r2),
        "S": GroupElement(z8.inverse(), zero, zero, z8),
    }
    pre = z8.inverse() / r2
    out["F"] = GroupElement(pre, -i * pre, pre, i * pre)
    if N % 5 == 0:
        phi = fld.golden_ratio
        out["Phi"] = GroupElement((phi + i / phi) / 2, one / 2, -one / 2, (phi - i / phi) / 2)
        out["Phi_star"] = star_conjugate(out["Phi"])
    return out


def phase_gate(n: int, fld: CycloField) -> GroupElement:
    """diag(e^{-i pi/n}, e^{i pi/n}), the determinant-one phase by 2 pi / n."""
    if fld.conductor % (2 * n):
        raise ValueError(f"Ph(2pi/{n}) needs zeta_{2 * n}")
    z = fld.zeta(fld.conductor // (2 * n))
    return GroupElement(z.inverse(), fld.zero, fld.zero, z)


def t_gate(fld: CycloField | None = None) -> GroupElement:
    return phase_gate(8, fld or make_field(16))


def sqrt5_twist_exponent(N: int) -> int:
    """k coprime to N with zeta -> zeta^k sending sqrt5 to -sqrt5 and fixing
    the complementary cyclotomic subfield (1 when 5 does not divide N)."""
    if N % 5:
        return 1
    five = 1
    while N % (five * 5) == 0:
        five *= 5
    rest = N // five
    for k in range(1, N):
        if math.gcd(k, N) == 1 and k % rest == 1 % rest and k % 5 == 2:
            return k
    raise AssertionError("no twist exponent found")


def star_conjugate(g: GroupElement) -> GroupElement:
    """Apply sqrt5 -> -sqrt5 entrywise, then complex conjugation."""
    return g.galois(sqrt5_twist_exponent(g.field.conductor)).conj()


# --------------------------------------------------------------------------
# groups


class FiniteSubgroup:
    """Enumerated finite subgroup with integer multiplication table.

    ``table[i, k]`` is the index of ``elements[i] * elements[k]``.
    """

    def __init__(self, elements: list[GroupElement], name: str = "custom", generators=()):
        self.elements = list(elements)
        self.name = name
        self.generators = tuple(generators)
        self.index = {g: k for k, g in enumerate(self.elements)}
        self.field = self.elements[0].field
        self._table = None
        self._classes = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.index

    def __repr__(self):
        return f"FiniteSubgroup({self.name!r}, order={self.order})"

    # multiplication table -----------------------------------------------------

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            self._table = _multiplication_table(self)
        return self._table

    @property
    def inverse_index(self) -> np.ndarray:
        ident = self.identity_index
        return np.argmax(self.table == ident, axis=1)

    @property
    def identity_index(self) -> int:
        return next(k for k, g in enumerate(self.elements) if g.is_identity())

    def mul(self, i: int, k: int) -> int:
        return int(self.table[i, k])

    def element_order(self, i: int) -> int:
        ident, cur, n = self.identity_index, i, 1
        while cur != ident:
            cur = int(self.table[cur, i])
            n += 1
        return n

    # classes ------------------------------------------------------------------

    @property
    def classes(self) -> list[list[int]]:
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    @property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=int)
        for c, members in enumerate(self.classes):
            out[members] = c
        return out

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def representative(self, c: int) -> GroupElement:
        return self.elements[self.classes[c][0]]

    def lift(self, target) -> FiniteSubgroup:
        return FiniteSubgroup([g.lift(target) for g in self.elements], self.name, [g.lift(target) for g in self.generators])


def _multiplication_table(G: FiniteSubgroup) -> np.ndarray:
    # left-multiplication permutations of the generators, then L_{s h} = L_s o L_h along a BFS tree
    n = G.order
    gens = list(G.generators) or list(G.elements)
    perms = []
    for s in gens:
        perms.append(np.array([G.index[s * h] for h in G.elements], dtype=np.int64))
    table = np.full((n, n), -1, dtype=np.int64)
    ident = G.identity_index
    table[ident] = np.arange(n)
    done = {ident}
    frontier = [ident]
    gen_idx = [G.index[s] for s in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for s, p in zip(gen_idx, perms):
                e = int(p[h])
                if e not in done:
                    table[e] = p[table[h]]
                    done.add(e)
                    nxt.append(e)
        frontier = nxt
    if len(done) != n:
        raise AssertionError("generators do not generate the enumerated group")
    return table


def generate_group(generators, max_order: int = 10**4, name: str = "custom") -> FiniteSubgroup:
    """Closure of ``generators`` under multiplication.

    Breadth first from the identity; each new layer is sorted by exact
    coefficient order so the element list is deterministic.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    fld = generators[0].field
    for g in generators:
        if g.field is not fld:
            raise ValueError("generators live in different fields")
        if not g.is_special_unitary():
            raise ValueError(f"{g!r} is not in SU(2)")
    ident = GroupElement.identity(fld)
    elements = [ident]
    seen = {ident}
    layer = [ident]
    while layer:
        new = []
        for h in layer:
            for s in generators:
                e = s * h
                if e not in seen:
                    seen.add(e)
                    new.append(e)
                    if len(seen) > max_order:
                        raise GroupOrderExceeded(f"closure exceeds {max_order} elements")
        new.sort(key=GroupElement.sort_key)
        elements.extend(new)
        layer = new
    return FiniteSubgroup(elements, name, generators)


def conjugacy_classes(G: FiniteSubgroup) -> list[list[int]]:
    """Orbits under conjugation as lists of element indices.

    Classes are ordered by their first element, which is the representative.
    """
    T = G.table
    inv = G.inverse_index
    n = G.order
    assigned = np.full(n, -1)
    classes = []
    for i in range(n):
        if assigned[i] >= 0:
            continue
        orbit = sorted({int(T[T[h, i], inv[h]]) for h in range(n)})
        assigned[orbit] = len(classes)
        classes.append(orbit)
    return classes


def coset_decomposition(G: FiniteSubgroup, H: FiniteSubgroup) -> list[int]:
    """Left-coset representatives (indices into G), first in G's ordering."""
    if H.field is not G.field:
        H = H.lift(G.field)
    try:
        h_idx = [G.index[h] for h in H.elements]
    except KeyError:
        raise ValueError("H is not a subgroup of G") from None
    T = G.table
    owner = np.full(G.order, -1)
    reps = []
    for i in range(G.order):
        if owner[i] >= 0:
            continue
        coset = T[i, h_idx]
        owner[coset] = i
        reps.append(i)
    if len(reps) * H.order != G.order:
        raise AssertionError("coset partition is inconsistent")
    return reps


# --------------------------------------------------------------------------
# canonical groups


def _default_field(conductor):
    return make_field(conductor) if isinstance(conductor, int) else conductor


def two_t(conductor: int = 24) -> FiniteSubgroup:
    """<X, Z, F>; conductor 24 holds the cube roots of unity of its linear characters."""
    g = gates(_default_field(conductor))
    return generate_group([g["X"], g["Z"], g["F"]], name="2T")


def two_o(conductor: int = 8) -> FiniteSubgroup:
    g = gates(_default_field(conductor))
    return generate_group([g["X"], g["Z"], g["F"], g["H"], g["S"]], name="2O")


def two_i(conductor: int = 40) -> FiniteSubgroup:
    g = gates(_default_field(conductor))
    return generate_group([g["X"], g["Z"], g["F"], g["Phi"]], name="2I")


def two_i_star(conductor: int = 40) -> FiniteSubgroup:
    g = gates(_default_field(conductor))
    return generate_group([g["X"], g["Z"], g["F"], g["Phi_star"]], name="2I*")


def binary_dihedral(n: int, conductor: int | None = None) -> FiniteSubgroup:
    """BD_n = <X, Ph(2 pi / n)> of order 4n."""
    N = conductor or math.lcm(2 * n, 4)
    fld = make_field(N)
    i = fld.i
    X = GroupElement(fld.zero, -i, -i, fld.zero)
    return generate_group([X, phase_gate(n, fld)], name=f"BD_{n}")


GROUP_LABELS = ("2T", "2O", "2I", "2I*")


@lru_cache(maxsize=64)
def group_by_label(label: str) -> FiniteSubgroup:
    if label == "2T":
        return two_t()
    if label == "2O":
        return two_o()
    if label == "2I":
        return two_i()
    if label == "2I*":
        return two_i_star()
    if label.startswith("BD_") and label[3:].isdigit() and int(label[3:]) >= 1:
        return binary_dihedral(int(label[3:]))
    raise KeyError(f"unknown group {label!r}")


# --------------------------------------------------------------------------
# characters


@dataclass
class Character2D:
    """Class function on G; ``values[c]`` is the value on class ``c``."""

    group: FiniteSubgroup = field(repr=False)
    values: tuple
    label: str = ""

    @property
    def degree(self) -> CycloScalar:
        return self.values[self.group.class_of[self.group.identity_index]]

    def __call__(self, g) -> CycloScalar:
        k = g if isinstance(g, (int, np.integer)) else self.group.index[g]
        return self.values[self.group.class_of[k]]

    def per_element(self) -> list[CycloScalar]:
        cls = self.group.class_of
        return [self.values[c] for c in cls]

    @property
    def faithful(self) -> bool:
        deg = self.degree
        ident = self.group.identity_index
        return all(self.values[c] != deg for c, members in enumerate(self.group.classes) if ident not in members)

    def inner(self, other: Character2D):
        return class_inner(self.group, self.values, other.values)

    def galois(self, k: int) -> Character2D:
        return Character2D(self.group, tuple(v.galois(k) for v in self.values), self.label)

    def __mul__(self, other: Character2D) -> Character2D:
        return Character2D(self.group, tuple(a * b for a, b in zip(self.values, other.values)))


def _bar_twist(G: FiniteSubgroup) -> int:
    # the overbar names the outer automorphism of 2I; elsewhere twists get primes
    return sqrt5_twist_exponent(G.field.conductor) if G.name.startswith("2I") else 1


def class_inner(G: FiniteSubgroup, u, v) -> CycloScalar:
    total = G.field.zero
    for size, a, b in zip(G.class_sizes, u, v):
        total = total + size * a * b.conj()
    return total / G.order


def _defining_character(G: FiniteSubgroup) -> Character2D:
    return Character2D(G, tuple(G.representative(c).trace() for c in range(len(G.classes))), "pi2")


def _galois_exponents(N: int) -> list[int]:
    return [k for k in range(1, N) if math.gcd(k, N) == 1]


def _commutator_subgroup(G: FiniteSubgroup) -> set[int]:
    T, inv = G.table, G.inverse_index
    gens = {int(T[T[T[a, b], inv[a]], inv[b]]) for a in range(G.order) for b in range(G.order)}
    sub = set(gens)
    frontier = list(sub)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(T[x, s])
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return sub


def linear_characters(G: FiniteSubgroup) -> list[Character2D]:
    """All 1-dim characters, found as homomorphisms of the generators into
    roots of unity of order dividing |G / G'|."""
    m = G.order // len(_commutator_subgroup(G))
    N = G.field.conductor
    if N % m:
        raise ValueError(f"conductor {N} lacks the {m}-th roots of unity")
    roots = [G.field.zeta(N // m * t) for t in range(m)]
    gens = [G.index[s] for s in G.generators]
    T = G.table
    ident = G.identity_index
    chars = []
    for assignment in product(range(m), repeat=len(gens)):
        # propagate along left multiplication by generators
        val = {ident: 0}
        frontier = [ident]
        ok = True
        while frontier and ok:
            nxt = []
            for h in frontier:
                for s, t in zip(gens, assignment):
                    e = int(T[s, h])
                    v = (val[h] + t) % m
                    if e in val:
                        if val[e] != v:
                            ok = False
                            break
                    else:
                        val[e] = v
                        nxt.append(e)
                if not ok:
                    break
            frontier = nxt
        if ok:
            values = tuple(roots[val[members[0]]] for members in G.classes)
            chars.append(Character2D(G, values, "linear"))
    return chars


def _dedupe(chars):
    out, seen = [], set()
    for ch in chars:
        if ch.values not in seen:
            seen.add(ch.values)
            out.append(ch)
    return out


def faithful_2d_characters(G: FiniteSubgroup) -> list[Character2D]:
    """Faithful irreducible characters of degree 2.

    Candidates are the defining character times each linear character, closed
    under Galois conjugation of the values.  The defining character comes
    first; the rest follow in exact coefficient order.  Cached on ``G``.
    """
    cached = getattr(G, "_faithful", None)
    if cached is not None:
        return list(cached)
    base = _defining_character(G)
    cands = [base * lin for lin in linear_characters(G)]
    cands = _dedupe([c.galois(k) for c in cands for k in _galois_exponents(G.field.conductor)])
    keep = [c for c in cands if c.degree == 2 and c.inner(c) == 1 and c.faithful]
    keep.sort(key=lambda c: (c.values != base.values, tuple(v.sort_key() for v in c.values)))
    twist = _bar_twist(G)
    for k, c in enumerate(keep):
        if c.values == base.values:
            c.label = "pi2"
        elif twist != 1 and c.values == base.galois(twist).values:
            c.label = "pi2bar"
        else:
            c.label = f"pi2_{k}"
    G._faithful = tuple(keep)
    return keep


def irreducible_characters(G: FiniteSubgroup, max_spin2: int = 40) -> list[Character2D]:
    """Full list of irreducible characters for the small groups used here.

    Candidates are restrictions of spin characters, products of characters
    already found and Galois conjugates.  A remainder r left after
    subtracting known components is irreducible iff <r, r> = 1 with
    r(1) > 0.  Stops when the squared degrees sum to |G|.
    """
    nclass = len(G.classes)
    traces = [G.representative(c).trace() for c in range(nclass)]
    found: list[Character2D] = []

    def total():
        return sum(int(ch.degree.to_fraction()) ** 2 for ch in found)

    def consider(values):
        r = list(values)
        for ch in found:
            m = class_inner(G, r, ch.values)
            if m != 0:
                r = [a - m * b for a, b in zip(r, ch.values)]
        if all(x == 0 for x in r):
            return
        if class_inner(G, r, r) == 1 and r[G.class_of[G.identity_index]].to_fraction() > 0:
            new = Character2D(G, tuple(r))
            found.append(new)
            for k in _galois_exponents(G.field.conductor):
                consider(new.galois(k).values)

    one = G.field.one
    h_prev, h = [one] * nclass, list(traces)
    consider(h_prev)
    for two_j in range(1, max_spin2 + 1):
        if total() == G.order:
            break
        consider(h)
        for a in list(found):
            for b in list(found):
                consider(tuple(x * y for x, y in zip(a.values, b.values)))
        h_prev, h = h, [t * x - y for t, x, y in zip(traces, h, h_prev)]
    if total() != G.order:
        raise AssertionError("character search did not complete")
    _label_irreps(G, found, traces)
    found.sort(key=lambda ch: (int(ch.degree.to_fraction()), ch.label))
    return found


def _label_irreps(G, chars, traces):
    # spin restrictions get pi_d, their sqrt5 twists get pi_dbar, anything else primes
    twist = _bar_twist(G)
    nclass = len(traces)
    one = G.field.one
    spin = {}
    h_prev, h = [one] * nclass, list(traces)
    spin[1] = tuple(h_prev)
    for d in range(2, 64):
        spin[d] = tuple(h)
        h_prev, h = h, [t * x - y for t, x, y in zip(traces, h, h_prev)]
    used = set()
    for ch in chars:
        d = int(ch.degree.to_fraction())
        if spin[d] == ch.values:
            ch.label = f"pi{d}"
            used.add(ch.label)
    for ch in chars:
        if ch.label:
            continue
        d = int(ch.degree.to_fraction())
        if twist != 1 and spin[d] == ch.galois(twist).values:
            ch.label = f"pi{d}bar"
        else:
            label = f"pi{d}'"
            while label in used:
                label += "'"
            ch.label = label
        used.add(ch.label)


# --------------------------------------------------------------------------
# Clifford hierarchy


@lru_cache(maxsize=None)
def _clifford_set(conductor: int) -> frozenset:
    fld = make_field(conductor)
    return frozenset(two_o(fld).elements)


def clifford_membership(g: GroupElement) -> bool:
    N = g.field.conductor
    if N % 8:
        N = math.lcm(N, 8)
        g = g.lift(N)
    return g in _clifford_set(N)


def classify_hierarchy(g: GroupElement) -> str:
    """'clifford', 'exotic' (some entry outside the 2-power cyclotomic
    subfield, hence in no hierarchy level) or 'indeterminate'."""
    if clifford_membership(g):
        return "clifford"
    if not all(in_two_power_subfield(x) for x in g.entries):
        return "exotic"
    return "indeterminate"
