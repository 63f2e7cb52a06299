"""Finite reflection groups: enumeration, signs, stabilizers, transversals.

Elements are stored as integer matrices acting on the ambient space (all
Weyl elements are integral in the ambient bases used by `rootsys`), with
the sign cached as the parity of the generator word.  Enumeration is
breadth-first by word length with ties broken lexicographically by the
generator word, which makes element order, and everything derived from
it, fully deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityError, DomainError
from .exactlin import Vec, vsub
from .rootsys import RootSystem, weyl_order
from .torus import TorusPoint

#: Default cap on enumerated group order; admits E7, refuses E8.
DEFAULT_WEYL_CAP = 3_000_000

#: Below this order the stabilizer is found by exhaustive fixed-point
#: filtering; above it by closure of the degenerate-root reflections.
FILTER_THRESHOLD = 100_000


@dataclass(frozen=True)
class WeylElement:
    """Orthogonal ambient transformation with cached sign (determinant)."""

    matrix: tuple  # tuple of tuple of int, rows
    sign: int
    word: tuple = field(default=(), compare=False)

    def apply(self, v) -> Vec:
        """Exact image of a rational vector."""
        return tuple(
            sum((Fraction(m) * Fraction(x) for m, x in zip(row, v)), Fraction(0))
            for row in self.matrix
        )

    def apply_point(self, h: TorusPoint) -> TorusPoint:
        if h.exact:
            return TorusPoint(self.apply(h.coords), True)
        rad = tuple(
            float(sum(m * x for m, x in zip(row, h.coords))) for row in self.matrix
        )
        return TorusPoint(rad, False)

    def compose(self, other: "WeylElement") -> "WeylElement":
        a = np.array(self.matrix, dtype=np.int64)
        b = np.array(other.matrix, dtype=np.int64)
        return WeylElement(
            _to_tuple(a @ b), self.sign * other.sign, self.word + other.word
        )

    def inverse(self) -> "WeylElement":
        m = np.array(self.matrix, dtype=np.int64)
        inv = np.rint(np.linalg.inv(m)).astype(np.int64)
        if not (m @ inv == np.eye(len(m), dtype=np.int64)).all():
            raise AssertionError("non-integral inverse of a Weyl element")
        return WeylElement(_to_tuple(inv), self.sign, tuple(reversed(self.word)))

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def _to_tuple(arr) -> tuple:
    return tuple(tuple(int(x) for x in row) for row in arr)


def identity_element(dim: int) -> WeylElement:
    return WeylElement(_to_tuple(np.eye(dim, dtype=np.int64)), 1, ())


def reflection(rs: RootSystem, alpha) -> WeylElement:
    """Reflection in a root: s_a(x) = x - 2(x|a)/(a|a) * a."""
    alpha = tuple(Fraction(x) for x in alpha)
    if all(x == 0 for x in alpha):
        raise DomainError("cannot reflect in the zero vector")
    if not rs.is_root(alpha):
        raise DomainError(f"{alpha} is not a root of {rs.spec.name}")
    n = rs.ambient_dim
    nn = rs.norm2(alpha)
    rows = []
    for k in range(n):
        row = []
        for j in range(n):
            ej = tuple(Fraction(1) if t == j else Fraction(0) for t in range(n))
            val = (Fraction(1) if k == j else Fraction(0)) - 2 * rs.inner(ej, alpha) / nn * alpha[k]
            if val.denominator != 1:
                raise AssertionError("reflection matrix not integral")
            row.append(int(val))
        rows.append(tuple(row))
    return WeylElement(tuple(rows), -1, ())


def reflect(rs: RootSystem, alpha, x) -> Vec:
    """Image of x under the reflection in root alpha (exact)."""
    alpha = tuple(Fraction(v) for v in alpha)
    if all(v == 0 for v in alpha):
        raise DomainError("cannot reflect in the zero vector")
    x = tuple(Fraction(v) for v in x)
    c = 2 * rs.inner(x, alpha) / rs.norm2(alpha)
    return vsub(x, tuple(c * a for a in alpha))


class WeylGroup:
    """Fully enumerated reflection group of a root system."""

    def __init__(self, rs: RootSystem, elements, generators):
        self.rs = rs
        self.elements = elements
        self.generators = generators
        self.order = len(elements)
        self._index = {e.matrix: i for i, e in enumerate(elements)}

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    def index_of(self, w: WeylElement) -> int:
        try:
            return self._index[w.matrix]
        except KeyError:
            raise DomainError("element does not belong to this Weyl group") from None

    def __contains__(self, w: WeylElement) -> bool:
        return w.matrix in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def orbit_exact(self, coords) -> list[Vec]:
        """Images w(coords) for every element, in enumeration order."""
        return [w.apply(coords) for w in self.elements]


def generate_weyl_group(rs: RootSystem, cap: int | None = None) -> WeylGroup:
    """Breadth-first closure of the simple reflections.

    Raises CapacityError before doing any work if the classification order
    exceeds the cap (default 3e6, or WEYLCHAR_CAP_WEYL from the environment).
    """
    if cap is None:
        cap = int(os.environ.get("WEYLCHAR_CAP_WEYL", DEFAULT_WEYL_CAP))
    expected = weyl_order(rs.spec)
    if expected > cap:
        raise CapacityError(
            f"Weyl group of {rs.spec.name} has order {expected}, above the cap {cap}",
            required=expected,
            cap=cap,
        )
    gens = [reflection(rs, a) for a in rs.simple_roots]
    gen_mats = [np.array(g.matrix, dtype=np.int64) for g in gens]
    dim = rs.ambient_dim

    mats = [np.eye(dim, dtype=np.int64)]
    words = [()]
    signs = [1]
    seen = {mats[0].tobytes(): 0}
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            base = mats[idx]
            for gi, gm in enumerate(gen_mats):
                prod = base @ gm  # right-multiply: word grows on the right
                key = prod.tobytes()
                if key not in seen:
                    seen[key] = len(mats)
                    mats.append(prod)
                    words.append(words[idx] + (gi,))
                    signs.append(-signs[idx])
                    nxt.append(len(mats) - 1)
        frontier = nxt
    if len(mats) != expected:
        raise AssertionError(
            f"enumerated {len(mats)} elements for {rs.spec.name}, expected {expected}"
        )
    elements = [
        WeylElement(_to_tuple(m), s, w) for m, s, w in zip(mats, signs, words)
    ]
    return WeylGroup(rs, elements, gens)


@dataclass(frozen=True)
class Stabilizer:
    """Subgroup of W fixing a torus point (coordinates mod the period lattice).

    `mode` records how the elements were obtained: "filtered" (exhaustive
    fixed-point scan, ground truth) or "closure" (generated by reflections
    in the degenerate roots; coincides with the filtered group for points
    in the closed fundamental alcove).
    """

    parent: WeylGroup
    elements: tuple
    generating_reflections: tuple
    mode: str

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def fixes_torus_point(rs: RootSystem, w: WeylElement, h0: TorusPoint) -> bool:
    """Whether w(h0) and h0 are the same torus element.

    Equality means the difference is a period of the torus, i.e. lies in
    2*pi times the coroot lattice (the kernel of exp for the simply
    connected compact group, where every dominant integral weight is a
    valid highest weight).
    """
    if not h0.exact:
        raise DomainError("stabilizer computations need an exact torus point")
    diff = vsub(w.apply(h0.coords), h0.coords)
    if all(x == 0 for x in diff):
        return True
    half = tuple(x / 2 for x in diff)
    return rs.in_coroot_lattice(half)


def _closure_of(rs: RootSystem, seeds, dim) -> list[WeylElement]:
    mats = [np.eye(dim, dtype=np.int64)]
    words = [()]
    signs = [1]
    seen = {mats[0].tobytes(): 0}
    seed_mats = [np.array(s.matrix, dtype=np.int64) for s in seeds]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            for sm, sw in zip(seed_mats, seeds):
                prod = mats[idx] @ sm
                key = prod.tobytes()
                if key not in seen:
                    seen[key] = len(mats)
                    mats.append(prod)
                    words.append(words[idx])
                    signs.append(-signs[idx])
                    nxt.append(len(mats) - 1)
        frontier = nxt
    return [WeylElement(_to_tuple(m), s, ()) for m, s in zip(mats, signs)]


def stabilizer(
    rs: RootSystem,
    group: WeylGroup,
    h0: TorusPoint,
    mode: str = "auto",
) -> Stabilizer:
    """Stabilizer of an exact torus point inside an enumerated Weyl group.

    mode "filtered" scans all of W for fixed points; "closure" generates
    from the reflections in degenerate roots; "auto" picks "filtered" up to
    order 1e5 and "closure" beyond; "crosscheck" runs both and asserts they
    agree (intended for alcove points, where the identification is a
    theorem).
    """
    rs.validate_point(h0)
    if not h0.exact:
        raise DomainError("stabilizer requires an exact torus point")
    split = rs.degenerate_split(h0)
    gen_refl = tuple(reflection(rs, a) for a in split.deg)

    def filtered():
        return tuple(w for w in group.elements if fixes_torus_point(rs, w, h0))

    def closure():
        elems = _closure_of(rs, gen_refl, rs.ambient_dim)
        idx = sorted(group.index_of(e) for e in elems)
        return tuple(group.elements[i] for i in idx)

    if mode == "auto":
        mode = "filtered" if group.order <= FILTER_THRESHOLD else "closure"
    if mode == "filtered":
        elements = filtered()
    elif mode == "closure":
        elements = closure()
    elif mode == "crosscheck":
        a, b = filtered(), closure()
        if [w.matrix for w in a] != [w.matrix for w in b]:
            raise AssertionError(
                "point stabilizer differs from degenerate-reflection closure "
                "(point outside the fundamental alcove?)"
            )
        elements, mode = a, "crosscheck"
    else:
        raise DomainError(f"unknown stabilizer mode {mode!r}")
    if group.order % len(elements) != 0:
        raise AssertionError("stabilizer order does not divide the group order")
    return Stabilizer(group, elements, gen_refl, mode)


@dataclass(frozen=True)
class CosetTransversal:
    """Minimal-word representatives of the left cosets b*W0, in BFS order."""

    reps: tuple

    def __iter__(self):
        return iter(self.reps)

    def __len__(self):
        return len(self.reps)


def coset_transversal(group: WeylGroup, w0: Stabilizer | list) -> CosetTransversal:
    """One representative per left coset of W0, each minimal in BFS order."""
    members = list(w0.elements if isinstance(w0, Stabilizer) else w0)
    member_idx = set()
    for s in members:
        member_idx.add(group.index_of(s))
    if group.order % len(members) != 0:
        raise DomainError("W0 is not a subgroup: order does not divide |W|")
    sub_mats = [np.array(s.matrix, dtype=np.int64) for s in members]
    assigned = bytearray(group.order)
    reps = []
    for i, w in enumerate(group.elements):
        if assigned[i]:
            continue
        reps.append(w)
        wm = np.array(w.matrix, dtype=np.int64)
        for sm in sub_mats:
            j = group._index.get(_to_tuple(wm @ sm))
            if j is None:
                raise DomainError("W0 is not closed inside W")
            assigned[j] = 1
    if len(reps) * len(members) != group.order:
        raise AssertionError("transversal does not partition the group")
    return CosetTransversal(tuple(reps))
