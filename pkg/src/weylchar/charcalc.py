"""Character evaluation: dimension formula, regular and singular points.

The regular path is the plain Weyl character formula.  At a singular
point h0 the formula is an indeterminate 0/0; the value is resolved by
factoring the Weyl sum over cosets of the subgroup generated by
reflections in the degenerate roots.  Each coset contributes a phase
times the exact dimension of an effective sub-representation living on
the image of the degenerate roots, and the non-degenerate roots supply a
finite prefactor:

    chi(h0) = eps * [prod_{a ndeg} (e^{i(a|h0)/2} - e^{-i(a|h0)/2})]^{-1}
                  * sum_b sgn(b) e^{i(eta|b h0)} * subdim_b

with eta = lambda + rho, subdim_b = prod_{a deg} (b^{-1}eta|a)/(rho_deg|a),
and eps = (-1)^{sum_{a deg} (a|h0)/(2 pi)} accounting for degeneracies
reached through nonzero multiples of 2*pi (torus periodicity).

An independent ground-truth oracle evaluates the character as the
multiplicity-weighted sum over all weights (Freudenthal recursion); it is
valid at every torus point and anchors the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exactlin
from .errors import CapacityError, DomainError, SingularPointError, SnapError
from .exactlin import Vec, vadd, vscale, vsub, vzero
from .rootsys import EPS_SNAP, RootSystem
from .torus import TorusPoint, exact_point
from .utils import fold_angle, pairwise_sum, sin_half_angle, sin_half_pi, unit_phase
from .weylgroup import (
    CosetTransversal,
    WeylElement,
    WeylGroup,
    coset_transversal,
    generate_weyl_group,
    stabilizer,
)

_MACHINE_EPS = 2.0 ** -52

#: Largest dimension for which the weight-multiplicity oracle will run.
ORACLE_DIM_CAP = 100_000

#: Denominator bound for rationalizing snapped floating points.
SNAP_MAX_DENOMINATOR = 10**6


@dataclass(frozen=True)
class CharacterValue:
    """A character value with a crude forward-error estimate."""

    value: complex
    condition: float


@dataclass(frozen=True)
class EffectiveWeightData:
    """Per-coset data of the singular-point factorization."""

    coset_rep: WeylElement
    image_roots: tuple
    lam_prime: Vec
    rho_prime: Vec
    subdim: int


@lru_cache(maxsize=None)
def cached_weyl_group(rs: RootSystem, cap: int | None = None) -> WeylGroup:
    return generate_weyl_group(rs, cap)


def dim_irrep(rs: RootSystem, lam) -> int:
    """Exact dimension of the irrep with highest weight lam (Weyl formula)."""
    lam = rs.validate_weight(lam)
    if not rs.is_dominant_integral(lam):
        raise DomainError(f"{lam} is not a dominant integral weight for {rs.spec.name}")
    eta = vadd(lam, rs.weyl_vector)
    num = Fraction(1)
    den = Fraction(1)
    for a in rs.positive_roots:
        num *= rs.inner(eta, a)
        den *= rs.inner(rs.weyl_vector, a)
    d = num / den
    if d.denominator != 1 or d <= 0:
        raise AssertionError(f"dimension formula gave non-positive-integer {d}")
    return int(d)


# ---------------------------------------------------------------------------
# Regular points
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _exact_orbit(rs: RootSystem, coords: tuple):
    """[(sign_w, w(coords))] over the Weyl group, in enumeration order."""
    group = cached_weyl_group(rs)
    return tuple((w.sign, w.apply(coords)) for w in group.elements)


def char_regular(rs: RootSystem, lam, h: TorusPoint) -> CharacterValue:
    """Weyl character formula at a regular torus point.

    Exact points keep the numerator exponents as rational multiples of pi
    (reduced mod 2 before any trigonometry) and collect equal exponents, so
    large weights suffer no phase drift.  Singular points are refused with
    a pointer to char_singular.
    """
    lam = rs.validate_weight(lam)
    rs.validate_point(h)
    if not rs.is_dominant_integral(lam):
        raise DomainError(f"{lam} is not dominant integral for {rs.spec.name}")
    split = rs.degenerate_split(h)
    if split.deg:
        raise SingularPointError(
            f"point {h} is singular for {rs.spec.name} "
            f"({len(split.deg)} degenerate roots); use char_singular"
        )
    eta = vadd(lam, rs.weyl_vector)
    if h.exact:
        return _char_regular_exact(rs, eta, h)
    return _char_regular_float(rs, eta, h)


def _char_regular_exact(rs: RootSystem, eta: Vec, h: TorusPoint) -> CharacterValue:
    orbit = _exact_orbit(rs, h.coords)
    collected: dict[Fraction, int] = {}
    for sign, wc in orbit:
        q = rs.inner(eta, wc) % 2
        collected[q] = collected.get(q, 0) + sign
    terms = [c * unit_phase(q) for q, c in sorted(collected.items()) if c != 0]
    num = pairwise_sum(terms)
    den = 1 + 0j
    for a in rs.positive_roots:
        den *= 2j * sin_half_pi(rs.pairing_coeff(a, h))
    value = num / den
    terms_abs = sum(abs(c) for c in collected.values())
    condition = terms_abs / abs(den) * _MACHINE_EPS
    return CharacterValue(value, condition)


def _char_regular_float(rs: RootSystem, eta: Vec, h: TorusPoint) -> CharacterValue:
    group = cached_weyl_group(rs)
    eta_f = tuple(float(x) for x in eta)
    gram_f = [[float(g) for g in row] for row in rs.gram]
    if rs._gram_is_identity:
        geta = eta_f
    else:
        geta = tuple(sum(gram_f[i][j] * eta_f[j] for j in range(len(eta_f)))
                     for i in range(len(eta_f)))
    terms = []
    for w in group.elements:
        wc = tuple(sum(m * x for m, x in zip(row, h.coords)) for row in w.matrix)
        phase = fold_angle(sum(a * b for a, b in zip(geta, wc)))
        terms.append(w.sign * complex(math.cos(phase), math.sin(phase)))
    num = pairwise_sum(terms)
    den = 1 + 0j
    for a in rs.positive_roots:
        if rs._gram_is_identity:
            p = sum(float(x) * y for x, y in zip(a, h.coords))
        else:
            ga = exactlin.mat_vec(rs.gram, a)
            p = sum(float(x) * y for x, y in zip(ga, h.coords))
        den *= 2j * sin_half_angle(p)
    value = num / den
    condition = len(terms) / abs(den) * _MACHINE_EPS
    return CharacterValue(value, condition)


# ---------------------------------------------------------------------------
# Snapping floating points onto singular strata
# ---------------------------------------------------------------------------


def is_near_singular(rs: RootSystem, h: TorusPoint) -> bool:
    if h.exact:
        return bool(rs.degenerate_split(h).deg)
    return bool(rs.degenerate_split(h).deg)


def snap_to_exact(rs: RootSystem, h: TorusPoint) -> TorusPoint:
    """Rationalize a floating point onto its singular stratum, or fail loudly.

    Coordinates are reconstructed as rationals with denominator at most
    1e6 (type A reconstructs the last coordinate from the sum-zero
    constraint).  The snap succeeds only if the reconstruction moves every
    coordinate by less than the snap tolerance and turns every
    near-degenerate pairing into an exact one.
    """
    if h.exact:
        return h
    rs.validate_point(h)
    rad = h.coords
    if rs.spec.family == "A":
        head = [Fraction(x / math.pi).limit_denominator(SNAP_MAX_DENOMINATOR)
                for x in rad[:-1]]
        coeffs = head + [-sum(head, Fraction(0))]
    else:
        coeffs = [Fraction(x / math.pi).limit_denominator(SNAP_MAX_DENOMINATOR)
                  for x in rad]
    for c, x in zip(coeffs, rad):
        if abs(math.pi * float(c) - x) > EPS_SNAP:
            raise SnapError(
                f"cannot rationalize {h}: coordinate {x!r} is not within "
                f"{EPS_SNAP} of a rational multiple of pi with denominator "
                f"<= {SNAP_MAX_DENOMINATOR}"
            )
    snapped = exact_point(coeffs)
    for a in rs.positive_roots:
        if rs._gram_is_identity:
            p = sum(float(x) * y for x, y in zip(a, rad))
        else:
            p = sum(float(x) * y for x, y in zip(exactlin.mat_vec(rs.gram, a), rad))
        if abs(fold_angle(p)) < EPS_SNAP and rs.pairing_coeff(a, snapped) % 2 != 0:
            raise SnapError(
                f"cannot rationalize {h}: near-degenerate root {a} does not "
                "land exactly on the stratum after reconstruction"
            )
    return snapped


# ---------------------------------------------------------------------------
# Singular points
# ---------------------------------------------------------------------------


class _SingularEvaluator:
    """Cached per-(rs, h0) data for the assembled singular character."""

    def __init__(self, rs: RootSystem, h0: TorusPoint, transversal=None):
        self.rs = rs
        self.h0 = h0
        self.split = rs.degenerate_split(h0)
        group = cached_weyl_group(rs)
        w0 = stabilizer(rs, group, h0, mode="closure")
        self.w0 = w0
        self.transversal: CosetTransversal = transversal or coset_transversal(group, w0)
        self.rho_deg = vscale(Fraction(1, 2), _vsum(self.split.deg, rs.ambient_dim))
        self.deg_denoms = [rs.inner(self.rho_deg, a) for a in self.split.deg]
        # (-1)^{sum k_a}: degenerate pairings may sit at nonzero multiples of 2*pi
        k_total = sum(int(rs.pairing_coeff(a, h0) / 2) for a in self.split.deg)
        self.eps = -1 if k_total % 2 else 1
        pref = 1 + 0j
        for a in self.split.ndeg:
            pref *= 2j * sin_half_pi(rs.pairing_coeff(a, h0))
        self.prefactor = pref
        self.b_inverses = [b.inverse() for b in self.transversal]
        self.b_signs = [b.sign for b in self.transversal]

    def evaluate(self, lam: Vec) -> CharacterValue:
        rs = self.rs
        eta = vadd(lam, rs.weyl_vector)
        # Collect exact integer coefficients per reduced phase so resonant
        # cancellations across cosets produce exact zeros, not float dust.
        collected: dict[Fraction, int] = {}
        abs_sum = 0.0
        for b_inv, sgn in zip(self.b_inverses, self.b_signs):
            nu = b_inv.apply(eta)
            sub = Fraction(1)
            for a, dnm in zip(self.split.deg, self.deg_denoms):
                sub *= rs.inner(nu, a) / dnm
            if sub.denominator != 1:
                raise AssertionError("effective dimension is not an integer")
            q = rs.inner(nu, self.h0.coords) % 2
            collected[q] = collected.get(q, 0) + sgn * int(sub)
            abs_sum += abs(float(sub))
        terms = [c * unit_phase(q) for q, c in sorted(collected.items()) if c != 0]
        num = pairwise_sum(terms)
        value = self.eps * num / self.prefactor
        condition = abs_sum / abs(self.prefactor) * _MACHINE_EPS
        return CharacterValue(value, condition)


@lru_cache(maxsize=256)
def _cached_evaluator(rs: RootSystem, h0: TorusPoint) -> _SingularEvaluator:
    return _SingularEvaluator(rs, h0)


def char_singular(
    rs: RootSystem, lam, h0: TorusPoint, transversal: CosetTransversal | None = None
) -> CharacterValue:
    """Exact character at a singular torus point via stabilizer factorization.

    Reduces to char_regular when no root is degenerate and to the
    dimension when h0 = 0.  Floating h0 goes through the snap pipeline
    first and fails loudly if it cannot be rationalized.
    """
    lam = rs.validate_weight(lam)
    if not rs.is_dominant_integral(lam):
        raise DomainError(f"{lam} is not dominant integral for {rs.spec.name}")
    if not h0.exact:
        h0 = snap_to_exact(rs, h0)
    rs.validate_point(h0)
    split = rs.degenerate_split(h0)
    if not split.deg:
        return _char_regular_exact(rs, vadd(lam, rs.weyl_vector), h0)
    if transversal is not None:
        return _SingularEvaluator(rs, h0, transversal).evaluate(lam)
    return _cached_evaluator(rs, h0).evaluate(lam)


def character(rs: RootSystem, lam, h: TorusPoint) -> CharacterValue:
    """Evaluate the character at any torus point, dispatching on degeneracy."""
    if h.exact:
        if rs.degenerate_split(h).deg:
            return char_singular(rs, lam, h)
        return char_regular(rs, lam, h)
    if is_near_singular(rs, h):
        return char_singular(rs, lam, snap_to_exact(rs, h))
    return char_regular(rs, lam, h)


# ---------------------------------------------------------------------------
# Effective subsystems and weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsystemComponent:
    """A connected component of a degenerate root subsystem."""

    family: str
    rank: int
    positive_roots: tuple
    simple_roots: tuple
    rho: Vec
    weyl_order: int

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class EffectiveSubsystem:
    """Root subsystem spanned by (an image of) the degenerate roots."""

    parent: RootSystem
    positive_roots: tuple
    simple_roots: tuple
    rho: Vec
    components: tuple

    @property
    def weyl_order(self) -> int:
        out = 1
        for c in self.components:
            out *= c.weyl_order
        return out

    def project(self, v) -> Vec:
        """Orthogonal projection onto the span of the subsystem."""
        if not self.simple_roots:
            return vzero(self.parent.ambient_dim)
        return exactlin.project_onto_span(
            self.simple_roots, self.parent.gram, tuple(Fraction(x) for x in v)
        )

    def is_integral(self, lam) -> bool:
        return all(
            (2 * self.parent.inner(lam, b) / self.parent.inner(b, b)).denominator == 1
            for b in self.simple_roots
        )


def _vsum(vectors, dim) -> Vec:
    out = vzero(dim)
    for v in vectors:
        out = vadd(out, v)
    return out


def _classify_component(rs: RootSystem, positive, simple) -> tuple[str, int, int]:
    r = len(simple)
    c = len(positive)
    norms = sorted({rs.norm2(a) for a in positive})
    if len(norms) == 1:
        if c == r * (r + 1) // 2:
            fam = "A"
        elif c == r * (r - 1):
            fam = "D"
        else:
            fam = "E"
            if (r, c) not in {(6, 36), (7, 63), (8, 120)}:
                raise AssertionError(f"unclassifiable simply-laced component r={r} c={c}")
    else:
        ratio = norms[-1] / norms[0]
        if ratio == 3:
            fam = "G"
        elif (r, c) == (4, 24):
            fam = "F"
        else:
            short = sum(1 for a in positive if rs.norm2(a) == norms[0])
            lng = c - short
            if r == 2:
                fam = "B"  # B2 and C2 are isomorphic; pick B by convention
            elif short == r:
                fam = "B"
            elif lng == r:
                fam = "C"
            else:
                raise AssertionError(f"unclassifiable two-length component r={r} c={c}")
    orders = {
        "A": math.factorial(r + 1),
        "B": 2**r * math.factorial(r),
        "C": 2**r * math.factorial(r),
        "D": 2 ** (r - 1) * math.factorial(r),
        "E": {6: 51840, 7: 2903040, 8: 696729600}.get(r, 0),
        "F": 1152,
        "G": 12,
    }
    return fam, r, orders[fam]


def effective_subsystem(rs: RootSystem, image_roots) -> EffectiveSubsystem:
    """Decompose a (possibly Weyl-transported) degenerate root set.

    The input is a positive system of a closed subsystem of the roots of
    rs, e.g. b applied to the degenerate positive roots.  Components are
    the connectivity classes under mutual non-orthogonality; each carries
    its own Weyl vector and classification.
    """
    roots = [tuple(Fraction(x) for x in r) for r in image_roots]
    root_set = set(roots)
    for r in roots:
        if not rs.is_root(r):
            raise DomainError(f"{r} is not a root of {rs.spec.name}")
        if tuple(-x for x in r) in root_set:
            raise DomainError("input contains a root together with its negative")
    full = root_set | {tuple(-x for x in r) for r in roots}
    for x in roots:
        for y in roots:
            for cand in (vadd(x, y), vsub(x, y)):
                if rs.is_root(cand) and cand not in full:
                    raise DomainError(
                        f"input not closed: {x} and {y} combine to root {cand} "
                        "outside the set"
                    )

    # Connected components under non-orthogonality.
    remaining = set(roots)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            x = frontier.pop()
            for y in list(remaining - comp):
                if rs.inner(x, y) != 0:
                    comp.add(y)
                    frontier.append(y)
        comps.append(sorted(comp))
        remaining -= comp

    components = []
    for comp in comps:
        cset = set(comp)
        # A member is simple for the component iff it is not a sum of two members.
        simple = tuple(
            r for r in comp
            if not any(vsub(r, s) in cset for s in comp if s != r)
        )
        rho = vscale(Fraction(1, 2), _vsum(comp, rs.ambient_dim))
        fam, rank, order = _classify_component(rs, comp, simple)
        components.append(
            SubsystemComponent(fam, rank, tuple(comp), simple, rho, order)
        )
    components.sort(key=lambda c: (-len(c.positive_roots), c.positive_roots))
    all_simple = tuple(s for c in components for s in c.simple_roots)
    rho = vscale(Fraction(1, 2), _vsum(roots, rs.ambient_dim))
    return EffectiveSubsystem(rs, tuple(sorted(roots)), all_simple, rho, tuple(components))


def effective_weight(
    rs: RootSystem, lam, b: WeylElement, sub: EffectiveSubsystem
) -> EffectiveWeightData:
    """Effective highest-weight data for one coset representative.

    lam' + rho' is the exact orthogonal projection of lam + rho onto the
    span of the image roots; lam' is integral for the subsystem and the
    signed product formula gives the effective dimension.
    """
    lam = rs.validate_weight(lam)
    if not rs.is_integral_weight(lam):
        raise DomainError("effective weights require an integral weight")
    eta = vadd(lam, rs.weyl_vector)
    proj = sub.project(eta)
    lam_prime = vsub(proj, sub.rho)
    if not sub.is_integral(lam_prime):
        raise AssertionError("effective weight escaped the subsystem weight lattice")
    subdim = Fraction(1)
    for a in sub.positive_roots:
        subdim *= rs.inner(eta, a) / rs.inner(sub.rho, a)
    if subdim.denominator != 1:
        raise AssertionError("effective dimension is not an integer")
    return EffectiveWeightData(
        coset_rep=b,
        image_roots=sub.positive_roots,
        lam_prime=lam_prime,
        rho_prime=sub.rho,
        subdim=int(subdim),
    )


# ---------------------------------------------------------------------------
# Weight multiplicities (Freudenthal) and the weight-sum oracle
# ---------------------------------------------------------------------------


@lru_cache(maxsize=128)
def _multiplicities_cached(rs: RootSystem, lam: Vec, cap: int) -> dict:
    dim = dim_irrep(rs, lam)
    if dim > cap:
        raise CapacityError(
            f"dim {dim} exceeds the weight-multiplicity cap {cap}",
            required=dim,
            cap=cap,
        )
    simple = rs.simple_roots
    rank = rs.rank
    rho = rs.weyl_vector
    eta = vadd(lam, rho)
    pos = rs.positive_roots
    pos_coeff = [rs.root_coeffs[a] for a in pos]
    lam_dot = [rs.inner(lam, a) for a in pos]
    aj_dot = [[rs.inner(simple[j], a) for j in range(rank)] for a in pos]
    eta_dot_simple = [rs.inner(eta, s) for s in simple]
    gram_alpha = [[rs.inner(simple[i], simple[j]) for j in range(rank)] for i in range(rank)]

    def denom(c):
        # ||lam+rho||^2 - ||mu+rho||^2 for mu = lam - sum c_j alpha_j
        lin = 2 * sum(c[j] * eta_dot_simple[j] for j in range(rank))
        quad = sum(
            c[i] * c[j] * gram_alpha[i][j] for i in range(rank) for j in range(rank)
        )
        return lin - quad

    mult = {(0,) * rank: 1}
    level = [(0,) * rank]
    while level:
        candidates = set()
        for c in level:
            for j in range(rank):
                cand = list(c)
                cand[j] += 1
                candidates.add(tuple(cand))
        nxt = []
        for c in sorted(candidates):
            dnm = denom(c)
            if dnm <= 0:
                continue
            total = Fraction(0)
            for idx, a in enumerate(pos):
                k = 1
                while True:
                    up = tuple(c[j] - k * pos_coeff[idx][j] for j in range(rank))
                    if any(x < 0 for x in up):
                        break
                    m_up = mult.get(up, 0)
                    if m_up:
                        # (mu + k*alpha | alpha)
                        pairing = lam_dot[idx] - sum(
                            up[j] * aj_dot[idx][j] for j in range(rank)
                        )
                        total += m_up * pairing
                    k += 1
            if total == 0:
                continue
            m = 2 * total / dnm
            if m.denominator != 1 or m < 0:
                raise AssertionError("Freudenthal recursion produced a non-integer")
            if m:
                mult[c] = int(m)
                nxt.append(c)
        level = nxt

    out = {}
    for c, m in mult.items():
        mu = lam
        for j in range(rank):
            if c[j]:
                mu = vsub(mu, vscale(c[j], simple[j]))
        out[mu] = m
    if sum(out.values()) != dim:
        raise AssertionError("multiplicities do not sum to the dimension")
    return out


def weight_multiplicities(rs: RootSystem, lam, cap: int = ORACLE_DIM_CAP) -> dict:
    """Weight -> multiplicity map of the irrep, by Freudenthal recursion."""
    lam = rs.validate_weight(lam)
    if not rs.is_dominant_integral(lam):
        raise DomainError(f"{lam} is not dominant integral for {rs.spec.name}")
    return dict(_multiplicities_cached(rs, lam, cap))


def char_weightsum_oracle(
    rs: RootSystem, lam, h: TorusPoint, cap: int = ORACLE_DIM_CAP
) -> CharacterValue:
    """Ground-truth character: sum of mult(mu) * e^{i(mu|h)} over all weights.

    Valid at every torus point, regular or singular.
    """
    lam = rs.validate_weight(lam)
    rs.validate_point(h)
    mults = weight_multiplicities(rs, lam, cap)
    items = sorted(mults.items())
    if h.exact:
        collected: dict[Fraction, int] = {}
        for mu, m in items:
            q = rs.inner(mu, h.coords) % 2
            collected[q] = collected.get(q, 0) + m
        terms = [m * unit_phase(q) for q, m in sorted(collected.items())]
        value = pairwise_sum(terms)
    else:
        gram_f = rs.gram
        terms = []
        for mu, m in items:
            if rs._gram_is_identity:
                p = sum(float(x) * y for x, y in zip(mu, h.coords))
            else:
                p = sum(float(x) * y for x, y in zip(exactlin.mat_vec(gram_f, mu), h.coords))
            p = fold_angle(p)
            terms.append(m * complex(math.cos(p), math.sin(p)))
        value = pairwise_sum(terms)
    dim = sum(mults.values())
    return CharacterValue(value, dim * _MACHINE_EPS)
