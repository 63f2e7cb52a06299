"""Characters: dimension formula, regular/singular WCF, Freudenthal oracle."""

import cmath
import math
from fractions import Fraction as F

import pytest

from weylchar import build_root_system, exact_point, float_point, zero_point
from weylchar.charcalc import (
    char_regular,
    char_singular,
    char_weightsum_oracle,
    character,
    dim_irrep,
    effective_subsystem,
    effective_weight,
    is_near_singular,
    snap_to_exact,
    weight_multiplicities,
)
from weylchar.errors import DomainError, SingularPointError, SnapError
from weylchar.exactlin import project_onto_span, vadd, vscale, vzero
from weylchar.weylgroup import coset_transversal, generate_weyl_group, stabilizer
from weylchar.asymptotics import alcove_stratum_points

from _helpers import random_dominant_weight, random_regular_exact_point, rng_for


def su2_closed_form(l, theta):
    """sin((l+1/2)theta)/sin(theta/2), the classical SU(2) character."""
    return math.sin((l + 0.5) * theta) / math.sin(theta / 2)


def su2_weight(l):
    return (F(l), F(-l))


def su3_defining_oracle(coords):
    """|tr g|^2 - 1 with g = diag(e^{i c_j}): the adjoint character of SU(3)."""
    tr = sum(cmath.exp(1j * c) for c in coords)
    return abs(tr) ** 2 - 1


# ---------------------------------------------------------------------------
# Dimensions
# ---------------------------------------------------------------------------


def test_dim_su2_is_2l_plus_1():
    rs = build_root_system("A1")
    for twol in range(0, 21):
        lam = (F(twol, 2), F(-twol, 2))
        assert dim_irrep(rs, lam) == twol + 1


def test_dim_trivial_and_adjoint():
    rs = build_root_system("A2")
    assert dim_irrep(rs, vzero(3)) == 1
    # product (2*2*4)/(1*1*2) over the three positive roots
    assert dim_irrep(rs, rs.weyl_vector) == 8


@pytest.mark.parametrize(
    "name", ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6", "E7", "E8"]
)
def test_adjoint_dimension_is_root_count_plus_rank(name):
    rs = build_root_system(name)
    assert dim_irrep(rs, rs.highest_root) == 2 * len(rs.positive_roots) + rs.rank


def test_dim_rejects_non_dominant():
    rs = build_root_system("A2")
    with pytest.raises(DomainError):
        dim_irrep(rs, tuple(-x for x in rs.weyl_vector))
    with pytest.raises(DomainError):
        dim_irrep(rs, (F(1, 2), F(-1, 2), F(0)))


# ---------------------------------------------------------------------------
# Regular characters
# ---------------------------------------------------------------------------


def test_su2_closed_form_float_and_exact():
    rs = build_root_system("A1")
    rng = rng_for("su2-closed-form")
    for l in (0, 1, 3, 7, F(1, 2), F(9, 2)):
        for _ in range(5):
            theta = rng.uniform(0.3, 2 * math.pi - 0.3)
            h = float_point([theta / 2, -theta / 2])
            if is_near_singular(rs, h):
                continue
            got = char_regular(rs, su2_weight(l), h).value
            assert abs(got - su2_closed_form(l, theta)) < 1e-9 * (2 * l + 1)
    # exact point: theta = pi, l = 1 gives exactly -1
    h = exact_point([F(1, 2), F(-1, 2)])
    assert abs(char_regular(rs, su2_weight(1), h).value - (-1)) < 1e-12


def test_trivial_rep_character_is_one():
    rs = build_root_system("B2")
    h = exact_point([F(1, 5), F(1, 7)])
    assert abs(char_regular(rs, vzero(2), h).value - 1) < 1e-12


def test_su3_adjoint_against_defining_oracle_regular():
    rs = build_root_system("A2")
    rng = rng_for("su3-adjoint-regular")
    for _ in range(10):
        h = random_regular_exact_point(rs, rng)
        got = char_regular(rs, rs.weyl_vector, h).value
        want = su3_defining_oracle(h.radians())
        assert abs(got - want) < 1e-9 * 8


def test_char_regular_redirects_at_singular_points():
    rs = build_root_system("A2")
    h0 = exact_point([F(1, 5), F(1, 5), F(-2, 5)])
    with pytest.raises(SingularPointError) as err:
        char_regular(rs, rs.weyl_vector, h0)
    assert "char_singular" in str(err.value)


def test_weyl_invariance_of_regular_characters():
    rng = rng_for("weyl-invariance")
    for name in ("A2", "B2", "G2"):
        rs = build_root_system(name)
        group = generate_weyl_group(rs)
        lam = random_dominant_weight(rs, rng, max_dim=400)
        h = random_regular_exact_point(rs, rng)
        ref = char_regular(rs, lam, h).value
        d = dim_irrep(rs, lam)
        for w in [group.elements[i] for i in rng.sample(range(group.order), 3)]:
            moved = w.apply_point(h)
            assert abs(char_regular(rs, lam, moved).value - ref) < 1e-9 * d


def test_character_bounded_by_dimension():
    rng = rng_for("char-bound")
    for name in ("A1", "A2", "C3"):
        rs = build_root_system(name)
        for _ in range(5):
            lam = random_dominant_weight(rs, rng, max_dim=2000)
            h = random_regular_exact_point(rs, rng)
            cv = char_regular(rs, lam, h)
            assert abs(cv.value) <= dim_irrep(rs, lam) + cv.condition


# ---------------------------------------------------------------------------
# Singular characters
# ---------------------------------------------------------------------------


def test_su3_adjoint_singular_closed_form():
    rs = build_root_system("A2")
    for den in (7, 5, 3):
        h0 = exact_point([F(1, den), F(1, den), F(-2, den)])
        a = math.pi / den
        got = char_singular(rs, rs.weyl_vector, h0).value
        assert abs(got - (4 + 4 * math.cos(3 * a))) < 1e-9


def test_singular_at_identity_is_dimension_exactly():
    for name in ("A2", "B2", "G2"):
        rs = build_root_system(name)
        lam = rs.weyl_vector
        cv = char_singular(rs, lam, zero_point(rs.ambient_dim))
        assert cv.value == complex(dim_irrep(rs, lam))


def test_singular_reduces_to_regular_when_not_degenerate():
    rs = build_root_system("A2")
    h = exact_point([F(1, 7), F(2, 7), F(-3, 7)])
    a = char_singular(rs, rs.weyl_vector, h).value
    b = char_regular(rs, rs.weyl_vector, h).value
    assert abs(a - b) < 1e-12


def test_su3_coset_subdimensions_match_paper_structure():
    # dim L' for b = e equals (lam + rho | alpha1)/(rho_su2 | alpha1) = 2 at lam = rho
    rs = build_root_system("A2")
    h0 = exact_point([F(1, 5), F(1, 5), F(-2, 5)])
    split = rs.degenerate_split(h0)
    sub = effective_subsystem(rs, split.deg)
    group = generate_weyl_group(rs)
    data = effective_weight(rs, rs.weyl_vector, group.identity, sub)
    assert data.subdim == 2
    assert sub.components[0].name == "A1"
    assert sub.rho == vscale(F(1, 2), rs.simple_roots[0])


def test_singular_against_oracle_alcove_strata():
    rng = rng_for("singular-oracle")
    for name in ("A2", "A3", "B2", "G2"):
        rs = build_root_system(name)
        for st in alcove_stratum_points(rs):
            lam = random_dominant_weight(rs, rng, max_dim=1500)
            got = char_singular(rs, lam, st.point)
            want = char_weightsum_oracle(rs, lam, st.point)
            d = dim_irrep(rs, lam)
            assert abs(got.value - want.value) < 1e-8 * d


def test_transversal_independence():
    rng = rng_for("transversal-independence")
    rs = build_root_system("A3")
    group = generate_weyl_group(rs)
    h0 = exact_point([F(1, 5), F(1, 5), F(-1, 10), F(-3, 10)])
    w0 = stabilizer(rs, group, h0, mode="closure")
    trans = coset_transversal(group, w0)
    # twist every non-identity representative by a random stabilizer element
    from weylchar.weylgroup import CosetTransversal

    members = list(w0.elements)
    twisted = [trans.reps[0]] + [
        b.compose(members[rng.randrange(len(members))]) for b in trans.reps[1:]
    ]
    lam = random_dominant_weight(rs, rng, max_dim=2000)
    d = dim_irrep(rs, lam)
    a = char_singular(rs, lam, h0).value
    b = char_singular(rs, lam, h0, transversal=CosetTransversal(tuple(twisted))).value
    assert abs(a - b) < 1e-12 * d


def test_effective_weight_integrality_over_all_cosets():
    for name in ("A2", "A3", "B2"):
        rs = build_root_system(name)
        group = generate_weyl_group(rs)
        rng = rng_for(f"eff-integrality-{name}")
        strata = [s for s in alcove_stratum_points(rs) if not s.central]
        for st in strata:
            split = rs.degenerate_split(st.point)
            w0 = stabilizer(rs, group, st.point, mode="closure")
            trans = coset_transversal(group, w0)
            lam = random_dominant_weight(rs, rng, max_dim=3000)
            for b in trans:
                image = [b.apply(a) for a in split.deg]
                sub = effective_subsystem(rs, image)
                data = effective_weight(rs, lam, b, sub)
                for beta in sub.simple_roots:
                    q = 2 * rs.inner(data.lam_prime, beta) / rs.inner(beta, beta)
                    assert q.denominator == 1


def test_effective_weight_of_zero_weight():
    rs = build_root_system("A2")
    group = generate_weyl_group(rs)
    h0 = exact_point([F(1, 5), F(1, 5), F(-2, 5)])
    sub = effective_subsystem(rs, rs.degenerate_split(h0).deg)
    data = effective_weight(rs, vzero(3), group.identity, sub)
    proj = project_onto_span(sub.simple_roots, rs.gram, rs.weyl_vector)
    assert vadd(data.lam_prime, data.rho_prime) == proj
    assert sub.is_integral(data.lam_prime)


def test_effective_subsystem_decomposition_su5():
    rs = build_root_system("A4")
    h = exact_point([F(1, 7), F(1, 7), F(1, 7), F(-3, 14), F(-3, 14)])
    sub = effective_subsystem(rs, rs.degenerate_split(h).deg)
    assert [c.name for c in sub.components] == ["A2", "A1"]
    lam = vscale(2, rs.weyl_vector)
    data = effective_weight(rs, lam, generate_weyl_group(rs).identity, sub)
    per_component = 1
    eta = vadd(lam, rs.weyl_vector)
    for comp in sub.components:
        prod = F(1)
        for a in comp.positive_roots:
            prod *= rs.inner(eta, a) / rs.inner(comp.rho, a)
        per_component *= int(prod)
    assert data.subdim == per_component


def test_effective_subsystem_rejects_unclosed_input():
    rs = build_root_system("A2")
    a1, a2 = rs.simple_roots
    with pytest.raises(DomainError):
        effective_subsystem(rs, [a1, a2])  # a1 + a2 is a root but missing


def test_effective_subsystem_empty():
    rs = build_root_system("A2")
    sub = effective_subsystem(rs, [])
    assert sub.components == ()
    assert sub.weyl_order == 1


# ---------------------------------------------------------------------------
# Oracle: multiplicities and weight sums
# ---------------------------------------------------------------------------


def test_su2_multiplicities_are_flat():
    rs = build_root_system("A1")
    for twol in (2, 5, 9):
        lam = (F(twol, 2), F(-twol, 2))
        mults = weight_multiplicities(rs, lam)
        assert len(mults) == twol + 1
        assert set(mults.values()) == {1}


def test_trivial_rep_multiplicities():
    rs = build_root_system("A2")
    assert weight_multiplicities(rs, vzero(3)) == {vzero(3): 1}


def test_adjoint_multiplicities_structure():
    rs = build_root_system("A2")
    mults = weight_multiplicities(rs, rs.weyl_vector)
    assert mults[vzero(3)] == 2
    nonzero = {mu for mu in mults if mu != vzero(3)}
    assert nonzero == set(rs.positive_roots) | {
        tuple(-x for x in r) for r in rs.positive_roots
    }


def test_multiplicity_sum_equals_dimension():
    rng = rng_for("mult-sum")
    for name in ("A2", "A3", "B2", "C3", "G2"):
        rs = build_root_system(name)
        lam = random_dominant_weight(rs, rng, max_dim=3000)
        mults = weight_multiplicities(rs, lam)
        assert sum(mults.values()) == dim_irrep(rs, lam)


def test_multiplicities_are_weyl_invariant():
    rng = rng_for("mult-weyl")
    rs = build_root_system("B2")
    lam = random_dominant_weight(rs, rng, max_dim=500)
    mults = weight_multiplicities(rs, lam)
    group = generate_weyl_group(rs)
    for w in group.elements:
        assert all(mults.get(w.apply(mu)) == m for mu, m in mults.items())


def test_oracle_matches_regular_char():
    rng = rng_for("oracle-vs-wcf")
    for name in ("A1", "A2", "B2"):
        rs = build_root_system(name)
        for _ in range(8):
            lam = random_dominant_weight(rs, rng, max_dim=5000)
            h = random_regular_exact_point(rs, rng)
            d = dim_irrep(rs, lam)
            a = char_regular(rs, lam, h).value
            b = char_weightsum_oracle(rs, lam, h).value
            assert abs(a - b) < 1e-9 * d


def test_oracle_at_identity_is_dimension():
    rs = build_root_system("G2")
    lam = rs.weight_from_fundamental((1, 1))
    cv = char_weightsum_oracle(rs, lam, zero_point(2))
    assert abs(cv.value - dim_irrep(rs, lam)) < 1e-9


def test_oracle_su3_adjoint_singular():
    rs = build_root_system("A2")
    h0 = exact_point([F(1, 5), F(1, 5), F(-2, 5)])
    got = char_weightsum_oracle(rs, rs.weyl_vector, h0).value
    assert abs(got - (4 + 4 * math.cos(3 * math.pi / 5))) < 1e-12


# ---------------------------------------------------------------------------
# Snapping
# ---------------------------------------------------------------------------


def test_snap_recovers_exact_rational_point():
    rs = build_root_system("A2")
    h = float_point([math.pi / 5, math.pi / 5, -2 * math.pi / 5])
    snapped = snap_to_exact(rs, h)
    assert snapped.coords == (F(1, 5), F(1, 5), F(-2, 5))


def test_snap_irrational_coordinates_on_stratum():
    # a = 1 radian: irrational in pi units, but exactly on the (a,a,-2a) stratum
    rs = build_root_system("A2")
    h = float_point([1.0, 1.0, -2.0])
    snapped = snap_to_exact(rs, h)
    assert rs.pairing_coeff(rs.simple_roots[0], snapped) == 0
    got = char_singular(rs, rs.weyl_vector, h).value
    assert abs(got - (4 + 4 * math.cos(3.0))) < 1e-9


def test_snap_failure_is_loud():
    rs = build_root_system("A2")
    bad = float_point([1.0 + 3e-10, 1.0, -2.0 - 3e-10])
    with pytest.raises(SnapError):
        snap_to_exact(rs, bad)
    with pytest.raises(SnapError):
        char_singular(rs, rs.weyl_vector, bad)


def test_near_singular_detection():
    rs = build_root_system("A2")
    assert is_near_singular(rs, float_point([0.3, 0.3, -0.6]))
    assert not is_near_singular(rs, float_point([0.3, 0.5, -0.8]))


def test_character_dispatcher_routes_consistently():
    rs = build_root_system("A2")
    lam = rs.weyl_vector
    exact_reg = exact_point([F(1, 7), F(2, 7), F(-3, 7)])
    assert abs(
        character(rs, lam, exact_reg).value - char_regular(rs, lam, exact_reg).value
    ) < 1e-12
    sing = exact_point([F(1, 5), F(1, 5), F(-2, 5)])
    assert abs(
        character(rs, lam, sing).value - char_singular(rs, lam, sing).value
    ) < 1e-12


# ---------------------------------------------------------------------------
# Extrapolation consistency
# ---------------------------------------------------------------------------


def richardson(values):
    """Two-level Richardson table for step halving with leading O(eps) error."""
    r1 = [2 * b - a for a, b in zip(values, values[1:])]
    return (4 * r1[1] - r1[0]) / 3


def char_at_offset(rs, lam, h0, delta, eps):
    rad = [x + eps * d for x, d in zip(h0.radians(), delta)]
    return char_regular(rs, lam, float_point(rad)).value


def generic_direction(rs, rng):
    d = [rng.uniform(0.5, 1.5) * rng.choice([-1, 1]) for _ in range(rs.ambient_dim)]
    if rs.spec.family == "A":
        shift = sum(d) / len(d)
        d = [x - shift for x in d]
    return d


def test_richardson_extrapolation_matches_singular():
    rng = rng_for("richardson")
    for name in ("A2", "B2", "A3"):
        rs = build_root_system(name)
        strata = [s for s in alcove_stratum_points(rs) if not s.central]
        for st in strata[:2]:
            lam = random_dominant_weight(rs, rng, max_dim=3000)
            d = dim_irrep(rs, lam)
            delta = generic_direction(rs, rng)
            vals = [
                char_at_offset(rs, lam, st.point, delta, eps)
                for eps in (1e-3, 5e-4, 2.5e-4)
            ]
            want = char_singular(rs, lam, st.point).value
            assert abs(richardson(vals) - want) < 1e-6 * d


def test_extrapolation_parallel_vs_generic_direction():
    # restricting delta to the span of the degenerate roots gives the same limit
    rng = rng_for("delta-split")
    rs = build_root_system("A2")
    st = [s for s in alcove_stratum_points(rs) if not s.central][0]
    split = rs.degenerate_split(st.point)
    lam = random_dominant_weight(rs, rng, max_dim=500)
    d = dim_irrep(rs, lam)
    generic = generic_direction(rs, rng)
    basis = list(split.deg)
    par = project_onto_span(basis, rs.gram, tuple(F(x).limit_denominator(10**6) for x in generic))
    par_f = [float(x) for x in par]
    want = char_singular(rs, lam, st.point).value
    for delta in (generic, par_f):
        vals = [
            char_at_offset(rs, lam, st.point, delta, eps)
            for eps in (1e-3, 5e-4, 2.5e-4)
        ]
        assert abs(richardson(vals) - want) < 1e-6 * d


def test_condition_estimate_scales_near_singularity():
    rs = build_root_system("A1")
    lam = su2_weight(10)
    mild = char_regular(rs, lam, float_point([0.5, -0.5]))
    harsh = char_regular(rs, lam, float_point([0.5e-4, -0.5e-4]))
    assert harsh.condition > mild.condition
