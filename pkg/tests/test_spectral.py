"""Averaging-operator moments, Kesten-McKay reference, norm estimates."""

import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate

from weylchar import build_root_system
from weylchar.charcalc import character, dim_irrep
from weylchar.errors import CapacityError, DomainError
from weylchar.spectral import (
    GeneratorSet,
    SpectrumEstimate,
    catalog_su2_free_pair,
    conjugacy_phases,
    delta_opt,
    generator_set,
    generator_set_to_json,
    haar_generator_set,
    inverse_table,
    km_density,
    km_moment,
    load_generator_set,
    moment_exact,
    moment_growth_sequence,
    moment_sampled,
    norm_estimate,
    reduce_word,
    spectrum_estimate,
)

from _helpers import rng_for

RS1 = build_root_system("A1")


def su2_weight(l):
    return (F(l), F(-l))


def random_su(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return q * np.linalg.det(q) ** (-1.0 / n)


# ---------------------------------------------------------------------------
# conjugacy phases
# ---------------------------------------------------------------------------


def test_phases_of_identity_and_diagonal():
    h = conjugacy_phases(np.eye(3))
    assert max(abs(c) for c in h.coords) < 1e-12
    a = 0.7
    g = np.diag([np.exp(1j * a), np.exp(1j * a), np.exp(-2j * a)])
    h = conjugacy_phases(g)
    assert max(abs(c - e) for c, e in zip(h.coords, (a, a, -2 * a))) < 1e-12


def test_phases_sum_to_zero_and_sorted():
    for seed in range(5):
        g = random_su(4, seed)
        h = conjugacy_phases(g)
        assert abs(sum(h.coords)) < 1e-12
        assert list(h.coords) == sorted(h.coords, reverse=True)


def test_phases_conjugation_invariant():
    rng = rng_for("phase-conj")
    for seed in range(5):
        g = random_su(3, seed)
        v = random_su(3, seed + 100)
        a = conjugacy_phases(g)
        b = conjugacy_phases(v @ g @ v.conj().T)
        assert max(abs(x - y) for x, y in zip(a.coords, b.coords)) < 1e-9


def test_phases_near_minus_identity_branch():
    # eigenphases straddle the branch cut; the sum must still vanish
    g = -np.eye(2)
    h = conjugacy_phases(g)
    assert abs(sum(h.coords)) < 1e-12
    # the center acts by (-1)^{2l}: chi_l(-I) = +-(2l+1) by spin parity
    rs = build_root_system("A1")
    assert abs(character(rs, su2_weight(1), h).value - 3.0) < 1e-9
    assert abs(character(rs, su2_weight(F(1, 2)), h).value - (-2.0)) < 1e-9


def test_phases_reject_bad_matrices():
    with pytest.raises(DomainError):
        conjugacy_phases(np.eye(2) * 2.0)
    with pytest.raises(DomainError):
        conjugacy_phases(np.diag([1j, 1j]))  # det = -1


# ---------------------------------------------------------------------------
# Kesten-McKay reference
# ---------------------------------------------------------------------------


def test_km_moments_small_cases():
    assert km_moment(4, 0) == 1
    assert km_moment(4, 2) == F(1, 4)
    assert km_moment(4, 4) == F(7, 64)
    for m in (1, 3, 5, 7, 11):
        assert km_moment(4, m) == 0


def test_km_moments_match_density_quadrature():
    s = 4
    f = km_density(s)
    r = delta_opt(s)
    for m in range(0, 13):
        want = float(km_moment(s, m))
        got, err = integrate.quad(lambda x: x**m * f(x), -r, r, limit=200)
        assert abs(got - want) < 1e-8


def test_km_even_moments_positive_and_bounded_by_support():
    for s in (2, 3, 4, 9):
        r = delta_opt(s)
        for m in range(2, 13, 2):
            v = km_moment(s, m)
            assert 0 < v <= F(r).limit_denominator(10**9) ** m * F(
                1001, 1000
            ), (s, m)


def test_km_hankel_matrix_is_psd():
    s = 4
    h = np.array(
        [[float(km_moment(s, i + j)) for j in range(5)] for i in range(5)]
    )
    eigs = np.linalg.eigvalsh(h)
    assert eigs.min() > -1e-12


def test_km_law_type():
    from weylchar.spectral import KestenMcKayLaw

    law = KestenMcKayLaw(4)
    assert law.support_radius == delta_opt(4)
    assert law.moment(4) == F(7, 64)
    assert law.density()(0.0) > 0 and law.density()(1.0) == 0.0
    with pytest.raises(DomainError):
        KestenMcKayLaw(1)


def test_delta_opt_values_and_monotonicity():
    assert delta_opt(2) == 1.0
    assert abs(delta_opt(4) - math.sqrt(3) / 2) < 1e-15
    vals = [delta_opt(s) for s in (4, 9, 16, 25)]
    assert vals == sorted(vals, reverse=True)
    with pytest.raises(DomainError):
        delta_opt(1)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def test_moment_zero_is_one_and_trivial_rep_is_one():
    gens = catalog_su2_free_pair()
    assert moment_exact(RS1, su2_weight(0), gens, 0) == 1.0
    for m in range(1, 4):
        assert abs(moment_exact(RS1, su2_weight(0), gens, m) - 1.0) < 1e-12


def test_first_moment_bound():
    gens = catalog_su2_free_pair()
    l = 20
    val = moment_exact(RS1, su2_weight(l), gens, 1)
    worst = max(
        abs(character(RS1, su2_weight(l), conjugacy_phases(g)).value)
        for g in gens.elements
    )
    assert abs(val) <= worst / (2 * l + 1) + 1e-12


def test_word_cap_raises_capacity_error():
    gens = catalog_su2_free_pair()
    with pytest.raises(CapacityError) as err:
        moment_exact(RS1, su2_weight(1), gens, 12)
    assert "moment_sampled" in str(err.value)


def test_sampled_agrees_with_exact_within_3_sigma():
    gens = catalog_su2_free_pair()
    lam = su2_weight(10)
    exact = moment_exact(RS1, lam, gens, 4)
    val, err = moment_sampled(RS1, lam, gens, 4, 10_000, seed=7)
    assert abs(val - exact) < 3 * err


def test_sampled_seed_determinism_and_m0():
    gens = catalog_su2_free_pair()
    lam = su2_weight(5)
    a = moment_sampled(RS1, lam, gens, 3, 500, seed=123)
    b = moment_sampled(RS1, lam, gens, 3, 500, seed=123)
    assert a == b
    assert moment_sampled(RS1, lam, gens, 0, 500, seed=1) == (1.0, 0.0)
    with pytest.raises(DomainError):
        moment_sampled(RS1, lam, gens, 2, 50, seed=1)


def test_moment_invariant_under_simultaneous_conjugation():
    gens = catalog_su2_free_pair()
    v = random_su(2, 42)
    conj = generator_set(
        [v @ g @ v.conj().T for g in gens.elements], gens.labels, True
    )
    lam = su2_weight(8)
    for m in (2, 3, 4):
        a = moment_exact(RS1, lam, gens, m)
        b = moment_exact(RS1, lam, conj, m)
        assert abs(a - b) < 1e-8


def test_word_level_identity_against_reduction_oracle():
    # moment - km equals the word sum restricted to non-identity-reduced words
    gens = catalog_su2_free_pair()
    inv = inverse_table(gens)
    lam = su2_weight(12)
    d = dim_irrep(RS1, lam)
    for m in (2, 3, 4):
        total = 0.0 + 0j
        reducing = 0
        for word in itertools.product(range(4), repeat=m):
            if reduce_word(word, inv):
                mat = np.eye(2, dtype=complex)
                for i in word:
                    mat = mat @ gens.elements[i]
                total += character(RS1, lam, conjugacy_phases(mat)).value / d
            else:
                reducing += 1
        assert F(reducing, 4**m) == km_moment(4, m)
        got = moment_exact(RS1, lam, gens, m)
        assert abs(got - (float(km_moment(4, m)) + total.real / 4**m)) < 1e-10


def test_haar_baseline_first_moment_vanishes():
    # many Haar samples: the trivial-rep-free average tends to zero at 3 sigma
    gens = haar_generator_set(2, 64, seed=2024)
    lam = su2_weight(3)
    d = dim_irrep(RS1, lam)
    vals = [
        (character(RS1, lam, conjugacy_phases(g)).value / d).real
        for g in gens.elements
    ]
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    assert abs(mean) < 3 * stderr + 1e-12


# ---------------------------------------------------------------------------
# spectrum estimates / norm
# ---------------------------------------------------------------------------


def test_norm_estimate_trivial_rep_is_one():
    est = spectrum_estimate(RS1, su2_weight(0), catalog_su2_free_pair(), 4)
    assert norm_estimate(est) == 1.0


def test_norm_estimate_on_exact_km_moments():
    rows = tuple(
        (m, float(km_moment(4, m)), None) for m in range(0, 13)
    )
    est = SpectrumEstimate(rows, (0,), 4)
    seq = [g for _, g in moment_growth_sequence(est)]
    assert seq == sorted(seq)  # increasing toward the edge
    assert all(g <= delta_opt(4) + 0.05 for g in seq)
    assert abs(norm_estimate(est) - delta_opt(4)) < 0.01


def test_norm_estimate_range_and_requirements():
    est = SpectrumEstimate(((0, 1.0, None), (2, 0.2, None)), (0,), 4)
    assert 0.0 <= norm_estimate(est) <= 1.0
    with pytest.raises(DomainError):
        norm_estimate(SpectrumEstimate(((1, 0.1, None),), (0,), 4))


def test_generator_set_validation():
    good = catalog_su2_free_pair()
    assert good.symmetric and good.free == "asserted" and good.size == 4
    with pytest.raises(DomainError):
        generator_set([np.eye(2) * 1.5])
    with pytest.raises(DomainError):
        generator_set([np.diag([1j, 1j])])  # det -1
    rot = good.elements[0]
    with pytest.raises(DomainError):
        GeneratorSet((rot,), ("a",), symmetric=True)  # inverse missing


def test_generator_set_json_roundtrip(tmp_path):
    import json

    gens = catalog_su2_free_pair()
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(generator_set_to_json(gens)))
    loaded = load_generator_set(path)
    assert loaded.labels == gens.labels
    assert loaded.free == "asserted"
    for a, b in zip(loaded.elements, gens.elements):
        assert np.abs(a - b).max() < 1e-15


def test_reduce_word_examples():
    inv = [1, 0, 3, 2]
    assert reduce_word((0, 1), inv) == ()
    assert reduce_word((0, 2, 3, 1), inv) == ()
    assert reduce_word((0, 0, 1), inv) == (0,)
    assert reduce_word((2, 0, 1, 3), inv) == ()
    assert reduce_word((0, 2), inv) == (0, 2)
