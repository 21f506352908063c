"""Convolution algebra, regular representations, norms, normalizers, slices."""

import numpy as np
import pytest

from etale_kit.cstar import (
    AlgebraElement,
    convolve,
    delta,
    is_normalizer,
    left_regular,
    reduced_norm,
    slice_failure,
    slice_of_bisection,
    slice_product,
    slice_to_bisection,
    slices_equal,
    star,
    unit_indicator,
    Slice,
)
from etale_kit.errors import HypothesisError, SliceError, StructuralError
from etale_kit.inverse_semigroup import Bisection, bisection_product, enumerate_bisections


def convolve_bruteforce(f, g):
    """Direct double loop over arrow pairs, independent of the indexed kernel."""
    gp = f.groupoid
    out = np.zeros(gp.arrow_count, dtype=complex)
    for a in gp.arrows():
        for b in gp.arrows():
            if gp.src[a] == gp.rng[b]:
                out[gp.compose[(a, b)]] += f.coeff[a] * g.coeff[b]
    return out


def random_elements(g, seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield AlgebraElement(
            g, rng.normal(size=g.arrow_count) + 1j * rng.normal(size=g.arrow_count))


def test_delta_convolution_rules(r2_hand):
    for (a, b), c in r2_hand.compose.items():
        prod = convolve(delta(r2_hand, a), delta(r2_hand, b))
        assert np.allclose(prod.coeff, delta(r2_hand, c).coeff)
    # non-composable pair gives zero: (1,2) then (1,2) again
    prod = convolve(delta(r2_hand, 2), delta(r2_hand, 2))
    assert np.allclose(prod.coeff, 0)


def test_all_ones_convolution_doubles(r2_hand):
    ones = AlgebraElement(r2_hand, np.ones(4))
    assert np.allclose(convolve(ones, ones).coeff, 2 * np.ones(4))


def test_convolution_matches_bruteforce(corpus):
    for name, g in corpus:
        if not g.arrow_count:
            continue
        fs = list(random_elements(g, seed=7, count=2))
        got = convolve(fs[0], fs[1]).coeff
        assert np.allclose(got, convolve_bruteforce(fs[0], fs[1]), atol=1e-12), name


def test_star_is_antimultiplicative(r2_hand):
    f, g = random_elements(r2_hand, seed=3, count=2)
    lhs = star(convolve(f, g)).coeff
    rhs = convolve(star(g), star(f)).coeff
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_elements_reject_mismatched_groupoids(r2_hand, z2_hand):
    f = delta(r2_hand, 0)
    g = delta(z2_hand, 0)
    with pytest.raises(StructuralError):
        convolve(f, g)


def test_elements_reject_nonfinite_values(r2_hand):
    with pytest.raises(StructuralError):
        AlgebraElement(r2_hand, [np.nan, 0, 0, 0])


def test_left_regular_frozen_examples(r2_hand, z2_hand):
    rep = left_regular(r2_hand, 0)
    assert rep.basis == (0, 3)
    # the arrow (2,1) acts as the matrix unit E_21 on basis ((1,1),(2,1))
    assert np.allclose(rep.matrix(delta(r2_hand, 3)), np.array([[0, 0], [1, 0]]))
    assert np.allclose(rep.matrix(unit_indicator(r2_hand)), np.eye(2))
    repz = left_regular(z2_hand, 0)
    assert np.allclose(repz.matrix(delta(z2_hand, 1)), np.array([[0, 1], [1, 0]]))


def test_left_regular_rejects_non_units(r2_hand):
    with pytest.raises(StructuralError):
        left_regular(r2_hand, 2)


def test_rep_is_star_homomorphism(corpus):
    for name, g in corpus:
        fs = list(random_elements(g, seed=11, count=2))
        if not fs:
            continue
        f1, f2 = fs
        for x in g.units:
            rep = left_regular(g, x)
            if not rep.basis:
                continue
            m1, m2 = rep.matrix(f1), rep.matrix(f2)
            assert np.max(np.abs(rep.matrix(convolve(f1, f2)) - m1 @ m2)) <= 1e-12, name
            assert np.max(np.abs(rep.matrix(star(f1)) - m1.conj().T)) <= 1e-12, name


def test_norm_frozen_examples(r2_hand):
    assert reduced_norm(unit_indicator(r2_hand)) == pytest.approx(1.0, abs=1e-12)
    swap = delta(r2_hand, 2) + delta(r2_hand, 3)
    assert reduced_norm(swap) == pytest.approx(1.0, abs=1e-12)
    ones = AlgebraElement(r2_hand, np.ones(4))
    assert reduced_norm(ones) == pytest.approx(2.0, abs=1e-12)


def test_norm_against_eigenvalue_oracle(corpus):
    # largest singular value equals the root of the largest eigenvalue of m* m
    for name, g in corpus[:6]:
        for f in random_elements(g, seed=5, count=3):
            oracle = 0.0
            for x in g.units:
                rep = left_regular(g, x)
                if not rep.basis:
                    continue
                m = rep.matrix(f)
                oracle = max(oracle, float(np.sqrt(np.max(
                    np.linalg.eigvalsh(m.conj().T @ m)))))
            assert reduced_norm(f) == pytest.approx(oracle, abs=1e-9), name


def test_cstar_identity_random(corpus):
    for name, g in corpus:
        for f in random_elements(g, seed=13, count=5):
            lhs = reduced_norm(convolve(star(f), f))
            rhs = reduced_norm(f) ** 2
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, rhs), name


def test_norm_vanishes_only_at_zero(corpus):
    for name, g in corpus:
        for f in random_elements(g, seed=17, count=2):
            assert reduced_norm(f) > 0, name
            assert np.max(np.abs(f.coeff)) <= reduced_norm(f) + 1e-9, name
        if g.arrow_count:
            assert reduced_norm(AlgebraElement(g, np.zeros(g.arrow_count))) == 0.0


def test_normalizer_examples(r2_hand):
    swap = delta(r2_hand, 2) + 0.5 * delta(r2_hand, 3)
    assert is_normalizer(swap)  # supported on a bisection
    assert is_normalizer(unit_indicator(r2_hand))  # diagonal
    bad = delta(r2_hand, 0) + delta(r2_hand, 2)  # support has non-injective rng
    assert not is_normalizer(bad)


def test_normalizers_are_bisection_supported_iff_effective(corpus):
    import random
    rnd = random.Random(23)
    from etale_kit.groupoid import is_effective
    for name, g in corpus:
        if not is_effective(g) or not g.arrow_count:
            continue
        for _ in range(20):
            size = rnd.randrange(1, g.arrow_count + 1)
            support = sorted(rnd.sample(range(g.arrow_count), size))
            coeff = np.zeros(g.arrow_count, dtype=complex)
            for a in support:
                coeff[a] = complex(rnd.uniform(0.5, 2.0), rnd.uniform(-1, 1))
            f = AlgebraElement(g, coeff)
            try:
                Bisection(g, tuple(support))
                expected = True
            except StructuralError:
                expected = False
            assert is_normalizer(f) == expected, (name, support)


def test_slice_of_bisection_and_product(r2_hand):
    u = Bisection(r2_hand, (2,))
    v = Bisection(r2_hand, (3,))
    prod = slice_product(slice_of_bisection(u), slice_of_bisection(v))
    assert slices_equal(prod, slice_of_bisection(Bisection(r2_hand, (0,))))
    empty = slice_of_bisection(Bisection(r2_hand, ()))
    assert empty.dim == 0
    assert slice_product(empty, slice_of_bisection(u)).dim == 0


def test_slice_map_is_multiplicative_and_injective(r2_hand):
    semigroup = enumerate_bisections(r2_hand)
    seen = []
    for u in semigroup.elements:
        su = slice_of_bisection(u)
        for prev in seen:
            assert not slices_equal(su, prev)
        seen.append(su)
        for v in semigroup.elements:
            lhs = slice_product(su, slice_of_bisection(v))
            rhs = slice_of_bisection(bisection_product(u, v))
            assert slices_equal(lhs, rhs)


def test_slice_roundtrip_on_effective(corpus):
    from etale_kit.groupoid import is_effective
    for name, g in corpus:
        if not is_effective(g) or g.arrow_count > 9:
            continue
        for b in enumerate_bisections(g).elements:
            assert slice_to_bisection(slice_of_bisection(b)).arrows == b.arrows, name


def test_slice_recovery_refuses_non_effective(z2_hand):
    sl = slice_of_bisection(Bisection(z2_hand, (1,)))
    with pytest.raises(HypothesisError):
        slice_to_bisection(sl)


def test_non_slices_are_rejected_with_reason(r2_hand):
    # a mixture across two sources is not closed under diagonal projections
    mix = Slice(r2_hand, np.array([[0, 0, 1.0, 1.0]], dtype=complex))
    assert slice_failure(mix) is not None
    with pytest.raises(SliceError):
        slice_to_bisection(mix)
    # the span of both units is fine
    diag = Slice(r2_hand, np.eye(4, dtype=complex)[:2])
    assert slice_failure(diag) is None
