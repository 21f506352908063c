"""Axiom validation, isotropy, invariant subsets, restriction, quotients, homs."""

from itertools import permutations

import pytest

from etale_kit.errors import HomomorphismError, HypothesisError, StructuralError
from etale_kit.families import cyclic_groupoid, disjoint_union, pair_groupoid
from etale_kit.groupoid import (
    FiniteGroupoid,
    GroupoidHom,
    compose_homs,
    enumerate_automorphisms,
    enumerate_homomorphisms,
    invariance_witness,
    invariant_subsets,
    is_effective,
    is_topologically_principal,
    isotropy_interior,
    orbits,
    quotient_by_isotropy,
    restrict,
    restriction_arrows,
    validation_report,
)
from etale_kit.mutate import enumerate_mutations


def test_hand_built_pair_groupoid_passes(r2_hand):
    assert validation_report(r2_hand).ok


def test_unit_with_wrong_source_is_an_axiom1_violation(r2_hand):
    broken = FiniteGroupoid(4, [0, 1], [1, 1, 1, 0], r2_hand.rng,
                            r2_hand.compose, r2_hand.inv)
    report = validation_report(broken)
    assert not report.ok
    assert any(v.axiom == "axiom1_units" and v.witness == (0,)
               for v in report.violations)


def test_corrupted_association_entry_names_the_triple(r2_hand):
    # rewrite (1,2)(2,1) = (1,1) into (2,2): endpoints still match, so only
    # the identity/associativity/inverse layers can object
    compose = dict(r2_hand.compose)
    compose[(2, 3)] = 1
    broken = FiniteGroupoid(4, [0, 1], r2_hand.src, r2_hand.rng, compose, r2_hand.inv)
    report = validation_report(broken)
    assert not report.ok
    axioms = {v.axiom for v in report.violations}
    assert axioms & {"axiom4_associativity", "axiom5_inverse"}


def test_pure_associativity_violation_carries_a_triple_witness():
    # in Z/4 all arrows are parallel, so rewriting g.g^2 = g^3 into g leaves
    # endpoints, identities and declared inverses intact; only associativity
    # (and inverse uniqueness) can notice
    z4 = cyclic_groupoid(4)
    compose = dict(z4.compose)
    compose[(1, 2)] = 1
    broken = FiniteGroupoid(4, [0], z4.src, z4.rng, compose, z4.inv)
    report = validation_report(broken)
    assert not report.ok
    quads = [v for v in report.violations if v.axiom == "axiom4_associativity"]
    assert quads and len(quads[0].witness) == 3


def test_out_of_range_id_is_structural_not_axiomatic(r2_hand):
    with pytest.raises(StructuralError):
        FiniteGroupoid(4, [0, 1], [0, 1, 1, 7], r2_hand.rng,
                       r2_hand.compose, r2_hand.inv)


def test_every_single_mutation_of_hand_built_tables_is_caught(r2_hand, z2_hand, bundle_hand):
    for g in (r2_hand, z2_hand, bundle_hand):
        for label, mutant in enumerate_mutations(g):
            assert not validation_report(mutant, stop_early=True).ok, label


def test_isotropy_examples(r2_hand, z2_hand, bundle_hand):
    assert isotropy_interior(r2_hand) == (0, 1)
    assert isotropy_interior(z2_hand) == (0, 1)
    assert isotropy_interior(bundle_hand) == (0, 1, 2)


def test_effectiveness_examples(r2_hand, z2_hand):
    assert is_effective(r2_hand) and is_topologically_principal(r2_hand)
    assert not is_effective(z2_hand) and not is_topologically_principal(z2_hand)
    union = disjoint_union([pair_groupoid(2), cyclic_groupoid(2)])
    assert not is_effective(union) and not is_topologically_principal(union)


def test_effective_agrees_with_principal_on_corpus(corpus):
    for name, g in corpus:
        assert is_effective(g) == is_topologically_principal(g), name


def _invariant_subsets_bruteforce(g):
    out = []
    units = list(g.units)
    for mask in range(1 << len(units)):
        subset = {units[i] for i in range(len(units)) if mask >> i & 1}
        if all(g.rng[a] in subset for a in g.arrows() if g.src[a] in subset):
            out.append(tuple(sorted(subset)))
    return sorted(out)


def test_invariant_subsets_against_bruteforce(corpus):
    for name, g in corpus:
        if len(g.units) > 8:
            continue
        assert invariant_subsets(g) == _invariant_subsets_bruteforce(g), name


def test_invariant_subsets_examples(r2_hand):
    assert invariant_subsets(r2_hand) == [(), (0, 1)]
    two_points = pair_groupoid(1), pair_groupoid(1)
    flat = disjoint_union(list(two_points))
    assert invariant_subsets(flat) == [(), (0,), (0, 1), (1,)]
    with_point = disjoint_union([pair_groupoid(2), pair_groupoid(1)])
    assert invariant_subsets(with_point) == [(), (0, 1), (0, 1, 4), (4,)]


def test_restrict_examples():
    g = disjoint_union([pair_groupoid(2), pair_groupoid(1)])
    sub = restrict(g, (0, 1))
    assert sub == pair_groupoid(2)
    assert restrict(g, g.units) == g
    empty = restrict(g, ())
    assert empty.arrow_count == 0
    assert restriction_arrows(g, (0, 1)) == (0, 1, 2, 3)


def test_restrict_rejects_noninvariant_sets(r2_hand):
    with pytest.raises(HypothesisError):
        restrict(r2_hand, (0,))
    assert invariance_witness(r2_hand, (0,)) in (2, 3)


def test_restriction_nests_over_intersections():
    g = disjoint_union([pair_groupoid(2), cyclic_groupoid(2), pair_groupoid(1)])
    subsets = invariant_subsets(g)
    for f1 in subsets:
        for f2 in subsets:
            both = tuple(sorted(set(f1) & set(f2)))
            direct = restrict(g, both)
            outer = restrict(g, f1)
            relabel = {orig: i for i, orig in enumerate(restriction_arrows(g, f1))}
            via = restrict(outer, tuple(relabel[x] for x in both))
            assert direct.arrow_count == via.arrow_count
            assert validation_report(via).ok


def test_quotient_examples(r2_hand, z2_hand, bundle_hand):
    q, hom = quotient_by_isotropy(z2_hand)
    assert q.arrow_count == 1 and hom.mapping == (0, 0)
    qb, homb = quotient_by_isotropy(bundle_hand)
    assert qb.arrow_count == 2 and set(qb.units) == {0, 1}
    qr, homr = quotient_by_isotropy(r2_hand)
    assert homr.is_identity()


def test_quotient_is_always_effective_and_unit_separating(corpus):
    for name, g in corpus:
        q, hom = quotient_by_isotropy(g)
        assert validation_report(q).ok, name
        assert is_effective(q), name
        images = [hom.mapping[x] for x in g.units]
        assert len(set(images)) == len(images), name


def _automorphisms_bruteforce(g):
    """All arrow bijections that satisfy the homomorphism laws, checked
    directly against the tables."""
    results = []
    for perm in permutations(range(g.arrow_count)):
        if any(perm[x] not in g.unit_set for x in g.units):
            continue
        ok = all(perm[g.src[a]] == g.src[perm[a]]
                 and perm[g.rng[a]] == g.rng[perm[a]]
                 and perm[g.inv[a]] == g.inv[perm[a]]
                 for a in g.arrows())
        if ok:
            ok = all(g.compose.get((perm[a], perm[b])) == perm[c]
                     for (a, b), c in g.compose.items())
        if ok:
            results.append(perm)
    return sorted(results)


def test_automorphisms_against_bruteforce(r2_hand, z2_hand, bundle_hand):
    for g in (r2_hand, z2_hand, bundle_hand, cyclic_groupoid(3),
              disjoint_union([pair_groupoid(1), pair_groupoid(1)])):
        got = [h.mapping for h in enumerate_automorphisms(g)]
        assert got == _automorphisms_bruteforce(g)


def test_automorphisms_of_pair_groupoids():
    assert len(enumerate_automorphisms(pair_groupoid(2))) == 2
    assert len(enumerate_automorphisms(pair_groupoid(3))) == 6


def test_automorphism_group_closed_under_composition_and_inverse(corpus):
    for name, g in corpus:
        if g.arrow_count > 9:
            continue
        auts = {h.mapping for h in enumerate_automorphisms(g)}
        for m1 in auts:
            h1 = GroupoidHom(g, g, m1)
            assert h1.inverse().mapping in auts, name
            for m2 in auts:
                composed = compose_homs(h1, GroupoidHom(g, g, m2))
                assert composed.mapping in auts, name


def test_hom_constructor_rejects_bad_maps(r2_hand, z2_hand):
    with pytest.raises(HomomorphismError):
        GroupoidHom(z2_hand, z2_hand, (0, 0) if False else (1, 0))
    with pytest.raises(HomomorphismError):
        # collapsing one off-diagonal arrow of the pair groupoid breaks composition
        GroupoidHom(r2_hand, r2_hand, (0, 1, 2, 2))


def test_hom_enumeration_counts():
    r2 = pair_groupoid(2)
    z2 = cyclic_groupoid(2)
    # collapsing homs from a group to an effective groupoid pick a unit
    assert len(enumerate_homomorphisms(z2, r2)) == 2
    # homs between pair groupoids are point maps
    assert len(enumerate_homomorphisms(r2, r2)) == 4
    assert len(enumerate_homomorphisms(r2, r2, injective_on_units=True)) == 2
    assert len(enumerate_homomorphisms(z2, z2)) == 2


def test_orbits_of_disjoint_union():
    g = disjoint_union([pair_groupoid(2), pair_groupoid(1)])
    assert orbits(g) == ((0, 1), (4,))


def _homomorphisms_bruteforce(dom, cod):
    """Filter every arrow map directly through the homomorphism laws."""
    from itertools import product as iproduct
    out = []
    for mapping in iproduct(range(cod.arrow_count), repeat=dom.arrow_count):
        if any(mapping[x] not in cod.unit_set for x in dom.units):
            continue
        if any(mapping[dom.src[a]] != cod.src[mapping[a]]
               or mapping[dom.rng[a]] != cod.rng[mapping[a]]
               or mapping[dom.inv[a]] != cod.inv[mapping[a]]
               for a in dom.arrows()):
            continue
        if all(cod.compose.get((mapping[a], mapping[b])) == mapping[c]
               for (a, b), c in dom.compose.items()):
            out.append(mapping)
    return sorted(out)


def test_hom_enumeration_against_bruteforce(r2_hand, z2_hand, bundle_hand):
    pt = pair_groupoid(1)
    z3 = cyclic_groupoid(3)
    cases = [(z2_hand, z2_hand), (z2_hand, r2_hand), (r2_hand, r2_hand),
             (bundle_hand, r2_hand), (z3, z3), (r2_hand, bundle_hand),
             (pt, r2_hand), (z2_hand, pt)]
    for dom, cod in cases:
        got = [h.mapping for h in enumerate_homomorphisms(dom, cod)]
        assert got == _homomorphisms_bruteforce(dom, cod)
        inj = [h.mapping for h in
               enumerate_homomorphisms(dom, cod, injective_on_units=True)]
        assert inj == [m for m in got
                       if len({m[x] for x in dom.units}) == len(dom.units)]
