"""The semidirect product of groupoid automorphisms and cocycles, its monomial
realization on the algebra, diagonal-fixing automorphisms, and the
abelianization certificate for diagonal-fixing group actions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cocycles import Cocycle, enumerate_cocycles, precompose_cocycle, trivial_cocycle
from .decomposition import DecompositionData, HomMatrix, build_hom, validate_hom
from .errors import HypothesisError, StructuralError
from .groupoid import (
    FiniteGroupoid,
    GroupoidHom,
    compose_homs,
    enumerate_automorphisms,
    identity_hom,
    is_topologically_principal,
)

__all__ = [
    "AutPair",
    "identity_pair",
    "sd_multiply",
    "sd_inverse",
    "pair_matrix",
    "fixes_diagonal",
    "classify_faut",
    "FiniteGroupAction",
    "AbelianizationCertificate",
    "factors_through_abelianization",
    "group_inverses",
    "commutator_closure",
]

_TOL = 1e-9


@dataclass(frozen=True)
class AutPair:
    """An automorphism together with a cocycle on the same groupoid."""

    phi: GroupoidHom
    cocycle: Cocycle

    def __post_init__(self):
        if self.phi.domain != self.phi.codomain:
            raise StructuralError("automorphism must be a self-map")
        if not self.phi.is_bijective():
            raise StructuralError("the arrow map of a pair must be bijective")
        if self.cocycle.groupoid != self.phi.domain:
            raise StructuralError("cocycle lives on a different groupoid")

    @property
    def groupoid(self) -> FiniteGroupoid:
        return self.phi.domain


def identity_pair(g: FiniteGroupoid) -> AutPair:
    return AutPair(identity_hom(g), trivial_cocycle(g))


def sd_multiply(a: AutPair, b: AutPair) -> AutPair:
    """(phi1, c1) . (phi2, c2) = (phi1 o phi2, (c1 o phi2) . c2)."""
    if a.groupoid != b.groupoid:
        raise StructuralError("pairs live on different groupoids")
    phi = compose_homs(a.phi, b.phi)
    moved = precompose_cocycle(a.cocycle, b.phi)
    values = [u.times(v) for u, v in zip(moved.values, b.cocycle.values)]
    return AutPair(phi, Cocycle(a.groupoid, values))


def sd_inverse(a: AutPair) -> AutPair:
    """The group inverse: (phi^-1, conjugate of c o phi^-1)."""
    phi_inv = a.phi.inverse()
    moved = precompose_cocycle(a.cocycle, phi_inv)
    return AutPair(phi_inv, Cocycle(a.groupoid, [v.conj() for v in moved.values]))


def pair_matrix(pair: AutPair) -> HomMatrix:
    """The monomial algebra automorphism of a pair: the column of an arrow
    carries its cocycle value in the row of its image."""
    g = pair.groupoid
    data = DecompositionData(g.units, pair.phi, pair.cocycle)
    return build_hom(g, g, data)


def fixes_diagonal(pair: AutPair, tol: float = _TOL) -> bool:
    """Whether the monomial automorphism fixes every diagonal basis column."""
    g = pair.groupoid
    m = pair_matrix(pair).entries
    for x in g.units:
        col = m[:, x].copy()
        col[x] -= 1.0
        if np.max(np.abs(col)) > tol:
            return False
    return True


def classify_faut(g: FiniteGroupoid, phase_order: int,
                  cap: int | None = None) -> list[Cocycle]:
    """The cocycles valued in the n-th roots of unity, which biject with the
    diagonal-fixing monomial automorphisms.  On a principal groupoid the
    bijection is verified against the enumerated automorphism pairs."""
    cocycles = enumerate_cocycles(g, phase_order)
    if is_topologically_principal(g):
        for c in cocycles:
            if not fixes_diagonal(AutPair(identity_hom(g), c)):
                raise HypothesisError(
                    "a cocycle pair fails to fix the diagonal")
        auts = enumerate_automorphisms(g, cap)
        for phi in auts:
            if phi.is_identity():
                continue
            for c in cocycles:
                if fixes_diagonal(AutPair(phi, c)):
                    raise HypothesisError(
                        "a non-identity pair fixes the diagonal on a "
                        "principal groupoid")
    return cocycles


# -- group actions on the algebra ---------------------------------------------


def group_inverses(table: Sequence[Sequence[int]]) -> list[int]:
    """Inverse table of a finite group given by its multiplication table with
    identity 0; validates the group axioms."""
    k = len(table)
    if any(len(row) != k for row in table):
        raise StructuralError("group table must be square")
    if any(table[0][a] != a or table[a][0] != a for a in range(k)):
        raise StructuralError("group table must have identity 0")
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise StructuralError(
                        f"group table not associative at ({a},{b},{c})")
    inv = [-1] * k
    for a in range(k):
        for b in range(k):
            if table[a][b] == 0 and table[b][a] == 0:
                inv[a] = b
    if -1 in inv:
        raise StructuralError("group table has an element without inverse")
    return inv


def commutator_closure(table: Sequence[Sequence[int]]) -> set[int]:
    """The commutator subgroup: closure of all commutators under products."""
    inv = group_inverses(table)
    k = len(table)
    gens = {table[table[s][t]][table[inv[s]][inv[t]]]
            for s in range(k) for t in range(k)}
    subgroup = {0}
    frontier = [0]
    while frontier:
        a = frontier.pop()
        for g in gens:
            b = table[a][g]
            if b not in subgroup:
                subgroup.add(b)
                frontier.append(b)
    return subgroup


class FiniteGroupAction:
    """A finite group acting on a groupoid algebra through validated
    automorphism matrices; the assignment must be multiplicative."""

    def __init__(self, table: Sequence[Sequence[int]],
                 matrices: Sequence[HomMatrix],
                 labels: Sequence[str] | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.inverses = group_inverses(self.table)
        k = len(self.table)
        self.matrices = tuple(matrices)
        if len(self.matrices) != k:
            raise StructuralError("one matrix per group element required")
        self.labels = tuple(labels) if labels is not None else tuple(
            str(i) for i in range(k))
        if len(self.labels) != k:
            raise StructuralError("label count mismatch")
        g = self.matrices[0].source
        for i, m in enumerate(self.matrices):
            if m.source != g or m.target != g:
                raise StructuralError(
                    f"matrix of element {self.labels[i]} is not a self-map")
            report = validate_hom(m)
            if not report.ok:
                raise StructuralError(
                    f"matrix of element {self.labels[i]} fails validation: "
                    f"{', '.join(report.failed_checks())}")
            if g.arrow_count:
                sv = np.linalg.svd(m.entries, compute_uv=False)
                if sv[-1] <= _TOL:
                    raise StructuralError(
                        f"matrix of element {self.labels[i]} is not invertible")
        for s in range(k):
            for t in range(k):
                prod = self.matrices[s].entries @ self.matrices[t].entries
                target = self.matrices[self.table[s][t]].entries
                if prod.size and np.max(np.abs(prod - target)) > _TOL:
                    raise StructuralError(
                        f"assignment is not multiplicative at "
                        f"({self.labels[s]},{self.labels[t]})")
        self.groupoid = g


@dataclass
class AbelianizationCertificate:
    ok: bool
    witness: tuple[str, str] | None
    quotient_table: tuple[tuple[int, ...], ...]
    projection: tuple[int, ...]
    coset_matrices: tuple[HomMatrix, ...]


def factors_through_abelianization(action: FiniteGroupAction,
                                   tol: float = _TOL) -> AbelianizationCertificate:
    """Verify that a diagonal-fixing action kills every commutator, and
    certify it by the induced action of the abelianized group.

    The hypothesis that every matrix fixes the diagonal pointwise is enforced
    first; a violator is named.  The certificate carries the quotient group
    table by the commutator subgroup, the projection, and one matrix per coset.
    """
    g = action.groupoid
    for i, m in enumerate(action.matrices):
        for x in g.units:
            col = m.entries[:, x].copy()
            col[x] -= 1.0
            if np.max(np.abs(col)) > tol:
                raise HypothesisError(
                    f"element {action.labels[i]} does not fix the diagonal "
                    f"(column of unit {x})")
    k = len(action.table)
    identity = np.eye(g.arrow_count, dtype=complex)
    for s in range(k):
        for t in range(k):
            c = action.table[action.table[s][t]][
                action.table[action.inverses[s]][action.inverses[t]]]
            m = action.matrices[c].entries
            if m.size and np.max(np.abs(m - identity)) > tol:
                return AbelianizationCertificate(
                    False, (action.labels[s], action.labels[t]), (), (), ())

    kernel = commutator_closure(action.table)
    cosets: list[set[int]] = []
    seen: set[int] = set()
    for a in range(k):
        if a in seen:
            continue
        coset = {action.table[a][n] for n in kernel}
        seen |= coset
        cosets.append(coset)
    projection = [0] * k
    for i, coset in enumerate(cosets):
        for a in coset:
            projection[a] = i
    reps = [min(c) for c in cosets]
    quotient = tuple(
        tuple(projection[action.table[ra][rb]] for rb in reps) for ra in reps)
    coset_matrices = tuple(action.matrices[r] for r in reps)
    return AbelianizationCertificate(
        True, None, quotient, tuple(projection), coset_matrices)
