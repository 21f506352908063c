"""Finite discrete groupoids as explicit tables: validation, isotropy, restriction, quotients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    HomomorphismError,
    HypothesisError,
    StructuralError,
    check_enum_cap,
)

__all__ = [
    "FiniteGroupoid",
    "Violation",
    "ValidationReport",
    "validation_report",
    "isotropy_interior",
    "is_effective",
    "is_topologically_principal",
    "orbits",
    "invariant_subsets",
    "invariance_witness",
    "normalize_unit_set",
    "restriction_arrows",
    "restrict",
    "quotient_by_isotropy",
    "GroupoidHom",
    "identity_hom",
    "compose_homs",
    "enumerate_homomorphisms",
    "enumerate_automorphisms",
]


class FiniteGroupoid:
    """A finite groupoid given by explicit tables over arrow ids 0..n-1.

    Units are a flagged subset of the arrows; `compose` is a partial table
    defined exactly on the composable pairs (source of the left factor equals
    range of the right factor).  Construction checks only that ids are in
    range; run `validation_report` for the groupoid axioms.  Instances are
    immutable values after construction.
    """

    __slots__ = ("arrow_count", "units", "src", "rng", "inv", "compose",
                 "unit_set", "_hash", "_cache")

    def __init__(
        self,
        arrow_count: int,
        units: Iterable[int],
        src: Iterable[int],
        rng: Iterable[int],
        compose: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]],
        inv: Iterable[int],
    ):
        n = int(arrow_count)
        if n < 0:
            raise StructuralError(f"arrow count must be nonnegative, got {n}")
        self.arrow_count = n
        self.units = tuple(sorted({int(u) for u in units}))
        self.src = tuple(int(a) for a in src)
        self.rng = tuple(int(a) for a in rng)
        self.inv = tuple(int(a) for a in inv)
        for name, tab in (("src", self.src), ("rng", self.rng), ("inv", self.inv)):
            if len(tab) != n:
                raise StructuralError(f"{name} table has length {len(tab)}, expected {n}")
            for i, a in enumerate(tab):
                if not 0 <= a < n:
                    raise StructuralError(f"{name}[{i}] = {a} out of range for {n} arrows")
        for u in self.units:
            if not 0 <= u < n:
                raise StructuralError(f"unit id {u} out of range for {n} arrows")
        if isinstance(compose, Mapping):
            items = [(int(a), int(b), int(c)) for (a, b), c in compose.items()]
        else:
            items = [(int(a), int(b), int(c)) for a, b, c in compose]
        items.sort()
        table: dict[tuple[int, int], int] = {}
        for a, b, c in items:
            if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
                raise StructuralError(f"compose entry ({a},{b})->{c} out of range")
            if (a, b) in table:
                raise StructuralError(f"duplicate compose entry for pair ({a},{b})")
            table[(a, b)] = c
        self.compose = table
        self.unit_set = frozenset(self.units)
        self._hash = None
        self._cache = {}

    # -- basic accessors ---------------------------------------------------

    def is_unit(self, a: int) -> bool:
        return a in self.unit_set

    def arrows(self) -> range:
        return range(self.arrow_count)

    def composable(self, a: int, b: int) -> bool:
        return self.src[a] == self.rng[b]

    def product(self, a: int, b: int) -> int:
        return self.compose[(a, b)]

    def by_src(self) -> tuple[tuple[int, ...], ...]:
        """Arrows grouped by source: by_src()[x] lists arrows with src == x."""
        cached = self._cache.get("by_src")
        if cached is None:
            buckets: list[list[int]] = [[] for _ in range(self.arrow_count)]
            for a in self.arrows():
                buckets[self.src[a]].append(a)
            cached = tuple(tuple(b) for b in buckets)
            self._cache["by_src"] = cached
        return cached

    def by_rng(self) -> tuple[tuple[int, ...], ...]:
        cached = self._cache.get("by_rng")
        if cached is None:
            buckets: list[list[int]] = [[] for _ in range(self.arrow_count)]
            for a in self.arrows():
                buckets[self.rng[a]].append(a)
            cached = tuple(tuple(b) for b in buckets)
            self._cache["by_rng"] = cached
        return cached

    def by_src_rng(self) -> dict[tuple[int, int], tuple[int, ...]]:
        cached = self._cache.get("by_src_rng")
        if cached is None:
            buckets: dict[tuple[int, int], list[int]] = {}
            for a in self.arrows():
                buckets.setdefault((self.src[a], self.rng[a]), []).append(a)
            cached = {k: tuple(v) for k, v in buckets.items()}
            self._cache["by_src_rng"] = cached
        return cached

    # -- value semantics ---------------------------------------------------

    def _key(self):
        return (self.arrow_count, self.units, self.src, self.rng, self.inv,
                tuple(sorted(self.compose.items())))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return (f"FiniteGroupoid(arrows={self.arrow_count}, "
                f"units={len(self.units)}, compose={len(self.compose)})")


# -- axiom validation ------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v.axiom, "witness": list(v.witness), "detail": v.detail}
                for v in self.violations
            ],
        }


def validation_report(g: FiniteGroupoid, *, stop_early: bool = False) -> ValidationReport:
    """Check the five groupoid axioms plus inverse uniqueness.

    Returns every violation with a concrete witness; with `stop_early` the
    first violation short-circuits (used by mutation sweeps).
    """
    out: list[Violation] = []

    def add(axiom: str, witness: tuple, detail: str) -> bool:
        out.append(Violation(axiom, witness, detail))
        return stop_early

    units = g.unit_set
    src, rng, inv, table = g.src, g.rng, g.inv, g.compose

    # axiom 1: units are fixed by src and rng, and src/rng land in the units
    for x in g.units:
        if src[x] != x:
            if add("axiom1_units", (x,), f"unit {x} has src {src[x]} != {x}"):
                return ValidationReport(out)
        if rng[x] != x:
            if add("axiom1_units", (x,), f"unit {x} has rng {rng[x]} != {x}"):
                return ValidationReport(out)
    for a in g.arrows():
        if src[a] not in units:
            if add("axiom1_units", (a,), f"src[{a}] = {src[a]} is not a unit"):
                return ValidationReport(out)
        if rng[a] not in units:
            if add("axiom1_units", (a,), f"rng[{a}] = {rng[a]} is not a unit"):
                return ValidationReport(out)

    # axiom 3, table shape: keys are exactly the composable pairs
    for (a, b), c in table.items():
        if src[a] != rng[b]:
            if add("axiom3_composability", (a, b),
                   f"compose defined on ({a},{b}) but src[{a}]={src[a]} != rng[{b}]={rng[b]}"):
                return ValidationReport(out)
    by_rng = g.by_rng()
    for a in g.arrows():
        for b in by_rng[src[a]]:
            if (a, b) not in table:
                if add("axiom3_composability", (a, b),
                       f"composable pair ({a},{b}) has no compose entry"):
                    return ValidationReport(out)
    for (a, b), c in table.items():
        if src[c] != src[b] or rng[c] != rng[a]:
            if add("axiom3_composability", (a, b, c),
                   f"product {c} of ({a},{b}) has src/rng ({src[c]},{rng[c]}), "
                   f"expected ({src[b]},{rng[a]})"):
                return ValidationReport(out)

    # axiom 2: identity laws
    for a in g.arrows():
        if table.get((a, src[a])) != a:
            if add("axiom2_identity", (a,), f"{a} . src[{a}] != {a}"):
                return ValidationReport(out)
        if table.get((rng[a], a)) != a:
            if add("axiom2_identity", (a,), f"rng[{a}] . {a} != {a}"):
                return ValidationReport(out)

    # axiom 5: the declared inverse works on both sides and is involutive
    for a in g.arrows():
        b = inv[a]
        if table.get((b, a)) != src[a]:
            if add("axiom5_inverse", (a, b), f"inv[{a}]={b} with {b}.{a} != src[{a}]"):
                return ValidationReport(out)
        if table.get((a, b)) != rng[a]:
            if add("axiom5_inverse", (a, b), f"inv[{a}]={b} with {a}.{b} != rng[{a}]"):
                return ValidationReport(out)
        if inv[b] != a:
            if add("axiom5_inverse", (a, b), f"inv[inv[{a}]] = {inv[b]} != {a}"):
                return ValidationReport(out)

    # axiom 4: associativity over all composable triples
    for (a, b), ab in table.items():
        for c in by_rng[src[b]]:
            bc = table.get((b, c))
            left = table.get((ab, c))
            if bc is None or left is None:
                continue  # missing entries already reported under axiom 3
            right = table.get((a, bc))
            if right is None:
                continue
            if left != right:
                if add("axiom4_associativity", (a, b, c),
                       f"({a}.{b}).{c} = {left} but {a}.({b}.{c}) = {right}"):
                    return ValidationReport(out)

    # inverse uniqueness: no second two-sided inverse exists
    for a in g.arrows():
        candidates = [
            b for b in by_rng[src[a]]
            if src[b] == rng[a]
            and table.get((b, a)) == src[a] and table.get((a, b)) == rng[a]
        ]
        if candidates != [inv[a]]:
            if add("inverse_uniqueness", (a, tuple(candidates)),
                   f"arrow {a} has two-sided inverses {candidates}, declared {inv[a]}"):
                return ValidationReport(out)

    return ValidationReport(out)


# -- isotropy and invariant subsets ----------------------------------------


def isotropy_interior(g: FiniteGroupoid) -> tuple[int, ...]:
    """Arrows with equal source and range; open interior equals all of them
    in the discrete model."""
    return tuple(a for a in g.arrows() if g.src[a] == g.rng[a])


def is_effective(g: FiniteGroupoid) -> bool:
    return isotropy_interior(g) == g.units


def is_topologically_principal(g: FiniteGroupoid) -> bool:
    """Units with trivial isotropy are dense; on a finite discrete space that
    means every unit has trivial isotropy."""
    by_src = g.by_src()
    for x in g.units:
        for a in by_src[x]:
            if g.rng[a] == x and a != x:
                return False
    return True


def orbits(g: FiniteGroupoid) -> tuple[tuple[int, ...], ...]:
    """Partition of the units under the reachability relation, sorted."""
    parent = {x: x for x in g.units}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in g.arrows():
        x, y = find(g.src[a]), find(g.rng[a])
        if x != y:
            parent[y] = x
    groups: dict[int, list[int]] = {}
    for x in g.units:
        groups.setdefault(find(x), []).append(x)
    return tuple(sorted(tuple(sorted(grp)) for grp in groups.values()))


def invariant_subsets(g: FiniteGroupoid) -> list[tuple[int, ...]]:
    """All invariant unit sets, i.e. unions of orbits, sorted lexicographically."""
    orbs = orbits(g)
    subsets = []
    for mask in range(1 << len(orbs)):
        chosen: list[int] = []
        for i, orb in enumerate(orbs):
            if mask >> i & 1:
                chosen.extend(orb)
        subsets.append(tuple(sorted(chosen)))
    return sorted(subsets)


def normalize_unit_set(g: FiniteGroupoid, subset: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted({int(x) for x in subset}))
    for x in out:
        if x not in g.unit_set:
            raise StructuralError(f"{x} is not a unit of the groupoid")
    return out


def invariance_witness(g: FiniteGroupoid, subset: Iterable[int]) -> int | None:
    """An arrow leaving the subset (src inside, rng outside), or None."""
    f = set(normalize_unit_set(g, subset))
    for a in g.arrows():
        if g.src[a] in f and g.rng[a] not in f:
            return a
    return None


def restriction_arrows(g: FiniteGroupoid, subset: Iterable[int]) -> tuple[int, ...]:
    """Arrow ids with source in the subset, ascending; the restriction keeps
    this order, so position i corresponds to original id restriction_arrows[i]."""
    f = set(normalize_unit_set(g, subset))
    return tuple(a for a in g.arrows() if g.src[a] in f)


def restrict(g: FiniteGroupoid, subset: Iterable[int]) -> FiniteGroupoid:
    """Subgroupoid over an invariant unit set (all arrows with source inside)."""
    f = normalize_unit_set(g, subset)
    w = invariance_witness(g, f)
    if w is not None:
        raise HypothesisError(
            f"unit set is not invariant: arrow {w} has src {g.src[w]} inside "
            f"but rng {g.rng[w]} outside")
    keep = restriction_arrows(g, f)
    new_id = {a: i for i, a in enumerate(keep)}
    return FiniteGroupoid(
        len(keep),
        [new_id[x] for x in f],
        [new_id[g.src[a]] for a in keep],
        [new_id[g.rng[a]] for a in keep],
        {(new_id[a], new_id[b]): new_id[c]
         for (a, b), c in g.compose.items() if a in new_id and b in new_id},
        [new_id[g.inv[a]] for a in keep],
    )


# -- groupoid homomorphisms --------------------------------------------------


@dataclass(frozen=True)
class GroupoidHom:
    """A map of arrows that preserves units, src, rng, inverse and composition.

    Construction verifies all the laws and raises `HomomorphismError` with a
    witness on failure.
    """

    domain: FiniteGroupoid
    codomain: FiniteGroupoid
    mapping: tuple[int, ...]

    def __post_init__(self):
        dom, cod, m = self.domain, self.codomain, tuple(self.mapping)
        object.__setattr__(self, "mapping", m)
        if len(m) != dom.arrow_count:
            raise StructuralError(
                f"mapping has length {len(m)}, expected {dom.arrow_count}")
        for a, b in enumerate(m):
            if not 0 <= b < cod.arrow_count:
                raise StructuralError(f"image of arrow {a} is {b}, out of range")
        for x in dom.units:
            if not cod.is_unit(m[x]):
                raise HomomorphismError(f"unit {x} maps to non-unit {m[x]}")
        for a in dom.arrows():
            if m[dom.src[a]] != cod.src[m[a]]:
                raise HomomorphismError(
                    f"src not preserved at arrow {a}: "
                    f"map(src)={m[dom.src[a]]}, src(map)={cod.src[m[a]]}")
            if m[dom.rng[a]] != cod.rng[m[a]]:
                raise HomomorphismError(
                    f"rng not preserved at arrow {a}: "
                    f"map(rng)={m[dom.rng[a]]}, rng(map)={cod.rng[m[a]]}")
            if m[dom.inv[a]] != cod.inv[m[a]]:
                raise HomomorphismError(
                    f"inverse not preserved at arrow {a}")
        for (a, b), c in dom.compose.items():
            img = cod.compose.get((m[a], m[b]))
            if img != m[c]:
                raise HomomorphismError(
                    f"composition not preserved at pair ({a},{b}): "
                    f"map({a}.{b})={m[c]}, map({a}).map({b})={img}")

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def is_bijective(self) -> bool:
        return (self.domain.arrow_count == self.codomain.arrow_count
                and len(set(self.mapping)) == self.domain.arrow_count)

    def is_identity(self) -> bool:
        return (self.domain == self.codomain
                and self.mapping == tuple(self.domain.arrows()))

    def inverse(self) -> "GroupoidHom":
        if not self.is_bijective():
            raise HypothesisError("cannot invert a non-bijective homomorphism")
        back = [0] * len(self.mapping)
        for a, b in enumerate(self.mapping):
            back[b] = a
        return GroupoidHom(self.codomain, self.domain, tuple(back))


def identity_hom(g: FiniteGroupoid) -> GroupoidHom:
    return GroupoidHom(g, g, tuple(g.arrows()))


def compose_homs(outer: GroupoidHom, inner: GroupoidHom) -> GroupoidHom:
    """outer after inner."""
    if inner.codomain != outer.domain:
        raise StructuralError("homomorphisms are not composable")
    return GroupoidHom(inner.domain, outer.codomain,
                       tuple(outer.mapping[b] for b in inner.mapping))


# -- enumeration -------------------------------------------------------------


def enumerate_homomorphisms(
    domain: FiniteGroupoid,
    codomain: FiniteGroupoid,
    *,
    injective_on_units: bool = False,
    bijective: bool = False,
) -> list[GroupoidHom]:
    """All groupoid homomorphisms, by backtracking with full constraint checks.

    Units are assigned first so that src/rng constraints prune non-unit
    candidates down to the arrows between the already-chosen unit images.
    """
    if bijective and domain.arrow_count != codomain.arrow_count:
        return []
    order = list(domain.units) + [a for a in domain.arrows()
                                  if a not in domain.unit_set]
    pos = {a: i for i, a in enumerate(order)}
    n = domain.arrow_count
    # compose-key triples checked as soon as all three members are assigned
    triggers: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for (a, b), c in domain.compose.items():
        last = max(pos[a], pos[b], pos[c])
        triggers[last].append((a, b, c))
    cod_by_src_rng = codomain.by_src_rng()
    cod_units = codomain.units
    image = [-1] * n
    uses = [0] * codomain.arrow_count
    found: list[tuple[int, ...]] = []

    def consistent(a: int) -> bool:
        ia = image[a]
        b = domain.inv[a]
        if image[b] != -1 and image[b] != codomain.inv[ia]:
            return False
        for (u, v, w) in triggers[pos[a]]:
            img = codomain.compose.get((image[u], image[v]))
            if img != image[w]:
                return False
        return True

    def extend(k: int) -> None:
        if k == n:
            found.append(tuple(image))
            return
        a = order[k]
        if domain.is_unit(a):
            candidates = cod_units
        else:
            key = (image[domain.src[a]], image[domain.rng[a]])
            candidates = cod_by_src_rng.get(key, ())
            if bijective:
                candidates = tuple(c for c in candidates
                                   if not codomain.is_unit(c))
        fresh_only = bijective or (injective_on_units and domain.is_unit(a))
        for c in candidates:
            if fresh_only and uses[c]:
                continue
            image[a] = c
            uses[c] += 1
            if consistent(a):
                extend(k + 1)
            uses[c] -= 1
            image[a] = -1

    extend(0)
    homs = []
    for m in sorted(set(found)):
        h = GroupoidHom(domain, codomain, m)
        if bijective and not h.is_bijective():
            continue
        homs.append(h)
    return homs


def enumerate_automorphisms(g: FiniteGroupoid, cap: int | None = None) -> list[GroupoidHom]:
    """All bijective self-homomorphisms in lexicographic mapping order."""
    check_enum_cap(g.arrow_count, cap, "automorphism enumeration")
    return enumerate_homomorphisms(g, g, bijective=True)


# -- quotient by the isotropy interior ---------------------------------------


def quotient_by_isotropy(g: FiniteGroupoid) -> tuple[FiniteGroupoid, GroupoidHom]:
    """Collapse the isotropy interior: arrows a ~ b when src(a) = src(b) and
    a . b^-1 lies in the isotropy.  Returns the (always effective) quotient
    and the collapse homomorphism, which is injective on units."""
    n = g.arrow_count
    iso = set(isotropy_interior(g))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_src = g.by_src()
    for x in g.units:
        group = by_src[x]
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                p = g.compose.get((a, g.inv[b]))
                if p is not None and p in iso:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)

    reps = sorted({find(a) for a in range(n)})
    cls_of = {a: reps.index(find(a)) for a in range(n)}
    mapping = tuple(cls_of[a] for a in range(n))
    units_q = sorted({cls_of[x] for x in g.units})
    src_q = [0] * len(reps)
    rng_q = [0] * len(reps)
    inv_q = [0] * len(reps)
    for i, r in enumerate(reps):
        src_q[i] = cls_of[g.src[r]]
        rng_q[i] = cls_of[g.rng[r]]
        inv_q[i] = cls_of[g.inv[r]]
    compose_q: dict[tuple[int, int], int] = {}
    for (a, b), c in g.compose.items():
        compose_q[(cls_of[a], cls_of[b])] = cls_of[c]
    quotient = FiniteGroupoid(len(reps), units_q, src_q, rng_q, compose_q, inv_q)
    return quotient, GroupoidHom(g, quotient, mapping)
