"""Single-entry table mutations, used to exercise the axiom validator."""

from __future__ import annotations

import random
from typing import Iterator

from .groupoid import FiniteGroupoid

__all__ = ["enumerate_mutations", "sample_mutations"]


def _with_tables(g: FiniteGroupoid, *, units=None, src=None, rng=None,
                 compose=None, inv=None) -> FiniteGroupoid:
    return FiniteGroupoid(
        g.arrow_count,
        g.units if units is None else units,
        g.src if src is None else src,
        g.rng if rng is None else rng,
        g.compose if compose is None else compose,
        g.inv if inv is None else inv,
    )


def enumerate_mutations(g: FiniteGroupoid) -> Iterator[tuple[str, FiniteGroupoid]]:
    """Every groupoid obtained by changing exactly one table entry.

    Covers: flipping one unit flag, redirecting one src/rng/inv entry, and
    rewriting one composition product.  All results are structurally well
    formed; none should pass validation when the input does."""
    n = g.arrow_count
    for a in range(n):
        flipped = (set(g.units) ^ {a})
        yield (f"unit_flip[{a}]", _with_tables(g, units=sorted(flipped)))
    for name, table in (("src", g.src), ("rng", g.rng), ("inv", g.inv)):
        for i in range(n):
            for v in range(n):
                if v == table[i]:
                    continue
                mutated = list(table)
                mutated[i] = v
                yield (f"{name}[{i}]={v}", _with_tables(g, **{name: mutated}))
    for (a, b), c in sorted(g.compose.items()):
        for v in range(n):
            if v == c:
                continue
            mutated = dict(g.compose)
            mutated[(a, b)] = v
            yield (f"compose[{a},{b}]={v}", _with_tables(g, compose=mutated))


def sample_mutations(g: FiniteGroupoid, rng: random.Random,
                     count: int) -> list[tuple[str, FiniteGroupoid]]:
    """A deterministic random sample (with replacement) of single mutations."""
    pool = list(enumerate_mutations(g))
    if not pool:
        return []
    return [pool[rng.randrange(len(pool))] for _ in range(count)]
