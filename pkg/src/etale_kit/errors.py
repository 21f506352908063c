"""Shared exception types and enumeration caps."""

from __future__ import annotations

import os

# Exponential enumerations (bisections, automorphisms, germ machinery) refuse
# above this many arrows; linear-algebra-only paths allow more.
DEFAULT_ENUM_CAP = 16
DEFAULT_LINEAR_CAP = 64
# Explicit inverse-semigroup tables are quadratic in the element count.
SEMIGROUP_ELEMENT_CAP = 1024
CAP_ENV_VAR = "ETALE_KIT_CAP"


class StructuralError(ValueError):
    """Malformed tables or documents: out-of-range ids, shape mismatches."""


class HomomorphismError(ValueError):
    """A map fails the groupoid homomorphism laws; the message carries a witness."""


class CocycleError(ValueError):
    """A phase assignment fails the cocycle laws."""


class ActionError(ValueError):
    """An inverse semigroup action fails its axioms."""


class SliceError(ValueError):
    """A subspace fails the slice (diagonal-bimodule of normalizers) axioms."""


class HypothesisError(RuntimeError):
    """A required hypothesis is not met: the operation refuses rather than guesses."""


class InternalInconsistencyError(RuntimeError):
    """Input that passed validation turned out self-contradictory (corruption)."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured size cap."""


def enum_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_ENUM_CAP


def linear_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    return max(DEFAULT_LINEAR_CAP, enum_cap())


def check_enum_cap(n: int, cap: int | None = None, what: str = "enumeration") -> None:
    limit = enum_cap(cap)
    if n > limit:
        raise CapExceeded(f"{what} refused: {n} arrows exceeds the cap {limit}")
