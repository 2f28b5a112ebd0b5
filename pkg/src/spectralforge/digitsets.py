"""Digit sets over an integer base and residue-class sets.

Conventions used throughout the package:

* A digit set is a finite set of distinct integers attached to a base N >= 2.
  Digits are plain Python ints, so k-fold expansions like D + N*D + ... +
  N^(k-1)*D never overflow.
* The canonical form of a digit set has min(digits) == 0; ``canonicalize``
  produces it and records the translation offset, since translating a digit
  set leaves every spectrum question unchanged.
* All types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    BaseTooSmall,
    DistinctnessFailure,
    EmptyInput,
    ModulusMismatch,
    OverlapError,
)


@dataclass(frozen=True)
class DigitSet:
    """A finite set of distinct integers with a base N >= 2.

    ``offset`` is bookkeeping only: ``canonicalize`` stores there the
    translation that was subtracted, so results computed for the canonical
    set can be reported for the original one.
    """

    base: int
    digits: tuple[int, ...]
    offset: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.base < 2:
            raise BaseTooSmall(f"base must be >= 2, got {self.base}")
        if not self.digits:
            raise EmptyInput("digit set must be non-empty")
        ordered = tuple(sorted(self.digits))
        if len(set(ordered)) != len(ordered):
            raise ValueError("digits must be pairwise distinct (multisets rejected)")
        object.__setattr__(self, "digits", ordered)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __contains__(self, x: int) -> bool:
        return x in set(self.digits)

    @property
    def is_canonical(self) -> bool:
        return self.digits[0] == 0

    def shifted(self, c: int) -> "DigitSet":
        return DigitSet(self.base, tuple(d + c for d in self.digits))

    def scaled(self, m: int) -> "DigitSet":
        if m == 0:
            raise ValueError("scale must be nonzero")
        return DigitSet(self.base, tuple(d * m for d in self.digits))

    def residues(self, modulus: int | None = None) -> "ResidueClassSet":
        """Reduce mod ``modulus`` (default: the base). Collisions collapse."""
        m = self.base if modulus is None else modulus
        return ResidueClassSet(m, tuple(sorted({d % m for d in self.digits})))

    def distinct_mod(self, modulus: int | None = None) -> bool:
        m = self.base if modulus is None else modulus
        return len({d % m for d in self.digits}) == len(self.digits)


def canonicalize(raw: Iterable[int], base: int) -> DigitSet:
    """Sort, deduplicate and translate so the least digit is 0.

    The subtracted minimum is kept in ``offset``.
    """
    items = sorted(set(int(x) for x in raw))
    if not items:
        raise EmptyInput("digit set must be non-empty")
    if base < 2:
        raise BaseTooSmall(f"base must be >= 2, got {base}")
    low = items[0]
    return DigitSet(base, tuple(d - low for d in items), offset=low)


def gcd_normalize(d: DigitSet) -> tuple[DigitSet, int]:
    """Divide out g = gcd of the nonzero digits; returns (D/g, g).

    Requires the canonical form (0 in D).  For the trivial set {0} the gcd
    is taken to be 1 so normalization is a no-op.  Any spectrum of the
    measure attached to D/g turns into one for D after division by g.
    """
    if not d.is_canonical:
        raise ValueError("gcd_normalize expects a canonical digit set (min 0)")
    g = 0
    for x in d.digits:
        g = math.gcd(g, x)
    if g == 0:
        g = 1
    if g == 1:
        return d, 1
    return DigitSet(d.base, tuple(x // g for x in d.digits), offset=d.offset), g


@dataclass(frozen=True)
class ResidueClassSet:
    """Distinct residues modulo a positive modulus."""

    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ModulusMismatch(f"modulus must be positive, got {self.modulus}")
        ordered = tuple(sorted(self.residues))
        if any(r < 0 or r >= self.modulus for r in ordered):
            raise ValueError("residues must lie in [0, modulus)")
        if len(set(ordered)) != len(ordered):
            raise ValueError("residues must be pairwise distinct")
        object.__setattr__(self, "residues", ordered)

    def __iter__(self) -> Iterator[int]:
        return iter(self.residues)

    def __len__(self) -> int:
        return len(self.residues)


def direct_sum(a: ResidueClassSet, b: ResidueClassSet) -> ResidueClassSet:
    """A (+) B mod the shared modulus; raises if any two sums collide."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus} != {b.modulus}")
    m = a.modulus
    seen: dict[int, tuple[int, int]] = {}
    for x in a.residues:
        for y in b.residues:
            s = (x + y) % m
            if s in seen:
                raise DistinctnessFailure(seen[s], (x, y), m)
            seen[s] = (x, y)
    return ResidueClassSet(m, tuple(sorted(seen)))


def is_complete_residue_system(s: ResidueClassSet) -> bool:
    return len(s.residues) == s.modulus


# ---------------------------------------------------------------------------
# Plain integer-tuple helpers.  The product-form machinery builds lots of
# direct sums of raw digit lists before wrapping them in DigitSet.


def direct_sum_digits(*sets: Iterable[int]) -> tuple[int, ...]:
    """Direct sum over the integers; raises OverlapError on a repeated sum."""
    acc: dict[int, tuple] = {0: ()}
    for part in sets:
        nxt: dict[int, tuple] = {}
        part = list(part)
        for s, how in acc.items():
            for x in part:
                t = s + x
                if t in nxt:
                    raise OverlapError(t, nxt[t], how + (x,))
                nxt[t] = how + (x,)
        acc = nxt
    return tuple(sorted(acc))


def sumset(*sets: Iterable[int]) -> tuple[int, ...]:
    """Plain sumset A + B + ... (collisions collapse silently)."""
    acc = {0}
    for part in sets:
        part = list(part)
        acc = {s + x for s in acc for x in part}
    return tuple(sorted(acc))
