"""Ambient abelian groups Z^f x Z_{m1} x ... x Z_{mj}, their elements and arithmetic.

Elements are plain tuples of Python ints in canonical form: torsion
coordinates reduced into ``[0, modulus)``, free coordinates left as is.
Free coordinates are bounded at load time so that every subset sum and every
{-1, 0, 1} combination of a set fits in a signed 64-bit word.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SAFE_BOUND",
    "GroupSpec",
    "ElementSet",
    "CoefficientVector",
    "Element",
    "combine",
    "subset_sum",
    "exponent",
    "free_group",
    "cyclic_power",
    "parse_group",
    "hypercube",
]

SAFE_BOUND = 1 << 62

Element = tuple  # tuple[int, ...] in canonical form


@dataclass(frozen=True)
class GroupSpec:
    """Z^free_rank x Z_{moduli[0]} x ... ; coordinates ordered free first."""

    free_rank: int = 0
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        if any(m < 2 for m in self.moduli):
            raise ValueError(f"every modulus must be >= 2, got {self.moduli}")
        if self.dim < 1:
            raise ValueError("group must have at least one coordinate")

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.moduli)

    @property
    def is_torsion(self) -> bool:
        return self.free_rank == 0

    @property
    def is_homocyclic(self) -> bool:
        return self.is_torsion and len(set(self.moduli)) == 1

    @property
    def identity(self) -> Element:
        return (0,) * self.dim

    def reduce(self, coords: Iterable[int]) -> Element:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        f = self.free_rank
        return coords[:f] + tuple(c % m for c, m in zip(coords[f:], self.moduli))

    def reduce_array(self, arr: np.ndarray) -> np.ndarray:
        """Vectorised canonical reduction of an ``(N, dim)`` int64 array (in place)."""
        f = self.free_rank
        if self.moduli:
            arr[:, f:] %= np.asarray(self.moduli, dtype=np.int64)
        return arr

    def add(self, a: Element, b: Element) -> Element:
        return self.reduce(x + y for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return self.reduce(-x for x in a)

    def sub(self, a: Element, b: Element) -> Element:
        return self.reduce(x - y for x, y in zip(a, b))

    def scale(self, k: int, a: Element) -> Element:
        return self.reduce(k * x for x in a)

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"free:{self.free_rank}")
        if self.moduli:
            if len(set(self.moduli)) == 1:
                parts.append(f"mod:{self.moduli[0]}^{len(self.moduli)}")
            else:
                parts.append("mod:" + ",".join(str(m) for m in self.moduli))
        return "x".join(parts)


def free_group(n: int) -> GroupSpec:
    return GroupSpec(free_rank=n)


def cyclic_power(e: int, k: int) -> GroupSpec:
    return GroupSpec(free_rank=0, moduli=(e,) * k)


def parse_group(text: str) -> GroupSpec:
    """Parse ``free:<n>``, ``mod:<e>^<k>``, ``mod:<m1>,<m2>,...`` or products joined by ``x``."""
    free_rank = 0
    moduli: list[int] = []
    for part in text.strip().split("x"):
        kind, _, arg = part.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "free":
                free_rank += int(arg)
            elif kind == "mod":
                if "^" in arg:
                    e, k = arg.split("^")
                    moduli.extend([int(e)] * int(k))
                else:
                    moduli.extend(int(m) for m in arg.split(","))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"malformed group descriptor {text!r}") from None
    return GroupSpec(free_rank, tuple(moduli))


def exponent(group: GroupSpec) -> int:
    """lcm of the cyclic moduli; undefined (ValueError) when there is a free factor."""
    if not group.is_torsion:
        raise ValueError("group has a free factor: exponent is infinite")
    return lcm(*group.moduli)


class CoefficientVector(tuple):
    """Immutable vector over {-1, 0, 1}."""

    def __new__(cls, coeffs: Iterable[int] = ()):
        values = tuple(int(c) for c in coeffs)
        if any(c not in (-1, 0, 1) for c in values):
            raise ValueError(f"coefficients must lie in {{-1, 0, 1}}: {values}")
        return super().__new__(cls, values)

    def is_zero(self) -> bool:
        return not any(self)

    def normalized(self) -> "CoefficientVector":
        """Sign-flip so that the first nonzero entry is +1."""
        for c in self:
            if c:
                return self if c == 1 else CoefficientVector(-x for x in self)
        return self

    @classmethod
    def from_masks(cls, plus: Sequence[int], minus: Sequence[int], size: int):
        coeffs = [0] * size
        for i in plus:
            coeffs[i] += 1
        for i in minus:
            coeffs[i] -= 1
        return cls(coeffs)

    def __repr__(self):
        return f"CoefficientVector({list(self)})"


@dataclass(frozen=True)
class ElementSet:
    """Ordered set of distinct canonical elements of ``group``.

    Raises ``ValueError`` on duplicates, wrong dimension, or free coordinates
    large enough that some {-1, 0, 1} combination could leave 64-bit range.
    """

    group: GroupSpec
    elements: tuple[Element, ...] = field(default=())

    def __post_init__(self):
        elems = tuple(self.group.reduce(e) for e in self.elements)
        if len(set(elems)) != len(elems):
            raise ValueError("ElementSet elements must be distinct")
        f = self.group.free_rank
        if f and elems:
            peak = max(abs(c) for e in elems for c in e[:f])
            if peak * (len(elems) + 1) >= SAFE_BOUND:
                raise OverflowError(
                    f"free coordinate magnitude {peak} unsafe for a set of size {len(elems)}"
                )
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, group: GroupSpec, elements: Iterable[Iterable[int]]) -> "ElementSet":
        return cls(group, tuple(tuple(e) for e in elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __contains__(self, x) -> bool:
        return self.group.reduce(x) in self._index

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, x) -> int:
        return self._index[self.group.reduce(x)]

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.elements, dtype=np.int64).reshape(len(self.elements), self.group.dim)
        arr.setflags(write=False)
        return arr

    def subset(self, indices: Iterable[int]) -> "ElementSet":
        return ElementSet(self.group, tuple(self.elements[i] for i in indices))

    def union(self, other: Iterable[Element]) -> "ElementSet":
        extra = tuple(self.group.reduce(x) for x in other)
        return ElementSet(self.group, self.elements + tuple(x for x in extra if x not in self))

    def sorted(self) -> "ElementSet":
        return ElementSet(self.group, tuple(sorted(self.elements)))

    def issubset(self, other: "ElementSet") -> bool:
        return all(e in other for e in self.elements)

    def tolist(self) -> list[list[int]]:
        return [list(e) for e in self.elements]


def combine(elements: ElementSet, c: Sequence[int]) -> Element:
    """Sum of ``c[i] * elements[i]`` in canonical form."""
    c = CoefficientVector(c)
    if len(c) != len(elements):
        raise ValueError(f"coefficient length {len(c)} != set size {len(elements)}")
    total = [0] * elements.group.dim
    for ci, e in zip(c, elements):
        if ci:
            for j, x in enumerate(e):
                total[j] += ci * x
    f = elements.group.free_rank
    if any(abs(t) >= SAFE_BOUND for t in total[:f]):
        raise OverflowError("free coordinate left the safe 64-bit range")
    return elements.group.reduce(total)


def subset_sum(elements: ElementSet, mask: Sequence[bool]) -> Element:
    """Sum of the elements selected by the boolean ``mask``."""
    if len(mask) != len(elements):
        raise ValueError(f"mask length {len(mask)} != set size {len(elements)}")
    return combine(elements, [1 if b else 0 for b in mask])


def hypercube(n: int, include_zero: bool = True) -> ElementSet:
    """{0,1}^n inside Z^n, in lexicographic order."""
    from itertools import product

    pts = [p for p in product((0, 1), repeat=n) if include_zero or any(p)]
    return ElementSet(free_group(n), tuple(pts))
