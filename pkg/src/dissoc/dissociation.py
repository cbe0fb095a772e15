"""Dissociation testing.

A set is dissociated when its subset sums are pairwise distinct, equivalently
when no nonzero {-1, 0, 1} combination of its elements vanishes.  Two
independent exhaustive testers are provided, one per characterisation, and
both return a certificate (:class:`Witness`) on failure.

Enumeration orders are fixed so witnesses are reproducible:

* subset sums are produced in reflected Gray-code order, one element added or
  removed per step, by appending the reversed translate of the current table;
* coefficient vectors are indexed by a balanced-ternary counter, coordinate 0
  least significant, digits ``0, 1, 2`` meaning ``0, +1, -1``.  The returned
  null combination is the one of least counter index among those whose first
  nonzero entry is ``+1``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._keys import row_keys
from .group import CoefficientVector, Element, ElementSet, GroupSpec, combine, subset_sum

__all__ = [
    "Witness",
    "SumLedger",
    "SizeLimitError",
    "nullcomb_limit",
    "sums_limit",
    "is_dissociated",
    "is_dissociated_nullcomb",
    "is_dissociated_sums",
    "ledger_new",
    "ledger_try_add",
    "gray_mask",
]

DEFAULT_NULLCOMB_LIMIT = 16
DEFAULT_SUMS_LIMIT = 24


class SizeLimitError(ValueError):
    """Input is larger than the configured exhaustive-enumeration limit."""


def _env_limit(default: int) -> int:
    raw = os.environ.get("DISSOC_MAX_K")
    return int(raw) if raw else default


def nullcomb_limit() -> int:
    return _env_limit(DEFAULT_NULLCOMB_LIMIT)


def sums_limit() -> int:
    return _env_limit(DEFAULT_SUMS_LIMIT)


@dataclass(frozen=True)
class Witness:
    """Certificate that a set is not dissociated.

    ``kind`` is ``"null_combination"`` (``c`` set) or ``"equal_subset_sums"``
    (``b1``/``b2`` set, as sorted index tuples).  :meth:`to_null_combination`
    and :meth:`to_equal_sums` convert between the two.
    """

    kind: str
    c: Optional[CoefficientVector] = None
    b1: Optional[tuple[int, ...]] = None
    b2: Optional[tuple[int, ...]] = None

    def to_null_combination(self, size: int) -> "Witness":
        if self.kind == "null_combination":
            return self
        c = CoefficientVector.from_masks(
            sorted(set(self.b1) - set(self.b2)), sorted(set(self.b2) - set(self.b1)), size
        )
        return Witness("null_combination", c=c)

    def to_equal_sums(self) -> "Witness":
        if self.kind == "equal_subset_sums":
            return self
        b1 = tuple(i for i, x in enumerate(self.c) if x == 1)
        b2 = tuple(i for i, x in enumerate(self.c) if x == -1)
        return Witness("equal_subset_sums", b1=b1, b2=b2)

    def validate(self, elements: ElementSet) -> bool:
        identity = elements.group.identity
        k = len(elements)
        if self.kind == "null_combination":
            return len(self.c) == k and not self.c.is_zero() and combine(elements, self.c) == identity
        if self.b1 == self.b2:
            return False
        m1 = [i in self.b1 for i in range(k)]
        m2 = [i in self.b2 for i in range(k)]
        return subset_sum(elements, m1) == subset_sum(elements, m2)

    def to_json(self) -> dict:
        if self.kind == "null_combination":
            return {"c": list(self.c)}
        return {"B1": list(self.b1), "B2": list(self.b2)}


def gray_mask(index: int) -> int:
    """Subset (bitmask over element positions) at position ``index`` of the Gray order."""
    return index ^ (index >> 1)


def _mask_indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


class SumLedger:
    """All subset sums of a dissociated base, kept in Gray-code order.

    Single owner, mutable.  Row ``j`` of :attr:`sums` is the sum of the subset
    ``gray_mask(j)`` of :attr:`base`; the sums of ``base[:-1]`` are therefore
    always the first half, which makes :meth:`pop` a truncation.
    """

    def __init__(self, group: GroupSpec, capacity: Optional[int] = None):
        self.group = group
        self.capacity = sums_limit() if capacity is None else capacity
        self.base: list[Element] = []
        self._sums = np.zeros((1, group.dim), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.base)

    @property
    def sums(self) -> np.ndarray:
        return self._sums[: 1 << len(self.base)]

    def _translate(self, x: Element) -> np.ndarray:
        shifted = self.sums[::-1] + np.asarray(x, dtype=np.int64)
        return self.group.reduce_array(shifted)

    def first_collision(self, x: Element) -> Optional[tuple[int, int]]:
        """Gray positions ``(earlier, later)`` of the first repeated sum if ``x`` were added."""
        x = self.group.reduce(x)
        new = self._translate(x)
        old_keys, new_keys = row_keys(self.group, self.sums, new)
        hit = np.isin(new_keys, old_keys)
        if not hit.any():
            return None
        p = int(np.argmax(hit))
        q = int(np.flatnonzero(old_keys == new_keys[p])[0])
        return q, len(old_keys) + p

    def compatible(self, candidates: np.ndarray) -> np.ndarray:
        """Boolean mask over candidate rows: which could be added right now."""
        candidates = np.asarray(candidates, dtype=np.int64).reshape(-1, self.group.dim)
        if not len(candidates):
            return np.zeros(0, dtype=bool)
        sums = self.sums
        shifted = (sums[None, :, :] + candidates[:, None, :]).reshape(-1, self.group.dim)
        self.group.reduce_array(shifted)
        old_keys, new_keys = row_keys(self.group, sums, shifted)
        clash = np.isin(new_keys, old_keys).reshape(len(candidates), len(sums))
        return ~clash.any(axis=1)

    def try_add(self, x: Element) -> bool:
        x = self.group.reduce(x)
        if len(self.base) + 1 > self.capacity:
            raise SizeLimitError(f"ledger capacity {self.capacity} reached")
        if self.first_collision(x) is not None:
            return False
        self._append(x)
        return True

    def _append(self, x: Element) -> None:
        k = len(self.base)
        new = self._translate(x)
        if len(self._sums) < 2 << k:
            grown = np.empty((2 << k, self.group.dim), dtype=np.int64)
            grown[: 1 << k] = self._sums[: 1 << k]
            self._sums = grown
        self._sums[1 << k: 2 << k] = new
        self.base.append(x)

    def pop(self) -> Element:
        return self.base.pop()

    def copy(self) -> "SumLedger":
        other = SumLedger(self.group, self.capacity)
        other.base = list(self.base)
        other._sums = self.sums.copy()
        return other

    def as_set(self) -> ElementSet:
        return ElementSet(self.group, tuple(self.base))


def ledger_new(group: GroupSpec, capacity: Optional[int] = None) -> SumLedger:
    return SumLedger(group, capacity)


def ledger_try_add(ledger: SumLedger, x: Element) -> bool:
    return ledger.try_add(x)


def is_dissociated_sums(elements: ElementSet, limit: Optional[int] = None):
    """Enumerate subset sums in Gray order; return ``(ok, witness)``.

    On failure the witness is the first repeat in Gray order:
    ``b1`` is the earlier subset and ``b2`` the later one.
    """
    limit = sums_limit() if limit is None else limit
    if len(elements) > limit:
        raise SizeLimitError(f"set size {len(elements)} exceeds subset-sum limit {limit}")
    ledger = SumLedger(elements.group, capacity=max(limit, len(elements)))
    for x in elements:
        hit = ledger.first_collision(x)
        if hit is not None:
            q, later = hit
            return False, Witness(
                "equal_subset_sums",
                b1=_mask_indices(gray_mask(q)),
                b2=_mask_indices(gray_mask(later)),
            )
        ledger._append(x)
    return True, None


def _ternary_digits(index: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        index, d = divmod(index, 3)
        out.append((0, 1, -1)[d])
    return out


def is_dissociated_nullcomb(elements: ElementSet, limit: Optional[int] = None):
    """Search {-1,0,1} combinations for a vanishing one; return ``(ok, witness)``.

    Combinations are grouped by their last nonzero position ``p``; the table of
    all combinations of ``elements[:p]`` (in counter order) is scanned for
    ``-x_p`` or ``x_p``, which costs ``3^k`` overall.
    """
    limit = nullcomb_limit() if limit is None else limit
    k = len(elements)
    if k > limit:
        raise SizeLimitError(f"set size {k} exceeds null-combination limit {limit}")
    group = elements.group
    table = np.zeros((1, group.dim), dtype=np.int64)
    normalized = np.zeros(1, dtype=bool)  # first nonzero entry is +1
    is_zero = np.ones(1, dtype=bool)
    for p, x in enumerate(elements):
        xv = np.asarray(x, dtype=np.int64)[None, :]
        neg = group.reduce_array(-xv.copy())
        keys, k_neg, k_pos = row_keys(group, table, neg, xv)
        # c_p = +1: prefix sums to -x_p, prefix zero or normalised
        plus = np.flatnonzero((keys == k_neg[0]) & (normalized | is_zero))
        if len(plus):
            coeffs = _ternary_digits(int(plus[0]), p) + [1] + [0] * (k - p - 1)
            return False, Witness("null_combination", c=CoefficientVector(coeffs))
        # c_p = -1: prefix sums to x_p, prefix normalised
        minus = np.flatnonzero((keys == k_pos[0]) & normalized)
        if len(minus):
            coeffs = _ternary_digits(int(minus[0]), p) + [-1] + [0] * (k - p - 1)
            return False, Witness("null_combination", c=CoefficientVector(coeffs))
        if p == k - 1:
            break
        up = group.reduce_array(table + xv)
        down = group.reduce_array(table - xv)
        table = np.concatenate([table, up, down])
        normalized = np.concatenate([normalized, normalized | is_zero, normalized])
        is_zero = np.concatenate([is_zero, np.zeros(2 * len(is_zero), dtype=bool)])
    return True, None


def is_dissociated(elements: ElementSet) -> bool:
    """Fast yes/no answer (subset-sum route)."""
    return is_dissociated_sums(elements, limit=max(len(elements), sums_limit()))[0]
