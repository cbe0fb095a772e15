"""Maximal dissociated subsets ("bases over {-1, 0, 1}") and the two-basis size bounds."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, asdict
from decimal import Decimal, localcontext
from typing import Optional, Sequence

import numpy as np

from .dissociation import SumLedger, is_dissociated
from .group import CoefficientVector, Element, ElementSet

__all__ = [
    "NoRepresentation",
    "NotMaximalError",
    "BoundReport2",
    "greedy_maximal",
    "greedy_order",
    "is_maximal_in",
    "decompose",
    "check_theorem2",
    "bound_report",
    "size_lower_bound",
    "size_upper_bound",
    "size_upper_bound_refined",
]

DECOMPOSE_LIMIT = 24


class NoRepresentation(ValueError):
    """The element is not a {-1, 0, 1} combination of the basis."""


class NotMaximalError(ValueError):
    """A set passed as a maximal dissociated subset is not one."""


def greedy_order(n: int, order="input", elements: Optional[ElementSet] = None, seed: int = 0):
    """Index permutation for :func:`greedy_maximal`.

    ``order`` is ``"input"``, ``"lex"``, ``"reverse"``, ``"random"`` or an
    explicit permutation.
    """
    if not isinstance(order, str):
        perm = [int(i) for i in order]
        if sorted(perm) != list(range(n)):
            raise ValueError("order is not a permutation of the set indices")
        return perm
    if order == "input":
        return list(range(n))
    if order == "reverse":
        return list(range(n))[::-1]
    if order == "lex":
        if elements is None:
            raise ValueError("lexicographic order needs the elements")
        return sorted(range(n), key=lambda i: elements[i])
    if order == "random":
        return [int(i) for i in np.random.default_rng(seed).permutation(n)]
    raise ValueError(f"unknown order {order!r}")


def greedy_maximal(A: ElementSet, order="input", seed: int = 0,
                   capacity: Optional[int] = None) -> ElementSet:
    """Scan ``A`` in ``order`` keeping every element that preserves dissociation.

    The result is maximal in ``A``: an element rejected earlier stays
    rejected because the sum table only grows.
    """
    perm = greedy_order(len(A), order, A, seed)
    ledger = SumLedger(A.group, capacity)
    for i in perm:
        ledger.try_add(A[i])
    result = ledger.as_set()
    assert is_maximal_in(result, A), "greedy output failed maximality post-check"
    return result


def is_maximal_in(lam: ElementSet, A: ElementSet) -> bool:
    if not lam.issubset(A):
        raise ValueError("candidate basis is not a subset of A")
    if not is_dissociated(lam):
        return False
    ledger = SumLedger(A.group, capacity=len(lam) + 1)
    for x in lam:
        ledger.try_add(x)
    rest = [a for a in A if a not in lam]
    if not rest:
        return True
    return not ledger.compatible(np.array(rest, dtype=np.int64)).any()


def _half_combinations(part: Sequence[Element], group):
    """All {-1,0,1} combinations of ``part`` in lexicographic order of c (-1 < 0 < 1)."""
    dim = group.dim
    for c in itertools.product((-1, 0, 1), repeat=len(part)):
        total = [0] * dim
        for ci, e in zip(c, part):
            if ci:
                for j, x in enumerate(e):
                    total[j] += ci * x
        yield c, group.reduce(total)


def decompose(a: Element, lam: ElementSet) -> CoefficientVector:
    """Lexicographically least ``c`` (with -1 < 0 < 1) such that ``combine(lam, c) == a``.

    Meet in the middle: the right half's combinations are tabulated keeping the
    first (least) ``c`` per value, then left-half combinations are scanned in
    order until one completes.
    """
    group = lam.group
    k = len(lam)
    if k > DECOMPOSE_LIMIT:
        raise ValueError(f"basis size {k} exceeds decomposition limit {DECOMPOSE_LIMIT}")
    a = group.reduce(a)
    split = k // 2
    left, right = lam.elements[:split], lam.elements[split:]
    table: dict[Element, tuple] = {}
    for c, v in _half_combinations(right, group):
        table.setdefault(v, c)
    for c, v in _half_combinations(left, group):
        need = group.sub(a, v)
        hit = table.get(need)
        if hit is not None:
            return CoefficientVector(c + hit)
    raise NoRepresentation(f"{a} is not a {{-1,0,1}} combination of the basis")


def size_lower_bound(m: int) -> float:
    return m / math.log2(2 * m + 1)


def size_upper_bound(m: int) -> float:
    """|M| (log2(2|M|) + log2 log2(2|M|) + 2), the headline form."""
    return m * (math.log2(2 * m) + math.log2(math.log2(2 * m)) + 2)


def size_upper_bound_refined(m: int) -> float:
    """Same with the additive 2 replaced by log2(5/2)."""
    return m * (math.log2(2 * m) + math.log2(math.log2(2 * m)) + math.log2(2.5))


def _upper_holds(lam: int, m: int, refined: bool, strict: bool) -> bool:
    """Compare ``lam`` with ``m * (log2(2m) + log2 log2(2m) + c)``, c = 2 or log2(5/2).

    Decided in double precision, re-decided with 60 significant digits when
    the two sides are within 1e-9 of each other.
    """
    bound = size_upper_bound_refined(m) if refined else size_upper_bound(m)
    if abs(bound - lam) > 1e-9 * max(1.0, bound):
        return lam < bound if strict else lam <= bound
    with localcontext() as ctx:
        ctx.prec = 60
        ln2 = Decimal(2).ln()
        two_m = Decimal(2 * m)
        add = (Decimal(5) / 2).ln() / ln2 if refined else Decimal(2)
        exact = m * (two_m.ln() / ln2 + (two_m.ln() / ln2).ln() / ln2 + add)
        return Decimal(lam) < exact if strict else Decimal(lam) <= exact


@dataclass(frozen=True)
class BoundReport2:
    """Sizes of two maximal dissociated subsets of one set, with the bounds between them.

    ``lower``/``upper`` are the headline bounds in terms of ``size_m``;
    ``upper_refined`` uses log2(5/2) in place of 2 and is checked non-strictly.
    ``star_ok`` is the symmetric counting inequality
    ``size_lambda <= size_m * log2(2 size_lambda + 1)``, ``count_ok`` the
    counting premise ``2^|M| <= (2|M|+1)^|Lambda|`` and ``ternary_ok`` the
    cap ``|Lambda| <= (3^|M| - 1) / 2``.  Integer-valued inequalities are
    decided exactly.
    """

    size_lambda: int
    size_m: int
    lower: float
    upper: float
    upper_refined: float
    lower_ok: bool
    upper_ok: bool
    upper_refined_ok: bool
    star_ok: bool
    count_ok: bool
    ternary_ok: bool

    @property
    def holds(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def all_ok(self) -> bool:
        return (self.holds and self.upper_refined_ok and self.star_ok
                and self.count_ok and self.ternary_ok)

    def to_json(self) -> dict:
        out = asdict(self)
        out["holds"] = self.holds
        return out


def bound_report(size_lambda: int, size_m: int) -> BoundReport2:
    """Evaluate every inequality for a pair of sizes (no set-level checks)."""
    lam, m = size_lambda, size_m
    if lam < 1 or m < 1:
        raise ValueError("sizes must be positive")
    # m / log2(2m+1) <= lam  <=>  2^m <= (2m+1)^lam
    count_ok = 2 ** m <= (2 * m + 1) ** lam
    return BoundReport2(
        size_lambda=lam,
        size_m=m,
        lower=size_lower_bound(m),
        upper=size_upper_bound(m),
        upper_refined=size_upper_bound_refined(m),
        lower_ok=count_ok,
        upper_ok=_upper_holds(lam, m, refined=False, strict=True),
        upper_refined_ok=_upper_holds(lam, m, refined=True, strict=False),
        star_ok=2 ** lam <= (2 * lam + 1) ** m,
        count_ok=count_ok,
        ternary_ok=2 * lam <= 3 ** m - 1,
    )


def check_theorem2(lam: ElementSet, M: ElementSet, A: ElementSet,
                   verify: bool = True) -> BoundReport2:
    """Bounds between two maximal dissociated subsets ``lam`` and ``M`` of ``A``.

    ``verify=False`` skips the maximality checks when the caller already did them.
    """
    if all(a == A.group.identity for a in A):
        raise ValueError("A must contain a nonzero element")
    for name, s in (("Lambda", lam), ("M", M)):
        if verify and not is_maximal_in(s, A):
            raise NotMaximalError(f"{name} is not a maximal dissociated subset of A")
    return bound_report(len(lam), len(M))
