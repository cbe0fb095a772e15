"""Smith normal form, subgroup rank in Z_e^k, and the rank bounds for maximal dissociated sets."""
from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Sequence

from .basis import is_maximal_in
from .group import ElementSet, GroupSpec, exponent

__all__ = [
    "SNFResult",
    "Theorem3Report",
    "smith_normal_form",
    "subgroup_rank",
    "closure",
    "closure_rank",
    "check_theorem3",
]

_INT64 = 1 << 63
MAX_SNF_DIM = 64
CLOSURE_LIMIT = 4096


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    rank_over_Z: int


def _check(value: int) -> int:
    if not -_INT64 <= value < _INT64:
        raise OverflowError("Smith normal form intermediate left the 64-bit range")
    return value


def smith_normal_form(M: Sequence[Sequence[int]]) -> SNFResult:
    """Diagonal ``d1 | d2 | ... `` of the Smith normal form of an integer matrix.

    Gcd elimination with the smallest nonzero entry as pivot, which keeps
    entries from growing.  The diagonal has ``min(rows, cols)`` entries,
    nonzero ones first.
    """
    A = [[_check(int(x)) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows > MAX_SNF_DIM or cols > MAX_SNF_DIM:
        raise ValueError(f"matrix {rows}x{cols} exceeds {MAX_SNF_DIM}x{MAX_SNF_DIM}")
    if any(len(r) != cols for r in A):
        raise ValueError("ragged matrix")

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            i, j = pivot
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            p = A[t][t]

            clean = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [_check(a - q * b) for a, b in zip(A[i], A[t])]
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] = _check(row[j] - q * row[t])
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            # pivot must divide the rest of the block; fold an offending row in
            bad = next((i for i in range(t + 1, rows)
                        if any(A[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            A[t] = [_check(a + b) for a, b in zip(A[t], A[bad])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]

    diagonal = tuple(A[i][i] for i in range(min(rows, cols)))
    return SNFResult(diagonal, sum(1 for d in diagonal if d))


def _homocyclic_exponent(group: GroupSpec) -> int:
    if not group.is_homocyclic:
        raise ValueError("rank tooling needs a homocyclic ambient group Z_e^k")
    return exponent(group)


def subgroup_rank(A: ElementSet, group: GroupSpec = None) -> int:
    """Minimal number of generators of <A> inside Z_e^k.

    Stacks the generators over ``e * I``; the lattice they span has Smith
    diagonal ``d_i`` (each dividing e) and <A> is the sum of the cyclic
    groups Z_{e/d_i}, so the rank counts the ``d_i < e``.
    """
    group = A.group if group is None else group
    e = _homocyclic_exponent(group)
    k = group.dim
    rows = [list(a) for a in A] + [[e if i == j else 0 for j in range(k)] for i in range(k)]
    diag = smith_normal_form(rows).diagonal
    return sum(1 for d in diag if d < e)


def closure(A: ElementSet, limit: int = CLOSURE_LIMIT) -> set:
    """All elements of the subgroup generated by ``A`` (breadth-first)."""
    group = A.group
    if not group.is_torsion:
        raise ValueError("closure needs a finite (torsion) group")
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for a in A:
                h = group.add(g, a)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise ValueError(f"subgroup larger than {limit}")
        frontier = nxt
    return seen


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def closure_rank(A: ElementSet, limit: int = CLOSURE_LIMIT) -> int:
    """Rank of <A> by enumeration: max over primes p of log_p |G / pG|."""
    G = closure(A, limit)
    group = A.group
    best = 0
    for p in _prime_factors(len(G)):
        index = len(G) // len({group.scale(p, g) for g in G})
        d = 0
        while index > 1:
            index //= p
            d += 1
        best = max(best, d)
    return best


@dataclass(frozen=True)
class Theorem3Report:
    """``rank <= size <= rank * log2(e)``; the upper side is decided as ``2^size <= e^rank``."""

    rank: int
    exponent: int
    size: int
    lower_ok: bool
    upper_ok: bool

    @property
    def holds(self) -> bool:
        return self.lower_ok and self.upper_ok

    def to_json(self) -> dict:
        out = asdict(self)
        out["holds"] = self.holds
        return out


def check_theorem3(A: ElementSet, lam: ElementSet, group: GroupSpec = None) -> Theorem3Report:
    group = A.group if group is None else group
    e = _homocyclic_exponent(group)
    if not is_maximal_in(lam, A):
        raise ValueError("Lambda is not a maximal dissociated subset of A")
    r = subgroup_rank(A, group)
    size = len(lam)
    return Theorem3Report(rank=r, exponent=e, size=size,
                          lower_ok=r <= size, upper_ok=2 ** size <= e ** r)
