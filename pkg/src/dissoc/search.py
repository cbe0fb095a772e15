"""Exhaustive searches: largest dissociated subsets, all maximal ones, stress corpora."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import bound_report, check_theorem2, greedy_maximal, is_maximal_in
from .dissociation import SizeLimitError, SumLedger
from .group import ElementSet, GroupSpec, hypercube

__all__ = [
    "SearchResult",
    "StressReport",
    "CorpusSpec",
    "max_dissociated",
    "largest_in_hypercube",
    "hypercube_cap",
    "enumerate_maximal",
    "random_corpus",
    "theorem2_stress",
]

ENUMERATE_LIMIT = 16


@dataclass
class SearchResult:
    best: ElementSet
    size: int
    nodes_visited: int
    exhausted: bool

    def to_json(self) -> dict:
        return {"size": self.size, "best": self.best.tolist(),
                "nodes_visited": self.nodes_visited, "exhausted": self.exhausted}


class _BudgetExceeded(Exception):
    pass


def search_order(A: ElementSet) -> list[int]:
    """Nonzero elements by coordinate sum, then lexicographically."""
    identity = A.group.identity
    idx = [i for i, a in enumerate(A) if a != identity]
    return sorted(idx, key=lambda i: (sum(A[i]), A[i]))


class _Search:
    """Depth-first branch and bound over subsets grown in a fixed element order."""

    def __init__(self, A: ElementSet, budget: Optional[int], cap: int):
        self.A = A
        self.rows = A.array
        self.budget = budget
        self.cap = cap
        self.nodes = 0
        self.best: tuple[int, ...] = ()

    def run(self, ledger: SumLedger, chosen: list[int], pool: list[int]) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _BudgetExceeded
        if len(chosen) > len(self.best):
            self.best = tuple(chosen)
        if len(self.best) >= self.cap or len(chosen) + len(pool) <= len(self.best):
            return
        for pos, i in enumerate(pool):
            if len(chosen) + len(pool) - pos <= len(self.best):
                return
            ledger._append(self.A[i])
            chosen.append(i)
            rest = pool[pos + 1:]
            if rest:
                keep = ledger.compatible(self.rows[rest])
                rest = [j for j, ok in zip(rest, keep) if ok]
            self.run(ledger, chosen, rest)
            chosen.pop()
            ledger.pop()
            if len(self.best) >= self.cap:
                return


def _cap_from_greedy(size: int) -> int:
    # every dissociated subset is at most (3^g - 1)/2 for a maximal subset of size g
    return (3 ** size - 1) // 2 if size < 40 else 1 << 62


def max_dissociated(A: ElementSet, budget: Optional[int] = None,
                    cap: Optional[int] = None) -> SearchResult:
    """Largest dissociated subset of ``A`` by branch and bound.

    Starts from the greedy basis in search order and prunes when the chosen
    elements plus the still-compatible candidates cannot beat the incumbent,
    or when the incumbent reaches ``cap`` (an upper bound valid for ``A``).
    """
    order = search_order(A)
    greedy = greedy_maximal(A, order=order + [i for i in range(len(A)) if i not in order])
    upper = min(len(order), _cap_from_greedy(len(greedy)))
    if cap is not None:
        upper = min(upper, cap)
    s = _Search(A, budget, upper)
    s.best = tuple(A.index(x) for x in greedy)
    exhausted = True
    try:
        s.run(SumLedger(A.group, capacity=len(order) + 1), [], order)
    except _BudgetExceeded:
        exhausted = False
    best = A.subset(s.best)
    return SearchResult(best, len(best), s.nodes, exhausted)


def hypercube_cap(n: int) -> int:
    """Largest L with 2^L <= (L+1)^n: subset sums of L vectors of {0,1}^n lie in {0..L}^n."""
    L = n
    while 2 ** (L + 1) <= (L + 2) ** n:
        L += 1
    return L


def largest_in_hypercube(n: int, budget: Optional[int] = None) -> SearchResult:
    """Largest dissociated subset of {0,1}^n.

    Coordinate permutations preserve dissociation, so a set whose lightest
    element has weight ``w`` can be moved to contain the weight-``w`` vector
    ``1^w 0^(n-w)``; each root branch fixes that vector and searches only the
    vectors of weight at least ``w``.
    """
    cube = hypercube(n, include_zero=False)
    order = search_order(cube)
    cap = hypercube_cap(n)
    s = _Search(cube, budget, cap)
    s.best = tuple(cube.index(tuple(1 if i == j else 0 for i in range(n))) for j in range(n))
    exhausted = True
    try:
        s.nodes += 1
        for w in range(1, n + 1):
            root = tuple([1] * w + [0] * (n - w))
            r = cube.index(root)
            pool = [i for i in order if sum(cube[i]) >= w and i != r]
            # the root must be the lightest chosen vector, so it cannot beat the incumbent
            # unless the pool is large enough
            if 1 + len(pool) <= len(s.best):
                continue
            ledger = SumLedger(cube.group, capacity=cap + 1)
            ledger._append(root)
            keep = ledger.compatible(cube.array[pool])
            pool = [j for j, ok in zip(pool, keep) if ok]
            s.run(ledger, [r], pool)
            if len(s.best) >= cap:
                break
    except _BudgetExceeded:
        exhausted = False
    best = cube.subset(s.best)
    return SearchResult(best, len(best), s.nodes, exhausted)


def enumerate_maximal(A: ElementSet, limit: Optional[int] = None) -> list[ElementSet]:
    """Every maximal dissociated subset of ``A``, in lexicographic order of index tuples."""
    limit = ENUMERATE_LIMIT if limit is None else limit
    if len(A) > limit:
        raise SizeLimitError(f"|A|={len(A)} exceeds enumeration limit {limit}")
    rows = A.array
    ledger = SumLedger(A.group, capacity=len(A) + 1)
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def visit(start: int) -> None:
        outside = [i for i in range(len(A)) if i not in chosen]
        ok = ledger.compatible(rows[outside]) if outside else np.zeros(0, bool)
        if not ok.any():
            found.append(tuple(chosen))
            return
        for i, good in zip(outside, ok):
            if good and i >= start:
                ledger._append(A[i])
                chosen.append(i)
                visit(i + 1)
                chosen.pop()
                ledger.pop()

    visit(0)
    return [A.subset(idx) for idx in found]


@dataclass(frozen=True)
class CorpusSpec:
    """Random sets of ``size`` distinct elements with coordinates in ``[low, high]``
    (torsion coordinates drawn from ``[0, modulus)``)."""

    group: GroupSpec
    size: int
    count: int
    low: int = 1
    high: int = 100


def random_corpus(spec: CorpusSpec, seed: int = 0) -> list[ElementSet]:
    rng = np.random.default_rng(seed)
    g = spec.group
    out = []
    for _ in range(spec.count):
        pts: dict[tuple, None] = {}
        tries = 0
        while len(pts) < spec.size:
            tries += 1
            if tries > 1000 * spec.size:
                raise ValueError("corpus spec cannot supply enough distinct elements")
            free = rng.integers(spec.low, spec.high + 1, size=g.free_rank)
            tors = [rng.integers(0, m) for m in g.moduli]
            pts.setdefault(g.reduce([*free.tolist(), *[int(t) for t in tors]]), None)
        out.append(ElementSet(g, tuple(pts)))
    return out


@dataclass
class StressReport:
    sets: int = 0
    pairs: int = 0
    violations: list = field(default_factory=list)
    min_ratio: float = math.inf
    max_ratio: float = 0.0
    equal_sized_sets: int = 0

    def to_json(self) -> dict:
        return {"sets": self.sets, "pairs": self.pairs, "violations": self.violations,
                "min_ratio": self.min_ratio, "max_ratio": self.max_ratio,
                "equal_sized_sets": self.equal_sized_sets}


def theorem2_stress(spec: CorpusSpec, seed: int = 0) -> StressReport:
    """Check the two-basis bounds on every ordered pair of maximal subsets of each random set."""
    report = StressReport()
    for A in random_corpus(spec, seed):
        if all(a == A.group.identity for a in A):
            continue
        maximal = enumerate_maximal(A)
        for lam in maximal:
            if not is_maximal_in(lam, A):
                report.violations.append({"set": A.tolist(), "reason": "non-maximal output",
                                          "Lambda": lam.tolist()})
        report.sets += 1
        sizes = {len(x) for x in maximal}
        report.equal_sized_sets += len(sizes) == 1
        for lam in maximal:
            for M in maximal:
                r = check_theorem2(lam, M, A, verify=False)
                report.pairs += 1
                ratio = r.size_lambda / r.size_m
                report.min_ratio = min(report.min_ratio, ratio)
                report.max_ratio = max(report.max_ratio, ratio)
                if not r.all_ok:
                    report.violations.append({"set": A.tolist(), "Lambda": lam.tolist(),
                                              "M": M.tolist(), "report": r.to_json()})
    return report
