"""Random construction of large dissociated subsets of {0,1}^n.

Draw ``n`` independent uniform rows from {0,1}^m.  If every nonzero
``s`` in {-1,0,1}^m is non-orthogonal to some row, the ``m`` columns of the
``n x m`` row matrix are a dissociated subset of {0,1}^n.  A union bound over
the types ``(m_plus, m_minus)`` of ``s`` gives a sufficient ``n``.

Randomness comes from numpy's PCG64 generator; a run with ``trials``
candidates derives one child stream per trial with
``SeedSequence(seed).spawn(trials)`` so results do not depend on execution
order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

import numpy as np

from ._keys import row_keys
from .dissociation import is_dissociated_sums
from .group import CoefficientVector, ElementSet, free_group

__all__ = [
    "TypeCount",
    "UnionBoundReport",
    "ConstructionResult",
    "ExhaustedTrials",
    "orth_probability",
    "orth_probability_vandermonde",
    "orth_probability_bound",
    "type_count",
    "union_bound",
    "minimal_n",
    "sample_candidate",
    "verify_covering",
    "columns",
    "construct",
    "success_rate",
    "trial_streams",
]

MAX_M = 20


@dataclass(frozen=True)
class TypeCount:
    """Counts of +1 and -1 entries of a vector in {-1,0,1}^m."""

    m_plus: int
    m_minus: int
    m: int

    def __post_init__(self):
        t = self.m_plus + self.m_minus
        if self.m_plus < 0 or self.m_minus < 0 or not 1 <= t <= self.m:
            raise ValueError(f"invalid type {self}")

    @property
    def support(self) -> int:
        return self.m_plus + self.m_minus

    @classmethod
    def of(cls, s) -> "TypeCount":
        s = list(s)
        return cls(sum(1 for x in s if x == 1), sum(1 for x in s if x == -1), len(s))


def orth_probability(tc: TypeCount) -> Fraction:
    """P(d . s = 0) for uniform d in {0,1}^m: C(t, m_plus) / 2^t, t = support."""
    t = tc.support
    return Fraction(math.comb(t, tc.m_plus), 1 << t)


def orth_probability_vandermonde(tc: TypeCount) -> Fraction:
    """Same probability summed over j = #ones of d on each sign class."""
    hits = sum(math.comb(tc.m_plus, j) * math.comb(tc.m_minus, j)
               for j in range(min(tc.m_plus, tc.m_minus) + 1))
    return Fraction(hits, 1 << tc.support)


def orth_probability_bound(tc: TypeCount) -> float:
    return 1.0 / math.sqrt(1.5 * tc.support)


def type_count(m: int, m_plus: int, m_minus: int) -> int:
    """Number of s in {-1,0,1}^m of the given type."""
    t = m_plus + m_minus
    return math.comb(m, t) * math.comb(t, m_plus)


def _log2_comb(m: int, t: int) -> float:
    return (math.lgamma(m + 1) - math.lgamma(t + 1) - math.lgamma(m - t + 1)) / math.log(2)


def _log2_sum(logs: list[float]) -> float:
    if not logs:
        return -math.inf
    top = max(logs)
    return top + math.log2(sum(2.0 ** (x - top) for x in logs))


@dataclass(frozen=True)
class UnionBoundReport:
    """sum_{t=1}^{m} C(m,t) 2^t (1.5 t)^(-n/2), split at T = m / log2(m)^2.

    ``sigma1`` collects ``t < T`` and ``sigma2`` the rest; for ``m = 1`` the
    split point is undefined (``T`` is None) and everything is in ``sigma2``.
    ``log2_*`` fields keep the values when the plain ones underflow.
    """

    m: int
    n: int
    T: Optional[float]
    sigma1: float
    sigma2: float
    total: float
    log2_sigma1: float
    log2_sigma2: float
    log2_total: float
    passes: bool
    high_precision: bool = False

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "T": self.T,
            "sigma1": self.sigma1, "sigma2": self.sigma2, "total": self.total,
            "log2_total": self.log2_total, "passes": self.passes,
            "high_precision": self.high_precision,
        }


def _total_decimal(m: int, n: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        half_n = Decimal(n) / 2
        return sum(
            Decimal(math.comb(m, t) << t) * (Decimal(3 * t) / 2) ** (-half_n)
            for t in range(1, m + 1)
        )


def union_bound(m: int, n: int) -> UnionBoundReport:
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    T = m / math.log2(m) ** 2 if m > 1 else None
    logs1, logs2 = [], []
    for t in range(1, m + 1):
        term = _log2_comb(m, t) + t - (n / 2) * math.log2(1.5 * t)
        (logs1 if T is not None and t < T else logs2).append(term)
    l1, l2 = _log2_sum(logs1), _log2_sum(logs2)
    lt = _log2_sum([x for x in (l1, l2) if x > -math.inf])
    total = 2.0 ** lt
    passes = total < 1
    precise = False
    if abs(total - 1) < 1e-6:
        passes = _total_decimal(m, n) < 1
        precise = True
    return UnionBoundReport(
        m=m, n=n, T=T,
        sigma1=2.0 ** l1, sigma2=2.0 ** l2, total=total,
        log2_sigma1=l1, log2_sigma2=l2, log2_total=lt,
        passes=passes, high_precision=precise,
    )


def minimal_n(m: int) -> int:
    """Least n for which the union bound total drops below 1 (the sum decreases in n)."""
    if m < 1:
        raise ValueError("m must be positive")
    n = 1
    while not union_bound(m, n).passes:
        n += 1
    return n


def trial_streams(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s))
            for s in np.random.SeedSequence(seed).spawn(trials)]


def sample_candidate(m: int, n: int, rng_seed=0) -> np.ndarray:
    """``n`` independent uniform rows of {0,1}^m as a uint8 ``(n, m)`` array.

    ``rng_seed`` is an int seed or a ready ``np.random.Generator``.  Rows may
    repeat, so the result is a matrix rather than an :class:`ElementSet`.
    """
    if m > MAX_M:
        raise ValueError(f"m={m} exceeds the verification limit {MAX_M}")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else \
        np.random.Generator(np.random.PCG64(rng_seed))
    return rng.integers(0, 2, size=(n, m), dtype=np.uint8)


def _ternary_table(cols: np.ndarray):
    """Values D_part @ s for every s over the given columns, in counter order.

    Returns ``(values, normalized)`` where ``normalized`` flags s whose first
    nonzero entry is +1.
    """
    n = cols.shape[0]
    values = np.zeros((1, n), dtype=np.int64)
    normalized = np.zeros(1, dtype=bool)
    is_zero = np.ones(1, dtype=bool)
    for j in range(cols.shape[1]):
        x = cols[:, j].astype(np.int64)
        values = np.concatenate([values, values + x, values - x])
        normalized = np.concatenate([normalized, normalized | is_zero, normalized])
        is_zero = np.concatenate([is_zero, np.zeros(2 * len(is_zero), dtype=bool)])
    return values, normalized


def _digits(index: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        index, d = divmod(index, 3)
        out.append((0, 1, -1)[d])
    return out


def verify_covering(D: np.ndarray):
    """Check every nonzero s in {-1,0,1}^m has a row of ``D`` not orthogonal to it.

    Meet in the middle over the two halves of the coordinates.  Returns
    ``(ok, s)``; on failure ``s`` is the orthogonal vector of least
    balanced-ternary counter index (coordinate 0 least significant, digits
    0, +1, -1) among those whose first nonzero entry is +1.
    """
    D = np.asarray(D, dtype=np.int64)
    n, m = D.shape
    if m > MAX_M:
        raise ValueError(f"m={m} exceeds the verification limit {MAX_M}")
    if m == 0:
        return True, None
    if n == 0:
        return False, CoefficientVector([1] + [0] * (m - 1))
    h = (m + 1) // 2
    left_vals, left_norm = _ternary_table(D[:, :h])
    right_vals, right_norm = _ternary_table(D[:, h:])
    group = free_group(n)
    zero = np.zeros((1, n), dtype=np.int64)
    k_left, k_target, k_zero = row_keys(group, left_vals, -right_vals, zero)

    # least normalised nonzero left index per value
    idx = np.flatnonzero(left_norm)
    idx = idx[np.lexsort((idx, k_left[idx]))]
    keys_sorted, first = np.unique(k_left[idx], return_index=True)
    best_left = idx[first]
    if len(keys_sorted):
        pos = np.clip(np.searchsorted(keys_sorted, k_target), 0, len(keys_sorted) - 1)
        left_choice = np.where(keys_sorted[pos] == k_target, best_left[pos], -1)
    else:
        left_choice = np.full(len(k_target), -1)
    # right part normalised and nonzero: the zero left half also completes it
    zero_ok = (k_target == k_zero[0]) & right_norm
    left_choice = np.where(zero_ok, 0, left_choice)
    hits = np.flatnonzero(left_choice >= 0)
    if not len(hits):
        return True, None
    r = int(hits[0])
    s = _digits(int(left_choice[r]), h) + _digits(r, m - h)
    return False, CoefficientVector(s)


def columns(D: np.ndarray) -> ElementSet:
    """The ``m`` columns of ``D`` as a subset of {0,1}^n in Z^n (ValueError if two coincide)."""
    D = np.asarray(D, dtype=np.int64)
    return ElementSet(free_group(D.shape[0]), tuple(tuple(int(v) for v in col) for col in D.T))


class ExhaustedTrials(RuntimeError):
    def __init__(self, m: int, n: int, trials: int, failures: int):
        self.m, self.n, self.trials, self.failures = m, n, trials, failures
        super().__init__(f"no covering candidate for m={m}, n={n} in {trials} trials "
                         f"({failures} failure witnesses)")


@dataclass
class ConstructionResult:
    elements: ElementSet
    n: int
    trial: int
    rows: np.ndarray = field(repr=False)
    report: Optional[UnionBoundReport] = None


def construct(m: int, n: Optional[int] = None, trials: int = 200, seed: int = 0) -> ConstructionResult:
    """First covering candidate among ``trials`` seeded draws, transposed to an m-subset of {0,1}^n."""
    if m > MAX_M:
        raise ValueError(f"m={m} exceeds the verification limit {MAX_M}")
    n = minimal_n(m) if n is None else n
    failures = 0
    for i, rng in enumerate(trial_streams(seed, trials)):
        D = sample_candidate(m, n, rng)
        ok, _ = verify_covering(D)
        if not ok:
            failures += 1
            continue
        result = columns(D)
        assert is_dissociated_sums(result, limit=max(m, 24))[0], "constructed set not dissociated"
        return ConstructionResult(result, n, i, D, union_bound(m, n))
    raise ExhaustedTrials(m, n, trials, failures)


def success_rate(m: int, n: int, trials: int = 200, seed: int = 0) -> float:
    passed = sum(verify_covering(sample_candidate(m, n, rng))[0] for rng in trial_streams(seed, trials))
    return passed / trials
