import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from dissoc.construction import (
    ExhaustedTrials,
    TypeCount,
    _total_decimal,
    columns,
    construct,
    minimal_n,
    orth_probability,
    orth_probability_bound,
    orth_probability_vandermonde,
    sample_candidate,
    success_rate,
    trial_streams,
    type_count,
    union_bound,
    verify_covering,
)
from dissoc.dissociation import is_dissociated_nullcomb, is_dissociated_sums


def enumerate_orth_probability(s):
    """Fraction of d in {0,1}^m with d . s = 0."""
    hits = sum(1 for d in itertools.product((0, 1), repeat=len(s))
               if sum(a * b for a, b in zip(d, s)) == 0)
    return Fraction(hits, 2 ** len(s))


@pytest.mark.parametrize("s,expected", [
    ((1, -1), Fraction(1, 2)),
    ((1, 1, 1), Fraction(1, 8)),
    ((1, 1, -1), Fraction(3, 8)),
])
def test_orth_probability_examples(s, expected):
    assert enumerate_orth_probability(s) == expected
    assert orth_probability(TypeCount.of(s)) == expected


def test_orth_probability_matches_enumeration():
    for m in range(1, 7):
        for s in itertools.product((-1, 0, 1), repeat=m):
            if any(s):
                tc = TypeCount.of(s)
                assert orth_probability(tc) == enumerate_orth_probability(s)
                assert orth_probability_vandermonde(tc) == orth_probability(tc)


def test_orth_bound_examples():
    assert orth_probability_bound(TypeCount(1, 1, 2)) == pytest.approx(0.5774, abs=1e-4)
    assert orth_probability_bound(TypeCount(1, 0, 1)) == pytest.approx(0.8165, abs=1e-4)
    tc = TypeCount(10, 10, 20)
    assert float(orth_probability(tc)) == pytest.approx(math.comb(20, 10) / 2 ** 20)
    assert float(orth_probability(tc)) == pytest.approx(0.1762, abs=1e-4)
    assert orth_probability_bound(tc) == pytest.approx(1 / math.sqrt(30))


def test_type_validation():
    with pytest.raises(ValueError):
        TypeCount(0, 0, 3)
    with pytest.raises(ValueError):
        TypeCount(2, 2, 3)


class TestUnionBound:
    def test_m1(self):
        r = union_bound(1, 4)
        assert r.T is None and r.sigma1 == 0
        assert r.total == pytest.approx(2 * 1.5 ** -2, rel=1e-12)
        assert r.passes
        r = union_bound(1, 3)
        assert r.total == pytest.approx(2 * 1.5 ** -1.5, rel=1e-12)
        assert not r.passes

    def test_direct_sum(self):
        for m in (2, 5, 9, 17):
            for n in (3, 10, 25):
                direct = sum(math.comb(m, t) * 2 ** t * (1.5 * t) ** (-n / 2) for t in range(1, m + 1))
                r = union_bound(m, n)
                assert r.total == pytest.approx(direct, rel=1e-9)
                assert r.total == pytest.approx(r.sigma1 + r.sigma2, rel=1e-9)
                T = m / math.log2(m) ** 2
                s1 = sum(math.comb(m, t) * 2 ** t * (1.5 * t) ** (-n / 2)
                         for t in range(1, m + 1) if t < T)
                assert r.sigma1 == pytest.approx(s1, rel=1e-9, abs=1e-300)

    def test_decimal_fallback_agrees(self):
        for m, n in [(1, 3), (4, 11), (12, 20)]:
            assert float(_total_decimal(m, n)) == pytest.approx(union_bound(m, n).total, rel=1e-12)

    def test_strictly_decreasing_in_n(self):
        for m in (1, 3, 10):
            totals = [union_bound(m, n).total for n in range(1, 40)]
            assert all(a > b for a, b in zip(totals, totals[1:]))


class TestMinimalN:
    def test_m1(self):
        assert minimal_n(1) == 4

    def test_m2_direct_scan(self):
        n = 1
        while 4 * 1.5 ** (-n / 2) + 4 * 3 ** (-n / 2) >= 1:
            n += 1
        assert minimal_n(2) == n

    def test_boundary(self):
        n = minimal_n(8)
        assert union_bound(8, n).passes
        assert not union_bound(8, n - 1).passes

    def test_sanity_envelope(self):
        for m in range(8, 65):
            ratio = minimal_n(m) * math.log2(m) / (m * 2 * math.log2(3))
            assert 0.5 < ratio < 3, (m, ratio)


class TestSampling:
    def test_deterministic(self):
        assert np.array_equal(sample_candidate(6, 9, 42), sample_candidate(6, 9, 42))
        assert not np.array_equal(sample_candidate(6, 9, 42), sample_candidate(6, 9, 43))

    def test_bit_frequency(self):
        D = sample_candidate(10, 1000, 1)
        p = D.mean()
        sigma = math.sqrt(0.25 / D.size)
        assert abs(p - 0.5) < 3 * sigma

    def test_single_coin(self):
        ones = sum(int(sample_candidate(1, 1, rng)[0, 0]) for rng in trial_streams(9, 2000))
        sigma = math.sqrt(0.25 * 2000)
        assert abs(ones - 1000) < 3 * sigma

    def test_streams_split(self):
        a = [sample_candidate(4, 4, g) for g in trial_streams(5, 3)]
        b = [sample_candidate(4, 4, g) for g in trial_streams(5, 3)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


class TestVerifyCovering:
    def test_identity_rows(self):
        D = np.eye(2, dtype=np.uint8)
        for s in itertools.product((-1, 0, 1), repeat=2):
            if any(s):
                assert (D @ np.array(s)).any()
        assert verify_covering(D) == (True, None)

    def test_zero_row(self):
        ok, s = verify_covering(np.zeros((1, 4), dtype=np.uint8))
        assert not ok and s == (1, 0, 0, 0)

    def test_no_rows(self):
        assert verify_covering(np.zeros((0, 3), dtype=np.uint8))[0] is False

    def test_brute_force(self):
        rng = np.random.default_rng(4)
        for _ in range(150):
            m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            D = rng.integers(0, 2, size=(n, m))
            bad = [s for s in itertools.product((-1, 0, 1), repeat=m)
                   if any(s) and not (D @ np.array(s)).any()]
            ok, s = verify_covering(D)
            assert ok == (not bad)
            if s is not None:
                assert not (D @ np.array(s)).any()

    def test_matches_column_oracles(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            m, n = int(rng.integers(1, 9)), int(rng.integers(1, 12))
            D = rng.integers(0, 2, size=(n, m))
            ok, s = verify_covering(D)
            try:
                cols = columns(D)
            except ValueError:  # repeated column
                assert not ok
                continue
            ok1, w = is_dissociated_nullcomb(cols)
            assert ok == ok1 == is_dissociated_sums(cols)[0]
            if not ok:
                assert s == w.c


class TestConstruct:
    def test_m2(self):
        res = construct(2, n=8, trials=100, seed=3)
        assert len(res.elements) == 2 and res.elements.group.dim == 8
        assert is_dissociated_sums(res.elements)[0]
        assert all(set(e) <= {0, 1} for e in res.elements)

    def test_default_n(self):
        res = construct(5, trials=200, seed=1)
        assert res.n == minimal_n(5)
        assert is_dissociated_nullcomb(res.elements)[0]

    def test_exhausted(self):
        with pytest.raises(ExhaustedTrials) as info:
            construct(6, n=2, trials=5, seed=0)
        assert info.value.failures == 5

    def test_m1_success_rate(self):
        # fails only when all four rows are 0: success probability 15/16
        rate = success_rate(1, 4, trials=1000, seed=2)
        sigma = math.sqrt(15 / 16 * 1 / 16 / 1000)
        assert abs(rate - 15 / 16) < 3 * sigma


class TestSuccessRate:
    def test_single_coin(self):
        rate = success_rate(1, 1, trials=1000, seed=0)
        assert abs(rate - 0.5) < 3 * math.sqrt(0.25 / 1000)

    def test_deterministic(self):
        assert success_rate(4, 8, 50, 3) == success_rate(4, 8, 50, 3)

    def test_monotone_in_n(self):
        N = 300
        for m in (3, 5):
            for n in (4, 7):
                lo = success_rate(m, n, N, 1)
                hi = success_rate(m, n + 4, N, 1)
                sigma = math.sqrt(max(lo * (1 - lo), 1 / N) / N)
                assert hi >= lo - 3 * sigma

    def test_above_union_bound(self):
        N = 300
        for m in (3, 5):
            n = minimal_n(m) + 2
            total = union_bound(m, n).total
            p0 = 1 - total
            rate = success_rate(m, n, N, 4)
            assert rate >= p0 - 3 * math.sqrt(p0 * (1 - p0) / N)
