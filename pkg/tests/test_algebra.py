import itertools
from functools import reduce
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import gf2_rank
from dissoc.algebra import (
    check_theorem3,
    closure,
    closure_rank,
    smith_normal_form,
    subgroup_rank,
)
from dissoc.basis import greedy_maximal
from dissoc.dissociation import is_dissociated_sums
from dissoc.group import ElementSet, GroupSpec, cyclic_power, free_group


def det(M):
    M = [list(r) for r in M]
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(len(M)))


def determinantal_divisors(M):
    """d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}."""
    rows, cols = len(M), len(M[0])
    out = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, det([[M[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def invariant_factors_by_minors(M):
    d = determinantal_divisors(M)
    return tuple(d[k] // d[k - 1] if d[k] else 0 for k in range(1, len(d)))


@pytest.mark.parametrize("M,diag", [
    ([[2, 0], [0, 3]], (1, 6)),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)),
    ([[2, 4], [6, 8]], (2, 4)),
    ([[0, 0], [0, 0]], (0, 0)),
])
def test_snf_examples(M, diag):
    assert smith_normal_form(M).diagonal == diag
    assert invariant_factors_by_minors(M) == diag


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_snf_against_minors(M):
    res = smith_normal_form(M)
    diag = res.diagonal
    assert diag == invariant_factors_by_minors(M)
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert diag[:len(nonzero)] == tuple(nonzero)
    entries = [x for r in M for x in r]
    if any(entries):
        assert diag[0] == reduce(gcd, entries, 0)
    assert res.rank_over_Z == len(nonzero)


def test_snf_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = np.random.default_rng(0)
    for _ in range(100):
        r, c = rng.integers(1, 7, size=2)
        M = rng.integers(-20, 21, size=(r, c)).tolist()
        S = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
        assert smith_normal_form(M).diagonal == tuple(abs(S[i, i]) for i in range(min(r, c)))


def test_snf_unimodular_invariance():
    rng = np.random.default_rng(1)
    M = rng.integers(-5, 6, size=(4, 3))
    U = np.array([[1, 2, 0, 0], [0, 1, 0, 0], [0, 3, 1, 0], [1, 0, 0, 1]])  # det 1
    V = np.array([[1, 0, 0], [-2, 1, 0], [4, 1, 1]])
    assert smith_normal_form((U @ M @ V).tolist()) == smith_normal_form(M.tolist())


def test_snf_overflow_detected():
    with pytest.raises(OverflowError):
        smith_normal_form([[2 ** 63, 1]])
    with pytest.raises(OverflowError):
        smith_normal_form([[2 ** 62, 2 ** 62 - 1], [2 ** 62 - 1, -(2 ** 62)]])


def test_snf_size_limit():
    with pytest.raises(ValueError):
        smith_normal_form([[1] * 65])


def minimal_generators(G, group):
    """Smallest k such that some k elements of G generate all of G."""
    G = sorted(G)
    for k in range(0, len(G) + 1):
        for gens in itertools.combinations(G, k):
            if len(closure(ElementSet(group, gens))) == len(G):
                return k


@pytest.mark.parametrize("group,elems,r", [
    (cyclic_power(2, 2), [(1, 0), (0, 1)], 2),
    (cyclic_power(4, 1), [(2,)], 1),
    (cyclic_power(2, 2), [(1, 1)], 1),
    (cyclic_power(3, 2), [(0, 0)], 0),
])
def test_rank_examples(group, elems, r):
    A = ElementSet.of(group, elems)
    assert subgroup_rank(A) == r == closure_rank(A)


def test_closure_rank_is_minimal_generator_count():
    rng = np.random.default_rng(2)
    for group in (cyclic_power(4, 2), cyclic_power(6, 2), cyclic_power(2, 3), cyclic_power(9, 1)):
        for _ in range(6):
            pts = {group.reduce(rng.integers(0, group.moduli[0], size=group.dim))
                   for _ in range(int(rng.integers(1, 4)))}
            A = ElementSet(group, tuple(sorted(pts)))
            G = closure(A)
            assert closure_rank(A) == minimal_generators(G, group) == subgroup_rank(A)


def test_closure_invariance():
    rng = np.random.default_rng(3)
    group = cyclic_power(4, 3)
    for _ in range(20):
        pts = {group.reduce(rng.integers(0, 4, size=3)) for _ in range(3)}
        A = ElementSet(group, tuple(sorted(pts)))
        extra = sorted(closure(A))[int(rng.integers(len(closure(A))))]
        assert subgroup_rank(A.union([extra])) == subgroup_rank(A)


def test_rank_needs_homocyclic():
    with pytest.raises(ValueError):
        subgroup_rank(ElementSet.of(GroupSpec(0, (2, 4)), [(1, 1)]))
    with pytest.raises(ValueError):
        subgroup_rank(ElementSet.of(free_group(1), [(1,)]))


@pytest.mark.parametrize("k", range(1, 11))
def test_binary_dissociation_is_linear_independence(k):
    rng = np.random.default_rng(k)
    group = cyclic_power(2, k)
    for _ in range(25):
        size = int(rng.integers(1, k + 3))
        pts = {group.reduce(rng.integers(0, 2, size=k)) for _ in range(size)}
        A = ElementSet(group, tuple(sorted(pts)))
        assert is_dissociated_sums(A)[0] == (gf2_rank(A.elements) == len(A))


def test_theorem3_examples():
    group = cyclic_power(2, 3)
    A = ElementSet.of(group, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)])
    lam = greedy_maximal(A)
    rep = check_theorem3(A, lam)
    assert rep.rank == 3 and rep.exponent == 2 and rep.size == 3 and rep.holds


def test_theorem3_requires_maximal():
    group = cyclic_power(2, 2)
    A = ElementSet.of(group, [(1, 0), (0, 1)])
    with pytest.raises(ValueError):
        check_theorem3(A, ElementSet.of(group, [(1, 0)]))
