import itertools

import numpy as np
import pytest

from prank import catalog
from prank.cohomology import cohomology
from prank.errors import CapacityError, PreconditionError
from prank.exactfield import Subspace, all_vectors, field, mat_power
from prank.liecore import center, centralizer, is_torus, quotient, toral_radical
from prank.spectra import (
    ElementaryWitness,
    budget,
    elementary_rank,
    elementary_witnesses,
    find_commuting_pair,
    is_two_saturated,
    nullcone,
    saturation_bound,
)
from prank.tori import maximal_tori, root_decomposition

from conftest import ENUMERABLE, built

SMALL = [l for l in ENUMERABLE if built(l).dim <= 4 or built(l).p == 3]


def brute_nullcone(A, k=1):
    F = field(A.p, k)
    X = all_vectors(F, A.dim)
    return X[~A.pmap_batch(X, F).any(axis=1)]


def brute_two_dim_elementary(A):
    """All 2-dim elementary subspaces, from pairs of commuting nullcone lines."""
    F = A.F
    pts = brute_nullcone(A)
    pts = pts[pts.any(axis=1)]
    reps = np.unique(np.array([Subspace(F, A.dim, v[None]).basis[0] for v in pts]), axis=0)
    found = set()
    for u, v in itertools.combinations(reps, 2):
        if not A.bracket(u, v).any():
            found.add(Subspace(F, A.dim, np.stack([u, v])))
    return found


@pytest.mark.parametrize("label,count", [("sl2(5)", 25), ("sl2(7)", 49), ("borel_minus(5)", 25),
                                         ("heisenberg_toral(5)", 25), ("witt(1,5)", 625), ("torus(2,5)", 1)])
def test_nullcone_counts(label, count):
    n = nullcone(built(label))
    assert n.count_with_zero == count
    assert not built(label).pmap(n.points()).any()


@pytest.mark.parametrize("label", ["sl2(5)", "sl2(7)", "witt(1,5)"])
def test_nullcone_of_centerless_algebras_via_ad_powers(label):
    # for a centerless algebra x^[p] = 0 exactly when ad(x)^p = 0
    A = built(label)
    X = all_vectors(A.F, A.dim)
    nil = np.array([not mat_power(A.F, A.ad(x), A.p).any() for x in X])
    assert nil.sum() == nullcone(A).count_with_zero
    pts = nullcone(A).points(include_zero=True)
    assert np.array_equal(pts, X[nil])


def test_sl2_nullcone_is_nilpotent_matrices():
    # independent count: nilpotent 2x2 trace-zero matrices over F_p number p^2
    for p in (3, 5, 7):
        count = 0
        for a, b, c in itertools.product(range(p), repeat=3):
            if (b * b + a * c) % p == 0:  # det of [[b, a], [c, -b]] = -(b^2 + ac)
                count += 1
        assert count == p * p == nullcone(catalog.sl2(p)).count_with_zero


def test_borel_minus_nullcone_is_the_plane():
    A = built("borel_minus(5)")
    plane = A.span([A.vec(x=1), A.vec(y=1)])
    pts = nullcone(A).points(include_zero=True)
    assert len(pts) == 25 and plane.contains_rows(pts).all()


@pytest.mark.parametrize("label", SMALL)
def test_two_dim_witnesses_match_brute_force(label):
    A = built(label)
    got = {w.space for w in elementary_witnesses(A, 2)}
    assert got == brute_two_dim_elementary(A)


@pytest.mark.parametrize("label", ENUMERABLE)
def test_witnesses_recheck(label):
    A = built(label)
    res = elementary_rank(A)
    assert res.witness.check() and res.witness.r == res.rank
    for r in range(1, res.rank + 1):
        for w in elementary_witnesses(A, r):
            B = w.space.basis
            assert not A.bracket(B[:, None], B[None, :]).any()
            assert not A.pmap(B).any()


def test_witness_check_rejects_bad_space():
    A = catalog.sl2(5)
    assert not ElementaryWitness(A, 1, A.span([A.vec(h=1)])).check()
    assert not ElementaryWitness(A, 2, A.span([A.vec(e=1)])).check()
    assert ElementaryWitness(A, 1, A.span([A.vec(e=1)])).check()


@pytest.mark.parametrize("label", [l for l in ENUMERABLE if l != "witt(1,5)"])
def test_rank_is_monotone_in_k(label):
    A = built(label)
    r1, r2 = elementary_rank(A, 1), elementary_rank(A, 2)
    assert r2.rank >= r1.rank
    assert r2.witness.check()


@pytest.mark.slow
def test_witt_rank_monotone_in_k(monkeypatch):
    monkeypatch.setenv("PRANK_BUDGET", str(10**9))
    A = built("witt(1,5)")
    assert elementary_rank(A, 2).rank >= elementary_rank(A, 1).rank == 2


@pytest.mark.parametrize("label", ENUMERABLE)
def test_rank_zero_exactly_for_tori(label):
    A = built(label)
    for k in (1, 2):
        if A.dim > 4 and k == 2:
            continue
        assert (elementary_rank(A, k).rank == 0) == is_torus(A)


def test_torus_nullcone_is_trivial():
    for n in (1, 2, 3):
        assert nullcone(catalog.torus(n, 5)).count_nonzero == 0
        assert elementary_rank(catalog.torus(n, 5)).rank == 0


@pytest.mark.parametrize("label", ["g_lambda(5)", "torus_sl2(5,1)", "heisenberg_toral(5)"])
def test_quotient_by_toral_center(label):
    A = built(label)
    C = center(A)
    assert toral_radical(A) == C  # center is a torus
    Q = quotient(A, C)
    for r in (1, 2):
        up = elementary_witnesses(A, r)
        down = elementary_witnesses(Q.algebra, r)
        images = {Subspace(Q.algebra.F, Q.algebra.dim, Q.project(w.space.basis)) for w in up}
        assert len(images) == len(up)
        assert all(im.dim == r for im in images)
        if cohomology(Q.algebra).h2 == 0:
            assert len(up) == len(down)


def test_e2_facts_small_examples():
    assert {w.space for w in elementary_witnesses(built("borel_minus(5)"), 2)} == {
        built("borel_minus(5)").span([[0, 1, 0], [0, 0, 1]])
    }
    H = built("heisenberg_toral(5)")
    assert elementary_rank(H).rank == 1
    Q = quotient(H, center(H)).algebra
    ws = elementary_witnesses(Q, 2)
    assert len(ws) == 1 and ws[0].space.dim == Q.dim == 2


def test_budget_environment(monkeypatch):
    monkeypatch.setenv("PRANK_BUDGET", "100")
    assert budget() == 100
    with pytest.raises(CapacityError, match="100"):
        nullcone(catalog.sl2(5))
    monkeypatch.setenv("PRANK_BUDGET", "lots")
    with pytest.raises(CapacityError):
        budget()
    monkeypatch.delenv("PRANK_BUDGET")
    assert budget() == 10**8


def test_saturation_examples():
    assert is_two_saturated(built("borel_minus(5)"))[0]
    ok, v, k = is_two_saturated(built("sl2(5)"))
    assert not ok and k == 1
    # counterexample really lies in no 2-dim elementary subalgebra
    A = built("sl2(5)")
    C = centralizer(A, v)
    assert C.dim == 1


def test_witt_one_counterexample_to_saturation():
    A = built("witt(1,5)")
    ok, v, k = is_two_saturated(A)
    assert not ok
    C = centralizer(A, v)
    assert not A.pmap(v).any()
    pts = C.points()
    nil = pts[~A.pmap(pts).any(axis=1)]
    assert Subspace(A.F, A.dim, v[None]).contains_rows(nil).all()


def test_saturation_bound():
    assert saturation_bound(18, 2, 2, 0, 3, True)
    assert not saturation_bound(3, 1, 1, 0, 5, True)
    assert saturation_bound(100, 1, 1, 0, 5)


def test_commuting_pair_in_p3_g():
    A = built("p3_g")
    for T in maximal_tori(A):
        D = root_decomposition(A, T)
        big = [r for r in D.roots if r.space.dim == D.rho]
        assert D.rho == 2 and big
        for a in big:
            neg = tuple((-c) % A.p for c in a.functional)
            # only roots here are +-alpha, so the two-root hypothesis has no instance
            assert all(b.functional in (a.functional, neg) for b in D.roots)
            u, w, k = find_commuting_pair(A, a.space, a.space, max_ext=3)
            F = field(A.p, k)
            assert u.any() and w.any() and not A.bracket(u, w, F).any()
            assert a.space.over(F).contains(u) and a.space.over(F).contains(w)


def test_commuting_pair_precondition():
    A = catalog.sl2(5)
    with pytest.raises(PreconditionError):
        find_commuting_pair(A, A.span([A.vec(e=1)]), A.full_space())
