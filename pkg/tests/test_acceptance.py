"""One test per acceptance criterion; each records a PASS/FAIL line shown in the
terminal summary."""

import contextlib
import subprocess
import sys

import numpy as np
import pytest

from prank import catalog
from prank.cohomology import Cochain, class_is_nonzero, cohomology, is_cocycle
from prank.exactfield import all_vectors, field, mat_power
from prank.liecore import center, quotient, validate
from prank.report import build_report
from prank.specfile import algebra_to_spec, dumps
from prank.spectra import elementary_rank, elementary_witnesses, is_two_saturated, nullcone, saturation_bound
from prank.tori import (
    gt2_check,
    invariant_profile,
    is_generically_toral,
    maximal_tori,
    rho_r_invariance,
    root_decomposition,
)
from prank.verdict import classify_rank_one, fingerprint, is_isomorphic, theorem_harness, verify_isomorphism

from conftest import ACCEPTANCE_LINES, ENUMERABLE, built, permute_algebra


@contextlib.contextmanager
def criterion(n, title):
    notes = []
    try:
        yield notes
    except BaseException as exc:
        detail = "; ".join(notes + [f"{type(exc).__name__}: {exc}"])
        ACCEPTANCE_LINES.append(f"CRITERION {n}: FAIL  {title}  [{detail}]")
        raise
    ACCEPTANCE_LINES.append(f"CRITERION {n}: PASS  {title}" + (f"  [{'; '.join(notes)}]" if notes else ""))


def test_criterion_1_catalog_validation():
    rng = np.random.default_rng(1)
    with criterion(1, "catalog validation, 500 random ad(x^[p]) = ad(x)^p checks per entry") as notes:
        for e in catalog.entries():
            A = e.build()
            assert validate(A).ok, e.label
            X = rng.integers(0, A.p, size=(500, A.dim))
            lhs = A.ad(A.pmap_batch(X))
            rhs = mat_power(A.F, A.ad(X), A.p)
            assert np.array_equal(lhs, rhs), e.label
        notes.append(f"{len(catalog.entries())} entries")


def test_criterion_2_paper_e2_facts():
    with criterion(2, "E(2) facts for heisenberg_toral, borel_minus, g_lambda, lr1_remark (k=1)") as notes:
        H = built("heisenberg_toral(5)")
        r = elementary_rank(H, 1)
        assert r.exhaustive and r.rank == 1 and not elementary_witnesses(H, 2)
        Q = quotient(H, center(H)).algebra
        ws = elementary_witnesses(Q, 2)
        assert len(ws) == 1 and ws[0].space.dim == Q.dim == 2

        B = built("borel_minus(5)")
        ws = elementary_witnesses(B, 2)
        assert [w.space for w in ws] == [B.span([B.vec(x=1), B.vec(y=1)])]

        G = built("g_lambda(5)")
        assert not elementary_witnesses(G, 2)
        QG = quotient(G, center(G)).algebra
        M = is_isomorphic(B, QG)
        assert M is not None and verify_isomorphism(B, QG, M)

        L = invariant_profile(built("lr1_remark(5,2)"), 1)
        assert (L.p_rank, L.mu, L.generically_toral, L.p_rank_exhaustive) == (1, 1, False, True)
        notes.append("smallest sufficient k = 1 for every case")


def p3_pmap_oracle(A, x):
    """p = 3 p-map from (a+b)^[3] = a^[3] + b^[3] + [b,[b,a]] - [a,[b,a]],
    folding in basis components one at a time."""
    acc = np.zeros(A.dim, dtype=np.int64)
    acc_p = np.zeros(A.dim, dtype=np.int64)
    for i in np.flatnonzero(x):
        b = np.zeros(A.dim, dtype=np.int64)
        b[i] = x[i]
        b_p = x[i] ** 3 * A.pmap_basis[i] % 3
        ba = A.bracket(b, acc)
        acc_p = (acc_p + b_p + A.bracket(b, ba) - A.bracket(acc, ba)) % 3
        acc = (acc + b) % 3
    return acc_p


def test_p3_oracle_formula_on_matrices():
    rng = np.random.default_rng(3)
    F = field(3)
    for _ in range(200):
        a, b = rng.integers(0, 3, size=(2, 3, 3))

        def br(u, v):
            return (u @ v - v @ u) % 3

        lhs = mat_power(F, (a + b) % 3, 3)
        rhs = (mat_power(F, a, 3) + mat_power(F, b, 3) + br(b, br(b, a)) - br(a, br(b, a))) % 3
        assert np.array_equal(lhs, rhs)


def test_criterion_3_p3_examples():
    with criterion(3, "p=3: p3_h p-rank 1 (243 pts), p3_g rho=2 and E(2) empty (729 pts), V(h) vs oracle") as notes:
        h = built("p3_h")
        r = elementary_rank(h, 1)
        assert r.rank == 1 and r.exhaustive and not elementary_witnesses(h, 2)
        X = all_vectors(h.F, h.dim)
        oracle = np.array([p3_pmap_oracle(h, x) for x in X])
        assert np.array_equal(oracle, h.pmap_batch(X))
        V = X[~oracle.any(axis=1)]
        nc = nullcone(h, 1)
        assert np.array_equal(nc.points(include_zero=True), V)
        notes.append(f"V(h) has {len(V)} points / {len(nc.lines)} lines: " + " ".join("".join(map(str, l)) for l in nc.lines))

        g = built("p3_g")
        rho, _, _ = rho_r_invariance(g)
        rg = elementary_rank(g, 1)
        assert rho == 2 and rg.rank == 1 and rg.exhaustive and not elementary_witnesses(g, 2)
        assert len(all_vectors(g.F, g.dim)) == 729


@pytest.mark.xfail(strict=True, reason="W(1) at p=5 has regular nilpotents with one-dimensional centralizer")
def test_criterion_4_witt_saturation():
    with criterion(4, "W(1), p=5 is 2-saturated") as notes:
        A = built("witt(1,5)")
        for k in (1, 2):
            ok, v, used = is_two_saturated(A, k)
            if ok:
                notes.append(f"k={used}")
                break
            notes.append(f"k={used}: {A.name} point {v.tolist()} lies in no 2-dim elementary subalgebra")
        assert ok


def test_criterion_5_cohomology():
    with criterion(5, "H^2 of sl2(5), borel(5), witt(1,5), witt(1,7); borel_minus form non-split") as notes:
        vals = {l: cohomology(built(l)).h2 for l in ["sl2(5)", "borel(5)", "witt(1,5)", "witt(1,7)"]}
        assert vals == {"sl2(5)": 0, "borel(5)": 0, "witt(1,5)": 1, "witt(1,7)": 1}
        B = built("borel_minus(5)")
        lam = Cochain.from_pairs(B, {("x", "y"): 1})
        assert is_cocycle(lam)[0] and class_is_nonzero(lam)
        notes.append(str(vals))


def test_criterion_6_roots_and_tori():
    with criterion(6, "RSD3, decomposition completeness, Gt2, r_t = mu - dim C") as notes:
        gt_count = 0
        for label in ENUMERABLE:
            A = built(label)
            rho_r_invariance(A)
            for T in maximal_tori(A):
                D = root_decomposition(A, T)
                assert D.cartan.dim + sum(r.space.dim for r in D.roots) == A.dim
            gt, T = is_generically_toral(A)
            if gt:
                gt_count += 1
                assert gt2_check(A, root_decomposition(A, T))[0]
                prof = invariant_profile(A)
                assert prof.r_t == prof.mu - prof.center_dim
        notes.append(f"{len(ENUMERABLE)} enumerable entries, {gt_count} generically toral; "
                     "witt(1,7) and witt(2,3) exceed the torus-search budget")


def test_criterion_7_theorem_harness():
    with criterion(7, "theorem harness CR4 CR10 CR11 CR6 LR1 CR1(2) CR3(2) AL1") as notes:
        rep = theorem_harness("all")
        failed = [f"{i.theorem}/{i.entry}: {i.detail}" for i in rep.items if not i.passed]
        assert rep.passed, failed
        assert {i.theorem for i in rep.items} == {"CR4", "CR10", "CR11", "CR6", "LR1", "CR1_2", "CR3_2", "AL1"}
        notes.append(f"{len(rep.items)} items")


def test_criterion_8_bounds():
    with criterion(8, "saturation inequality for W(n), S(n), H(2r), K(2r+1)") as notes:
        data = catalog.bound_data()
        for d in data:
            assert saturation_bound(d.dim, d.mu, d.rk, d.center, d.p, d.generically_toral), d
        for n in (2, 3):
            for p in (3, 5):
                assert n * p**n > p * (2 * n - 1)
        notes.append(f"{len(data)} cases")


def _report_bytes(label):
    return dumps(build_report(catalog.entry(label).build()))


def test_criterion_9_determinism():
    with criterion(9, "byte-identical reports; fingerprints and verdicts invariant under basis permutation") as notes:
        for e in catalog.entries():
            assert _report_bytes(e.label) == _report_bytes(e.label), e.label
        spec = dumps(algebra_to_spec(built("sl2(5)")))
        code = "import sys,json;from prank.specfile import spec_to_algebra,dumps;from prank.report import build_report;" \
               "sys.stdout.write(dumps(build_report(spec_to_algebra(json.loads(sys.stdin.read())))))"
        outs = {subprocess.run([sys.executable, "-c", code], input=spec, capture_output=True, text=True, check=True).stdout
                for _ in range(2)}
        assert len(outs) == 1
        rng = np.random.default_rng(9)
        for label in ENUMERABLE:
            A = built(label)
            try:
                base = classify_rank_one(A).outcome
            except Exception as exc:
                base = type(exc).__name__
            for _ in range(5):
                B = permute_algebra(A, rng.permutation(A.dim))
                assert fingerprint(B) == fingerprint(A)
                try:
                    v = classify_rank_one(B).outcome
                except Exception as exc:
                    v = type(exc).__name__
                assert v == base, label
        notes.append(f"{len(catalog.entries())} reports, {len(ENUMERABLE)} entries x 5 permutations")
