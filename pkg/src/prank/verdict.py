"""Isomorphism testing for small restricted Lie algebras, recognition of the
rank-one shapes, and theorem checks over the catalog."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from enum import Enum

import numpy as np

from .errors import CapacityError, DomainError, PreconditionError
from .exactfield import CODE, Subspace, all_vectors, rank, solve, span
from .liecore import (
    Algebra,
    center,
    centralizer,
    derived,
    derived_series,
    is_p_ideal,
    is_torus,
    lower_central_series,
    p_closure,
    quotient,
    subalgebra_generated,
    toral_radical,
)

MAX_ISO_DIM = 6


# -- fingerprints -----------------------------------------------------------------

def fingerprint(A: Algebra) -> dict:
    """Isomorphism invariants cheap enough to compare before searching."""
    if "fingerprint" in A._cache:
        return A._cache["fingerprint"]
    from .spectra import nullcone
    from .tori import toral_elements

    fp = {
        "dim": A.dim,
        "p": A.p,
        "center": center(A).dim,
        "derived": derived(A).dim,
        "derived_series": [S.dim for S in derived_series(A)],
        "lower_central_series": [S.dim for S in lower_central_series(A)],
        "toral_radical": toral_radical(A).dim,
        "nullcone_points": nullcone(A).count_with_zero,
        "toral_points": int(len(toral_elements(A))),
    }
    A._cache["fingerprint"] = fp
    return fp


def _point_invariants(A: Algebra, pts):
    """Per-point invariants used to restrict candidate images:
    (rank ad x, dim of the p-closure of kx, x^[p] != 0, x^[p] == x)."""
    F = A.F
    pts = np.asarray(pts, dtype=CODE).reshape(-1, A.dim)
    # the p-closure of kx is spanned by x, x^[p], x^[p^2], ...
    powers = [pts]
    for _ in range(A.dim):
        powers.append(A.pmap_batch(powers[-1]))
    stacks = np.stack(powers[:-1], axis=1)
    ads = A.ad(pts)
    pv = powers[1]
    out = []
    for i in range(len(pts)):
        out.append(
            (
                rank(F, ads[i]),
                rank(F, stacks[i]),
                bool(pv[i].any()),
                bool(np.array_equal(pv[i], pts[i])),
            )
        )
    return out


def _all_point_invariants(A: Algebra):
    if "point_invariants" not in A._cache:
        pts = all_vectors(A.F, A.dim)[1:]
        A._cache["point_invariants"] = (pts, _point_invariants(A, pts))
    return A._cache["point_invariants"]


# -- isomorphism search -----------------------------------------------------------

@dataclass
class _Word:
    kind: str  # "gen", "br", "pm"
    args: tuple


def _generators(A: Algebra):
    gens = []
    cur = Subspace.zero(A.F, A.dim)
    for i in range(A.dim):
        v = A.basis_vector(i)
        if not cur.contains(v):
            gens.append(v)
            cur = subalgebra_generated(A, gens)
    j = 0
    while j < len(gens):
        rest = gens[:j] + gens[j + 1 :]
        if rest and subalgebra_generated(A, rest).dim == A.dim:
            gens = rest
        else:
            j += 1
    return gens


def _word_plan(A: Algebra, gens):
    """Word bases of the p-subalgebras generated by growing prefixes of ``gens``.

    Returns ``(words, vectors, stages)``: ``stages[j]`` is the number of basis
    words spanning the subalgebra generated by the first ``j + 1`` generators.
    """
    words, vecs, stages = [], [], []
    cur = Subspace.zero(A.F, A.dim)

    def try_add(word, vec):
        nonlocal cur
        bigger = cur.extend(vec)
        if bigger.dim > cur.dim:
            words.append(word)
            vecs.append(vec)
            cur = bigger
            return True
        return False

    for g_index, g in enumerate(gens):
        try_add(_Word("gen", (g_index,)), g)
        grew = True
        while grew:
            grew = False
            n = len(words)
            for a in range(n):
                grew |= try_add(_Word("pm", (a,)), A.pmap(vecs[a]))
                for b in range(a + 1, n):
                    grew |= try_add(_Word("br", (a, b)), A.bracket(vecs[a], vecs[b]))
        stages.append(len(words))
    return words, np.array(vecs, dtype=CODE), stages


def _relations(A: Algebra, vecs, stages):
    """For each stage: bracket and p-map relations among its basis words."""
    F = A.F
    rels = []
    start = 0
    for end in stages:
        basis_T = vecs[:end].T
        stage_rels = []
        for a in range(end):
            b_lo = start if a < start else a + 1
            for b in range(max(b_lo, 0), end):
                c = solve(F, basis_T, A.bracket(vecs[a], vecs[b]))
                stage_rels.append(("br", a, b, c))
            if a >= start:
                c = solve(F, basis_T, A.pmap(vecs[a]))
                stage_rels.append(("pm", a, None, c))
        rels.append(stage_rels)
        start = end
    return rels


def _eval_words(B: Algebra, words, images, upto, cache):
    for i in range(len(cache), upto):
        w = words[i]
        if w.kind == "gen":
            cache.append(images[w.args[0]])
        elif w.kind == "pm":
            cache.append(B.pmap(cache[w.args[0]]))
        else:
            cache.append(B.bracket(cache[w.args[0]], cache[w.args[1]]))
    return cache


def _stage_ok(B: Algebra, rels, cache, end):
    F = B.F
    M = np.array(cache[:end], dtype=CODE)
    if rank(F, M) != end:
        return False
    for kind, a, b, c in rels:
        lhs = B.bracket(cache[a], cache[b]) if kind == "br" else B.pmap(cache[a])
        rhs = F.matmul(c, M)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def verify_isomorphism(A: Algebra, B: Algebra, M) -> bool:
    """Check that ``x -> M @ x`` is a bijective bracket- and p-map-preserving map."""
    F = A.F
    M = np.asarray(M, dtype=CODE) % A.p
    if A.dim != B.dim or M.shape != (B.dim, A.dim) or rank(F, M) != A.dim:
        return False
    imgs = M.T
    for i in range(A.dim):
        if not np.array_equal(F.matmul(M, A.pmap_basis[i]), B.pmap(imgs[i])):
            return False
        for j in range(i + 1, A.dim):
            if not np.array_equal(F.matmul(M, A.structure[i, j]), B.bracket(imgs[i], imgs[j])):
                return False
    return True


def is_isomorphic(A: Algebra, B: Algebra):
    """An isomorphism matrix ``M`` (column j = image of A's basis vector j) or ``None``."""
    if A.p != B.p:
        raise PreconditionError("algebras over different characteristics")
    if max(A.dim, B.dim) > MAX_ISO_DIM:
        raise CapacityError(f"isomorphism search limited to dim <= {MAX_ISO_DIM}", bound=MAX_ISO_DIM)
    if A.dim != B.dim or fingerprint(A) != fingerprint(B):
        return None
    if A.dim == 0:
        return np.zeros((0, 0), dtype=CODE)
    gens = _generators(A)
    words, vecs, stages = _word_plan(A, gens)
    rels = _relations(A, vecs, stages)
    pts, inv_B = _all_point_invariants(B)
    inv_A = _point_invariants(A, np.array(gens))
    candidates = [[pts[i] for i in range(len(pts)) if inv_B[i] == inv_A[g]] for g in range(len(gens))]

    images = [None] * len(gens)

    def search(g):
        if g == len(gens):
            return True
        for v in candidates[g]:
            images[g] = v
            cache = _eval_words(B, words, images, stages[g], [] if g == 0 else list(state[g - 1]))
            if _stage_ok(B, rels[g], cache, stages[g]):
                state[g] = cache
                if search(g + 1):
                    return True
        return False

    state = [None] * len(gens)
    if not search(0):
        return None
    imgs_words = np.array(state[-1], dtype=CODE)  # images of the word basis
    # M @ vecs.T = imgs_words.T  =>  M = imgs^T (vecs^T)^-1
    from .exactfield import inverse

    M = A.F.matmul(imgs_words.T, inverse(A.F, vecs.T))
    if not verify_isomorphism(A, B, M):
        raise AssertionError("isomorphism search returned an invalid map")
    return M


def subalgebra(A: Algebra, S: Subspace, name=None) -> Algebra:
    """The p-subalgebra ``S`` as an algebra in its echelon basis."""
    F = A.F
    B = S.basis
    BT = B.T
    m = S.dim
    structure = np.zeros((m, m, m), dtype=CODE)
    for i in range(m):
        for j in range(m):
            structure[i, j] = solve(F, BT, A.bracket(B[i], B[j]))
    pm = np.array([solve(F, BT, A.pmap(B[i])) for i in range(m)], dtype=CODE).reshape(m, m)
    return Algebra(A.p, [f"s{i}" for i in range(m)], structure, pm, name=name or f"{A.name}|sub")


# -- rank-one recognition -------------------------------------------------------

class Outcome(str, Enum):
    SL2 = "Sl2"
    BOREL = "Borel"
    BOREL_MINUS = "BorelMinus"
    TORUS_TIMES_SL2 = "TorusTimesSl2"
    TORUS_SEMIDIRECT_NIL_CYCLIC = "TorusSemidirectNilCyclic"
    TORUS = "Torus"
    UNCLASSIFIED = "Unclassified"


@dataclass
class Verdict:
    outcome: Outcome
    evidence: dict = dc_field(default_factory=dict)
    quotient_type: str | None = None

    def as_dict(self):
        return {"outcome": self.outcome.value, "quotient_type": self.quotient_type, "evidence": _jsonable(self.evidence)}


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


@lru_cache(maxsize=None)
def _targets(p):
    from .catalog import borel, borel_minus, sl2

    return (("sl2", sl2(p)), ("borel", borel(p)), ("borel_minus", borel_minus(p)))


def _match_quotient(Q: Algebra):
    for label, T in _targets(Q.p):
        if T.dim == Q.dim:
            M = is_isomorphic(T, Q)
            if M is not None:
                return label, T, M
    return None, None, None


def _sl2_complement(A: Algebra, C: Subspace):
    """``D = [A, A]`` with ``A = C (+) D``, ``C`` a torus and ``D`` a p-ideal isomorphic to sl2."""
    from .catalog import sl2

    if not is_torus(subalgebra(A, C)):
        return None
    D = derived(A)
    if D.dim + C.dim != A.dim or (C + D).dim != A.dim or not is_p_ideal(A, D):
        return None
    M = is_isomorphic(sl2(A.p), subalgebra(A, D))
    if M is None:
        return None
    return D, M


def _nil_cyclic_shape(A: Algebra):
    """Torus ``T`` and p-nilpotent ``x`` with ``A = T (+) (kx)_p`` and ``(kx)_p`` a p-ideal."""
    from .spectra import nullcone
    from .tori import maximal_tori

    nc = nullcone(A)
    if len(nc.lines) != 1:
        return None
    pts = all_vectors(A.F, A.dim)
    cur = pts
    for _ in range(A.dim):
        cur = A.pmap(cur)
    nil = pts[~cur.any(axis=1)]
    N = span(A.F, nil, A.dim)
    if len(nil) != A.p**N.dim or not is_p_ideal(A, N):
        return None
    T = maximal_tori(A)[0]
    if T.dim + N.dim != A.dim or (T.space + N).dim != A.dim:
        return None
    for x in nil:
        if x.any() and p_closure(A, x) == N:
            return T, x, N
    return None


def classify_rank_one(A: Algebra, k: int = 1) -> Verdict:
    from .spectra import elementary_rank
    from .tori import is_generically_toral

    rr = elementary_rank(A, k)
    if rr.rank >= 2:
        raise DomainError(f"p-rank is {rr.rank} over F_{A.p**k}; classification needs rank <= 1")
    if is_torus(A):
        return Verdict(Outcome.TORUS, {"dim": A.dim})
    gt, T = is_generically_toral(A)
    if gt:
        C = center(A)
        Qr = quotient(A, C)
        label, target, M = _match_quotient(Qr.algebra)
        if label is not None:
            evidence = {"center_dim": C.dim, "quotient_isomorphism": M, "torus": T.basis}
            if label == "sl2":
                if C.dim == 0:
                    return Verdict(Outcome.SL2, evidence, label)
                split = _sl2_complement(A, C)
                if split is not None:
                    D, M2 = split
                    evidence.update(complement=D.basis, complement_isomorphism=M2)
                    return Verdict(Outcome.TORUS_TIMES_SL2, evidence, label)
                return Verdict(Outcome.SL2, evidence, label)
            if label == "borel":
                return Verdict(Outcome.BOREL, evidence, label)
            return Verdict(Outcome.BOREL_MINUS, evidence, label)
    shape = _nil_cyclic_shape(A)
    if shape is not None:
        Tt, x, N = shape
        return Verdict(
            Outcome.TORUS_SEMIDIRECT_NIL_CYCLIC,
            {"torus": Tt.basis, "generator": x, "nil_ideal": N.basis},
        )
    return Verdict(Outcome.UNCLASSIFIED, {"fingerprint": fingerprint(A), "generically_toral": gt})


def recheck_verdict(A: Algebra, v: Verdict) -> bool:
    """Independently re-validate the evidence attached to a verdict."""
    from .catalog import sl2

    ev = v.evidence
    if v.outcome == Outcome.UNCLASSIFIED:
        return True
    if v.outcome == Outcome.TORUS:
        return is_torus(A)
    if v.outcome == Outcome.TORUS_SEMIDIRECT_NIL_CYCLIC:
        T = span(A.F, ev["torus"], A.dim)
        N = span(A.F, ev["nil_ideal"], A.dim)
        x = np.asarray(ev["generator"], dtype=CODE)
        toral = np.array_equal(A.pmap(T.basis), T.basis) if T.dim else True
        return bool(
            toral
            and (T + N).dim == A.dim
            and T.dim + N.dim == A.dim
            and is_p_ideal(A, N)
            and p_closure(A, x) == N
            and not A.pmap_power(x, A.dim).any()
        )
    C = center(A)
    Q = quotient(A, C).algebra
    targets = dict(_targets(A.p))
    if not verify_isomorphism(targets[v.quotient_type], Q, ev["quotient_isomorphism"]):
        return False
    if v.outcome == Outcome.TORUS_TIMES_SL2:
        D = span(A.F, ev["complement"], A.dim)
        return verify_isomorphism(sl2(A.p), subalgebra(A, D), ev["complement_isomorphism"])
    return True


# -- theorem harness -------------------------------------------------------------

@dataclass
class HarnessItem:
    theorem: str
    entry: str
    passed: bool
    detail: str


@dataclass
class HarnessReport:
    suite: str
    items: list

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def as_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "items": [i.__dict__ for i in self.items],
        }


SUITES = ("CR4", "CR10", "CR11", "CR6", "LR1", "CR1_2", "CR3_2", "AL1")


class _Facts:
    """Lazily computed invariants of one catalog entry."""

    def __init__(self, entry):
        self.entry = entry
        self.A = entry.build()
        self._d = {}

    def get(self, key):
        if key not in self._d:
            from .spectra import elementary_rank
            from .tori import invariant_profile, is_generically_toral, root_decomposition

            A = self.A
            if key == "profile":
                self._d[key] = invariant_profile(A)
            elif key == "rank":
                self._d[key] = elementary_rank(A)
            elif key == "verdict":
                self._d[key] = classify_rank_one(A)
            elif key == "gt":
                self._d[key] = is_generically_toral(A)
            elif key == "decomposition":
                gt, T = self.get("gt")
                self._d[key] = root_decomposition(A, T) if gt else None
        return self._d[key]


def _facts(p=None):
    from .catalog import entries

    return [_Facts(e) for e in entries() if e.enumerable and (p is None or e.p == p)]


def _check_cr4(f):
    pr = f.get("profile")
    if f.A.p < 5 or not pr.generically_toral or pr.p_rank != 1:
        return None
    v = f.get("verdict")
    ok = v.quotient_type in ("sl2", "borel", "borel_minus") and recheck_verdict(f.A, v)
    if v.quotient_type == "borel_minus":
        ok = ok and pr.center_dim > 0
    return ok, f"quotient {v.quotient_type}, center dim {pr.center_dim}"


def _check_cr10(f):
    pr = f.get("profile")
    if pr.p_rank != 1 or (pr.center_dim != 0 and not pr.perfect):
        return None
    v = f.get("verdict")
    allowed = {Outcome.SL2} if pr.perfect else {Outcome.SL2, Outcome.BOREL}
    return v.outcome in allowed and recheck_verdict(f.A, v), f"{v.outcome.value} (perfect={pr.perfect})"


def _check_cr11(f):
    pr = f.get("profile")
    if pr.p_rank != 1 or pr.toral_radical_dim != 0:
        return None
    v = f.get("verdict")
    allowed = {Outcome.SL2, Outcome.BOREL, Outcome.TORUS_SEMIDIRECT_NIL_CYCLIC}
    ok = v.outcome in allowed and recheck_verdict(f.A, v)
    if v.outcome == Outcome.TORUS_SEMIDIRECT_NIL_CYCLIC:
        ok = ok and len(v.evidence["torus"]) == 1
    return ok, v.outcome.value


def _check_cr6(f):
    pr = f.get("profile")
    if f.A.p < 5 or pr.r_count < 3:
        return None
    rr = f.get("rank")
    ok = rr.rank >= 2 and rr.witness.check()
    return ok, f"r = {pr.r_count}, rank {rr.rank}, witness {rr.witness.space.basis.tolist()}"


def _check_lr1(f):
    pr = f.get("profile")
    if pr.p_rank != 1 or pr.r_count < 2:
        return None
    return pr.generically_toral, f"r = {pr.r_count}, generically toral {pr.generically_toral}"


def _check_cr1_2(f):
    pr = f.get("profile")
    if pr.p_rank != 1 or not pr.generically_toral:
        return None
    A, D = f.A, f.get("decomposition")
    T = D.torus
    for root in D.roots:
        ker = kernel_of_functional(A, T, root.functional)
        for x in root.space.points()[1:]:
            expected = ker.extend(x)
            if centralizer(A, x) != expected:
                return False, f"root {root.functional}, x = {x.tolist()}"
    return True, f"{len(D.roots)} roots checked"


def kernel_of_functional(A: Algebra, T, functional) -> Subspace:
    """``ker(alpha)`` inside the torus ``T``."""
    from .exactfield import kernel

    f = np.asarray(functional, dtype=CODE).reshape(1, -1)
    coeffs = kernel(A.F, f)  # coefficient vectors in the toral basis
    if coeffs.dim == 0:
        return Subspace.zero(A.F, A.dim)
    return span(A.F, A.F.matmul(coeffs.basis, T.basis), A.dim)


def _check_cr3_2(f):
    pr = f.get("profile")
    if pr.p_rank != 1 or not pr.generically_toral:
        return None
    if f.A.p >= 5:
        ok = pr.rho == 1 and pr.mu == pr.center_dim + 1
        return ok, f"rho {pr.rho}, mu {pr.mu}, center {pr.center_dim}"
    if f.entry.label == "p3_g":
        return pr.rho != 1, f"p = 3 counterexample: rho {pr.rho}"
    return None


def _check_al1(f):
    if f.entry.name not in ("torus_sl2", "tn_cyclic", "lr1_remark"):
        return None
    v = f.get("verdict")
    expected = Outcome.TORUS_TIMES_SL2 if f.entry.name == "torus_sl2" else Outcome.TORUS_SEMIDIRECT_NIL_CYCLIC
    return v.outcome == expected and recheck_verdict(f.A, v), v.outcome.value


_CHECKS = {
    "CR4": _check_cr4,
    "CR10": _check_cr10,
    "CR11": _check_cr11,
    "CR6": _check_cr6,
    "LR1": _check_lr1,
    "CR1_2": _check_cr1_2,
    "CR3_2": _check_cr3_2,
    "AL1": _check_al1,
}


def theorem_harness(name: str = "all", p: int | None = None) -> HarnessReport:
    """Run one suite (or ``"all"``) over the enumerable catalog instances."""
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in _CHECKS:
            raise DomainError(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    items = []
    facts = _facts(p)
    for n in names:
        for f in facts:
            res = _CHECKS[n](f)
            if res is not None:
                items.append(HarnessItem(n, f.entry.label, bool(res[0]), res[1]))
    return HarnessReport(name, items)
