"""Split tori, root space decompositions and the numerical invariants built on them.

Tori are searched over F_p: a torus is represented by an F_p-basis of toral
elements (``t^[p] = t``), and its canonical echelon basis is again toral.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from itertools import combinations

import numpy as np

from .errors import DomainError, InvariantViolation, PreconditionError
from .exactfield import CODE, Subspace, field, iter_vectors, kernel, lex_sort_rows, normalize_lines, rank
from .liecore import (
    Algebra,
    bracket_space,
    center,
    centralizer_of_set,
    is_nilpotent,
    is_perfect,
    is_solvable,
    subalgebra_generated,
    toral_radical,
)
from .spectra import check_budget, elementary_rank

MAX_TORI = 10**4


@dataclass(frozen=True)
class Torus:
    algebra: Algebra
    space: Subspace  # canonical basis doubles as the toral basis

    @property
    def basis(self):
        return self.space.basis

    @property
    def dim(self):
        return self.space.dim

    def check(self) -> bool:
        A, B = self.algebra, self.basis
        if B.shape[0] == 0:
            return True
        if A.bracket(B[:, None, :], B[None, :, :]).any():
            return False
        return bool(np.array_equal(A.pmap(B), B))

    def coordinates(self, v):
        """Coordinates of ``v`` in the toral basis, or ``None`` if outside."""
        return self.space.coordinates(v)


def toral_elements(A: Algebra, k: int = 1):
    """All x with ``x^[p] = x`` over F_{p^k} (including 0), lexicographically sorted."""
    F = field(A.p, k)
    check_budget(F.q**A.dim, f"toral elements of {A.name or 'algebra'} over F_{F.q}")
    out = []
    for block in iter_vectors(F, A.dim):
        out.append(block[(A.pmap_batch(block, F) == block).all(axis=1)])
    return np.concatenate(out)


@dataclass
class ToriSearch:
    tori: list
    mu: int
    exhaustive: bool


def _search_tori(A: Algebra, cap: int = MAX_TORI) -> ToriSearch:
    if "tori" in A._cache:
        return A._cache["tori"]
    F = A.F
    toral = toral_elements(A)
    toral = toral[toral.any(axis=1)]
    exhaustive = True
    reps = np.unique(normalize_lines(F, toral), axis=0) if len(toral) else toral
    level = [Subspace(F, A.dim, r[None, :], _canonical=True) for r in lex_sort_rows(reps)]
    if len(level) > cap:
        level, exhaustive = level[:cap], False
    best = [Subspace.zero(F, A.dim)] if not level else level
    while level:
        check_budget(len(level) * len(toral), f"torus search in {A.name or 'algebra'}")
        nxt = {}
        for T in level:
            C = centralizer_of_set(A, T)
            cand = toral[C.contains_rows(toral) & ~T.contains_rows(toral)]
            covered = np.zeros(len(cand), dtype=bool)
            for i in range(len(cand)):
                if covered[i]:
                    continue
                bigger = T.extend(cand[i])
                covered |= bigger.contains_rows(cand)
                nxt.setdefault(bigger.key, bigger)
            if len(nxt) > cap:
                exhaustive = False
                break
        level = sorted(nxt.values(), key=Subspace.sort_key)[:cap]
        if level:
            best = level
        if not exhaustive:
            break
    result = ToriSearch([Torus(A, S) for S in best], best[0].dim, exhaustive)
    A._cache["tori"] = result
    return result


def maximal_tori(A: Algebra):
    """All split tori of maximal dimension, canonically sorted."""
    return _search_tori(A).tori


def mu(A: Algebra) -> int:
    return _search_tori(A).mu


@dataclass
class Root:
    functional: tuple  # values on the toral basis, in F_p
    space: Subspace


@dataclass
class RootDecomposition:
    torus: Torus
    cartan: Subspace
    roots: list

    @property
    def rho(self) -> int:
        return max((r.space.dim for r in self.roots), default=0)

    @property
    def r_count(self) -> int:
        return len(self.roots)

    @property
    def r_t(self) -> int:
        if not self.roots:
            return 0
        return rank(self.torus.algebra.F, np.array([r.functional for r in self.roots], dtype=CODE))

    def root(self, functional):
        functional = tuple(int(c) % self.torus.algebra.p for c in functional)
        for r in self.roots:
            if r.functional == functional:
                return r
        raise DomainError(f"{functional} is not a root")

    def weight_space(self, functional):
        functional = tuple(int(c) % self.torus.algebra.p for c in functional)
        if not any(functional):
            return self.cartan
        for r in self.roots:
            if r.functional == functional:
                return r.space
        return Subspace.zero(self.cartan.F, self.cartan.n)

    def evaluate(self, functional, v):
        """``α(v)`` for ``v`` in the torus."""
        c = self.torus.coordinates(v)
        if c is None:
            raise DomainError("vector is not in the torus")
        return int(np.dot(np.asarray(functional, dtype=CODE), c) % self.torus.algebra.p)


def _is_maximal(A: Algebra, T: Torus) -> bool:
    C = centralizer_of_set(A, T.space)
    pts = C.points()
    toral = pts[(A.pmap(pts) == pts).all(axis=1)]
    return bool(T.space.contains_rows(toral).all())


def root_decomposition(A: Algebra, T: Torus, check_maximal: bool = True) -> RootDecomposition:
    F, p, d = A.F, A.p, A.dim
    if check_maximal and not _is_maximal(A, T):
        raise PreconditionError("torus is not maximal: its centralizer contains further toral elements")
    pieces = [((), A.full_space())]
    eye = np.eye(d, dtype=CODE)
    for t in T.basis:
        M = A.ad(t)
        refined = []
        for label, S in pieces:
            for c in range(p):
                E = kernel(F, (M - c * eye) % p).intersect(S)
                if E.dim:
                    refined.append((label + (c,), E))
        pieces = refined
    cartan = Subspace.zero(F, d)
    roots = []
    for label, S in pieces:
        if any(label):
            roots.append(Root(label, S))
        else:
            cartan = S
    roots.sort(key=lambda r: r.functional)
    return RootDecomposition(T, cartan, roots)


def rho_r_invariance(A: Algebra):
    """``(rho, r_count, table)`` after checking equality over every maximal torus."""
    table = []
    for T in maximal_tori(A):
        D = root_decomposition(A, T, check_maximal=False)
        table.append((T.space.basis.tolist(), D.rho, D.r_count))
    values = {(rho, r) for _, rho, r in table}
    if len(values) != 1:
        raise InvariantViolation(f"(rho, r) differs across maximal tori: {sorted(values)}")
    rho, r = values.pop()
    return rho, r, table


def is_generically_toral(A: Algebra):
    """``(True, torus)`` for a self-centralizing maximal torus, else ``(False, None)``."""
    for T in maximal_tori(A):
        if centralizer_of_set(A, T.space) == T.space:
            return True, T
    return False, None


def rk(A: Algebra):
    """``(value, exact)``: minimal centralizer dimension over the found maximal tori.

    ``exact`` is False for non-generically-toral algebras, where other Cartan
    subalgebras could be smaller.
    """
    value = min(centralizer_of_set(A, T.space).dim for T in maximal_tori(A))
    return value, is_generically_toral(A)[0]


def gt2_check(A: Algebra, D: RootDecomposition):
    """Check ``x^[p] in ker(alpha)`` for all F_p-points ``x`` of every root space.

    Returns ``(True, None)`` or ``(False, (functional, x))``.
    """
    gt, _ = is_generically_toral(A)
    if not gt:
        raise PreconditionError("algebra is not generically toral")
    T = D.torus
    for r in D.roots:
        pts = r.space.points()
        vals = A.pmap(pts)
        inside = T.space.contains_rows(vals)
        for x, y, ok in zip(pts, vals, inside):
            if not ok or D.evaluate(r.functional, y) != 0:
                return False, (r.functional, x)
    return True, None


def one_section(A: Algebra, D: RootDecomposition, functional) -> Subspace:
    """``cartan + sum of g_{i alpha}`` for i in F_p^x."""
    alpha = D.root(functional).functional
    S = D.cartan
    for i in range(1, A.p):
        S = S + D.weight_space(tuple(i * a % A.p for a in alpha))
    return S


def is_solvable_root(A: Algebra, D: RootDecomposition, functional) -> bool:
    return is_solvable(A, one_section(A, D, functional))


def _neg(functional, p):
    return tuple((-a) % p for a in functional)


def freely_generated_certificate(A: Algebra):
    """First ``(torus, roots S)`` in canonical order meeting conditions (a)-(c).

    (a) ``[g_a, g_-a] != 0`` for a in S; (b) the torus is the direct sum of
    ``[g_a, g_-a]`` over the pairs ``{a, -a}`` met by S; (c) the root spaces of
    S generate the algebra.
    """
    gt, _ = is_generically_toral(A)
    if not gt:
        raise PreconditionError("algebra is not generically toral")
    p = A.p
    for T in maximal_tori(A):
        D = root_decomposition(A, T, check_maximal=False)
        functionals = [r.functional for r in D.roots]
        for size in range(1, len(functionals) + 1):
            for S in combinations(functionals, size):
                pair_spaces = {}
                ok = True
                for a in S:
                    na = _neg(a, p)
                    B = bracket_space(A, D.weight_space(a), D.weight_space(na))
                    if B.dim == 0:
                        ok = False
                        break
                    pair_spaces[min(a, na)] = B
                if not ok:
                    continue
                total = Subspace.zero(A.F, A.dim)
                dims = 0
                for B in pair_spaces.values():
                    total = total + B
                    dims += B.dim
                if total != T.space or dims != T.dim:
                    continue
                gens = np.concatenate([D.weight_space(a).basis for a in S])
                if subalgebra_generated(A, gens, restricted=False).dim == A.dim:
                    return T, list(S)
    return None


@dataclass
class InvariantProfile:
    dim: int
    p: int
    mu: int
    rk: int
    rk_exact: bool
    rho: int
    r_count: int
    r_t: int
    center_dim: int
    toral_radical_dim: int
    generically_toral: bool
    solvable: bool
    nilpotent: bool
    perfect: bool
    p_rank: int
    p_rank_ext: int
    p_rank_exhaustive: bool
    tori_exhaustive: bool

    def as_dict(self):
        return asdict(self)


def invariant_profile(A: Algebra, ext: int = 1) -> InvariantProfile:
    search = _search_tori(A)
    gt, T = is_generically_toral(A)
    D = root_decomposition(A, T or search.tori[0], check_maximal=False)
    rk_value, rk_exact = rk(A)
    rr = elementary_rank(A, ext)
    return InvariantProfile(
        dim=A.dim,
        p=A.p,
        mu=search.mu,
        rk=rk_value,
        rk_exact=rk_exact,
        rho=D.rho,
        r_count=D.r_count,
        r_t=D.r_t,
        center_dim=center(A).dim,
        toral_radical_dim=toral_radical(A).dim,
        generically_toral=gt,
        solvable=is_solvable(A),
        nilpotent=is_nilpotent(A),
        perfect=is_perfect(A),
        p_rank=rr.rank,
        p_rank_ext=ext,
        p_rank_exhaustive=rr.exhaustive,
        tori_exhaustive=search.exhaustive,
    )

