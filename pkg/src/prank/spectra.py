"""Rational points of the nullcone and of the varieties of elementary subalgebras.

All searches run over F_{p^k}-points for a chosen extension degree ``k``.  The
number of vectors touched is checked against an enumeration budget
(``DEFAULT_BUDGET``, overridable through the ``PRANK_BUDGET`` environment
variable).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CapacityError, PreconditionError
from .exactfield import CODE, Subspace, field, iter_line_representatives, lex_sort_rows
from .liecore import Algebra, centralizer, centralizer_of_set

DEFAULT_BUDGET = 10**8
MAX_WITNESSES = 10**5


def budget() -> int:
    raw = os.environ.get("PRANK_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise CapacityError(f"PRANK_BUDGET must be a decimal integer, got {raw!r}") from exc


def check_budget(count: int, what: str):
    b = budget()
    if count > b:
        raise CapacityError(f"{what} needs {count} enumeration steps, over the budget {b}", bound=b)


@dataclass
class NullconePoints:
    """Nonzero F_{p^k}-points with vanishing p-map, stored one per line.

    ``lines`` holds normalised representatives (first nonzero coordinate 1)
    in lexicographic order; ``points`` expands them by all nonzero scalars.
    """

    algebra: Algebra
    k: int
    lines: np.ndarray

    @property
    def F(self):
        return field(self.algebra.p, self.k)

    @property
    def count_nonzero(self) -> int:
        return len(self.lines) * (self.F.q - 1)

    @property
    def count_with_zero(self) -> int:
        return self.count_nonzero + 1

    def points(self, include_zero=False):
        F = self.F
        scal = np.arange(1, F.q, dtype=CODE)
        pts = F.mul(self.lines[:, None, :], scal[None, :, None]).reshape(-1, self.algebra.dim)
        if include_zero:
            pts = np.concatenate([np.zeros((1, self.algebra.dim), dtype=CODE), pts])
        return lex_sort_rows(pts)


def nullcone(A: Algebra, k: int = 1) -> NullconePoints:
    F = field(A.p, k)
    check_budget(F.q**A.dim, f"nullcone of {A.name or 'algebra'} over F_{F.q}")
    found = []
    for block in iter_line_representatives(F, A.dim):
        vals = A.pmap_batch(block, F)
        found.append(block[~vals.any(axis=1)])
    lines = np.concatenate(found) if found else np.zeros((0, A.dim), dtype=CODE)
    return NullconePoints(A, k, lex_sort_rows(lines))


# -- elementary subalgebras -----------------------------------------------------

@dataclass(frozen=True)
class ElementaryWitness:
    algebra: Algebra
    r: int
    space: Subspace

    def check(self) -> bool:
        """Re-verify: abelian basis, p-map zero on the basis, correct dimension."""
        A, S = self.algebra, self.space
        if S.dim != self.r:
            return False
        B = S.basis
        if B.shape[0] == 0:
            return True
        if A.bracket(B[:, None, :], B[None, :, :], S.F).any():
            return False
        return not A.pmap(B, S.F).any()


@dataclass
class RankResult:
    rank: int
    witness: ElementaryWitness | None
    exhaustive: bool
    k: int
    levels: dict = dc_field(default_factory=dict)  # r -> number of witnesses found


def _lines_in(space: Subspace, lines: np.ndarray):
    return lines[space.contains_rows(lines)] if len(lines) else lines


def _extend_level(A, F, level, lines, cap):
    """All (r+1)-dim elementary subspaces containing some member of ``level``."""
    check_budget(len(level) * len(lines), f"elementary subspace search in {A.name or 'algebra'}")
    out = {}
    for W in level:
        C = centralizer_of_set(A, W, F)
        cand = _lines_in(C, lines)
        if len(cand) == 0:
            continue
        cand = cand[~W.contains_rows(cand)]
        covered = np.zeros(len(cand), dtype=bool)
        for i in range(len(cand)):
            if covered[i]:
                continue
            bigger = W.extend(cand[i])
            covered |= bigger.contains_rows(cand)
            out.setdefault(bigger.key, bigger)
            if len(out) > cap:
                raise CapacityError(f"more than {cap} elementary subspaces at one level", bound=cap)
    return sorted(out.values(), key=Subspace.sort_key)


def elementary_levels(A: Algebra, k: int = 1, max_r: int | None = None, cap: int = MAX_WITNESSES):
    """Lists of elementary subspaces of dimension 1, 2, ... until empty (or ``max_r``)."""
    F = field(A.p, k)
    nc = nullcone(A, k)
    lines = nc.lines
    levels = [[Subspace(F, A.dim, l[None, :], _canonical=True) for l in lines]]
    while levels[-1] and (max_r is None or len(levels) < max_r):
        nxt = _extend_level(A, F, levels[-1], lines, cap)
        if not nxt:
            break
        levels.append(nxt)
    return levels


def elementary_witnesses(A: Algebra, r: int, k: int = 1):
    """All r-dimensional elementary abelian subalgebras over F_{p^k}, canonically sorted."""
    F = field(A.p, k)
    if r == 0:
        return [ElementaryWitness(A, 0, Subspace.zero(F, A.dim))]
    levels = elementary_levels(A, k, max_r=r)
    if len(levels) < r:
        return []
    return [ElementaryWitness(A, r, S) for S in levels[r - 1]]


def elementary_rank(A: Algebra, k: int = 1) -> RankResult:
    F = field(A.p, k)
    levels = elementary_levels(A, k)
    counts = {i + 1: len(lv) for i, lv in enumerate(levels) if lv}
    if not levels or not levels[0]:
        return RankResult(0, ElementaryWitness(A, 0, Subspace.zero(F, A.dim)), True, k, counts)
    r = len(levels)
    return RankResult(r, ElementaryWitness(A, r, levels[-1][0]), True, k, counts)


def p_rank(A: Algebra, k: int = 1) -> int:
    return elementary_rank(A, k).rank


# -- saturation -----------------------------------------------------------------

def is_two_saturated(A: Algebra, k: int = 1):
    """``(saturated, counterexample_line, k)``: every nonzero nullcone point must
    lie in a 2-dimensional elementary subalgebra."""
    F = field(A.p, k)
    nc = nullcone(A, k)
    lines = nc.lines
    # charged per tested line, since a counterexample stops the scan early
    steps = 0
    for v in lines:
        steps += len(lines)
        check_budget(steps, f"saturation check in {A.name or 'algebra'}")
        C = centralizer(A, v, F)
        cand = _lines_in(C, lines)
        line = Subspace(F, A.dim, v[None, :], _canonical=True)
        if len(cand) == 0 or line.contains_rows(cand).all():
            return False, v, k
    return True, None, k


def saturation_bound(dim: int, mu: int, rk: int, center: int, p: int, generically_toral: bool = False) -> bool:
    """Sufficient dimension inequality for 2-saturation.

    Always tests ``dim > p (mu + rk)``; for generically toral algebras also
    ``dim > p (2 mu - 1 - center)``.
    """
    if dim > p * (mu + rk):
        return True
    return bool(generically_toral and dim > p * (2 * mu - 1 - center))


# -- commuting pairs ------------------------------------------------------------

def find_commuting_pair(A: Algebra, U: Subspace, V: Subspace, max_ext: int = 1):
    """Nonzero ``u in U``, ``v in V`` with ``[u, v] = 0``, trying F_{p^k} for k = 1..max_ext.

    Returns ``(u, v, k)`` or ``None``.
    """
    if U.dim != 2:
        raise PreconditionError(f"U must be 2-dimensional, got {U.dim}")
    if V.dim == 0:
        return None
    for k in range(1, max_ext + 1):
        F = field(A.p, k)
        Uk, Vk = U.over(F), V.over(F)
        b1, b2 = Uk.basis
        candidates = [F.add(b1, F.mul(c, b2)) for c in range(F.q)] + [b2]
        for u in candidates:
            common = centralizer(A, u, F).intersect(Vk)
            if common.dim:
                return u, common.basis[0], k
    return None
