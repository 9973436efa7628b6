"""Chevalley-Eilenberg cochains with trivial coefficients in degrees <= 3.

An n-cochain is stored as its values on increasing basis tuples
``i_1 < ... < i_n`` listed in lexicographic order.  Differentials::

    (d f)(x, y)       = -f([x, y])
    (d l)(x, y, z)    = -l([x, y], z) + l([x, z], y) - l([y, z], x)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError
from .exactfield import CODE, Subspace, kernel, rank, solve, span
from .liecore import Algebra

MAX_COHOMOLOGY_DIM = 30


def index_tuples(d: int, n: int):
    return list(combinations(range(d), n))


@dataclass
class Cochain:
    algebra: Algebra
    degree: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=CODE) % self.algebra.p

    @classmethod
    def from_matrix(cls, A: Algebra, form):
        """Degree-2 cochain from an alternating matrix ``form[i, j] = λ(b_i, b_j)``."""
        form = np.asarray(form, dtype=CODE)
        return cls(A, 2, np.array([form[i, j] for i, j in index_tuples(A.dim, 2)], dtype=CODE))

    @classmethod
    def from_pairs(cls, A: Algebra, pairs):
        d = A.dim
        form = np.zeros((d, d), dtype=CODE)
        for (a, b), val in pairs.items():
            i = a if isinstance(a, int) else A.index(a)
            j = b if isinstance(b, int) else A.index(b)
            form[i, j] = val
            form[j, i] = -val
        return cls.from_matrix(A, form % A.p)

    def as_matrix(self):
        if self.degree != 2:
            raise DomainError("only degree-2 cochains have a matrix form")
        d = self.algebra.dim
        M = np.zeros((d, d), dtype=CODE)
        for v, (i, j) in zip(self.values, index_tuples(d, 2)):
            M[i, j] = v
            M[j, i] = -v
        return M % self.algebra.p

    def __call__(self, *idx):
        """Value on basis indices, alternating in its arguments."""
        if len(set(idx)) < len(idx):
            return 0
        order = sorted(range(len(idx)), key=lambda t: idx[t])
        sign = _perm_sign(order)
        pos = index_tuples(self.algebra.dim, self.degree).index(tuple(sorted(idx)))
        return int(sign * self.values[pos]) % self.algebra.p


def _perm_sign(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _check_size(A):
    if A.dim > MAX_COHOMOLOGY_DIM:
        raise CapacityError(
            f"cochain spaces of a {A.dim}-dimensional algebra exceed the limit dim <= {MAX_COHOMOLOGY_DIM}",
            bound=MAX_COHOMOLOGY_DIM,
        )


def differential_matrix(A: Algebra, n: int):
    """Matrix of ``d : C^n -> C^(n+1)`` acting on value vectors (n = 1 or 2)."""
    _check_size(A)
    d, p, c = A.dim, A.p, A.structure
    if n == 1:
        rows = index_tuples(d, 2)
        M = np.zeros((len(rows), d), dtype=CODE)
        for r, (i, j) in enumerate(rows):
            M[r] = -c[i, j]
        return M % p
    if n == 2:
        cols = index_tuples(d, 2)
        col_index = {t: k for k, t in enumerate(cols)}
        rows = index_tuples(d, 3)
        M = np.zeros((len(rows), len(cols)), dtype=CODE)

        def add_term(r, vec, other, sign):
            # sign * λ(vec, b_other), vec given in coordinates
            for m in np.flatnonzero(vec):
                if m == other:
                    continue
                if m < other:
                    M[r, col_index[(m, other)]] += sign * vec[m]
                else:
                    M[r, col_index[(other, m)]] -= sign * vec[m]

        for r, (i, j, l) in enumerate(rows):
            add_term(r, c[i, j], l, -1)
            add_term(r, c[i, l], j, +1)
            add_term(r, c[j, l], i, -1)
        return M % p
    raise DomainError(f"differential implemented for degrees 1 and 2, got {n}")


def differential(cochain: Cochain) -> Cochain:
    M = differential_matrix(cochain.algebra, cochain.degree)
    return Cochain(cochain.algebra, cochain.degree + 1, cochain.algebra.F.matmul(M, cochain.values))


def is_cocycle(cochain: Cochain):
    """``(True, None)`` if ``d(cochain) = 0``, else ``(False, first failing index tuple)``."""
    dc = differential(cochain)
    nz = np.flatnonzero(dc.values)
    if nz.size == 0:
        return True, None
    return False, index_tuples(cochain.algebra.dim, cochain.degree + 1)[nz[0]]


def class_is_nonzero(cochain: Cochain) -> bool:
    """Whether a 2-cocycle is not a coboundary."""
    D1 = differential_matrix(cochain.algebra, 1)
    return solve(cochain.algebra.F, D1, cochain.values) is None


@dataclass
class CohomologyReport:
    dim_c1: int
    dim_c2: int
    dim_c3: int
    rank_d1: int
    rank_d2: int
    h2_basis: np.ndarray  # canonical representatives, rows are cochain value vectors

    @property
    def z1(self):
        return self.dim_c1 - self.rank_d1

    @property
    def z2(self):
        return self.dim_c2 - self.rank_d2

    @property
    def b2(self):
        return self.rank_d1

    @property
    def h1(self):
        return self.z1

    @property
    def h2(self):
        return self.z2 - self.b2

    def as_dict(self):
        return {
            "h1": self.h1,
            "h2": self.h2,
            "z2": self.z2,
            "b2": self.b2,
            "h2_representatives": self.h2_basis.tolist(),
        }


def cohomology(A: Algebra) -> CohomologyReport:
    F, d = A.F, A.dim
    D1 = differential_matrix(A, 1)
    D2 = differential_matrix(A, 2)
    r1 = rank(F, D1)
    r2 = rank(F, D2) if D2.size else 0
    n2 = D1.shape[0]
    Z2 = kernel(F, D2) if D2.shape[0] else Subspace.full(F, n2)
    B2 = span(F, D1.T, n2) if D1.size else Subspace.zero(F, n2)
    reps = []
    cur = B2
    for z in Z2.basis:
        bigger = cur.extend(z)
        if bigger.dim > cur.dim:
            reps.append(z)
            cur = bigger
    h2_basis = np.array(reps, dtype=CODE).reshape(-1, n2)
    return CohomologyReport(d, n2, D2.shape[0], r1, r2, h2_basis)


def h2_dim(A: Algebra) -> CohomologyReport:
    return cohomology(A)


def derivations(A: Algebra) -> Subspace:
    """All derivations, as a subspace of flattened ``dim x dim`` matrices (row-major)."""
    F, d, c, p = A.F, A.dim, A.structure, A.p
    pairs = index_tuples(d, 2)
    # unknown D[r, s] at flat index r*d + s; D e_s is column s
    M = np.zeros((len(pairs) * d, d * d), dtype=CODE)
    for pi, (i, j) in enumerate(pairs):
        for m in range(d):
            row = pi * d + m
            # D[b_i, b_j]_m = sum_k c[i,j,k] D[m,k]
            for k in np.flatnonzero(c[i, j]):
                M[row, m * d + k] += c[i, j, k]
            # - [D b_i, b_j]_m = - sum_s D[s,i] c[s,j,m]
            for s in np.flatnonzero(c[:, j, m]):
                M[row, s * d + i] -= c[s, j, m]
            # - [b_i, D b_j]_m = - sum_s D[s,j] c[i,s,m]
            for s in np.flatnonzero(c[i, :, m]):
                M[row, s * d + j] -= c[i, s, m]
    M %= p
    if M.shape[0] == 0:
        return Subspace.full(F, d * d)
    return kernel(F, M)


def inner_derivations(A: Algebra) -> Subspace:
    return span(A.F, A.ad_basis().reshape(A.dim, -1), A.dim * A.dim)


def outer_dim(A: Algebra) -> int:
    return derivations(A).dim - inner_derivations(A).dim


def is_derivation(A: Algebra, D) -> bool:
    D = np.asarray(D, dtype=CODE).reshape(-1)
    return derivations(A).contains(D)
