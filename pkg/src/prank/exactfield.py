"""Exact arithmetic in F_p and F_{p^k}, and dense linear algebra over them.

Field elements are encoded as integers in ``[0, q)``: the code of
``c_0 + c_1 T + ... + c_{k-1} T^{k-1}`` is ``sum(c_i * p**i)``.  Under this
encoding the prime field F_p sits inside every extension with identical
codes, so structure constants defined over F_p can be used unchanged.

Vectors and matrices are plain ``numpy`` integer arrays of codes; every
routine takes the :class:`FieldCtx` explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ContextError, DomainError, ShapeError

CODE = np.int64

# Largest extension field for which full operation tables are built.
MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# -- polynomials over F_p, little-endian coefficient lists -------------------

def _poly_divmod_rem(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for deg in range(len(a) - 1, dm - 1, -1):
        c = a[deg] * inv_lead % p
        if c:
            for i, mc in enumerate(m):
                a[deg - dm + i] = (a[deg - dm + i] - c * mc) % p
    return a[:dm] if dm else []


def _is_irreducible(poly, p):
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            rem = _poly_divmod_rem(poly, divisor, p)
            if not any(rem):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``k`` over F_p.

    Candidates are ordered by their non-leading coefficients read from
    degree ``k-1`` down to the constant term.
    """
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        poly = low + [1]
        if low[0] and _is_irreducible(poly, p):
            return tuple(poly)
    raise DomainError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldCtx:
    """The finite field F_{p^k} = F_p[T]/(modulus)."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p) or p < 3:
            raise DomainError(f"characteristic must be an odd prime, got {p}")
        if k < 1:
            raise DomainError(f"extension degree must be >= 1, got {k}")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {k}: {modulus}")
        if k > 1 and not _is_irreducible(list(modulus), p):
            raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        if k > 1 and self.q > MAX_TABLE_ORDER:
            raise CapacityError(
                f"F_{p}^{k} has {self.q} elements; tables are limited to {MAX_TABLE_ORDER}",
                bound=MAX_TABLE_ORDER,
            )
        self._build_tables()

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(p={self.p})"
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # -- tables -------------------------------------------------------------
    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        codes = np.arange(q, dtype=CODE)
        self.digits = np.stack([(codes // p**i) % p for i in range(k)], axis=1)
        self._weights = p ** np.arange(k, dtype=CODE)
        if k == 1:
            self._add = self._mul = None
            inv = np.zeros(p, dtype=CODE)
            for a in range(1, p):
                inv[a] = pow(a, p - 2, p)
            self._inv = inv
            self._frob = codes.copy()
            return
        d = self.digits
        add = (d[:, None, :] + d[None, :, :]) % p
        self._add = (add @ self._weights).reshape(-1)
        prod = np.zeros((q, q, 2 * k - 1), dtype=CODE)
        for i in range(k):
            for j in range(k):
                prod[:, :, i + j] += d[:, None, i] * d[None, :, j]
        prod %= p
        mod = np.array(self.modulus, dtype=CODE)
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[:, :, deg].copy()
            prod[:, :, deg - k : deg + 1] -= c[:, :, None] * mod[None, None, :]
            prod %= p
        self._mul = (prod[:, :, :k] @ self._weights).reshape(-1)
        neg = ((-d) % p) @ self._weights
        self._neg = neg
        mul2 = self._mul.reshape(q, q)
        inv = np.zeros(q, dtype=CODE)
        rows, cols = np.nonzero(mul2 == 1)
        inv[rows] = cols
        self._inv = inv
        frob = codes.copy()
        for _ in range(p - 1):
            frob = mul2[frob, codes]
        self._frob = frob

    # -- vectorised element operations on code arrays -----------------------
    def asarray(self, a):
        arr = np.asarray(a, dtype=CODE)
        if self.k == 1:
            return arr % self.p
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise DomainError("code out of range for this field")
        return arr

    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a) + b) % self.p
        return self._add[np.asarray(a) * self.q + b]

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return self._neg[a]

    def sub(self, a, b):
        if self.k == 1:
            return (np.asarray(a) - b) % self.p
        return self._add[np.asarray(a) * self.q + self._neg[b]]

    def mul(self, a, b):
        if self.k == 1:
            return (np.asarray(a) * b) % self.p
        return self._mul[np.asarray(a) * self.q + b]

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise DomainError("inverse of zero")
        return self._inv[a]

    def frobenius(self, a):
        return self._frob[np.asarray(a)]

    def power(self, a, n: int):
        a = np.asarray(a, dtype=CODE)
        result = np.ones_like(a)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def sum(self, a, axis=-1):
        a = np.asarray(a, dtype=CODE)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, 0)
        out = np.zeros(a.shape[1:], dtype=CODE)
        for part in a:
            out = self._add[out * self.q + part]
        return out

    def matmul(self, a, b):
        a = np.asarray(a, dtype=CODE)
        b = np.asarray(b, dtype=CODE)
        if a.shape[-1] != b.shape[-2 if b.ndim > 1 else 0]:
            raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
        if self.k == 1:
            return (a @ b) % self.p
        if b.ndim == 1:
            return self.sum(self.mul(a, b), axis=-1)
        out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=CODE)
        for j in range(a.shape[-1]):
            out = self._add[out * self.q + self._mul[a[..., j, None] * self.q + b[..., j, :]]]
        return out

    # -- scalars --------------------------------------------------------------
    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextError("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                raise DomainError("too many coefficients")
            return FieldElement(self, sum(c * self.p**i for i, c in enumerate(coeffs)))
        value = int(value)
        if self.k == 1:
            value %= self.p
        elif not 0 <= value < self.q:
            raise DomainError("code out of range for this field")
        return FieldElement(self, value)

    def gen(self) -> "FieldElement":
        """The class of T (equal to 0 + 1*T code ``p``); for k = 1 returns 1."""
        return FieldElement(self, self.p if self.k > 1 else 1)

    def elements(self):
        return np.arange(self.q, dtype=CODE)

    def prime_subfield_codes(self):
        return np.arange(self.p, dtype=CODE)


@lru_cache(maxsize=None)
def field(p: int, k: int = 1, modulus=None) -> FieldCtx:
    """Cached :class:`FieldCtx` constructor."""
    return FieldCtx(p, k, modulus)


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.ctx.digits[self.value])

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextError("operands belong to different fields")
            return other.value
        return self.ctx.element(other).value

    def __add__(self, other):
        return FieldElement(self.ctx, int(self.ctx.add(self.value, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, int(self.ctx.sub(self.value, self._other(other))))

    def __rsub__(self, other):
        return FieldElement(self.ctx, int(self.ctx.sub(self._other(other), self.value)))

    def __mul__(self, other):
        return FieldElement(self.ctx, int(self.ctx.mul(self.value, self._other(other))))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.ctx, int(self.ctx.neg(self.value)))

    def inv(self):
        return FieldElement(self.ctx, int(self.ctx.inv(self.value)))

    def __truediv__(self, other):
        return self * FieldElement(self.ctx, self._other(other)).inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return FieldElement(self.ctx, int(self.ctx.power(self.value, n)))

    def frobenius(self):
        return FieldElement(self.ctx, int(self.ctx.frobenius(self.value)))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.ctx.k == 1:
            return f"{self.value} (mod {self.ctx.p})"
        return f"{self.coeffs} in F_{self.ctx.p}^{self.ctx.k}"


def frobenius(a: FieldElement) -> FieldElement:
    return a.frobenius()


# -- dense linear algebra ----------------------------------------------------

def rref(F: FieldCtx, M):
    """Reduced row-echelon form.

    Returns ``(R, rank, pivots)`` where ``R`` has the shape of ``M``.
    """
    R = np.array(M, dtype=CODE, copy=True)
    if R.ndim != 2:
        raise ShapeError(f"rref expects a matrix, got shape {R.shape}")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        lead = R[r, c]
        if lead != 1:
            R[r] = F.mul(R[r], F.inv(lead))
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = F.sub(R[hit], F.mul(col[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(F: FieldCtx, M) -> int:
    M = np.asarray(M, dtype=CODE)
    if M.size == 0:
        return 0
    return rref(F, M)[1]


def kernel(F: FieldCtx, M) -> "Subspace":
    """Right null space ``{x : M x = 0}``."""
    M = np.asarray(M, dtype=CODE)
    if M.ndim != 2:
        raise ShapeError("kernel expects a matrix")
    cols = M.shape[1]
    if M.shape[0] == 0:
        return Subspace.full(F, cols)
    R, r, pivots = rref(F, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=CODE)
    for idx, f in enumerate(free):
        basis[idx, f] = 1
        for row, pc in enumerate(pivots):
            basis[idx, pc] = F.neg(R[row, f])
    return Subspace(F, cols, basis)


def solve(F: FieldCtx, M, v):
    """Some ``x`` with ``M x = v``, or ``None`` when the system is inconsistent."""
    M = np.asarray(M, dtype=CODE)
    v = np.asarray(v, dtype=CODE)
    if M.ndim != 2 or v.shape != (M.shape[0],):
        raise ShapeError(f"incompatible shapes {M.shape} and {v.shape}")
    aug = np.concatenate([M, v[:, None]], axis=1)
    R, r, pivots = rref(F, aug)
    cols = M.shape[1]
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=CODE)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, cols]
    return x


def inverse(F: FieldCtx, M):
    M = np.asarray(M, dtype=CODE)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    R, r, _ = rref(F, np.concatenate([M, np.eye(n, dtype=CODE)], axis=1))
    if r < n or not np.array_equal(R[:, :n], np.eye(n, dtype=CODE)):
        return None
    return R[:, n:]


def mat_power(F: FieldCtx, M, n: int):
    M = np.asarray(M, dtype=CODE)
    result = np.broadcast_to(np.eye(M.shape[-1], dtype=CODE), M.shape).copy()
    base = M
    while n:
        if n & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        n >>= 1
    return result


class Subspace:
    """A subspace of F^n stored by its reduced row-echelon basis.

    Equal subspaces have identical ``basis`` arrays, so equality and hashing
    compare those arrays directly.
    """

    __slots__ = ("F", "n", "basis", "pivots", "_key")

    def __init__(self, F: FieldCtx, n: int, vectors=None, *, _canonical=False):
        self.F = F
        self.n = n
        if vectors is None:
            vectors = np.zeros((0, n), dtype=CODE)
        vectors = np.asarray(vectors, dtype=CODE).reshape(-1, n)
        if _canonical:
            self.basis = vectors
            self.pivots = [int(np.flatnonzero(row)[0]) for row in vectors]
        elif vectors.shape[0] == 0:
            self.basis = vectors
            self.pivots = []
        else:
            R, r, pivots = rref(F, vectors)
            self.basis = R[:r]
            self.pivots = list(pivots)
        self.basis.setflags(write=False)
        self._key = None

    @classmethod
    def full(cls, F, n):
        return cls(F, n, np.eye(n, dtype=CODE), _canonical=True)

    @classmethod
    def zero(cls, F, n):
        return cls(F, n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    @property
    def key(self):
        if self._key is None:
            self._key = (self.n, self.basis.shape, self.basis.tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.F == other.F and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.dim, tuple(self.basis.reshape(-1).tolist()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, basis={self.basis.tolist()})"

    def _check(self, other):
        if self.F != other.F:
            raise ContextError("subspaces over different fields")
        if self.n != other.n:
            raise ShapeError(f"ambient dimensions differ: {self.n} vs {other.n}")

    def reduce(self, v):
        """Remainder of ``v`` (or rows of a batch) after clearing pivot columns."""
        v = np.array(v, dtype=CODE, copy=True)
        if self.dim == 0:
            return v
        coeffs = v[..., self.pivots]
        return self.F.sub(v, self.F.matmul(coeffs, self.basis))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=CODE)
        if v.shape[-1] != self.n:
            raise ShapeError("vector length does not match ambient dimension")
        return bool(not self.reduce(v).any())

    def contains_rows(self, vs):
        """Boolean mask: which rows of ``vs`` lie in the subspace."""
        return ~self.reduce(vs).any(axis=-1)

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return bool(self.contains_rows(other.basis).all()) if other.dim else True

    def coordinates(self, v):
        """Coefficients of ``v`` in the echelon basis; ``None`` if not contained."""
        v = np.asarray(v, dtype=CODE)
        if not self.contains(v):
            return None
        return v[..., self.pivots].copy()

    def annihilator(self) -> "Subspace":
        """``{y : <b, y> = 0 for all basis vectors b}``."""
        if self.dim == 0:
            return Subspace.full(self.F, self.n)
        return kernel(self.F, self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.F, self.n, np.concatenate([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.F, self.n)
        stacked = np.concatenate([self.annihilator().basis, other.annihilator().basis])
        if stacked.shape[0] == 0:
            return Subspace.full(self.F, self.n)
        return kernel(self.F, stacked)

    def complement_indices(self):
        """Coordinate indices spanning a complement (the non-pivot columns)."""
        piv = set(self.pivots)
        return [i for i in range(self.n) if i not in piv]

    def extend(self, vectors) -> "Subspace":
        vectors = np.asarray(vectors, dtype=CODE).reshape(-1, self.n)
        return Subspace(self.F, self.n, np.concatenate([self.basis, vectors]))

    def over(self, F: FieldCtx) -> "Subspace":
        """The same span viewed over an extension field sharing the prime."""
        if F.p != self.F.p:
            raise ContextError("fields of different characteristic")
        return Subspace(F, self.n, self.basis, _canonical=True)

    def points(self):
        """All vectors of the subspace, in lexicographic coefficient order."""
        coeffs = all_vectors(self.F, self.dim)
        if self.dim == 0:
            return np.zeros((1, self.n), dtype=CODE)
        return self.F.matmul(coeffs, self.basis)

    def line_points(self):
        """One representative per 1-dim subspace: coefficient vectors normalised
        so the first nonzero coefficient is 1."""
        if self.dim == 0:
            return np.zeros((0, self.n), dtype=CODE)
        return self.F.matmul(line_representatives(self.F, self.dim), self.basis)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A + B


def intersect(A: Subspace, B: Subspace) -> Subspace:
    return A.intersect(B)


def span(F: FieldCtx, vectors, n=None) -> Subspace:
    vectors = np.asarray(vectors, dtype=CODE)
    if n is None:
        n = vectors.shape[-1]
    return Subspace(F, n, vectors.reshape(-1, n))


# -- enumeration -------------------------------------------------------------

def decode_indices(F: FieldCtx, idx, n: int):
    """Mixed-radix decoding: index ``i`` -> vector, first coordinate most significant."""
    idx = np.asarray(idx, dtype=CODE)
    out = np.empty(idx.shape + (n,), dtype=CODE)
    rest = idx.copy()
    for j in range(n - 1, -1, -1):
        out[..., j] = rest % F.q
        rest //= F.q
    return out


def all_vectors(F: FieldCtx, n: int):
    """All ``q**n`` vectors of F^n in lexicographic order."""
    return decode_indices(F, np.arange(F.q**n, dtype=CODE), n)


def iter_vectors(F: FieldCtx, n: int, chunk: int = 1 << 18):
    total = F.q**n
    for start in range(0, total, chunk):
        yield decode_indices(F, np.arange(start, min(total, start + chunk), dtype=CODE), n)


def iter_line_representatives(F: FieldCtx, n: int, chunk: int = 1 << 18):
    """Vectors whose first nonzero coordinate is 1, in lexicographic order."""
    for lead in range(n - 1, -1, -1):
        tail = n - lead - 1
        total = F.q**tail
        for start in range(0, total, chunk):
            t = decode_indices(F, np.arange(start, min(total, start + chunk), dtype=CODE), tail)
            block = np.zeros((t.shape[0], n), dtype=CODE)
            block[:, lead] = 1
            block[:, lead + 1 :] = t
            yield block


def line_representatives(F: FieldCtx, n: int):
    blocks = list(iter_line_representatives(F, n))
    if not blocks:
        return np.zeros((0, n), dtype=CODE)
    return np.concatenate(blocks)


def normalize_lines(F: FieldCtx, vs):
    """Scale each nonzero row so its first nonzero entry is 1."""
    vs = np.asarray(vs, dtype=CODE)
    nz = vs != 0
    first = nz.argmax(axis=1)
    lead = vs[np.arange(vs.shape[0]), first]
    lead = np.where(lead == 0, 1, lead)
    return F.mul(vs, F.inv(lead)[:, None])


def lex_sort_rows(vs):
    vs = np.asarray(vs)
    if vs.shape[0] == 0:
        return vs
    order = np.lexsort(vs.T[::-1])
    return vs[order]
