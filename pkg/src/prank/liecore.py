"""Restricted Lie algebras given by structure constants and basis p-map values.

An :class:`Algebra` is defined over F_p.  Every operation that touches
elements accepts an optional field context ``F`` (an extension of F_p) so
the same algebra can be evaluated at F_{p^k}-points; element coordinates are
then arrays of field codes as in :mod:`prank.exactfield`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from .errors import ContextError, PreconditionError, ShapeError
from .exactfield import CODE, FieldCtx, Subspace, field, kernel, mat_power, span


class Algebra:
    """A finite-dimensional restricted Lie algebra over F_p.

    Parameters
    ----------
    p : int
        Characteristic.
    names : sequence of str
        Basis labels.
    structure : array (dim, dim, dim)
        ``structure[i, j]`` holds the coordinates of ``[b_i, b_j]``.
    pmap_basis : array (dim, dim)
        Row ``i`` holds the coordinates of ``b_i^[p]``.
    """

    def __init__(self, p, names, structure, pmap_basis, name="", modulus_hint=None):
        self.F = field(p)
        self.p = p
        self.names = tuple(str(n) for n in names)
        self.dim = len(self.names)
        d = self.dim
        self.structure = np.asarray(structure, dtype=CODE).reshape(d, d, d) % p
        self.pmap_basis = np.asarray(pmap_basis, dtype=CODE).reshape(d, d) % p
        self.structure.setflags(write=False)
        self.pmap_basis.setflags(write=False)
        self.name = name
        self.ext_hint = modulus_hint
        self._cache = {}

    # -- construction helpers ----------------------------------------------
    @classmethod
    def from_table(cls, p, names, brackets, pmap, name=""):
        """Build from readable tables.

        ``brackets`` maps pairs of basis names (or indices) to a coefficient
        dict ``{name: coeff}``; the opposite pair is filled by antisymmetry.
        ``pmap`` maps basis names to coefficient dicts; omitted entries are 0.
        """
        names = list(names)
        d = len(names)
        index = {n: i for i, n in enumerate(names)}

        def idx(key):
            return key if isinstance(key, (int, np.integer)) else index[key]

        def vec(coeffs):
            v = np.zeros(d, dtype=CODE)
            if isinstance(coeffs, dict):
                for key, c in coeffs.items():
                    v[idx(key)] = (v[idx(key)] + c) % p
            else:
                v[:] = np.asarray(coeffs) % p
            return v

        structure = np.zeros((d, d, d), dtype=CODE)
        for (a, b), coeffs in brackets.items():
            i, j = idx(a), idx(b)
            v = vec(coeffs)
            structure[i, j] = v
            structure[j, i] = (-v) % p
        pm = np.zeros((d, d), dtype=CODE)
        for a, coeffs in pmap.items():
            pm[idx(a)] = vec(coeffs)
        return cls(p, names, structure, pm, name=name)

    def __repr__(self):
        label = self.name or "Algebra"
        return f"<{label} p={self.p} dim={self.dim} basis={list(self.names)}>"

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.p == other.p
            and self.names == other.names
            and np.array_equal(self.structure, other.structure)
            and np.array_equal(self.pmap_basis, other.pmap_basis)
        )

    def __hash__(self):
        return hash((self.p, self.names, self.structure.tobytes(), self.pmap_basis.tobytes()))

    def same_tables(self, other) -> bool:
        return (
            self.p == other.p
            and np.array_equal(self.structure, other.structure)
            and np.array_equal(self.pmap_basis, other.pmap_basis)
        )

    def index(self, name) -> int:
        return self.names.index(name)

    def vec(self, coeffs=None, F=None, **kw):
        """Coordinate vector from a ``{name: coeff}`` dict or keyword arguments."""
        F = F or self.F
        v = np.zeros(self.dim, dtype=CODE)
        items = dict(coeffs or {}, **kw)
        for key, c in items.items():
            i = key if isinstance(key, int) else self.index(key)
            v[i] = F.add(v[i], F.asarray(int(c) if not isinstance(c, np.ndarray) else c))
        return v

    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=CODE)
        v[i if isinstance(i, int) else self.index(i)] = 1
        return v

    def element(self, coeffs=None, F=None, **kw) -> "Element":
        F = F or self.F
        return Element(self, self.vec(coeffs, F=F, **kw), F)

    def full_space(self, F=None) -> Subspace:
        return Subspace.full(F or self.F, self.dim)

    def zero_space(self, F=None) -> Subspace:
        return Subspace.zero(F or self.F, self.dim)

    def span(self, vectors, F=None) -> Subspace:
        return span(F or self.F, np.asarray(vectors, dtype=CODE).reshape(-1, self.dim), self.dim)

    def _field(self, F):
        if F is None:
            return self.F
        if F.p != self.p:
            raise ContextError(f"field of characteristic {F.p} used with algebra over F_{self.p}")
        return F

    # -- bracket and adjoint -------------------------------------------------
    def bracket(self, x, y, F=None):
        """``[x, y]``; ``x`` and ``y`` may be batches of shape ``(..., dim)``."""
        F = self._field(F)
        x = _coords(self, x)
        y = _coords(self, y)
        if x.shape[-1] != self.dim or y.shape[-1] != self.dim:
            raise ShapeError("coordinate vectors must have length dim")
        d = self.dim
        lead = np.broadcast_shapes(x.shape[:-1], y.shape[:-1])
        outer = F.mul(x[..., :, None], y[..., None, :]).reshape(lead + (d * d,))
        return F.matmul(outer, self.structure.reshape(d * d, d))

    def ad(self, x, F=None):
        """Matrix of ``ad x`` acting on column vectors: ``ad(x) @ y = [x, y]``."""
        F = self._field(F)
        x = _coords(self, x)
        d = self.dim
        # M[j, k] = sum_i x_i c[i, j, k]
        M = F.matmul(x, self.structure.reshape(d, d * d)).reshape(x.shape[:-1] + (d, d))
        return np.swapaxes(M, -1, -2)

    def ad_basis(self):
        """Stack of ``ad(b_i)`` over F_p, shape ``(dim, dim, dim)``."""
        if "ad_basis" not in self._cache:
            self._cache["ad_basis"] = np.swapaxes(self.structure, 1, 2).copy()
        return self._cache["ad_basis"]

    # -- p-map -----------------------------------------------------------------
    def pmap(self, x, F=None):
        """``x^[p]`` by Jacobson's formula, summing over basis components in order."""
        F = self._field(F)
        x = np.asarray(_coords(self, x), dtype=CODE)
        if x.ndim > 1:
            return self.pmap_batch(x, F)
        p = self.p
        acc = None
        acc_p = np.zeros(self.dim, dtype=CODE)
        for i in np.flatnonzero(x):
            lam = x[i]
            b = np.zeros(self.dim, dtype=CODE)
            b[i] = lam
            b_p = F.mul(F.power(lam, p), self.pmap_basis[i])
            if acc is None:
                acc, acc_p = b, b_p
                continue
            acc_p = F.add(F.add(acc_p, b_p), _jacobson_correction(self, acc, b, F))
            acc = F.add(acc, b)
        return acc_p

    def pmap_polynomial(self):
        """The p-map as a homogeneous degree-p polynomial map with F_p coefficients.

        Returns ``(monomials, coefficients)``: an int array of exponent vectors of
        shape ``(M, dim)`` and the matching coefficient vectors ``(M, dim)``.
        """
        if "pmap_poly" not in self._cache:
            self._cache["pmap_poly"] = _compile_pmap(self)
        return self._cache["pmap_poly"]

    def pmap_batch(self, X, F=None):
        """Evaluate the p-map on every row of ``X``."""
        F = self._field(F)
        X = np.asarray(X, dtype=CODE)
        flat = X.reshape(-1, self.dim)
        monos, coeffs = self.pmap_polynomial()
        out = np.zeros(flat.shape, dtype=CODE)
        if len(monos) == 0 or flat.shape[0] == 0:
            return out.reshape(X.shape)
        powers = [np.ones_like(flat), flat]
        for _ in range(self.p - 1):
            powers.append(F.mul(powers[-1], flat))
        for mono, coeff in zip(monos, coeffs):
            val = None
            for var in np.flatnonzero(mono):
                term = powers[mono[var]][:, var]
                val = term if val is None else F.mul(val, term)
            nz = np.flatnonzero(coeff)
            out[:, nz] = F.add(out[:, nz], F.mul(val[:, None], coeff[None, nz]))
        return out.reshape(X.shape)

    def pmap_power(self, x, n, F=None):
        for _ in range(n):
            x = self.pmap(x, F)
        return x


@dataclass(frozen=True, eq=False)
class Element:
    """An element of an algebra, possibly with coefficients in an extension field."""

    algebra: Algebra
    coords: np.ndarray
    F: FieldCtx = dc_field(default=None)

    def __post_init__(self):
        if self.F is None:
            object.__setattr__(self, "F", self.algebra.F)
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=CODE))

    def _same(self, other):
        if not isinstance(other, Element):
            return np.asarray(other, dtype=CODE)
        if other.algebra is not self.algebra or other.F != self.F:
            raise ContextError("elements of different algebras or fields")
        return other.coords

    def __add__(self, other):
        return Element(self.algebra, self.F.add(self.coords, self._same(other)), self.F)

    def __sub__(self, other):
        return Element(self.algebra, self.F.sub(self.coords, self._same(other)), self.F)

    def __neg__(self):
        return Element(self.algebra, self.F.neg(self.coords), self.F)

    def __rmul__(self, scalar):
        return Element(self.algebra, self.F.mul(self.coords, int(scalar)), self.F)

    def __eq__(self, other):
        return np.array_equal(self.coords, self._same(other))

    def __hash__(self):
        return hash(self.coords.tobytes())

    def bracket(self, other):
        return Element(self.algebra, self.algebra.bracket(self.coords, self._same(other), self.F), self.F)

    def pmap(self):
        return Element(self.algebra, self.algebra.pmap(self.coords, self.F), self.F)

    def is_zero(self):
        return not self.coords.any()

    def __repr__(self):
        terms = [f"{int(c)}*{n}" for c, n in zip(self.coords, self.algebra.names) if c]
        return " + ".join(terms) if terms else "0"


def _coords(A: Algebra, x):
    if isinstance(x, Element):
        if x.algebra is not A and not x.algebra.same_tables(A):
            raise ContextError("element belongs to a different algebra")
        return x.coords
    return np.asarray(x, dtype=CODE)


def bracket(x: Element, y: Element) -> Element:
    return x.bracket(y)


def ad(x: Element):
    return x.algebra.ad(x.coords, x.F)


def pmap(x: Element) -> Element:
    return x.pmap()


# -- Jacobson's formula ------------------------------------------------------

def _jacobson_correction(A, a, b, F):
    """``sum_i s_i(a, b)`` where ``i s_i`` is the T^(i-1) coefficient of ad(Ta+b)^(p-1)(a)."""
    p = A.p
    layers = [a]
    for _ in range(p - 1):
        nxt = [None] * (len(layers) + 1)
        for deg, v in enumerate(layers):
            bv = A.bracket(b, v, F)
            av = A.bracket(a, v, F)
            nxt[deg] = bv if nxt[deg] is None else F.add(nxt[deg], bv)
            nxt[deg + 1] = av
        layers = nxt
    total = np.zeros(A.dim, dtype=CODE)
    for i in range(1, p):
        if i - 1 < len(layers) and layers[i - 1] is not None:
            total = F.add(total, F.mul(layers[i - 1], pow(i, p - 2, p)))
    return total


class _PolyVec:
    """Vector-valued polynomial over F_p: ``{exponent tuple: coefficient vector}``."""

    __slots__ = ("terms", "p", "d")

    def __init__(self, p, d, terms=None):
        self.p = p
        self.d = d
        self.terms = terms if terms is not None else {}

    def add(self, other, scale=1):
        out = dict(self.terms)
        for mono, v in other.terms.items():
            w = (out.get(mono, 0) + scale * v) % self.p
            if np.any(w):
                out[mono] = w
            else:
                out.pop(mono, None)
        return _PolyVec(self.p, self.d, out)

    def bracket(self, other, structure):
        d = self.d
        flat = structure.reshape(d, d * d)
        acc = defaultdict(lambda: np.zeros(d, dtype=CODE))
        for m1, v1 in self.terms.items():
            left = (v1 @ flat).reshape(d, d)  # left[j, k] = sum_i v1_i c[i, j, k]
            for m2, v2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                acc[mono] = (acc[mono] + v2 @ left) % self.p
        return _PolyVec(self.p, d, {m: v for m, v in acc.items() if np.any(v)})


def _compile_pmap(A: Algebra):
    p, d = A.p, A.dim
    unit = np.eye(d, dtype=CODE)

    def mono(i, power=1):
        e = [0] * (d + 1)
        e[i] = power
        return tuple(e)

    # The final exponent slot tracks the formal variable T of Jacobson's formula.
    total = _PolyVec(p, d)
    acc = None
    for j in range(d):
        b = _PolyVec(p, d, {mono(j)[:d] + (0,): unit[j]})
        if np.any(A.pmap_basis[j]):
            total = total.add(_PolyVec(p, d, {mono(j, p)[:d] + (0,): A.pmap_basis[j].copy()}))
        if acc is None:
            acc = b
            continue
        # ad(T a + b) applied p-1 times to a, T recorded in the last slot
        ta = _PolyVec(p, d, {m[:d] + (m[d] + 1,): v for m, v in acc.terms.items()})
        gen = ta.add(b)
        v = acc
        for _ in range(p - 1):
            v = gen.bracket(v, A.structure)
        for m, vec in v.terms.items():
            i = m[d] + 1
            if i < p:
                key = m[:d] + (0,)
                scaled = _PolyVec(p, d, {key: vec * pow(i, p - 2, p) % p})
                total = total.add(scaled)
        acc = acc.add(b)
    items = sorted((m[:d], v) for m, v in total.terms.items())
    monos = np.array([m for m, _ in items], dtype=CODE).reshape(-1, d)
    coeffs = np.array([v for _, v in items], dtype=CODE).reshape(-1, d)
    return monos, coeffs


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    antisymmetry: list = dc_field(default_factory=list)
    jacobi: list = dc_field(default_factory=list)
    restricted: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.antisymmetry or self.jacobi or self.restricted)

    def __bool__(self):
        return self.ok

    def messages(self, names=None):
        def nm(i):
            return names[i] if names else str(i)

        out = [f"antisymmetry fails at ({nm(i)}, {nm(j)})" for i, j in self.antisymmetry]
        out += [f"Jacobi identity fails on ({nm(i)}, {nm(j)}, {nm(k)})" for i, j, k in self.jacobi]
        out += [f"ad({nm(i)}^[p]) != ad({nm(i)})^p" for i in self.restricted]
        return out


def validate(A: Algebra) -> ValidationReport:
    report = ValidationReport()
    F, d, c = A.F, A.dim, A.structure
    for i in range(d):
        for j in range(i, d):
            if np.any(F.add(c[i, j], c[j, i])):
                report.antisymmetry.append((i, j))
    adb = A.ad_basis()
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                t1 = adb[i] @ c[j, k]
                t2 = adb[j] @ c[k, i]
                t3 = adb[k] @ c[i, j]
                if np.any((t1 + t2 + t3) % A.p):
                    report.jacobi.append((i, j, k))
    for i in range(d):
        lhs = A.ad(A.pmap_basis[i])
        rhs = mat_power(F, adb[i], A.p)
        if not np.array_equal(lhs, rhs):
            report.restricted.append(i)
    return report


# -- subspaces attached to the algebra ---------------------------------------

def center(A: Algebra, F=None) -> Subspace:
    F = A._field(F)
    return kernel(F, A.ad_basis().reshape(-1, A.dim))


def centralizer(A: Algebra, x, F=None) -> Subspace:
    F = A._field(F)
    return kernel(F, A.ad(_coords(A, x), F))


def centralizer_of_set(A: Algebra, S, F=None) -> Subspace:
    """Common centralizer of a subspace (or of the rows of an array)."""
    F = A._field(F)
    vectors = S.basis if isinstance(S, Subspace) else np.asarray(S, dtype=CODE).reshape(-1, A.dim)
    if vectors.shape[0] == 0:
        return Subspace.full(F, A.dim)
    return kernel(F, A.ad(vectors, F).reshape(-1, A.dim))


def normalizer(A: Algebra, S: Subspace, F=None) -> Subspace:
    """``{x : [x, S] in S}``."""
    F = A._field(F)
    ann = S.annihilator().basis
    if ann.shape[0] == 0:
        return Subspace.full(F, A.dim)
    # condition: <ann_r, [x, s_i]> = 0, linear in x: [x, s] = -ad(s) x
    rows = []
    for s in S.basis:
        rows.append(F.matmul(ann, A.ad(s, F)))
    return kernel(F, np.concatenate(rows)) if rows else Subspace.full(F, A.dim)


def bracket_space(A: Algebra, U: Subspace, V: Subspace, F=None) -> Subspace:
    F = A._field(F)
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(F, A.dim)
    prods = A.bracket(U.basis[:, None, :], V.basis[None, :, :], F).reshape(-1, A.dim)
    return span(F, prods, A.dim)


def is_abelian(A: Algebra) -> bool:
    return not A.structure.any()


def is_torus(A: Algebra) -> bool:
    """Abelian with bijective p-map."""
    from .exactfield import rank

    return is_abelian(A) and rank(A.F, A.pmap_basis) == A.dim


def is_subalgebra(A: Algebra, S: Subspace, F=None) -> bool:
    return S.contains_space(bracket_space(A, S, S, F))


def is_ideal(A: Algebra, S: Subspace) -> bool:
    return S.contains_space(bracket_space(A, A.full_space(S.F), S, S.F))


def is_p_closed(A: Algebra, S: Subspace) -> bool:
    if S.dim == 0:
        return True
    return bool(S.contains_rows(A.pmap(S.basis, S.F)).all())


def is_p_ideal(A: Algebra, S: Subspace) -> bool:
    return is_ideal(A, S) and is_p_closed(A, S)


def p_closure(A: Algebra, x, F=None) -> Subspace:
    """``(kx)_p``: span of x, x^[p], x^[p]^2, ... until it stabilises."""
    F = A._field(F)
    x = np.asarray(_coords(A, x), dtype=CODE)
    S = span(F, x[None, :], A.dim)
    cur = x
    while True:
        cur = A.pmap(cur, F)
        bigger = S.extend(cur)
        if bigger.dim == S.dim:
            return S
        S = bigger


def toral_radical(A: Algebra) -> Subspace:
    """Largest toral ideal: the stable image of the p-map iterated on the center."""
    S = center(A)
    while S.dim:
        image = span(A.F, A.pmap(S.basis), A.dim)
        if image.dim == S.dim:
            return image
        S = image
    return S


def derived(A: Algebra, S: Subspace | None = None) -> Subspace:
    S = S if S is not None else A.full_space()
    return bracket_space(A, S, S)


def derived_series(A: Algebra):
    series = [A.full_space()]
    while True:
        nxt = derived(A, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def lower_central_series(A: Algebra):
    full = A.full_space()
    series = [full]
    while True:
        nxt = bracket_space(A, full, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_solvable(A: Algebra, S: Subspace | None = None) -> bool:
    cur = S if S is not None else A.full_space()
    while cur.dim:
        nxt = derived(A, cur)
        if nxt == cur:
            return False
        cur = nxt
    return True


def is_nilpotent(A: Algebra) -> bool:
    return lower_central_series(A)[-1].dim == 0


def is_perfect(A: Algebra) -> bool:
    return derived(A).dim == A.dim


def subalgebra_generated(A: Algebra, S, restricted=True, F=None) -> Subspace:
    """Smallest (p-)subalgebra containing the given vectors."""
    F = A._field(F)
    if isinstance(S, Subspace):
        vectors = S.basis
    else:
        vectors = np.array([_coords(A, s) for s in S], dtype=CODE).reshape(-1, A.dim)
    cur = span(F, vectors, A.dim)
    while True:
        extra = [bracket_space(A, cur, cur, F).basis]
        if restricted and cur.dim:
            extra.append(A.pmap(cur.basis, F))
        nxt = cur.extend(np.concatenate(extra)) if extra else cur
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


class Quotient(NamedTuple):
    algebra: Algebra
    projection: np.ndarray  # (dim quotient, dim A)
    ideal: Subspace
    complement: list

    def project(self, x):
        return self.ideal.reduce(np.asarray(x, dtype=CODE))[..., self.complement]


def quotient(A: Algebra, I: Subspace, name=None) -> Quotient:
    """``A / I`` with basis the images of the non-pivot coordinate vectors of ``I``."""
    if not is_p_ideal(A, I):
        raise PreconditionError("quotient requires a p-ideal")
    comp = I.complement_indices()
    m = len(comp)

    def proj(v):
        return I.reduce(v)[..., comp]

    structure = np.zeros((m, m, m), dtype=CODE)
    for a, i in enumerate(comp):
        for b, j in enumerate(comp):
            structure[a, b] = proj(A.structure[i, j])
    pm = np.array([proj(A.pmap_basis[i]) for i in comp], dtype=CODE).reshape(m, m)
    # column j of P is the image of b_j
    P = np.ascontiguousarray(proj(np.eye(A.dim, dtype=CODE)).T)
    Q = Algebra(A.p, [A.names[i] for i in comp], structure, pm, name=name or f"{A.name}/I")
    return Quotient(Q, P, I, comp)
