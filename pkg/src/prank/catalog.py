"""Named restricted Lie algebras used throughout the package.

Every builder returns a validated :class:`~prank.liecore.Algebra` with a fixed,
documented basis order.  Conventions for sl(2): basis ``(e, h, f)`` with
``[h, e] = 2e``, ``[h, f] = -2f``, ``[e, f] = h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .constructions import (
    CocycleData,
    RestrictedDerivation,
    _check_result,
    central_extension,
    direct_product_twisted,
    semidirect,
)
from .errors import CapacityError, DomainError
from .exactfield import CODE, is_prime, mat_power
from .liecore import Algebra

WITT_LIMIT = 64


def _check_p(p, minimum=3):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p < minimum:
        raise CapacityError(f"p must be a prime >= {minimum}, got {p}", bound=minimum)


def sl2(p: int = 5) -> Algebra:
    _check_p(p)
    A = Algebra.from_table(
        p,
        ["e", "h", "f"],
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
        {"h": {"h": 1}},
        name=f"sl2({p})",
    )
    return _check_result(A)


def borel(p: int = 5) -> Algebra:
    _check_p(p)
    A = Algebra.from_table(p, ["t", "x"], {("t", "x"): {"x": 1}}, {"t": {"t": 1}}, name=f"borel({p})")
    return _check_result(A)


def borel_minus(p: int = 5) -> Algebra:
    _check_p(p)
    A = Algebra.from_table(
        p,
        ["t", "x", "y"],
        {("t", "x"): {"x": 1}, ("t", "y"): {"y": -1}},
        {"t": {"t": 1}},
        name=f"borel_minus({p})",
    )
    return _check_result(A)


def heisenberg_toral(p: int = 5) -> Algebra:
    _check_p(p)
    A = Algebra.from_table(
        p, ["x", "y", "z"], {("x", "y"): {"z": 1}}, {"z": {"z": 1}}, name=f"heisenberg_toral({p})"
    )
    return _check_result(A)


def g_lambda(p: int = 5) -> Algebra:
    """Non-split central extension of ``borel_minus`` by ``λ(x, y) = 1``, ``z^[p] = z``."""
    data = CocycleData.from_pairs(borel_minus(p), {("x", "y"): 1}, central_scalar=1)
    return central_extension(data, name="z", algebra_name=f"g_lambda({p})")


def lr1_remark(p: int = 5, m: int = 2) -> Algebra:
    """Basis ``t, x0, ..., x_{m-1}`` with ``[t, x0] = x0`` and ``x_i^[p] = x_{i+1}``.

    For ``m = 2`` the basis is named ``t, x, y``.
    """
    _check_p(p)
    if m < 2:
        raise CapacityError(f"m must be >= 2, got {m}", bound=2)
    xs = ["x", "y"] if m == 2 else [f"x{i}" for i in range(m)]
    pmap = {"t": {"t": 1}}
    for i in range(m - 1):
        pmap[xs[i]] = {xs[i + 1]: 1}
    A = Algebra.from_table(p, ["t"] + xs, {("t", xs[0]): {xs[0]: 1}}, pmap, name=f"lr1_remark({p},{m})")
    return _check_result(A)


def torus(n: int = 1, p: int = 5) -> Algebra:
    _check_p(p)
    if n < 0:
        raise CapacityError("torus dimension must be non-negative", bound=0)
    d = n
    A = Algebra(p, [f"c{i}" for i in range(n)], np.zeros((d, d, d), dtype=CODE), np.eye(d, dtype=CODE), name=f"torus({n},{p})")
    return _check_result(A)


def tn_cyclic(p: int = 5, m: int = 2, r: int = 1) -> Algebra:
    """``lr1_remark(p, m)`` times an ``r``-dimensional torus: a torus acting on a p-cyclic ideal."""
    base = lr1_remark(p, m)
    if r == 0:
        return base
    return direct_product_twisted(base, torus(r, p), name=f"tn_cyclic({p},{m},{r})")


def torus_sl2(p: int = 5, n: int = 1) -> Algebra:
    """``sl2 x torus(n)`` with untwisted p-map."""
    return direct_product_twisted(sl2(p), torus(n, p), name=f"torus_sl2({p},{n})")


def p3_h() -> Algebra:
    """The 5-dimensional algebra ``t1, t2, x1, x2, y`` over F_3 with
    ``[x1, x2] = y``, ``[x_i, y] = t_i``, central toral ``t_i`` and zero basis p-map elsewhere."""
    A = Algebra.from_table(
        3,
        ["t1", "t2", "x1", "x2", "y"],
        {("x1", "x2"): {"y": 1}, ("x1", "y"): {"t1": 1}, ("x2", "y"): {"t2": 1}},
        {"t1": {"t1": 1}, "t2": {"t2": 1}},
        name="p3_h",
    )
    return _check_result(A)


def p3_grading_derivation(h: Algebra | None = None) -> RestrictedDerivation:
    """Degree derivation: 0 on the t's, 1 on the x's, -1 on y."""
    h = h or p3_h()
    D = np.diag([0, 0, 1, 1, 2]).astype(CODE)
    return RestrictedDerivation(h, D, 1)


def p3_g() -> Algebra:
    h = p3_h()
    return semidirect(h, p3_grading_derivation(h), name="d", algebra_name="p3_g")


# -- Jacobson-Witt algebras ---------------------------------------------------

def _witt_monomials(n, p):
    return list(product(range(p), repeat=n))


def witt_operator(n: int, p: int, a, j: int):
    """Matrix of ``x^a d_j`` on the truncated polynomial ring, monomial basis in lex order."""
    monos = _witt_monomials(n, p)
    index = {m: i for i, m in enumerate(monos)}
    N = len(monos)
    M = np.zeros((N, N), dtype=CODE)
    for col, b in enumerate(monos):
        if b[j] == 0:
            continue
        target = tuple(a[i] + b[i] - (1 if i == j else 0) for i in range(n))
        if all(t < p for t in target):
            M[index[target], col] = (M[index[target], col] + b[j]) % p
    return M


def _decompose_derivation(n, p, M, basis_index):
    """Coordinates of the derivation with operator matrix ``M`` in the ``x^a d_j`` basis."""
    monos = _witt_monomials(n, p)
    index = {m: i for i, m in enumerate(monos)}
    coords = np.zeros(len(basis_index), dtype=CODE)
    for j in range(n):
        xj = tuple(1 if i == j else 0 for i in range(n))
        image = M[:, index[xj]]
        for r in np.flatnonzero(image):
            coords[basis_index[(monos[r], j)]] = image[r]
    return coords


def witt_names(n: int, p: int):
    if n == 1:
        return [f"e{i - 1}" for i in range(p)]
    out = []
    for j in range(n):
        for a in _witt_monomials(n, p):
            out.append("x^" + "".join(str(t) for t in a) + f"d{j + 1}")
    return out


def witt(n: int = 1, p: int = 5, limit: int = WITT_LIMIT) -> Algebra:
    """The Jacobson-Witt algebra W(n) built from its action on k[x_1..x_n]/(x_i^p).

    Basis ``x^a d_j`` ordered by ``j`` then ``a`` (lex).  For ``n = 1`` this is
    ``e_i = x^{i+1} d`` for ``i = -1 .. p-2``.
    """
    _check_p(p)
    if n < 1 or n * p**n > limit:
        raise CapacityError(f"witt({n},{p}) has dimension {n * p**n} beyond the limit {limit}", bound=limit)
    monos = _witt_monomials(n, p)
    basis = [(a, j) for j in range(n) for a in monos]
    basis_index = {b: i for i, b in enumerate(basis)}
    ops = [witt_operator(n, p, a, j) for a, j in basis]
    d = len(basis)
    structure = np.zeros((d, d, d), dtype=CODE)
    for i in range(d):
        for k in range(i + 1, d):
            C = (ops[i] @ ops[k] - ops[k] @ ops[i]) % p
            v = _decompose_derivation(n, p, C, basis_index)
            structure[i, k] = v
            structure[k, i] = (-v) % p
    from .exactfield import field as _field

    F = _field(p)
    pm = np.array([_decompose_derivation(n, p, mat_power(F, op, p), basis_index) for op in ops], dtype=CODE)
    A = Algebra(p, witt_names(n, p), structure, pm, name=f"witt({n},{p})")
    return _check_result(A)


# -- registry ---------------------------------------------------------------

BUILDERS = {
    "sl2": (sl2, ()),
    "borel": (borel, ()),
    "borel_minus": (borel_minus, ()),
    "heisenberg_toral": (heisenberg_toral, ()),
    "g_lambda": (g_lambda, ()),
    "lr1_remark": (lr1_remark, ("m",)),
    "p3_h": (p3_h, None),
    "p3_g": (p3_g, None),
    "witt": (witt, ("n",)),
    "torus": (torus, ("n",)),
    "tn_cyclic": (tn_cyclic, ("m", "r")),
    "torus_sl2": (torus_sl2, ("n",)),
}


def build(name: str, p: int = 5, *params) -> Algebra:
    """Build a catalog entry by name; ``params`` are the extra integers (n, m, r)."""
    if name not in BUILDERS:
        raise DomainError(f"unknown catalog entry {name!r}; known: {sorted(BUILDERS)}")
    fn, sig = BUILDERS[name]
    if sig is None:
        if p != 3:
            raise CapacityError(f"{name} is defined only for p = 3", bound=3)
        return fn()
    if len(params) > len(sig):
        raise DomainError(f"{name} takes at most {len(sig)} extra parameters")
    if name in ("witt", "torus"):
        return fn(*params, p=p) if params else fn(p=p)
    return fn(p, *params)


@dataclass(frozen=True)
class CatalogEntry:
    """A buildable catalog instance plus expected invariants for checks."""

    label: str
    name: str
    p: int
    params: tuple = ()
    expected: dict = field(default_factory=dict)
    enumerable: bool = True  # small enough for exhaustive point enumeration

    def build(self) -> Algebra:
        return build(self.name, self.p, *self.params)


def entries():
    """The catalog instances exercised by the harness and acceptance suite."""
    E = CatalogEntry
    return [
        E("sl2(5)", "sl2", 5, (), {"p_rank": 1, "mu": 1, "r_count": 2, "rho": 1}),
        E("sl2(7)", "sl2", 7, (), {"p_rank": 1, "mu": 1}),
        E("borel(5)", "borel", 5, (), {"p_rank": 1, "mu": 1}),
        E("borel(7)", "borel", 7, ()),
        E("borel_minus(5)", "borel_minus", 5, (), {"p_rank": 2, "mu": 1}),
        E("heisenberg_toral(5)", "heisenberg_toral", 5, (), {"p_rank": 1, "generically_toral": False}),
        E("g_lambda(5)", "g_lambda", 5, (), {"p_rank": 1, "mu": 2}),
        E("lr1_remark(5,2)", "lr1_remark", 5, (2,), {"p_rank": 1, "mu": 1, "generically_toral": False}),
        E("lr1_remark(5,3)", "lr1_remark", 5, (3,), {"p_rank": 1}),
        E("tn_cyclic(5,2,1)", "tn_cyclic", 5, (2, 1), {"p_rank": 1}),
        E("torus_sl2(5,1)", "torus_sl2", 5, (1,), {"p_rank": 1}),
        E("torus(2,5)", "torus", 5, (2,), {"p_rank": 0}),
        E("witt(1,5)", "witt", 5, (1,), {"r_count": 4}),
        E("p3_h", "p3_h", 3, (), {"p_rank": 1}),
        E("p3_g", "p3_g", 3, (), {"p_rank": 1, "rho": 2}),
        E("witt(1,7)", "witt", 7, (1,), {}, enumerable=False),
        E("witt(2,3)", "witt", 3, (2,), {}, enumerable=False),
    ]


def entry(label: str) -> CatalogEntry:
    for e in entries():
        if e.label == label:
            return e
    raise DomainError(f"no catalog instance labelled {label!r}")


# -- quoted data for algebras without builders --------------------------------

@dataclass(frozen=True)
class BoundData:
    """Dimension, torus rank and Cartan rank of a Cartan-type algebra."""

    label: str
    p: int
    dim: int
    mu: int
    rk: int
    center: int = 0
    generically_toral: bool = True


def bound_data():
    """Integer data for W(n), S(n), H(2r), K(2r+1) used by the saturation inequality."""
    out = []
    for n in (2, 3):
        for p in (3, 5):
            out.append(BoundData(f"W({n})", p, n * p**n, n, n))
    for n in (3, 4):
        for p in (5, 7):
            rk = (n - 1) * (p - 1)
            out.append(BoundData(f"S({n})", p, (n - 1) * (p**n - 1), n - 1, rk, generically_toral=False))
    for r in (1, 2):
        for p in (5, 7):
            out.append(BoundData(f"H({2 * r})", p, p ** (2 * r) - 2, r, p**r - 2, generically_toral=False))
    for r in (1, 2):
        for p in (5, 7):
            for rk in (p**r, p**r - 1):
                out.append(
                    BoundData(f"K({2 * r + 1})", p, p ** (2 * r + 1) - 1, r + 1, rk, generically_toral=False)
                )
    return out
