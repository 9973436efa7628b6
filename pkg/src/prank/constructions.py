"""Builders combining algebras: twisted direct products, semidirect products by
restricted derivations, and one-dimensional central extensions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CocycleError, PreconditionError, ValidationError
from .exactfield import CODE, mat_power
from .liecore import Algebra, is_torus, validate


@dataclass(frozen=True)
class SemilinearTwist:
    """A p-semilinear map from a source algebra into a target torus.

    ``values[i]`` holds the target coordinates of the image of source basis
    vector ``i``; the map sends ``sum(l_i b_i)`` to ``sum(l_i**p values[i])``.
    """

    source_dim: int
    target_dim: int
    values: np.ndarray

    @classmethod
    def zero(cls, source_dim, target_dim):
        return cls(source_dim, target_dim, np.zeros((source_dim, target_dim), dtype=CODE))

    def __call__(self, x, F):
        x = np.asarray(x, dtype=CODE)
        return F.matmul(F.frobenius(x), np.asarray(self.values, dtype=CODE))


def _check_result(A: Algebra) -> Algebra:
    report = validate(A)
    if not report.ok:
        raise ValidationError("; ".join(report.messages(A.names)), report)
    return A


def direct_product_twisted(h: Algebra, c: Algebra, twist: SemilinearTwist | None = None, name=None) -> Algebra:
    """``h x c`` with ``(x, z)^[p] = (x^[p], z^[p] + twist(x))``; ``c`` must be a torus."""
    if h.p != c.p:
        raise PreconditionError("factors over different characteristics")
    if not is_torus(c):
        raise PreconditionError("second factor must be a torus")
    twist = twist or SemilinearTwist.zero(h.dim, c.dim)
    dh, dc = h.dim, c.dim
    d = dh + dc
    structure = np.zeros((d, d, d), dtype=CODE)
    structure[:dh, :dh, :dh] = h.structure
    pm = np.zeros((d, d), dtype=CODE)
    pm[:dh, :dh] = h.pmap_basis
    pm[:dh, dh:] = np.asarray(twist.values, dtype=CODE) % h.p
    pm[dh:, dh:] = c.pmap_basis
    names = list(h.names) + list(c.names)
    if len(set(names)) != len(names):
        names = list(h.names) + [f"c{i}" for i in range(dc)]
    A = Algebra(h.p, names, structure, pm, name=name or f"{h.name}x{c.name}")
    return _check_result(A)


@dataclass
class RestrictedDerivation:
    """A derivation ``D`` of ``algebra`` (acting on column vectors) with ``d^[p] = s d``."""

    algebra: Algebra
    matrix: np.ndarray
    p_image_scalar: int = 1

    def failures(self):
        """Lists of failed basis pairs (Leibniz), indices (compatibility), and
        whether the operator condition ``D^p = s D`` fails."""
        A = self.algebra
        F, d, p = A.F, A.dim, A.p
        D = np.asarray(self.matrix, dtype=CODE) % p
        adb = A.ad_basis()
        leibniz = []
        for i in range(d):
            for j in range(i + 1, d):
                lhs = D @ A.structure[i, j] % p
                rhs = (A.bracket(D[:, i], A.basis_vector(j)) + A.bracket(A.basis_vector(i), D[:, j])) % p
                if np.any((lhs - rhs) % p):
                    leibniz.append((i, j))
        compat = []
        for i in range(d):
            lhs = D @ A.pmap_basis[i] % p
            rhs = mat_power(F, adb[i], p - 1) @ D[:, i] % p
            if np.any((lhs - rhs) % p):
                compat.append(i)
        operator = not np.array_equal(mat_power(F, D, p), D * self.p_image_scalar % p)
        return leibniz, compat, operator


def semidirect(h: Algebra, der: RestrictedDerivation, name="d", algebra_name=None) -> Algebra:
    """``k d ⋉ h`` with ``[d, x] = D x`` and ``d^[p] = s d``; ``d`` is basis vector 0."""
    if der.algebra is not h and not der.algebra.same_tables(h):
        raise PreconditionError("derivation belongs to a different algebra")
    leibniz, compat, operator = der.failures()
    if leibniz:
        i, j = leibniz[0]
        raise PreconditionError(f"Leibniz rule fails on basis pair ({h.names[i]}, {h.names[j]})")
    if compat:
        raise PreconditionError(f"p-map compatibility fails at basis index {compat[0]} ({h.names[compat[0]]})")
    if operator:
        raise PreconditionError("operator condition D^p = s*D fails")
    p = h.p
    D = np.asarray(der.matrix, dtype=CODE) % p
    dh = h.dim
    d = dh + 1
    structure = np.zeros((d, d, d), dtype=CODE)
    structure[1:, 1:, 1:] = h.structure
    for i in range(dh):
        structure[0, i + 1, 1:] = D[:, i]
        structure[i + 1, 0, 1:] = (-D[:, i]) % p
    pm = np.zeros((d, d), dtype=CODE)
    pm[0, 0] = der.p_image_scalar % p
    pm[1:, 1:] = h.pmap_basis
    A = Algebra(p, [name] + list(h.names), structure, pm, name=algebra_name or f"{name}x|{h.name}")
    return _check_result(A)


@dataclass
class CocycleData:
    """Data for the central extension ``h ⊕ kz``.

    ``form`` is an alternating matrix with ``form[i, j] = λ(b_i, b_j)``;
    ``twist[i]`` is the z-coefficient of ``(b_i, 0)^[p]``; ``z^[p] = central_scalar * z``.
    """

    algebra: Algebra
    form: np.ndarray
    twist: np.ndarray | None = None
    central_scalar: int = 1

    def __post_init__(self):
        p, d = self.algebra.p, self.algebra.dim
        self.form = np.asarray(self.form, dtype=CODE) % p
        if self.twist is None:
            self.twist = np.zeros(d, dtype=CODE)
        self.twist = np.asarray(self.twist, dtype=CODE) % p

    @classmethod
    def from_pairs(cls, algebra, pairs, twist=None, central_scalar=1):
        """``pairs`` maps ``(name_i, name_j)`` to ``λ(b_i, b_j)``."""
        d, p = algebra.dim, algebra.p
        form = np.zeros((d, d), dtype=CODE)
        for (a, b), val in pairs.items():
            i = a if isinstance(a, int) else algebra.index(a)
            j = b if isinstance(b, int) else algebra.index(b)
            form[i, j] = val % p
            form[j, i] = (-val) % p
        return cls(algebra, form, twist, central_scalar)


def central_extension(data: CocycleData, name="z", algebra_name=None) -> Algebra:
    """One-dimensional central extension by the 2-cocycle in ``data``; z is the last basis vector."""
    from .cohomology import Cochain, is_cocycle

    h, p = data.algebra, data.algebra.p
    form = data.form
    if np.any((form + form.T) % p) or np.any(np.diag(form)):
        raise PreconditionError("cocycle form must be alternating")
    ok, triple = is_cocycle(Cochain.from_matrix(h, form))
    if not ok:
        names = tuple(h.names[i] for i in triple)
        raise CocycleError(f"form is not a cocycle: d(form) is nonzero on {names}", triple=triple)
    dh = h.dim
    d = dh + 1
    structure = np.zeros((d, d, d), dtype=CODE)
    structure[:dh, :dh, :dh] = h.structure
    structure[:dh, :dh, dh] = form
    pm = np.zeros((d, d), dtype=CODE)
    pm[:dh, :dh] = h.pmap_basis
    pm[:dh, dh] = data.twist
    pm[dh, dh] = data.central_scalar % p
    A = Algebra(p, list(h.names) + [name], structure, pm, name=algebra_name or f"{h.name}^lambda")
    return _check_result(A)
