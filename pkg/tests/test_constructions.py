import numpy as np
import pytest

from prank import catalog
from prank.constructions import (
    CocycleData,
    RestrictedDerivation,
    SemilinearTwist,
    central_extension,
    direct_product_twisted,
    semidirect,
)
from prank.errors import CocycleError, PreconditionError
from prank.liecore import Algebra, center, quotient, validate
from prank.tori import rho_r_invariance
from prank.verdict import is_isomorphic, verify_isomorphism


def abelian(n, p, pmap=None):
    return Algebra(p, [f"a{i}" for i in range(n)], np.zeros((n, n, n), dtype=int),
                   np.zeros((n, n), dtype=int) if pmap is None else pmap, name=f"ab{n}")


def test_sl2_times_torus_center_is_torus_line():
    A = direct_product_twisted(catalog.sl2(5), catalog.torus(1, 5))
    assert validate(A).ok
    assert center(A) == A.span([A.basis_vector(3)])


def test_zero_twist_is_plain_product():
    h, c = catalog.borel(5), catalog.torus(1, 5)
    A = direct_product_twisted(h, c)
    B = direct_product_twisted(h, c, SemilinearTwist.zero(2, 1))
    assert A.same_tables(B)


def test_borel_times_torus_with_twist():
    h, c = catalog.borel(5), catalog.torus(1, 5)
    tw = SemilinearTwist(2, 1, np.array([[0], [1]]))  # x -> c
    A = direct_product_twisted(h, c, tw)
    assert validate(A).ok
    assert np.array_equal(A.pmap(A.basis_vector(1)), A.basis_vector(2))
    Q = quotient(A, A.span([A.basis_vector(2)])).algebra
    M = is_isomorphic(h, Q)
    assert M is not None and verify_isomorphism(h, Q, M)
    # twist is p-semilinear: image of 2x is 2^p c = 2c over F_5
    assert np.array_equal(tw(np.array([0, 2]), A.F), np.array([2]))


def test_direct_product_needs_torus():
    with pytest.raises(PreconditionError):
        direct_product_twisted(catalog.sl2(5), catalog.borel(5))


def test_semidirect_p3_example():
    g = catalog.p3_g()
    assert g.dim == 6 and validate(g).ok
    assert rho_r_invariance(g)[0] == 2


def test_semidirect_zero_derivation_on_abelian():
    h = abelian(2, 5)
    A = semidirect(h, RestrictedDerivation(h, np.zeros((2, 2), dtype=int), 0))
    assert validate(A).ok
    assert not A.structure.any()
    assert center(A).dim == 3


def test_semidirect_identity_derivation_gives_borel():
    h = abelian(1, 5)
    A = semidirect(h, RestrictedDerivation(h, np.eye(1, dtype=int), 1))
    B = catalog.borel(5)
    M = is_isomorphic(B, A)
    assert M is not None and verify_isomorphism(B, A, M)


def test_semidirect_names_the_failing_index():
    h = catalog.p3_h()
    D = np.diag([2, 1, 1, 0, 1])  # Leibniz holds; D(t1) != 0 breaks D(t1^[p]) = ad(t1)^2 D(t1)
    with pytest.raises(PreconditionError, match="index 0"):
        semidirect(h, RestrictedDerivation(h, D, 1))
    h2 = abelian(2, 5)
    with pytest.raises(PreconditionError, match="D\\^p"):
        semidirect(h2, RestrictedDerivation(h2, np.array([[0, 1], [0, 0]]), 1))
    B = catalog.borel(5)
    with pytest.raises(PreconditionError, match="Leibniz"):
        semidirect(B, RestrictedDerivation(B, np.array([[1, 0], [0, 0]]), 1))


def test_heisenberg_is_central_extension_of_abelian_plane():
    h = abelian(2, 5)
    A = central_extension(CocycleData.from_pairs(h, {(0, 1): 1}))
    H = catalog.heisenberg_toral(5)
    M = is_isomorphic(H, A)
    assert M is not None and verify_isomorphism(H, A, M)


@pytest.mark.parametrize(
    "base,pairs",
    [
        ("borel_minus", {("x", "y"): 1}),
        ("borel", {("t", "x"): 1}),
        ("borel_minus", {("t", "x"): 2}),
    ],
)
def test_central_extension_then_quotient_recovers_input(base, pairs):
    h = catalog.build(base, 5)
    A = central_extension(CocycleData.from_pairs(h, pairs))
    assert validate(A).ok
    z = A.span([A.basis_vector(A.dim - 1)])
    Q = quotient(A, z).algebra
    M = is_isomorphic(h, Q)
    assert M is not None and verify_isomorphism(h, Q, M)


def test_central_extension_rejects_non_cocycle():
    h = catalog.borel_minus(5)
    g = catalog.witt(1, 5)
    # d(λ)(e-1, e0, e2) = -λ(e-1, e2) + λ(3 e1, e0) - λ(2 e2, e-1) = 1
    with pytest.raises(CocycleError) as info:
        central_extension(CocycleData.from_pairs(g, {("e-1", "e2"): 1}))
    assert info.value.triple == (0, 1, 3)
    with pytest.raises(PreconditionError):
        central_extension(CocycleData(h, np.ones((3, 3), dtype=int)))
