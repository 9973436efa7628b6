import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prank.errors import CapacityError, DomainError
from prank.exactfield import (
    Subspace,
    all_vectors,
    field,
    inverse,
    kernel,
    mat_power,
    rank,
    rref,
    solve,
)

FIELDS = [(3, 1), (5, 1), (3, 2)]


def poly_mulmod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    k = len(modulus) - 1
    prod = [0] * (2 * k)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for t in range(k + 1):
                prod[deg - k + t] = (prod[deg - k + t] - c * modulus[t]) % p
    return prod[:k]


def digits(code, p, k):
    return [(code // p**i) % p for i in range(k)]


def undigits(ds, p):
    return sum(c * p**i for i, c in enumerate(ds))


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_extension_multiplication_matches_polynomial_oracle(p, k):
    F = field(p, k)
    codes = np.arange(F.q)
    table = F.mul(codes[:, None], codes[None, :])
    for a, b in itertools.product(range(F.q), repeat=2):
        expect = undigits(poly_mulmod(digits(a, p, k), digits(b, p, k), F.modulus, p), p)
        assert table[a, b] == expect
    add = F.add(codes[:, None], codes[None, :])
    for a, b in itertools.product(range(F.q), repeat=2):
        ds = [(x + y) % p for x, y in zip(digits(a, p, k), digits(b, p, k))]
        assert add[a, b] == undigits(ds, p)


def test_default_modulus_small_cases():
    assert field(3, 2).modulus == (1, 0, 1)  # T^2 + 1
    assert field(5, 2).modulus == (2, 0, 1)  # T^2 + 2


@pytest.mark.parametrize("p,k", FIELDS + [(5, 2)])
def test_multiplicative_group_and_inverses(p, k):
    F = field(p, k)
    nz = np.arange(1, F.q)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    # every nonzero element satisfies a^(q-1) = 1, and some has order exactly q-1
    assert np.all(F.power(nz, F.q - 1) == 1)
    orders = [min(n for n in range(1, F.q) if F.power(a, n) == 1) for a in nz]
    assert max(orders) == F.q - 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pk, data):
    F = field(*pk)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(a, b) == F.add(a, F.neg(b))


@pytest.mark.parametrize("p,k", FIELDS)
def test_frobenius_is_a_ring_map(p, k, rng):
    F = field(p, k)
    a = rng.integers(0, F.q, 1000)
    b = rng.integers(0, F.q, 1000)
    assert np.array_equal(F.frobenius(F.add(a, b)), F.add(F.frobenius(a), F.frobenius(b)))
    assert np.array_equal(F.frobenius(F.mul(a, b)), F.mul(F.frobenius(a), F.frobenius(b)))
    # fixed points are exactly the prime field
    fixed = [x for x in range(F.q) if F.frobenius(x) == x]
    assert sorted(fixed) == sorted(int(c) for c in F.prime_subfield_codes())


def test_field_element_wrapper():
    F = field(3, 2)  # F_3[T]/(T^2 + 1)
    g = F.gen()
    assert int(g * g) == int(F.element([2]))  # -1
    assert int(g * g.inv()) == 1
    assert int(g**9) == int(g)
    assert int(g.frobenius()) == int(g**3)
    assert int((g + 1) - g) == 1


def test_field_rejects_bad_input():
    with pytest.raises(DomainError):
        field(4)
    with pytest.raises(DomainError):
        field(3, 2, modulus=(2, 0, 1))  # T^2 + 2 = (T-1)(T+1) over F_3
    with pytest.raises(CapacityError):
        field(3, 7)


def _random_matrix(rng, F, rows, cols, rank_cap=None):
    M = rng.integers(0, F.q, size=(rows, cols))
    if rank_cap is not None:
        L = rng.integers(0, F.q, size=(rows, rank_cap))
        R = rng.integers(0, F.q, size=(rank_cap, cols))
        M = F.matmul(L, R)
    return M


@pytest.mark.parametrize("p,k", FIELDS)
def test_rref_solve_and_canonicity(p, k, rng):
    F = field(p, k)
    for trial in range(1000):
        rows, cols = rng.integers(1, 6, size=2)
        cap = int(rng.integers(0, min(rows, cols) + 1)) if trial % 2 else None
        M = _random_matrix(rng, F, rows, cols, cap)
        R, r, piv = rref(F, M)
        R2, r2, piv2 = rref(F, R)
        assert np.array_equal(R, R2) and r == r2 and piv == piv2
        x = rng.integers(0, F.q, size=cols)
        b = F.matmul(M, x)
        y = solve(F, M, b)
        assert y is not None and np.array_equal(F.matmul(M, y), b)
        K = kernel(F, M)
        assert K.dim == cols - r
        if K.dim:
            assert not F.matmul(M, K.basis.T).any()
        # same span from a scrambled generating set gives the same canonical form
        S = Subspace(F, cols, M)
        mix = _random_matrix(rng, F, rows, rows)
        while rank(F, mix) < rows:
            mix = _random_matrix(rng, F, rows, rows)
        T = Subspace(F, cols, F.matmul(mix, M))
        assert S == T and np.array_equal(S.basis, T.basis)


def test_kernel_against_brute_force(rng):
    F = field(3)
    for _ in range(50):
        M = rng.integers(0, 3, size=(3, 4))
        vs = all_vectors(F, 4)
        null = vs[~F.matmul(vs, M.T).any(axis=1)]
        assert len(null) == 3 ** kernel(F, M).dim
        assert kernel(F, M).contains_rows(null).all()


def test_inverse_and_power(rng):
    F = field(5)
    for _ in range(100):
        M = rng.integers(0, 5, size=(4, 4))
        inv = inverse(F, M)
        if rank(F, M) == 4:
            assert np.array_equal(F.matmul(M, inv), np.eye(4, dtype=int))
        else:
            assert inv is None
        naive = np.eye(4, dtype=int)
        for _ in range(7):
            naive = F.matmul(naive, M)
        assert np.array_equal(mat_power(F, M, 7), naive)


def test_subspace_operations(rng):
    F = field(5)
    for _ in range(100):
        U = Subspace(F, 5, rng.integers(0, 5, size=(2, 5)))
        V = Subspace(F, 5, rng.integers(0, 5, size=(3, 5)))
        W = U + V
        I = U.intersect(V)
        assert W.dim + I.dim == U.dim + V.dim
        assert U.contains_space(I) and V.contains_space(I) and W.contains_space(U)
        pts = U.points()
        assert len(pts) == 5**U.dim
        assert U.contains_rows(pts).all()
        if U.dim:
            assert len(U.line_points()) == (5**U.dim - 1) // 4
