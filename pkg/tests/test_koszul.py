from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from jointspec.koszul import (
    ChainComplex,
    DegreeOutOfRange,
    ExteriorBasis,
    chevalley_eilenberg_coboundary,
    cohomology_dims,
    koszul_boundary,
    koszul_complex,
    tensor_intertwiner,
    total_tensor_complex,
)
from jointspec.lie import abelian, axb, heisenberg
from jointspec.linalg import EXACT, FloatBackend, GaussQ
from jointspec.reps import adjoint_rep, dual, from_matrices, shift, tensor_rep
from jointspec.spectra import candidate_characters


def M(rows):
    return EXACT.asarray(rows)


def heisenberg_standard():
    e = lambda r, c: M([[1 if (i, j) == (r, c) else 0 for j in range(3)] for i in range(3)])
    return from_matrices(heisenberg(), [e(0, 1), e(1, 2), e(0, 2)])


def sym(a):
    return sympy.Matrix([[sympy.Rational(x.re, x.den) + sympy.I * sympy.Rational(x.im, x.den) for x in row] for row in a])


def oracle_boundary(rho, p):
    """Koszul boundary assembled independently with sympy and explicit wedge sorting.

    d(x (x) e_S) = sum_k (-1)^k rho(e_{s_k}) x (x) e_{S - s_k}
                 + sum_{k<l} (-1)^(k+l+1) x (x) [e_{s_k}, e_{s_l}] ^ e_{S - s_k - s_l}
    with positions k, l counted from 0 in the increasing list S.
    """
    n, d = rho.algebra.dim, rho.space_dim
    c = rho.algebra.constants
    mats = [sym(m) for m in rho.matrices]
    order = ExteriorBasis(n)
    src = [tuple(i for i in range(n) if m >> i & 1) for m in order.masks(p)]
    dst = [tuple(i for i in range(n) if m >> i & 1) for m in order.masks(p - 1)]
    where = {s: i for i, s in enumerate(dst)}
    out = sympy.zeros(d * len(dst), d * len(src))

    def put(col_block, wedge, blk):
        # sort the wedge, tracking the permutation sign
        w = list(wedge)
        if len(set(w)) < len(w):
            return
        sign = 1
        for i in range(len(w)):
            for j in range(len(w) - 1 - i):
                if w[j] > w[j + 1]:
                    w[j], w[j + 1] = w[j + 1], w[j]
                    sign = -sign
        r = where[tuple(w)]
        out[r * d : (r + 1) * d, col_block * d : (col_block + 1) * d] += sign * blk

    for ci, s in enumerate(src):
        for k, sk in enumerate(s):
            put(ci, s[:k] + s[k + 1 :], (-1) ** k * mats[sk])
        for k, l in combinations(range(len(s)), 2):
            rest = tuple(t for i, t in enumerate(s) if i not in (k, l))
            for t in range(n):
                coef = c[s[k], s[l], t]
                if coef:
                    put(ci, (t,) + rest, (-1) ** (k + l + 1) * sym([[coef]])[0, 0] * sympy.eye(d))
    return out


def test_single_operator_boundary_is_the_matrix():
    a = M([[2, 1], [0, 3]])
    rho = from_matrices(abelian(1), [a])
    assert np.array_equal(koszul_boundary(rho, 1), a)


def test_two_commuting_operators():
    a, b = M([[0, 0], [0, 1]]), M([[0, 0], [0, 2]])
    rho = from_matrices(abelian(2), [a, b])
    d1, d2 = koszul_boundary(rho, 1), koszul_boundary(rho, 2)
    assert np.array_equal(d1, np.concatenate([a, b], axis=1))
    assert np.array_equal(d2, np.concatenate([-b, a], axis=0))
    assert EXACT.is_zero(d1 @ d2)


def test_two_commuting_operators_homology_at_zero():
    # dims (2, 4, 2) force H0 - H1 + H2 = 0; the kernel vector e1 is joint-null
    rho = from_matrices(abelian(2), [M([[0, 0], [0, 1]]), M([[0, 0], [0, 2]])])
    assert koszul_complex(rho).homology_dims() == [1, 2, 1]


@pytest.mark.parametrize(
    "rho",
    [heisenberg_standard(), adjoint_rep(axb()), adjoint_rep(heisenberg())],
    ids=["h3-standard", "axb-adjoint", "h3-adjoint"],
)
def test_boundaries_match_independent_symbolic_expansion(rho):
    for p in range(1, rho.algebra.dim + 1):
        assert sym(koszul_boundary(rho, p)) == oracle_boundary(rho, p)


def test_heisenberg_complex_dimensions_and_composition():
    cx = koszul_complex(heisenberg_standard())
    assert cx.dims == (3, 9, 9, 3)
    assert all(r == 0 for r in cx.composition_residuals())


def test_small_homology_examples():
    zero = from_matrices(abelian(1), [M([[0]])])
    assert np.array_equal(koszul_boundary(zero, 1), M([[0]]))
    assert koszul_complex(zero).homology_dims() == [1, 1]
    one = from_matrices(abelian(1), [M([[1]])])
    assert koszul_complex(one).homology_dims() == [0, 0]
    exact = ChainComplex((1, 1), (M([[1]]),), EXACT)
    assert exact.homology_dims() == [0, 0]
    flat = ChainComplex((1, 2, 1), (EXACT.zeros((1, 2)), EXACT.zeros((2, 1))), EXACT)
    assert flat.homology_dims() == [1, 2, 1]


def test_degree_out_of_range():
    rho = heisenberg_standard()
    assert koszul_boundary(rho, 4).shape == (3, 0) and koszul_boundary(rho, 0).shape == (0, 3)
    with pytest.raises(DegreeOutOfRange):
        koszul_boundary(rho, 5)
    with pytest.raises(DegreeOutOfRange):
        koszul_boundary(rho, -1)


def test_chevalley_eilenberg_coboundary_examples():
    a = M([[1, 2], [3, 4]])
    rho = from_matrices(abelian(1), [a])
    assert np.array_equal(chevalley_eilenberg_coboundary(rho, 0), a)
    pair = from_matrices(abelian(2), [M([[0, 1], [0, 0]]), M([[0, 2], [0, 0]])])
    assert EXACT.is_zero(chevalley_eilenberg_coboundary(pair, 1) @ chevalley_eilenberg_coboundary(pair, 0))


@pytest.mark.parametrize(
    "rho",
    [heisenberg_standard(), adjoint_rep(axb()), adjoint_rep(heisenberg())],
    ids=["h3-standard", "axb-adjoint", "h3-adjoint"],
)
def test_coboundaries_of_dual_are_transposed_boundaries(rho):
    d = dual(rho)
    for p in range(rho.algebra.dim):
        assert np.array_equal(chevalley_eilenberg_coboundary(d, p), koszul_boundary(rho, p + 1).T)


def test_dual_cohomology_equals_koszul_homology_on_corpus(exact_reps):
    for _, rho in exact_reps:
        if rho.algebra.dim > 4:
            continue
        for f in list(candidate_characters(rho))[:3]:
            s = shift(rho, list(f))
            assert cohomology_dims(dual(s)) == koszul_complex(s).homology_dims()


def test_total_complex_examples():
    one = ChainComplex((1, 1), (M([[1]]),), EXACT)
    assert total_tensor_complex(one, one).homology_dims() == [0, 0, 0]
    two = ChainComplex((2, 2), (M([[1, 0], [0, 0]]),), EXACT)
    t = total_tensor_complex(two, two)
    assert t.dims == (4, 8, 4)


def _convolve(h1, h2):
    out = [0] * (len(h1) + len(h2) - 1)
    for p, a in enumerate(h1):
        for q, b in enumerate(h2):
            out[p + q] += a * b
    return out


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_kunneth_and_intertwiner_on_random_pairs(data):
    def pick(n):
        vals = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
        top = data.draw(st.integers(-2, 2))
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(vals):
            m[i][i] = v
        if n > 1:
            m[0][1] = top
        return M(m)

    a = from_matrices(abelian(1), [pick(2)])
    b = from_matrices(abelian(2), [pick(2), EXACT.zeros((2, 2))])
    c1, c2 = koszul_complex(a), koszul_complex(b)
    total = total_tensor_complex(c1, c2)
    big = koszul_complex(tensor_rep(a, b))
    assert total.homology_dims() == _convolve(c1.homology_dims(), c2.homology_dims())
    assert big.homology_dims() == total.homology_dims()
    phi = tensor_intertwiner(a, b)
    for k in range(1, total.top + 1):
        assert np.array_equal(phi[k - 1] @ total.boundary(k), big.boundary(k) @ phi[k])


def test_intertwiner_is_a_signed_permutation():
    a = heisenberg_standard()
    b = adjoint_rep(axb())
    for phi in tensor_intertwiner(a, b):
        assert all(sum(1 for x in row if x) == 1 for row in phi)
        assert all(x in (GaussQ(0), GaussQ(1), GaussQ(-1)) for x in phi.flat)


def test_float_complex_uses_absolute_scale():
    rho = from_matrices(abelian(1).with_backend(FloatBackend()), [np.array([[1e-17]], dtype=complex)])
    assert koszul_complex(rho).homology_dims() == [1, 1]
