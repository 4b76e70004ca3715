from __future__ import annotations

import numpy as np
import pytest

from jointspec import theorems as th
from jointspec.lie import abelian, axb, heisenberg, is_nilpotent, quotient
from jointspec.linalg import EXACT, FloatBackend, GaussQ
from jointspec.reps import adjoint_rep, diagonal_rep, from_matrices, multiplication_rep, restrict, tensor_rep, zero_rep
from jointspec.spectra import CharSet, compute_spectra


def M(rows):
    return EXACT.asarray(rows)


def G(*xs):
    return tuple(GaussQ.of(x) for x in xs)


def rep1(*rows):
    return from_matrices(abelian(1), [M(list(rows))])


def diag(*xs):
    return [[xs[i] if i == j else 0 for j in range(len(xs))] for i in range(len(xs))]


def heisenberg_standard():
    e = lambda r, c: [[1 if (i, j) == (r, c) else 0 for j in range(3)] for i in range(3)]
    return from_matrices(heisenberg(), [M(e(0, 1)), M(e(1, 2)), M(e(0, 2))])


def axb_plane():
    return from_matrices(axb(), [M(diag(2, 1)), M([[0, 1], [0, 0]])])


# ---------------------------------------------------------------------------
# verdict bookkeeping


def test_verdict_outcomes():
    v = th.TheoremVerdict("x", "demo")
    a = CharSet(EXACT, 1, [G(1)])
    b = CharSet(EXACT, 1, [G(1), G(2)])
    assert v.compare("same", a, a).outcome == th.EQUAL and v.equal
    assert v.compare("wider", a, b, exact=False).outcome == th.INCLUSION
    assert v.verdict == th.INCLUSION and v.passed
    c = v.compare("lost", b, a, exact=False)
    assert c.outcome == th.VIOLATED and c.witness == G(2)
    assert not v.passed
    assert "witness" in v.summary()


def test_require_marks_violation():
    v = th.TheoremVerdict("x", "demo")
    v.require("side condition", False, "why")
    assert v.verdict == th.VIOLATED and "FAILED" in v.detail[0]


# ---------------------------------------------------------------------------
# duality


def test_duality_nilpotent_rep_has_zero_shift():
    res = th.check_duality(heisenberg_standard(), "h3")
    assert res.verdict.equal
    assert res.shift == G(0, 0, 0)
    assert res.matches_trace_ad


def test_duality_symmetric_abelian_rep_has_zero_shift():
    rho = from_matrices(abelian(2), [M([[2, 1], [1, 2]]), M([[3, 1], [1, 3]])])
    res = th.check_duality(rho)
    assert res.verdict.equal and res.shift == G(0, 0)


def test_duality_ax_plus_b_shift_is_consistent_across_levels():
    for rho in (adjoint_rep(axb()), axb_plane()):
        res = th.check_duality(rho)
        assert res.verdict.equal
        assert res.shift == G(-1, 0)
        assert res.matches_negated_trace_ad


def test_duality_ax_plus_b_adjoint_shift_matches_trace_ad():
    # documented expectation: h = (x -> 1, y -> 0) = trace(ad)
    res = th.check_duality(adjoint_rep(axb()))
    assert res.shift == G(1, 0)
    assert res.matches_trace_ad


def test_shift_restricts_to_ideals():
    rho = axb_plane()
    for ideal in th.jordan_holder_ideals(rho.algebra)[:-1]:
        assert th.check_shift_restriction(rho, ideal).equal


# ---------------------------------------------------------------------------
# projection


def test_projection_onto_whole_algebra():
    rho = heisenberg_standard()
    assert th.check_projection(rho, rho.algebra.whole()).equal


def test_projection_heisenberg_onto_yz():
    rho = heisenberg_standard()
    sub = rho.algebra.span([M([0, 1, 0]), M([0, 0, 1])])
    assert th.check_projection(rho, sub).equal
    assert compute_spectra(restrict(rho, sub)).sigma == CharSet(EXACT, 2, [G(0, 0)])


def test_projection_ax_plus_b_adjoint_onto_derived_ideal():
    rho = adjoint_rep(axb())
    assert th.check_projection(rho, rho.algebra.span([M([0, 1])])).equal


def test_projection_needs_an_ideal_for_non_nilpotent_algebras():
    rho = adjoint_rep(axb())
    with pytest.raises(th.NotIdealOrSubalgebra):
        th.check_projection(rho, rho.algebra.span([M([1, 0])]))


def test_random_subalgebras_are_subalgebras():
    L = heisenberg()
    subs = th.random_subalgebras(L, 20, seed=4)
    assert len(subs) == 20 and all(s.is_subalgebra() for s in subs)
    assert [s.basis.tolist() for s in subs] == [s.basis.tolist() for s in th.random_subalgebras(L, 20, seed=4)]


# ---------------------------------------------------------------------------
# tensor products


def test_tensor_of_scalars():
    v = th.check_tensor_theorem(rep1([1]), rep1([5]))
    assert v.equal
    assert compute_spectra(tensor_rep(rep1([1]), rep1([5]))).sigma == CharSet(EXACT, 2, [G(1, 5)])


def test_tensor_of_diagonal_pair():
    a, b = rep1(*diag(1, 2)), rep1(*diag(5, 7))
    assert th.check_tensor_theorem(a, b).equal
    expected = CharSet(EXACT, 1, [G(1), G(2)]).product(CharSet(EXACT, 1, [G(5), G(7)]))
    assert compute_spectra(tensor_rep(a, b)).sigma == expected


def test_tensor_with_zero_rep():
    a = rep1([2, 1], [0, 3])
    v = th.check_tensor_theorem(a, zero_rep(abelian(1), 1))
    assert v.equal
    r = compute_spectra(tensor_rep(a, zero_rep(abelian(1), 1)))
    ra = compute_spectra(a)
    for k in range(3):
        assert r.delta(k) == CharSet.union(EXACT, 2, [ra.delta(p).product(CharSet(EXACT, 1, [G(0)])) for p in range(k + 1)])


def test_complex_isomorphism_on_noncommutative_pair():
    assert th.check_complex_isomorphism(adjoint_rep(axb()), heisenberg_standard()).equal


def test_nilpotent_tuples():
    assert th.check_nilpotent_tuple_theorem([M(diag(1, 2))], [M(diag(5, 7))], EXACT).equal
    assert th.check_nilpotent_tuple_theorem([M([[0, 1], [0, 0]])], [M([[0]])], EXACT).equal
    assert th.check_nilpotent_tuple_theorem([], [], EXACT, d1=1, d2=1).passed


def test_tuple_spectrum_of_a_jordan_block_and_zero():
    c = [np.kron(M([[0, 1], [0, 0]]), EXACT.eye(1)), np.kron(EXACT.eye(2), M([[0]]))]
    span, report = th.tuple_spectra(c, EXACT, 2)
    assert span.tuple_points(report.sigma) == CharSet(EXACT, 2, [G(0, 0)])


def test_non_nilpotent_tuple_is_rejected():
    with pytest.raises(th.NotNilpotentSpan):
        th.check_nilpotent_tuple_theorem([M([[1, 1], [0, 2]]), M([[0, 1], [0, 0]])], [M([[0]])], EXACT)


def test_essential_tensor_sets_are_empty():
    v = th.check_essential_tensor_theorem(rep1(*diag(1, 2)), rep1(*diag(5, 7)))
    assert v.equal and any("both sides empty" in d for d in v.detail)


def test_projector_tensor_rank():
    k1 = M([[1, 0], [0, 0]])
    k2 = M([[1, 1], [0, 0]])
    assert th.check_projector_tensor(k1, k2, EXACT).equal


def test_projector_family_on_pair():
    assert th.check_projector_family(adjoint_rep(axb()), rep1(*diag(5, 7))).equal


# ---------------------------------------------------------------------------
# multiplication representations


def test_multiplication_of_diagonals():
    a, b = rep1(*diag(1, 2)), rep1(*diag(5, 7))
    assert th.check_multiplication_theorem(a, b).equal
    sigma = compute_spectra(multiplication_rep(a, b)).sigma
    assert sorted(int((x + y).real) for x, y in sigma) == [6, 7, 8, 9]


def test_multiplication_with_nilpotent_factors_has_zero_shift():
    v = th.check_multiplication_theorem(rep1(*diag(1, 2)), heisenberg_standard())
    assert v.equal
    assert v.data["h2"] == [[0, 0]] * 3


def test_multiplication_with_ax_plus_b_second_factor_holds():
    v = th.check_multiplication_theorem(rep1(*diag(1, 2)), adjoint_rep(axb()))
    assert v.equal


def test_multiplication_with_ax_plus_b_second_factor_shift_is_trace_ad():
    # documented expectation: h2 = (1, 0) for ax+b as the second factor
    v = th.check_multiplication_theorem(rep1(*diag(1, 2)), adjoint_rep(axb()))
    assert v.data["h2"] == [[1, 0], [0, 0]]


def test_multiplication_tuples():
    assert th.check_multiplication_tuple_theorem([M(diag(1, 2))], [M(diag(5, 7))], EXACT).equal


# ---------------------------------------------------------------------------
# diagonal representations


def test_diagonal_of_scalars():
    v1, v2 = th.check_diagonal_theorems(rep1([1]), rep1([5]))
    assert v1.equal and v2.equal
    assert compute_spectra(diagonal_rep(rep1([1]), rep1([5]))).sigma == CharSet(EXACT, 1, [G(6)])


def test_sylvester_difference_set():
    a, b = rep1(*diag(1, 2)), rep1(*diag(5, 7))
    v1, v2 = th.check_diagonal_theorems(a, b)
    assert v1.equal and v2.equal
    got = compute_spectra(diagonal_rep(a, b, twisted=True)).sigma
    assert got == CharSet(EXACT, 1, [G(-4), G(-6), G(-3), G(-5)])


def test_diagonal_of_heisenberg_with_itself():
    rho = heisenberg_standard()
    v1, v2 = th.check_diagonal_theorems(rho, rho)
    assert v1.equal and v2.equal
    assert compute_spectra(diagonal_rep(rho, rho)).sigma == CharSet(EXACT, 3, [G(0, 0, 0)])


def test_diagonal_needs_nilpotent_algebra():
    with pytest.raises(Exception):
        th.check_diagonal_theorems(adjoint_rep(axb()), adjoint_rep(axb()))


# ---------------------------------------------------------------------------
# functoriality


def test_functoriality_heisenberg_to_plane():
    h = heisenberg()
    q, proj = quotient(h, h.span([M([0, 0, 1])]))
    rho = from_matrices(q, [M([[1, 1], [0, 1]]), M(diag(2, 2))])
    assert is_nilpotent(q)
    assert th.check_functoriality(rho, proj, h).equal


def test_functoriality_rejects_non_surjective_maps():
    h = heisenberg()
    rho = from_matrices(abelian(2), [M([[1]]), M([[2]])])
    with pytest.raises(th.NotEpimorphism):
        th.check_functoriality(rho, M([[1, 0, 0], [0, 0, 0]]), h)


def test_float_backend_verdicts_match_exact():
    a = rep1(*diag(1, 2)).with_backend(FloatBackend())
    b = rep1(*diag(5, 7)).with_backend(FloatBackend())
    assert th.check_tensor_theorem(a, b).equal
    assert all(v.equal for v in th.check_diagonal_theorems(a, b))
