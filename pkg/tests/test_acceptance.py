"""Acceptance suite: one test per criterion, each recorded as a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py) and also
directly to stdout, so ``pytest -s`` shows them inline.
"""

from __future__ import annotations

import subprocess
import sys
import time
from itertools import product

import numpy as np
import pytest
import sympy

from conftest import ACCEPTANCE_RESULTS, entry_reps
from jointspec import cli
from jointspec import corpus as cp
from jointspec import theorems as th
from jointspec.koszul import koszul_complex, total_tensor_complex
from jointspec.lie import abelian, is_nilpotent
from jointspec.linalg import DEFAULT_TOL, EXACT, GaussQ, FloatBackend
from jointspec.reps import from_matrices, shift, tensor_rep
from jointspec.spectra import CharSet, candidate_characters, compute_spectra

TAU = DEFAULT_TOL


def record(n: int, ok: bool, text: str) -> None:
    ACCEPTANCE_RESULTS[n] = (ok, text)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, text


def to_sympy(x: GaussQ):
    return sympy.Rational(x.re, x.den) + sympy.I * sympy.Rational(x.im, x.den)


def from_sympy(z) -> GaussQ:
    re, im = sympy.nsimplify(sympy.re(z)), sympy.nsimplify(sympy.im(z))
    return GaussQ.from_parts(f"{re.p}/{re.q}", f"{im.p}/{im.q}")


def unimodular(rng, n: int) -> np.ndarray:
    s = np.eye(n, dtype=np.int64)
    for _ in range(3 * n if n > 1 else 0):
        i, j = rng.choice(n, 2, replace=False)
        e = np.eye(n, dtype=np.int64)
        e[i, j] = rng.integers(-2, 3)
        s = s @ e
    return s


def int_inverse(s: np.ndarray) -> np.ndarray:
    inv = sympy.Matrix(s.tolist()).inv()
    return np.array(inv.tolist(), dtype=np.int64)


# ---------------------------------------------------------------------------


def test_criterion_01_koszul_composition_zero(exact_reps, float_reps):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    checked, worst_float = 0, 0.0
    for reps, exact in ((exact_reps, True), (float_reps, False)):
        for _, rho in reps:
            be = rho.backend
            probes = list(candidate_characters(rho))
            from jointspec.lie import character_space

            basis = character_space(rho.algebra)
            for _ in range(2):
                coeffs = rng.integers(-4, 5, size=basis.shape[1])
                vals = basis @ (EXACT.asarray([int(c) for c in coeffs]) if exact else coeffs.astype(complex))
                probes.append(tuple(vals))
            for f in probes:
                res = koszul_complex(shift(rho, list(f)), verify=False).composition_residuals()
                checked += 1
                if exact:
                    assert all(r == 0 for r in res)
                else:
                    worst_float = max([worst_float] + list(res))
    elapsed = time.perf_counter() - start
    ok = worst_float <= 10 * TAU and elapsed < 5.0
    record(1, ok, f"{checked} complexes, exact residual 0, float residual {worst_float:.2e} <= 10*tau, {elapsed:.2f}s < 5s")


def _spectrum_matrices(rng, count):
    out = []
    while len(out) < count:
        t = np.triu(rng.integers(-3, 4, size=(4, 4)))
        if len(out) % 3 == 2:
            # one rotation block gives a conjugate pair a +- b i
            a, b = int(rng.integers(-2, 3)), int(rng.integers(1, 3))
            t[:2, :2] = [[a, -b], [b, a]]
        s = unimodular(rng, 4)
        out.append(s @ t @ int_inverse(s))
    return out


def test_criterion_02_single_operator_oracle():
    rng = np.random.default_rng(2)
    L = abelian(1)
    bad = []
    for i, m in enumerate(_spectrum_matrices(rng, 50)):
        x = sympy.symbols("x")
        roots = sympy.roots(sympy.Matrix(m.tolist()).charpoly(x).as_expr(), x)
        expected = CharSet(EXACT, 1, [(from_sympy(z),) for z in roots])
        r = compute_spectra(from_matrices(L, [EXACT.asarray(m.tolist())]))
        if not (r.sigma == expected and r.delta(0) == expected and r.pi(0) == expected):
            bad.append(i)
    record(2, not bad, f"50 matrices, sigma = char-poly roots and sigma_delta,0 = sigma_pi,0 = sigma; failures {bad}")


def oracle_homology(a: sympy.Matrix, b: sympy.Matrix, p, q) -> list:
    """Koszul homology of the commuting pair (a - p, b - q), from sympy ranks."""
    n = a.shape[0]
    ap, bq = a - p * sympy.eye(n), b - q * sympy.eye(n)
    d1 = ap.row_join(bq)
    d2 = (-bq).col_join(ap)
    r1, r2 = d1.rank(), d2.rank()
    return [n - r1, 2 * n - r1 - r2, n - r2]


def test_criterion_03_commuting_tuple_oracle():
    rng = np.random.default_rng(3)
    L = abelian(2)
    bad = []
    for i in range(20):
        a = np.triu(rng.integers(-2, 3, size=(4, 4)))
        c = rng.integers(-2, 3, size=3)
        b = c[0] * a @ a + c[1] * a + c[2] * np.eye(4, dtype=np.int64)
        if i % 4 == 3:
            # a pair that is not a polynomial in one another
            a = np.diag(rng.integers(-2, 3, size=4))
            a[0, 1] = 0
            b = np.diag(rng.integers(-2, 3, size=4))
            b[2, 3] = int(rng.integers(1, 3))
            a[2, 2] = a[3, 3]
        assert not (a @ b - b @ a).any()
        r = compute_spectra(from_matrices(L, [EXACT.asarray(a.tolist()), EXACT.asarray(b.tolist())]))
        diag_pairs = CharSet(EXACT, 2, [(GaussQ(int(a[k, k])), GaussQ(int(b[k, k]))) for k in range(4)])
        sa, sb = sympy.Matrix(a.tolist()), sympy.Matrix(b.tolist())
        grid = set(product({int(a[k, k]) for k in range(4)} | {9}, {int(b[k, k]) for k in range(4)} | {-9}))
        brute = CharSet(EXACT, 2, [(GaussQ(p), GaussQ(q)) for p, q in grid if any(oracle_homology(sa, sb, p, q))])
        if not (r.sigma == diag_pairs == brute):
            bad.append(i)
    record(3, not bad, f"20 commuting upper-triangular pairs, Taylor = joint diagonal = brute-force homology; failures {bad}")


def test_criterion_04_split_equals_taylor(exact_reps, float_reps):
    bad, worst = [], 0.0
    for reps in (exact_reps, float_reps):
        for name, rho in reps:
            r = compute_spectra(rho)
            worst = max(worst, r.homotopy_residual)
            for p in range(rho.algebra.dim + 1):
                if r.sets["sp_p"][p] != r.sigma_p(p):
                    bad.append((name, p))
            if r.sp != r.sigma:
                bad.append((name, "sp"))
    ok = not bad and worst <= 10 * TAU
    record(4, ok, f"sp_p = sigma_p on {len(exact_reps)} reps x 2 backends; homotopy residual {worst:.2e} <= 10*tau; failures {bad[:5]}")


def random_projector(rng, n: int):
    d = np.diag(rng.integers(0, 2, size=n))
    s = unimodular(rng, n)
    return EXACT.asarray((s @ d @ int_inverse(s)).tolist())


def test_criterion_05_essential_sets_and_projector_ranks(exact_reps):
    nonempty = []
    families = 0
    for name, rho in exact_reps:
        r = compute_spectra(rho)
        ess = r.essential_sets()
        families = max(families, len(ess))
        for key, val in ess.items():
            levels = val if isinstance(val, list) else [val]
            if any(len(s) for s in levels):
                nonempty.append((name, key))
    rng = np.random.default_rng(5)
    rank_bad = 0
    for _ in range(100):
        k1 = random_projector(rng, int(rng.integers(1, 5)))
        k2 = random_projector(rng, int(rng.integers(1, 5)))
        assert EXACT.is_zero(k1 @ k1 - k1) and EXACT.is_zero(k2 @ k2 - k2)
        if EXACT.rank(np.kron(k1, k2)) != EXACT.rank(k1) * EXACT.rank(k2):
            rank_bad += 1
    ok = not nonempty and rank_bad == 0
    record(5, ok, f"{families} essential families empty on {len(exact_reps)} reps (nonempty {nonempty[:3]}); rank(kron) multiplicative on 100 projector pairs (bad {rank_bad})")


def test_criterion_06_projection_sweep(exact_corpus):
    start = time.perf_counter()
    verdicts = []
    for e in exact_corpus.entries:
        if e.kind == "rep":
            verdicts.extend(cli.verify_entry(e, ("projection",)))
    elapsed = time.perf_counter() - start
    bad = [v.instance for v in verdicts if not v.equal]
    nil_samples = sum(1 for v in verdicts if "/S" in v.instance)
    ok = not bad and elapsed < 30.0
    record(6, ok, f"{len(verdicts)} projections ({nil_samples} random nilpotent subalgebras) all equal {not bad}, {elapsed:.1f}s < 30s")


def test_criterion_07_duality_shift(exact_corpus):
    inconsistent, not_trace, nil_nonzero, total = [], [], [], 0
    for e in exact_corpus.entries:
        if e.kind not in ("rep", "pair"):
            continue
        for name, rho in entry_reps(e)[: (1 if e.kind == "rep" else 2)]:
            total += 1
            try:
                res = th.check_duality(rho, name)
            except th.NoConsistentShift:
                inconsistent.append(name)
                continue
            if not res.verdict.equal:
                inconsistent.append(name)
            if not res.matches_trace_ad:
                not_trace.append(f"{name} h={res.verdict.data['shift']} trace_ad={res.verdict.data['trace_ad']}")
            if is_nilpotent(rho.algebra) and any(x for x in res.shift):
                nil_nonzero.append(name)
    ok = not inconsistent and not not_trace and not nil_nonzero
    record(
        7,
        ok,
        f"{total} reps: consistent shift {not inconsistent}, nilpotent h = 0 {not nil_nonzero}, "
        f"h = trace(ad) fails on {len(not_trace)}: {not_trace[:2]}",
    )


def _convolve(h1, h2):
    out = [0] * (len(h1) + len(h2) - 1)
    for p, a in enumerate(h1):
        for q, b in enumerate(h2):
            out[p + q] += a * b
    return out


def test_criterion_08_tensor_equalities(exact_corpus):
    bad, kunneth = [], 0
    for e in exact_corpus.entries:
        if e.kind == "pair":
            a, b = e.objects["left"], e.objects["right"]
            for v in (th.check_tensor_theorem(a, b, e.id), th.check_complex_isomorphism(a, b, e.id)):
                if not v.equal:
                    bad.append((v.theorem, e.id))
            for f in candidate_characters(a):
                for g in candidate_characters(b):
                    c1 = koszul_complex(shift(a, list(f)))
                    c2 = koszul_complex(shift(b, list(g)))
                    total = total_tensor_complex(c1, c2).homology_dims()
                    direct = koszul_complex(shift(tensor_rep(a, b), list(f) + list(g))).homology_dims()
                    kunneth += 1
                    if not (total == direct == _convolve(c1.homology_dims(), c2.homology_dims())):
                        bad.append(("kunneth", e.id, f, g))
        elif e.kind == "tuple":
            o = e.objects
            v = th.check_nilpotent_tuple_theorem(o["a"], o["b"], e.backend, e.id, o["d1"], o["d2"])
            if not v.equal:
                bad.append(("5.2", e.id))
    record(8, not bad, f"tensor levels equal on every pair and tuple, {kunneth} Kunneth/intertwiner checks; failures {bad[:3]}")


def test_criterion_09_multiplication_and_diagonal(exact_corpus):
    bad = []
    for e in exact_corpus.entries:
        o = e.objects
        if e.kind == "pair":
            vs = [th.check_multiplication_theorem(o["left"], o["right"], e.id)]
        elif e.kind == "tuple":
            vs = [th.check_multiplication_tuple_theorem(o["a"], o["b"], e.backend, e.id, o["d1"], o["d2"])]
        elif e.kind == "diagonal":
            vs = th.check_diagonal_theorems(o["left"], o["right"], e.id)
        else:
            continue
        bad.extend((v.theorem, e.id, v.verdict) for v in vs if not v.equal)
    a = from_matrices(abelian(1), [EXACT.asarray([[1, 0], [0, 2]])])
    b = from_matrices(abelian(1), [EXACT.asarray([[5, 0], [0, 7]])])
    from jointspec.reps import diagonal_rep

    sylvester = compute_spectra(diagonal_rep(a, b, twisted=True)).sigma
    expected = CharSet(EXACT, 1, [(GaussQ(x),) for x in (-4, -6, -3, -5)])
    ok = not bad and sylvester == expected
    record(9, ok, f"multiplication/diagonal verdicts equal (failures {bad[:3]}); Sylvester set {sylvester.format()}")


def test_criterion_10_functoriality():
    c = cp.loads(cp.nilpotent_epimorphisms(10, seed=7).dumps())
    verdicts = [th.check_functoriality(e.objects["rep"], e.objects["map"], e.objects["source"], e.id) for e in c.entries]
    labels = {cmp.label.split()[0] for v in verdicts for cmp in v.comparisons}
    bad = [v.instance for v in verdicts if not v.equal]
    ok = len(verdicts) == 10 and not bad and labels == {"(i)", "(ii)", "(iii)", "(iv)"}
    record(10, ok, f"{len(verdicts)} nilpotent epimorphisms, identities {sorted(labels)} all equal; failures {bad}")


def test_criterion_11_full_sweep():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "jointspec", "verify", "--theorem", "all"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    elapsed = time.perf_counter() - start
    totals = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    ok = proc.returncode == 0 and elapsed < 60.0
    record(11, ok, f"exit {proc.returncode}, {elapsed:.1f}s < 60s, {totals}")
