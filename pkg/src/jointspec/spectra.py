"""Weights, candidate characters and the joint spectra built from Koszul homology.

For a finite-dimensional representation rho of a solvable algebra L, a
character f can only have non-exact shifted Koszul complex when
f = lambda + mu with lambda a weight of rho and mu a sum of distinct weights
of the adjoint representation (a weight of wedge^p L). Reason: every element
a of L acts on the complex by a chain map homotopic to zero (Cartan's
formula), so the complex is exact on each generalized eigenspace of that
action with a nonzero eigenvalue; for a generic a this leaves only the zero
weight of X (x) wedge L twisted by -f. These sums form the candidate set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .koszul import data_scale, koszul_complex
from .lie import LieAlgebra, character_space, triangularize, vanishes_on_derived
from .linalg import Backend, NumericalBreakdown, eigen_cluster_radius, homotopy_residual, solve_homotopy
from .reps import Representation, adjoint_rep, shift


class AssumptionViolated(RuntimeError):
    """A character outside the candidate set has a non-exact Koszul complex."""

    def __init__(self, message: str, character=None):
        super().__init__(message)
        self.character = character


# ---------------------------------------------------------------------------
# character sets


class CharSet:
    """Finite set of characters, stored as coordinate tuples.

    Float backends compare component-wise at ``100 * tol`` (relative to the
    entry size); exact backends compare exactly.
    """

    __slots__ = ("backend", "dim", "points")

    def __init__(self, backend: Backend, dim: int, points: Iterable = ()):
        self.backend = backend
        self.dim = dim
        kept: list[tuple] = []
        for pt in points:
            t = tuple(pt)
            if len(t) != dim:
                raise ValueError(f"character of length {len(t)} in a set of dimension {dim}")
            if not any(self._same(t, q) for q in kept):
                kept.append(t)
        kept.sort(key=lambda t: tuple(backend.sort_key(x) for x in t))
        self.points = tuple(kept)

    def _same(self, a: tuple, b: tuple) -> bool:
        return all(self.backend.close(x, y) for x, y in zip(a, b))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __bool__(self):
        return bool(self.points)

    def __contains__(self, pt) -> bool:
        t = tuple(pt)
        return any(self._same(t, q) for q in self.points)

    def issubset(self, other: "CharSet") -> bool:
        return all(p in other for p in self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharSet):
            return NotImplemented
        return self.dim == other.dim and self.issubset(other) and other.issubset(self)

    __hash__ = None

    def __or__(self, other: "CharSet") -> "CharSet":
        return CharSet(self.backend, self.dim, self.points + other.points)

    def missing_from(self, other: "CharSet"):
        """A point of self not in other, or None."""
        return next((p for p in self.points if p not in other), None)

    def shift(self, h: Sequence) -> "CharSet":
        return CharSet(self.backend, self.dim, (tuple(x + y for x, y in zip(p, h)) for p in self.points))

    def negate(self) -> "CharSet":
        return CharSet(self.backend, self.dim, (tuple(-x for x in p) for p in self.points))

    def product(self, other: "CharSet") -> "CharSet":
        return CharSet(self.backend, self.dim + other.dim, (p + q for p in self.points for q in other.points))

    def sumset(self, other: "CharSet") -> "CharSet":
        return CharSet(self.backend, self.dim, (tuple(x + y for x, y in zip(p, q)) for p in self.points for q in other.points))

    def apply(self, matrix: np.ndarray) -> "CharSet":
        """Image under the linear map p -> matrix @ p (restriction or pullback)."""
        rows = matrix.shape[0]
        be = self.backend
        pts = []
        for p in self.points:
            if rows == 0:
                pts.append(())
                continue
            v = matrix @ (be.asarray(list(p)) if be.exact else np.array(p, dtype=complex)) if self.dim else be.zeros(rows)
            pts.append(tuple(v))
        return CharSet(be, rows, pts)

    def to_json(self) -> list:
        return [[self.backend.to_json(x) for x in p] for p in self.points]

    def format(self) -> str:
        from .linalg import format_scalar

        if not self.points:
            return "{}"
        items = []
        for p in self.points:
            body = ", ".join(format_scalar(x) for x in p)
            items.append(f"({body})" if len(p) != 1 else body)
        return "{" + ", ".join(items) + "}"

    def __repr__(self):
        return f"CharSet{self.format()}"

    @classmethod
    def union(cls, backend: Backend, dim: int, sets: Iterable["CharSet"]) -> "CharSet":
        pts: list = []
        for s in sets:
            pts.extend(s.points)
        return cls(backend, dim, pts)

    @classmethod
    def empty(cls, backend: Backend, dim: int) -> "CharSet":
        return cls(backend, dim, ())


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True, eq=False)
class WeightSystem:
    """Weights (with multiplicity, in flag order) and the triangularizing flag."""

    rep: Representation
    weights: tuple
    flag: np.ndarray

    def distinct(self) -> CharSet:
        return CharSet(self.rep.backend, self.rep.algebra.dim, self.weights)


def _snap_weights(be, mats, wts: np.ndarray) -> np.ndarray:
    # Eigenvector-based weights of defective matrices are only ~sqrt(eps)
    # accurate; cluster means of the eigenvalues are accurate to ~eps.
    out = np.array(wts, dtype=complex)
    for i, m in enumerate(mats):
        evs = np.array(be.eigenvalues(m), dtype=complex)
        radius = eigen_cluster_radius(m, be.tol)
        for j in range(out.shape[0]):
            dist = np.abs(evs - out[j, i])
            k = int(np.argmin(dist))
            if dist[k] > radius:
                raise NumericalBreakdown("weight is not near any eigenvalue of its basis matrix")
            out[j, i] = evs[k]
    return out


def weight_system(rho: Representation) -> WeightSystem:
    """Simultaneous triangularization of rho with its diagonal characters.

    Raises:
        NotSolvable: the algebra is not solvable.
        NumericalBreakdown: an eigenvalue could not be isolated (float) or is
            not a Gaussian rational (exact).
    """
    L = rho.algebra
    be = rho.backend
    d = rho.space_dim
    mats = list(rho.matrices)
    if L.dim == 0:
        return WeightSystem(rho, tuple(() for _ in range(d)), be.eye(d))
    flag, wts = triangularize(L, mats)
    if not be.exact:
        wts = _snap_weights(be, mats, wts)
    inv = be.inv(flag)
    for i, m in enumerate(mats):
        t = inv @ m @ flag
        lower = np.tril(t, -1) if not be.exact else np.array([[t[r, c] if r > c else 0 for c in range(d)] for r in range(d)], dtype=object)
        scale = max(1.0, be.residual(m)) * d * max(1.0, be.residual(flag)) * max(1.0, be.residual(inv))
        if not be.is_zero(lower, scale):
            raise NumericalBreakdown("flag does not triangularize the representation")
        diag = np.array([t[j, j] for j in range(d)], dtype=object if be.exact else complex)
        if be.exact:
            off = not be.is_zero(diag - wts[:, i], scale)
        else:
            off = float(np.max(np.abs(diag - wts[:, i]), initial=0.0)) > eigen_cluster_radius(m, be.tol)
        if off:
            raise NumericalBreakdown("weights disagree with the triangular diagonal")
    for j in range(d):
        if not vanishes_on_derived(L, wts[j]):
            raise NumericalBreakdown("extracted weight is not a character")
    return WeightSystem(rho, tuple(tuple(wts[j]) for j in range(d)), flag)


def adjoint_weight_sums(L: LieAlgebra) -> CharSet:
    """Weights of wedge^p L under ad for all p: sums over sub-multisets of ad weights."""
    be = L.backend
    if L.dim == 0:
        return CharSet(be, 0, [()])
    ws = weight_system(adjoint_rep(L)).weights
    zero = tuple(be.scalar(0) for _ in range(L.dim))
    sums = CharSet(be, L.dim, [zero])
    for w in ws:
        sums = sums | sums.shift(w)
    return sums


def candidate_characters(rho: Representation, weights: WeightSystem | None = None) -> CharSet:
    """Weights of rho plus weights of wedge^p L: a superset of every spectrum."""
    ws = weights or weight_system(rho)
    return ws.distinct().sumset(adjoint_weight_sums(rho.algebra))


# ---------------------------------------------------------------------------
# compactness oracle


class CompactnessOracle:
    """Decides the Fredholm-type questions behind the essential spectra."""

    name = "abstract"

    def homology_infinite(self, dim_h: int) -> bool:
        raise NotImplementedError

    def range_closed(self, boundary: np.ndarray) -> bool:
        raise NotImplementedError

    def is_compact(self, operator: np.ndarray) -> bool:
        raise NotImplementedError


class FiniteDimensionalCompactness(CompactnessOracle):
    """Every operator on a finite-dimensional space is compact with closed range."""

    name = "finite-dimensional"

    def homology_infinite(self, dim_h: int) -> bool:
        return False

    def range_closed(self, boundary: np.ndarray) -> bool:
        return True

    def is_compact(self, operator: np.ndarray) -> bool:
        return True


FINITE_DIMENSIONAL = FiniteDimensionalCompactness()


# ---------------------------------------------------------------------------
# spectra


FAMILIES = (
    "sigma_p", "sigma", "sigma_delta", "sigma_pi",
    "sp_p", "sp", "sp_delta", "sp_pi",
    "sigma_p_e", "sigma_e", "sigma_delta_e", "sigma_pi_e",
    "sp_p_e", "sp_e", "sp_delta_e", "sp_pi_e",
)  # fmt: skip


@dataclass
class CandidateData:
    character: tuple
    homology: list
    split_defect: list  # rank of the homotopy projector per degree
    homology_infinite: list
    range_not_closed: list
    fredholm_split: list


@dataclass
class SpectrumReport:
    """Homology data at each candidate and the sixteen spectral families.

    Indexed families are lists over p (or k) = 0..n.
    """

    algebra_dim: int
    backend: Backend
    weights: tuple
    candidates: list
    homotopy_residual: float
    sets: dict = field(default_factory=dict)

    def level(self, family: str, kind: str, k: int) -> CharSet:
        """Level k of the delta or pi chain of a family (``sigma``, ``sp``,
        ``sigma_e`` or ``sp_e``); k beyond n gives the full set."""
        base = family[:-2] if family.endswith("_e") else family
        ess = "_e" if family.endswith("_e") else ""
        if k < 0:
            return CharSet.empty(self.backend, self.algebra_dim)
        return self.sets[f"{base}_{kind}{ess}"][min(k, self.algebra_dim)]

    @property
    def sigma(self) -> CharSet:
        return self.sets["sigma"]

    @property
    def sp(self) -> CharSet:
        return self.sets["sp"]

    def sigma_p(self, p: int) -> CharSet:
        return self.sets["sigma_p"][p] if 0 <= p <= self.algebra_dim else CharSet.empty(self.backend, self.algebra_dim)

    def delta(self, k: int, family: str = "sigma") -> CharSet:
        """sigma_delta,k (or the sp / essential analogue); k beyond n gives the full set."""
        return self.level(family, "delta", k)

    def pi(self, k: int, family: str = "sigma") -> CharSet:
        return self.level(family, "pi", k)

    def essential_sets(self) -> dict:
        return {k: v for k, v in self.sets.items() if k.endswith("_e")}

    def to_json(self) -> dict:
        be = self.backend
        n = self.algebra_dim

        def seq(name):
            return [[k, self.sets[name][k].to_json()] for k in range(n + 1)]

        return {
            "algebra_dim": n,
            "backend": be.name,
            "weights": CharSet(be, n, self.weights).to_json(),
            "candidates": [[be.to_json(x) for x in c.character] for c in self.candidates],
            "per_weight_homology": [list(c.homology) for c in self.candidates],
            "homotopy_residual": self.homotopy_residual,
            "sets": {
                "taylor": self.sigma.to_json(),
                "taylor_by_degree": seq("sigma_p"),
                "slodkowski_delta": seq("sigma_delta"),
                "slodkowski_pi": seq("sigma_pi"),
                "split": self.sp.to_json(),
                "split_by_degree": seq("sp_p"),
                "split_delta": seq("sp_delta"),
                "split_pi": seq("sp_pi"),
                "essential_taylor": self.sets["sigma_e"].to_json(),
                "essential_by_degree": seq("sigma_p_e"),
                "essential_delta": seq("sigma_delta_e"),
                "essential_pi": seq("sigma_pi_e"),
                "essential_split": self.sets["sp_e"].to_json(),
                "essential_split_by_degree": seq("sp_p_e"),
                "essential_split_delta": seq("sp_delta_e"),
                "essential_split_pi": seq("sp_pi_e"),
            },
        }


def _assemble(be: Backend, n: int, per_degree: list[list[tuple]]) -> tuple:
    by_p = [CharSet(be, n, pts) for pts in per_degree]
    total = CharSet.union(be, n, by_p)
    delta = [CharSet.union(be, n, by_p[: k + 1]) for k in range(n + 1)]
    pi = [CharSet.union(be, n, by_p[n - k :]) for k in range(n + 1)]
    return by_p, total, delta, pi


def analyse_character(rho: Representation, f, oracle: CompactnessOracle = FINITE_DIMENSIONAL):
    """Koszul homology and homotopy data of rho - f.

    Returns:
        ``(CandidateData, complex, max homotopy residual)``.
    """
    be = rho.backend
    cx = koszul_complex(shift(rho, be.asarray(list(f)) if be.exact else np.array(f, dtype=complex)), scale=data_scale(rho))
    dims = cx.homology_dims()
    defects, residual = [], 0.0
    for p in range(cx.top + 1):
        d_next, d_here = cx.boundary(p + 1), cx.boundary(p)
        h_here, h_prev, k = solve_homotopy(d_next, d_here, be, cx.scale)
        residual = max(residual, homotopy_residual(d_next, d_here, h_here, h_prev, k, be))
        defects.append(be.rank(k, 1.0))
    if defects != dims:
        raise NumericalBreakdown(f"homotopy defect {defects} disagrees with homology {dims}")
    data = CandidateData(
        character=tuple(f),
        homology=dims,
        split_defect=defects,
        homology_infinite=[oracle.homology_infinite(h) for h in dims],
        # the closed-range clause of the pi-family can only fire in infinite
        # dimension; the oracle reports every finite-dimensional range closed
        range_not_closed=[not oracle.range_closed(cx.boundary(p)) for p in range(cx.top + 1)],
        fredholm_split=[oracle.is_compact(be.eye(1)) for _ in dims],
    )
    return data, cx, residual


def compute_spectra(rho: Representation, oracle: CompactnessOracle = FINITE_DIMENSIONAL) -> SpectrumReport:
    """All sixteen spectral families of rho, evaluated on the candidate set."""
    be = rho.backend
    n = rho.algebra.dim
    ws = weight_system(rho)
    cands = candidate_characters(rho, ws)
    datas, residual = [], 0.0
    for f in cands:
        data, _, res = analyse_character(rho, f, oracle)
        datas.append(data)
        residual = max(residual, res)
    sig = [[c.character for c in datas if c.homology[p]] for p in range(n + 1)]
    # split side: degree p fails to split exactly when the projector k_p is nonzero
    spl = [[c.character for c in datas if c.split_defect[p]] for p in range(n + 1)]
    ess = [[c.character for c in datas if c.homology_infinite[p]] for p in range(n + 1)]
    ess_sp = [[c.character for c in datas if not c.fredholm_split[p]] for p in range(n + 1)]
    sets: dict = {}
    for prefix, per in (("sigma", sig), ("sp", spl), ("sigma_e", ess), ("sp_e", ess_sp)):
        by_p, total, delta, pi = _assemble(be, n, per)
        base = prefix.replace("_e", "")
        suffix = "_e" if prefix.endswith("_e") else ""
        sets[f"{base}_p{suffix}"] = by_p
        sets[f"{base}{suffix}"] = total
        sets[f"{base}_delta{suffix}"] = delta
        sets[f"{base}_pi{suffix}"] = pi
    # the pi-family closed-range clause
    for k in range(n + 1):
        extra = [c.character for c in datas if c.range_not_closed[n - k]]
        if extra:
            sets["sigma_pi_e"][k] = sets["sigma_pi_e"][k] | CharSet(be, n, extra)
    report = SpectrumReport(n, be, ws.weights, datas, residual, sets)
    _check_report(report)
    return report


def _check_report(r: SpectrumReport) -> None:
    n = r.algebra_dim
    for fam in ("sigma", "sp", "sigma_e", "sp_e"):
        base = fam.replace("_e", "")
        suffix = "_e" if fam.endswith("_e") else ""
        delta, pi, total = r.sets[f"{base}_delta{suffix}"], r.sets[f"{base}_pi{suffix}"], r.sets[f"{base}{suffix}"]
        if not (delta[n] == total and pi[n] == total):
            raise AssertionError(f"{fam}: top Slodkowski levels differ from the full set")
        for k in range(n):
            if not (delta[k].issubset(delta[k + 1]) and pi[k].issubset(pi[k + 1])):
                raise AssertionError(f"{fam}: Slodkowski levels are not monotone")
    for p in range(n + 1):
        if not r.sets["sigma_p"][p] == r.sets["sp_p"][p]:
            raise AssertionError(f"split and Taylor sets differ in degree {p}")


def verify_noncandidate_exactness(rho: Representation, trials: int = 100, seed: int = 0) -> bool:
    """Check that random characters away from the candidates give exact complexes.

    Raises:
        AssumptionViolated: carrying the offending character.
    """
    be = rho.backend
    L = rho.algebra
    rng = np.random.default_rng(seed)
    space = character_space(L)
    cands = candidate_characters(rho)
    done = 0
    attempts = 0
    while done < trials and attempts < 20 * trials:
        attempts += 1
        if be.exact:
            coeffs = [be.scalar(complex(int(a), int(b))) for a, b in rng.integers(-9, 10, size=(space.shape[1], 2))]
            f = space @ be.asarray(coeffs) if space.shape[1] else be.zeros(L.dim)
        else:
            coeffs = rng.normal(size=space.shape[1]) + 1j * rng.normal(size=space.shape[1])
            f = space @ (3 * coeffs) if space.shape[1] else be.zeros(L.dim)
        if tuple(f) in cands:
            continue
        done += 1
        dims = koszul_complex(shift(rho, f), scale=data_scale(rho)).homology_dims()
        if any(dims):
            raise AssumptionViolated(f"non-candidate character has homology {dims}", tuple(f))
    return True
