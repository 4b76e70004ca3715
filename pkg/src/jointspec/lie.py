"""Finite-dimensional complex Lie algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import EXACT, Backend, GaussQ, LinalgError, NumericalBreakdown, _rref


class LieError(ValueError):
    """Base class for Lie-algebra errors."""


class InvalidAlgebra(LieError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


class DimensionMismatch(LieError):
    pass


class NotCharacter(LieError):
    pass


class NotSolvable(LieError):
    pass


class NotSubalgebra(LieError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra with ``[e_i, e_j] = sum_k constants[i, j, k] e_k``."""

    constants: np.ndarray
    backend: Backend = EXACT
    labels: tuple = ()
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        c = self.constants
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InvalidAlgebra(f"structure constants must be n x n x n, got {c.shape}")
        self.backend.check(c)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(c.shape[0])))
        if len(self.labels) != c.shape[0]:
            raise InvalidAlgebra("one label per basis element is required")
        if self.validate:
            self._validate()

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def _validate(self):
        c = self.constants
        be = self.backend
        scale = max(1.0, be.residual(c)) ** 2
        if not be.is_zero(c + c.transpose(1, 0, 2), max(1.0, be.residual(c))):
            raise InvalidAlgebra("structure constants are not antisymmetric")
        # [[e_i,e_j],e_l] summed cyclically
        t = np.einsum("ijk,klm->ijlm", c, c)
        jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        if not be.is_zero(jac, scale):
            raise InvalidAlgebra("structure constants violate the Jacobi identity")

    # ------------------------------------------------------------------
    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, backend: Backend = EXACT, labels=()) -> "LieAlgebra":
        """Build from ``{(i, j): {k: value}}`` for i < j; antisymmetry is filled in."""
        c = backend.zeros((dim, dim, dim))
        for (i, j), terms in brackets.items():
            for k, v in terms.items():
                c[i, j, k] = backend.scalar(v)
                c[j, i, k] = -backend.scalar(v)
        return cls(c, backend, tuple(labels))

    def vector(self, data) -> np.ndarray:
        v = self.backend.asarray(data)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v

    def basis_vector(self, i: int) -> np.ndarray:
        return self.backend.eye(self.dim)[:, i]

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x)
        y = np.asarray(y)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise DimensionMismatch(f"vectors must have length {self.dim}")
        if self.dim == 0:
            return self.backend.zeros(0)
        return np.tensordot(np.tensordot(x, self.constants, axes=(0, 0)), y, axes=(0, 0))

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad(e_i): column j holds [e_i, e_j]."""
        return self.constants[i].T.copy()

    def ad_matrices(self) -> list[np.ndarray]:
        return [self.ad(i) for i in range(self.dim)]

    def whole(self) -> "Subspace":
        return Subspace(self, self.backend.eye(self.dim))

    def zero(self) -> "Subspace":
        return Subspace(self, self.backend.zeros((self.dim, 0)))

    def span(self, vectors) -> "Subspace":
        """Subspace spanned by the given coordinate vectors (any may be dependent)."""
        vecs = [np.asarray(v) for v in vectors]
        if not vecs:
            return self.zero()
        return Subspace(self, self.backend.colspace(np.stack(vecs, axis=1)))

    def derived_algebra(self) -> "Subspace":
        return bracket_span(self.whole(), self.whole())

    def is_abelian(self) -> bool:
        return self.backend.is_zero(self.constants)

    def to_json(self) -> dict:
        be = self.backend
        entries = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(self.dim):
                    v = self.constants[i, j, k]
                    if v:
                        entries.append([i, j, k] + be.to_json(v))
        return {"dim": self.dim, "constants": entries, "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict, backend: Backend = EXACT) -> "LieAlgebra":
        try:
            n = int(data["dim"])
            c = backend.zeros((n, n, n))
            for row in data.get("constants", []):
                i, j, k = (int(t) for t in row[:3])
                re = row[3] if len(row) > 3 else 1
                im = row[4] if len(row) > 4 else 0
                if not (0 <= i < n and 0 <= j < n and 0 <= k < n) or i == j:
                    raise InvalidAlgebra(f"bad structure-constant index {row[:3]}")
                v = backend.from_json(re, im)
                c[i, j, k] = v
                c[j, i, k] = -v
            labels = tuple(data.get("labels") or ())
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, LieError):
                raise
            raise InvalidAlgebra(f"malformed algebra description: {exc}") from exc
        return cls(c, backend, labels)

    def with_backend(self, backend: Backend) -> "LieAlgebra":
        if backend == self.backend:
            return self
        return LieAlgebra(convert(self.constants, self.backend, backend), backend, self.labels, validate=False)


def convert(a: np.ndarray, src: Backend, dst: Backend) -> np.ndarray:
    """Move an array between backends (exact to float rounds)."""
    if src.exact == dst.exact:
        return a
    if dst.exact:
        return dst.asarray(a)
    return np.array([complex(x) for x in a.flat], dtype=complex).reshape(a.shape)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of a Lie algebra spanned by independent basis columns."""

    ambient: LieAlgebra
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def backend(self) -> Backend:
        return self.ambient.backend

    def contains(self, v) -> bool:
        be = self.backend
        if self.dim == 0:
            return be.is_zero(np.asarray(v))
        return be.rank(np.column_stack([self.basis, v])) == self.dim

    def contains_space(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return self.backend.rank(np.concatenate([self.basis, other.basis], axis=1)) == self.dim

    def equals(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains_space(other)

    def is_subalgebra(self) -> bool:
        return self.contains_space(bracket_span(self, self))

    def is_ideal(self) -> bool:
        return self.contains_space(bracket_span(self, self.ambient.whole()))

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in this basis (v must lie in the subspace)."""
        return self.backend.solve(self.basis, np.asarray(v))

    def induced_algebra(self) -> LieAlgebra:
        """The subalgebra as an abstract Lie algebra in its own basis."""
        if not self.is_subalgebra():
            raise NotSubalgebra("subspace is not closed under the bracket")
        be = self.backend
        k = self.dim
        c = be.zeros((k, k, k))
        L = self.ambient
        for a in range(k):
            for b in range(a + 1, k):
                coords = self.coordinates(L.bracket(self.basis[:, a], self.basis[:, b]))
                c[a, b, :] = coords
                c[b, a, :] = -coords
        labels = tuple(f"b{i}" for i in range(k))
        return LieAlgebra(c, be, labels, validate=not be.exact)


def bracket_span(a: Subspace, b: Subspace) -> Subspace:
    """[A, B] as a subspace."""
    L = a.ambient
    be = L.backend
    vecs = [L.bracket(a.basis[:, i], b.basis[:, j]) for i in range(a.dim) for j in range(b.dim)]
    if not be.exact:
        # rank is relative, so roundoff-only brackets must go before the span
        scale = max(1.0, be.residual(L.constants)) * max(1.0, be.residual(a.basis)) * max(1.0, be.residual(b.basis))
        vecs = [v for v in vecs if not be.is_zero(v, scale)]
    return L.span(vecs)


def bracket(L: LieAlgebra, x, y) -> np.ndarray:
    return L.bracket(x, y)


def derived_series(L: LieAlgebra) -> list[Subspace]:
    """L, [L,L], ... until the dimension stops dropping (ends in 0 iff solvable)."""
    series = [L.whole()]
    while series[-1].dim:
        nxt = bracket_span(series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def lower_central_series(L: LieAlgebra) -> list[Subspace]:
    """L, [L,L], [L,[L,L]], ... until the dimension stops dropping."""
    whole = L.whole()
    series = [whole]
    while series[-1].dim:
        nxt = bracket_span(whole, series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def is_solvable(L: LieAlgebra) -> bool:
    return derived_series(L)[-1].dim == 0


def is_nilpotent(L: LieAlgebra) -> bool:
    return lower_central_series(L)[-1].dim == 0


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True, eq=False)
class Character:
    """Linear functional on L vanishing on [L, L], stored by its values on the basis."""

    algebra: LieAlgebra
    values: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.values.shape != (self.algebra.dim,):
            raise DimensionMismatch("character needs one value per basis element")
        if self.check and not vanishes_on_derived(self.algebra, self.values):
            raise NotCharacter("functional does not vanish on the derived algebra")

    def __call__(self, v) -> object:
        return np.dot(self.values, np.asarray(v)) if self.algebra.dim else self.algebra.backend.scalar(0)

    def as_tuple(self) -> tuple:
        return tuple(self.values)


def vanishes_on_derived(L: LieAlgebra, values) -> bool:
    """True when ``f([e_i, e_j]) = 0`` for all basis pairs."""
    if L.dim == 0:
        return True
    be = L.backend
    vals = np.asarray(values)
    pair_values = np.tensordot(L.constants, vals, axes=(2, 0))
    return be.is_zero(pair_values, max(1.0, be.residual(vals)) * max(1.0, be.residual(L.constants)))


def character_space(L: LieAlgebra) -> np.ndarray:
    """Basis (columns) of the space of characters: the annihilator of [L, L]."""
    derived = L.derived_algebra()
    be = L.backend
    if derived.dim == 0:
        return be.eye(L.dim)
    return be.nullspace(derived.basis.T.copy())


def modular_character(L: LieAlgebra) -> Character:
    """h(e_i) = trace(ad e_i) = sum_j c[i][j][j]."""
    if not is_solvable(L):
        raise NotSolvable("modular character is only defined here for solvable algebras")
    be = L.backend
    vals = be.zeros(L.dim)
    for i in range(L.dim):
        acc = be.scalar(0)
        for j in range(L.dim):
            acc = acc + L.constants[i, j, j]
        vals[i] = acc
    return Character(L, vals)


def restrict_character(f: Character, sub: Subspace) -> Character:
    """f composed with the inclusion of a subalgebra, in the subalgebra's basis."""
    if not sub.is_subalgebra():
        raise NotSubalgebra("restriction target is not a subalgebra")
    alg = sub.induced_algebra()
    vals = f.values @ sub.basis if sub.dim else f.algebra.backend.zeros(0)
    return Character(alg, vals)


def extend_by_zero(values, sub: Subspace, complement: np.ndarray | None = None) -> np.ndarray:
    """Functional on L equal to ``values`` on ``sub`` and zero on a complement."""
    be = sub.backend
    n = sub.ambient.dim
    comp = be.complement(sub.basis, n) if complement is None else complement
    full = np.concatenate([sub.basis, comp], axis=1)
    rhs = np.concatenate([be.asarray(values) if be.exact else np.asarray(values, dtype=complex), be.zeros(comp.shape[1])])
    return be.solve(full.T.copy(), rhs)


def compose_character(f: Character, hom: np.ndarray, source: LieAlgebra) -> Character:
    """f composed with a Lie morphism ``source -> f.algebra`` given as a matrix."""
    return Character(source, hom.T @ f.values if source.dim else source.backend.zeros(0))


# ---------------------------------------------------------------------------
# algebra constructions


def direct_sum(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    be = L1.backend
    if be != L2.backend:
        raise DimensionMismatch("direct sum of algebras on different backends")
    n, m = L1.dim, L2.dim
    c = be.zeros((n + m, n + m, n + m))
    c[:n, :n, :n] = L1.constants
    c[n:, n:, n:] = L2.constants
    labels = tuple(L1.labels) + tuple(L2.labels)
    if len(set(labels)) != len(labels):
        labels = tuple(f"{l}_1" for l in L1.labels) + tuple(f"{l}_2" for l in L2.labels)
    return LieAlgebra(c, be, labels, validate=False)


def opposite(L: LieAlgebra) -> LieAlgebra:
    """[x, y]^op = -[x, y]."""
    return LieAlgebra(-L.constants if L.dim else L.constants.copy(), L.backend, L.labels, validate=False)


def quotient(L: LieAlgebra, ideal: Subspace):
    """Quotient algebra L/I and the projection matrix L -> L/I."""
    if not ideal.is_ideal():
        raise LieError("quotient requires an ideal")
    be = L.backend
    comp = be.complement(ideal.basis, L.dim)
    full = np.concatenate([ideal.basis, comp], axis=1)
    proj = be.inv(full)[ideal.dim :]
    q = comp.shape[1]
    c = be.zeros((q, q, q))
    for a in range(q):
        for b in range(q):
            c[a, b, :] = proj @ L.bracket(comp[:, a], comp[:, b])
    return LieAlgebra(c, be, tuple(f"q{i}" for i in range(q))), proj


def is_homomorphism(hom: np.ndarray, source: LieAlgebra, target: LieAlgebra) -> bool:
    """Whether ``hom`` (target.dim x source.dim) preserves brackets."""
    be = source.backend
    for i in range(source.dim):
        for j in range(i + 1, source.dim):
            lhs = hom @ source.constants[i, j]
            rhs = target.bracket(hom[:, i], hom[:, j])
            if not be.is_zero(lhs - rhs, max(1.0, be.residual(hom)) ** 2):
                return False
    return True


def abelian(n: int, backend: Backend = EXACT) -> LieAlgebra:
    return LieAlgebra(backend.zeros((n, n, n)), backend, validate=False)


def heisenberg(backend: Backend = EXACT) -> LieAlgebra:
    """h3 with [x, y] = z."""
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, backend, ("x", "y", "z"))


def axb(backend: Backend = EXACT) -> LieAlgebra:
    """Two-dimensional non-abelian algebra with [x, y] = y."""
    return LieAlgebra.from_brackets(2, {(0, 1): {1: 1}}, backend, ("x", "y"))


def sl2(backend: Backend = EXACT) -> LieAlgebra:
    """sl2 with [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
    return LieAlgebra.from_brackets(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, backend, ("h", "e", "f"))


# ---------------------------------------------------------------------------
# Lie's theorem


def _combine(x: np.ndarray, mats: list[np.ndarray], be: Backend) -> np.ndarray:
    d = mats[0].shape[0] if mats else 0
    acc = be.zeros((d, d))
    for coef, m in zip(x, mats):
        if coef:
            acc = acc + coef * m
    return acc


def _acting_order(L: LieAlgebra) -> list[np.ndarray]:
    """Basis vectors of the derived series terms, smallest nonzero term first."""
    series = derived_series(L)
    if series[-1].dim:
        raise NotSolvable("algebra is not solvable")
    order = []
    for term in reversed(series[:-1]):
        order.extend(term.basis[:, i] for i in range(term.dim))
    return order


def _common_eigenvector(mats, order, be: Backend):
    d = mats[0].shape[0]
    w = be.eye(d)
    for x in order:
        if w.shape[1] == 1:
            break
        a = _combine(x, mats, be)
        if be.exact:
            restricted = be.solve(w, a @ w)
        else:
            restricted = w.conj().T @ a @ w
        mu = be.eigenvalues(restricted)[0]
        kernel = be.nullspace(restricted - mu * be.eye(w.shape[1]), max(1.0, be.residual(a)))
        if kernel.shape[1] == 0:
            raise NumericalBreakdown("lost the common eigenspace")
        w = w @ kernel
    return w[:, 0]


def triangularize(L: LieAlgebra, mats: list[np.ndarray]):
    """Simultaneously triangularize a representation of a solvable algebra.

    Works by repeatedly extracting a common eigenvector and passing to the
    quotient. The eigenvector search walks the derived series from the
    bottom: on the common eigenspace of the smaller ideal, the elements of
    the next term commute, so successive eigenspaces stay invariant.

    Args:
        L: the acting algebra (must be solvable).
        mats: one d x d matrix per basis element of L.

    Returns:
        ``(flag, weights)``: ``flag`` is a d x d invertible matrix whose leading
        columns span invariant subspaces, and ``weights[j, i]`` is the
        eigenvalue of ``mats[i]`` at flag position j.
    """
    be = L.backend
    order = _acting_order(L)
    d = mats[0].shape[0] if mats else 0
    if L.dim == 0:
        return be.eye(d), be.zeros((d, 0))
    flag_cols = []
    weights = []
    carry = be.eye(d)  # columns: current quotient basis in original coordinates
    cur = [m.copy() for m in mats]
    while cur[0].shape[0] > 0:
        size = cur[0].shape[0]
        v = _common_eigenvector(cur, order, be)
        if be.exact:
            p = next(i for i in range(size) if v[i])
            lam = [(m @ v)[p] / v[p] for m in cur]
            comp = be.eye(size)[:, [i for i in range(size) if i != p]]
            q = np.concatenate([v.reshape(size, 1), comp], axis=1)
            q_inv = be.inv(q)
            cur = [(q_inv @ m @ q)[1:, 1:] for m in cur]
        else:
            v = v / np.linalg.norm(v)
            lam = [np.vdot(v, m @ v) for m in cur]
            comp = be.complement(v.reshape(size, 1), size)
            cur = [comp.conj().T @ m @ comp for m in cur]
        flag_cols.append(carry @ v)
        weights.append(lam)
        carry = carry @ comp
    flag = np.stack(flag_cols, axis=1) if flag_cols else be.eye(0)
    wt = be.asarray(weights) if be.exact else np.array(weights, dtype=complex).reshape(d, L.dim)
    return flag, wt.reshape(d, L.dim)


@dataclass(frozen=True, eq=False)
class JordanHolderSequence:
    """Chain of ideals 0 = L_0 < L_1 < ... < L_n = L with dim L_i = i."""

    algebra: LieAlgebra
    basis: np.ndarray  # first i columns span L_i

    @property
    def ideals(self) -> list[Subspace]:
        return [Subspace(self.algebra, self.basis[:, :i].copy()) for i in range(self.algebra.dim + 1)]


def jordan_holder(L: LieAlgebra) -> JordanHolderSequence:
    """A Jordan-Holder chain of ideals refining the derived series.

    Each derived quotient D_j / D_{j+1} is an L-module under ad; a flag of
    invariant subspaces there (from :func:`triangularize`) lifts to ideals.
    """
    series = derived_series(L)
    if series[-1].dim:
        raise NotSolvable("Jordan-Holder sequences of ideals need a solvable algebra")
    be = L.backend
    ads = L.ad_matrices()
    cols = be.zeros((L.dim, 0))
    for term in reversed(series[:-1]):
        if be.exact:
            both = np.concatenate([cols, term.basis], axis=1)
            _, piv = _rref(both)
            comp = both[:, [p for p in piv if p >= cols.shape[1]]]
        else:
            inside = be.complement(cols, L.dim) if cols.shape[1] else be.eye(L.dim)
            comp = be.colspace(inside @ (inside.conj().T @ term.basis))
        full = np.concatenate([cols, comp], axis=1)
        k = cols.shape[1]
        quot = [be.solve(full, a @ comp)[k:] for a in ads]
        flag, _ = triangularize(L, quot)
        cols = np.concatenate([cols, comp @ flag], axis=1)
    if cols.shape[1] != L.dim:
        raise LinalgError("Jordan-Holder construction lost dimensions")
    return JordanHolderSequence(L, cols)


def polarization(L: LieAlgebra, f, jh: JordanHolderSequence | None = None, strict: bool = True) -> Subspace:
    """Sum of N_i = {x in L_i : f([x, L_i]) = 0} along a Jordan-Holder chain.

    Args:
        L: solvable algebra.
        f: a :class:`Character`, or (with ``strict=False``) any functional values.
        jh: chain to use; computed when omitted.
        strict: require ``f`` to be a character.

    Returns:
        The subspace P, checked to be a subalgebra with f([P, P]) = 0.
    """
    be = L.backend
    values = f.values if isinstance(f, Character) else be.asarray(f) if be.exact else np.asarray(f, dtype=complex)
    if strict and not vanishes_on_derived(L, values):
        raise NotCharacter("polarization expects a character")
    jh = jh or jordan_holder(L)
    vecs = []
    for i in range(1, L.dim + 1):
        b = jh.basis[:, :i]
        form = be.zeros((i, i))
        for a in range(i):
            for c in range(i):
                form[a, c] = np.dot(values, L.bracket(b[:, a], b[:, c]))
        null = be.nullspace(form.T.copy())
        vecs.extend((b @ null)[:, t] for t in range(null.shape[1]))
    p = L.span(vecs)
    if not p.is_subalgebra():
        raise LieError("polarization is not a subalgebra")
    for a in range(p.dim):
        for c in range(p.dim):
            val = np.dot(values, L.bracket(p.basis[:, a], p.basis[:, c]))
            if not be.is_zero(np.array([val]), max(1.0, be.residual(values))):
                raise LieError("f does not vanish on [P, P]")
    return p
