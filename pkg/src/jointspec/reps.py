"""Matrix representations and the constructions built from them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie import (
    Character,
    DimensionMismatch,
    LieAlgebra,
    LieError,
    Subspace,
    convert,
    direct_sum,
    opposite,
    vanishes_on_derived,
    NotCharacter,
)
from .linalg import Backend


class NotRepresentation(LieError):
    """Matrices violate the homomorphism law."""


class AlgebraMismatch(LieError):
    pass


def _defect(L: LieAlgebra, mats: np.ndarray) -> np.ndarray:
    prod = np.einsum("iab,jbc->ijac", mats, mats)
    return np.tensordot(L.constants, mats, axes=(2, 0)) - (prod - prod.transpose(1, 0, 2, 3))


def homomorphism_defect(L: LieAlgebra, mats: np.ndarray) -> float:
    """Largest entry of rho([e_i, e_j]) - [rho(e_i), rho(e_j)] over all pairs."""
    if L.dim == 0 or mats.shape[1] == 0:
        return 0.0
    return L.backend.residual(_defect(L, mats))


@dataclass(frozen=True, eq=False)
class Representation:
    """Lie morphism from ``algebra`` into d x d matrices, one matrix per basis element."""

    algebra: LieAlgebra
    matrices: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        L = self.algebra
        m = self.matrices
        if m.ndim != 3 or m.shape[0] != L.dim or m.shape[1] != m.shape[2]:
            raise DimensionMismatch(f"need {L.dim} square matrices, got array of shape {m.shape}")
        L.backend.check(m)
        if self.validate:
            if L.dim == 0 or m.shape[1] == 0:
                return
            be = L.backend
            scale = max(1.0, be.residual(m)) ** 2 * max(1.0, be.residual(L.constants))
            diff = _defect(L, m)
            if not be.is_zero(diff, scale):
                raise NotRepresentation(f"homomorphism law fails (residual {be.residual(diff):.3g})")

    @property
    def space_dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def backend(self) -> Backend:
        return self.algebra.backend

    def __call__(self, x) -> np.ndarray:
        """Matrix of rho(x) for a coordinate vector x."""
        return np.tensordot(np.asarray(x), self.matrices, axes=(0, 0))

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def with_backend(self, backend: Backend) -> "Representation":
        if backend == self.backend:
            return self
        return Representation(
            self.algebra.with_backend(backend), convert(self.matrices, self.backend, backend), validate=False
        )

    def to_json(self, algebra_ref=None) -> dict:
        be = self.backend
        entries = []
        for idx, v in np.ndenumerate(self.matrices):
            if v:
                entries.append(list(idx) + be.to_json(v))
        return {
            "algebra": algebra_ref if algebra_ref is not None else self.algebra.to_json(),
            "space_dim": self.space_dim,
            "matrices": entries,
        }

    @classmethod
    def from_json(cls, data: dict, algebra: LieAlgebra) -> "Representation":
        be = algebra.backend
        try:
            d = int(data["space_dim"])
            mats = be.zeros((algebra.dim, d, d))
            for row in data.get("matrices", []):
                b, r, c = (int(t) for t in row[:3])
                if not (0 <= b < algebra.dim and 0 <= r < d and 0 <= c < d):
                    raise DimensionMismatch(f"matrix entry index {row[:3]} out of range")
                re = row[3] if len(row) > 3 else 1
                im = row[4] if len(row) > 4 else 0
                mats[b, r, c] = be.from_json(re, im)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, LieError):
                raise
            raise NotRepresentation(f"malformed representation description: {exc}") from exc
        return cls(algebra, mats)


@dataclass(frozen=True, eq=False)
class TensorRepresentation(Representation):
    """rho1 x rho2 on the direct sum algebra, acting on the Kronecker space."""

    factors: tuple = ()


@dataclass(frozen=True, eq=False)
class MultiplicationRepresentation(Representation):
    """(l1, l2) acting on d1 x d2 matrices by T -> rho1(l1) T + T rho2(l2)."""

    factors: tuple = ()


def from_matrices(algebra: LieAlgebra, mats) -> Representation:
    be = algebra.backend
    arr = be.asarray(mats) if be.exact else np.asarray(mats, dtype=complex)
    d = arr.shape[-1] if arr.size else 0
    return Representation(algebra, arr.reshape(algebra.dim, d, d))


def zero_rep(algebra: LieAlgebra, d: int) -> Representation:
    return Representation(algebra, algebra.backend.zeros((algebra.dim, d, d)), validate=False)


def adjoint_rep(L: LieAlgebra) -> Representation:
    mats = np.stack(L.ad_matrices()) if L.dim else L.backend.zeros((0, 0, 0))
    return Representation(L, mats)


def shift(rho: Representation, f) -> Representation:
    """rho - f * I; f a :class:`Character` or values on the basis."""
    be = rho.backend
    values = f.values if isinstance(f, Character) else np.asarray(f)
    if isinstance(f, Character) and f.algebra is not rho.algebra and f.algebra.dim != rho.algebra.dim:
        raise AlgebraMismatch("character lives on a different algebra")
    if not isinstance(f, Character) and not vanishes_on_derived(rho.algebra, values):
        raise NotCharacter("shift needs a character")
    n, d = rho.algebra.dim, rho.space_dim
    if n == 0:
        return rho
    eye = be.eye(d)
    mats = rho.matrices - np.stack([values[i] * eye for i in range(n)])
    # subtracting a character keeps the homomorphism law, no re-check needed
    return Representation(rho.algebra, mats, validate=False)


def dual(rho: Representation) -> Representation:
    """Transposed matrices as a representation of the opposite algebra."""
    mats = rho.matrices.transpose(0, 2, 1).copy()
    return Representation(opposite(rho.algebra), mats)


def restrict(rho: Representation, sub: Subspace) -> Representation:
    """rho on a subalgebra, expressed in the subalgebra's own basis."""
    alg = sub.induced_algebra()
    be = rho.backend
    if sub.dim == 0:
        return Representation(alg, be.zeros((0, rho.space_dim, rho.space_dim)), validate=False)
    mats = np.tensordot(sub.basis, rho.matrices, axes=(0, 0))
    return Representation(alg, mats)


def pullback(rho: Representation, hom: np.ndarray, source: LieAlgebra) -> Representation:
    """rho composed with a Lie morphism ``source -> rho.algebra`` (matrix form)."""
    mats = np.tensordot(hom, rho.matrices, axes=(0, 0)) if source.dim else rho.backend.zeros((0, rho.space_dim, rho.space_dim))
    return Representation(source, mats)


def tensor_rep(rho1: Representation, rho2: Representation) -> TensorRepresentation:
    """rho1(l1) (x) I + I (x) rho2(l2) on direct_sum(L1, L2)."""
    be = rho1.backend
    be.check(rho2.matrices)
    d1, d2 = rho1.space_dim, rho2.space_dim
    left = [np.kron(m, be.eye(d2)) for m in rho1.matrices]
    right = [np.kron(be.eye(d1), m) for m in rho2.matrices]
    mats = np.stack(left + right) if left or right else be.zeros((0, d1 * d2, d1 * d2))
    return TensorRepresentation(direct_sum(rho1.algebra, rho2.algebra), mats, factors=(rho1, rho2))


def multiplication_rep(rho1: Representation, rho2: Representation) -> MultiplicationRepresentation:
    """Left and right multiplication on Hom(X2, X1) for L1 x L2^op.

    Vectorization is row-major (``T.reshape(-1)``), under which
    ``vec(A T) = kron(A, I) vec(T)`` and ``vec(T B) = kron(I, B^T) vec(T)``.
    """
    be = rho1.backend
    be.check(rho2.matrices)
    d1, d2 = rho1.space_dim, rho2.space_dim
    left = [np.kron(m, be.eye(d2)) for m in rho1.matrices]
    right = [np.kron(be.eye(d1), m.T) for m in rho2.matrices]
    mats = np.stack(left + right) if left or right else be.zeros((0, d1 * d2, d1 * d2))
    alg = direct_sum(rho1.algebra, opposite(rho2.algebra))
    return MultiplicationRepresentation(alg, mats, factors=(rho1, rho2))


def vec(t: np.ndarray) -> np.ndarray:
    return t.reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return v.reshape(rows, cols)


def rank_one(x1: np.ndarray, x2p: np.ndarray) -> np.ndarray:
    """The operator x -> x2p(x) x1 from X2 to X1."""
    return np.outer(x1, x2p)


def diagonal_rep(rho1: Representation, rho2: Representation, twisted: bool = False) -> Representation:
    """Diagonal representation of a common algebra L on the Kronecker space.

    ``twisted=False`` gives kron(rho1, I) + kron(I, rho2); ``twisted=True``
    gives kron(rho1, I) - kron(I, rho2^T), i.e. T -> rho1(l) T - T rho2(l).
    """
    L = rho1.algebra
    if rho2.algebra.dim != L.dim or not L.backend.is_zero(rho2.algebra.constants - L.constants):
        raise AlgebraMismatch("diagonal representation needs both factors on the same algebra")
    be = rho1.backend
    d1, d2 = rho1.space_dim, rho2.space_dim
    mats = []
    for a, b in zip(rho1.matrices, rho2.matrices):
        left = np.kron(a, be.eye(d2))
        mats.append(left - np.kron(be.eye(d1), b.T) if twisted else left + np.kron(be.eye(d1), b))
    arr = np.stack(mats) if mats else be.zeros((0, d1 * d2, d1 * d2))
    return Representation(L, arr)
