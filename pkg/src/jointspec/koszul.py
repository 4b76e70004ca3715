"""Exterior-algebra bookkeeping, Koszul boundaries and chain complexes.

Basis convention: the degree-p part of ``X (x) wedge^p L`` is ordered block
by block, one block of size ``dim X`` per p-subset of the Lie basis, with the
subsets encoded as bitmasks in increasing numeric order. Coordinate
``pos * dim X + x`` is the vector ``e_x (x) e_S`` for the ``pos``-th mask S.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .linalg import Backend, CompositionNotZero
from .reps import Representation


class DegreeOutOfRange(ValueError):
    pass


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> list[int]:
    """Set bit indices in ascending order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def insertion_sign(mask: int, i: int) -> int:
    """Sign of moving e_i to its sorted place in e_i ^ e_mask."""
    return -1 if popcount(mask & ((1 << i) - 1)) % 2 else 1


@dataclass(frozen=True)
class ExteriorBasis:
    """Ordered bitmask bases of wedge^p of an n-dimensional space."""

    n: int

    @property
    def degrees(self) -> tuple:
        return _degree_lists(self.n)

    def masks(self, p: int) -> tuple:
        if p < 0 or p > self.n:
            return ()
        return self.degrees[p]

    def position(self, mask: int) -> int:
        return _positions(self.n)[mask]

    def count(self, p: int) -> int:
        return comb(self.n, p) if 0 <= p <= self.n else 0


@lru_cache(maxsize=None)
def _degree_lists(n: int) -> tuple:
    groups: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(1 << n):
        groups[popcount(mask)].append(mask)
    return tuple(tuple(g) for g in groups)


@lru_cache(maxsize=None)
def _positions(n: int) -> dict:
    out = {}
    for group in _degree_lists(n):
        for pos, mask in enumerate(group):
            out[mask] = pos
    return out


def _add_block(target: np.ndarray, r: int, c: int, d: int, value: np.ndarray) -> None:
    target[r * d : (r + 1) * d, c * d : (c + 1) * d] = target[r * d : (r + 1) * d, c * d : (c + 1) * d] + value


def koszul_boundary(rho: Representation, p: int) -> np.ndarray:
    """Matrix of d_p: X (x) wedge^p L -> X (x) wedge^(p-1) L.

    d_p(x (x) l_1 ^ ... ^ l_p) = sum_k (-1)^(k+1) rho(l_k) x (x) (... l_k omitted ...)
                                + sum_{i<j} (-1)^(i+j+1) x (x) [l_i, l_j] ^ (... l_i, l_j omitted ...)

    The bracket term carries (-1)^(i+j+1); with that sign d_(p-1) d_p = 0 for
    every Lie morphism rho. Degrees 0 and n+1 give zero maps.
    """
    L = rho.algebra
    n, d = L.dim, rho.space_dim
    be = rho.backend
    if p < 0 or p > n + 1:
        raise DegreeOutOfRange(f"degree {p} outside 0..{n + 1}")
    ext = ExteriorBasis(n)
    rows, cols = d * ext.count(p - 1), d * ext.count(p)
    out = be.zeros((rows, cols))
    if p == 0 or p == n + 1:
        return out
    eye = be.eye(d)
    c = L.constants
    for col, mask in enumerate(ext.masks(p)):
        elems = bits(mask)
        for k, s in enumerate(elems, start=1):
            sign = 1 if k % 2 else -1
            _add_block(out, ext.position(mask ^ (1 << s)), col, d, sign * rho.matrices[s])
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                a, b = elems[i], elems[j]
                rest = mask ^ (1 << a) ^ (1 << b)
                # positions are 1-based in the formula: (i+1)+(j+1)+1 has the parity of i+j+1
                sign = -1 if (i + j) % 2 == 0 else 1
                for t in range(n):
                    coef = c[a, b, t]
                    if not coef or rest >> t & 1:
                        continue
                    s = sign * insertion_sign(rest, t)
                    _add_block(out, ext.position(rest | (1 << t)), col, d, (s * coef) * eye)
    return out


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Chain complex with ``boundaries[p-1] = d_p: C_p -> C_(p-1)`` for p = 1..N."""

    dims: tuple
    boundaries: tuple
    backend: Backend
    scale: float = 1.0  # absolute size of the data, floors float rank decisions

    def __post_init__(self):
        for p, dp in enumerate(self.boundaries, start=1):
            if dp.shape != (self.dims[p - 1], self.dims[p]):
                raise ValueError(f"d_{p} has shape {dp.shape}, expected {(self.dims[p - 1], self.dims[p])}")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, p: int) -> np.ndarray:
        """d_p, with zero maps at p = 0 and p = top + 1."""
        if p <= 0:
            return self.backend.zeros((0, self.dims[0] if p == 0 else 0))
        if p > self.top:
            return self.backend.zeros((self.dims[self.top] if p == self.top + 1 else 0, 0))
        return self.boundaries[p - 1]

    def composition_residuals(self) -> list[float]:
        be = self.backend
        return [be.residual(self.boundary(p - 1) @ self.boundary(p)) for p in range(2, self.top + 1)]

    def verify(self) -> None:
        """Raise CompositionNotZero unless d_(p-1) d_p = 0 for all p."""
        be = self.backend
        for p in range(2, self.top + 1):
            a, b = self.boundary(p - 1), self.boundary(p)
            if not be.is_zero(a @ b, max(be.residual(a), self.scale) * max(be.residual(b), self.scale)):
                raise CompositionNotZero(f"d_{p - 1} d_{p} != 0 (residual {be.residual(a @ b):.3g})")

    def ranks(self) -> list[int]:
        """rank d_p for p = 0..top+1."""
        be = self.backend
        return [0] + [be.rank(dp, self.scale) for dp in self.boundaries] + [0]

    def homology_dims(self) -> list[int]:
        r = self.ranks()
        return [self.dims[p] - r[p] - r[p + 1] for p in range(self.top + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * h for p, h in enumerate(self.homology_dims()))


def data_scale(rho: Representation) -> float:
    """max(1, largest matrix entry, largest structure constant)."""
    be = rho.backend
    return max(1.0, be.residual(rho.matrices), be.residual(rho.algebra.constants))


def koszul_complex(rho: Representation, verify: bool = True, scale: float | None = None) -> ChainComplex:
    """The Koszul complex of rho, checked for composition-zero.

    Float rank decisions treat singular values below ``tol * size * scale`` as
    zero; ``scale`` defaults to :func:`data_scale` of rho. Pass the scale of
    the unshifted representation when rho is a shift, so that a shift landing
    on a weight up to roundoff is still recognized.
    """
    n, d = rho.algebra.dim, rho.space_dim
    dims = tuple(d * comb(n, p) for p in range(n + 1))
    scale = data_scale(rho) if scale is None else scale
    cx = ChainComplex(dims, tuple(koszul_boundary(rho, p) for p in range(1, n + 1)), rho.backend, scale)
    if verify:
        cx.verify()
    return cx


def homology_dims(cx: ChainComplex) -> list[int]:
    return cx.homology_dims()


def chevalley_eilenberg_coboundary(pi: Representation, p: int) -> np.ndarray:
    """Matrix of delta_p: Hom(wedge^p g, V) -> Hom(wedge^(p+1) g, V) for a rep of g.

    (delta_p f)(x_1..x_(p+1)) = sum_i (-1)^(i-1) pi(x_i) f(.. x_i omitted ..)
                               + sum_{i<k} (-1)^(i+k) f([x_i, x_k], .. x_i, x_k omitted ..)

    Cochains are coordinatized like Koszul chains: block per mask, f(e_S) in V.
    """
    g = pi.algebra
    n, d = g.dim, pi.space_dim
    be = pi.backend
    if p < -1 or p > n:
        raise DegreeOutOfRange(f"cochain degree {p} outside -1..{n}")
    ext = ExteriorBasis(n)
    out = be.zeros((d * ext.count(p + 1), d * ext.count(p)))
    if p == -1 or p == n:
        return out
    eye = be.eye(d)
    c = g.constants
    for row, mask in enumerate(ext.masks(p + 1)):
        elems = bits(mask)
        for i, s in enumerate(elems, start=1):
            sign = 1 if i % 2 else -1
            _add_block(out, row, ext.position(mask ^ (1 << s)), d, sign * pi.matrices[s])
        for i in range(len(elems)):
            for k in range(i + 1, len(elems)):
                a, b = elems[i], elems[k]
                rest = mask ^ (1 << a) ^ (1 << b)
                sign = 1 if (i + k) % 2 == 0 else -1
                for t in range(n):
                    coef = c[a, b, t]
                    if not coef or rest >> t & 1:
                        continue
                    s = sign * insertion_sign(rest, t)
                    _add_block(out, row, ext.position(rest | (1 << t)), d, (s * coef) * eye)
    return out


def chevalley_eilenberg_complex(pi: Representation) -> list[np.ndarray]:
    """Coboundaries delta_0 .. delta_(n-1)."""
    return [chevalley_eilenberg_coboundary(pi, p) for p in range(pi.algebra.dim)]


def cohomology_dims(pi: Representation) -> list[int]:
    be = pi.backend
    n, d = pi.algebra.dim, pi.space_dim
    deltas = [chevalley_eilenberg_coboundary(pi, p) for p in range(-1, n + 1)]
    ranks = [be.rank(m) for m in deltas]  # ranks[p + 1] = rank delta_p
    return [d * comb(n, p) - ranks[p + 1] - ranks[p] for p in range(n + 1)]


# ---------------------------------------------------------------------------
# tensor products of complexes


def _summands(c1: ChainComplex, c2: ChainComplex, k: int):
    """(p, q, offset) of the blocks C1_p (x) C2_q inside total degree k."""
    out, off = [], 0
    for p in range(max(0, k - c2.top), min(k, c1.top) + 1):
        q = k - p
        out.append((p, q, off))
        off += c1.dims[p] * c2.dims[q]
    return out, off


def total_tensor_complex(c1: ChainComplex, c2: ChainComplex) -> ChainComplex:
    """Total complex of C1 (x) C2 with d = d' (x) I + (-1)^p I (x) d''."""
    be = c1.backend
    be.check(*c1.boundaries, *c2.boundaries)
    top = c1.top + c2.top
    layout = [_summands(c1, c2, k) for k in range(top + 1)]
    dims = tuple(size for _, size in layout)
    bounds = []
    for k in range(1, top + 1):
        src, _ = layout[k]
        dst, _ = layout[k - 1]
        where = {(p, q): off for p, q, off in dst}
        dk = be.zeros((dims[k - 1], dims[k]))
        for p, q, off in src:
            width = c1.dims[p] * c2.dims[q]
            if p >= 1:
                r0 = where[(p - 1, q)]
                blk = np.kron(c1.boundary(p), be.eye(c2.dims[q]))
                dk[r0 : r0 + blk.shape[0], off : off + width] = blk
            if q >= 1:
                r0 = where[(p, q - 1)]
                blk = np.kron(be.eye(c1.dims[p]), c2.boundary(q))
                dk[r0 : r0 + blk.shape[0], off : off + width] = blk if p % 2 == 0 else -blk
        bounds.append(dk)
    cx = ChainComplex(dims, tuple(bounds), be, max(c1.scale, c2.scale))
    cx.verify()
    return cx


def _merge_sign(m1: int, m2: int) -> int:
    """Sign of sorting e_(m1) ^ e_(m2) when both index sets are disjoint."""
    inversions = sum(popcount(m1 >> (t + 1)) for t in bits(m2))
    return -1 if inversions % 2 else 1


def tensor_intertwiner(rho1: Representation, rho2: Representation) -> list[np.ndarray]:
    """Chain isomorphism from the total complex of the two Koszul complexes
    to the Koszul complex of ``tensor_rep(rho1, rho2)``.

    ``(x1 (x) w1) (x) (x2 (x) w2) -> (x1 (x) x2) (x) (w1 ^ w2)``, one signed
    permutation matrix per degree.
    """
    be = rho1.backend
    n, m = rho1.algebra.dim, rho2.algebra.dim
    d1, d2 = rho1.space_dim, rho2.space_dim
    e1, e2, e = ExteriorBasis(n), ExteriorBasis(m), ExteriorBasis(n + m)
    dims1 = [d1 * comb(n, p) for p in range(n + 1)]
    dims2 = [d2 * comb(m, q) for q in range(m + 1)]
    out = []
    for k in range(n + m + 1):
        size = d1 * d2 * comb(n + m, k)
        phi = be.zeros((size, size))
        off = 0
        for p in range(max(0, k - m), min(k, n) + 1):
            q = k - p
            for pos1, s1 in enumerate(e1.masks(p)):
                for pos2, s2 in enumerate(e2.masks(q)):
                    target = e.position(s1 | (s2 << n))
                    sign = _merge_sign(s1, s2 << n)
                    for x1 in range(d1):
                        for x2 in range(d2):
                            i1 = pos1 * d1 + x1
                            i2 = pos2 * d2 + x2
                            col = off + i1 * dims2[q] + i2
                            row = target * d1 * d2 + x1 * d2 + x2
                            phi[row, col] = be.scalar(sign)
            off += dims1[p] * dims2[q]
        out.append(phi)
    return out
