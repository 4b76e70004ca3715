"""Scalar backends and dense matrix kernels.

Two backends share one interface:

* :class:`ExactBackend` stores entries as :class:`GaussQ` (Gaussian
  rationals) in numpy object arrays. Rank uses fraction-free elimination,
  so results are exact.
* :class:`FloatBackend` stores ``complex128`` arrays and decides rank from
  singular values against a relative tolerance ``tol``.

Every matrix-producing routine takes the backend explicitly; a matrix whose
dtype does not match the backend raises :class:`BackendMismatch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 2.0**-40


class LinalgError(ValueError):
    """Base class for linear-algebra failures."""


class BackendMismatch(LinalgError):
    """Raised when exact and float matrices meet in one expression."""


class CompositionNotZero(LinalgError):
    """Raised when two boundary maps do not compose to zero."""


class NumericalBreakdown(LinalgError):
    """Raised when an eigenvalue cannot be isolated reliably."""


# ---------------------------------------------------------------------------
# Gaussian rationals


def _parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class GaussQ:
    """Exact complex number ``(re + im*i) / den`` with integer parts.

    Stored normalised: ``den > 0`` and ``gcd(re, im, den) == 1``.
    """

    __slots__ = ("re", "im", "den")

    def __init__(self, re: int = 0, im: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("GaussQ with zero denominator")
        if den < 0:
            re, im, den = -re, -im, -den
        g = math.gcd(math.gcd(re, im), den)
        if g > 1:
            re, im, den = re // g, im // g, den // g
        self.re = re
        self.im = im
        self.den = den

    @classmethod
    def of(cls, value) -> "GaussQ":
        """Convert ints, fractions, exact floats, strings or complex values."""
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value), 0, 1)
        if isinstance(value, (complex, np.complexfloating)):
            return cls.from_parts(Fraction(value.real), Fraction(value.imag))
        return cls.from_parts(_parse_rational(value), Fraction(0))

    @classmethod
    def from_parts(cls, real, imag) -> "GaussQ":
        a = _parse_rational(real)
        b = _parse_rational(imag)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator), den)

    @property
    def real(self) -> Fraction:
        return Fraction(self.re, self.den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, self.den)

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im, self.den)

    def norm2(self) -> Fraction:
        """Squared modulus as an exact fraction."""
        return Fraction(self.re * self.re + self.im * self.im, self.den * self.den)

    def _coerce(self, other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (int, np.integer, Fraction)):
            return GaussQ.of(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return GaussQ(self.re + o.re, self.im + o.im, self.den)
        return GaussQ(self.re * o.den + o.re * self.den, self.im * o.den + o.im * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.im == 0 and o.im == 0:
            return GaussQ(self.re * o.re, 0, self.den * o.den)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero GaussQ")
        # (a + bi)/d / ((c + ei)/f) = f (a + bi)(c - ei) / (d (c^2 + e^2))
        n2 = o.re * o.re + o.im * o.im
        re = self.re * o.re + self.im * o.im
        im = self.im * o.re - self.re * o.im
        return GaussQ(re * o.den, im * o.den, self.den * n2)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im and self.den == o.den

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(self.re, self.den))
        return hash((self.re, self.im, self.den))

    def __complex__(self):
        return complex(self.re / self.den, self.im / self.den)

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"GaussQ({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(x) -> str:
    """Compact human-readable form of an exact or float scalar."""
    if isinstance(x, GaussQ):
        re, im = x.real, x.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"
    z = complex(x)
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    if im == 0.0:
        return f"{re:.6g}"
    if re == 0.0:
        return f"{im:.6g}i"
    return f"{re:.6g}{im:+.6g}i"


def _json_number(q: Fraction):
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Backends


@dataclass(frozen=True)
class RankProfile:
    """Rank data of a matrix with bases for its column space and null space."""

    rank: int
    nullity: int
    colspace: np.ndarray
    nullspace: np.ndarray


class Backend:
    """Common interface of the exact and floating-point backends."""

    name: str = "abstract"
    exact: bool = False
    tol: float = 0.0

    # construction -------------------------------------------------------
    def asarray(self, data) -> np.ndarray:
        raise NotImplementedError

    def scalar(self, value):
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def check(self, *arrays: np.ndarray) -> None:
        """Raise BackendMismatch unless every array belongs to this backend."""
        for a in arrays:
            if (a.dtype == object) != self.exact:
                raise BackendMismatch(f"{a.dtype} array used with the {self.name} backend")

    # kernels ------------------------------------------------------------
    # ``scale`` is an absolute size below which singular values count as zero
    # in float mode (relative to tol); exact backends ignore it.
    def rank(self, a: np.ndarray, scale: float = 0.0) -> int:
        raise NotImplementedError

    def profile(self, a: np.ndarray, scale: float = 0.0) -> RankProfile:
        raise NotImplementedError

    def nullspace(self, a: np.ndarray, scale: float = 0.0) -> np.ndarray:
        return self.profile(a, scale).nullspace

    def colspace(self, a: np.ndarray, scale: float = 0.0) -> np.ndarray:
        return self.profile(a, scale).colspace

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def complement(self, basis: np.ndarray, dim: int) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a: np.ndarray) -> np.ndarray:
        return self.solve(a, self.eye(a.shape[0]))

    def residual(self, a: np.ndarray) -> float:
        """Largest entry modulus, as a float."""
        if a.size == 0:
            return 0.0
        if self.exact:
            return max(abs(complex(x)) for x in a.flat)
        return float(np.max(np.abs(a)))

    def is_zero(self, a: np.ndarray, scale: float = 1.0) -> bool:
        raise NotImplementedError

    def eigenvalues(self, m: np.ndarray) -> list:
        raise NotImplementedError

    # scalars ------------------------------------------------------------
    def close(self, a, b) -> bool:
        raise NotImplementedError

    def sort_key(self, x) -> tuple:
        raise NotImplementedError

    def to_json(self, x) -> list:
        raise NotImplementedError

    def from_json(self, re, im=0):
        raise NotImplementedError


class ExactBackend(Backend):
    """Gaussian-rational arithmetic; never rounds."""

    name = "exact"
    exact = True
    tol = 0.0

    def __repr__(self):
        return "ExactBackend()"

    def __eq__(self, other):
        return isinstance(other, ExactBackend)

    def __hash__(self):
        return hash("exact")

    def asarray(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = GaussQ.of(v)
        return out

    def scalar(self, value):
        return GaussQ.of(value)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(GaussQ(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = GaussQ(1)
        return out

    def rank(self, a: np.ndarray, scale: float = 0.0) -> int:
        self.check(a)
        if a.size == 0:
            return 0
        return _bareiss_rank_gaussian(a)

    def profile(self, a: np.ndarray, scale: float = 0.0) -> RankProfile:
        self.check(a)
        rows, cols = a.shape
        if a.size == 0:
            return RankProfile(0, cols, self.zeros((rows, 0)), self.eye(cols))
        r, pivots = _rref(a)
        null = []
        for free in (c for c in range(cols) if c not in set(pivots)):
            v = self.zeros(cols)
            v[free] = GaussQ(1)
            for i, pc in enumerate(pivots):
                v[pc] = -r[i, free]
            null.append(v)
        nullspace = np.stack(null, axis=1) if null else self.zeros((cols, 0))
        return RankProfile(len(pivots), cols - len(pivots), a[:, pivots].copy(), nullspace)

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """One solution X of a @ X = b; raises LinalgError if inconsistent."""
        self.check(a, b)
        rows, cols = a.shape
        b2 = b.reshape(rows, -1)
        if cols == 0:
            if any(b2.flat):
                raise LinalgError("inconsistent linear system")
            return self.zeros((0, b2.shape[1])).reshape((0,) + b.shape[1:])
        r, pivots = _rref(np.concatenate([a, b2], axis=1))
        if any(p >= cols for p in pivots):
            raise LinalgError("inconsistent linear system")
        x = self.zeros((cols, b2.shape[1]))
        for i, pc in enumerate(pivots):
            x[pc, :] = r[i, cols:]
        return x.reshape((cols,) + b.shape[1:])

    def complement(self, basis: np.ndarray, dim: int) -> np.ndarray:
        """Standard basis vectors completing ``basis`` to a basis of the space."""
        k = basis.shape[1] if basis.ndim == 2 else 0
        aug = np.concatenate([basis.reshape(dim, k), self.eye(dim)], axis=1)
        _, pivots = _rref(aug)
        picks = [p - k for p in pivots if p >= k]
        return self.eye(dim)[:, picks]

    def is_zero(self, a: np.ndarray, scale: float = 1.0) -> bool:
        return not any(a.flat)

    def eigenvalues(self, m: np.ndarray) -> list:
        """Distinct eigenvalues, each verified to be an exact root."""
        self.check(m)
        return _exact_eigenvalues(m)

    def close(self, a, b) -> bool:
        return a == b

    def sort_key(self, x) -> tuple:
        return (x.real, x.imag)

    def to_json(self, x) -> list:
        return [_json_number(x.real), _json_number(x.imag)]

    def from_json(self, re, im=0):
        return GaussQ.from_parts(_parse_rational(re), _parse_rational(im))


class FloatBackend(Backend):
    """complex128 arithmetic with rank decided by relative singular values.

    Args:
        tol: relative tolerance ``tau``; a singular value counts toward the
            rank when it exceeds ``tau * max(rows, cols) * sigma_max``.
    """

    name = "float"
    exact = False

    def __init__(self, tol: float = DEFAULT_TOL):
        if not tol > 0:
            raise ValueError("tolerance must be positive")
        self.tol = float(tol)

    def __repr__(self):
        return f"FloatBackend(tol={self.tol!r})"

    def __eq__(self, other):
        return isinstance(other, FloatBackend) and other.tol == self.tol

    def __hash__(self):
        return hash(("float", self.tol))

    def asarray(self, data) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype == object:
            arr = np.vectorize(complex, otypes=[complex])(arr) if arr.size else arr.astype(complex)
        return np.array(arr, dtype=complex)

    def scalar(self, value):
        if isinstance(value, str):
            return complex(_parse_rational(value))
        return complex(value)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=complex)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=complex)

    def _svd(self, a: np.ndarray, scale: float = 0.0):
        u, s, vh = np.linalg.svd(a)
        top = max(s[0] if s.size else 0.0, scale)
        thresh = self.tol * max(a.shape) * top
        r = int(np.sum(s > thresh)) if s.size and s[0] > 0 else 0
        return u, s, vh, r

    def rank(self, a: np.ndarray, scale: float = 0.0) -> int:
        self.check(a)
        if a.size == 0:
            return 0
        return self._svd(a, scale)[3]

    def profile(self, a: np.ndarray, scale: float = 0.0) -> RankProfile:
        self.check(a)
        rows, cols = a.shape
        if a.size == 0:
            return RankProfile(0, cols, self.zeros((rows, 0)), self.eye(cols))
        u, _, vh, r = self._svd(a, scale)
        return RankProfile(r, cols - r, u[:, :r].copy(), vh[r:].conj().T.copy())

    def pinv(self, a: np.ndarray, scale: float = 0.0) -> np.ndarray:
        """Moore-Penrose inverse truncated at the backend rank."""
        rows, cols = a.shape
        if a.size == 0:
            return self.zeros((cols, rows))
        u, s, vh, r = self._svd(a, scale)
        return (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.check(a, b)
        rows, cols = a.shape
        b2 = b.reshape(rows, -1)
        x = self.pinv(a) @ b2
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)) * float(np.max(np.abs(x), initial=0.0)))
        if b2.size and np.max(np.abs(a @ x - b2)) > 1e3 * self.tol * scale:
            raise LinalgError("inconsistent linear system")
        return x.reshape((cols,) + b.shape[1:])

    def complement(self, basis: np.ndarray, dim: int) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement of span(basis)."""
        k = basis.shape[1] if basis.ndim == 2 else 0
        if k == 0:
            return self.eye(dim)
        u, _, _, r = self._svd(basis.reshape(dim, k))
        return u[:, r:].copy()

    def is_zero(self, a: np.ndarray, scale: float = 1.0) -> bool:
        return a.size == 0 or float(np.max(np.abs(a))) <= 10 * self.tol * max(1.0, scale)

    def eigenvalues(self, m: np.ndarray) -> list:
        """Distinct eigenvalues as cluster means, each checked for consistency."""
        self.check(m)
        return _float_eigenvalues(m, self)

    def close(self, a, b) -> bool:
        return abs(a - b) <= 100 * self.tol * max(1.0, abs(a), abs(b))

    def sort_key(self, x) -> tuple:
        return (round(x.real, 8) + 0.0, round(x.imag, 8) + 0.0)

    def to_json(self, x) -> list:
        def num(v: float):
            if abs(v) < 1e3 * self.tol:
                return 0
            # integral values print as ints so exact and float dumps coincide
            return int(v) if float(v).is_integer() and abs(v) < 2**53 else float(v)

        return [num(x.real), num(x.imag)]

    def from_json(self, re, im=0):
        return complex(float(_parse_rational(re)), float(_parse_rational(im)))


EXACT = ExactBackend()


def backend_for(name: str, tol: float | None = None) -> Backend:
    """Backend by name (``"exact"`` or ``"float"``)."""
    if name == "exact":
        return EXACT
    if name == "float":
        return FloatBackend(DEFAULT_TOL if tol is None else tol)
    raise ValueError(f"unknown backend {name!r}")


def infer_backend(a: np.ndarray) -> Backend:
    """Exact for object arrays, default-tolerance float otherwise."""
    return EXACT if a.dtype == object else FloatBackend()


# ---------------------------------------------------------------------------
# module-level helpers


def rank(a: np.ndarray, backend: Backend | None = None) -> int:
    """Rank of ``a`` under the given (or inferred) backend."""
    return (backend or infer_backend(a)).rank(a)


def kron(a: np.ndarray, b: np.ndarray, backend: Backend | None = None) -> np.ndarray:
    """Kronecker product; both factors must belong to the same backend."""
    backend = backend or infer_backend(a)
    backend.check(a, b)
    return np.kron(a, b)


def block(rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return np.block([list(r) for r in rows])


def solve_homotopy(d_next: np.ndarray, d_here: np.ndarray, backend: Backend | None = None, scale: float = 0.0):
    """Contracting homotopy of a complex at one degree, up to a projector.

    With ``d_next: X_{p+1} -> X_p`` and ``d_here: X_p -> X_{p-1}``, returns
    ``(h_here, h_prev, k)`` where ``h_here: X_p -> X_{p+1}``,
    ``h_prev: X_{p-1} -> X_p`` and::

        d_next @ h_here + h_prev @ d_here == I - k,    h_here @ h_prev == 0.

    ``k`` projects onto a complement ``N`` of ``range(d_next)`` inside
    ``ker(d_here)`` along ``range(d_next) + L`` where ``L`` complements the
    kernel, so ``rank(k)`` is the homology dimension at this degree.

    ``scale`` sets the absolute size below which float singular values are
    treated as zero (see :meth:`Backend.rank`).

    Raises:
        CompositionNotZero: if ``d_here @ d_next`` is not zero.
    """
    backend = backend or infer_backend(d_here)
    backend.check(d_next, d_here)
    n = d_here.shape[1]
    if d_next.shape[0] != n:
        raise LinalgError(f"shape mismatch: {d_next.shape} then {d_here.shape}")
    comp = d_here @ d_next
    comp_scale = max(backend.residual(d_here), scale) * max(backend.residual(d_next), scale)
    if not backend.is_zero(comp, comp_scale):
        raise CompositionNotZero(f"boundary composition has residual {backend.residual(comp):.3g}")
    if not backend.exact:
        # Orthogonal choices: N and L are orthogonal complements, so the
        # pseudo-inverses give the reflexive inverses directly.
        h_here = backend.pinv(d_next, scale)
        h_prev = backend.pinv(d_here, scale)
        k = np.eye(n, dtype=complex) - d_next @ h_here - h_prev @ d_here
        r_next = backend.rank(d_next, scale)
        kappa = n - backend.rank(d_here, scale)
        # Clean k to an exact orthogonal projector of the expected rank.
        w, v = np.linalg.eigh((k + k.conj().T) / 2)
        keep = v[:, w > 0.5]
        if keep.shape[1] != kappa - r_next:
            raise NumericalBreakdown("homotopy projector has unexpected rank")
        k = keep @ keep.conj().T
        return h_here, h_prev, k

    zero = backend.zeros
    r_basis = backend.colspace(d_next)
    k_basis = backend.nullspace(d_here)
    r = r_basis.shape[1]
    # N: kernel vectors independent of the range
    both = np.concatenate([r_basis, k_basis], axis=1)
    _, pivots = _rref(both) if both.size else (None, [])
    n_basis = both[:, [p for p in pivots if p >= r]]
    kern = np.concatenate([r_basis, n_basis], axis=1)
    l_basis = backend.complement(kern, n)
    t = np.concatenate([kern, l_basis], axis=1)
    t_inv = backend.inv(t) if n else zero((0, 0))
    nn = n_basis.shape[1]
    coords_r = t_inv[:r]
    coords_n = t_inv[r : r + nn]
    pre = backend.solve(d_next, r_basis) if r else zero((d_next.shape[1], 0))
    h_here = pre @ coords_r if r else zero((d_next.shape[1], n))
    image = d_here @ l_basis
    m = d_here.shape[0]
    if l_basis.shape[1]:
        s = np.concatenate([image, backend.complement(image, m)], axis=1)
        h_prev = l_basis @ backend.inv(s)[: l_basis.shape[1]]
    else:
        h_prev = zero((n, m))
    k = n_basis @ coords_n if nn else zero((n, n))
    return h_here, h_prev, k


def homotopy_residual(d_next, d_here, h_here, h_prev, k, backend: Backend) -> float:
    """Largest entry of ``d_next h_here + h_prev d_here + k - I``."""
    n = d_here.shape[1]
    return backend.residual(d_next @ h_here + h_prev @ d_here + k - backend.eye(n))


# ---------------------------------------------------------------------------
# exact kernels


def _to_gaussian_integer_rows(a: np.ndarray):
    """Scale each row to Gaussian integers; returns (real rows, imag rows)."""
    re_rows, im_rows = [], []
    for row in a:
        den = 1
        for x in row:
            den = den * x.den // math.gcd(den, x.den)
        re_rows.append([x.re * (den // x.den) for x in row])
        im_rows.append([x.im * (den // x.den) for x in row])
    return re_rows, im_rows


def _bareiss_rank_int(rows: list[list[int]]) -> int:
    m = [r[:] for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rk, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][c]
        prow = m[rk]
        for i in range(rk + 1, len(m)):
            row = m[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        rk += 1
        if rk == len(m):
            break
    return rk


def _bareiss_rank_gaussian(a: np.ndarray) -> int:
    re_rows, im_rows = _to_gaussian_integer_rows(a)
    if not any(any(r) for r in im_rows):
        return _bareiss_rank_int(re_rows)
    # A = B + iC has complex rank r iff [[B, -C], [C, B]] has real rank 2r.
    top = [b + [-c for c in cr] for b, cr in zip(re_rows, im_rows)]
    bottom = [cr + b for b, cr in zip(re_rows, im_rows)]
    return _bareiss_rank_int(top + bottom) // 2


def _rref(a: np.ndarray):
    """Reduced row echelon form over the Gaussian rationals."""
    r = a.copy()
    rows, cols = r.shape
    pivots: list[int] = []
    i = 0
    for c in range(cols):
        if i == rows:
            break
        piv = next((k for k in range(i, rows) if r[k, c]), None)
        if piv is None:
            continue
        if piv != i:
            r[[i, piv]] = r[[piv, i]]
        inv = GaussQ(1) / r[i, c]
        r[i, c:] = r[i, c:] * inv
        for k in range(rows):
            if k != i and r[k, c]:
                r[k, c:] = r[k, c:] - r[k, c] * r[i, c:]
        pivots.append(c)
        i += 1
    return r, pivots


# polynomials as coefficient lists, lowest degree first


def _poly_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list, b: list):
    a = list(a)
    q = [GaussQ(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - c * bc
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_gcd(a: list, b: list) -> list:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _poly_eval(p: list, x):
    acc = GaussQ(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def charpoly(m: np.ndarray) -> list:
    """Characteristic polynomial det(xI - m), lowest degree first (Faddeev-LeVerrier)."""
    n = m.shape[0]
    coeffs = [GaussQ(0)] * (n + 1)
    coeffs[n] = GaussQ(1)
    mk = EXACT.zeros((n, n))
    eye = EXACT.eye(n)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[n - k + 1] * eye
        tr = sum((m @ mk)[i, i] for i in range(n)) if n else GaussQ(0)
        coeffs[n - k] = -tr / k
    return coeffs


def _rationalize(z: complex) -> Iterable[GaussQ]:
    seen = set()
    for bound in (1, 2, 6, 12, 60, 360, 2520, 10**4, 10**5, 10**6):
        cand = GaussQ.from_parts(
            Fraction(z.real).limit_denominator(bound), Fraction(z.imag).limit_denominator(bound)
        )
        key = (cand.re, cand.im, cand.den)
        if key not in seen:
            seen.add(key)
            yield cand


def _exact_eigenvalues(m: np.ndarray) -> list:
    n = m.shape[0]
    if n == 0:
        return []
    p = charpoly(m)
    dp = [p[i] * i for i in range(1, len(p))]
    g = _poly_gcd(p, dp) if _poly_trim(list(dp)) else [GaussQ(1)]
    sq, _ = _poly_divmod(p, g)
    _poly_trim(sq)
    coeffs = [complex(c) for c in reversed(sq)]
    approx = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    roots: list[GaussQ] = []
    for z in approx:
        for cand in _rationalize(complex(z)):
            if not _poly_eval(sq, cand) and cand not in roots:
                roots.append(cand)
                break
        else:
            raise NumericalBreakdown(f"eigenvalue near {complex(z):.6g} is not a Gaussian rational")
    if len(roots) != len(sq) - 1:
        raise NumericalBreakdown("could not recover every eigenvalue exactly")
    return sorted(roots, key=lambda x: (x.real, x.imag))


def cluster(values: Sequence[complex], radius: float) -> list[list[complex]]:
    """Single-linkage clusters of complex numbers at the given radius."""
    vals = list(values)
    parent = list(range(len(vals)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i, v in enumerate(vals):
        groups.setdefault(find(i), []).append(v)
    return list(groups.values())


def eigen_cluster_radius(m: np.ndarray, tol: float) -> float:
    """Distance below which computed eigenvalues of ``m`` are treated as one."""
    n = m.shape[0]
    if n == 0:
        return 0.0
    s = max(1.0, float(np.linalg.norm(m, 2)))
    eps = np.finfo(float).eps
    # A defective eigenvalue of multiplicity k splits by about (eps*s)^(1/k).
    return max(100 * tol * s, 4 * (eps * s) ** (1.0 / n) * s ** (1 - 1.0 / n))


def _float_eigenvalues(m: np.ndarray, backend: FloatBackend) -> list:
    n = m.shape[0]
    if n == 0:
        return []
    vals = np.linalg.eigvals(m)
    s = max(1.0, float(np.linalg.norm(m, 2)))
    radius = eigen_cluster_radius(m, backend.tol)
    out = []
    for group in cluster(vals, radius):
        mu = complex(np.mean(group))
        k = len(group)
        shifted = np.linalg.matrix_power(m - mu * np.eye(n), k)
        if n - backend.rank(shifted, s**k) != k:
            raise NumericalBreakdown(f"eigenvalue cluster near {mu:.6g} is ambiguous at tolerance {backend.tol:.3g}")
        out.append(mu)
    return sorted(out, key=backend.sort_key)
