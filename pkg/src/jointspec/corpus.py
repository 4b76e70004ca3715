"""Corpus files: algebras, representations and theorem instances as JSON.

Schema::

    {"format": "jointspec-corpus/1",
     "algebras": {"<id>": {"dim", "constants": [[i, j, k, re, im], ...], "labels"}},
     "entries": [
        {"id", "kind": "rep", "rep": <rep>},
        {"id", "kind": "pair", "left": <rep>, "right": <rep>},
        {"id", "kind": "diagonal", "left": <rep>, "right": <rep>},
        {"id", "kind": "tuple", "a": <tuple>, "b": <tuple>},
        {"id", "kind": "epimorphism", "source": "<id>", "map": [[row, col, re, im], ...], "rep": <rep>}]}

A ``<rep>`` is ``{"algebra": "<id>", "space_dim", "matrices": [[basis, row, col, re, im], ...]}``
and a ``<tuple>`` is ``{"space_dim", "matrices": [[index, row, col, re, im], ...], "length"}``.
Entries may carry ``"checks"`` (theorem ids), ``"backend"`` and ``"tolerance"``.
Numbers are integers, ``"p/q"`` strings or floats; the file is backend-neutral.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lie import LieAlgebra, LieError, abelian, axb, heisenberg, is_nilpotent, is_solvable
from .linalg import EXACT, Backend, backend_for
from .reps import Representation

FORMAT = "jointspec-corpus/1"
KINDS = ("rep", "pair", "diagonal", "tuple", "epimorphism")
GENERATOR_KINDS = ("abelian", "heisenberg", "ax+b", "random-nilpotent", "random-solvable", "commuting-tuple")
MAX_SPAN_DIM = 4


class CorpusError(ValueError):
    """Malformed or invalid corpus; ``line`` points into the source text when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def __str__(self):
        base = super().__str__()
        return f"line {self.line}: {base}" if self.line else base


# ---------------------------------------------------------------------------
# serialization helpers


def canonical_dumps(data) -> str:
    """Deterministic JSON text (fixed key order from construction, two-space indent)."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _sparse(arr: np.ndarray, be: Backend) -> list:
    return [list(idx) + be.to_json(v) for idx, v in np.ndenumerate(arr) if v]


def _dense(rows: list, shape: tuple, be: Backend) -> np.ndarray:
    out = be.zeros(shape)
    for row in rows:
        idx = tuple(int(t) for t in row[: len(shape)])
        if any(not 0 <= i < s for i, s in zip(idx, shape)):
            raise CorpusError(f"index {list(idx)} out of range for shape {list(shape)}")
        re = row[len(shape)] if len(row) > len(shape) else 1
        im = row[len(shape) + 1] if len(row) > len(shape) + 1 else 0
        out[idx] = be.from_json(re, im)
    return out


def tuple_to_json(mats: list, be: Backend, d: int) -> dict:
    arr = np.stack(mats) if mats else be.zeros((0, d, d))
    return {"space_dim": d, "length": len(mats), "matrices": _sparse(arr, be)}


def tuple_from_json(data: dict, be: Backend) -> list:
    d, n = int(data["space_dim"]), int(data.get("length", 0))
    arr = _dense(data.get("matrices", []), (n, d, d), be)
    return [arr[i] for i in range(n)]


# ---------------------------------------------------------------------------
# corpus objects


@dataclass
class CorpusEntry:
    """One theorem instance; ``objects`` holds the loaded algebras, reps and tuples."""

    id: str
    kind: str
    raw: dict
    objects: dict = field(default_factory=dict)
    checks: tuple = ()
    backend: Backend = EXACT

    @property
    def algebra_ids(self) -> set:
        ids = set()
        for key in ("rep", "left", "right"):
            if key in self.raw:
                ids.add(self.raw[key]["algebra"])
        if "source" in self.raw:
            ids.add(self.raw["source"])
        return ids


@dataclass
class Corpus:
    algebras: dict
    entries: list
    source_text: str = ""

    def to_json(self) -> dict:
        used = set()
        for e in self.entries:
            used |= e.algebra_ids
        return {
            "format": FORMAT,
            "algebras": {k: v for k, v in self.raw_algebras.items() if k in used},
            "entries": [e.raw for e in self.entries],
        }

    @property
    def raw_algebras(self) -> dict:
        return {k: a.to_json() for k, a in self.algebras.items()}

    def dumps(self) -> str:
        return canonical_dumps(self.to_json())

    def select(self, ids) -> "Corpus":
        keep = [e for e in self.entries if e.id in set(ids)]
        return Corpus(self.algebras, keep, self.source_text)


def _locate(text: str, needle: str) -> int | None:
    if not text:
        return None
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return n
    return None


def load_entry(raw: dict, algebras_raw: dict, backend: Backend) -> CorpusEntry:
    """Build the objects of one entry in ``backend``.

    Raises:
        CorpusError: unknown kind, missing algebra or invalid data.
    """
    eid = str(raw.get("id", ""))
    kind = raw.get("kind")
    if kind not in KINDS:
        raise CorpusError(f"entry {eid!r}: unknown kind {kind!r}")
    be = backend
    if "backend" in raw or "tolerance" in raw:
        be = backend_for(raw.get("backend", backend.name), raw.get("tolerance"))
    cache: dict = {}

    def alg(aid):
        if aid not in algebras_raw:
            raise CorpusError(f"entry {eid!r}: unknown algebra {aid!r}")
        if aid not in cache:
            cache[aid] = LieAlgebra.from_json(algebras_raw[aid], be)
        return cache[aid]

    def rep(data):
        return Representation.from_json(data, alg(data["algebra"]))

    objs: dict = {}
    try:
        if kind == "rep":
            objs["rep"] = rep(raw["rep"])
        elif kind in ("pair", "diagonal"):
            objs["left"], objs["right"] = rep(raw["left"]), rep(raw["right"])
            if kind == "diagonal" and raw["left"]["algebra"] != raw["right"]["algebra"]:
                raise CorpusError(f"entry {eid!r}: diagonal entry needs a common algebra")
        elif kind == "tuple":
            objs["a"] = tuple_from_json(raw["a"], be)
            objs["b"] = tuple_from_json(raw["b"], be)
            objs["d1"], objs["d2"] = int(raw["a"]["space_dim"]), int(raw["b"]["space_dim"])
        else:
            objs["rep"] = rep(raw["rep"])
            source = alg(raw["source"])
            objs["source"] = source
            objs["map"] = _dense(raw["map"], (objs["rep"].algebra.dim, source.dim), be)
    except CorpusError:
        raise
    except LieError as exc:
        raise CorpusError(f"entry {eid!r}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"entry {eid!r}: malformed field {exc}") from exc
    for key in ("rep", "left", "right"):
        if key in objs and not is_solvable(objs[key].algebra):
            raise CorpusError(f"entry {eid!r}: algebra of {key!r} is not solvable")
    return CorpusEntry(eid, kind, raw, objs, tuple(raw.get("checks", ())), be)


def loads(text: str, backend: Backend = EXACT) -> Corpus:
    """Parse and validate corpus text.

    Raises:
        CorpusError: with the offending line where it can be found.
    """
    if not text.strip():
        raise CorpusError("empty corpus", 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise CorpusError("corpus must be an object with an 'entries' list", 1)
    if data.get("format", FORMAT) != FORMAT:
        raise CorpusError(f"unsupported format {data.get('format')!r}; expected {FORMAT!r}", _locate(text, '"format"') or 1)
    if not data["entries"]:
        raise CorpusError("corpus has no entries", _locate(text, '"entries"') or 1)
    algebras_raw = data.get("algebras", {})
    algebras = {}
    for aid, araw in algebras_raw.items():
        try:
            algebras[aid] = LieAlgebra.from_json(araw, backend)
        except (LieError, KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"algebra {aid!r}: {exc}", _locate(text, f'"{aid}"')) from exc
    entries, seen = [], set()
    for raw in data["entries"]:
        eid = raw.get("id") if isinstance(raw, dict) else None
        line = _locate(text, f'"id": "{eid}"') if eid else None
        if not eid:
            raise CorpusError("entry without an id", line)
        if eid in seen:
            raise CorpusError(f"duplicate entry id {eid!r}", line)
        seen.add(eid)
        try:
            entries.append(load_entry(raw, algebras_raw, backend))
        except CorpusError as exc:
            raise CorpusError(str(exc), line) from exc
    return Corpus(algebras, entries, text)


def load(path: str, backend: Backend = EXACT) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), backend)


# ---------------------------------------------------------------------------
# building corpora


class CorpusBuilder:
    """Collects algebras and entries with exact data, then serializes."""

    def __init__(self):
        self.algebras: dict = {}
        self.entries: list = []

    def algebra(self, aid: str, L: LieAlgebra) -> str:
        self.algebras[aid] = L.with_backend(EXACT).to_json()
        return aid

    def _rep(self, aid: str, mats) -> dict:
        arr = EXACT.asarray(mats)
        L = LieAlgebra.from_json(self.algebras[aid], EXACT)
        rho = Representation(L, arr.reshape(L.dim, arr.shape[-1], arr.shape[-1]))
        return rho.to_json(aid)

    def rep(self, eid: str, aid: str, mats, checks=()) -> None:
        self._add({"id": eid, "kind": "rep", "rep": self._rep(aid, mats)}, checks)

    def pair(self, eid: str, left: tuple, right: tuple, kind: str = "pair", checks=()) -> None:
        self._add({"id": eid, "kind": kind, "left": self._rep(*left), "right": self._rep(*right)}, checks)

    def tuple_pair(self, eid: str, a: list, b: list, d1: int, d2: int, checks=()) -> None:
        a = [EXACT.asarray(m) for m in a]
        b = [EXACT.asarray(m) for m in b]
        self._add({"id": eid, "kind": "tuple", "a": tuple_to_json(a, EXACT, d1), "b": tuple_to_json(b, EXACT, d2)}, checks)

    def epimorphism(self, eid: str, source: str, target: str, hom, mats, checks=()) -> None:
        hom = EXACT.asarray(hom)
        raw = {"id": eid, "kind": "epimorphism", "source": source, "map": _sparse(hom, EXACT), "rep": self._rep(target, mats)}
        self._add(raw, checks)

    def _add(self, raw: dict, checks) -> None:
        if any(e["id"] == raw["id"] for e in self.entries):
            raise CorpusError(f"duplicate entry id {raw['id']!r}")
        if checks:
            raw["checks"] = list(checks)
        self.entries.append(raw)

    def merge(self, other: "CorpusBuilder") -> "CorpusBuilder":
        for k, v in other.algebras.items():
            if k in self.algebras and self.algebras[k] != v:
                raise CorpusError(f"conflicting algebra id {k!r}")
            self.algebras[k] = v
        for raw in other.entries:
            self._add(dict(raw), ())
        return self

    def to_json(self) -> dict:
        return {"format": FORMAT, "algebras": dict(self.algebras), "entries": list(self.entries)}

    def dumps(self) -> str:
        return canonical_dumps(self.to_json())


def _diag(*xs):
    n = len(xs)
    return [[xs[i] if i == j else 0 for j in range(n)] for i in range(n)]


H3_STANDARD = [
    [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
]


def _example_sylvester() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("C1", abelian(1))
    a, bb = _diag(1, 2), _diag(5, 7)
    b.pair("sylvester", ("C1", [a]), ("C1", [bb]))
    b.pair("sylvester-diagonal", ("C1", [a]), ("C1", [bb]), kind="diagonal")
    # T -> a T - T b, vectorized row-major
    twisted = np.kron(np.array(a), np.eye(2, dtype=int)) - np.kron(np.eye(2, dtype=int), np.array(bb).T)
    b.rep("sylvester-twisted", "C1", [twisted.tolist()])
    b.tuple_pair("sylvester-tuple", [a], [bb], 2, 2)
    return b


def _example_heisenberg() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("h3", heisenberg())
    b.algebra("C2", abelian(2))
    b.rep("heisenberg", "h3", H3_STANDARD)
    b.pair("heisenberg-square", ("h3", H3_STANDARD), ("h3", H3_STANDARD), kind="diagonal")
    # h3 -> h3 / center = C2, x -> e1, y -> e2, z -> 0
    b.epimorphism("heisenberg-center-quotient", "h3", "C2", [[1, 0, 0], [0, 1, 0]], [[[1, 1], [0, 1]], [[2, 0], [0, 2]]])
    return b


def _example_diag_pair() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("C1", abelian(1))
    b.pair("diag-pair", ("C1", [_diag(1, 2)]), ("C1", [_diag(5, 7)]))
    b.pair("diag-zero", ("C1", [[[2, 1], [0, 3]]]), ("C1", [[[0]]]))
    return b


def _example_axb() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("axb", axb())
    ad = [[[0, 0], [0, 1]], [[0, 0], [-1, 0]]]
    b.rep("axb-adjoint", "axb", ad)
    b.rep("axb-line", "axb", [[[3]], [[0]]])
    b.rep("axb-plane", "axb", [_diag(2, 1), [[0, 1], [0, 0]]])
    b.pair("axb-line-adjoint", ("axb", [[[3]], [[0]]]), ("axb", ad))
    b.pair("axb-adjoint-plane", ("axb", ad), ("axb", [_diag(2, 1), [[0, 1], [0, 0]]]))
    return b


def _example_abelian() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("C1", abelian(1))
    b.rep("abelian-jordan", "C1", [[[2, 1], [0, 3]]])
    b.rep("abelian-scalar", "C1", [[[1]]])
    return b


def _example_commuting() -> CorpusBuilder:
    b = CorpusBuilder()
    b.algebra("C2", abelian(2))
    b.rep("commuting", "C2", [_diag(0, 1), _diag(0, 2)])
    return b


EXAMPLES = {
    "sylvester": _example_sylvester,
    "heisenberg": _example_heisenberg,
    "diag-pair": _example_diag_pair,
    "axb": _example_axb,
    "abelian": _example_abelian,
    "commuting": _example_commuting,
}


def example(name: str) -> CorpusBuilder:
    if name not in EXAMPLES:
        raise CorpusError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return EXAMPLES[name]()


# ---------------------------------------------------------------------------
# generators


def bracket_closure(mats: list, limit: int = MAX_SPAN_DIM):
    """Basis of the Lie algebra generated by integer matrices, or None past ``limit``."""
    be = EXACT
    basis: list = []

    def add(m) -> bool:
        trial = basis + [m]
        if be.rank(np.stack([t.reshape(-1) for t in trial], axis=1)) == len(trial):
            basis.append(m)
            return True
        return False

    queue = [be.asarray(m) for m in mats]
    while queue:
        m = queue.pop(0)
        if not any(bool(x) for x in m.flat):
            continue
        if add(m):
            if len(basis) > limit:
                return None
            queue.extend(basis[i] @ m - m @ basis[i] for i in range(len(basis) - 1))
    return basis


def _span_entry(builder: CorpusBuilder, aid: str, eid: str, basis: list) -> None:
    from .theorems import span_representation

    span = span_representation(basis, EXACT, nilpotent=False)
    builder.algebra(aid, span.rep.algebra)
    builder.rep(eid, aid, [m.tolist() for m in span.rep.matrices])


def _upper(rng, d: int, lo: int, hi: int, strict: bool = False, density: float = 0.5):
    m = np.zeros((d, d), dtype=int)
    for i in range(d):
        for j in range(i + (1 if strict else 0), d):
            if i == j or rng.random() < density:
                m[i, j] = int(rng.integers(lo, hi + 1))
    return m


def generate(kind: str, seed: int = 0, dim: int = 1, size: int = 3) -> CorpusBuilder:
    """Deterministic corpus entries of the given kind.

    Args:
        kind: one of ``GENERATOR_KINDS``.
        seed: numpy seed; equal seeds give byte-identical output.
        dim: algebra dimension for ``abelian``.
        size: matrix size for random kinds.
    """
    rng = np.random.default_rng(seed)
    b = CorpusBuilder()
    tag = f"{kind}-{seed}"
    if kind == "abelian":
        base = _upper(rng, size, -3, 3)
        mats, power = [], np.eye(size, dtype=int)
        for _ in range(dim):
            power = power @ base
            mats.append(power.tolist())
        b.algebra(f"C{dim}", abelian(dim))
        b.rep(tag, f"C{dim}", mats)
    elif kind == "heisenberg":
        b.algebra("h3", heisenberg())
        b.rep(tag, "h3", H3_STANDARD)
        # the same rep shifted by a seeded character (x -> c, y -> e, z -> 0)
        c, e = (int(v) for v in rng.integers(-3, 4, size=2))
        mats = [np.array(m) for m in H3_STANDARD]
        mats[0] = mats[0] + c * np.eye(3, dtype=int)
        mats[1] = mats[1] + e * np.eye(3, dtype=int)
        b.rep(f"{tag}-shifted", "h3", [m.tolist() for m in mats])
    elif kind == "ax+b":
        b.algebra("axb", axb())
        c = int(rng.integers(-3, 4))
        s1, s2 = (int(v) for v in rng.integers(1, 4, size=2))
        x = _diag(c + 2, c + 1, c)
        y = [[0, s1, 0], [0, 0, s2], [0, 0, 0]]
        b.rep(tag, "axb", [x, y])
    elif kind in ("random-nilpotent", "random-solvable"):
        for _ in range(200):
            if kind == "random-nilpotent":
                gens = [_upper(rng, size, -2, 2, strict=True) for _ in range(2)]
                gens[0] = gens[0] + int(rng.integers(-2, 3)) * np.eye(size, dtype=int)
            else:
                gens = [np.diag(rng.integers(-2, 3, size=size)), _upper(rng, size, -2, 2, strict=True, density=0.4)]
            basis = bracket_closure(gens)
            if basis is None or len(basis) < 2:
                continue
            from .theorems import span_representation

            L = span_representation(basis, EXACT, nilpotent=False).rep.algebra
            if (kind == "random-nilpotent") == is_nilpotent(L):
                break
        else:
            raise CorpusError(f"no {kind} sample found for seed {seed}")
        _span_entry(b, f"{tag}-alg", tag, basis)
    elif kind == "commuting-tuple":
        a = _upper(rng, size, -3, 3)
        p = [int(v) for v in rng.integers(-2, 3, size=3)]
        bmat = p[0] * a @ a + p[1] * a + p[2] * np.eye(size, dtype=int)
        b.algebra("C2", abelian(2))
        b.rep(tag, "C2", [a.tolist(), bmat.tolist()])
        n1 = _upper(rng, 2, -2, 2, strict=True) + int(rng.integers(-3, 4)) * np.eye(2, dtype=int)
        n2 = _upper(rng, 2, -2, 2, strict=True) + int(rng.integers(-3, 4)) * np.eye(2, dtype=int)
        b.tuple_pair(f"{tag}-tensor", [n1.tolist()], [n2.tolist()], 2, 2)
    else:
        raise CorpusError(f"unknown generator kind {kind!r}; choose from {', '.join(GENERATOR_KINDS)}")
    return b


def nilpotent_epimorphisms(count: int = 10, seed: int = 0) -> CorpusBuilder:
    """Epimorphisms onto abelian and Heisenberg targets with random representations.

    Sources: h3 -> C2 (quotient by the center), h3 (+) C1 -> h3, h3 (+) C1 -> C3,
    C3 -> C2 and random surjections between abelian algebras.
    """
    from .lie import direct_sum

    rng = np.random.default_rng(seed)
    b = CorpusBuilder()
    b.algebra("h3", heisenberg())
    b.algebra("h3+C1", direct_sum(heisenberg(), abelian(1)))
    for n in (1, 2, 3):
        b.algebra(f"C{n}", abelian(n))
    shapes = [
        ("h3", "C2", [[1, 0, 0], [0, 1, 0]]),
        ("h3+C1", "h3", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
        ("h3+C1", "C3", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
        ("C3", "C2", None),
        ("h3", "C1", None),
    ]
    for i in range(count):
        src, tgt, hom = shapes[i % len(shapes)]
        n_t = {"C1": 1, "C2": 2, "C3": 3, "h3": 3}[tgt]
        n_s = {"C3": 3, "h3": 3, "h3+C1": 4}[src]
        if hom is None:
            while True:
                cand = rng.integers(-2, 3, size=(n_t, n_s))
                if src == "h3":
                    cand[:, 2] = 0
                if EXACT.rank(EXACT.asarray(cand.tolist())) == n_t:
                    break
            hom = cand.tolist()
        if tgt == "h3":
            shift_c = int(rng.integers(-2, 3))
            mats = [(np.array(m) + (shift_c * np.eye(3, dtype=int) if k == 0 else 0)).tolist() for k, m in enumerate(H3_STANDARD)]
        else:
            base = _upper(rng, 2, -2, 2)
            mats, power = [], np.eye(2, dtype=int)
            for _ in range(n_t):
                power = power @ base
                mats.append(power.tolist())
        b.epimorphism(f"epi-{i}", src, tgt, hom, mats)
    return b


def shipped_builder() -> CorpusBuilder:
    """The corpus distributed with the package."""
    b = CorpusBuilder()
    for name in EXAMPLES:
        b.merge(example(name))
    for kind, seeds in (
        ("abelian", (1, 2)),
        ("heisenberg", (1,)),
        ("ax+b", (1, 2)),
        ("random-nilpotent", (1, 2, 3)),
        ("random-solvable", (1, 2, 3)),
        ("commuting-tuple", (1, 2)),
    ):
        for s in seeds:
            b.merge(generate(kind, s))
    b.merge(nilpotent_epimorphisms(10, seed=7))
    return b


def shipped_path() -> str:
    from importlib.resources import files

    return str(files("jointspec") / "data" / "corpus.json")


def load_shipped(backend: Backend = EXACT) -> Corpus:
    return load(shipped_path(), backend)
