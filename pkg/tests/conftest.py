from __future__ import annotations

import numpy as np
import pytest

from jointspec import corpus as cp
from jointspec import theorems as th
from jointspec.linalg import EXACT, FloatBackend
from jointspec.reps import diagonal_rep, multiplication_rep, pullback, tensor_rep

# Filled by tests/test_acceptance.py, printed once at the end of the run.
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")


def entry_reps(entry: cp.CorpusEntry) -> list:
    """Every representation a corpus entry describes, including derived ones."""
    o = entry.objects
    if entry.kind == "rep":
        return [(entry.id, o["rep"])]
    if entry.kind == "pair":
        a, b = o["left"], o["right"]
        return [
            (f"{entry.id}:left", a),
            (f"{entry.id}:right", b),
            (f"{entry.id}:tensor", tensor_rep(a, b)),
            (f"{entry.id}:multiplication", multiplication_rep(a, b)),
        ]
    if entry.kind == "diagonal":
        a, b = o["left"], o["right"]
        return [(f"{entry.id}:theta", diagonal_rep(a, b)), (f"{entry.id}:twisted", diagonal_rep(a, b, twisted=True))]
    if entry.kind == "tuple":
        be = entry.backend
        return [
            (f"{entry.id}:a", th.tuple_spectra(o["a"], be, o["d1"])[0].rep),
            (f"{entry.id}:b", th.tuple_spectra(o["b"], be, o["d2"])[0].rep),
        ]
    return [(f"{entry.id}:target", o["rep"]), (f"{entry.id}:source", pullback(o["rep"], o["map"], o["source"]))]


def corpus_reps(backend) -> list:
    out = []
    for e in cp.load_shipped(backend).entries:
        out.extend(entry_reps(e))
    return out


@pytest.fixture(scope="session")
def exact_corpus():
    return cp.load_shipped(EXACT)


@pytest.fixture(scope="session")
def float_corpus():
    return cp.load_shipped(FloatBackend())


@pytest.fixture(scope="session")
def exact_reps():
    return corpus_reps(EXACT)


@pytest.fixture(scope="session")
def float_reps():
    return corpus_reps(FloatBackend())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
