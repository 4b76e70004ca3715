"""Command line front-end: ``compute``, ``verify`` and ``generate``.

Exit codes: 0 success, 1 computation error or violated verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor

from . import corpus as cp
from .lie import LieError, is_nilpotent
from .linalg import DEFAULT_TOL, LinalgError, backend_for
from .reps import diagonal_rep, multiplication_rep, pullback, tensor_rep
from .spectra import AssumptionViolated, compute_spectra
from . import theorems as th

PAIR_CHECKS = ("4.4", "5.1", "6.1", "6.2", "7.2", "7.3")
APPLICABLE = {
    "rep": ("3.4", "projection"),
    "pair": PAIR_CHECKS,
    "diagonal": ("8.1", "8.2"),
    "tuple": ("5.2", "6.3", "7.4", "7.5"),
    "epimorphism": ("3.11",),
}
SUBALGEBRA_SAMPLES = 20


# ---------------------------------------------------------------------------
# per-entry work


def verify_entry(entry: cp.CorpusEntry, theorem_ids) -> list:
    """Every requested and applicable theorem check for one corpus entry."""
    wanted = [t for t in APPLICABLE[entry.kind] if t in theorem_ids and (not entry.checks or t in entry.checks)]
    o = entry.objects
    out: list = []
    for tid in wanted:
        if entry.kind == "rep":
            rho = o["rep"]
            L = rho.algebra
            if tid == "3.4":
                out.append(th.check_duality(rho, entry.id).verdict)
                for i, ideal in enumerate(th.jordan_holder_ideals(L)[:-1]):
                    out.append(th.check_shift_restriction(rho, ideal, f"{entry.id}/L{i + 1}"))
            else:
                subs = [(f"L{i + 1}", s) for i, s in enumerate(th.jordan_holder_ideals(L))]
                if is_nilpotent(L):
                    seed = zlib.crc32(entry.id.encode())
                    subs += [(f"S{i}", s) for i, s in enumerate(th.random_subalgebras(L, SUBALGEBRA_SAMPLES, seed))]
                out.extend(th.check_projection(rho, s, f"{entry.id}/{tag}") for tag, s in subs)
        elif entry.kind == "pair":
            a, b = o["left"], o["right"]
            fn = {
                "4.4": th.check_complex_isomorphism,
                "5.1": th.check_tensor_theorem,
                "6.1": th.check_projector_family,
                "6.2": th.check_essential_tensor_theorem,
                "7.2": th.check_multiplication_theorem,
                "7.3": th.check_essential_multiplication_theorem,
            }[tid]
            out.append(fn(a, b, entry.id))
        elif entry.kind == "diagonal":
            if not any(v.theorem in ("8.1", "8.2") for v in out):
                out.extend(v for v in th.check_diagonal_theorems(o["left"], o["right"], entry.id) if v.theorem in wanted)
        elif entry.kind == "tuple":
            a, b, d1, d2, be = o["a"], o["b"], o["d1"], o["d2"], entry.backend
            if tid == "5.2":
                out.append(th.check_nilpotent_tuple_theorem(a, b, be, entry.id, d1, d2))
            elif tid == "7.4":
                out.append(th.check_multiplication_tuple_theorem(a, b, be, entry.id, d1, d2))
            else:
                ra, _ = th.tuple_spectra(a, be, d1)
                rb, _ = th.tuple_spectra(b, be, d2)
                if tid == "6.3":
                    out.append(th.check_essential_tensor_theorem(ra.rep, rb.rep, entry.id, theorem="6.3"))
                else:
                    out.append(th.check_essential_multiplication_theorem(ra.rep, rb.rep, entry.id, theorem="7.5"))
        else:
            out.append(th.check_functoriality(o["rep"], o["map"], o["source"], entry.id))
    return out


def compute_entry(entry: cp.CorpusEntry) -> dict:
    """Spectrum reports for every representation an entry describes."""
    o = entry.objects
    reps = {}
    if entry.kind == "rep":
        reps["rep"] = o["rep"]
    elif entry.kind == "pair":
        reps.update(left=o["left"], right=o["right"], tensor=tensor_rep(o["left"], o["right"]))
        reps["multiplication"] = multiplication_rep(o["left"], o["right"])
    elif entry.kind == "diagonal":
        reps.update(theta=diagonal_rep(o["left"], o["right"]), theta_twisted=diagonal_rep(o["left"], o["right"], twisted=True))
    elif entry.kind == "tuple":
        be = entry.backend
        reps["a"] = th.tuple_spectra(o["a"], be, o["d1"])[0].rep
        reps["b"] = th.tuple_spectra(o["b"], be, o["d2"])[0].rep
    else:
        reps.update(target=o["rep"], source=pullback(o["rep"], o["map"], o["source"]))
    return {name: compute_spectra(rho) for name, rho in reps.items()}


def _work(args):
    mode, raw, algebras_raw, backend_name, tol, theorem_ids = args
    be = backend_for(backend_name, tol)
    try:
        entry = cp.load_entry(raw, algebras_raw, be)
        if mode == "verify":
            return ("ok", [v.to_json() | {"summary": v.summary()} for v in verify_entry(entry, theorem_ids)])
        return ("ok", {k: r.to_json() for k, r in compute_entry(entry).items()})
    except cp.CorpusError as exc:
        return ("input", str(exc))
    except (LinalgError, LieError, AssumptionViolated, ArithmeticError) as exc:
        return ("compute", f"{raw.get('id')}: {type(exc).__name__}: {exc}")


def run(mode: str, corpus: cp.Corpus, backend_name: str, tol: float | None, theorem_ids=(), jobs: int = 1) -> list:
    """Run every entry, in parallel when ``jobs > 1``; results keep corpus order."""
    algebras_raw = json.loads(corpus.source_text).get("algebras", {}) if corpus.source_text else corpus.raw_algebras
    tasks = [(mode, e.raw, algebras_raw, backend_name, tol, tuple(theorem_ids)) for e in corpus.entries]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_work, tasks))
    return [_work(t) for t in tasks]


# ---------------------------------------------------------------------------
# formatting


def _table_report(eid: str, name: str, rep: dict) -> list[str]:
    from .linalg import EXACT, FloatBackend
    from .spectra import CharSet

    be = EXACT if rep["backend"] == "exact" else FloatBackend()
    n = rep["algebra_dim"]

    def fmt(pts):
        return CharSet(be, n, [tuple(be.from_json(*x) for x in p) for p in pts]).format()

    sets = rep["sets"]
    lines = [f"[{eid}:{name}] dim L = {n}, weights {fmt(rep['weights'])}"]
    lines.append(f"  taylor          {fmt(sets['taylor'])}")
    for k, pts in sets["taylor_by_degree"]:
        lines.append(f"  sigma_{k:<9} {fmt(pts)}")
    for label, key in (("delta", "slodkowski_delta"), ("pi", "slodkowski_pi")):
        for k, pts in sets[key]:
            lines.append(f"  sigma_{label},{k:<{8 - len(label)}} {fmt(pts)}")
    lines.append(f"  split           {fmt(sets['split'])}")
    leveled = ("by_degree", "delta", "pi")
    ess = all(
        all(not pts for _, pts in v) if k.endswith(leveled) else not v
        for k, v in sets.items()
        if k.startswith("essential")
    )
    lines.append(f"  essential       {'all empty' if ess else 'NONEMPTY'}")
    lines.append(f"  homotopy residual {rep['homotopy_residual']:.3g}")
    return lines


# ---------------------------------------------------------------------------
# commands


def _load_input(args, be):
    if args.example:
        builder = cp.example(args.example)
        return cp.loads(builder.dumps(), be)
    path = args.input or cp.shipped_path()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise cp.CorpusError(f"cannot read {path}: {exc.strerror}") from exc
    return cp.loads(text, be)


def _emit(args, payload, text_lines) -> None:
    body = cp.canonical_dumps(payload) if args.format == "json" else "\n".join(text_lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cp.canonical_dumps(payload))
    sys.stdout.write(body)


def cmd_compute(args) -> int:
    be = backend_for(args.backend, args.tolerance)
    corpus = _load_input(args, be)
    results = run("compute", corpus, args.backend, args.tolerance, jobs=args.jobs)
    payload, lines, status = {"entries": []}, [], 0
    for entry, (kind, res) in zip(corpus.entries, results):
        if kind != "ok":
            print(f"error: {res}", file=sys.stderr)
            status = max(status, 2 if kind == "input" else 1)
            continue
        payload["entries"].append({"id": entry.id, "reports": res})
        for name, rep in res.items():
            lines.extend(_table_report(entry.id, name, rep))
    _emit(args, payload, lines)
    return status


def cmd_verify(args) -> int:
    ids = th.THEOREM_IDS if args.theorem == "all" else (args.theorem,)
    if args.theorem != "all" and args.theorem not in th.THEOREM_IDS:
        print(f"error: unknown theorem id {args.theorem!r}; choose from all, {', '.join(th.THEOREM_IDS)}", file=sys.stderr)
        return 2
    be = backend_for(args.backend, args.tolerance)
    corpus = _load_input(args, be)
    results = run("verify", corpus, args.backend, args.tolerance, ids, jobs=args.jobs)
    payload, lines, status = {"verdicts": []}, [], 0
    counts: dict = {}
    for entry, (kind, res) in zip(corpus.entries, results):
        if kind != "ok":
            print(f"error: {res}", file=sys.stderr)
            status = max(status, 2 if kind == "input" else 1)
            continue
        for v in res:
            counts[v["verdict"]] = counts.get(v["verdict"], 0) + 1
            lines.append(v.pop("summary"))
            lines.extend(f"    {d}" for d in v["detail"] if "FAILED" in d or "finite-dim" in d or "shift h" in d)
            payload["verdicts"].append(v)
            if v["verdict"] == th.VIOLATED:
                status = max(status, 1)
    lines.append("totals: " + ", ".join(f"{k} {counts[k]}" for k in sorted(counts)) if counts else "totals: no applicable checks")
    _emit(args, payload, lines)
    return status


def cmd_generate(args) -> int:
    if args.kind not in cp.GENERATOR_KINDS:
        print(f"error: unknown kind {args.kind!r}; choose from {', '.join(cp.GENERATOR_KINDS)}", file=sys.stderr)
        return 2
    text = cp.generate(args.kind, args.seed, dim=args.dim, size=args.size).dumps()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jointspec", description="Joint spectra of Lie-algebra representations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", nargs="?", help="corpus JSON file (default: the shipped corpus)")
        p.add_argument("--example", choices=sorted(cp.EXAMPLES), help="use a builtin example instead of a file")
        p.add_argument("--backend", choices=("exact", "float"), default="float")
        p.add_argument("--tolerance", type=float, default=None, help=f"float tolerance (default {DEFAULT_TOL:.3g})")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--output", help="also write the JSON report here")
        p.add_argument("--format", choices=("json", "table"), default="table")

    common(sub.add_parser("compute", help="spectra of every representation in a corpus"))
    v = sub.add_parser("verify", help="run theorem checks over a corpus")
    common(v)
    v.add_argument("--theorem", default="all", help="theorem id or 'all'")
    g = sub.add_parser("generate", help="write a deterministic corpus entry")
    g.add_argument("kind")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dim", type=int, default=1)
    g.add_argument("--size", type=int, default=3)
    g.add_argument("--output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"compute": cmd_compute, "verify": cmd_verify, "generate": cmd_generate}[args.command]
    try:
        return handler(args)
    except cp.CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LinalgError, LieError, AssumptionViolated) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
