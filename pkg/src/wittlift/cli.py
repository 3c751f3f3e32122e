"""Command-line entry point: ``wittlift verify-paper | check-lift | search | local``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .algebra.fields import field_of_order
from .algebra.matrix import RingMatrix
from .cohomology import GroupTooLarge, Verdict, decide_lift, exhaustive_lift_search
from .groups import FiniteGroup, GroupError, named_group
from .local_galois import (
    CupObstruction,
    HeisenbergRep,
    LevelMismatch,
    LocalModel,
    NotOrthogonal,
    TameModel,
    cup,
    heisenberg_build,
    heisenberg_checks,
    heisenberg_lift,
    lift_orthogonal_pair,
    tame_symbol,
)
from .reps import NotAHomomorphism, RelatorViolation, Representation
from .report import SCHEMA_VERSION, build_report, dumps, recheck_report, render_markdown, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    output: str | None = None
    threads: int | None = None

    def __post_init__(self):
        for name, value in self.budget.items():
            if value is not None and value < 0:
                raise InputError(f"budget {name} must be non-negative")
        for name, path in self.inputs.items():
            if path is not None and not Path(path).is_file():
                raise InputError(f"{name} file {path} does not exist")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_group(path: str) -> FiniteGroup:
    """A group file holds either a catalog name ({"name": "Q8"}) or a full multiplication table."""
    obj = _load_json(path)
    try:
        if "table" in obj:
            return FiniteGroup.from_json(obj)
        return named_group(obj["name"])
    except (KeyError, TypeError, GroupError) as exc:
        raise InputError(f"bad group file {path}: {exc!r}") from exc


def load_rep(path: str, G: FiniteGroup) -> Representation:
    obj = _load_json(path)
    try:
        return Representation.from_json(obj, group=G)
    except (RelatorViolation, NotAHomomorphism):
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad representation file {path}: {exc!r}") from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# verify-paper
# ---------------------------------------------------------------------------


def cmd_verify_paper(config: RunConfig) -> int:
    if config.inputs.get("recheck"):
        report = _load_json(config.inputs["recheck"])
        try:
            results = recheck_report(report)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cannot recheck: {exc}") from exc
        bad = [(t, c) for t, c, ok in results if not ok]
        for t, c, ok in results:
            print(f"{'OK  ' if ok else 'BAD '} {t} / {c}")
        if bad:
            print(f"{len(bad)} record(s) failed to re-verify: " + "; ".join(f"{t} / {c}" for t, c in bad))
            return EXIT_FAIL
        print(f"all {len(results)} records re-verify")
        return EXIT_OK
    try:
        records = run_suite(config.params.get("only"), config.threads)
    except KeyError as exc:
        raise InputError(str(exc)) from exc
    echo = {"command": config.command, "only": config.params.get("only")}
    report = build_report(records, echo, timings=config.params.get("timings", False))
    prefix = config.output or "wittlift-report"
    Path(f"{prefix}.json").write_text(dumps(report))
    Path(f"{prefix}.md").write_text(render_markdown(records, report, config.params.get("timings", False)))
    for r in records:
        print(f"{r.verdict}  {r.tag}  {r.name}: {r.detail}")
    s = report["summary"]
    print(f"{s['pass']}/{s['checks']} checks pass; report written to {prefix}.json and {prefix}.md")
    return EXIT_OK if s["fail"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# check-lift
# ---------------------------------------------------------------------------


def cmd_check_lift(config: RunConfig) -> int:
    G = load_group(config.inputs["group"])
    f = load_rep(config.inputs["rep"], G)
    cert = decide_lift(f)
    if config.params.get("exhaustive"):
        try:
            cert.exhaustive = exhaustive_lift_search(f, budget=config.budget["max_candidates"])
        except ValueError as exc:
            cert.exhaustive = {"skipped": str(exc)}
    out = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": asdict(config),
        "certificate": cert.to_json(emit_cocycle=config.params.get("emit_cocycle", False)),
        "verified": cert.verify(),
    }
    _emit(_dump(out), config.output)
    ex = cert.exhaustive or {}
    agrees = "lifts_found" not in ex or (ex["lifts_found"] > 0) == (cert.verdict is Verdict.LIFTS)
    return EXIT_OK if out["verified"] and agrees else EXIT_FAIL


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _unipotent_candidates(G: FiniteGroup, q: int, dim: int, rng: np.random.Generator, limit: int):
    """Tuples of strictly upper triangular matrices (one per generator) over F_q, as I + N.

    The whole space is enumerated in a fixed order when it fits in ``limit``,
    otherwise ``limit`` seeded random tuples are drawn.
    """
    slots = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    per_gen = q ** len(slots)
    total = per_gen ** len(G.generators)

    def build(codes):
        mats = []
        for code in codes:
            N = np.zeros((dim, dim), dtype=np.int64)
            for (i, j), digit in zip(slots, np.unravel_index(code, (q,) * len(slots)) if slots else ()):
                N[i, j] = digit
            mats.append(N)
        return mats

    if total <= limit:
        for codes in itertools.product(range(per_gen), repeat=len(G.generators)):
            yield build(codes)
    else:
        for _ in range(limit):
            yield build(rng.integers(0, per_gen, size=len(G.generators)).tolist())


def _try_rep(G: FiniteGroup, k, mats, name: str) -> Representation | None:
    try:
        f = Representation(G, k, mats, name=name, check=False)
        f.check_relators()
        f.verify_homomorphism()
    except (RelatorViolation, NotAHomomorphism):
        return None
    return f


def cmd_search(config: RunConfig) -> int:
    G = load_group(config.inputs["group"])
    q = config.params["field"]
    try:
        k = field_of_order(q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    budget = config.budget["max_candidates"]
    max_dim = config.params["max_dim"]
    seed = config.params["seed"]
    rng = np.random.default_rng(seed)
    records, seen, spent = [], set(), 0
    complete = True

    def consider(f: Representation | None, source: str):
        if f is None:
            return
        key = tuple(M.entries.tobytes() for M in f.generator_images)
        if key in seen:
            return
        seen.add(key)
        cert = decide_lift(f)
        records.append(
            {
                "source": source,
                "dim": f.n,
                "images": [M.tolist() for M in f.generator_images],
                "verdict": cert.verdict.value,
                "cocycle_hash": cert.cocycle.hash(),
            }
        )

    library = _load_json(config.inputs["library"]) if config.inputs.get("library") else []
    for i, obj in enumerate(library):
        if spent >= budget:
            complete = False
            break
        spent += 1
        try:
            f = Representation.from_json(obj, group=G)
        except (RelatorViolation, NotAHomomorphism, KeyError, ValueError):
            continue
        if f.n <= max_dim:
            consider(f, f"library[{i}]")
    for dim in range(1, max_dim + 1):
        remaining = budget - spent
        if remaining <= 0:
            complete = False
            break
        eye = np.eye(dim, dtype=np.int64)
        slots = dim * (dim - 1) // 2
        if (q**slots) ** len(G.generators) > remaining:
            complete = False
        for mats in _unipotent_candidates(G, q, dim, rng, remaining):
            spent += 1
            images = [RingMatrix(k, np.where(eye == 1, 1, N)) for N in mats]
            consider(_try_rep(G, k, images, f"unipotent dim {dim}"), f"unipotent dim {dim}")
    obstructed = sum(r["verdict"] == Verdict.OBSTRUCTED.value for r in records)
    # an obstructed representation settles the group; lifts alone never do
    global_status = "NOT_LIFTABLE_WITNESSED" if obstructed else "OPEN"
    out = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": asdict(config),
        "status": "COMPLETE" if complete else "INCOMPLETE",
        "candidates_spent": spent,
        "records": records,
        "summary": {
            "representations": len(records),
            "lifts": len(records) - obstructed,
            "obstructed": obstructed,
            "global_status": global_status,
        },
    }
    _emit(_dump(out), config.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# local
# ---------------------------------------------------------------------------


def _vector(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer vector {text!r}") from exc


def cmd_local(config: RunConfig) -> int:
    sub = config.params["local"]
    P = config.params
    if sub == "lift-pair":
        model = LocalModel(P["p"], P["d"], P.get("s", 2))
        x1, x2 = (model.element(_vector(P[k]), 1) for k in ("x1", "x2"))
        if len(x1.coords) != model.d or len(x2.coords) != model.d:
            raise InputError(f"classes need {model.d} coordinates")
        try:
            X1, X2 = lift_orthogonal_pair(x1, x2)
        except NotOrthogonal as exc:
            _emit(_dump({"error": "NotOrthogonal", "message": str(exc)}), config.output)
            return EXIT_FAIL
        out = {"model": model.to_json(), "x1": x1.to_json(), "x2": x2.to_json(),
               "lift": [X1.to_json(), X2.to_json()], "cup_level2": cup(X1, X2).value}
        _emit(_dump(out), config.output)
        return EXIT_OK
    if sub == "heisenberg":
        obj = _load_json(config.inputs["in"])
        if P.get("build"):
            try:
                m = obj["model"]
                model = LocalModel(m["p"], m["d"], m.get("s", 2))
                x1, x2, twist = (model.element(obj[k], 1) for k in ("x1", "x2", "twist"))
            except (KeyError, TypeError) as exc:
                raise InputError(f"bad build input: {exc!r}") from exc
            try:
                rep = heisenberg_build(model, x1, x2, twist)
            except CupObstruction as exc:
                _emit(_dump({"error": "CupObstruction", "message": str(exc)}), config.output)
                return EXIT_FAIL
            _emit(_dump(rep.to_json()), config.output)
            return EXIT_OK
        try:
            rhobar = HeisenbergRep.from_json(obj)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad representation: {exc!r}") from exc
        lift = heisenberg_lift(rhobar)
        checks = heisenberg_checks(lift, rhobar)
        _emit(_dump({"lift": lift.to_json(), "checks": checks}), config.output)
        return EXIT_OK if all(checks.values()) else EXIT_FAIL
    if sub == "tame-symbol":
        model = TameModel(P["p"], P["q"])
        a, b = (tuple(_vector(P[k])) for k in ("a", "b"))
        if len(a) != 2 or len(b) != 2:
            raise InputError("elements are given as valuation,unit")
        out = {"model": model.to_json(), "a": list(a), "b": list(b), "symbol": tame_symbol(model, a, b)}
        _emit(_dump(out), config.output)
        return EXIT_OK
    raise InputError(f"unknown local command {sub!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wittlift", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"wittlift {__version__}")
    ap.add_argument("--threads", type=int, help="worker threads (default: WITTLIFT_THREADS or CPU count)")
    sub = ap.add_subparsers(dest="command", required=True)

    vp = sub.add_parser("verify-paper", help="run the verification suite")
    vp.add_argument("--only", metavar="TAG", help="run one section, e.g. prop:odd-power")
    vp.add_argument("--recheck", metavar="FILE", help="re-verify the witnesses stored in a JSON report")
    vp.add_argument("--out", metavar="PREFIX", help="write PREFIX.json and PREFIX.md (default wittlift-report)")
    vp.add_argument("--timings", action="store_true", help="include wall times in the JSON report")

    cl = sub.add_parser("check-lift", help="decide whether a representation lifts to W_2(k)")
    cl.add_argument("--group", required=True)
    cl.add_argument("--rep", required=True)
    cl.add_argument("--exhaustive", action="store_true", help="add a brute-force search stamp")
    cl.add_argument("--budget", type=int, default=1 << 20, help="candidate limit for --exhaustive")
    cl.add_argument("--emit-cocycle", action="store_true")
    cl.add_argument("--out")

    se = sub.add_parser("search", help="decide liftability for many small representations of a group")
    se.add_argument("--group", required=True)
    se.add_argument("--field", type=int, required=True, metavar="Q")
    se.add_argument("--max-dim", type=int, required=True)
    se.add_argument("--budget", type=int, required=True)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--library", help="JSON list of representations to check first")
    se.add_argument("--out")

    lo = sub.add_parser("local", help="the local Galois cohomology model")
    lsub = lo.add_subparsers(dest="local", required=True)
    lp = lsub.add_parser("lift-pair")
    lp.add_argument("--p", type=int, required=True)
    lp.add_argument("--d", type=int, required=True)
    lp.add_argument("--s", type=int, default=2)
    lp.add_argument("--x1", required=True)
    lp.add_argument("--x2", required=True)
    lp.add_argument("--out")
    lh = lsub.add_parser("heisenberg")
    mode = lh.add_mutually_exclusive_group(required=True)
    mode.add_argument("--build", action="store_true")
    mode.add_argument("--lift", action="store_true")
    lh.add_argument("--in", dest="infile", required=True)
    lh.add_argument("--out")
    lt = lsub.add_parser("tame-symbol")
    lt.add_argument("--p", type=int, required=True)
    lt.add_argument("--q", type=int, required=True)
    lt.add_argument("--a", required=True, metavar="VA,UA")
    lt.add_argument("--b", required=True, metavar="VB,UB")
    lt.add_argument("--out")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    c = args.command
    if c == "verify-paper":
        return RunConfig(c, {"recheck": args.recheck}, {"only": args.only, "timings": args.timings},
                         output=args.out, threads=args.threads)
    if c == "check-lift":
        return RunConfig(c, {"group": args.group, "rep": args.rep},
                         {"exhaustive": args.exhaustive, "emit_cocycle": args.emit_cocycle},
                         {"max_candidates": args.budget}, args.out, args.threads)
    if c == "search":
        return RunConfig(c, {"group": args.group, "library": args.library},
                         {"field": args.field, "max_dim": args.max_dim, "seed": args.seed},
                         {"max_candidates": args.budget, "max_dim": args.max_dim}, args.out, args.threads)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "threads", "out", "infile")}
    return RunConfig(c, {"in": getattr(args, "infile", None)}, params, output=args.out, threads=args.threads)


COMMANDS = {"verify-paper": cmd_verify_paper, "check-lift": cmd_check_lift, "search": cmd_search, "local": cmd_local}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.threads is not None:
        os.environ["WITTLIFT_THREADS"] = str(args.threads)
    try:
        config = config_from_args(args)
        return COMMANDS[args.command](config)
    except (InputError, RelatorViolation, NotAHomomorphism, GroupTooLarge, GroupError, LevelMismatch) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
