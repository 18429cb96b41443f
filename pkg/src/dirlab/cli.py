"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 a theorem check reported a
violation (which means the implementation is wrong, not the theorem).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .directions import (
    FuncTable,
    directions_of_function,
    directions_of_points,
    point_set,
)
from .errors import DirlabError, UsageError
from .field import FieldCtx, FieldSpec, build_field
from .linearized import detect_frobenius_monomial, detect_linearized
from .report import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    AnalyzePayload,
    DirectionsPayload,
    SampleReport,
    emit,
    envelope,
)
from .search import (
    corollary_census,
    default_workers,
    doubling_candidates,
    verify_directions_theorem,
    verify_mcconnel_extended,
)
from .sets import MulSet, coset, doubling_report, subgroup_by_index

log = logging.getLogger("dirlab")

VERBS = ("search", "verify-mcconnel", "verify-directions", "census",
         "sample-doubling", "directions", "analyze")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    spec: Optional[FieldSpec]
    verb: str
    args: argparse.Namespace
    output: Optional[str]
    format: str
    workers: int
    seed: Optional[int]


def parse_field_file(path: str) -> FieldSpec:
    """Read ``p=..``, ``n=..`` and optional ``modulus=c0,..,cn`` lines."""
    vals = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}: cannot parse line {line!r}; expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        vals[k] = v
    if "p" not in vals or "n" not in vals:
        raise UsageError(f"{path}: field file needs p= and n= lines")
    return FieldSpec(int(vals["p"]), int(vals["n"]), _int_tuple(vals.get("modulus")))


def _int_tuple(text: Optional[str]) -> Optional[tuple[int, ...]]:
    if text is None or not text.strip():
        return None
    try:
        return tuple(int(t) for t in text.replace(" ", "").strip("[]").split(",") if t)
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def _groups(text: Optional[str]) -> Optional[list[list[int]]]:
    """'1,2;5' -> [[1, 2], [5]]."""
    if text is None:
        return None
    return [list(_int_tuple(g) or ()) for g in text.split(";")]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("field")
    g.add_argument("--field", help="field spec file (p=, n=, optional modulus= lines)")
    g.add_argument("--p", type=int, help="characteristic")
    g.add_argument("--n", type=int, help="extension degree (default 1 with --p)")
    g.add_argument("--modulus", help="monic modulus coefficients, constant term first")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("json", "csv", "text"), default="json")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--workers", type=int, default=None,
                   help="worker processes (default $DIRLAB_WORKERS or 1)")
    o.add_argument("--seed", type=int, default=None, help="seed for random samplers")
    o.add_argument("-v", "--verbose", action="store_true")

    setsel = _Parser(add_help=False)
    s = setsel.add_mutually_exclusive_group(required=True)
    s.add_argument("--set", dest="set_codes", help='element codes, e.g. "1,2,4"')
    s.add_argument("--subgroup-index", type=int, help="the subgroup of this index")
    s.add_argument("--coset", help="a:d, meaning a times the index-d subgroup")

    parser = _Parser(prog="dirlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("search", parents=[common, setsel],
                   help="enumerate f with all difference quotients in D")
    sub.add_parser("verify-mcconnel", parents=[common, setsel],
                   help="search and check the Frobenius-monomial conclusion")
    vd = sub.add_parser("verify-directions", parents=[common],
                        help="exhaustive few-directions => linearized check")
    vd.add_argument("--max-q", type=int, default=9, help="exhaustion guard (default 9)")
    sub.add_parser("census", parents=[common],
                   help="direction sets of all linearized polynomials")
    sd = sub.add_parser("sample-doubling", parents=[common],
                        help="small-doubling sets built from a subgroup")
    sd.add_argument("--strategy", required=True,
                    choices=("subgroup-plus-points", "coset-union"))
    sd.add_argument("--index", type=int, required=True, help="index of the base subgroup K")
    sd.add_argument("--extra", help='explicit extra points per candidate, e.g. "5;7,8"')
    sd.add_argument("--cosets", help='coset representatives per candidate, e.g. "1,2;1,3"')
    sd.add_argument("--samples", type=int, default=0, help="random candidates to draw")
    sd.add_argument("--size", type=int, default=1,
                    help="extra points or cosets per random candidate")
    dr = sub.add_parser("directions", parents=[common], help="direction set of a function or points")
    src = dr.add_mutually_exclusive_group(required=True)
    src.add_argument("--func", help='JSON {"p":..,"n":..,"values":[..]}')
    src.add_argument("--points", help="JSON list of [x, y] code pairs")
    an = sub.add_parser("analyze", parents=[common], help="linearized / monomial verdicts for f")
    an.add_argument("--func", required=True, help='JSON {"p":..,"n":..,"values":[..]}')
    return parser


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def resolve_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    spec = None
    inline = args.p is not None or args.n is not None or args.modulus is not None
    if args.field and inline:
        raise UsageError("give either --field or --p/--n, not both")
    if args.field:
        spec = parse_field_file(args.field)
    elif inline:
        if args.p is None:
            raise UsageError("--n/--modulus need --p")
        spec = FieldSpec(args.p, 1 if args.n is None else args.n, _int_tuple(args.modulus))
    elif getattr(args, "func", None):
        data = _read_json(args.func)
        if "p" in data and "n" in data:
            spec = FieldSpec(data["p"], data["n"], _int_tuple(",".join(map(str, data["modulus"])))
                             if data.get("modulus") else None)
    if spec is None:
        raise UsageError("no field given; add --field <path> or --p <prime> --n <degree>")
    workers = args.workers if args.workers is not None else default_workers()
    if workers < 1:
        raise UsageError("--workers must be at least 1")
    if args.verb == "sample-doubling" and args.samples and args.seed is None:
        raise UsageError("--samples draws random candidates; add --seed <int>")
    return RunConfig(spec, args.verb, args, args.out, args.format, workers, args.seed)


def _select_set(ctx: FieldCtx, args) -> MulSet:
    if args.set_codes is not None:
        codes = _int_tuple(args.set_codes) or ()
        if 0 in codes:
            raise UsageError("--set cannot contain 0; D must lie in the nonzero elements")
        return MulSet.of(ctx, codes)
    if args.subgroup_index is not None:
        return subgroup_by_index(ctx, args.subgroup_index)
    try:
        a, d = (int(t) for t in args.coset.split(":"))
    except ValueError:
        raise UsageError(f"--coset expects a:d, got {args.coset!r}") from None
    return coset(ctx, a, d)


def _command_echo(cfg: RunConfig) -> dict:
    skip = {"field", "p", "n", "modulus", "format", "out", "workers", "verbose", "verb"}
    params = {k: v for k, v in sorted(vars(cfg.args).items()) if k not in skip and v is not None}
    return {"verb": cfg.verb, "params": params}


def _load_func(ctx: FieldCtx, path: str) -> FuncTable:
    data = _read_json(path)
    values = data["values"] if isinstance(data, dict) else data
    if isinstance(data, dict) and (data.get("p", ctx.p), data.get("n", ctx.n)) != (ctx.p, ctx.n):
        raise UsageError(f"{path}: table is over GF({data['p']}^{data['n']}) but the field is "
                         f"GF({ctx.p}^{ctx.n})")
    return FuncTable(ctx, tuple(values))


def execute(cfg: RunConfig):
    ctx = build_field(cfg.spec)
    a = cfg.args
    t0 = time.perf_counter()
    if cfg.verb in ("search", "verify-mcconnel"):
        payload = verify_mcconnel_extended(_select_set(ctx, a), cfg.workers)
    elif cfg.verb == "verify-directions":
        payload = verify_directions_theorem(ctx, cfg.workers, max_q=a.max_q)
    elif cfg.verb == "census":
        payload = corollary_census(ctx, cfg.workers)
    elif cfg.verb == "sample-doubling":
        cands = doubling_candidates(ctx, a.strategy, a.index, extras=_groups(a.extra),
                                    cosets=_groups(a.cosets), samples=a.samples,
                                    size=a.size, seed=cfg.seed)
        hyps = tuple(doubling_report(D) for D in cands)
        reports = tuple(verify_mcconnel_extended(D, cfg.workers)
                        for D, h in zip(cands, hyps) if h.hypothesis_holds)
        payload = SampleReport(a.strategy, a.index, tuple(cands), hyps, reports)
    elif cfg.verb == "directions":
        if a.func:
            payload = DirectionsPayload(directions_of_function(_load_func(ctx, a.func)), "function")
        else:
            pts = point_set(ctx, _read_json(a.points))
            payload = DirectionsPayload(directions_of_points(pts), "points")
    elif cfg.verb == "analyze":
        f = _load_func(ctx, a.func)
        dirs = directions_of_function(f)
        dbl = doubling_report(dirs.to_mulset()) if not dirs.bits & 1 else None
        payload = AnalyzePayload(f.values, dirs, detect_linearized(f),
                                 detect_frobenius_monomial(f), dbl)
    else:  # argparse restricts verbs
        raise UsageError(f"unknown command {cfg.verb}")
    timing = {"wall_time_s": round(time.perf_counter() - t0, 6), "workers": cfg.workers}
    return envelope(ctx, _command_echo(cfg), payload, timing)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout.buffer
    try:
        cfg = resolve_config(list(sys.argv[1:] if argv is None else argv))
        logging.basicConfig(level=logging.INFO if cfg.args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        env = execute(cfg)
        data = emit(env, cfg.format)
        if cfg.output:
            Path(cfg.output).write_bytes(data)
        else:
            stdout.write(data)
            stdout.flush()
    except UsageError as exc:
        print(f"dirlab: error: {exc}", file=sys.stderr)
        print("dirlab: fix: run `dirlab <command> --help` for the accepted flags", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (DirlabError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"dirlab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if env.exit_status != EXIT_OK:
        log.error("theorem check reported violations; see the report payload")
    return env.exit_status


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
