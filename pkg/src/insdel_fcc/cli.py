"""``insdel-fcc`` command line.

Exit codes: 0 ok, 1 a verification or decode defect was found, 2 invalid
input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, channel, constructions, fcidc, functions, irregular_search, matrices
from .errors import DefectError, InvalidInputError, SizeLimitError
from .words_metric import (
    all_words,
    as_word,
    ball_size,
    deletion_sphere,
    insdel_ball,
    insdel_distance,
    insertion_sphere,
    lcs_length,
)

EXIT_OK, EXIT_DEFECT, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


class Output:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, record: dict, human: str | None = None):
        if self.as_json:
            print(json.dumps(record, default=_jsonable), file=self.stream)
        else:
            print(human if human is not None else _table(record), file=self.stream)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _table(record: dict) -> str:
    width = max((len(k) for k in record), default=0)
    lines = []
    for key, value in record.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, default=_jsonable)
        lines.append(f"{key:<{width}}  {value}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument helpers


def _word(text: str) -> str:
    try:
        return as_word(text)
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _function(args) -> functions.TargetFunction:
    if getattr(args, "function_table", None):
        f = functions.load_table(args.function_table)
    else:
        name, k = args.function, args.k
        if k is None:
            raise InvalidInputError("--k is required for a named function")
        _check_k(args, k)
        if name == "vt":
            f = functions.vt_syndrome(k)
        elif name == "runs":
            f = functions.runs_function(k)
        elif name == "max_run":
            f = functions.max_run_function(k)
        elif name == "constant":
            f = functions.constant_function(k)
        elif name.startswith("weight_mod"):
            f = functions.weight_mod(k, int(name[len("weight_mod"):] or 2))
        else:
            raise InvalidInputError(f"unknown function {name!r}")
    _check_k(args, f.k)
    return f


def _check_k(args, k: int):
    if args.max_k is not None and k > args.max_k:
        raise SizeLimitError(f"k={k} exceeds --max-k {args.max_k}")


def _matrix(args) -> matrices.DistanceMatrix:
    if args.matrix:
        return matrices.DistanceMatrix.from_json(Path(args.matrix).read_text())
    if args.uniform:
        try:
            M, d = (int(v) for v in args.uniform.split(","))
        except ValueError:
            raise InvalidInputError("--uniform expects M,d") from None
        return matrices.uniform_matrix(M, d)
    raise InvalidInputError("give --matrix FILE or --uniform M,d")


def _add_function_args(p, required=True):
    p.add_argument("--function", default="vt",
                   help="vt, runs, max_run, constant or weight_modM")
    p.add_argument("--function-table", help="bits<TAB>label file (overrides --function)")
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int, required=required)


def _add_matrix_args(p):
    p.add_argument("--matrix", help="matrix JSON file")
    p.add_argument("--uniform", help="constant off-diagonal matrix 'M,d'")
    p.add_argument("--mode", choices=("type1", "type2"), default="type1")
    p.add_argument("--K", type=int, help="type-2 anchor")


# ---------------------------------------------------------------------------
# commands


def cmd_dist(args, out):
    out.emit({"x": args.x, "y": args.y, "distance": insdel_distance(args.x, args.y)})
    return EXIT_OK


def cmd_lcs(args, out):
    out.emit({"x": args.x, "y": args.y, "lcs": lcs_length(args.x, args.y)})
    return EXIT_OK


def cmd_sphere(args, out):
    fn = deletion_sphere if args.kind == "deletion" else insertion_sphere
    words = fn(args.x, args.t)
    out.emit({"x": args.x, "t": args.t, "kind": args.kind, "size": len(words), "words": words})
    return EXIT_OK


def cmd_ball(args, out):
    words = insdel_ball(args.x, args.d)
    out.emit({"x": args.x, "d": args.d, "size": ball_size(args.x, args.d), "words": words})
    return EXIT_OK


def cmd_matrix(args, out):
    f = _function(args)
    if args.over == "function":
        m = matrices.function_matrix(f, args.t, args.kind)
    else:
        xs = args.messages or (matrices.representative_vectors(args.family, f.k) if args.family
                               else list(all_words(f.k)))
        m = matrices.message_matrix(f, args.t, xs, args.kind)
    if args.format == "csv" and not out.as_json:
        print(m.to_csv(), end="")
    else:
        out.emit(json.loads(m.to_json()),
                 "\n".join(" ".join(f"{v:>3}" for v in row) for row in m.tolist()))
    return EXIT_OK


def cmd_search(args, out):
    m = _matrix(args)
    res = irregular_search.search_min_length(m, args.mode, args.K, args.permutations, args.cap)
    out.emit(res.to_dict())
    return EXIT_OK if res.feasible else EXIT_CAP


def cmd_gv(args, out):
    m = _matrix(args)
    perms = [None]
    if args.permutations:
        from itertools import permutations
        perms = list(permutations(range(m.order)))
    best = None
    for perm in perms:
        res = irregular_search.gv_greedy_construct(m, perm, args.mode, args.K)
        if res.feasible and (best is None or res.min_length < best.min_length):
            best = res
    record = {"greedy_length": best.min_length if best else "infeasible-at-cap",
              "words": best.words if best else [],
              "permutation": list(best.permutation) if best else None}
    try:
        record["gv_bound"] = irregular_search.gv_bound(m, None, args.mode, args.K)
    except SizeLimitError as exc:
        record["gv_bound"] = f"unavailable: {exc}"
    out.emit(record)
    return EXIT_OK


def cmd_bound(args, out):
    if args.which == "matrix":
        m = _matrix(args)
        N = Fraction(args.N) if args.N is not None else bounds.minimal_supersequence_length(m)
        reports = [bounds.hamming_plotkin_lower(m), bounds.simplified_plotkin_lower(m),
                   bounds.plotkin_like_lower(m, N)]
        for rep in reports:
            d = rep.to_dict()
            out.emit(d, f"{rep.name:<20} {rep.direction:<6} {float(rep.value):>10.6f}  "
                        f"{json.dumps(d['parameters'])}" + (f"  premise: {rep.premise}" if rep.premise else ""))
    elif args.which == "runs":
        if args.t is None:
            raise InvalidInputError("--t is required")
        t = args.t
        record = {"t": t, "bound": str(bounds.runs_redundancy_lower(t).value),
                  "bound_plus_square": str(bounds.runs_redundancy_lower(t, plus_square=True).value),
                  "closed_form": str(bounds.runs_closed_form(t)),
                  "closed_form_plus_square": str(bounds.runs_closed_form_plus_square(t)),
                  "double_sum": bounds.runs_double_sum(t)}
        out.emit(record)
    else:
        if args.x is None or args.t is None:
            raise InvalidInputError("sphere bounds need --x and --t")
        lo, hi, ins = bounds.sphere_size_bounds(args.x, args.t)
        out.emit({"x": args.x, "t": args.t, "deletion_lower": lo, "deletion_upper": hi,
                  "insertion_upper": ins, "deletion_exact": len(deletion_sphere(args.x, args.t))})
    return EXIT_OK


def cmd_oracle(args, out):
    f = _function(args)
    res = fcidc.optimal_redundancy_exact(f, args.t, args.r_cap)
    record = {"function": f.name, "k": f.k, "t": args.t, "r": res.r if res.r is not None else res.status,
              "explored": res.explored}
    if res.encoder:
        record["map"] = res.encoder.to_dict()["map"]
    out.emit(record)
    return EXIT_OK


def cmd_bracket(args, out):
    f = _function(args)
    reps = matrices.representative_vectors(args.family, f.k) if args.family else None
    b = fcidc.redundancy_bracket(f, args.t, reps)
    out.emit({"function": f.name, "k": f.k, "t": args.t, **b.to_dict()})
    return EXIT_OK


def _construct(args) -> fcidc.FcidcEncoder:
    name = args.name
    if name == "runs-smod":
        return constructions.runs_construction(args.k, args.t)
    if name == "runs-local":
        return constructions.runs_as_locally_bounded(args.k, args.t)
    if name in ("local-binary", "local-ternary"):
        f = _function(args)
        code = (constructions.repetition_code if name == "local-binary"
                else constructions.three_word_code)(args.t, f.k)
        return constructions.locally_bounded_encoder(f, args.t, code)
    raise InvalidInputError(f"unknown construction {name!r}")


def cmd_construct(args, out):
    if args.k is not None:
        _check_k(args, args.k)
    enc = _construct(args)
    record = enc.to_dict()
    if out.as_json:
        out.emit(record)
    else:
        print(f"construction  {args.name}  k={enc.k} t={enc.t} r={enc.r}", file=out.stream)
        print(_table(enc.report.to_dict()), file=out.stream)
    if args.output:
        Path(args.output).write_text(enc.to_json())
    return EXIT_OK if enc.verified else EXIT_DEFECT


def _load_encoder(args) -> fcidc.FcidcEncoder:
    f = _function(args)
    enc = fcidc.load_encoder(Path(args.encoder).read_text(), f)
    if args.t is not None:
        enc.t = args.t
    return enc


def cmd_verify(args, out):
    enc = _load_encoder(args)
    methods = fcidc.METHODS if args.method == "all" else (args.method,)
    ok = True
    for m in methods:
        rep = fcidc.VERIFIERS[m](enc)
        ok &= rep.passed
        out.emit(rep.to_dict())
    return EXIT_OK if ok else EXIT_DEFECT


def cmd_simulate(args, out):
    if args.encoder:
        enc = _load_encoder(args)
        enc.verify()
    else:
        if args.k is None or args.t is None:
            raise InvalidInputError("--k and --t are required with --construct")
        _check_k(args, args.k)
        args.name = args.construct
        enc = _construct(args)
    summary = channel.simulate(enc, args.trials, args.channel_t, args.adversary, args.seed)
    out.emit(summary.to_dict())
    clean = summary.statuses.get("mixed", 0) == 0
    return EXIT_OK if clean else EXIT_DEFECT


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="insdel-fcc",
                                     description="Function-correcting codes for insertion/deletion channels")
    parser.add_argument("--json", action="store_true", help="line-delimited JSON output")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomised commands")
    parser.add_argument("--max-k", type=int, default=None, help="refuse message lengths above this")
    parser.add_argument("--permutations", action="store_true", help="also search over row orderings")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("dist", cmd_dist), ("lcs", cmd_lcs)):
        p = sub.add_parser(name)
        p.add_argument("x", type=_word)
        p.add_argument("y", type=_word)
        p.set_defaults(func=fn)

    p = sub.add_parser("sphere")
    p.add_argument("x", type=_word)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--kind", choices=("deletion", "insertion"), default="deletion")
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("ball")
    p.add_argument("x", type=_word)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("matrix")
    _add_function_args(p)
    p.add_argument("--kind", choices=("type1", "type2"), default="type1")
    p.add_argument("--over", choices=("messages", "function"), default="messages")
    p.add_argument("--family", choices=("vt", "runs", "max_run"))
    p.add_argument("--messages", nargs="+", type=_word)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("search")
    _add_matrix_args(p)
    p.add_argument("--cap", type=int, default=irregular_search.DEFAULT_LENGTH_CAP)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gv")
    _add_matrix_args(p)
    p.set_defaults(func=cmd_gv)

    p = sub.add_parser("bound")
    p.add_argument("which", choices=("matrix", "runs", "sphere"))
    _add_matrix_args(p)
    p.add_argument("--N", help="supersequence length for the Plotkin-like bound (default 4S/M^2)")
    p.add_argument("--t", type=int)
    p.add_argument("--x", type=_word)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle")
    _add_function_args(p)
    p.add_argument("--r-cap", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bracket")
    _add_function_args(p)
    p.add_argument("--family", choices=("vt", "runs", "max_run"),
                   help="use a representative family for the lower bound")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("construct")
    p.add_argument("name", choices=("runs-smod", "runs-local", "local-binary", "local-ternary"))
    _add_function_args(p)
    p.add_argument("--output", help="write the encoder JSON here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify")
    _add_function_args(p, required=False)
    p.add_argument("--encoder", required=True, help="encoder JSON file")
    p.add_argument("--method", choices=fcidc.METHODS + ("all",), default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate")
    _add_function_args(p, required=False)
    p.add_argument("--encoder", help="encoder JSON file")
    p.add_argument("--construct", choices=("runs-smod", "runs-local", "local-binary", "local-ternary"),
                   default="runs-smod")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--channel-t", type=int, help="channel budget (default: encoder t)")
    p.add_argument("--adversary", choices=("random", "exhaustive"), default="random")
    p.set_defaults(func=cmd_simulate)
    for sp in sub.choices.values():
        # accept --json after the subcommand as well
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        return args.func(args, out)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeLimitError as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DefectError as exc:
        print(f"defect: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(json.dumps(exc.report.to_dict(), default=_jsonable), file=sys.stderr)
        return EXIT_DEFECT


if __name__ == "__main__":
    sys.exit(main())
