"""Command-line front end.

Every result is an exact integer printed as a decimal string.  Exit codes:
0 success, 1 a failed identity or oracle cross-check, 2 malformed or
inadmissible input, 3 precision exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .alcove import AlcoveContext
from .arith import DEFAULT_POLICY, NonIntegral, PrecisionExhausted, PrecisionPolicy
from .core import (
    IdentityViolation,
    coho_verlinde,
    level_rank_check,
    pu_spin_verlinde,
    pu_verlinde,
    refinement_modulus,
    spin_verlinde,
    split_check,
    verlinde,
)
from .oracle import handle_trace_dimension
from .surfaces import SpinStructure, enumerate_structures
from .surgery import LinkingMatrix, solve_characteristic, solve_json

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _int_range(text: str) -> list[int]:
    """``"3"`` or ``"2..5"`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range lo..hi, got {text!r}") from None


# ---------------------------------------------------------------------------
# cache


class ResultCache:
    """JSON file of finished records keyed by command and parameters.

    Entries written by another package version are ignored.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.entries: dict = {}
        if self.path.exists():
            try:
                data = json.loads(self.path.read_text())
            except json.JSONDecodeError:
                data = {}
            if data.get("version") == __version__:
                self.entries = data.get("entries", {})

    @staticmethod
    def key(command: str, parameters: dict) -> str:
        return json.dumps([command, parameters], sort_keys=True)

    def get(self, command, parameters):
        return self.entries.get(self.key(command, parameters))

    def put(self, command, parameters, record) -> None:
        self.entries[self.key(command, parameters)] = record
        self.path.write_text(json.dumps({"version": __version__, "entries": self.entries}, sort_keys=True))


# ---------------------------------------------------------------------------
# commands; each returns a record dict without timing


def _precision(*values) -> int:
    return max((getattr(v, "precision", 0) for v in values), default=0)


def _record(command, parameters, precision, **payload) -> dict:
    rec = {"command": command, "parameters": parameters}
    rec.update(payload)
    rec["precision_used"] = precision
    return rec


def _structures(args, modulus: int):
    """The single ``--sigma`` structure, or None for every structure."""
    if args.sigma is not None:
        sigma = SpinStructure.parse(args.sigma, modulus)
        if args.g is not None and sigma.genus != args.g:
            raise InputError(f"--g {args.g} disagrees with the {sigma.genus} pairs of --sigma")
        return sigma
    if args.all or args.split:
        return None
    raise InputError("pass --sigma, --all or --split")


def cmd_verlinde(args, policy) -> dict:
    ctx = AlcoveContext(args.N, args.K)
    value = (pu_verlinde if args.pu else verlinde)(ctx, args.g, policy)
    params = {"N": args.N, "K": args.K, "g": args.g, "pu": args.pu}
    if args.oracle:
        check = handle_trace_dimension(ctx, args.g)
        if args.pu:
            check //= ctx.N_red**args.g
        if check != value:
            raise IdentityViolation(f"oracle gives {check}, sine sum gives {value}")
    return _record("verlinde", params, _precision(value), value=str(value))


def _refined(args, policy, flavor: str, evaluate) -> dict:
    ctx = AlcoveContext(args.N, args.K)
    j = args.j
    modulus = refinement_modulus(ctx, flavor, j)
    sigma = _structures(args, modulus)
    params = {"N": args.N, "K": args.K, "j": j, "sigma": args.sigma, "all": args.all, "g": args.g, "split": args.split}
    g = sigma.genus if sigma is not None else (args.g or 1)
    if args.split:
        report = split_check(ctx, g, flavor, j, policy)
        table = report.table
        extra = {"total": str(report.total), "expected": str(report.expected)}
    elif sigma is None:
        table = [(s, evaluate(ctx, s, j, policy)) for s in enumerate_structures(g, modulus)]
        extra = {}
    else:
        value = evaluate(ctx, sigma, j, policy)
        return _record(flavor, params, _precision(value), value=str(value))
    return _record(
        flavor, params, _precision(*(v for _, v in table)), values=[[str(s), str(v)] for s, v in table], **extra
    )


def cmd_spin(args, policy) -> dict:
    return _refined(args, policy, "spin", lambda ctx, s, j, p: spin_verlinde(ctx, s, j, p))


def cmd_coho(args, policy) -> dict:
    return _refined(args, policy, "coho", lambda ctx, s, j, p: coho_verlinde(ctx, j, s, p))


def cmd_pu_spin(args, policy) -> dict:
    return _refined(args, policy, "pu_spin", lambda ctx, s, j, p: pu_spin_verlinde(ctx, s, policy=p))


def cmd_duality(args, policy) -> dict:
    report = level_rank_check(args.N, args.K, args.gmax, policy)
    rows = [[str(g), str(x), str(y)] for g, x, y in report.rows]
    return _record(
        "duality",
        {"N": args.N, "K": args.K, "gmax": args.gmax},
        _precision(*(x for _, x, _ in report.rows), *(y for *_, y in report.rows)),
        values=rows,
    )


def cmd_surgery(args, policy) -> dict:
    if args.json is not None:
        text = sys.stdin.read() if args.json == "-" else Path(args.json).read_text()
        try:
            request = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON request: {exc}") from None
        result = solve_json(request)
        params = {"matrix": request.get("matrix"), "d": request.get("d")}
    else:
        if args.matrix is None or args.d is None:
            raise InputError("pass --matrix and --d, or --json")
        B = LinkingMatrix.parse(args.matrix)
        result = solve_characteristic(B, args.d).to_json()
        params = {"matrix": [list(r) for r in B.rows], "d": args.d}
    return _record("surgery", params, 0, **result)


def _table_cell(task):
    N, K, g, pu, bits, max_bits, gap = task
    policy = PrecisionPolicy(bits, max_bits, gap)
    ctx = AlcoveContext(N, K)
    value = (pu_verlinde if pu else verlinde)(ctx, g, policy)
    return [N, K, g, str(value), value.precision]


def cmd_table(args, policy) -> dict:
    tasks = [
        (N, K, g, args.pu, policy.initial_bits, policy.max_bits, policy.integrality_gap)
        for N in args.N
        for K in args.K
        for g in args.g
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_table_cell, tasks))
    else:
        rows = [_table_cell(t) for t in tasks]
    params = {"N": args.N, "K": args.K, "g": args.g, "pu": args.pu}
    return _record("table", params, max((r[4] for r in rows), default=0), rows=rows)


# ---------------------------------------------------------------------------
# rendering


def render(rec: dict, fmt: str) -> str:
    if fmt in ("json", "jsonl") and rec["command"] != "table":
        return json.dumps(rec, sort_keys=True) + "\n"
    cmd = rec["command"]
    if cmd == "table":
        if fmt == "jsonl":
            keys = ("N", "K", "g", "value", "precision_used")
            return "".join(json.dumps(dict(zip(keys, r)), sort_keys=True) + "\n" for r in rec["rows"])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "K", "g", "value", "precision_used"])
        w.writerows(rec["rows"])
        return buf.getvalue()
    if cmd == "surgery":
        lines = [f"count {rec['count']}"]
        if rec["particular"] is None:
            lines.append("no solutions")
        else:
            lines.append("particular " + " ".join(map(str, rec["particular"])))
            lines.extend("kernel " + " ".join(map(str, k)) for k in rec["kernel_basis"])
        return "\n".join(lines) + "\n"
    if "value" in rec:
        return rec["value"] + "\n"
    lines = [" ".join(row) for row in rec["values"]]
    if "total" in rec:
        lines.append(f"total {rec['total']} expected {rec['expected']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prec", type=int, help="initial working precision in bits (default 128)")
    p.add_argument("--max-prec", type=int, help="largest precision tried before giving up (default 8192)")
    p.add_argument("--config", help="JSON file with keys prec, max_prec, gap, cache")
    p.add_argument("--cache", help="result cache file (default: $VERLINDE_CACHE, else no cache)")
    p.add_argument("--timing", action="store_true", help="add elapsed seconds to JSON output")
    return p


def _refine_args(p: argparse.ArgumentParser, j_default: int | None, with_j: bool = True) -> None:
    p.add_argument("N", type=int)
    p.add_argument("K", type=int)
    p.add_argument("--sigma", help='structure as "a1,b1;a2,b2" or [[a1,b1],[a2,b2]]')
    p.add_argument("--all", action="store_true", help="every structure of genus --g")
    p.add_argument("--g", type=int, help="genus for --all (default 1)")
    p.add_argument("--split", action="store_true", help="sum over all structures and compare with the total")
    if with_j:
        p.add_argument("--j", type=int, default=j_default, help="use the generator (K)^j")
    else:
        p.set_defaults(j=None)
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="spinverlinde", description="Verlinde numbers and their refinements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verlinde", parents=[common], help="d_{N,K}(g)")
    p.add_argument("N", type=int)
    p.add_argument("K", type=int)
    p.add_argument("g", type=int)
    p.add_argument("--pu", action="store_true", help="reduced PU(N,K) rank")
    p.add_argument("--oracle", action="store_true", help="cross-check with integer fusion data")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verlinde)

    p = sub.add_parser("spin", parents=[common], help="spin refined rank")
    _refine_args(p, None)
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("coho", parents=[common], help="cohomological refined rank")
    _refine_args(p, 1)
    p.set_defaults(func=cmd_coho)

    p = sub.add_parser("pu-spin", parents=[common], help="spin refined rank of PU(N,K)")
    _refine_args(p, None, with_j=False)
    p.set_defaults(func=cmd_pu_spin)

    p = sub.add_parser("duality", parents=[common], help="level-rank duality of PU ranks")
    p.add_argument("N", type=int)
    p.add_argument("K", type=int)
    p.add_argument("--gmax", type=int, default=3)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("surgery", parents=[common], help="solve the characteristic equation mod d")
    p.add_argument("--matrix", help="symmetric linking matrix as JSON, e.g. [[0,1],[1,0]]")
    p.add_argument("--d", type=int)
    p.add_argument("--json", help='request file {"matrix": ..., "d": ...}, or - for stdin')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("table", parents=[common], help="batch of Verlinde numbers")
    p.add_argument("--N", type=_int_range, required=True, help="e.g. 2..4")
    p.add_argument("--K", type=_int_range, required=True)
    p.add_argument("--g", type=_int_range, required=True)
    p.add_argument("--pu", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_table)
    return parser


def _policy(args, config: dict) -> PrecisionPolicy:
    bits = args.prec or config.get("prec", DEFAULT_POLICY.initial_bits)
    max_bits = args.max_prec or config.get("max_prec", max(DEFAULT_POLICY.max_bits, bits))
    gap = config.get("gap", DEFAULT_POLICY.integrality_gap)
    return PrecisionPolicy(int(bits), int(max_bits), float(gap))


def _load_config(path):
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    return data


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    err = sys.stderr
    try:
        config = _load_config(args.config)
        policy = _policy(args, config)
        cache_path = args.cache or config.get("cache") or os.environ.get("VERLINDE_CACHE")
        cache = ResultCache(cache_path) if cache_path else None
        params = {k: v for k, v in vars(args).items() if k not in ("func", "config", "cache", "timing", "format")}
        params["policy"] = [policy.initial_bits, policy.max_bits, policy.integrality_gap]
        start = time.perf_counter()
        rec = cache.get(args.command, params) if cache else None
        if rec is None:
            rec = args.func(args, policy)
            if cache:
                cache.put(args.command, params, rec)
        if args.timing:
            rec = dict(rec, elapsed=round(time.perf_counter() - start, 6))
            if args.format == "text":
                print(f"elapsed {rec['elapsed']}", file=err)
        sys.stdout.write(render(rec, args.format))
        return EXIT_OK
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PRECISION
    except (IdentityViolation, NonIntegral) as exc:
        print(f"check failed: {exc}", file=err)
        return EXIT_CHECK
    except (ValueError, OSError) as exc:  # InadmissibleError, InputError and parse errors
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
