"""Command-line interface: ``ngdc <subcommand> [flags]``.

Exit status: 0 success, 2 data error, 64 usage error, 65 bad input file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from decimal import ROUND_DOWN, Decimal

from . import __version__
from .bleu import Smoothing, corpus_bleu, pairs_from_lines
from .core import (
    DEFAULT_C,
    DEFAULT_D_MAX_KM,
    DEFAULT_D_SCALE,
    NgdcParams,
    RankingError,
    ngdc_delta,
    rank_candidates,
    score_entry,
)
from .geodesy import DistanceMethod, DistanceUnresolvable, GeoPoint, distance_km
from .registry import (
    RegistryError,
    builtin_paper_registry,
    export_registry,
    load_registry_file,
)
from .reproduce import FAIL, KNOWN, PASS, all_pass, compare_published

EX_OK = 0
EX_DATA = 2
EX_USAGE = 64
EX_INPUT = 65

log = logging.getLogger("ngdc")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


_FORMATTER = argparse.ArgumentDefaultsHelpFormatter


def _registry_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--registry",
        default="builtin",
        help="registry file (.tsv or .json) or 'builtin' for the published eight-language set",
    )
    return p


def _param_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--c", type=float, default=DEFAULT_C, help="weight coefficient in (0, 1)")
    p.add_argument("--d-max", type=float, default=DEFAULT_D_MAX_KM, help="penalty threshold (km)")
    p.add_argument(
        "--d-scale", type=float, default=DEFAULT_D_SCALE, help="distance divisor (km) inside z"
    )
    p.add_argument(
        "--no-penalty", action="store_true", help="disable the delta=1 penalty for D >= d_max"
    )
    return p


def _method_flag(default: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--method",
        choices=[m.value for m in DistanceMethod],
        default=default,
        help="distance source; 'published' uses the registry value, else Vincenty "
        "with haversine fallback",
    )
    return p


def _output_flags(formats=("table", "csv", "json")) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=formats, default=formats[0], help="output format")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for standard output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ngdc",
        description="Pick a transfer-learning source language by geographical distance coefficient.",
        formatter_class=_FORMATTER,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    reg, params, out = _registry_flags(), _param_flags(), _output_flags()

    p = sub.add_parser(
        "rank",
        parents=[reg, params, _method_flag("published"), out],
        help="rank candidate languages, best first",
        formatter_class=_FORMATTER,
    )
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser(
        "score",
        parents=[reg, params, _method_flag("published"), out],
        help="score one registry entry or an explicit distance/size pair",
        formatter_class=_FORMATTER,
    )
    p.add_argument("code", nargs="?", help="registry code to score")
    p.add_argument("--distance", type=float, help="distance in km (with --size, bypasses registry)")
    p.add_argument("--size", type=float, help="corpus size in millions of sentences")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser(
        "reproduce",
        parents=[params, out],
        help="compare computed coefficients with the published table",
        formatter_class=_FORMATTER,
    )
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser(
        "scatter",
        parents=[reg, params, _method_flag("published"), _output_flags(("csv",))],
        help="CSV of distance vs test BLEU (plus delta) for plotting",
        formatter_class=_FORMATTER,
    )
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser(
        "distance",
        parents=[_method_flag("vincenty"), _output_flags(("table", "json"))],
        help="distance in km between two points",
        formatter_class=_FORMATTER,
    )
    for name in ("lat1", "lon1", "lat2", "lon2"):
        p.add_argument(f"--{name}", type=float, required=True, help="degrees")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser(
        "bleu",
        parents=[_output_flags()],
        help="corpus BLEU of a hypothesis file against reference files",
        formatter_class=_FORMATTER,
    )
    p.add_argument("hyp", help="hypothesis file, one sentence per line")
    p.add_argument(
        "--ref", action="append", required=True, help="reference file (repeat for several)"
    )
    p.add_argument(
        "--smoothing",
        choices=[s.value for s in Smoothing],
        default="none",
        help="'add-one' adds 1 to matches and totals for n >= 2",
    )
    p.add_argument("--max-n", type=int, default=4, help="highest n-gram order")
    p.add_argument(
        "--pretokenized", action="store_true", help="split on whitespace only, keep case"
    )
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser(
        "export",
        parents=[reg],
        help="write the registry as TSV or JSON",
        formatter_class=_FORMATTER,
    )
    p.add_argument(
        "--as", dest="as_format", choices=("tsv", "json"), default="tsv", help="document format"
    )
    p.add_argument("-o", "--output", default="-", help="output path, '-' for standard output")
    p.set_defaults(func=cmd_export)
    return parser


# -- helpers ------------------------------------------------------------------


def _params(args) -> NgdcParams:
    try:
        return NgdcParams(
            c=args.c, d_max_km=args.d_max, apply_penalty=not args.no_penalty, d_scale=args.d_scale
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _registry(args):
    if args.registry == "builtin":
        return builtin_paper_registry()
    try:
        return load_registry_file(args.registry)
    except OSError as exc:
        raise InputError(f"{args.registry}: {exc.strerror or exc}") from None
    except RegistryError as exc:
        raise InputError(f"{args.registry}: {exc}") from None


def _emit(args, text: str) -> None:
    if args.output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def fmt_delta(x: float) -> str:
    """Four decimals, truncated like the published coefficient table."""
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_DOWN))


def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _csv(headers, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _score_dict(s, rank=None) -> dict:
    d = {} if rank is None else {"rank": rank}
    d.update(
        code=s.code, d_km=s.d_km, s_m=s.s_m, z=s.z, delta=s.delta, penalized=s.penalized
    )
    return d


def _params_dict(p: NgdcParams) -> dict:
    return {
        "c": p.c,
        "d_max_km": p.d_max_km,
        "d_scale": p.d_scale,
        "s_scale": p.s_scale,
        "apply_penalty": p.apply_penalty,
    }


SCORE_HEADERS = ("rank", "code", "D(km)", "S(M)", "z", "delta", "penalized")


def _render_scores(args, scores, params) -> str:
    if args.format == "json":
        return _json(
            {
                "params": _params_dict(params),
                "method": args.method,
                "ranking": [_score_dict(s, i) for i, s in enumerate(scores, 1)],
            }
        )
    if args.format == "csv":
        rows = [
            (i, s.code, repr(s.d_km), repr(s.s_m), repr(s.z), repr(s.delta), str(s.penalized).lower())
            for i, s in enumerate(scores, 1)
        ]
        return _csv(("rank", "code", "d_km", "s_m", "z", "delta", "penalized"), rows)
    rows = [
        (i, s.code, f"{s.d_km:.1f}", f"{s.s_m:g}", f"{s.z:.6f}", fmt_delta(s.delta), "yes" if s.penalized else "no")
        for i, s in enumerate(scores, 1)
    ]
    return _table(SCORE_HEADERS, rows)


# -- subcommands --------------------------------------------------------------


def cmd_rank(args) -> int:
    params = _params(args)
    registry = _registry(args)
    try:
        ranking = rank_candidates(registry, params, args.method)
    except RankingError as exc:
        log.error("%s", exc)
        return EX_DATA
    _emit(args, _render_scores(args, list(ranking), params))
    return EX_OK


def cmd_score(args) -> int:
    params = _params(args)
    by_value = args.distance is not None or args.size is not None
    if by_value == (args.code is not None):
        raise UsageError("give either a registry code or both --distance and --size")
    if by_value:
        if args.distance is None or args.size is None:
            raise UsageError("--distance and --size must be given together")
        try:
            score = ngdc_delta(args.distance, args.size, params, code="-")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        registry = _registry(args)
        if args.code not in registry:
            log.error("unknown language code %r", args.code)
            return EX_DATA
        try:
            score = score_entry(registry[args.code], registry, params, args.method)
        except RankingError as exc:
            log.error("%s", exc)
            return EX_DATA
    _emit(args, _render_scores(args, [score], params))
    return EX_OK


def cmd_reproduce(args) -> int:
    params = _params(args)
    rows = compare_published(params)
    if args.format == "json":
        text = _json(
            {
                "params": {k: v for k, v in _params_dict(params).items() if k != "apply_penalty"},
                "rows": [
                    {
                        "code": r.code,
                        "name": r.name,
                        "penalty": r.penalty,
                        "computed": r.computed,
                        "published": r.published,
                        "status": r.status,
                    }
                    for r in rows
                ],
            }
        )
    else:
        body = [
            (
                r.code,
                r.name,
                "penalty" if r.penalty else "no-penalty",
                fmt_delta(r.computed),
                fmt_delta(r.published),
                r.status,
            )
            for r in rows
        ]
        headers = ("code", "name", "mode", "computed", "published", "status")
        text = _csv(headers, body) if args.format == "csv" else _table(headers, body)
    _emit(args, text)
    counts = {s: sum(r.status == s for r in rows) for s in (PASS, KNOWN, FAIL)}
    print(
        f"{counts[PASS]}/{len(rows)} PASS, {counts[KNOWN]} {KNOWN}, {counts[FAIL]} FAIL",
        file=sys.stderr,
    )
    return EX_OK if all_pass(rows) else EX_DATA


def cmd_scatter(args) -> int:
    params = _params(args)
    registry = _registry(args)
    points = []
    try:
        for entry in registry.candidates:
            if entry.bleu_test is None:
                log.warning("skipping %s: no test BLEU recorded", entry.code)
                continue
            score = score_entry(entry, registry, params, args.method)
            points.append((score.d_km, entry.code, entry.bleu_test, score.delta))
    except RankingError as exc:
        log.error("%s", exc)
        return EX_DATA
    points.sort()
    rows = [(code, repr(d), repr(b), repr(delta)) for d, code, b, delta in points]
    _emit(args, _csv(("code", "gd_km", "bleu_test", "delta"), rows))
    return EX_OK


def cmd_distance(args) -> int:
    try:
        p1 = GeoPoint(args.lat1, args.lon1)
        p2 = GeoPoint(args.lat2, args.lon2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    requested = DistanceMethod(args.method)
    d, used = distance_km(p1, p2, requested)
    wanted = "vincenty" if requested is DistanceMethod.PUBLISHED_FIRST else requested.value
    fallback = used != wanted
    if args.format == "json":
        text = _json({"distance_km": d, "method": used, "requested": wanted, "fallback": fallback})
    else:
        label = f"{used} (fallback from {wanted})" if fallback else used
        text = f"{d:.3f} km\t{label}\n"
    _emit(args, text)
    return EX_OK


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason})") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def cmd_bleu(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    hyp = _read_lines(args.hyp)
    refs = [_read_lines(p) for p in args.ref]
    for path, lines in zip(args.ref, refs):
        if len(lines) != len(hyp):
            raise InputError(
                f"line count mismatch: {args.hyp} has {len(hyp)} lines, {path} has {len(lines)}"
            )
    if not hyp:
        raise InputError(f"{args.hyp}: no sentences")
    pairs = pairs_from_lines(hyp, refs, pretokenized=args.pretokenized)
    report = corpus_bleu(pairs, max_n=args.max_n, smoothing=args.smoothing)
    if args.format == "json":
        text = _json(report.as_dict())
    elif args.format == "csv":
        headers = ["score", *(f"p{i}" for i in range(1, args.max_n + 1)), "bp", "hyp_len", "ref_len"]
        row = [repr(report.score), *map(repr, report.precisions), repr(report.brevity_penalty),
               report.hyp_length, report.ref_length]
        text = _csv(headers, [row])
    else:
        prec = "/".join(f"{100 * p:.1f}" for p in report.precisions)
        text = (
            f"BLEU = {report.score:.2f} {prec} "
            f"(BP = {report.brevity_penalty:.3f} hyp_len = {report.hyp_length} "
            f"ref_len = {report.ref_length})\n"
        )
    _emit(args, text)
    return EX_OK


def cmd_export(args) -> int:
    registry = _registry(args)
    _emit(args, export_registry(registry, args.as_format))
    return EX_OK


def main(argv=None) -> int:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.WARNING)
    try:
        return _dispatch(argv)
    finally:
        log.removeHandler(handler)


def _dispatch(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ngdc {args.command}: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_INPUT
    except DistanceUnresolvable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
