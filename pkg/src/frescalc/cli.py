"""Command-line front end: ``frescalc <command> [options] <payload>``.

Inline payloads use the expression grammar; JSON payloads are file paths,
or ``-`` for standard input.  Exit codes: 0 success, 2 parse error,
3 domain error, 4 precision or iteration cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import FrescalcError, ParseError
from .fresco import (
    AbModulePresentation,
    FrescoPresentation,
    HomogeneousElement,
    a_matrix_from_presentation,
    bernstein_element,
    bpoly_to_element,
    cofactor_poly,
    divide_right,
    element_to_bpoly,
    exact_sequence_bpoly,
    expand_presentation,
    is_geometric,
    roots_from_factors,
)
from .gaussmanin import MonomialInput, analyze, report
from .ncalg import NcElement, NcSeriesElement, as_rational, initial_form
from .parser import evaluate, evaluate_series, parse_expression, parse_polynomial, uses_series
from .poles import LedgerFamily, check_fond3, run_script
from .poly import QPoly
from .saturation import saturate_bernstein

MAX_PRECISION = 4096
MAX_ITER = 100_000
COMMANDS = ("normalize", "bpoly", "belem", "divide", "exact-seq", "from-pi", "saturate", "gm", "poles")


@dataclass(frozen=True)
class Options:
    precision: int = 32
    max_iter: int = 64
    format: str = "text"
    laurent_window: int = 16

    def __post_init__(self):
        if not 1 <= self.precision <= MAX_PRECISION:
            raise ValueError(f"precision must lie in [1, {MAX_PRECISION}]")
        if not 0 <= self.max_iter <= MAX_ITER:
            raise ValueError(f"max-iter must lie in [0, {MAX_ITER}]")
        if self.format not in ("text", "json"):
            raise ValueError("format is text or json")
        if self.laurent_window < 0:
            raise ValueError("laurent-window must be nonnegative")


@dataclass(frozen=True)
class CommandRequest:
    command: str
    payload: tuple[str, ...]
    options: Options = field(default_factory=Options)
    factors: tuple[str, ...] | None = None
    roots: tuple[str, ...] | None = None
    rank_h: int | None = None
    script: str | None = None


@dataclass(frozen=True)
class Outcome:
    text: str
    exit_code: int = 0
    error: bool = False


def _read(source: str, stdin=None) -> str:
    if source == "-":
        return (stdin or sys.stdin).read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _load_json(source: str) -> dict:
    try:
        return json.loads(_read(source))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None


def _is_json_source(source: str) -> bool:
    return source == "-" or os.path.isfile(source)


def _rationals(items: Sequence[str]) -> list[Fraction]:
    out = []
    for piece in items:
        try:
            out.append(as_rational(piece.strip()))
        except (ValueError, TypeError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {piece!r}") from None
    return out


def _split(values: Sequence[str]) -> list[str]:
    return [p for v in values for p in v.split(",") if p.strip()]


def _inline(payload: Sequence[str]) -> str:
    text = " ".join(payload)
    return _read("-").strip() if text == "-" else text


def _element(text: str, opts: Options):
    tree = parse_expression(text)
    if uses_series(tree):
        return evaluate_series(tree, opts.precision)
    return evaluate(tree, window=opts.laurent_window)


def _homogeneous(text: str, opts: Options) -> HomogeneousElement:
    return HomogeneousElement.from_element(evaluate(parse_expression(text), window=opts.laurent_window))


def _poly_payload(text: str) -> QPoly:
    return parse_polynomial(text)


def _bpoly_json(bp: QPoly) -> dict:
    roots = is_geometric(bp)
    return {"bpoly": bp.expanded(), "factored": bp.render(), "roots": [str(r) for r in roots.rational_roots]}


def cmd_normalize(req: CommandRequest) -> tuple[dict, str]:
    x = _element(_inline(req.payload), req.options)
    return {"result": str(x)}, str(x)


def cmd_bpoly(req: CommandRequest) -> tuple[dict, str]:
    if req.factors is not None:
        lambdas = _rationals(_split(req.factors))
        bp = element_to_bpoly(bernstein_element(lambdas))
        data = _bpoly_json(bp)
        data["roots"] = [str(r) for r in sorted(roots_from_factors(lambdas))]
    else:
        bp = element_to_bpoly(_homogeneous(_inline(req.payload), req.options))
        data = _bpoly_json(bp)
    return data, bp.render()


def cmd_belem(req: CommandRequest) -> tuple[dict, str]:
    if req.roots is not None:
        bp = QPoly.from_roots(_rationals(_split(req.roots)))
    else:
        bp = _poly_payload(_inline(req.payload))
    p = bpoly_to_element(bp)
    return {"element": str(p), "degree": p.degree}, str(p)


def cmd_divide(req: CommandRequest) -> tuple[dict, str]:
    if len(req.payload) != 2:
        raise ParseError("divide takes two expressions: Q P")
    q = _homogeneous(req.payload[0], req.options)
    p = _homogeneous(req.payload[1], req.options)
    w = divide_right(q, p)
    c = cofactor_poly(w, q.degree, p.degree)
    data = {"quotient": str(w), "cofactor": c.expanded(), "cofactor_factored": c.render()}
    return data, f"W = {w}\nC(x) = {c.render()}"


def cmd_exact_seq(req: CommandRequest) -> tuple[dict, str]:
    if len(req.payload) != 2:
        raise ParseError("exact-seq takes two polynomials: B_F B_H")
    b_f, b_h = (_poly_payload(t) for t in req.payload)
    bg = exact_sequence_bpoly(b_f, b_h, req.rank_h)
    return _bpoly_json(bg), bg.render()


def _presentation(source: str, opts: Options):
    """A presentation from JSON, or the series element of an inline expression."""
    text = _read(source) if _is_json_source(source) else source
    if text.lstrip().startswith("{"):
        try:
            return FrescoPresentation.from_json(json.loads(text)), None
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    return None, _element(text, opts)


def cmd_from_pi(req: CommandRequest) -> tuple[dict, str]:
    opts = req.options
    pres, elem = _presentation(" ".join(req.payload), opts)
    if pres is not None:
        elem = expand_presentation(pres, opts.precision)
    elif isinstance(elem, NcElement):
        elem = NcSeriesElement.from_element(elem, opts.precision)
    p = initial_form(elem)
    bp = element_to_bpoly(p)
    verdict = is_geometric(bp)
    data = {"initial_form": str(p), "bpoly": bp.expanded(), "factored": bp.render(), "verdict": verdict.to_json()}
    text = f"P = {p}\nB(x) = {bp.render()}\n{verdict.status}"
    return data, text


def cmd_saturate(req: CommandRequest) -> tuple[dict, str]:
    opts = req.options
    data = _load_json(" ".join(req.payload))
    if "a_matrix" in data:
        module = AbModulePresentation.from_json(data)
    else:
        module = a_matrix_from_presentation(FrescoPresentation.from_json(data), opts.precision)
    res = saturate_bernstein(module, max_iter=opts.max_iter, laurent_window=opts.laurent_window, precision=opts.precision)
    text = f"char_poly: {res.char_poly}\nmin_poly: {res.min_poly}\niterations: {res.iterations}"
    return res.to_json(), text


def cmd_gm(req: CommandRequest) -> tuple[dict, str]:
    inp = MonomialInput.from_json(_load_json(" ".join(req.payload)))
    res = analyze(inp)
    return res.to_json(), report(inp, res)


def cmd_poles(req: CommandRequest) -> tuple[dict, str]:
    data = _load_json(" ".join(req.payload))
    family = LedgerFamily.from_json(data)
    script = data.get("script", [])
    if req.script is not None:
        script = _load_json(req.script)
    family = run_script(family, script)
    out = {"ledger": family.to_json()}
    lines = [json.dumps(family.to_json(), sort_keys=True)]
    check = data.get("check")
    if check is not None:
        pres = FrescoPresentation.from_json(check)
        res = check_fond3(family, pres, int(check.get("d", 1)))
        out["check"] = {
            "holds": res.holds,
            "witnesses": list(res.witnesses),
            "maximal": {"loc": str(res.maximal.location), "ord": res.maximal.order, "h": res.maximal.h},
        }
        lines.append(f"holds: {res.holds}; witnesses: {list(res.witnesses)}")
    return out, "\n".join(lines)


HANDLERS: dict[str, Callable[[CommandRequest], tuple[dict, str]]] = {
    "normalize": cmd_normalize,
    "bpoly": cmd_bpoly,
    "belem": cmd_belem,
    "divide": cmd_divide,
    "exact-seq": cmd_exact_seq,
    "from-pi": cmd_from_pi,
    "saturate": cmd_saturate,
    "gm": cmd_gm,
    "poles": cmd_poles,
}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def execute(req: CommandRequest) -> Outcome:
    """Run one request; never raises for library errors."""
    handler = HANDLERS.get(req.command)
    if handler is None:
        err = ParseError(f"unknown command {req.command!r}", -1, COMMANDS)
        return Outcome(_dump(err.to_dict()), err.exit_code, True)
    try:
        data, text = handler(req)
    except FrescalcError as exc:
        return Outcome(_dump(exc.to_dict()), exc.exit_code, True)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        # malformed payload contents that the library rejects before computing
        obj = {"error": type(exc).__name__, "message": str(exc), "exit_code": 3}
        return Outcome(_dump(obj), 3, True)
    except OSError as exc:
        obj = {"error": "InputError", "message": str(exc), "exit_code": 2}
        return Outcome(_dump(obj), 2, True)
    return Outcome(_dump(data) if req.options.format == "json" else text)


def run_batch(command: str, sources: Sequence[str], options: Options, workers: int | None = None) -> list[Outcome]:
    """Run one command over several JSON files concurrently; results in input order."""
    reqs = [CommandRequest(command, (src,), options) for src in sources]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(execute, reqs))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=32, help="b-adic precision (default 32)")
    common.add_argument("--max-iter", type=int, default=64, help="saturation step cap (default 64)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--laurent-window", type=int, default=16, help="bound on negative b-exponents (default 16)")

    ap = argparse.ArgumentParser(prog="frescalc", description="Exact (a,b)-module and Bernstein polynomial calculator.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("normalize", parents=[common], help="normal order of an expression").add_argument("expr", nargs="+")
    p = sub.add_parser("bpoly", parents=[common], help="Bernstein polynomial of a homogeneous element")
    p.add_argument("expr", nargs="*")
    p.add_argument("--factors", nargs="+", help="lambdas of (a - l_1 b)...(a - l_k b)")
    p = sub.add_parser("belem", parents=[common], help="homogeneous element of a Bernstein polynomial")
    p.add_argument("poly", nargs="*")
    p.add_argument("--roots", nargs="+", help="roots of B instead of a polynomial expression")
    sub.add_parser("divide", parents=[common], help="right division Q = W P").add_argument("operands", nargs=2)
    p = sub.add_parser("exact-seq", parents=[common], help="B_G from B_F and B_H")
    p.add_argument("polys", nargs=2)
    p.add_argument("--rank-h", type=int)
    sub.add_parser("from-pi", parents=[common], help="initial form and divisor of Pi").add_argument("source", nargs="+")
    sub.add_parser("saturate", parents=[common], help="saturation by b^-1 a").add_argument("source")
    sub.add_parser("gm", parents=[common], help="Gauss-Manin recurrence pipeline").add_argument("source")
    p = sub.add_parser("poles", parents=[common], help="run a pole ledger script")
    p.add_argument("source")
    p.add_argument("--script", help="JSON operation list overriding the ledger's script key")
    p = sub.add_parser("batch", parents=[common], help="one command over many JSON files")
    p.add_argument("batch_command", choices=("from-pi", "saturate", "gm", "poles"))
    p.add_argument("sources", nargs="+")
    p.add_argument("--workers", type=int)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        opts = Options(args.precision, args.max_iter, args.format, args.laurent_window)
    except ValueError as exc:
        print(_dump({"error": "OptionError", "message": str(exc), "exit_code": 2}), file=sys.stderr)
        return 2
    if args.command == "batch":
        outcomes = run_batch(args.batch_command, args.sources, opts, args.workers)
        for src, out in zip(args.sources, outcomes):
            stream = sys.stderr if out.error else sys.stdout
            print(f"== {src}", file=stream)
            print(out.text, file=stream)
        return max(o.exit_code for o in outcomes)
    payload = {
        "normalize": lambda: args.expr,
        "bpoly": lambda: args.expr,
        "belem": lambda: args.poly,
        "divide": lambda: args.operands,
        "exact-seq": lambda: args.polys,
        "from-pi": lambda: args.source,
        "saturate": lambda: [args.source],
        "gm": lambda: [args.source],
        "poles": lambda: [args.source],
    }[args.command]()
    req = CommandRequest(
        args.command,
        tuple(payload),
        opts,
        factors=tuple(args.factors) if getattr(args, "factors", None) else None,
        roots=tuple(args.roots) if getattr(args, "roots", None) else None,
        rank_h=getattr(args, "rank_h", None),
        script=getattr(args, "script", None),
    )
    return _finish(execute(req))


def _finish(out: Outcome) -> int:
    print(out.text, file=sys.stderr if out.error else sys.stdout)
    return out.exit_code


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
