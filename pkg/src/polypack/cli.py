"""polypack command line interface.

Exit codes: 0 success, 1 input or parse errors, 2 precondition violations,
3 internal guarantee-assertion failures (always a bug).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    BadParams,
    EmptyInstance,
    GuaranteeViolation,
    HeightBelowThreshold,
    InvalidPolygon,
    ItemTooWide,
    NotAParallelogram,
    ParseError,
    PolypackError,
    PreconditionViolated,
    SpineMismatch,
    SpineNotInSet,
    WidthExceedsOneOverM,
)
from .geometry import Vec, spine_of
from .numbers import format_rational, parse_rational, rat, rfloor
from .area_min import pack_area_min, pack_area_min_xpar
from .boxpack import pack_min_square, pack_perimeter_min
from .strip import pack_strip
from .binpack import (
    matching_spine,
    pack_bins_shared_spine,
    pack_bins_spine_set,
    pack_bins_thin,
    pack_bins_wideshort,
)
from .instances import (
    gen_instance,
    parse_instance,
    parse_packing,
    packing_file_to_result,
    result_to_packing_file,
    serialize_instance,
    serialize_packing,
)
from .render import render_svg
from .verify import guarantee_report, lower_bound, validate_packing

_PRECONDITION_ERRORS = (
    PreconditionViolated,
    WidthExceedsOneOverM,
    NotAParallelogram,
    ItemTooWide,
    SpineMismatch,
    SpineNotInSet,
    HeightBelowThreshold,
    EmptyInstance,
)

_INPUT_ERRORS = (ParseError, InvalidPolygon, BadParams, OSError, ValueError)


def _parse_spine(text) -> Vec:
    parts = text.split(",")
    if len(parts) != 2:
        raise BadParams(f"spine must be 'dx,dy', got {text!r}")
    return Vec(parse_rational(parts[0]), parse_rational(parts[1]))


def _build_parser():
    top = argparse.ArgumentParser(prog="polypack")
    sub = top.add_subparsers(dest="command", required=True)

    pack = sub.add_parser("pack", help="pack an instance")
    pack.add_argument("--objective", required=True,
                      choices=["area", "perimeter", "square", "strip", "bins"])
    pack.add_argument("--input", required=True)
    pack.add_argument("--output", required=True)
    pack.add_argument("--svg")
    pack.add_argument("--c", type=parse_rational)
    pack.add_argument("--epsilon", type=parse_rational)
    pack.add_argument("--engine", choices=["ffdh", "nfdh"], default="ffdh")
    pack.add_argument("--M", type=int)
    pack.add_argument("--delta", type=parse_rational)
    pack.add_argument("--bins-strategy",
                      choices=["thin", "wideshort", "spine", "auto"],
                      default="auto")
    pack.add_argument("--spine", type=_parse_spine)

    val = sub.add_parser("validate", help="validate a packing file")
    val.add_argument("--input", required=True)
    val.add_argument("--packing", required=True)

    bounds = sub.add_parser("bounds", help="print the lower bound")
    bounds.add_argument("--objective", required=True,
                        choices=["area", "perimeter", "square", "strip", "bins"])
    bounds.add_argument("--input", required=True)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("--kind", required=True,
                     choices=["random-convex", "known-bins", "shared-spine",
                              "thin-1overM"])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--k", type=int)
    gen.add_argument("--M", type=int)
    gen.add_argument("--spine", type=_parse_spine)
    gen.add_argument("--output", required=True)

    render = sub.add_parser("render", help="render SVG drawings")
    render.add_argument("--input", required=True)
    render.add_argument("--packing", required=True)
    render.add_argument("--out", required=True)
    render.add_argument("--overlay", default="",
                        help="comma list: parallelograms,shelves")
    return top


def _auto_bins_strategy(polys, args):
    if args.bins_strategy != "auto":
        return args.bins_strategy
    heights_ok = all(p.height >= rat(3, 4) for p in polys)
    if heights_ok:
        template = spine_of(polys[0]).vector
        if all(matching_spine(p, template) is not None for p in polys):
            return "spine"
    wmax = max(p.width for p in polys)
    if wmax <= rat(1, 2):
        return "thin"
    return "wideshort"


def _pack_bins(polys, args, meta):
    strategy = _auto_bins_strategy(polys, args)
    if strategy == "thin":
        M = args.M
        if M is None:
            wmax = max(p.width for p in polys)
            M = rfloor(1 / wmax)
            if M < 2:
                raise PreconditionViolated(
                    f"instance has w_max {wmax} > 1/2; thin packing needs --M >= 2")
        return pack_bins_thin(polys, M), {"strategy": "thin", "M": M}
    if strategy == "wideshort":
        delta = args.delta
        if delta is None:
            slack = min(1 - min(p.width, p.height) for p in polys)
            if slack <= 0:
                raise PreconditionViolated(
                    "some polygon fills the bin in both directions")
            delta = min(slack, rat(1, 4))
        return pack_bins_wideshort(polys, delta), \
            {"strategy": "wideshort", "delta": format_rational(delta)}
    # spine
    template = args.spine
    if template is None and "spine" in meta:
        template = Vec(parse_rational(meta["spine"][0]),
                       parse_rational(meta["spine"][1]))
    if template is None:
        template = spine_of(polys[0]).vector
    return pack_bins_shared_spine(polys, template), \
        {"strategy": "spine",
         "spine": [format_rational(template.x), format_rational(template.y)]}


def _cmd_pack(args) -> int:
    inst = parse_instance(Path(args.input).read_bytes())
    polys = inst.polygons
    objective = args.objective
    params = {"objective": objective}

    if objective == "area":
        c = args.c if args.c is not None else rat(3)
        engine = args.engine.upper()
        result = pack_area_min(polys, c, engine)
        params.update({"c": format_rational(c), "engine": engine})
    elif objective == "perimeter":
        eps = args.epsilon if args.epsilon is not None else rat(1, 10)
        result = pack_perimeter_min(polys, eps)
        params.update({"epsilon": format_rational(eps)})
    elif objective == "square":
        eps = args.epsilon if args.epsilon is not None else rat(1, 10)
        result = pack_min_square(polys, eps)
        params.update({"epsilon": format_rational(eps)})
    elif objective == "strip":
        c = args.c if args.c is not None else rat(3)
        result = pack_strip(polys, c)
        params.update({"c": format_rational(c)})
    else:
        result, extra = _pack_bins(polys, args, inst.metadata)
        params.update(extra)

    known_k = inst.metadata.get("known_feasible_bins")
    try:
        report = guarantee_report(polys, result, known_feasible_bins=known_k)
    except ValueError:
        report = None  # spine reports need a certificate; still write the packing

    check = validate_packing(polys, result)
    if not check.ok:
        raise GuaranteeViolation(
            f"packer output failed validation: {check.violations[0]}")

    pf = result_to_packing_file(result, objective, params, report)
    Path(args.output).write_text(serialize_packing(pf), encoding="utf-8")
    if args.svg:
        outdir = Path(args.svg)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, text in render_svg(inst, result):
            (outdir / name).write_text(text, encoding="utf-8")
    if report is not None:
        print(report)
    else:
        print(f"{objective}: packed {len(polys)} polygons")
    return 0


def _cmd_validate(args) -> int:
    inst = parse_instance(Path(args.input).read_bytes())
    pf = parse_packing(Path(args.packing).read_bytes())
    result = packing_file_to_result(pf)
    check = validate_packing(inst.polygons, result)
    if check.ok:
        print("valid: no overlaps, all placements inside containers")
        return 0
    for v in check.violations:
        print(f"violation: {v}")
    return 1


def _cmd_bounds(args) -> int:
    inst = parse_instance(Path(args.input).read_bytes())
    lb = lower_bound(inst.polygons, args.objective)
    print(f"{args.objective} lower bound: {format_rational(lb)}")
    return 0


def _cmd_gen(args) -> int:
    inst = gen_instance(args.kind, args.n, args.seed, k=args.k, M=args.M,
                        spine=args.spine)
    Path(args.output).write_text(serialize_instance(inst), encoding="utf-8")
    print(f"wrote {len(inst.polygons)} polygons to {args.output}")
    return 0


def _cmd_render(args) -> int:
    inst = parse_instance(Path(args.input).read_bytes())
    pf = parse_packing(Path(args.packing).read_bytes())
    result = packing_file_to_result(pf)
    overlay = tuple(s for s in args.overlay.split(",") if s)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in render_svg(inst, result, overlay=overlay):
        (outdir / name).write_text(text, encoding="utf-8")
    print(f"rendered {len(pf.containers)} container(s) to {args.out}")
    return 0


_COMMANDS = {
    "pack": _cmd_pack,
    "validate": _cmd_validate,
    "bounds": _cmd_bounds,
    "gen": _cmd_gen,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GuaranteeViolation as exc:
        print(f"internal guarantee failure: {exc}", file=sys.stderr)
        return 3
    except _PRECONDITION_ERRORS as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
