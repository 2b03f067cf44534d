"""``cakecut`` command line: run scripts, run constructions, re-audit traces."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .constructions import Construction, bisect_cake, divide, find_center
from .errors import CakeError
from .render import render_svg
from .scene import Scene, build_kissing_chain, build_single_cake
from .script import format_program, interpret, parse
from .trace import Trace
from .verify import VerificationReport, audit_trace, equal_sectors, is_diameter, piece_area_oracle

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EMIT_KINDS = ("svg", "trace", "report", "scene")
AREA_TOLERANCE = 0.005


class UsageError(Exception):
    pass


def _radii(text: str) -> list[Fraction]:
    out = []
    for part in text.split(","):
        try:
            r = Fraction(part.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--radii: invalid radius {part.strip()!r}") from None
        out.append(r)
    return out


def _radius(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--radius: invalid radius {text!r}") from None


def _emit(text: Optional[str]) -> tuple[str, ...]:
    if text is None:
        return EMIT_KINDS
    kinds = tuple(k.strip() for k in text.split(",") if k.strip())
    bad = [k for k in kinds if k not in EMIT_KINDS]
    if bad:
        raise UsageError(f"--emit: unknown artifact {bad[0]!r} (choose from {', '.join(EMIT_KINDS)})")
    return kinds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--out", default=None,
                        help="output directory (default: $CAKECUT_OUT or the current directory)")
    common.add_argument("--emit", default=None,
                        help="comma-separated artifacts to write: svg,trace,report,scene (default all)")

    parser = argparse.ArgumentParser(prog="cakecut", description="Knife-only cake constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="parse, interpret and emit a .cake script")
    p.add_argument("script")

    p = sub.add_parser("bisect", parents=[common], help="halve a cake of an odd kissing chain")
    p.add_argument("--radii", required=True, help="comma-separated radii, e.g. 1,1,1")
    p.add_argument("--target", type=int, default=1)

    p = sub.add_parser("center", parents=[common], help="recover the center of a chain cake")
    p.add_argument("--radii", required=True)
    p.add_argument("--target", type=int, default=1)

    p = sub.add_parser("divide", parents=[common], help="cut a cake into 2, 3, 4 or 6 equal pieces")
    p.add_argument("--pieces", type=int, required=True)
    p.add_argument("--radius", default=None, help="radius of a lone cake")
    p.add_argument("--marked", action="store_true", help="the lone cake has a marked center")
    p.add_argument("--radii", default=None, help="work on cake --target of this chain instead")
    p.add_argument("--target", type=int, default=1)
    p.add_argument("--samples", type=int, default=1_000_000, help="Monte-Carlo samples for the area check")

    p = sub.add_parser("check", help="re-audit a saved trace against its scene")
    p.add_argument("trace")
    p.add_argument("scene")

    p = sub.add_parser("fmt", help="print a .cake script in canonical form")
    p.add_argument("script")
    p.add_argument("--write", action="store_true", help="rewrite the file in place")
    return parser


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get("CAKECUT_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(out: Path, name: str, text: str) -> None:
    with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {out / name}")


def _emit_all(args, stem: str, scene: Scene, trace: Trace, report: VerificationReport,
              svgs: dict[str, str]) -> None:
    kinds = _emit(args.emit)
    out = _out_dir(args)
    if "scene" in kinds:
        _write(out, f"{stem}.scene.json", scene.dumps())
    if "trace" in kinds:
        _write(out, f"{stem}.trace.json", trace.dumps())
    if "report" in kinds:
        _write(out, f"{stem}.report.json", report.dumps())
    if "svg" in kinds:
        for name, text in svgs.items():
            _write(out, name, text)


def _summarize(report: VerificationReport) -> int:
    surface = [c for c in report.checks if c.name.startswith("etiquette: ")]
    for c in report.checks:
        if c not in surface or not c.passed:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")
    if surface:
        ok = sum(c.passed for c in surface)
        print(f"{'PASS' if ok == len(surface) else 'FAIL'}  etiquette: {ok}/{len(surface)} carvings on cake surfaces")
    return EXIT_OK if report.passed else EXIT_FAIL


def _finish(args, stem: str, built: Construction, report: VerificationReport) -> int:
    trace = built.trace.seal()
    report.extend(audit_trace(built.scene, trace))
    svg = render_svg(trace.scene, trace, built.cuts)
    _emit_all(args, stem, trace.scene, trace, report, {f"{stem}.svg": svg})
    return _summarize(report)


def cmd_run(args) -> int:
    _emit(args.emit)
    path = Path(args.script)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    parsed = parse(data)
    for d in parsed.diagnostics:
        print(f"{path}:{d}", file=sys.stderr)
    if not parsed.ok:
        return EXIT_USAGE
    result = interpret(parsed.program, args.seed)
    for d in result.diagnostics:
        print(f"{path}:{d}", file=sys.stderr)
    if result.scene is not None:
        _emit_all(args, path.stem, result.scene, result.trace, result.report, result.renders)
    code = _summarize(result.report)
    return EXIT_FAIL if not result.ok else code


def cmd_bisect(args) -> int:
    _emit(args.emit)
    scene = build_kissing_chain(_radii(args.radii), seed=args.seed)
    built = bisect_cake(scene, target=args.target)
    cut = built.cuts[0]
    report = VerificationReport()
    report.add(f"cut is a diameter of cake {args.target}",
               is_diameter(scene.cake(args.target), cut.p, cut.q),
               [list(cut.p.approx()), list(cut.q.approx())])
    return _finish(args, "bisect", built, report)


def cmd_center(args) -> int:
    _emit(args.emit)
    scene = build_kissing_chain(_radii(args.radii), seed=args.seed)
    built = find_center(scene, target=args.target, seed=args.seed)
    z = built.points["center"]
    report = VerificationReport()
    report.add(f"constructed point is the center of cake {args.target}",
               z == scene.cake(args.target).center, list(z.approx()))
    built.scene = scene
    return _finish(args, "center", built, report)


def cmd_divide(args) -> int:
    _emit(args.emit)
    if args.pieces not in (2, 3, 4, 6):
        raise UsageError(f"--pieces: unsupported piece count {args.pieces}; supported: 2, 3, 4, 6")
    if (args.radius is None) == (args.radii is None):
        raise UsageError("divide needs exactly one of --radius or --radii")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    if args.radii is not None:
        scene = build_kissing_chain(_radii(args.radii), seed=args.seed)
        target = args.target
        if args.pieces == 2:
            built = bisect_cake(scene, target=target)
        else:
            centered = find_center(scene, target=target, seed=args.seed)
            built = divide(scene, args.pieces, seed=args.seed, target=target, trace=centered.trace)
    else:
        if args.pieces == 2 and not args.marked:
            raise UsageError("--pieces 2 on an unmarked lone cake needs --radii (a kissing chain)")
        scene = build_single_cake(_radius(args.radius), center_marked=args.marked)
        target = 1
        built = divide(scene, args.pieces, seed=args.seed, target=target)
    cake = scene.cake(target)
    report = VerificationReport()
    report.add(f"{args.pieces} equal sectors (exact central angles)",
               equal_sectors(cake, built.cuts, args.pieces), args.pieces)
    areas = piece_area_oracle(cake, built.cuts, args.samples, args.seed)
    expected = math.pi * cake.radius.to_float() ** 2 / args.pieces
    worst = max(abs(a - expected) / expected for a in areas)
    report.add("Monte-Carlo piece areas", worst < AREA_TOLERANCE, {"max_rel_dev": worst, "areas": areas},
               kind="numeric", tolerance=AREA_TOLERANCE)
    return _finish(args, "divide", built, report)


def cmd_check(args) -> int:
    try:
        scene = Scene.from_json(json.loads(Path(args.scene).read_text(encoding="utf-8")))
        trace = Trace.from_json(json.loads(Path(args.trace).read_text(encoding="utf-8")), scene)
    except OSError as exc:
        raise UsageError(f"{exc.filename}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load trace/scene: {exc}") from None
    report = audit_trace(scene, trace)
    for c in report.failures():
        for msg in (c.witness if c.name == "ruler discipline" else [c.name]):
            print(f"violation: {msg}", file=sys.stderr)
    return _summarize(report)


def cmd_fmt(args) -> int:
    path = Path(args.script)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    parsed = parse(data)
    for d in parsed.diagnostics:
        print(f"{path}:{d}", file=sys.stderr)
    if not parsed.ok:
        return EXIT_USAGE
    text = format_program(parsed.program)
    if args.write:
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "bisect": cmd_bisect, "center": cmd_center, "divide": cmd_divide,
            "check": cmd_check, "fmt": cmd_fmt}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cakecut {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CakeError as exc:
        print(f"cakecut {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
