"""Command-line surface.

Every invocation emits one report envelope: tool identity, command
echo, model spec, convention, payload, verdict, error.  Reports are
deterministic (no timestamps, stable field order) and rationals are
serialized as "p/q" strings, so identical invocations produce
byte-identical output.

Exit codes: 0 pass/true or informational success, 1 fail/false
verdict, 2 usage or malformed input, 3 unsupported model or missing
oracle.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from fractions import Fraction
from pathlib import Path

from ._version import __version__
from .bridgeland import central_charge, heart_gate, question_scan, slope, ulrich_charge_closed_form
from .chern import ulrich_chern_solve
from .complexes import FormalComplex, GlueWitness, formal_complex, pushforward_finite
from .cohomology import sheaf_table
from .errors import ModelMismatch, ParseError, UlrichKitError
from .generators import elliptic_witness, generator_gate
from .rational import format_rational, parse_rational
from .sheaves import LineBundle, Spinor, parse_sheaf
from .ulrich import abstract_ulrich_sheaf, is_ulrich_object, yoneda_build
from .variety import (
    elliptic_curve,
    format_variety,
    parse_variety,
    product_proj,
    proj_space,
    quadric,
    rank1_surface,
)

TOOL_NAME = "ulrich-kit"


def to_jsonable(value):
    """Recursive conversion to JSON-safe data; exact rationals become
    "p/q" strings so nothing round-trips through floats."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def _report(command, model_spec, convention, payload, verdict, error=None):
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "command": command,
        "model": model_spec,
        "convention": convention,
        "payload": to_jsonable(payload),
        "verdict": verdict,
        "error": error,
    }


def _tsv_text(report) -> str:
    lines = []
    payload = report["payload"]
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        header = list(rows[0])
        lines.append("\t".join(header))
        for row in rows:
            lines.append("\t".join(str(row.get(col, "")) for col in header))
    else:
        for key, value in (payload or {}).items() if isinstance(payload, dict) else []:
            lines.append(f"{key}\t{json.dumps(to_jsonable(value), sort_keys=True)}")
    lines.append(f"verdict\t{report['verdict']}")
    if report["error"]:
        lines.append(f"error\t{report['error']}")
    return "\n".join(lines) + "\n"


def _emit(report, fmt: str, out: str | None):
    if fmt == "tsv":
        text = _tsv_text(report)
    else:
        text = json.dumps(report, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _parse_window(text: str) -> tuple[int, int]:
    lo_txt, sep, hi_txt = text.partition(":")
    try:
        lo, hi = int(lo_txt), int(hi_txt)
    except ValueError as exc:
        raise ParseError(f"window must look like a:b, got {text!r}") from exc
    if not sep or lo > hi:
        raise ParseError(f"window must look like a:b with a <= b, got {text!r}")
    return (lo, hi)


def _parse_grid(text: str) -> list[tuple[Fraction, Fraction]]:
    ranges: dict[str, list[Fraction]] = {}
    for part in text.split(","):
        name, sep, rest = part.partition("=")
        name = name.strip()
        if not sep or name not in ("s", "t"):
            raise ParseError(f"grid needs s=lo..hi:step,t=lo..hi:step, got {text!r}")
        span, _, step_txt = rest.partition(":")
        lo_txt, span_sep, hi_txt = span.partition("..")
        if not span_sep:
            raise ParseError(f"grid range needs lo..hi, got {rest!r}")
        lo = parse_rational(lo_txt)
        hi = parse_rational(hi_txt)
        step = parse_rational(step_txt) if step_txt else Fraction(1)
        if step <= 0:
            raise ParseError(f"grid step must be positive, got {step_txt!r}")
        values = []
        v = lo
        while v <= hi:
            values.append(v)
            v += step
        ranges[name] = values
    if "s" not in ranges or "t" not in ranges:
        raise ParseError("grid needs both an s range and a t range")
    return [(s, t) for s in ranges["s"] for t in ranges["t"]]


def _load_config(path: str | None) -> dict:
    config: dict = {}
    if not path:
        return config
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"config lines are key=value, got {raw!r}")
        key, value = key.strip(), value.strip()
        if key == "window":
            config["window"] = _parse_window(value)
        elif key == "probe_depth":
            try:
                config["probe_depth"] = int(value)
            except ValueError as exc:
                raise ParseError(f"probe_depth must be an integer, got {value!r}") from exc
        elif key == "slope_convention":
            config["slope_convention"] = value
        else:
            raise ParseError(f"unknown config key {key!r}")
    return config


def _load_complex(path: str, model=None) -> tuple[FormalComplex, str]:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read object file {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"object file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("object file must hold a JSON object")
    file_model = None
    if data.get("variety"):
        file_model = parse_variety(data["variety"])
    if model is not None and file_model is not None and model != file_model:
        raise ModelMismatch(
            f"--variety {format_variety(model)} disagrees with the object file's"
            f" {format_variety(file_model)}"
        )
    use = model if model is not None else file_model
    if use is None:
        raise ParseError("no variety given: pass --variety or put one in the file")
    sheaves = {}
    for key, desc_txt in (data.get("sheaves") or {}).items():
        try:
            degree = int(key)
        except ValueError as exc:
            raise ParseError(f"sheaf degrees must be integers, got {key!r}") from exc
        sheaves[degree] = parse_sheaf(desc_txt, use)
    glue = []
    for item in data.get("glue") or []:
        try:
            glue.append(
                GlueWitness(
                    from_degree=item["from"],
                    to_degree=item["to"],
                    ext_degree=item.get("ext_degree", 2),
                    nonzero=bool(item.get("nonzero", True)),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed glue entry {item!r}") from exc
    return formal_complex(use, sheaves, tuple(glue)), format_variety(use)


def _cmd_table(args, config):
    model = parse_variety(args.variety)
    desc = parse_sheaf(args.sheaf, model)
    window = args.window or config.get("window")
    table = sheaf_table(desc, model, window)
    payload = {
        "variety": format_variety(model),
        "sheaf": args.sheaf,
        "window": list(table.window),
        "rows": [{"i": i, "t": t, "h": h} for i, t, h in table.rows()],
        "num_class": None
        if table.num_class is None
        else {
            "r": table.num_class.r,
            "e1": table.num_class.e1,
            "e2": table.num_class.e2,
        },
    }
    return payload, None, format_variety(model), None, 0


def _cmd_check(args, config):
    model = parse_variety(args.variety) if args.variety else None
    if args.object:
        E, model_spec = _load_complex(args.object, model)
    else:
        if model is None:
            raise ParseError("check needs --variety when --sheaf is used")
        if not args.sheaf:
            raise ParseError("check needs --object or --sheaf")
        E = formal_complex(model, {0: parse_sheaf(args.sheaf, model)})
        model_spec = format_variety(model)
    window = args.window or config.get("window")
    verdict = is_ulrich_object(E, args.mode, window, config.get("probe_depth"))
    payload = verdict.as_dict()
    payload["object"] = args.object or args.sheaf
    return payload, "pass" if verdict.passed else "fail", model_spec, None, (
        0 if verdict.passed else 1
    )


def _cmd_chern_solve(args, config):
    model = parse_variety(f"surface:{args.surface}")
    c = ulrich_chern_solve(model, args.rank)
    payload = {"r": c.r, "e1": c.e1, "e2": c.e2}
    return payload, None, format_variety(model), None, 0


def _cmd_charge(args, config):
    model = parse_variety(f"surface:{args.surface}")
    s = parse_rational(args.s)
    t = parse_rational(args.t)
    c = ulrich_chern_solve(model, args.rank)
    central = central_charge(c, s, t)
    closed = ulrich_charge_closed_form(model, args.rank, s, t)
    payload = {
        "class": {"r": c.r, "e1": c.e1, "e2": c.e2},
        "slope": slope(c),
        "s": s,
        "t": t,
        "central": {"re": central.re, "im": central.im},
        "closed_form": {"re": closed.re, "im": closed.im},
        "agree": central == closed,
    }
    return payload, None, format_variety(model), None, 0


def _cmd_gate(args, config):
    model = parse_variety(args.variety)
    descs = [
        parse_sheaf(piece.strip(), model)
        for piece in args.bundles.split(";")
        if piece.strip()
    ]
    if not descs:
        raise ParseError("gate needs at least one bundle descriptor")
    result = generator_gate(descs, model)
    verdict = "FullRank" if result.passed else "DeficientRank"
    payload = {"verdict": verdict, "rank": result.rank, "needed": result.needed}
    return payload, verdict, format_variety(model), None, 0 if result.passed else 1


def _cmd_scan(args, config):
    model = parse_variety(args.variety) if args.variety else None
    E, model_spec = _load_complex(args.object, model)
    grid = _parse_grid(args.grid)
    convention = args.convention or config.get("slope_convention") or "paper-literal"
    rows = question_scan(E, grid, convention)
    payload = {
        "grid": args.grid,
        "rows": [
            {
                "s": row.s,
                "t": row.t,
                "best_shift": row.best_shift,
                "heart": row.heart_status,
                "reason": row.heart_reason,
                "re": row.re,
                "im": row.im,
                "im_zero": row.im_zero,
                "phase_sector": row.phase_sector,
                "phase": row.phase_display,
            }
            for row in rows
        ],
    }
    return payload, None, model_spec, convention, 0


def _demo_cases() -> list[tuple[str, bool]]:
    cases: list[tuple[str, bool]] = []

    p2 = proj_space(2)
    sums = formal_complex(p2, {0: LineBundle((0,)), -1: LineBundle((0,))})
    cases.append(("structure-sheaf-sum-p2", is_ulrich_object(sums, "both").passed))
    twist = formal_complex(p2, {0: LineBundle((1,))})
    cases.append(("twist-fails-p2", not is_ulrich_object(twist, "both").passed))

    prod = product_proj(1, 1)
    ruling = formal_complex(prod, {0: LineBundle((1, 0))})
    cases.append(("ruling-line-product", is_ulrich_object(ruling, "both").passed))
    diagonal = formal_complex(prod, {0: LineBundle((1, 1))})
    cases.append(("diagonal-fails-product", not is_ulrich_object(diagonal, "both").passed))

    q3 = quadric(3)
    spinor = formal_complex(q3, {0: Spinor(None)})
    spinor_table = sheaf_table(Spinor(None), q3)
    cases.append(
        (
            "spinor-q3",
            is_ulrich_object(spinor, "both").passed and spinor_table.h(0, 0) == 4,
        )
    )

    k3 = rank1_surface(4, 0, 2)
    solved = ulrich_chern_solve(k3, 2)
    cases.append(("chern-solve-k3", solved.e1 == 3 and solved.e2 == 1))

    ec = elliptic_curve(3)
    witness = elliptic_witness(ec)
    cases.append(("elliptic-witness", witness.verdict.passed))
    gate = generator_gate([LineBundle((1,))], ec)
    cases.append(("elliptic-gate-deficient", not gate.passed and gate.rank == 1))

    push = pushforward_finite(formal_complex(prod, {0: LineBundle((0, 1))}))
    cases.append(
        (
            "pushforward-ruling",
            push.multiplicities == {0: 2} and push.reconstruction_ok,
        )
    )

    a = abstract_ulrich_sheaf(k3, 2, "first")
    b = abstract_ulrich_sheaf(k3, 2, "second")
    glued = yoneda_build(a, b, 2, k3, witness="asserted")
    not_in_heart = all(
        heart_gate(glued, Fraction(0), convention).status == "NotInHeart"
        for convention in ("paper-literal", "normalized")
    )
    cases.append(("yoneda-not-in-heart", not_in_heart))

    return cases


def _cmd_demo(args, config):
    cases = _demo_cases()
    payload = {
        "cases": [{"name": name, "passed": passed} for name, passed in cases]
    }
    all_pass = all(passed for _, passed in cases)
    return payload, "pass" if all_pass else "fail", None, None, 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Exact verification toolkit for twisted-vanishing objects",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--out", help="also write the report to this path")
    common.add_argument("--config", help="key=value defaults file")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_table = sub.add_parser(
        "table", parents=[common], help="cohomology table of a descriptor"
    )
    p_table.add_argument("--variety", required=True)
    p_table.add_argument("--sheaf", required=True)
    p_table.add_argument("--window", type=_parse_window)
    p_table.set_defaults(handler=_cmd_table)

    p_check = sub.add_parser("check", parents=[common], help="Ulrich verdict for an object")
    p_check.add_argument("--variety")
    p_check.add_argument("--object", help="formal-complex JSON file")
    p_check.add_argument("--sheaf", help="inline descriptor placed in degree 0")
    p_check.add_argument("--mode", choices=("direct", "sheafwise", "both"), default="both")
    p_check.add_argument("--window", type=_parse_window)
    p_check.set_defaults(handler=_cmd_check)

    p_solve = sub.add_parser("chern-solve", parents=[common], help="solve the twisted-vanishing class")
    p_solve.add_argument("--surface", required=True, help="d=..,i=..,chi=..")
    p_solve.add_argument("--rank", type=int, required=True)
    p_solve.set_defaults(handler=_cmd_chern_solve)

    p_charge = sub.add_parser("charge", parents=[common], help="central charge of the solved class")
    p_charge.add_argument("--surface", required=True, help="d=..,i=..,chi=..")
    p_charge.add_argument("--rank", type=int, required=True)
    p_charge.add_argument("--s", required=True)
    p_charge.add_argument("--t", required=True)
    p_charge.set_defaults(handler=_cmd_charge)

    p_gate = sub.add_parser("gate", parents=[common], help="K-lattice rank gate for generation")
    p_gate.add_argument("--variety", required=True)
    p_gate.add_argument("--bundles", required=True, help="descriptors joined by ';'")
    p_gate.set_defaults(handler=_cmd_gate)

    p_scan = sub.add_parser("scan", parents=[common], help="heart/charge evidence over an (s,t) grid")
    p_scan.add_argument("--variety")
    p_scan.add_argument("--object", required=True)
    p_scan.add_argument("--grid", required=True, help="s=lo..hi:step,t=lo..hi:step")
    p_scan.add_argument("--convention", choices=("paper-literal", "normalized"))
    p_scan.set_defaults(handler=_cmd_scan)

    p_demo = sub.add_parser("demo", parents=[common], help="run the curated example verifications")
    p_demo.add_argument("--paper-examples", action="store_true",
                        help="kept for compatibility; the curated set always runs")
    p_demo.set_defaults(handler=_cmd_demo)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    command_echo = shlex.join([str(a) for a in argv])
    fmt, out = args.format, args.out
    try:
        config = _load_config(args.config)
        payload, verdict, model_spec, convention, code = args.handler(args, config)
    except UlrichKitError as exc:
        report = _report(command_echo, None, None, None, None, error=str(exc))
        _emit(report, fmt, out)
        return exc.exit_code
    report = _report(command_echo, model_spec, convention, payload, verdict)
    _emit(report, fmt, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
