"""Command-line front end: instances, sums, identity suites, and scans.

Exit codes: 0 on success, 1 when a check suite reports failures, 2 on
input errors.  All numeric output is locale-independent; floats are printed
with 12 significant digits in CSV mode, and rows are emitted in a
deterministic scan order, so outputs are byte-identical across runs and
worker counts for a fixed configuration.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from . import checks, csums, fields
from .monoid import ZERO, Element, MonoidInstance

MAX_X = 10**7
MAX_Y = 10**3


class CLIError(Exception):
    pass


@dataclass
class RunConfig:
    instance: str = "z"
    x: float = 1000
    y: float = 100
    seed: int = 0
    workers: int = 1
    out_format: str = "csv"
    out_path: str | None = None


# -- element specs ----------------------------------------------------

_LABEL_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*?)(?:\^(\d+))?$")


def _resolve_label(inst: MonoidInstance, label: str):
    atom = inst.atom_by_label(label)
    if atom is not None:
        return atom
    m = re.match(r"^p(\d+)", label)
    if m:
        p = int(m.group(1))
        inst.extend(p if inst.parses_integers or p > 10**4 else p * p)
        atom = inst.atom_by_label(label)
    return atom


def parse_element(inst: MonoidInstance, text: str) -> Element:
    """Parse an element spec: a positive integer (rational-integer instance
    only), or a product of atom-label powers like ``p2r^2*p5a``."""
    t = text.strip()
    if not t:
        raise CLIError("empty element spec")
    if t.isdigit():
        n = int(t)
        if inst.parses_integers:
            return fields.factor_integer(inst, n)
        if n == 1:
            return ZERO
        raise CLIError(
            f"integer specs are only parsed over Z; use atom labels for {inst.name}"
        )
    exps: dict[int, int] = {}
    for part in t.split("*"):
        m = _LABEL_RE.match(part.strip())
        if not m:
            raise CLIError(f"bad atom power {part.strip()!r}")
        label, power = m.group(1), int(m.group(2) or 1)
        atom = _resolve_label(inst, label)
        if atom is None:
            raise CLIError(f"unknown atom label {label!r} in {inst.name}")
        exps[atom.id] = exps.get(atom.id, 0) + power
    return Element.of(exps)


def format_element(inst: MonoidInstance, e: Element) -> str:
    """Canonical spec: the integer itself over Z, label powers elsewhere."""
    if e.is_zero:
        return "1"
    if inst.parses_integers:
        return str(inst.norm(e))
    parts = []
    for aid, exp in e.exps:
        label = inst.atom(aid).label
        parts.append(label if exp == 1 else f"{label}^{exp}")
    return "*".join(parts)


def make_instance(spec: str) -> MonoidInstance:
    s = spec.strip().lower()
    if s == "z":
        return fields.rational_integers()
    if s.startswith("q:"):
        try:
            d = int(s[2:])
        except ValueError:
            raise CLIError(f"bad quadratic-field selector {spec!r}") from None
        try:
            return fields.quadratic_field(d)
        except ValueError as exc:
            raise CLIError(str(exc)) from None
    raise CLIError(f"unknown instance {spec!r}; use 'z' or 'q:<d>'")


# -- output helpers ---------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _write(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_rows(header: list[str], rows: list[tuple], cfg: RunConfig) -> None:
    if cfg.out_format == "json":
        payload = [dict(zip(header, row)) for row in rows]
        _write(json.dumps(payload, sort_keys=True, indent=2) + "\n", cfg.out_path)
    else:
        lines = [",".join(header)]
        lines += [",".join(_cell(v) for v in row) for row in rows]
        _write("\n".join(lines) + "\n", cfg.out_path)


def emit_json(obj, cfg: RunConfig) -> None:
    _write(json.dumps(obj, sort_keys=True, indent=2) + "\n", cfg.out_path)


def _check_caps(args) -> None:
    if getattr(args, "allow_large", False):
        return
    x = getattr(args, "x", None)
    y = getattr(args, "y", None)
    if x is not None and x > MAX_X:
        raise CLIError(f"x={x} exceeds the cap {MAX_X}; pass --allow-large to override")
    if y is not None and y > MAX_Y:
        raise CLIError(f"y={y} exceeds the cap {MAX_Y}; pass --allow-large to override")


def _scan_points(limit) -> list:
    pts, v = [], 10
    while v < limit:
        pts.append(v)
        v *= 10
    pts.append(limit)
    return pts


# -- subcommands ------------------------------------------------------


def cmd_atoms(inst, args, cfg) -> int:
    inst.extend(args.x)
    rows = [(a.id, a.label, a.norm) for a in inst.atoms if a.norm <= args.x]
    emit_rows(["id", "label", "norm"], rows, cfg)
    return 0


def cmd_csum(inst, args, cfg) -> int:
    k = parse_element(inst, args.k)
    m = parse_element(inst, args.m)
    _write(str(csums.ramanujan_sum(inst, k, m)) + "\n", cfg.out_path)
    return 0


def cmd_table(inst, args, cfg) -> int:
    ks = list(inst.enumerate_up_to(args.y))
    ms = list(inst.enumerate_up_to(args.x))
    rows = [
        (format_element(inst, k), format_element(inst, m), csums.ramanujan_sum(inst, k, m))
        for k in ks
        for m in ms
    ]
    emit_rows(["k", "m", "csum"], rows, cfg)
    return 0


def cmd_check(inst, args, cfg) -> int:
    report = checks.run_suite(
        inst, args.suite, bound=args.bound, trials=args.trials, seed=cfg.seed, workers=cfg.workers
    )
    emit_json(report, cfg)
    if report.get("failures_total", len(report.get("failures", []))):
        return 1
    return 0


def cmd_count(inst, args, cfg) -> int:
    points = _scan_points(args.x) if args.scan else [args.x]
    rows = []
    for x in points:
        n = inst.count_up_to(x)
        rows.append((x, n, n / float(x)))
    emit_rows(["x", "count", "count_over_x"], rows, cfg)
    return 0


def cmd_residue(inst, args, cfg) -> int:
    k = parse_element(inst, args.k)
    if k.is_zero:
        raise CLIError("k must be a nonzero element")
    mode = "direct" if args.direct else "grouped"
    target = csums.residue_target(inst, k)
    points = _scan_points(args.x) if args.scan else [args.x]
    rows = []
    for x in points:
        est = csums.residue_series(inst, k, x, mode=mode)
        err = abs(est - target) if target is not None else None
        rows.append((x, est, target, err))
    emit_rows(["x", "estimate", "target", "abs_err"], rows, cfg)
    return 0


def cmd_sxy(inst, args, cfg) -> int:
    if args.scan:
        grid = [(x, y) for x in _scan_points(args.x) for y in (2, 5, 10, 20, 50) if y <= args.y]
    else:
        grid = [(args.x, args.y)]
    rows = []
    for x, y in grid:
        rep = csums.double_sum(inst, x, y)
        rows.append((x, y, rep.value, rep.residual, rep.bound_ref))
    emit_rows(["x", "y", "s", "s_minus_cx", "bound_ref"], rows, cfg)
    return 0


def cmd_invariants(inst, args, cfg) -> int:
    inv = inst.invariants
    if inv is None or inst.descriptor is None:
        raise CLIError(f"{inst.name} carries no field invariants; use a q:<d> instance")
    est, h_rounded = fields.class_number_from_counting(inst, args.x)
    h_used = inv.h if inv.h is not None else h_rounded
    c_f = fields.residue_constant(
        fields.FieldInvariants(
            inv.r1, inv.r2, inv.regulator, h_used, inv.roots_of_unity, inv.abs_disc
        )
    )
    payload = {
        "instance": inst.name,
        "d": inst.descriptor.d,
        "discriminant": inst.descriptor.discriminant,
        "r1": inv.r1,
        "r2": inv.r2,
        "regulator": inv.regulator,
        "roots_of_unity": inv.roots_of_unity,
        "abs_disc": inv.abs_disc,
        "class_number_exact": inv.h,
        "x": args.x,
        "count": inst.count_up_to(args.x),
        "h_estimate": est,
        "h_rounded": h_rounded,
        "residue_constant": c_f,
    }
    emit_json(payload, cfg)
    return 0


# -- argument parsing -------------------------------------------------


def _num(text: str):
    if re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramsums",
        description="Exact Ramanujan-type sums over normed free abelian monoids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, x_default=1000):
        p.add_argument("--instance", default="z", help="'z' or 'q:<d>' (default z)")
        p.add_argument("--x", type=_num, default=x_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--allow-large", action="store_true", help="lift the x/y caps")

    p = sub.add_parser("atoms", help="list materialized atoms up to --x")
    common(p, x_default=100)

    p = sub.add_parser("csum", help="print the exact Ramanujan-type sum")
    common(p)
    p.add_argument("--k", required=True)
    p.add_argument("--m", required=True)

    p = sub.add_parser("table", help="csum grid over norms <= --y by <= --x")
    common(p, x_default=30)
    p.add_argument("--y", type=_num, default=30)

    p = sub.add_parser("check", help="run an identity or oracle suite")
    common(p)
    p.add_argument(
        "--suite", default="all", choices=checks.SUITES + ("all",),
        help="th1: divisor-sum identity, th2: divisibility identity, "
        "apostol: bilinear convolution identities, holder: closed form vs "
        "definition, oracle: trigonometric sums (Z only)",
    )
    p.add_argument("--bound", type=int, default=200)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("count", help="norm-bounded element counts")
    common(p)
    p.add_argument("--scan", action="store_true", help="emit decade scan up to --x")

    p = sub.add_parser("residue", help="norm-ordered series estimating -c*Lambda(k)")
    common(p, x_default=10**6)
    p.add_argument("--k", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--grouped", action="store_true", default=True)
    group.add_argument("--direct", action="store_true", default=False)
    p.add_argument("--scan", action="store_true")

    p = sub.add_parser("sxy", help="exact double sum S(x, y) and its residual")
    common(p, x_default=10**4)
    p.add_argument("--y", type=_num, default=50)
    p.add_argument("--scan", action="store_true", help="decades of x times y in {2,5,10,20,50}")

    p = sub.add_parser("invariants", help="field invariants, residue constant, class number")
    common(p, x_default=10**6)

    return parser


COMMANDS = {
    "atoms": cmd_atoms,
    "csum": cmd_csum,
    "table": cmd_table,
    "check": cmd_check,
    "count": cmd_count,
    "residue": cmd_residue,
    "sxy": cmd_sxy,
    "invariants": cmd_invariants,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_caps(args)
        inst = make_instance(args.instance)
        cfg = RunConfig(
            instance=args.instance,
            x=getattr(args, "x", 1000),
            y=getattr(args, "y", 100),
            seed=getattr(args, "seed", 0),
            workers=getattr(args, "workers", 1),
            out_format=args.format,
            out_path=args.out,
        )
        return COMMANDS[args.command](inst, args, cfg)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
