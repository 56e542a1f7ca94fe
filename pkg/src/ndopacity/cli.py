"""Command-line entry point: ``ndopacity <subcommand> ...``.

Exit codes: 0 success, 1 property violated, 2 no solution, 3 cap exceeded,
4 oracle disagreement, 64 usage error, 65 malformed input.  Data goes to
standard output (or ``-o``), diagnostics to standard error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .conversion import FiniteSupervisor, SupervisorUndefined, convert
from .gbts import build_pruned, build_total, to_dot
from .infostate import DEFAULT_CAP, fmt_micro
from .oracle import explore, opacity_from
from .plant import CapExceeded, ModelError, ParseError, parse_des, verify_open_loop_opacity
from .runtime import (
    InfeasibleObservation,
    ObservationNotEnabled,
    PlantSimulator,
    Session,
    intruder_estimates,
)
from .synthesis import IsMapping, Strategy, ThetaUndefined, check_mapping, synthesize

EXIT_OK, EXIT_VIOLATED, EXIT_NO_SOLUTION, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4
EXIT_USAGE, EXIT_DATA = 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not -(2 ** 63) <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ndopacity", description="Opacity verification and enforcement for finite plants.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="open-loop current-state opacity")
    v.add_argument("plant")
    v.add_argument("--depth", type=_positive, default=5)

    s = sub.add_parser("synth", help="synthesize an opacity-enforcing IS-mapping")
    s.add_argument("plant")
    s.add_argument("--strategy", choices=[x.value for x in Strategy], default=Strategy.LOCALLY_MAXIMAL.value)
    s.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    s.add_argument("-o", "--output", default="-")

    r = sub.add_parser("simulate", help="co-simulate plant and online decoder")
    r.add_argument("plant")
    r.add_argument("theta")
    r.add_argument("--seed", type=_seed, default=0)
    r.add_argument("--script", default=None, help="space-separated observations")

    c = sub.add_parser("convert", help="finite supervisor to IS-mapping")
    c.add_argument("plant")
    c.add_argument("supervisor")
    c.add_argument("-o", "--output", default="-")

    e = sub.add_parser("export-gbts", help="write the G-BTS as Graphviz DOT")
    e.add_argument("plant")
    e.add_argument("--stage", choices=["total", "pruned"], default="pruned")
    e.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    e.add_argument("-o", "--output", default="-")

    o = sub.add_parser("oracle", help="brute-force check of an IS-mapping")
    o.add_argument("plant")
    o.add_argument("theta")
    o.add_argument("--depth", type=_positive, default=5)
    return ap


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str, out: TextIO) -> None:
    if path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_plant(path: str):
    return parse_des(_read(path))


def _load_theta(p, path: str) -> IsMapping:
    theta = IsMapping.from_json(_read(path))
    check_mapping(p, theta)
    if theta.plant != p.name:
        print(f"warning: mapping built for plant {theta.plant!r}, not {p.name!r}", file=sys.stderr)
    return theta


def cmd_verify(args, out: TextIO) -> int:
    verdict = verify_open_loop_opacity(_load_plant(args.plant), args.depth)
    print(verdict, file=out)
    return EXIT_OK if verdict.opaque else EXIT_VIOLATED


def cmd_synth(args, out: TextIO) -> int:
    p = _load_plant(args.plant)
    theta = synthesize(p, Strategy(args.strategy), args.cap)
    if theta is None:
        print("no solution", file=sys.stderr)
        return EXIT_NO_SOLUTION
    _write(args.output, theta.to_json(), out)
    return EXIT_OK


def cmd_convert(args, out: TextIO) -> int:
    p = _load_plant(args.plant)
    sn = FiniteSupervisor.from_json(_read(args.supervisor))
    sn.check(p)
    try:
        theta = convert(p, sn)
    except SupervisorUndefined as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    _write(args.output, theta.to_json(), out)
    return EXIT_OK


def cmd_export(args, out: TextIO) -> int:
    p = _load_plant(args.plant)
    t = build_total(p, args.cap) if args.stage == "total" else build_pruned(p, args.cap)
    _write(args.output, to_dot(t, f"{p.name}-{args.stage}"), out)
    return EXIT_OK


def cmd_simulate(args, out: TextIO, stdin: TextIO) -> int:
    p = _load_plant(args.plant)
    theta = _load_theta(p, args.theta)
    session = Session(p, theta, seed=args.seed)
    plant = PlantSimulator(p, seed=args.seed)
    session.step()
    session.true_state = plant.state
    print(session.transcript_line(None), file=out)
    interactive = args.script is None
    script = iter(args.script.split()) if not interactive else None
    while True:
        enabled = plant.enabled(session.applied)
        if interactive:
            print(f"hidden={plant.state} enabled: {' '.join(enabled) or '-'}", file=out)
            out.flush()
            line = stdin.readline()
            if not line or line.strip() in ("quit", "exit"):
                return EXIT_OK
            obs = line.strip()
            if not obs:
                continue
        else:
            obs = next(script, None)
            if obs is None:
                return EXIT_OK
        if obs not in enabled:
            msg = f"{obs} is not enabled (hidden state {plant.state}, decision applied {fmt_micro(session.applied)})"
            print(msg, file=sys.stderr)
            if interactive:
                continue
            return EXIT_VIOLATED
        plant.fire(session.applied, obs)
        session.step(obs)
        session.true_state = plant.state
        print(session.transcript_line(obs), file=out)


def agreement_mismatch(p, theta: IsMapping, depth: int) -> Optional[tuple]:
    """First observation where incremental and enumerated estimates differ."""
    cl = explore(p, theta, depth)
    for s in cl.observations():
        rec = cl.records[s]
        inc = intruder_estimates(p, theta, s)
        if (inc.macro, inc.macro_plus, inc.flat) != (rec.estimates, rec.augmented, rec.flat):
            return s
    return None


def cmd_oracle(args, out: TextIO) -> int:
    p = _load_plant(args.plant)
    theta = _load_theta(p, args.theta)
    cl = explore(p, theta, args.depth)
    bad = agreement_mismatch(p, theta, args.depth)
    if bad is not None:
        print(f"agreement mismatch at s={' '.join(bad) or '<empty>'}", file=sys.stderr)
        return EXIT_MISMATCH
    verdict = opacity_from(cl)
    if verdict.opaque:
        print(f"opaque up to depth {args.depth} ({len(cl.records)} observations checked)", file=out)
        return EXIT_OK
    print(verdict, file=out)
    return EXIT_VIOLATED


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO | None = None,
         stdin: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "synth":
            return cmd_synth(args, out)
        if args.command == "convert":
            return cmd_convert(args, out)
        if args.command == "export-gbts":
            return cmd_export(args, out)
        if args.command == "simulate":
            return cmd_simulate(args, out, stdin or sys.stdin)
        return cmd_oracle(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ThetaUndefined, SupervisorUndefined) as exc:
        print(f"invalid supervisor: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InfeasibleObservation, ObservationNotEnabled) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    except ModelError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry() -> None:
    sys.exit(main())
