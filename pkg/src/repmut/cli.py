"""Command-line scenario runner.

Subcommands::

    repmut solve     --spec S --out D   closed-form frames
    repmut classify  --spec S           tail class as JSON
    repmut oracle    --spec S --out D   direct integration + comparison
    repmut wave      --c C --out D      wave profile CSV + residual report
    repmut quadratic --spec S --out D   quadratic-weight runs
    repmut run       --spec S --out D   dispatch on the scenario contents
    repmut selftest                     invariant suite

Exit codes: 0 success, 1 no solitary wave (``c <= 0``), 2 the solution is
defined for no positive time (heavy tail), 3 numeric failure of the
oracle, 64 malformed input or unknown subcommand.

A scenario is a JSON document::

    {"name": "demo", "profile": {"kind": "Gaussian", "a": 1, "m": 0},
     "times": [0.1, 0.5], "weight": "Linear",
     "outputs": ["frames.csv", "summary.json"],
     "oracle": {"n": 2048, "dt": 1e-4}}

Output files are deterministic: equal scenarios give byte-identical
``frames.csv`` and ``summary.json``.  Wall-clock timings go to
``manifest.json`` only.
"""
import argparse
from dataclasses import dataclass, field
import json
import math
import os
import sys

import numpy as np

from . import closedform, io, oracle, reductions, selftest, waves
from .errors import (DomainError, NeverDefined, NoSolitaryWave, NumericFailure,
                     OutOfLifespan, RepmutError)
from .profiles import Gaussian, classify_tail, profile_from_dict

EXIT_OK = 0
EXIT_NO_WAVE = 1
EXIT_NEVER_DEFINED = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

OUTPUTS = frozenset({"frames.csv", "summary.json", "wave.csv"})


class SpecError(ValueError):
    """The scenario document is malformed."""


@dataclass
class ScenarioSpec:
    name: str
    profile: object
    times: list
    weight: reductions.Weight = reductions.Weight.LINEAR
    outputs: frozenset = frozenset({"frames.csv", "summary.json"})
    oracle: dict = None
    profile_doc: dict = field(default=None, repr=False)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("scenario must be a JSON object")
        unknown = set(d) - {"name", "profile", "times", "weight", "outputs", "oracle"}
        if unknown:
            raise SpecError(f"unknown scenario keys {sorted(unknown)}")
        name = d.get("name")
        if not isinstance(name, str) or not name:
            raise SpecError("name must be a nonempty string")
        if "profile" not in d:
            raise SpecError("missing profile")
        try:
            profile = profile_from_dict(d["profile"])
        except (ValueError, TypeError, KeyError) as exc:
            raise SpecError(f"bad profile: {exc}") from exc
        times = d.get("times", [])
        try:
            times = [float(t) for t in times]
        except (TypeError, ValueError) as exc:
            raise SpecError("times must be numbers") from exc
        if any(not math.isfinite(t) or t < 0 for t in times):
            raise SpecError("times must be finite and nonnegative")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise SpecError("times must be strictly increasing")
        try:
            weight = reductions.Weight(d.get("weight", "Linear"))
        except ValueError as exc:
            raise SpecError("weight must be Linear or Quadratic") from exc
        outputs = d.get("outputs", ["frames.csv", "summary.json"])
        if not isinstance(outputs, list) or not set(outputs) <= OUTPUTS:
            raise SpecError(f"outputs must be a subset of {sorted(OUTPUTS)}")
        orc = d.get("oracle")
        if orc is not None and not isinstance(orc, dict):
            raise SpecError("oracle must be an object")
        return cls(name, profile, times, weight, frozenset(outputs), orc,
                   d["profile"])


def load_spec(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc
    return ScenarioSpec.from_dict(doc)


class Runner:
    """Holds the parsed flags and writes outputs."""

    def __init__(self, args):
        self.args = args
        self.out = args.out

    def say(self, text):
        if not self.args.quiet:
            print(text)

    def write(self, spec, fname, writer):
        if self.out is None or (spec is not None and fname not in spec.outputs):
            return
        os.makedirs(self.out, exist_ok=True)
        writer(os.path.join(self.out, fname))

    def write_json(self, spec, fname, obj):
        self.write(spec, fname, lambda path: io.write_json(path, obj))

    def refuse_heavy(self, spec):
        """Exit code 2 and the NeverDefined summary for heavy tails."""
        status = closedform.solve_status(spec.profile)
        if status.status is not closedform.Status.NEVER_DEFINED:
            return None
        summary = status.to_dict()
        self.write_json(spec, "summary.json", summary)
        self.say(io.dumps(summary).rstrip())
        return EXIT_NEVER_DEFINED


def _grid_n(args, default):
    return args.grid_n if args.grid_n is not None else default


def cmd_classify(r, spec):
    tc = classify_tail(spec.profile)
    doc = {"class": tc.kind.value, "T": tc.to_dict()["T"]}
    r.write_json(None, "classify.json", doc)
    print(io.dumps(doc).rstrip())
    return EXIT_OK


def cmd_solve(r, spec):
    code = r.refuse_heavy(spec)
    if code is not None:
        return code
    p, n = spec.profile, _grid_n(r.args, closedform.GRID_POINTS)
    frames = [closedform.solve_frame(p, t, n) for t in spec.times]
    status = closedform.solve_status(p)
    summary = {"name": spec.name, "profile": spec.profile_doc,
               **status.to_dict(),
               "frames": [dict(fr.sidecar(), sup_u=float(fr.u.values.max()))
                          for fr in frames]}
    r.write(spec, "frames.csv", lambda path: io.frames_to_csv(path, frames))
    r.write_json(spec, "summary.json", summary)
    for fr in frames:
        r.say(f"t={fr.t:<10g} sup u={fr.u.values.max():.6e} "
              f"u_bar={fr.u_bar:.6g} mass={fr.mass:.6g} [{fr.status}]")
    return EXIT_OK


def _oracle_config(r, spec, t_end):
    o = dict(spec.oracle or {})
    n = _grid_n(r.args, int(o.get("n", 2048)))
    dt = r.args.dt if r.args.dt is not None else float(o.get("dt", 1e-4))
    if "x_lo" in o and "x_hi" in o:
        return oracle.OracleConfig(float(o["x_lo"]), float(o["x_hi"]), n, dt)
    return oracle.OracleConfig.for_profile(spec.profile, t_end, n, dt, spec.weight)


def cmd_oracle(r, spec):
    if spec.weight is reductions.Weight.LINEAR:
        code = r.refuse_heavy(spec)
        if code is not None:
            return code
    o = spec.oracle or {}
    t_end = r.args.t_end if r.args.t_end is not None else float(
        o.get("t_end", max(spec.times, default=0.5)))
    times = [t for t in spec.times if t <= t_end] or [t_end]
    try:
        cfg = _oracle_config(r, spec, t_end)
    except (ValueError, TypeError) as exc:
        raise SpecError(f"bad oracle settings: {exc}") from exc
    frames, elapsed = oracle.timed_integrate(spec.profile, cfg, t_end,
                                             spec.weight, times)
    if spec.weight is reductions.Weight.LINEAR:
        report = oracle.compare(spec.profile, frames)
    else:
        report = oracle.compare(_quadratic_reference(spec.profile, frames), frames)
    summary = {"name": spec.name, "config": cfg.to_dict(), "t_end": t_end,
               "weight": spec.weight.value, "report": report.to_dict()}
    r.write(spec, "frames.csv", lambda path: io.frames_to_csv(path, frames))
    r.write_json(spec, "summary.json", summary)
    if r.out is not None:
        io.write_json(os.path.join(r.out, "manifest.json"), oracle.run_manifest(
            spec.profile, cfg, t_end, spec.weight, report, elapsed))
    for row in report.rows:
        r.say(f"t={row['t']:<8g} sup|du|={row['sup_du']:.3e} "
              f"|du_bar|={row['d_ubar']:.3e} |dmass|={row['d_mass']:.3e}")
    r.say(f"max sup|du| = {report.sup_du:.3e}")
    return EXIT_OK


def _quadratic_reference(p, frames):
    if not isinstance(p, Gaussian):
        raise SpecError("the quadratic weight needs a Gaussian profile")
    out = []
    for fr in frames:
        ref = reductions.quad_weight_solution(p.a, p.m, fr.t, n=4096)
        vals = np.interp(fr.x, ref.x, ref.u.values, left=0.0, right=0.0)
        g = closedform.GridFunction(fr.u.x_lo, fr.u.x_hi, vals)
        out.append(closedform.SolutionFrame(fr.t, g, ref.u_bar, ref.mass))
    return out


def cmd_quadratic(r, spec):
    p = spec.profile
    if not isinstance(p, Gaussian):
        raise SpecError("the quadratic weight needs a Gaussian profile")
    n = _grid_n(r.args, 4096)
    frames = [reductions.quad_weight_solution(p.a, p.m, t, n=n) for t in spec.times]
    rows = []
    for fr in frames:
        v2 = reductions.quad_v_second_moment(p.a, p.m, fr.t)
        rows.append(dict(fr.sidecar(), second_moment_v=v2,
                         drift_from_u0=float(np.max(np.abs(
                             fr.u.values - p.density(fr.x))))))
    summary = {"name": spec.name, "profile": spec.profile_doc,
               "weight": "Quadratic", "frames": rows}
    r.write(spec, "frames.csv", lambda path: io.frames_to_csv(path, frames))
    r.write_json(spec, "summary.json", summary)
    for row in rows:
        r.say(f"t={row['t']:<8g} mass={row['mass']:.12f} "
              f"int x^2 v={row['second_moment_v']:.12g} "
              f"drift={row['drift_from_u0']:.2e}")
    return EXIT_OK


def cmd_wave(r, spec=None):
    c = r.args.c
    if c is None:
        raise SpecError("wave needs --c")
    try:
        lo, hi = waves.wave_window(c)
    except NoSolitaryWave as exc:
        print(f"error: {exc}; solitary waves exist only for c > 0",
              file=sys.stderr)
        return EXIT_NO_WAVE
    h = 1e-2 if r.args.grid_n is None else (hi - lo) / (r.args.grid_n - 1)
    wp = waves.WaveProfile.build(c, h=h)
    m0, m1 = waves.wave_moments(c)
    report = {"c": c, "mass": m0, "mean": m1,
              "residual": waves.wave_residual(c),
              "residual_window": [-15.0, 10.0],
              "min_value": float(wp.samples.values.min()),
              "sign_changes": waves.sign_changes(c, (wp.samples.x_lo, wp.samples.x_hi))}
    if r.out is not None:
        os.makedirs(r.out, exist_ok=True)
        wp.to_csv(os.path.join(r.out, "wave.csv"))
        io.write_json(os.path.join(r.out, "summary.json"), report)
    r.say(io.dumps(report).rstrip())
    return EXIT_OK


def cmd_run(r, spec):
    if spec.weight is reductions.Weight.QUADRATIC and spec.oracle is None:
        return cmd_quadratic(r, spec)
    if spec.oracle is not None:
        return cmd_oracle(r, spec)
    return cmd_solve(r, spec)


def cmd_selftest(r, spec=None):
    results = selftest.run_all()
    for name, ok, detail in results:
        r.say(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else 1


COMMANDS = {"solve": cmd_solve, "classify": cmd_classify, "oracle": cmd_oracle,
            "wave": cmd_wave, "quadratic": cmd_quadratic, "run": cmd_run,
            "selftest": cmd_selftest}
NEEDS_SPEC = {"solve", "classify", "oracle", "quadratic", "run"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser():
    parser = _Parser(prog="repmut", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--spec", help="scenario JSON file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--grid-n", type=int, help="grid points")
    parser.add_argument("--dt", type=float, help="oracle time step")
    parser.add_argument("--t-end", type=float, help="oracle final time")
    parser.add_argument("--c", type=float, help="wave speed")
    parser.add_argument("--quiet", action="store_true", help="no progress output")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    # RML_SEED is reserved and unused: nothing here draws random numbers
    r = Runner(args)
    try:
        if args.grid_n is not None and args.grid_n < 8:
            raise SpecError("--grid-n must be at least 8")
        spec = None
        if args.command in NEEDS_SPEC:
            if args.spec is None:
                raise SpecError(f"{args.command} needs --spec")
            spec = load_spec(args.spec)
        return COMMANDS[args.command](r, spec)
    except SpecError as exc:
        print(f"repmut: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutOfLifespan, DomainError) as exc:
        print(f"repmut: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NeverDefined as exc:
        print(f"repmut: {exc}", file=sys.stderr)
        return EXIT_NEVER_DEFINED
    except NumericFailure as exc:
        print(f"repmut: numeric failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC
    except RepmutError as exc:
        print(f"repmut: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
