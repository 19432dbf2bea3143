"""Command-line front end.

Four subcommands: ``delta`` prints one incentive report as JSON,
``sweep`` and ``designer`` write CSV tables, and ``figures`` emits the
seven CSV artifacts behind the standard plots. All file output is
written to a temporary file and renamed into place, floats are
serialized with 17 significant digits (exact round-trip), and every
code path validates its inputs before computing, so outputs are
byte-deterministic and never half-written.

Exit codes: 0 success, 2 invalid flags or config, 3 degenerate input
(a point mass exactly on the rational step), 4 unwritable output path.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .beliefs import Gaussian
from .designer import DesignerResult, DesignerScenario, fig4_scenario, simulate
from .incentives import (
    DegenerateInputError,
    IncentiveReport,
    delta_decomposition,
    delta_monte_carlo,
    delta_rational_gaussian,
)
from .policies import Boltzmann, Constant, HumanPolicy, Rational, Tabular
from .sweeps import (
    SweepGrid,
    SweepRow,
    default_fig2_contour_grid,
    default_fig2_lines_grid,
    default_fig3_grid,
    run_sweep,
)

__all__ = ["main", "policy_from_json"]

SWEEP_HEADER = ["mu", "sigma", "beta", "delta", "info_term", "correction_term", "optimal"]
DESIGNER_HEADER = [
    "assumed_noise_std",
    "posterior_std",
    "v_mean",
    "v_stderr",
    "delta_mean",
    "delta_stderr",
]

FIGURE_FILES = (
    "fig2_left.csv",
    "fig2_right.csv",
    "fig3_mu-1.csv",
    "fig3_mu0.csv",
    "fig3_mu1.csv",
    "fig4_left.csv",
    "fig4_right.csv",
)


class _UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_writable_dir(path: Path) -> None:
    parent = path if path.is_dir() else path.parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"output directory {parent} is not writable")


def _axis_spec(text: str) -> tuple[float, ...]:
    """Parse 'start:stop:count' or 'start:stop:count:log' into an axis."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
        raise argparse.ArgumentTypeError(
            f"axis spec {text!r} is not start:stop:count[:lin|:log]"
        )
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"axis spec {text!r}: {exc}") from None
    if count < 1:
        raise argparse.ArgumentTypeError(f"axis spec {text!r}: count must be >= 1")
    if len(parts) == 4 and parts[3] == "log":
        if start <= 0 or stop <= 0:
            raise argparse.ArgumentTypeError(f"axis spec {text!r}: log needs positive bounds")
        return tuple(np.logspace(math.log10(start), math.log10(stop), count))
    return tuple(np.linspace(start, stop, count))


def policy_from_json(obj, field: str = "human") -> HumanPolicy:
    """Decode a human policy from its JSON object form."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise _UsageError(f"field '{field}' must be an object with a 'kind' key")
    kind = obj["kind"]
    extra = set(obj) - {"kind", "beta", "p", "breakpoints", "values"}
    if extra:
        raise _UsageError(f"unknown key '{field}.{sorted(extra)[0]}'")
    try:
        if kind == "rational":
            return Rational()
        if kind == "boltzmann":
            return Boltzmann(beta=float(obj["beta"]))
        if kind == "constant":
            return Constant(p=float(obj["p"]))
        if kind == "tabular":
            return Tabular(breakpoints=obj["breakpoints"], values=obj["values"])
    except KeyError as exc:
        raise _UsageError(f"field '{field}' is missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"field '{field}': {exc}") from None
    raise _UsageError(f"field '{field}.kind' must be one of rational/boltzmann/constant/tabular")


_SCENARIO_FIELDS = {
    "prior_mean": float,
    "prior_std": float,
    "true_noise_std": float,
    "assumed_noise_grid": list,
    "n_actions": int,
    "n_trials": int,
    "seed": int,
}


def _scenario_from_json(obj) -> DesignerScenario:
    if not isinstance(obj, dict):
        raise _UsageError("config must be a JSON object")
    for key in obj:
        if key not in _SCENARIO_FIELDS and key != "human":
            raise _UsageError(f"unknown config field '{key}'")
    values = {}
    for key, kind in _SCENARIO_FIELDS.items():
        if key not in obj:
            raise _UsageError(f"config is missing required field '{key}'")
        raw = obj[key]
        if kind is int:
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise _UsageError(f"field '{key}' must be an integer")
            values[key] = raw
        elif kind is float:
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise _UsageError(f"field '{key}' must be a number")
            values[key] = float(raw)
        else:
            if not isinstance(raw, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
            ):
                raise _UsageError(f"field '{key}' must be a list of numbers")
            values[key] = [float(v) for v in raw]
    human = policy_from_json(obj["human"]) if "human" in obj else Rational()
    try:
        return DesignerScenario(human=human, **values)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _report_json(report: IncentiveReport) -> str:
    return json.dumps(
        {
            "delta": report.delta,
            "optimal": report.optimal.value,
            "v_wait": report.values.v_wait,
            "v_act": report.values.v_act,
            "v_off": report.values.v_off,
            "info_term": report.info_term,
            "correction_term": report.correction_term,
            "method": report.method.value,
            "mc_stderr": report.mc_stderr,
        }
    )


def _sweep_csv(rows: Sequence[SweepRow]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow(
            [
                _fmt(r.mu),
                _fmt(r.sigma),
                "" if r.beta is None else _fmt(r.beta),
                _fmt(r.delta),
                _fmt(r.info_term),
                _fmt(r.correction_term),
                r.optimal.value,
            ]
        )
    return buf.getvalue()


def _designer_csv(result: DesignerResult, n_actions: int | None = None) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = DESIGNER_HEADER if n_actions is None else ["n_actions"] + DESIGNER_HEADER
    writer.writerow(header)
    for r in result.rows:
        row = [
            _fmt(r.assumed_noise_std),
            _fmt(r.posterior_std),
            _fmt(r.v_mean),
            _fmt(r.v_stderr),
            _fmt(r.delta_mean),
            _fmt(r.delta_stderr),
        ]
        writer.writerow(row if n_actions is None else [str(n_actions)] + row)
    return buf.getvalue()


def _cmd_delta(args) -> int:
    if not (math.isfinite(args.mu) and math.isfinite(args.sigma)) or args.sigma < 0:
        raise _UsageError("--mu must be finite and --sigma finite and >= 0")
    try:
        if args.rational:
            policy: HumanPolicy = Rational()
        elif args.beta is not None:
            policy = Boltzmann(args.beta)
        else:
            policy = Constant(args.constant)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None

    if args.rational:
        decomposed = delta_decomposition(args.mu, args.sigma, policy)
        report = replace(
            delta_rational_gaussian(args.mu, args.sigma),
            info_term=decomposed.info_term,
            correction_term=decomposed.correction_term,
        )
    else:
        report = delta_decomposition(args.mu, args.sigma, policy)

    if args.mc_check is not None:
        try:
            mc = delta_monte_carlo(Gaussian(args.mu, args.sigma), policy, args.mc_check, args.seed)
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        report = replace(report, mc_stderr=mc.mc_stderr)
        if abs(mc.delta - report.delta) > 5.0 * mc.mc_stderr + 1e-12:
            print(_report_json(report))
            print(
                f"error: Monte-Carlo check failed: sampled delta {mc.delta} vs "
                f"analytic {report.delta} (stderr {mc.mc_stderr})",
                file=sys.stderr,
            )
            return 1
    print(_report_json(report))
    return 0


def _cmd_sweep(args) -> int:
    if args.policy == "boltzmann" and args.beta is None:
        raise _UsageError("--policy boltzmann requires --beta")
    if args.policy == "rational" and args.beta is not None:
        raise _UsageError("--policy rational does not take --beta")
    try:
        grid = SweepGrid(
            mu_axis=args.mu,
            sigma_axis=args.sigma,
            beta_axis=args.beta,
            policy_family=args.policy,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    _check_writable_dir(args.out)
    rows = run_sweep(grid, threads=args.threads)
    _write_atomic(args.out, _sweep_csv(rows))
    return 0


def _cmd_designer(args) -> int:
    try:
        with open(args.config) as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise _UsageError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"config is not valid JSON: {exc}") from None
    scenario = _scenario_from_json(obj)
    _check_writable_dir(args.out)
    result = simulate(scenario, threads=args.threads)
    _write_atomic(args.out, _designer_csv(result))
    return 0


def _cmd_figures(args) -> int:
    outdir: Path = args.outdir
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {outdir}: {exc}") from exc
    _check_writable_dir(outdir)
    threads = args.threads

    _write_atomic(outdir / "fig2_left.csv", _sweep_csv(run_sweep(default_fig2_lines_grid(), threads)))
    _write_atomic(
        outdir / "fig2_right.csv", _sweep_csv(run_sweep(default_fig2_contour_grid(), threads))
    )
    for mu, name in ((-1.0, "fig3_mu-1.csv"), (0.0, "fig3_mu0.csv"), (1.0, "fig3_mu1.csv")):
        _write_atomic(outdir / name, _sweep_csv(run_sweep(default_fig3_grid(mu), threads)))
    _write_atomic(
        outdir / "fig4_left.csv", _designer_csv(simulate(fig4_scenario(n_actions=1), threads))
    )
    parts = [
        _designer_csv(simulate(fig4_scenario(n_actions=n), threads), n_actions=n)
        for n in (1, 4, 16)
    ]
    header, _, first_body = parts[0].partition("\n")
    body = first_body + "".join(p.partition("\n")[2] for p in parts[1:])
    _write_atomic(outdir / "fig4_right.csv", header + "\n" + body)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="offswitch",
        description="Off-switch game incentives: spot values, sweeps, and the designer experiment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="print one incentive report as JSON")
    p.add_argument("--mu", type=float, required=True, help="belief mean")
    p.add_argument("--sigma", type=float, required=True, help="belief std (>= 0)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rational", action="store_true", help="rational step human")
    group.add_argument("--beta", type=float, help="Boltzmann human with this temperature")
    group.add_argument("--constant", type=float, metavar="P", help="constant-p human")
    p.add_argument("--mc-check", type=int, metavar="N", help="cross-check with N Monte-Carlo samples")
    p.add_argument("--seed", type=int, default=0, help="Monte-Carlo seed (default 0)")
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("sweep", help="write a CSV of incentive values over a grid")
    p.add_argument("--mu", type=_axis_spec, required=True, help="start:stop:count[:lin|:log]")
    p.add_argument("--sigma", type=_axis_spec, required=True, help="start:stop:count[:lin|:log]")
    p.add_argument("--beta", type=_axis_spec, help="temperature axis (boltzmann only)")
    p.add_argument("--policy", choices=("rational", "boltzmann"), required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("designer", help="run the designer experiment from a JSON config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_designer)

    p = sub.add_parser("figures", help="write the seven standard CSV artifacts")
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_figures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return 2
    except DegenerateInputError as exc:
        print(f"error: degenerate input: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
