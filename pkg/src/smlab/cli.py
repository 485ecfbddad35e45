"""Command-line front end.

Subcommands: quantities, simulate, sweep, bounds, verify. Parameters come
from an optional JSON config file plus flag overrides (flags win). Outputs
are deterministic: the same config and seed produce byte-identical CSV/JSON,
and every simulation re-validates its own trajectory before exiting.

Exit codes: 0 success, 1 validation failure, 2 usage/config error.
The SMLAB_TIE_TOL environment variable overrides the revenue tie tolerance.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

from . import analysis, bounds, engine
from .demand import DemandCurve, DemandError, load_curve, make_linear, make_q_epsilon

PROG = "smlab"


class UsageError(Exception):
    """Config or flag problem; maps to exit code 2."""


def _sig12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _parse_grid_spec(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--delta-grid expects A:B:N, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--delta-grid expects numeric A:B:N, got {text!r}") from None
    return _linspace(start, stop, count)


def _linspace(start: float, stop: float, count: int) -> list[float]:
    if count < 1:
        raise UsageError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return [start]
    return [start + i * (stop - start) / (count - 1) for i in range(count)]


def _load_config_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return cfg


class RunSettings:
    """Resolved settings for one CLI invocation."""

    def __init__(self, args):
        cfg = _load_config_file(args.config) if args.config else {}

        demand_cfg = dict(cfg.get("demand", {}))
        if args.demand:
            demand_cfg["family"] = args.demand
        if args.epsilon is not None:
            demand_cfg["epsilon"] = args.epsilon
        if args.c is not None:
            demand_cfg["c"] = args.c
        if args.m is not None:
            demand_cfg["m"] = args.m
        self.curve = self._build_curve(demand_cfg)

        self.supply = float(self._pick(args.supply, cfg.get("s"), 1.0))
        if self.supply <= 0:
            raise UsageError(f"supply must be positive, got {self.supply}")

        delta_cfg = cfg.get("delta")
        self.delta = None
        self.delta_grid = None
        if isinstance(delta_cfg, dict):
            self.delta_grid = _linspace(
                float(delta_cfg.get("start", 0.0)),
                float(delta_cfg.get("stop", 1.0)),
                int(delta_cfg.get("count", 2)),
            )
        elif delta_cfg is not None:
            self.delta = float(delta_cfg)
        if args.delta is not None and args.delta_grid is not None:
            raise UsageError("give only one of --delta and --delta-grid")
        if args.delta is not None:
            self.delta, self.delta_grid = float(args.delta), None
        elif args.delta_grid is not None:
            self.delta_grid, self.delta = _parse_grid_spec(args.delta_grid), None
        if self.delta is not None and not 0.0 <= self.delta <= 1.0:
            raise UsageError(f"delta must be in [0, 1], got {self.delta}")
        if self.delta_grid is not None and not all(0.0 <= d <= 1.0 for d in self.delta_grid):
            raise UsageError("delta grid values must be in [0, 1]")

        self.steps = int(self._pick(args.steps, cfg.get("steps"), 100))
        if self.steps < 1:
            raise UsageError(f"steps must be >= 1, got {self.steps}")
        self.seed = int(self._pick(args.seed, cfg.get("seed"), 0))
        self.burn_in_fraction = float(cfg.get("burn_in_fraction", 0.5))
        if not 0.0 <= self.burn_in_fraction < 1.0:
            raise UsageError(
                f"burn_in_fraction must be in [0, 1), got {self.burn_in_fraction}"
            )

        out_cfg = cfg.get("output", {})
        self.out = args.out if args.out is not None else out_cfg.get("path")
        self.format = args.format if args.format is not None else out_cfg.get("format", "csv")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format}")
        self.plot = bool(args.plot)
        if self.plot and not self.out:
            raise UsageError("--plot requires --out to name the SVG target")

        self.tie_tol = engine.DEFAULT_TIE_TOL
        env_tol = os.environ.get("SMLAB_TIE_TOL")
        if env_tol is not None:
            try:
                self.tie_tol = float(env_tol)
            except ValueError:
                raise UsageError(f"SMLAB_TIE_TOL must be a float, got {env_tol!r}") from None
            if self.tie_tol <= 0:
                raise UsageError(f"SMLAB_TIE_TOL must be positive, got {self.tie_tol}")

    @staticmethod
    def _pick(flag, cfg_value, default):
        if flag is not None:
            return flag
        if cfg_value is not None:
            return cfg_value
        return default

    @staticmethod
    def _build_curve(demand_cfg) -> DemandCurve:
        family = demand_cfg.get("family", "linear")
        try:
            if family == "linear":
                return make_linear(float(demand_cfg.get("c", 1.0)), float(demand_cfg.get("m", 1.0)))
            if family == "q_epsilon":
                if "epsilon" not in demand_cfg:
                    raise UsageError("q_epsilon demand needs --epsilon")
                return make_q_epsilon(float(demand_cfg["epsilon"]))
            if family == "q_zero":
                return make_q_epsilon(0.0)
            if family == "custom":
                path = demand_cfg.get("file")
                if not path:
                    raise UsageError("custom demand needs a 'file' entry in the config")
                return load_curve(path)
        except DemandError as exc:
            raise UsageError(str(exc)) from None
        raise UsageError(f"unknown demand family {family!r}")

    def scalar_delta(self) -> float:
        if self.delta is None:
            raise UsageError("this command needs a scalar --delta")
        return self.delta

    def grid(self) -> list[float]:
        if self.delta_grid is None:
            raise UsageError("this command needs --delta-grid A:B:N (or a grid in the config)")
        return self.delta_grid

    def sim_config(self, delta: float) -> engine.SimConfig:
        return engine.SimConfig(self.curve, self.supply, delta, self.steps, self.tie_tol)

    def emit(self, text: str) -> None:
        if self.out:
            with open(self.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _svg_polyline(xs, ys, xlabel: str, ylabel: str, title: str) -> str:
    """Minimal standalone SVG: one polyline, axes, and min/max tick labels."""
    width, height = 720, 440
    ml, mr, mt, mb = 80, 20, 36, 56
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    span_x, span_y = x1 - x0, y1 - y0

    def px(x):
        return ml + (x - x0) / span_x * (width - ml - mr)

    def py(y):
        return height - mb - (y - y0) / span_y * (height - mt - mb)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>\n'
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" stroke="black"/>\n'
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>\n'
        f'<text x="{ml}" y="{height - mb + 18}" text-anchor="middle" font-size="11">{x0:.6g}</text>\n'
        f'<text x="{width - mr}" y="{height - mb + 18}" text-anchor="middle" font-size="11">{x1:.6g}</text>\n'
        f'<text x="{ml - 8}" y="{height - mb}" text-anchor="end" font-size="11">{y0:.6g}</text>\n'
        f'<text x="{ml - 8}" y="{mt + 10}" text-anchor="end" font-size="11">{y1:.6g}</text>\n'
        f'<text x="{(ml + width - mr) / 2:.0f}" y="{height - 14}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>\n'
        f'<text x="18" y="{(mt + height - mb) / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {(mt + height - mb) / 2:.0f})">{ylabel}</text>\n'
        f'<polyline fill="none" stroke="#1f6fb0" stroke-width="1.5" points="{points}"/>\n'
        "</svg>\n"
    )


def _write_plot(settings: RunSettings, xs, ys, xlabel, ylabel, title) -> None:
    path = settings.out + ".svg"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_svg_polyline(xs, ys, xlabel, ylabel, title))


def cmd_quantities(settings: RunSettings) -> int:
    kq = bounds.key_quantities(settings.curve, settings.supply, settings.tie_tol)
    payload = {
        "p_mon": kq.p_mon,
        "q_mon": kq.q_mon,
        "rev_mon": kq.rev_mon,
        "p_ser": kq.p_ser,
        "q_ser": kq.q_ser,
        "p_bar_ser": kq.p_bar_ser,
        "q_bar_ser": kq.q_bar_ser,
        "delta_bar_ser": kq.delta_bar_ser,
        "supply": settings.supply,
        "curve_strict": settings.curve.strict,
    }
    if not settings.curve.strict:
        # weakly decreasing curve: the effective price floor moves to the
        # right end of the flat demand region at the serial quantity
        payload["p_bar_ser_adjusted"] = settings.curve.inverse_max_price(kq.q_ser)
    payload = {k: _sig12(v) for k, v in payload.items()}
    if settings.format == "json":
        settings.emit(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [f"{k},{payload[k]}" for k in sorted(payload)]
        settings.emit("\n".join(lines) + "\n")
    return 0


def _trajectory_json(records) -> str:
    rows = [
        {
            "t": r.t,
            "price": r.price,
            "quantity": r.quantity,
            "revenue": r.revenue,
            "jumped": r.jumped,
            "segments": r.segment_count,
        }
        for r in records
    ]
    return json.dumps(rows, indent=2) + "\n"


def cmd_simulate(settings: RunSettings) -> int:
    config = settings.sim_config(settings.scalar_delta())
    records, states = engine.run_with_states(config)
    kq = bounds.key_quantities(settings.curve, settings.supply, settings.tie_tol)
    report = analysis.validate(records, states, kq, settings.supply)

    if settings.format == "json":
        settings.emit(_trajectory_json(records))
    else:
        buf = io.StringIO()
        engine.write_trajectory_csv(records, buf)
        settings.emit(buf.getvalue())
    if settings.plot:
        _write_plot(
            settings,
            [r.t for r in records],
            [r.price for r in records],
            "round",
            "price",
            f"price path (delta={config.delta:g})",
        )
    if not report.ok:
        print(
            f"{PROG}: validation failed: "
            f"{len(report.band_violations)} band, "
            f"{len(report.monotonicity_violations)} monotonicity, "
            f"{len(report.certificate_violations)} certificate violations",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_sweep(settings: RunSettings) -> int:
    rows = analysis.delta_sweep(
        settings.curve,
        settings.supply,
        settings.grid(),
        settings.steps,
        settings.burn_in_fraction,
        settings.tie_tol,
    )
    if settings.format == "json":
        payload = [
            {
                "delta": r.delta,
                "p_map_hat": r.p_map_hat,
                "recurrence_gap": r.recurrence_gap,
                "collapsed": r.collapsed,
                "monopolist_visits": r.monopolist_visits,
            }
            for r in rows
        ]
        settings.emit(json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        analysis.write_sweep_csv(rows, buf)
        settings.emit(buf.getvalue())
    if settings.plot:
        _write_plot(
            settings,
            [r.delta for r in rows],
            [r.p_map_hat for r in rows],
            "delta",
            "tail-minimum price",
            "admission price estimate vs patience",
        )
    return 0


def cmd_bounds(settings: RunSettings) -> int:
    report = bounds.bound_report(settings.curve, settings.supply, settings.scalar_delta())
    settings.emit(report.to_json() + "\n")
    return 0


def cmd_verify(settings: RunSettings) -> int:
    delta = settings.scalar_delta()
    config = settings.sim_config(delta)
    records, states = engine.run_with_states(config)
    kq = bounds.key_quantities(settings.curve, settings.supply, settings.tie_tol)
    report = analysis.validate(records, states, kq, settings.supply)
    law_checks = analysis.demand_law_checks(states, settings.curve, delta, 1000, settings.seed)
    law_tol = 1e-9

    cert_values = [v for _, v in report.certificate_violations]
    checks = [
        {
            "name": "price_band",
            "violations": len(report.band_violations),
            "max_residual": max(
                [
                    max(kq.p_ser - r.price, r.price - kq.p_mon)
                    for r in records
                ]
            ),
        },
        {
            "name": "monotone_or_jump",
            "violations": len(report.monotonicity_violations),
        },
        {
            "name": "revenue_certificate",
            "violations": len(report.certificate_violations),
            "max_residual": -min(cert_values) if cert_values else 0.0,
        },
    ]
    for check_id, worst in law_checks:
        checks.append(
            {"name": check_id, "max_violation": worst, "tolerance": law_tol}
        )
    passed = report.ok and all(worst <= law_tol for _, worst in law_checks)
    payload = {
        "checks": checks,
        "collapsed": report.collapsed,
        "monopolist_visits": len(report.monopolist_visits),
        "passed": passed,
    }
    settings.emit(json.dumps(payload, indent=2) + "\n")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Serial-monopoly pricing dynamics: simulate, bound, and verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("quantities", "print the analytic quantities for a curve and supply"),
        ("simulate", "run the price dynamic and emit the trajectory"),
        ("sweep", "run one simulation per delta on a grid and summarize"),
        ("bounds", "emit the admission-price bound report as JSON"),
        ("verify", "run and check every price-path invariant"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--demand", choices=["linear", "q_epsilon", "q_zero", "custom"])
        p.add_argument("--epsilon", type=float, help="q_epsilon slope parameter")
        p.add_argument("--c", type=float, help="linear demand intercept")
        p.add_argument("--m", type=float, help="linear demand slope")
        p.add_argument("--supply", type=float, help="max transactions per round")
        p.add_argument("--delta", type=float, help="carry-over fraction in [0, 1]")
        p.add_argument("--delta-grid", help="A:B:N inclusive grid of deltas")
        p.add_argument("--steps", type=int, help="simulation horizon")
        p.add_argument("--seed", type=int, help="seed for sampled checks")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--plot", action="store_true", help="also write <out>.svg")
    return parser


COMMANDS = {
    "quantities": cmd_quantities,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = RunSettings(args)
        return COMMANDS[args.command](settings)
    except (UsageError, bounds.NotApplicableError, DemandError, engine.EngineError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
