"""Command-line entry point: ``qsync <command> [flags]``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path


from . import export
from .config import COMMANDS, RunConfig, load_config, panel_of, parse_config
from .errors import ConfigError, StepTooLarge
from .oracle import kernel_vs_analytic, verify_panel
from .phase_space import SphereGrid
from .sweep import bloch_series, husimi_snapshots, time_series_S, tongue_delta_coupling, tongue_delta_lambda

# flag dest -> config key
_FLAG_KEYS = {
    "n_qubits": "n_qubits", "coupling": "coupling", "spectral_width": "spectral_width",
    "detuning": "detuning", "t_snapshot": "t_snapshot", "phi": "phi", "times": "snapshot_times",
    "theta_count": "theta_count", "phi_count": "phi_count", "rho11": "rho11_0", "rho10": "rho10_0",
    "output": "output", "format": "format", "dt": "dt", "tolerance": "tolerance",
    "t_max": "oracle_t_max", "panel": "panel",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsync",
        description="Synchronization observables of a qubit sharing a Lorentzian reservoir "
                    "with auxiliary qubits (rates in units of gamma_0, times as gamma_0 t).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("-N", "--n-qubits", dest="n_qubits", help="qubit count(s), comma separated")
        p.add_argument("--coupling", "--gamma", dest="coupling")
        p.add_argument("--spectral-width", "--lambda", dest="spectral_width")
        p.add_argument("--detuning", "--delta", dest="detuning", help="detuning(s), comma separated")
        p.add_argument("--axis", action="append", default=None,
                       help="axis spec name:min:max:count[:linear|log]; repeat for two axes")
        p.add_argument("-o", "--output")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        p.add_argument("--rho11", help="initial excited population")
        p.add_argument("--rho10", help="initial coherence (complex, e.g. 0.5 or 0.3+0.1j)")
        if name.startswith("tongue"):
            p.add_argument("--t-snapshot", dest="t_snapshot")
        if name == "sync":
            p.add_argument("--phi")
        if name == "husimi":
            p.add_argument("--times", help="snapshot times, comma separated")
            p.add_argument("--theta-count", dest="theta_count")
            p.add_argument("--phi-count", dest="phi_count")
        if name == "verify":
            p.add_argument("--dt")
            p.add_argument("--tolerance")
            p.add_argument("--t-max", dest="t_max")
            p.add_argument("--panel", help="entries N,lambda,delta[,gamma] separated by ';'")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {"command": args.command}
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = str(value)
    if args.axis is not None:
        overrides["axes"] = "; ".join(args.axis)
    if args.config:
        return load_config(args.config, overrides)
    return parse_config("", overrides)


def _variant(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}_{tag}{path.suffix}")


def _tag(cfg) -> str:
    return f"N{cfg.n_qubits}_D{cfg.detuning:g}"


def _emit(obj, path: Path, run: RunConfig, kind: str, title: str) -> list[Path]:
    echo = run.echo()
    if run.format == "csv":
        return [export.emit_csv(obj, path, echo)]
    if run.format == "json":
        return [export.emit_json(obj, path, echo)]
    if kind == "heatmap":
        return [export.emit_svg_heatmap(obj, path, title)]
    return [export.emit_svg_lines(obj, path, title)]


def run_command(run: RunConfig) -> list[Path]:
    """Execute a non-verify command and return the files written."""
    base_path = run.output_path()
    ensembles = run.ensembles()
    written = []
    for cfg in ensembles:
        path = base_path if len(ensembles) == 1 else _variant(base_path, _tag(cfg))
        title = f"N={cfg.n_qubits}, λ={cfg.spectral_width:g}, Δ={cfg.detuning:g}"
        if run.command in ("tongue-gamma", "tongue-lambda"):
            axes = {a.name: a for a in run.resolved_axes()}
            if run.command == "tongue-gamma":
                result = tongue_delta_coupling(cfg, axes["delta"], axes["coupling"], run.t_snapshot, run.init)
                title = f"S_m at γ₀t={run.t_snapshot:g}, N={cfg.n_qubits}, λ={cfg.spectral_width:g}"
            else:
                result = tongue_delta_lambda(cfg, axes["delta"], axes["lambda"], run.t_snapshot, run.init)
                title = f"S_m at γ₀t={run.t_snapshot:g}, N={cfg.n_qubits}, γ={cfg.coupling:g}"
            written += _emit(result, path, run, "heatmap", title)
        elif run.command == "sync":
            result = time_series_S(cfg, run.resolved_axes()[0], run.phi, run.init)
            written += _emit(result, path, run, "lines", f"S(φ={run.phi:g}, t), " + title)
        elif run.command == "bloch":
            result = bloch_series(cfg, run.resolved_axes()[0], run.init)
            written += _emit(result, path, run, "lines", "Bloch trajectory, " + title)
        elif run.command == "husimi":
            grid = SphereGrid.uniform(run.theta_count, run.phi_count)
            surfaces = husimi_snapshots(cfg, run.snapshot_times, grid, run.init)
            if run.format == "svg":
                for s in surfaces:
                    written += _emit(s, _variant(path, f"t{s.time:g}"), run, "heatmap",
                                     f"Q at γ₀t={s.time:g}, " + title)
            else:
                written += _emit(surfaces, path, run, "heatmap", title)
        else:
            raise ConfigError(f"command: {run.command!r} is not a data command")
    return written


def verify_report(rows) -> str:
    lines = [f"{'N':>3} {'gamma':>8} {'lambda':>8} {'delta':>8} {'max_error':>12} {'tolerance':>10}  status"]
    for r in rows:
        c = r.config
        lines.append(f"{c.n_qubits:>3} {c.coupling:>8.4g} {c.spectral_width:>8.4g} {c.detuning:>8.4g} "
                     f"{r.max_error:>12.3e} {r.tolerance:>10.1e}  {r.status}")
        if r.message:
            lines.append(f"    {r.message}")
    passed = sum(r.passed for r in rows)
    lines.append(f"{passed}/{len(rows)} configurations within tolerance")
    return "\n".join(lines) + "\n"


def verify_command(panel, dt: float = 1e-3, tolerance: float = 1e-5, t_max: float = 50.0) -> tuple[int, str]:
    """Run the oracle panel; exit status 0 iff every config passes."""
    rows = verify_panel(panel, dt=dt, tolerance=tolerance, t_max=t_max)
    return (0 if all(r.passed for r in rows) else 1), verify_report(rows)


def _dump_verify(run: RunConfig, panel, path: Path) -> Path:
    # every 100th step keeps the dump small at the default dt
    records = []
    for k, cfg in enumerate(panel):
        try:
            t, oracle, analytic = kernel_vs_analytic(cfg, run.oracle_t_max, run.dt, sample_every=100)
        except StepTooLarge:
            continue
        records.append((k, cfg, t, oracle, analytic))
    if run.format == "json":
        doc = [{"index": k, "config": {"n_qubits": c.n_qubits, "coupling": c.coupling,
                                       "spectral_width": c.spectral_width, "detuning": c.detuning},
                "t": t.tolist(), "h_analytic": [[z.real, z.imag] for z in a],
                "h_oracle": [[z.real, z.imag] for z in o]} for k, c, t, o, a in records]
        return export.emit_json(doc, path, run.echo())
    lines = ["# qsync verify dump", *(f"# config: {l}" for l in run.echo().splitlines()),
             "index,t,re_analytic,im_analytic,re_oracle,im_oracle"]
    for k, _, t, o, a in records:
        for ti, oi, ai in zip(t, o, a):
            lines.append(f"{k},{export.fmt(ti)},{export.fmt(ai.real)},{export.fmt(ai.imag)},"
                         f"{export.fmt(oi.real)},{export.fmt(oi.imag)}")
    return export._write(path, "\n".join(lines) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = config_from_args(args)
    except ConfigError as exc:
        print(f"qsync: error: {exc}", file=sys.stderr)
        return 2
    try:
        if run.command == "verify":
            panel = panel_of(run)
            code, report = verify_command(panel, run.dt, run.tolerance, run.oracle_t_max)
            sys.stdout.write(report)
            if run.output:
                _dump_verify(run, panel, Path(run.output))
            return code
        for path in run_command(run):
            print(path)
    except (OSError, ValueError) as exc:
        print(f"qsync: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
