"""Experiment runner.

Subcommands: ``fig1``, ``fig2``, ``sweep-beta``, ``check``.  Configuration
comes from compiled-in presets and/or a flat-key TOML file; the flags
``--out``, ``--grid-n``, ``--steps`` and ``--p`` override file values.
Every run writes deterministic CSV files (17 significant digits, no
timestamps), a ``summary.json`` and the fully resolved ``config.toml``.

Exit codes: 0 success, 2 config error, 3 numerical/stability error,
4 inequality-check failure.  ``WIGNER_QSL_THREADS`` sets the number of
worker threads used for per-time-slice metric evaluation.
"""

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .dynamics import QbmParams
from .errors import CheckViolationError, ConfigError, ToolkitError
from .experiments import run_beta_sweep, run_fig1_experiment, run_fig2_experiment
from .metrics import continuity_check
from .qsl import QslReport, geometric_speed_checks, series_rates
from .states import GaussianSpec, OscillatorParams

FIG1_HEADER = (
    "t,v_qsl_p1,v_qsl_w_p1,v_qsl_p1_norm,v_qsl_w_p1_norm,"
    "l1_dist,wasserstein1_dist,fidelity,bures_angle"
)
FIG2_HEADER = "t,v_qsl_w_p1,wasserstein1_dist,norm_check"
SWEEP_HEADER = "beta,tau_qsl_w,mean_speed,final_distance"


@dataclass
class RunConfig:
    """Flat-key run configuration; unknown keys are rejected at load time."""

    experiment: str = "fig1"
    tau: float = 1.0
    omega0: float = 1.0
    omega1: float = 2.0
    mass: float = 1.0
    hbar: float = 1.0
    gamma: float = 2.0
    beta: float = 1.0
    mu_x: float = 2.0
    sigma_x: float = 0.5
    mu_p: float = 0.0
    sigma_p: float = 0.5
    x_half: float = 10.0
    p_half: float = 10.0
    grid_n: int = 256
    steps: int = 400
    snapshots: int = 800
    dt: float | None = None
    p_values: list = field(default_factory=lambda: ["1", "2", "inf"])
    betas: list = field(default_factory=lambda: [1e-3, 1e-2, 1e-1, 1.0, 10.0])
    sweep_min_half: float = 12.0
    sweep_cap_half: float = 32.0
    sweep_dx_strict: float = 0.25
    sweep_dx_monitor: float = 0.5
    sweep_snapshots: int = 100
    out_dir: str = "out"
    prefix: str = ""

    def validate(self) -> "RunConfig":
        if self.experiment not in ("fig1", "fig2", "beta-sweep", "custom"):
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.tau > 0:
            raise ConfigError("t_final must be positive")
        for name in ("omega0", "omega1", "mass", "hbar", "beta", "sigma_x", "sigma_p"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be nonnegative")
        if self.grid_n < 8:
            raise ConfigError("grid_n must be at least 8")
        if self.steps < 4:
            raise ConfigError("steps must be at least 4")
        if not (self.x_half > 0 and self.p_half > 0):
            raise ConfigError("domain half-widths must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive when given")
        self.parsed_p()  # raises on bad entries
        if not self.betas or any(b <= 0 for b in self.betas):
            raise ConfigError("betas must be a nonempty list of positive values")
        return self

    def parsed_p(self) -> tuple[float, ...]:
        out = []
        for entry in self.p_values:
            if isinstance(entry, str) and entry.strip().lower() in ("inf", "infinity"):
                out.append(math.inf)
                continue
            try:
                val = float(entry)
            except (TypeError, ValueError):
                raise ConfigError(f"bad p value {entry!r}") from None
            if val < 1:
                raise ConfigError(f"p must be >= 1, got {val}")
            out.append(val)
        if not out:
            raise ConfigError("p_values must not be empty")
        return tuple(out)


PRESETS: dict[str, dict] = {
    "fig1-tau0.1": {"experiment": "fig1", "tau": 0.1},
    "fig1-tau1": {"experiment": "fig1", "tau": 1.0},
    "fig1-tau5": {"experiment": "fig1", "tau": 5.0},
    "fig1-tau10": {"experiment": "fig1", "tau": 10.0},
    "fig2": {"experiment": "fig2", "tau": 2.0},
    "beta-sweep": {"experiment": "beta-sweep", "tau": 2.0},
}


def load_config(
    preset: str | None = None,
    config_path: str | None = None,
    overrides: dict | None = None,
) -> RunConfig:
    """Merge preset < config file < explicit overrides, then validate."""
    known = {f.name for f in fields(RunConfig)}
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        merged.update(PRESETS[preset])
    if config_path is not None:
        try:
            with open(config_path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file is not valid TOML: {exc}") from None
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(data)
    for key, val in (overrides or {}).items():
        if val is not None:
            merged.update({key: val})
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        cfg = RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            return f'"{value!r}"'
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize config value {value!r}")


def write_config_echo(cfg: RunConfig, out_dir: str) -> str:
    path = os.path.join(out_dir, "config.toml")
    lines = []
    for f in fields(RunConfig):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        lines.append(f"{f.name} = {_toml_value(value)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _write_rows(path: str, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_fig1_csv(report: QslReport, path: str) -> None:
    v1 = report.series["v_qsl_p1"].values
    w1 = report.series["v_qsl_w_p1"].values
    if "v_qsl_p1_norm" in report.series:
        v1n = report.series["v_qsl_p1_norm"].values
        w1n = report.series["v_qsl_w_p1_norm"].values
    else:  # stationary run: normalized shape is meaningless noise
        v1n = np.zeros_like(v1)
        w1n = np.zeros_like(w1)
    rows = zip(
        report.times,
        v1,
        w1,
        v1n,
        w1n,
        report.distances["l_p1"],
        report.distances["D_p1"],
        report.fidelity,
        report.bures_angles,
    )
    _write_rows(path, FIG1_HEADER, rows)


def write_fig2_csv(report: QslReport, path: str) -> None:
    rows = zip(
        report.times,
        report.series["v_qsl_w_p1"].values,
        report.distances["D_p1"],
        report.norm_check,
    )
    _write_rows(path, FIG2_HEADER, rows)


def write_sweep_csv(sweep, path: str) -> None:
    rows = [
        (r.beta, r.tau_qsl_w, r.mean_speed, r.final_distance) for r in sweep.rows
    ]
    _write_rows(path, SWEEP_HEADER, rows)


def _checks_dict(report: QslReport) -> dict | None:
    if report.checks is None:
        return None
    return {
        "ok": report.checks.ok,
        "n_checks": report.checks.n_checks,
        "violations": [asdict(v) for v in report.checks.violations],
    }


def write_summary(out_dir: str, payload: dict) -> str:
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return path


def _threads() -> int:
    raw = os.environ.get("WIGNER_QSL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"WIGNER_QSL_THREADS must be an integer, got {raw!r}") from None


def run_fig1(cfg: RunConfig) -> int:
    """Driven-oscillator experiment: one CSV for the configured tau."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    params = OscillatorParams(
        M=cfg.mass, hbar=cfg.hbar, omega0=cfg.omega0, omega1=cfg.omega1
    )
    report = run_fig1_experiment(
        params,
        cfg.tau,
        x_half=cfg.x_half,
        grid_n=cfg.grid_n,
        steps=cfg.steps,
        p_values=cfg.parsed_p(),
        threads=_threads(),
    )
    csv_path = os.path.join(cfg.out_dir, f"{cfg.prefix}fig1_tau{cfg.tau:g}.csv")
    write_fig1_csv(report, csv_path)
    write_config_echo(cfg, cfg.out_dir)
    write_summary(
        cfg.out_dir,
        {
            "experiment": cfg.experiment,
            "tau": cfg.tau,
            "csv": os.path.basename(csv_path),
            "stationary": report.stationary,
            "equivalence_max_dev": report.equivalence_max_dev,
            "wasserstein_monotone_in_p": report.extras.get("wasserstein_monotone_in_p"),
            "checks": _checks_dict(report),
        },
    )
    if not report.checks.ok:
        print(report.checks.describe(), file=sys.stderr)
        return 4
    return 0


def run_fig2(cfg: RunConfig) -> int:
    """Damped-oscillator experiment: phase-space pipeline only."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    qbm = QbmParams(
        gamma=cfg.gamma, beta=cfg.beta, M=cfg.mass, hbar=cfg.hbar, omega0=cfg.omega0
    )
    spec = GaussianSpec(
        mu_x=cfg.mu_x, sigma_x=cfg.sigma_x, mu_p=cfg.mu_p, sigma_p=cfg.sigma_p
    )
    report = run_fig2_experiment(
        qbm,
        spec,
        cfg.tau,
        x_half=cfg.x_half,
        p_half=cfg.p_half,
        grid_n=cfg.grid_n,
        dt=cfg.dt,
        snapshots=cfg.snapshots,
        p_values=cfg.parsed_p(),
    )
    csv_path = os.path.join(cfg.out_dir, f"{cfg.prefix}fig2_run.csv")
    write_fig2_csv(report, csv_path)
    write_config_echo(cfg, cfg.out_dir)
    write_summary(
        cfg.out_dir,
        {
            "experiment": "fig2",
            "tau": cfg.tau,
            "csv": os.path.basename(csv_path),
            "tau_qsl_w": report.tau_qsl_w,
            "max_norm_drift": float(np.abs(report.norm_check - 1.0).max()),
            "stationary": report.stationary,
            "checks": _checks_dict(report),
        },
    )
    if not report.checks.ok:
        print(report.checks.describe(), file=sys.stderr)
        return 4
    return 0


def run_sweep(cfg: RunConfig) -> int:
    """Inverse-temperature sweep of the phase-space speed-limit time."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    spec = GaussianSpec(
        mu_x=cfg.mu_x, sigma_x=cfg.sigma_x, mu_p=cfg.mu_p, sigma_p=cfg.sigma_p
    )
    sweep = run_beta_sweep(
        gamma=cfg.gamma,
        betas=cfg.betas,
        spec=spec,
        tau=cfg.tau,
        M=cfg.mass,
        hbar=cfg.hbar,
        omega0=cfg.omega0,
        dx_strict=cfg.sweep_dx_strict,
        dx_monitor=cfg.sweep_dx_monitor,
        min_half=cfg.sweep_min_half,
        cap_half=cfg.sweep_cap_half,
        snapshots=cfg.sweep_snapshots,
    )
    csv_path = os.path.join(cfg.out_dir, f"{cfg.prefix}beta_sweep.csv")
    write_sweep_csv(sweep, csv_path)
    write_config_echo(cfg, cfg.out_dir)
    write_summary(
        cfg.out_dir,
        {
            "experiment": "beta-sweep",
            "csv": os.path.basename(csv_path),
            "monotone_decreasing_with_temperature": sweep.monotone_decreasing_with_temperature,
            "rows": [asdict(r) for r in sweep.rows],
        },
    )
    for r in sweep.rows:
        if r.refused:
            print(f"beta={r.beta:g}: refused ({r.reason})", file=sys.stderr)
    return 0


def _load_csv_columns(path: str) -> dict[str, np.ndarray]:
    if not os.path.exists(path):
        raise ConfigError(f"missing CSV file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.array(rows)
    return {name: data[:, i] for i, name in enumerate(header)}


def check_output_dir(out_dir: str) -> int:
    """Re-run the inequality suite on the CSVs of an existing output directory."""
    if not os.path.isdir(out_dir):
        raise ConfigError(f"not a directory: {out_dir}")
    names = sorted(os.listdir(out_dir))
    fig1_files = [n for n in names if n.startswith("fig1") and n.endswith(".csv")]
    fig2_files = [n for n in names if n.startswith("fig2") and n.endswith(".csv")]
    if not fig1_files and not fig2_files:
        raise ConfigError(f"no fig1/fig2 CSV files found in {out_dir}")
    failures = []
    for name in fig1_files:
        cols = _load_csv_columns(os.path.join(out_dir, name))
        report = geometric_speed_checks(
            cols["t"],
            operator_distances={1.0: cols["l1_dist"]},
            operator_speeds={1.0: cols["v_qsl_p1"]},
            phase_distances={1.0: cols["wasserstein1_dist"]},
            phase_speeds={1.0: cols["v_qsl_w_p1"]},
            overlap_rates=np.abs(
                series_rates(cols["fidelity"], cols["t"][1] - cols["t"][0])
            ),
            bures_angles=cols["bures_angle"],
        )
        if not report.ok:
            failures.append(f"{name}:\n{report.describe()}")
        bad_nodes = [
            i
            for i in range(len(cols["t"]))
            if not continuity_check(cols["fidelity"][i], cols["l1_dist"][i])
        ]
        if bad_nodes:
            failures.append(f"{name}: continuity bound violated at rows {bad_nodes[:8]}")
        print(f"checked {name}: {report.n_checks} inequality checks")
    for name in fig2_files:
        cols = _load_csv_columns(os.path.join(out_dir, name))
        report = geometric_speed_checks(
            cols["t"],
            phase_distances={1.0: cols["wasserstein1_dist"]},
            phase_speeds={1.0: cols["v_qsl_w_p1"]},
        )
        if not report.ok:
            failures.append(f"{name}:\n{report.describe()}")
        print(f"checked {name}: {report.n_checks} inequality checks")
    if failures:
        raise CheckViolationError("\n".join(failures))
    return 0


def _parse_p_flag(raw: str | None) -> list | None:
    if raw is None:
        return None
    return [token.strip() for token in raw.split(",") if token.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigner-qsl",
        description="Quantum speed limits in operator space and Wigner phase space",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fig1", "driven-oscillator speed comparison run"),
        ("fig2", "damped-oscillator phase-space run"),
        ("sweep-beta", "speed-limit time across inverse temperatures"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--preset", help="compiled-in preset name")
        cmd.add_argument("--config", help="flat-key TOML config file")
        cmd.add_argument("--out", help="output directory")
        cmd.add_argument("--grid-n", type=int, help="grid points per axis")
        cmd.add_argument("--steps", type=int, help="time steps (fig1)")
        cmd.add_argument("--p", help="comma list of norm orders, e.g. 1,2,inf")
    chk = sub.add_parser("check", help="re-run the inequality suite on CSV output")
    chk.add_argument("out_dir")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return check_output_dir(args.out_dir)
        overrides = {
            "out_dir": args.out,
            "grid_n": args.grid_n,
            "steps": args.steps,
            "p_values": _parse_p_flag(args.p),
        }
        default_preset = {"fig1": "fig1-tau1", "fig2": "fig2", "sweep-beta": "beta-sweep"}
        preset = args.preset or (None if args.config else default_preset[args.command])
        cfg = load_config(preset=preset, config_path=args.config, overrides=overrides)
        expected = {"fig1": ("fig1", "custom"), "fig2": ("fig2",), "sweep-beta": ("beta-sweep",)}
        if cfg.experiment not in expected[args.command]:
            raise ConfigError(
                f"config is for experiment {cfg.experiment!r}, not {args.command!r}"
            )
        runner = {"fig1": run_fig1, "custom": run_fig1, "fig2": run_fig2, "beta-sweep": run_sweep}
        return runner[cfg.experiment](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CheckViolationError as exc:
        print(f"inequality-check failure: {exc}", file=sys.stderr)
        return 4
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
