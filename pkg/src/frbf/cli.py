"""Experiment runner: alpha sweeps for interpolation and collocation,
plus kernel sampling tables.

Configuration is a flat JSON object; every key can be overridden from the
command line.  Output is CSV (columns alpha, rmse, cond, status plus a
config hash for provenance) or JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .collocate import (
    CollocationProblem,
    RadialOperator,
    operator_orders,
    solve_collocation,
)
from .errors import FrbfError
from .interpolate import (
    Interpolant,
    TailSpec,
    assemble_interpolation,
    evaluate_interpolant,
    rmse,
    solve_system,
    weights_to_csv,
)
from .kernels import (
    KernelSpec,
    cpd_order,
    make_kernel,
    sweep_cpd_order,
    validate_restrictions,
)
from .nodes import Domain, make_node_set
from .precond import PrecondConfig, condition_number, precondition
from .problems import collocation_pair, interpolation_target
from .specfun import CAPUTO

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

MODES = ("interpolate", "collocate", "kernel-table")


class ConfigError(FrbfError, ValueError):
    """Bad or inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    """Flat description of one experiment run."""

    mode: str = "interpolate"
    family: str = "false_tps"
    N: float = 3.22
    alpha: list = field(default_factory=lambda: [0.0])
    beta: float = -0.5
    operator_kind: str = CAPUTO
    frac_mode: str = "exponent_shift"
    frac_kind: str = "riemann_liouville"
    c0: float = None
    tail: str = "multivariate"
    m: int = None
    domain: list = field(default_factory=lambda: [0.28, 1.48])
    ni: int = 100
    nb: int = 40
    inset_ring: bool = False
    skip: int = 0
    M: float = 10.0
    n_max: int = 64
    precondition: bool = False
    problem: str = "sin8-interp"
    out: str = None
    format: str = "csv"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if len(self.domain) != 2 or not self.domain[0] < self.domain[1]:
            raise ConfigError(f"domain must be [a, b] with a < b, got {self.domain}")
        if self.ni < 0 or self.nb < 0 or self.skip < 0:
            raise ConfigError("ni, nb and skip must be non-negative")
        if self.nb and (self.nb % 4 or self.nb < 8):
            raise ConfigError(
                f"nb counts total 2-d boundary nodes and must be a multiple "
                f"of 4 (>= 8), got {self.nb}"
            )

    @property
    def boundary_per_side(self) -> int:
        return self.nb // 4 + 1 if self.nb else 0

    def hash(self) -> str:
        """Digest of the experiment parameters (output destination and
        format do not change the numbers and are excluded)."""
        payload = asdict(self)
        payload.pop("out", None)
        payload.pop("format", None)
        text = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def parse_alpha(value) -> list:
    """Accept a number, a list, 'a,b,c' or 'start:stop:step'."""
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    text = str(value).strip()
    if ":" in text:
        parts = [float(v) for v in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ConfigError(f"alpha range must be start:stop:step, got {value!r}")
        start, stop, step = parts
        count = int(round((stop - start) / step)) + 1
        alphas = [round(start + i * step, 12) for i in range(count)]
        return [a for a in alphas if a <= stop + 1e-12]
    if text == "":
        return []
    return [float(v) for v in text.split(",")]


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a flat JSON object")
    return raw


def build_config(file_values: dict, overrides: dict) -> ExperimentConfig:
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged.pop("config", None)
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "alpha" in merged:
        merged["alpha"] = parse_alpha(merged["alpha"])
    if "domain" in merged and isinstance(merged["domain"], str):
        merged["domain"] = [float(v) for v in merged["domain"].split(",")]
    try:
        return ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _experiment_geometry(config: ExperimentConfig):
    domain = Domain.square(config.domain[0], config.domain[1])
    nodes = make_node_set(
        domain,
        config.ni,
        config.boundary_per_side,
        skip=config.skip,
        inset_ring=config.inset_ring,
    )
    return domain, nodes


def _kernel_spec(config: ExperimentConfig, alpha: float, b: float) -> KernelSpec:
    return KernelSpec(
        config.family, config.N, alpha, b, config.c0,
        config.frac_mode, config.frac_kind,
    )


def _sweep_m(config: ExperimentConfig, b: float) -> int:
    if config.m is not None:
        return int(config.m)
    if not config.alpha:
        return 1
    lo, hi = min(config.alpha), max(config.alpha)
    probe = _kernel_spec(config, 0.0, b)
    return sweep_cpd_order(probe, lo, hi)


def _uniform_grid(domain: Domain, per_axis: int) -> np.ndarray:
    axes = [
        np.linspace(domain.lower[j], domain.upper[j], per_axis)
        for j in range(domain.d)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _solve_interpolation_at(config: ExperimentConfig, alpha: float):
    """(row, interpolant) for one alpha of the interpolation sweep."""
    domain, nodes = _experiment_geometry(config)
    target = interpolation_target(config.problem)
    values = target(nodes.points)
    b = domain.scale_b
    m = _sweep_m(config, b)
    tail = TailSpec(config.tail, m, domain.d)
    spec = _kernel_spec(config, alpha, b)
    validate_restrictions(spec)
    kernel = make_kernel(spec)
    system = assemble_interpolation(nodes, kernel, tail, values)
    if config.precondition:
        pre_config = PrecondConfig(config.M, config.n_max)
        pre = precondition(system.full_matrix(), system.rhs, pre_config)
        sol = np.linalg.solve(pre.G_M, pre.transformed_rhs)
        lam, beta = sol[: system.n_points], sol[system.n_points:]
        cond = pre.cond_after
    else:
        lam, beta = solve_system(system)
        cond = condition_number(system.full_matrix())
    interp = Interpolant(nodes.points, lam, beta, kernel, tail)
    grid = _uniform_grid(domain, 32)
    row = {
        "alpha": alpha,
        "rmse": rmse(values, evaluate_interpolant(interp, nodes.points)),
        "cond": cond,
        "status": "ok",
        "rmse_holdout": rmse(target(grid), evaluate_interpolant(interp, grid)),
    }
    return row, interp


def run_interpolation_sweep(config: ExperimentConfig) -> list:
    """One row per alpha: training-node RMSE, the condition number (of G,
    or of the preconditioned G_M when preconditioning is on) and a
    secondary held-out RMSE on a 32x32 grid.  Row-level numerical
    failures land in the status column."""
    interpolation_target(config.problem)  # unknown targets are config errors
    b = Domain.square(config.domain[0], config.domain[1]).scale_b
    if config.alpha:
        # alpha-independent restrictions (integer N, bad scale) fail the
        # whole config up front; per-alpha violations become row errors
        validate_restrictions(_kernel_spec(config, 0.0, b))
    rows = []
    for alpha in config.alpha:
        try:
            row, _ = _solve_interpolation_at(config, alpha)
        except (FrbfError, np.linalg.LinAlgError) as exc:
            row = {
                "alpha": alpha, "rmse": math.nan, "cond": math.nan,
                "status": f"error: {exc}", "rmse_holdout": math.nan,
            }
        rows.append(row)
    return rows


def _solve_collocation_at(config: ExperimentConfig, alpha: float):
    """(row, interpolant) for one alpha of the collocation sweep."""
    domain, nodes = _experiment_geometry(config)
    operator = RadialOperator(config.beta, config.operator_kind)
    q, o = operator_orders(operator)
    f, g = collocation_pair(config.problem)
    problem = CollocationProblem(domain, nodes, operator, f, g)
    b = domain.scale_b
    m = _sweep_m(config, b)
    tail = TailSpec("radial", m, domain.d, o)
    spec = _kernel_spec(config, alpha, b)
    validate_restrictions(spec, q)
    kernel = make_kernel(spec)
    interp, report = solve_collocation(
        problem, kernel, tail, PrecondConfig(config.M, config.n_max)
    )
    row = {
        "alpha": alpha,
        "rmse": report.heldout_rmse,
        "cond": report.cond_GM,
        "status": "ok",
        "rmse_nodes": report.node_rmse,
        "rmse_boundary": report.boundary_rmse,
        "cond_raw": report.cond_G,
    }
    return row, interp


def run_collocation_sweep(config: ExperimentConfig) -> list:
    """One row per admissible alpha; the reported RMSE is the equation
    residual on the held-out interior grid and cond is cond(G_M).
    Alphas that violate the restrictions or fail numerically are dropped
    from the table, with the reason logged to stderr."""
    collocation_pair(config.problem)  # unknown problems are config errors
    rows = []
    for alpha in config.alpha:
        try:
            row, _ = _solve_collocation_at(config, alpha)
            rows.append(row)
        except (FrbfError, np.linalg.LinAlgError) as exc:
            print(f"alpha={alpha} skipped: {exc}", file=sys.stderr)
    return rows


def write_weights(config: ExperimentConfig, alpha: float, path) -> None:
    """Solve the interpolation problem at one alpha and dump the weights."""
    _, interp = _solve_interpolation_at(config, alpha)
    weights_to_csv(interp, path)


def write_solution_grid(config: ExperimentConfig, alpha: float, path) -> None:
    """Sample the collocation solution on a 32x32 grid for plotting."""
    _, interp = _solve_collocation_at(config, alpha)
    domain = Domain.square(config.domain[0], config.domain[1])
    grid = _uniform_grid(domain, 32)
    values = evaluate_interpolant(interp, grid)
    with open(path, "w") as fh:
        cols = [f"x{j + 1}" for j in range(domain.d)] + ["u"]
        fh.write(",".join(cols) + "\n")
        for point, value in zip(grid, values):
            cells = [repr(float(c)) for c in point] + [repr(float(value))]
            fh.write(",".join(cells) + "\n")


def kernel_table(config: ExperimentConfig) -> list:
    """256 samples on (0, 1] comparing r^N log(r) with the unit-scale
    kernel, for plotting."""
    alpha = config.alpha[0] if config.alpha else 0.0
    spec = KernelSpec(
        config.family, config.N, alpha, 1.0, config.c0,
        config.frac_mode, config.frac_kind,
    )
    kernel = make_kernel(spec)
    r = np.linspace(0.0, 1.0, 257)[1:]
    tps = r**config.N * np.log(r)
    phi = kernel.evaluate(r)
    return [
        {"r": float(rv), "tps": float(tv), "phi": float(pv), "status": "ok"}
        for rv, tv, pv in zip(r, tps, phi)
    ]


def kernel_catalog(config: ExperimentConfig) -> str:
    """Text table describing the configured kernels, one line per alpha."""
    lines = [
        "family  N  alpha  b  c0  coefficients  powers  cpd_order",
    ]
    b = Domain.square(config.domain[0], config.domain[1]).scale_b
    for alpha in config.alpha or [0.0]:
        spec = _kernel_spec(config, alpha, b)
        kernel = make_kernel(spec)
        coeffs = " ".join(repr(float(c)) for c in kernel.coefficients)
        powers = " ".join(repr(float(p)) for p in kernel.powers)
        c0 = spec.c0_value
        lines.append(
            f"{spec.family}  {spec.N!r}  {alpha!r}  {b!r}  "
            f"{'-' if math.isnan(c0) else repr(c0)}  [{coeffs}]  [{powers}]  "
            f"{cpd_order(kernel)}"
        )
    return "\n".join(lines) + "\n"


def _format_cell(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(float(value))
    return str(value)


def render_rows(rows: list, columns: list, config_hash: str, fmt: str) -> str:
    if fmt == "json":
        payload = [
            {
                k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in dict(row, config_hash=config_hash).items()
            }
            for row in rows
        ]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    out = [",".join(columns + ["config_hash"])]
    for row in rows:
        out.append(
            ",".join(_format_cell(row.get(c, "")) for c in columns)
            + f",{config_hash}"
        )
    return "\n".join(out) + "\n"


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frbf",
        description="False-TPS radial kernel experiments: interpolation "
        "sweeps, fractional collocation sweeps and kernel tables.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--N", type=float, dest="N")
        p.add_argument("--alpha", help="list 'a,b,c' or range 'start:stop:step'")
        p.add_argument("--beta", type=float)
        p.add_argument("--family")
        p.add_argument("--frac-mode", dest="frac_mode")
        p.add_argument("--frac-kind", dest="frac_kind")
        p.add_argument("--operator-kind", dest="operator_kind")
        p.add_argument("--tail")
        p.add_argument("--m", type=int)
        p.add_argument("--c0", type=float)
        p.add_argument("--domain", help="'a,b' for the square [a,b]^2")
        p.add_argument("--ni", type=int)
        p.add_argument("--nb", type=int)
        p.add_argument("--inset-ring", action="store_true", default=None,
                       dest="inset_ring")
        p.add_argument("--M", type=float, dest="M")
        p.add_argument("--n-max", type=int, dest="n_max")
        p.add_argument("--precondition", action="store_true", default=None)
        p.add_argument("--seed-skip", type=int, dest="skip")
        p.add_argument("--problem")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        if mode == "kernel-table":
            p.add_argument("--catalog", action="store_true",
                           help="emit the kernel catalog text table instead")
        if mode == "interpolate":
            p.add_argument("--weights-out", dest="weights_out",
                           help="also dump the best row's weights as CSV")
        if mode == "collocate":
            p.add_argument("--solution-out", dest="solution_out",
                           help="also sample the best row's solution on a "
                                "grid as CSV")
    return parser


def _best_alpha(rows: list):
    ok = [row for row in rows if row.get("status") == "ok"]
    return min(ok, key=lambda row: row["rmse"])["alpha"] if ok else None


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    extras = ("config", "catalog", "weights_out", "solution_out")
    overrides = {k: v for k, v in vars(args).items() if k not in extras}
    overrides["mode"] = args.mode
    try:
        file_values = load_config(args.config) if args.config else {}
        config = build_config(file_values, overrides)
        if config.mode == "kernel-table":
            if getattr(args, "catalog", False):
                _emit(kernel_catalog(config), config.out)
                return EXIT_OK
            rows = kernel_table(config)
            text = render_rows(rows, ["r", "tps", "phi", "status"],
                               config.hash(), config.format)
            _emit(text, config.out)
            return EXIT_OK
        if config.mode == "interpolate":
            rows = run_interpolation_sweep(config)
        else:
            rows = run_collocation_sweep(config)
        best = _best_alpha(rows)
        if getattr(args, "weights_out", None) and best is not None:
            write_weights(config, best, args.weights_out)
        if getattr(args, "solution_out", None) and best is not None:
            write_solution_grid(config, best, args.solution_out)
    except (ConfigError, FrbfError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render_rows(rows, ["alpha", "rmse", "cond", "status"],
                       config.hash(), config.format)
    _emit(text, config.out)
    attempted = len(config.alpha)
    succeeded = sum(1 for r in rows if r.get("status") == "ok")
    if attempted and not succeeded:
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
