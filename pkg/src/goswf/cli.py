"""Command-line entry point: ``goswf <command> [options]``.

Every command writes one table (CSV or JSON) and exits with

    0  all tolerances met
    2  configuration error
    3  tolerance violation
    4  precision-floor abort
"""

import argparse
from dataclasses import asdict, dataclass
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .approx import compare_truncations, make_bandlimited
from .jacobi import eval_normalized_all
from .laplace_op import OperatorParams, kernel_k
from .quadrature import gauss_jacobi, working_order
from .spheroidal import (
    PRECISION_FLOOR,
    pswf_eigenvalues,
    mu_derivative,
    solve_method1,
    solve_method2_nystrom,
)
from .special_fn import PrecisionError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_PRECISION = 4

COMMANDS = (
    "eigenvalues",
    "pswf-check",
    "eigenfunctions",
    "approx-compare",
    "kernel-check",
    "derivative-check",
)

# (N, c, alpha, beta) for the three approximation figures
APPROX_PRESETS = {1: (3, 5.0, 0.0, 1.0), 2: (4, 5.0, 1.0, 2.0), 3: (5, 6.0, 2.0, 1.0)}
PSWF_C = (2.0, 4.0, 6.0)
PSWF_ROWS = (0, 5, 10, 15, 20)

EIG_REL_TOL = 1e-8
EIG_CHECK_MIN = 1e-10
PSI_GAP_TOL = 1e-8
NORM_TOL = 1e-8
KERNEL_TOL = 1e-10
DERIV_TOL = 1e-5
DERIV_STEP = 1e-4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: float = 0.0
    beta: float = 0.0
    c: float = None
    n_max: int = None
    quad_order: int = 40
    trunc_order: int = None
    grid_points: int = 201
    precision_floor: float = PRECISION_FLOOR
    output_format: str = "csv"
    output_path: str = None
    seed: int = 0
    method2: bool = False
    preset: int = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not (self.alpha > -1 and self.beta > -1):
            raise ConfigError("--alpha and --beta must be > -1")
        if self.c is not None and not self.c > 0:
            raise ConfigError("--c must be positive")
        if self.n_max is not None and self.n_max < 1:
            raise ConfigError("--n-max must be >= 1")
        if self.quad_order < 1:
            raise ConfigError("--quad-order must be >= 1")
        if self.trunc_order is not None and self.trunc_order < 4:
            raise ConfigError("--trunc-order must be >= 4")
        if self.grid_points < 2:
            raise ConfigError("--grid-points must be >= 2")
        if not self.precision_floor > 0:
            raise ConfigError("--precision-floor must be positive")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.preset is not None and self.preset not in APPROX_PRESETS:
            raise ConfigError(f"--preset must be one of {sorted(APPROX_PRESETS)}")
        if self.command != "pswf-check" and self.c is None and self.preset is None:
            raise ConfigError(f"{self.command} needs --c")
        if self.c is not None and self.command != "pswf-check":
            need = math.ceil(2 * math.e * self.c) + 1
            if self.quad_order < need:
                raise ConfigError(f"--quad-order must be >= ceil(2ec)+1 = {need}")
        return self

    def operator(self):
        return OperatorParams.make(self.alpha, self.beta, self.c, self.quad_order)


@dataclass
class Result:
    columns: list
    rows: list
    ok: bool = True
    extra: dict = None
    notes: list = None


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def render(cfg, result):
    meta = {"artifact": "goswf", "version": __version__, "config": asdict(cfg)}
    if cfg.output_format == "json":
        doc = dict(meta)
        doc["ok"] = result.ok
        if result.notes:
            doc["notes"] = result.notes
        doc["columns"] = result.columns
        doc["rows"] = [dict(zip(result.columns, row)) for row in result.rows]
        if result.extra:
            doc.update(result.extra)
        return json.dumps(_jsonable(doc), indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# artifact: goswf {__version__}\n")
    for key, value in asdict(cfg).items():
        buf.write(f"# {key}: {value}\n")
    buf.write(f"# ok: {result.ok}\n")
    for note in result.notes or []:
        buf.write(f"# note: {note}\n")
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _csv_table(columns, rows):
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_eigenvalues(cfg):
    op = cfg.operator()
    n_max = 20 if cfg.n_max is None else cfg.n_max
    basis = solve_method1(op, n_max + 1, cfg.trunc_order, cfg.precision_floor)
    system = solve_method2_nystrom(op, precision_floor=cfg.precision_floor)
    rows, ok = [], True
    for n in range(n_max + 1):
        m1, m2 = basis.mu[n], system.mu[n]
        rel = abs(m1 - m2) / abs(m1)
        below = bool(abs(m1) < cfg.precision_floor)
        if abs(m1) >= EIG_CHECK_MIN and rel > EIG_REL_TOL:
            ok = False
        rows.append([n, m1, m2, rel, below])
    return Result(["n", "mu_method1", "mu_method2", "rel_diff", "below_floor"], rows, ok)


def cmd_pswf_check(cfg):
    cs = PSWF_C if cfg.c is None else (cfg.c,)
    rows_n = PSWF_ROWS if cfg.n_max is None else tuple(range(cfg.n_max + 1))
    rows, ok = [], True
    for ct in cs:
        n_quad = max(math.ceil(2 * math.e * ct) + 1, cfg.quad_order)
        count = max(rows_n) + 1
        lam = pswf_eigenvalues(ct, count, n_quad)
        gram = pswf_eigenvalues(ct, count, n_quad, method="gram")
        for n in rows_n:
            below = bool(lam[n] < cfg.precision_floor)
            # the squared (gram) route only resolves the leading eigenvalues
            if lam[n] >= 1e-8 and abs(gram[n] / lam[n] - 1) > 1e-6:
                ok = False
            rows.append([ct, n, lam[n], gram[n], below])
    return Result(["c_tilde", "n", "lambda", "lambda_gram", "below_floor"], rows, ok)


def cmd_eigenfunctions(cfg):
    op = cfg.operator()
    n_max = 4 if cfg.n_max is None else cfg.n_max
    basis = solve_method1(op, n_max, cfg.trunc_order, cfg.precision_floor)
    grid = np.linspace(-1.0, 1.0, cfg.grid_points)
    psi1 = basis.values(grid)
    rule = gauss_jacobi(op.weight, max(cfg.quad_order, basis.trunc_order + 1))
    norms = [float(rule.integrate(basis.psi(n, rule.nodes) ** 2)) for n in range(n_max)]
    ok = all(abs(v - 1.0) <= NORM_TOL for v in norms)
    columns = ["x"] + [f"psi_{n}" for n in range(n_max)]
    cols = [grid] + list(psi1)
    notes = [f"norm_psi_{n}: {_fmt(v)}" for n, v in enumerate(norms)]
    if cfg.method2:
        gaps = []
        for n in range(n_max):
            mu = basis.mu[n]
            if abs(mu) < cfg.precision_floor:
                raise PrecisionError(f"mu_{n} is below the precision floor")
            n_quad = max(cfg.quad_order, working_order(op.weight, op.c, PSI_GAP_TOL, abs(mu)))
            system = solve_method2_nystrom(op, n_quad, cfg.precision_floor)
            p2 = system.interpolate(n, grid)
            p2 = p2 * np.sign(p2 @ psi1[n])
            gaps.append(float(np.max(np.abs(p2 - psi1[n]))))
            cols.append(p2)
            columns.append(f"psi2_{n}")
        ok = ok and all(g <= PSI_GAP_TOL for g in gaps)
        notes += [f"sup_gap_{n}: {_fmt(g)}" for n, g in enumerate(gaps)]
    rows = [list(r) for r in np.column_stack(cols)]
    return Result(columns, rows, ok, notes=notes)


def cmd_approx_compare(cfg):
    if cfg.preset is not None:
        n_target, c, alpha, beta = APPROX_PRESETS[cfg.preset]
        cfg.c, cfg.alpha, cfg.beta = c, alpha, beta
        if cfg.n_max is None:
            cfg.n_max = n_target
    n_target = 4 if cfg.n_max is None else cfg.n_max
    op = cfg.operator()
    size = max(n_target + 10, 20)
    basis = solve_method1(op, size, cfg.trunc_order, cfg.precision_floor)
    system = solve_method2_nystrom(op, precision_floor=cfg.precision_floor)
    f = make_bandlimited(op, 1.0)
    n_list = list(range(n_target + 1))
    rep = compare_truncations(f, basis, n_list, tail_mu=system.mu, grid_points=cfg.grid_points)

    ok = rep.goswf_err_l2[-1] <= rep.jacobi_err_l2[-1] and rep.goswf_err_sup[-1] <= rep.jacobi_err_sup[-1]
    ok &= all(np.diff(rep.goswf_err_l2) <= 1e-14) and all(np.diff(rep.jacobi_err_l2) <= 1e-14)
    ok &= all(e <= b + 1e-10 for e, b in zip(rep.goswf_err_l2, rep.goswf_tail_bound))
    ok &= bool(np.all(np.abs(rep.goswf_coeffs) <= rep.coeff_bound[: len(rep.goswf_coeffs)] + 1e-12))

    columns = [
        "N", "goswf_err_l2", "jacobi_err_l2", "goswf_err_sup", "jacobi_err_sup",
        "goswf_tail_bound", "goswf_coeff", "jacobi_coeff", "coeff_bound",
    ]
    rows = [
        [n, rep.goswf_err_l2[i], rep.jacobi_err_l2[i], rep.goswf_err_sup[i], rep.jacobi_err_sup[i],
         rep.goswf_tail_bound[i], rep.goswf_coeffs[i], rep.jacobi_coeffs[i], rep.coeff_bound[i]]
        for i, n in enumerate(n_list)
    ]

    grid = np.linspace(-1.0, 1.0, cfg.grid_points)
    k = n_target + 1
    f_goswf = rep.goswf_coeffs[:k] @ np.stack([basis.psi(n, grid) for n in range(k)])
    f_jacobi = rep.jacobi_coeffs[:k] @ eval_normalized_all(op.weight, k - 1, grid)
    samples = np.column_stack([grid, f(grid), f_goswf, f_jacobi])
    sample_cols = ["x", "f", "f_goswf", "f_jacobi"]
    extra = {
        "source": "g = 1",
        "f_norm": rep.f_norm,
        "g_norm": rep.g_norm,
        "samples": {"columns": sample_cols, "rows": samples.tolist()},
    }
    return Result(columns, rows, bool(ok), extra=extra, notes=["source: g = 1"])


def cmd_kernel_check(cfg):
    op = cfg.operator()
    pts = np.linspace(-1.0, 1.0, 10)
    rng = np.random.default_rng(cfg.seed)
    pairs = [(x, y) for x in pts for y in pts if x + y > 0]
    pairs += [tuple(p) for p in rng.uniform(-1, 1, size=(20, 2)) if p.sum() > 0]
    rows, worst = [], 0.0
    for x, y in pairs:
        d = float(kernel_k(op, x, y, "direct"))
        w = float(kernel_k(op, x, y, "whittaker"))
        gap = abs(d - w) / abs(d)
        worst = max(worst, gap)
        rows.append([x, y, d, w, gap])
    notes = [f"max_rel_gap: {_fmt(worst)}"]
    return Result(["x", "y", "direct", "whittaker", "rel_gap"], rows, worst <= KERNEL_TOL, notes=notes)


def _mu_at(cfg, c, n):
    op = OperatorParams.make(cfg.alpha, cfg.beta, c, cfg.quad_order)
    return solve_method1(op, n + 1, cfg.trunc_order, cfg.precision_floor).mu[n]


def cmd_derivative_check(cfg):
    op = cfg.operator()
    n_count = 1 if cfg.n_max is None else cfg.n_max
    basis = solve_method1(op, n_count, cfg.trunc_order, cfg.precision_floor)
    rows, ok = [], True
    for n in range(n_count):
        v1, v2 = mu_derivative(basis, n)
        h = DERIV_STEP
        fd = (_mu_at(cfg, cfg.c + h, n) - _mu_at(cfg, cfg.c - h, n)) / (2 * h)
        e1, e2 = abs(v1 - fd) / abs(fd), abs(v2 - fd) / abs(fd)
        match = [name for name, e in (("mu_squared", e1), ("one", e2)) if e <= DERIV_TOL]
        ok &= len(match) == 1
        rows.append([n, basis.mu[n], fd, v1, v2, e1, e2, match[0] if len(match) == 1 else "none" if not match else "both"])
    columns = ["n", "mu", "finite_difference", "variant_mu_squared", "variant_one",
               "rel_err_mu_squared", "rel_err_one", "matching"]
    return Result(columns, rows, ok)


HANDLERS = {
    "eigenvalues": cmd_eigenvalues,
    "pswf-check": cmd_pswf_check,
    "eigenfunctions": cmd_eigenfunctions,
    "approx-compare": cmd_approx_compare,
    "kernel-check": cmd_kernel_check,
    "derivative-check": cmd_derivative_check,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.0)
    common.add_argument("--beta", type=float, default=0.0)
    common.add_argument("--c", type=float, default=None, help="bandwidth (c~ for pswf-check)")
    common.add_argument("--n-max", type=int, default=None)
    common.add_argument("--quad-order", type=int, default=40)
    common.add_argument("--trunc-order", type=int, default=None)
    common.add_argument("--grid-points", type=int, default=201)
    common.add_argument("--precision-floor", type=float, default=PRECISION_FLOOR)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", dest="output_path", default=None)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="goswf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"goswf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eigenvalues", parents=[common], help="mu_n by both methods")
    sub.add_parser("pswf-check", parents=[common], help="finite Fourier (PSWF) eigenvalues")
    p = sub.add_parser("eigenfunctions", parents=[common], help="psi_n samples on a grid")
    p.add_argument("--method2", action="store_true", help="also emit Nystrom-interpolated columns")
    p = sub.add_parser("approx-compare", parents=[common], help="GOSWF vs Jacobi truncations")
    p.add_argument("--preset", type=int, choices=sorted(APPROX_PRESETS), default=None)
    sub.add_parser("kernel-check", parents=[common], help="direct vs Whittaker kernel")
    sub.add_parser("derivative-check", parents=[common], help="d mu_n / dc identities")
    return parser


def _write(cfg, text, extra_csv=None):
    if cfg.output_path is None:
        sys.stdout.write(text)
        return
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    if extra_csv is not None:
        stem = cfg.output_path[:-4] if cfg.output_path.endswith(".csv") else cfg.output_path
        with open(stem + "_samples.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(extra_csv)


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        cfg.validate()
        result = HANDLERS[cfg.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"goswf: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionError as exc:
        print(f"goswf: precision floor: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    extra_csv = None
    if cfg.output_format == "csv" and result.extra and "samples" in result.extra:
        s = result.extra["samples"]
        extra_csv = _csv_table(s["columns"], s["rows"])
    try:
        _write(cfg, render(cfg, result), extra_csv)
    except OSError as exc:
        print(f"goswf: cannot write output: {exc}", file=sys.stderr)
        return 1
    if not result.ok:
        print("goswf: tolerance violated", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
