"""Command-line front end: ``swvortex {profile,converge,fields}``.

Options may also come from a ``key = value`` text file given with
``--config``; keys are the long option names without dashes (``hmin``,
``gamma-amp``, ``meshes``, ...).  Command-line flags override the file.

Exit codes: 0 success, 2 configuration error, 3 solver instability.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from . import __version__
from .convergence import STUDY_MESHES, run_study
from .csvio import write_csv
from .euler import ISENTROPIC, ISOCHORIC, EulerVortexField, eval_euler_cartesian, euler_cell_averages
from .solver import Grid
from .vortex import RadialProfile, VortexSpec, cell_averages, eval_cartesian, family_from_name

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTABILITY = 3

FAMILIES = ("cos", "gauss", "expbump", "arctan")

DEFAULTS = {
    "family": "cos",
    "p": 1,
    "r0": 0.45,
    "h0": 1.0,
    "hmin": None,
    "gamma-amp": None,
    "g": 1.0,
    "center": "0.5,0.5",
    "uinf": "1,1",
    "N": None,
    "meshes": None,
    "domain": "0,1,0,1",
    "cfl": 0.95,
    "tfinal": 1.0,
    "time": 0.0,
    "quad": 4,
    "euler": None,
    "gas-gamma": 1.4,
    "rho0": 1.0,
    "p0": 1.0,
    "out": None,
    "full-precision": False,
    "point-values": False,
    "samples": 2001,
    "rmax": None,
    "jobs": 1,
}

DEFAULT_HMIN = 0.99


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    command: str
    family: str
    p: int
    r0: float
    h0: float
    hmin: Optional[float]
    gamma_amp: Optional[float]
    g: float
    center: Tuple[float, float]
    uinf: Tuple[float, float]
    meshes: Tuple[int, ...]
    domain: Tuple[float, float, float, float]
    cfl: float
    tfinal: float
    time: float
    quad: int
    euler: Optional[str]
    gas_gamma: float
    rho0: float
    p0: float
    out: Optional[str]
    full_precision: bool
    point_values: bool
    samples: int
    rmax: Optional[float]
    jobs: int

    def spec(self) -> VortexSpec:
        family = family_from_name(self.family, self.p)
        try:
            if self.gamma_amp is not None:
                return VortexSpec(family, self.r0, self.h0, self.gamma_amp, self.g,
                                  self.center, self.uinf)
            return VortexSpec.from_hmin(family, self.r0, self.h0, self.hmin, self.g,
                                        self.center, self.uinf)
        except ValueError as exc:
            raise ConfigError(f"vortex parameters: {exc}") from exc

    def echo(self) -> dict:
        meta = {"command": self.command}
        meta.update({k: v for k, v in asdict(self).items() if k != "command"})
        return meta


# {{{ parsing


def _floats(text, n, name):
    try:
        vals = tuple(float(v) for v in str(text).split(","))
    except ValueError:
        raise ConfigError(f"{name}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise ConfigError(f"{name}: expected {n} comma-separated numbers, got {text!r}")
    return vals


def _number(value, kind, name):
    try:
        out = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected {kind.__name__}, got {value!r}") from None
    if kind is int and float(value) != out:
        raise ConfigError(f"{name}: expected integer, got {value!r}")
    return out


def _bool(value, name):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name}: expected a boolean, got {value!r}")


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config: line {lineno} is not 'key = value': {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in DEFAULTS:
            raise ConfigError(f"config: unknown key {key!r} on line {lineno}")
        out[key] = value
    return out


def build_config(command: str, cli: dict, file_values: Optional[dict] = None) -> RunConfig:
    """Merge defaults, file values and command-line values, then validate."""
    raw = dict(DEFAULTS)
    raw.update(file_values or {})
    raw.update({k: v for k, v in cli.items() if v is not None})

    family = str(raw["family"])
    if family not in FAMILIES:
        raise ConfigError(f"family: must be one of {', '.join(FAMILIES)}, got {family!r}")
    p = _number(raw["p"], int, "p")
    if p < 1:
        raise ConfigError(f"p: must be a positive integer, got {p}")

    hmin = raw["hmin"]
    gamma_amp = raw["gamma-amp"]
    if hmin is not None and gamma_amp is not None:
        raise ConfigError("hmin/gamma-amp: give at most one of --hmin and --gamma-amp")
    if hmin is None and gamma_amp is None:
        hmin = DEFAULT_HMIN
    hmin = None if hmin is None else _number(hmin, float, "hmin")
    gamma_amp = None if gamma_amp is None else _number(gamma_amp, float, "gamma-amp")

    if raw["N"] is not None and raw["meshes"] is not None:
        raise ConfigError("N/meshes: give at most one of --N and --meshes")
    if raw["N"] is not None:
        meshes = (_number(raw["N"], int, "N"),)
    elif raw["meshes"] is not None:
        try:
            meshes = tuple(int(v) for v in str(raw["meshes"]).split(","))
        except ValueError:
            raise ConfigError(f"meshes: expected comma-separated integers, got {raw['meshes']!r}") from None
    else:
        meshes = STUDY_MESHES[:4] if command == "converge" else (STUDY_MESHES[0],)
    if any(n < 5 for n in meshes):
        raise ConfigError(f"meshes: every mesh needs at least 5 cells, got {meshes}")
    if any(b <= a for a, b in zip(meshes, meshes[1:])):
        raise ConfigError(f"meshes: must be strictly increasing, got {meshes}")

    cfg = RunConfig(
        command=command,
        family=family,
        p=p,
        r0=_number(raw["r0"], float, "r0"),
        h0=_number(raw["h0"], float, "h0"),
        hmin=hmin,
        gamma_amp=gamma_amp,
        g=_number(raw["g"], float, "g"),
        center=_floats(raw["center"], 2, "center"),
        uinf=_floats(raw["uinf"], 2, "uinf"),
        meshes=meshes,
        domain=_floats(raw["domain"], 4, "domain"),
        cfl=_number(raw["cfl"], float, "cfl"),
        tfinal=_number(raw["tfinal"], float, "tfinal"),
        time=_number(raw["time"], float, "time"),
        quad=_number(raw["quad"], int, "quad"),
        euler=raw["euler"],
        gas_gamma=_number(raw["gas-gamma"], float, "gas-gamma"),
        rho0=_number(raw["rho0"], float, "rho0"),
        p0=_number(raw["p0"], float, "p0"),
        out=raw["out"],
        full_precision=_bool(raw["full-precision"], "full-precision"),
        point_values=_bool(raw["point-values"], "point-values"),
        samples=_number(raw["samples"], int, "samples"),
        rmax=None if raw["rmax"] is None else _number(raw["rmax"], float, "rmax"),
        jobs=_number(raw["jobs"], int, "jobs"),
    )

    if not 0 < cfg.cfl <= 1:
        raise ConfigError(f"cfl: must be in (0, 1], got {cfg.cfl}")
    if not cfg.tfinal > 0:
        raise ConfigError(f"tfinal: must be positive, got {cfg.tfinal}")
    if cfg.quad < 1:
        raise ConfigError(f"quad: must be >= 1, got {cfg.quad}")
    if cfg.samples < 2:
        raise ConfigError(f"samples: need at least 2, got {cfg.samples}")
    if cfg.euler not in (None, ISENTROPIC, ISOCHORIC):
        raise ConfigError(f"euler: must be {ISENTROPIC} or {ISOCHORIC}, got {cfg.euler!r}")
    if cfg.euler is not None and not cfg.gas_gamma > 1:
        raise ConfigError(f"gas-gamma: must exceed 1, got {cfg.gas_gamma}")
    if cfg.hmin is not None and not 0 < cfg.hmin < cfg.h0:
        raise ConfigError(f"hmin: must satisfy 0 < hmin < h0={cfg.h0}, got {cfg.hmin}")
    cfg.spec()
    return cfg


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--config", metavar="PATH", help="key = value file; flags override it")
    add("--family", choices=FAMILIES)
    add("--p", type=int, help="family exponent")
    add("--r0", type=float, help="vortex radius / width")
    add("--h0", type=float, help="far-field depth")
    add("--hmin", type=float, help="depth at the vortex center (default 0.99)")
    add("--gamma-amp", dest="gamma_amp", type=float, help="amplitude (instead of --hmin)")
    add("--g", type=float, help="gravity (default 1)")
    add("--center", metavar="X,Y")
    add("--uinf", metavar="X,Y", help="background velocity (default 1,1)")
    add("--N", type=int, help="single mesh size")
    add("--meshes", metavar="N1,N2,...")
    add("--domain", metavar="X0,X1,Y0,Y1")
    add("--cfl", type=float)
    add("--tfinal", type=float)
    add("--quad", type=int, help="Gauss-Legendre points per direction")
    add("--euler", choices=(ISENTROPIC, ISOCHORIC))
    add("--gas-gamma", dest="gas_gamma", type=float)
    add("--rho0", type=float)
    add("--p0", type=float)
    add("--out", metavar="PATH")
    add("--full-precision", dest="full_precision", action="store_true", default=None)
    add("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="swvortex", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"swvortex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    prof = sub.add_parser("profile", parents=[common], help="radial profile and derivatives")
    prof.add_argument("--samples", type=int)
    prof.add_argument("--rmax", type=float)

    conv = sub.add_parser("converge", parents=[common], help="mesh-refinement study")
    conv.add_argument("--jobs", type=int, help="parallel mesh runs")

    fields = sub.add_parser("fields", parents=[common], help="gridded exact fields")
    fields.add_argument("--time", type=float, help="evaluation time (default 0)")
    fields.add_argument("--point-values", dest="point_values", action="store_true", default=None,
                        help="cell-center values instead of cell averages")
    return parser


# }}}


# {{{ commands


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        f = open(path, "w")
    except OSError as exc:
        raise ConfigError(f"out: cannot write {path}: {exc}") from None
    with f:
        yield f


def cmd_profile(cfg: RunConfig) -> int:
    spec = cfg.spec()
    profile = RadialProfile(spec)
    rmax = cfg.rmax if cfg.rmax is not None else max(2.0 * spec.r0, 1.0)
    r = np.linspace(0.0, rmax, cfg.samples)

    cols = {"r": r, "h": profile.depth(r), "u_theta": profile.u_theta(r)}
    for k in range(1, 6):
        cols[f"dh{k}"] = profile.derivative("h", k, r)
    for k in range(1, 6):
        cols[f"du{k}"] = profile.derivative("u_theta", k, r)

    meta = cfg.echo()
    meta["gamma_amp_resolved"] = spec.gamma_amp
    for name in list(cols)[3:]:
        meta[f"max_abs_{name}"] = float(np.max(np.abs(cols[name])))
    meta["h_at_r1"] = float(profile.depth(1.0))
    meta["u_theta_at_r1"] = float(profile.u_theta(1.0))

    with _output(cfg.out) as f:
        write_csv(f, list(cols), np.column_stack(list(cols.values())), meta, cfg.full_precision)
    return EXIT_OK


def cmd_converge(cfg: RunConfig) -> int:
    spec = cfg.spec()
    report = run_study(spec, cfg.meshes, cfg.cfl, cfg.tfinal, cfg.quad, cfg.domain, cfg.jobs)

    meta = cfg.echo()
    meta.update({"gamma_amp_resolved": spec.gamma_amp, "norm": report.metadata["norm"]})
    failed = [r for r in report.rows if r.failure]
    for r in failed:
        meta[f"failed_N{r.N}"] = r.failure

    columns = ["N", "err_h", "ord_h", "err_u", "ord_u", "err_v", "ord_v"]
    err_fmt = "{:.3e}".format
    ord_fmt = "{:.3f}".format
    formats = {c: (err_fmt if c.startswith("err") else ord_fmt) for c in columns[1:]}
    rows = [(r.N, r.err_h, r.ord_h, r.err_u, r.ord_u, r.err_v, r.ord_v) for r in report.rows]

    with _output(cfg.out) as f:
        write_csv(f, columns, rows, meta, cfg.full_precision, formats)
    if cfg.out is not None and cfg.out != "-":
        print(report.to_text())
    return EXIT_INSTABILITY if failed else EXIT_OK


def cmd_fields(cfg: RunConfig) -> int:
    spec = cfg.spec()
    grid = Grid(cfg.meshes[0], cfg.meshes[0], cfg.domain)
    period = grid.period

    if cfg.euler is not None:
        try:
            field = EulerVortexField(spec, cfg.euler, cfg.gas_gamma, cfg.rho0, cfg.p0)
        except ValueError as exc:
            raise ConfigError(f"euler: {exc}") from None
        names = ["rho", "rhou", "rhov", "rhoE"]
    else:
        names = ["h", "hu", "hv"]

    X, Y = np.meshgrid(grid.x_centers, grid.y_centers, indexing="ij")
    if cfg.point_values:
        if cfg.euler is not None:
            values = eval_euler_cartesian(field, X, Y, cfg.time, period)
        else:
            h, ux, uy = eval_cartesian(spec, X, Y, cfg.time, period)
            values = (h, h * ux, h * uy)
    elif cfg.euler is not None:
        values = euler_cell_averages(field, grid.x_edges, grid.y_edges, cfg.time, cfg.quad, period)
    else:
        values = cell_averages(spec, grid.x_edges, grid.y_edges, cfg.time, cfg.quad, period)

    data = np.column_stack([X.ravel(), Y.ravel()] + [np.asarray(v).ravel() for v in values])
    meta = cfg.echo()
    meta["gamma_amp_resolved"] = spec.gamma_amp
    meta["sampling"] = "point" if cfg.point_values else "cell-average"
    with _output(cfg.out) as f:
        write_csv(f, ["x", "y"] + names, data, meta, cfg.full_precision)
    return EXIT_OK


COMMANDS = {"profile": cmd_profile, "converge": cmd_converge, "fields": cmd_fields}


# }}}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cli = {k.replace("_", "-"): v for k, v in vars(args).items()
           if k not in ("command", "config", "verbose")}
    try:
        file_values = read_config_file(args.config) if args.config else None
        cfg = build_config(args.command, cli, file_values)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"swvortex: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
