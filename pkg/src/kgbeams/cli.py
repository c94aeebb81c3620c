"""Command-line front end: ``kgbeams verify | field | energy | boost | flow``.

Exit status is 0 when every asserted check passes, 1 when one fails and 2
for usage or configuration errors.  Beam settings come from command-line
flags, then from a ``key=value`` file given with ``--config``, then from
the built-in reference set (m0=1, w0=2, k3=1, hbar=c=1, L=1, HG(0,0)).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (
    HG, BeamParameters, DomainError, EventCoordinates, UnitSystem, UnsupportedModeError,
    boost_parameters, derive_parameters, parse_mode,
)
from .currents import current_analytic, current_numeric
from .diffops import boost_invariance, corrupt, kg_residual, sample_points
from .expectation import mode_energy
from .flow import circulation, trace
from .potentials import bohm_potential, quantum_potential, quantum_potential_numeric, scalar_potential
from .verify import VerificationReport, run_verification
from .wavefield import axial_argument, beam_radius, probability_density, psi

BEAM_DEFAULTS = {"mode": "hg:0,0", "m0": 1.0, "w0": 2.0, "k3": 1.0, "length": 1.0, "hbar": 1.0, "c": 1.0}
RUN_DEFAULTS = {"grid": "33x33", "extent": 2.5, "tau": 0.0, "beta": 0.5, "seed": 0, "points": 100,
                "range": "3,3", "tau_range": "0,10", "steps": 200, "seeds": "1,0;0,1;1.5,1.5"}
QUANTITIES = ("psi", "density", "current", "potential", "v2", "bohm_q")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: BeamParameters
    settings: dict

    def get(self, key: str):
        return self.settings[key]


def _float(text, key):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a number, got {text!r}") from None


def read_config(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment and dashes in keys become underscores."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{number}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def resolve(args: argparse.Namespace) -> RunConfig:
    file_values = read_config(args.config) if args.config else {}
    unknown = set(file_values) - set(BEAM_DEFAULTS) - set(RUN_DEFAULTS) - {"quantity"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = {}
    for key, default in {**BEAM_DEFAULTS, **RUN_DEFAULTS, "quantity": "density"}.items():
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else file_values.get(key, default)
    try:
        mode = parse_mode(str(merged["mode"]))
        units = UnitSystem(_float(merged["hbar"], "hbar"), _float(merged["c"], "c"))
        params = derive_parameters(_float(merged["m0"], "m0"), _float(merged["w0"], "w0"),
                                   _float(merged["k3"], "k3"), mode, _float(merged["length"], "length"), units)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(params, merged)


def parse_grid(text: str) -> tuple[int, int]:
    try:
        n1, n2 = (int(v) for v in str(text).lower().split("x"))
    except ValueError:
        raise UsageError(f"--grid expects NxN, got {text!r}") from None
    if min(n1, n2) < 8:
        raise UsageError("grid resolution must be at least 8 per axis")
    return n1, n2


def _pairs(text: str, what: str) -> list[tuple[float, float]]:
    try:
        pairs = [tuple(float(v) for v in chunk.split(",")) for chunk in str(text).split(";") if chunk.strip()]
    except ValueError:
        raise UsageError(f"{what} expects comma-separated numbers, got {text!r}") from None
    if not pairs or any(len(p) != 2 for p in pairs):
        raise UsageError(f"{what} expects pairs a,b separated by ';', got {text!r}")
    return pairs


def _number(value: float) -> str:
    return "%.17g" % value


class _Output:
    """CSV or text to --out, or to stdout."""

    def __init__(self, path: str | None):
        self.path = path

    def __enter__(self):
        self.stream = open(self.path, "w", encoding="utf-8", newline="") if self.path else sys.stdout
        return self.stream

    def __exit__(self, *exc):
        if self.path:
            self.stream.close()


def write_csv(path: str | None, header: list[str], rows) -> None:
    with _Output(path) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_number(v) if isinstance(v, (float, np.floating)) else v for v in row])


def emit_report(report: VerificationReport, args, header: list[str] = ()) -> None:
    if args.json:
        text = json.dumps(report.as_dict(), indent=2, sort_keys=False) + "\n"
    else:
        text = "\n".join([*header, *report.lines()]) + "\n"
    with _Output(args.out) as stream:
        stream.write(text)


def cmd_verify(config: RunConfig, args) -> int:
    params = config.params
    if args.corrupt:
        params = corrupt(params, args.corrupt)
    report = run_verification(params, points=int(config.get("points")), seed=int(config.get("seed")),
                              beta=_float(config.get("beta"), "beta"))
    emit_report(report, args, [f"mode {params.mode}  k4={params.k4:.10g}  b={params.b:.10g}"
                               f"  kappa={params.kappa:.10g}  v3={params.v3:.10g}"])
    return 0 if report.passed else 1


def _slice(params: BeamParameters, grid, extent: float, tau: float):
    s = (params.v3 + params.c) * tau
    w = float(beam_radius(params, s))
    axes = [np.linspace(-extent * w, extent * w, n) for n in grid]
    X1, X2 = np.meshgrid(*axes, indexing="ij")
    coords = EventCoordinates(X1.ravel(), X2.ravel(), np.full(X1.size, params.v3 * tau), np.full(X1.size, tau))
    return coords, w


def field_columns(params: BeamParameters, coords: EventCoordinates, quantity: str):
    """Column names and values of ``quantity`` at ``coords``."""
    if quantity == "psi":
        value = psi(params, coords)
        return ["psi_re", "psi_im"], [value.real, value.imag]
    if quantity == "density":
        return ["density"], [probability_density(params, coords)]
    if quantity == "current":
        sample = current_analytic(params, coords) if isinstance(params.mode, HG) else current_numeric(params, coords)
        return ["j1", "j2", "j3", "j4"], list(sample.j)
    if quantity == "potential":
        if isinstance(params.mode, HG):
            U = quantum_potential(params, coords)
        else:
            U = quantum_potential_numeric(params, coords)
        return ["U1", "U2", "U3", "U4"], list(U)
    if quantity == "v2":
        return ["v2"], [scalar_potential(params, coords)]
    if quantity == "bohm_q":
        return ["bohm_q"], [bohm_potential(params, coords)]
    raise UsageError(f"unknown quantity {quantity!r}; choose from {', '.join(QUANTITIES)}")


def cmd_field(config: RunConfig, args) -> int:
    params = config.params
    quantity = config.get("quantity")
    extent = _float(config.get("extent"), "extent")
    if extent < 1:
        raise UsageError("--extent must be at least 1 (in units of w)")
    tau = _float(config.get("tau"), "tau")
    coords, w = _slice(params, parse_grid(config.get("grid")), extent, tau)
    try:
        names, columns = field_columns(params, coords, quantity)
    except (UnsupportedModeError, DomainError) as exc:
        raise UsageError(str(exc)) from None
    s = axial_argument(params, coords)
    rho = np.hypot(coords.xi1, coords.xi2)
    header = ["xi1", "xi2", "xi3", "tau", "rho_over_w", "s_over_2b", *names]
    base = [coords.xi1, coords.xi2, coords.xi3, coords.tau, rho / w, s / (2.0 * params.b)]
    data = np.column_stack([np.broadcast_to(np.asarray(c, dtype=float), coords.xi1.shape) for c in base + columns])
    write_csv(args.out, header, (list(map(float, row)) for row in data))
    return 0


def energy_rows(config: RunConfig, max_m: int, max_n: int):
    p = config.params
    for m in range(max_m + 1):
        for n in range(max_n + 1):
            params = derive_parameters(p.m0, p.w0, p.k3, HG(m, n), p.L, p.units)
            e_mode, e_free, transverse = mode_energy(params)
            yield [m, n, params.N, params.k4, e_mode, e_free, transverse]


def cmd_energy(config: RunConfig, args) -> int:
    try:
        max_m, max_n = (int(v) for v in str(config.get("range")).split(","))
    except ValueError:
        raise UsageError(f"--range expects M,N, got {config.get('range')!r}") from None
    if min(max_m, max_n) < 0 or max(max_m, max_n) > 64:
        raise UsageError("--range indices must lie in 0..64")
    header = ["m", "n", "N", "k4", "E_mode", "E_free", "transverse"]
    write_csv(args.out, header, energy_rows(config, max_m, max_n))
    return 0


def cmd_boost(config: RunConfig, args) -> int:
    params = config.params
    beta = _float(config.get("beta"), "beta")
    if not abs(beta) < 1:
        raise UsageError(f"|beta| must be below 1, got {beta}")
    boosted = boost_parameters(params, beta)
    report = VerificationReport()
    invariance = boost_invariance(params, beta)
    report.add("lorentz_invariance", invariance.passed(1e-9), invariance.max_rel, 1e-9, invariance.max_rel)
    report.add("boosted_k3", None, boosted.k3, None, None)
    report.add("boosted_k4", None, boosted.k4, None, None)
    residual = kg_residual(boosted, sample_points(boosted, int(config.get("points")), int(config.get("seed"))))
    report.add("boosted_kg_residual", residual.passed(1e-6), residual.max_rel, 1e-6, residual.max_rel)
    emit_report(report, args, [f"beta {beta:g}  mode {params.mode}"])
    return 0 if report.passed else 1


def cmd_flow(config: RunConfig, args) -> int:
    params = config.params
    seeds = _pairs(config.get("seeds"), "--seeds")
    (tau0, tau1), = _pairs(config.get("tau_range"), "--tau-range")
    steps = int(config.get("steps"))
    if steps < 1:
        raise UsageError("--steps must be positive")
    for seed in seeds:
        if np.hypot(*seed) > 2.0 * params.w0:
            raise UsageError(f"seed {seed} lies outside rho <= 2 w0")
    rows = []
    for index, seed in enumerate(seeds):
        line = trace(params, seed, (tau0, tau1), steps)
        w = beam_radius(params, line.s)
        rho = np.hypot(line.xi[:, 0], line.xi[:, 1])
        for k in range(len(line.tau)):
            rows.append([index, float(line.tau[k]), *map(float, line.xi[k]), float(line.s[k]),
                         float(rho[k] / w[k]), float(line.s[k] / (2.0 * params.b)), int(line.truncated)])
        if line.truncated:
            print(f"seed {index} truncated at tau={line.tau[-1]:.6g}: {line.reason}", file=sys.stderr)
    header = ["seed", "tau", "xi1", "xi2", "xi3", "s", "rho_over_w", "s_over_2b", "truncated"]
    write_csv(args.out, header, rows)
    if not isinstance(params.mode, HG):
        value = circulation(params, params.w0)
        print(f"circulation/hbar at rho=w0: {value / params.hbar:.10g} (l={params.mode.l})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    beam = common.add_argument_group("beam")
    beam.add_argument("--mode", help="hg:M,N or lg:L,P (default hg:0,0)")
    beam.add_argument("--m0", help="rest mass (default 1)")
    beam.add_argument("--w0", help="waist radius (default 2)")
    beam.add_argument("--k3", help="axial wavenumber (default 1)")
    beam.add_argument("--length", help="normalization length L (default 1)")
    beam.add_argument("--hbar", help="value of hbar (default 1)")
    beam.add_argument("--c", help="speed of light (default 1)")
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", help="random seed for sampled points (default 0)")
    common.add_argument("--points", help="number of sampled points (default 100)")

    parser = argparse.ArgumentParser(prog="kgbeams", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--corrupt", choices=("gouy", "b", "N"), help="break the beam on purpose")
    verify.add_argument("--beta", help="boost used by the invariance check (default 0.5)")

    field = sub.add_parser("field", parents=[common], help="export a quantity on a slice as CSV")
    field.add_argument("--quantity", choices=QUANTITIES)
    field.add_argument("--grid", help="NxN resolution (default 33x33)")
    field.add_argument("--extent", help="half-width in units of w(s) (default 2.5)")
    field.add_argument("--tau", help="slice time; the slice is xi3 = v3 tau (default 0)")

    energy = sub.add_parser("energy", parents=[common], help="HG mode energy table as CSV")
    energy.add_argument("--range", help="largest M,N (default 3,3)")

    boost = sub.add_parser("boost", parents=[common], help="Lorentz invariance under an axial boost")
    boost.add_argument("--beta", help="boost velocity over c (default 0.5)")

    flow = sub.add_parser("flow", parents=[common], help="trace current flowlines as CSV")
    flow.add_argument("--seeds", help="x,y;x,y;... start points (default 1,0;0,1;1.5,1.5)")
    flow.add_argument("--tau-range", dest="tau_range", help="a,b (default 0,10)")
    flow.add_argument("--steps", help="RK4 steps (default 200)")
    return parser


COMMANDS = {"verify": cmd_verify, "field": cmd_field, "energy": cmd_energy, "boost": cmd_boost,
            "flow": cmd_flow}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve(args)
        return COMMANDS[args.command](config, args)
    except (UsageError, DomainError) as exc:
        print(f"kgbeams {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
