"""Command-line entry point: experiment presets and tabular export.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .action import BracketFailureError, period, wkb_levels
from .classical import stationary_points
from .io import ConfigError, OutputTable, RunConfig, write_table
from .model import ModelParams, Parity, build_sector
from .scaling import (
    doublet_decay_fit,
    dos_histogram,
    fit_inverse_log,
    fit_power_law,
    measure_separatrix_spacing,
    minimal_gap_pair,
    scar_report,
    staircase_deviation,
)
from .spectrum import doublet_splittings, eigen_k, gap, merged_spectrum

FIG1_LAMBDAS = [1.2, 1.5, 2.0]
FIG1_NS = [500, 750, 1000, 1250, 1500]
GAP13_NS = [500, 1000, 2000, 4000, 8000]
DOUBLET_NS = [60, 80, 100, 120]
SCAR_CASES = [(lam, n) for lam in (1.5, 2.0) for n in (800, 1600, 3200)]


def _header(config: RunConfig) -> dict:
    return {
        "tool": f"lmglab {__version__}",
        "config": config.echo(),
        "resolution": config.resolution,
    }


def _require(config: RunConfig, *names):
    for name in names:
        key = "lambda" if name == "lam" else name
        if getattr(config, name) is None:
            raise ConfigError(key, "required for this command")


def _params(config: RunConfig) -> ModelParams:
    _require(config, "lam", "n")
    return ModelParams(coupling=config.lam, n_particles=config.n)


def cmd_spectrum(config: RunConfig) -> list[OutputTable]:
    spec = merged_spectrum(_params(config))
    rows = [
        (lv.global_index, lv.parity.value, lv.sector_index, lv.energy, lv.scaled_energy)
        for lv in spec.levels
    ]
    return [
        OutputTable(
            "spectrum",
            ["global_index", "sector", "sector_index", "energy", "K"],
            rows,
            _header(config),
        )
    ]


def cmd_eigvec(config: RunConfig) -> list[OutputTable]:
    params = _params(config)
    if config.sector == "both":
        raise ConfigError("sector", "eigvec requires an explicit sector (even or odd)")
    parity = Parity(config.sector)
    sector = build_sector(params, parity)
    pair = eigen_k(sector, config.level)
    rows = list(zip(sector.basis.m_values.tolist(), pair.components.tolist()))
    header = _header(config)
    header["energy"] = format(pair.level.energy, ".17g")
    return [OutputTable("eigvec", ["m", "amplitude"], rows, header)]


def cmd_classical(config: RunConfig) -> list[OutputTable]:
    _require(config, "lam")
    rows = [
        (sp.kind.value, sp.point.mu, sp.point.phi, sp.k_value, sp.quartic)
        for sp in stationary_points(config.lam)
    ]
    return [
        OutputTable(
            "classical", ["kind", "mu", "phi", "K", "quartic"], rows, _header(config)
        )
    ]


def cmd_wkb(config: RunConfig) -> list[OutputTable]:
    if config.preset == "weyl":
        return preset_weyl(config)
    params = _params(config)
    count = config.count if config.count is not None else min(params.n_particles, 20)
    levels = wkb_levels(params, count, config.resolution)
    rows = [(lv.k_index, lv.k_value, lv.energy, lv.doublet) for lv in levels]
    return [
        OutputTable("wkb", ["k_index", "K", "energy", "doublet"], rows, _header(config))
    ]


def cmd_dos(config: RunConfig) -> list[OutputTable]:
    spec = merged_spectrum(_params(config))
    hist = dos_histogram(spec, config.bins)
    rows = [
        (hist.bin_edges[i], hist.bin_edges[i + 1], int(hist.counts[i]))
        for i in range(len(hist.counts))
    ]
    return [OutputTable("dos", ["bin_lo", "bin_hi", "count"], rows, _header(config))]


def cmd_localize(config: RunConfig) -> list[OutputTable]:
    if config.preset == "scar":
        return preset_scar(config)
    params = _params(config)
    spec = merged_spectrum(params)
    report = scar_report(spec, params, config.n_components)
    if report is None:
        raise ConfigError("lambda", "localization requires lambda > 1")
    rows = [
        (
            report.level.parity.value,
            report.level.sector_index,
            report.level.scaled_energy,
            report.fraction,
            max(report.neighbor_fractions),
        )
    ]
    return [
        OutputTable(
            "localize",
            ["sector", "sector_index", "K", "fraction", "max_neighbor_fraction"],
            rows,
            _header(config),
        )
    ]


def cmd_scaling(config: RunConfig) -> list[OutputTable]:
    dispatch = {
        "fig1": preset_fig1,
        "fig2": preset_fig2,
        "gap13": preset_gap13,
        "doublet": preset_doublet,
        "scar": preset_scar,
        "weyl": preset_weyl,
    }
    if config.preset is None:
        raise ConfigError("preset", "scaling requires a preset")
    return dispatch[config.preset](config)


def _fit_rows(fit) -> tuple:
    return (fit.slope, fit.amplitude, fit.r_squared, fit.n_points, fit.residual_max)


FIT_COLUMNS = ["slope", "amplitude", "r_squared", "n_points", "residual_max"]


def preset_fig1(config: RunConfig) -> list[OutputTable]:
    lambdas = config.lambda_list or FIG1_LAMBDAS
    ns = config.n_list or FIG1_NS
    sweep_rows = []
    fit_rows = []
    for lam in lambdas:
        spacings = []
        for n in ns:
            spec = merged_spectrum(ModelParams(lam, n))
            m = measure_separatrix_spacing(spec, lam)
            spacings.append(m.spacing)
            sweep_rows.append(
                (lam, n, m.spacing, m.window_minimum, m.at_level.scaled_energy, m.warning)
            )
        fit = fit_inverse_log(ns, spacings)
        closed_form = 2 * math.pi * math.sqrt(lam * lam - 1)
        fit_rows.append((lam, fit.amplitude, closed_form, fit.r_squared))
    header = _header(config)
    return [
        OutputTable(
            "fig1_sweep",
            ["lambda", "n", "spacing", "window_min", "at_K", "warning"],
            sweep_rows,
            header,
        ),
        OutputTable(
            "fig1_fit", ["lambda", "f_fit", "f_closed_form", "r_squared"], fit_rows, header
        ),
    ]


def preset_fig2(config: RunConfig) -> list[OutputTable]:
    n = config.n or 5000
    spec = merged_spectrum(ModelParams(1.0, n))
    e0 = spec.levels[0].energy
    picked = spec.levels[8:500:8]
    rows = [(lv.sector_index, lv.energy - e0) for lv in picked]
    fit = fit_power_law([r[0] for r in rows], [r[1] for r in rows])
    header = _header(config)
    return [
        OutputTable("fig2_sweep", ["k", "excitation"], rows, header),
        OutputTable("fig2_fit", FIT_COLUMNS, [_fit_rows(fit)], header),
    ]


def preset_gap13(config: RunConfig) -> list[OutputTable]:
    ns = config.n_list or GAP13_NS
    gaps = [gap(ModelParams(1.0, n)) for n in ns]
    fit = fit_power_law(ns, gaps)
    header = _header(config)
    return [
        OutputTable("gap13_sweep", ["n", "gap"], list(zip(ns, gaps)), header),
        OutputTable("gap13_fit", FIT_COLUMNS, [_fit_rows(fit)], header),
    ]


def preset_doublet(config: RunConfig) -> list[OutputTable]:
    lam = config.lam if config.lam is not None else 1.5
    ns = config.n_list or DOUBLET_NS
    rows = []
    for n in ns:
        spec = merged_spectrum(ModelParams(lam, n))
        pairs = doublet_splittings(spec, lam)
        if pairs:
            rows.append((n, pairs[0].splitting, pairs[0].below_resolution))
    fit = doublet_decay_fit(lam, ns)
    header = _header(config)
    return [
        OutputTable("doublet_sweep", ["n", "splitting", "below_resolution"], rows, header),
        OutputTable("doublet_fit", FIT_COLUMNS, [_fit_rows(fit)], header),
    ]


def preset_scar(config: RunConfig) -> list[OutputTable]:
    cases = SCAR_CASES
    rows = []
    for lam, n in cases:
        params = ModelParams(lam, n)
        spec = merged_spectrum(params)
        report = scar_report(spec, params, config.n_components)
        rows.append(
            (
                lam,
                n,
                report.level.parity.value,
                report.level.sector_index,
                report.level.scaled_energy,
                report.fraction,
                max(report.neighbor_fractions),
            )
        )
    return [
        OutputTable(
            "scar",
            ["lambda", "n", "sector", "sector_index", "K", "fraction", "max_neighbor_fraction"],
            rows,
            _header(config),
        )
    ]


def preset_weyl(config: RunConfig) -> list[OutputTable]:
    res = config.resolution
    rows = []
    for lam, n in ((0.5, 1000), (1.5, 1000)):
        params = ModelParams(lam, n)
        spec = merged_spectrum(params)
        rows.append((lam, n, res, staircase_deviation(spec, params, res)))
    lam = 2.0
    period_rows = []
    halves = []
    for d in range(2, 7):
        t_half = period(-1 - 10 ** -d, lam, res) / 2
        period_rows.append((d, t_half))
        halves.append(t_half)
    slope = float(np.polyfit(range(2, 7), halves, 1)[0])
    header = _header(config)
    return [
        OutputTable("weyl_staircase", ["lambda", "n", "resolution", "max_deviation"], rows, header),
        OutputTable(
            "weyl_period",
            ["decade", "per_well_period"],
            period_rows,
            {**header, "slope_per_decade": format(slope, ".17g")},
        ),
    ]


DISPATCH = {
    "spectrum": cmd_spectrum,
    "eigvec": cmd_eigvec,
    "classical": cmd_classical,
    "wkb": cmd_wkb,
    "scaling": cmd_scaling,
    "localize": cmd_localize,
    "dos": cmd_dos,
}


def run_command(config: RunConfig) -> list[OutputTable]:
    return DISPATCH[config.command](config)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmg", description="Exact and semiclassical LMG spectra"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in DISPATCH:
        p = sub.add_parser(name)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--resolution", type=int, default=None)
        p.add_argument("--sector", choices=["even", "odd", "both"], default=None)
        p.add_argument("--preset", default=None)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--level", type=int, default=None)
        p.add_argument("--count", type=int, default=None)
        p.add_argument("--bins", type=int, default=None)
        p.add_argument("--n-components", dest="n_components", type=int, default=None)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    args = _build_parser().parse_args(argv)
    file_values = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError("config", f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}")
        if not isinstance(file_values, dict):
            raise ConfigError("config", "config file must hold a JSON object")
    config = RunConfig(command=args.command)
    aliases = {"lambda": "lam"}
    for key, value in file_values.items():
        attr = aliases.get(key, key)
        if not hasattr(config, attr) or attr == "command":
            raise ConfigError(key, "unknown configuration key")
        setattr(config, attr, value)
    # flags override file values
    for attr in (
        "lam", "n", "out", "sector", "preset", "level", "count", "bins",
        "n_components", "resolution",
    ):
        value = getattr(args, attr)
        if value is not None:
            setattr(config, attr, value)
    if args.resolution is None and "resolution" not in file_values:
        config.resolution = 2048 if config.preset else 256
    if args.level is None and "level" not in file_values:
        config.level = 0
    return config.validate()


def _write_outputs(tables: list[OutputTable], config: RunConfig) -> None:
    out = config.out
    if out is None:
        for table in tables:
            sys.stdout.write(table.render())
        return
    path = Path(out)
    if len(tables) > 1 or str(out).endswith("/") or path.is_dir():
        path.mkdir(parents=True, exist_ok=True)
        for table in tables:
            write_table(table, path / f"{table.name}.csv")
    else:
        write_table(tables[0], path)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        tables = run_command(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, BracketFailureError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    try:
        _write_outputs(tables, config)
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
