"""Command-line frontend: ``sphereosc <subcommand> [--config PATH] ...``.

Exit codes: 0 success, 1 ``validate`` found a failing invariant, 2 invalid
configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .basis import HermiticityError
from .config import ConfigError, RunConfig, default_config, load_config
from .dynamics import (
    NormDriftError,
    SimultaneousDiagonalizationError,
    golden_rule_rate,
    propagate,
    scan_resonances,
    spectrum_of,
    suggest_dt,
    transition_record,
)
from .dynamics.propagate import fastest_frequency
from .hamiltonian import build_operator_set
from .output import write_table
from .validation import run_validation

log = logging.getLogger("sphereosc")

EXIT_OK, EXIT_VALIDATE_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
MELEM_REL_THRESHOLD = 1e-14
NUMERICAL_ERRORS = (HermiticityError, SimultaneousDiagonalizationError, NormDriftError,
                    np.linalg.LinAlgError, ArithmeticError)


class _Run:
    """Operators and spectrum for one config, built on first use."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.model = config.model()
        self.basis = config.basis_spec()
        self._ops = self._spec = None

    @property
    def ops(self):
        if self._ops is None:
            self._ops = build_operator_set(self.basis, self.model.lambda0, self.model.hbar,
                                           self.config.convention)
        return self._ops

    @property
    def spectrum(self):
        if self._spec is None:
            self._spec = spectrum_of(self.ops)
        return self._spec

    def write(self, stem, columns, rows):
        out = self.config.output
        path = write_table(out.directory, stem, columns, rows, self.config.sha256(), out.format)
        log.info("wrote %s (%d rows)", path, len(rows))
        return path

    def allowed_targets(self, i, lo=None, hi=None):
        spec = self.spectrum
        js = [j for j in range(spec.dim) if j != i and spec.m_labels[j] == spec.m_labels[i]]
        if lo is not None:
            js = [j for j in js if lo <= abs(spec.omega(i, j)) <= hi]
        return js


def cmd_spectrum(config: RunConfig):
    run = _Run(config)
    s = run.spectrum
    rows = [(k, s.energies[k], int(s.m_labels[k]), int(cid)) for k, cid in enumerate(s.cluster_ids)]
    return [run.write("spectrum", ("index", "energy", "m_label", "cluster_id"), rows)]


def cmd_melem(config: RunConfig):
    """Every ordered eigenstate pair whose V1 or V1tilde element clears the noise threshold.

    The threshold is relative to the largest element; pairs named in the scan
    section (source/targets) are always written.
    """
    run = _Run(config)
    s = run.spectrum
    v1 = s.in_eigenbasis(run.ops.V1)
    v1t = s.in_eigenbasis(run.ops.V1tilde)
    big = np.maximum(np.abs(v1), np.abs(v1t))
    cut = MELEM_REL_THRESHOLD * big.max()
    requested = set()
    i0 = config.scan.source_state
    for j in config.scan.target_states or ():
        requested |= {(i0, j), (j, i0)}
    rows = []
    for i in range(s.dim):
        for j in range(s.dim):
            if big[j, i] > cut or (i, j) in requested:
                rows.append((i, j, s.omega(i, j), v1[j, i].real, v1[j, i].imag, v1t[j, i].real, v1t[j, i].imag))
    return [run.write("melem", ("i", "j", "omega_ji", "re_v1", "im_v1", "re_v1t", "im_v1t"), rows)]


def cmd_rates(config: RunConfig):
    run = _Run(config)
    i = config.scan.source_state
    targets = config.scan.target_states or run.allowed_targets(i)
    gr = config.goldenrule
    rows = []
    for j in targets:
        if j == i:
            continue
        table = golden_rule_rate(i, j, run.spectrum, run.ops, run.model, gr.kernel, gr.kernel_param)
        rows += [(e.i, e.j, e.mode, e.channel, e.detuning, e.gamma) for e in table.entries]
    return [run.write("rates", ("i", "j", "mode", "channel", "detuning", "gamma"), rows)]


def cmd_propagate(config: RunConfig):
    run = _Run(config)
    p = config.propagation
    spec = run.spectrum
    limit = 2 * np.pi / (20 * fastest_frequency(spec, run.model))
    if p.dt is not None and p.dt > limit:
        raise ConfigError(f"propagation.dt: {p.dt} does not resolve the fastest frequency; need dt <= {limit:.6g}")
    dt = p.dt or suggest_dt(spec, run.model, p.t_final, p.integrator)
    n_steps = int(np.ceil(p.t_final / dt - 1e-9))
    every = max(1, n_steps // 1000)
    res = propagate(p.initial_state_index, run.model, run.ops, p.t_final, dt, p.mode, p.integrator,
                    spec, record_every=every)
    pops = res.populations
    norm = np.abs(np.linalg.norm(res.amplitudes, axis=1) - 1.0)
    cols = ("t", *[f"pop_{k}" for k in range(spec.dim)], "norm_drift")
    rows = [(t, *pops[k], norm[k]) for k, t in enumerate(res.times)]
    return [run.write("propagate", cols, rows)]


def cmd_scan(config: RunConfig):
    run = _Run(config)
    sc = config.scan
    i = sc.source_state
    targets = sc.target_states or run.allowed_targets(i, sc.omega_min, sc.omega_max)
    targets = [j for j in targets if j != i]
    grid = np.linspace(sc.omega_min, sc.omega_max, sc.points)
    res = scan_resonances(i, targets, grid, sc.t_probe, run.spectrum, run.ops, run.model, sc.alpha_probe)
    cols = ("omega", *[f"p_over_t_{j}" for j in targets])
    rows = [(w, *[res.rates[j][k] for j in targets]) for k, w in enumerate(grid)]
    peak_rows = []
    for j in targets:
        gap = abs(run.spectrum.omega(i, j))
        for pk in res.peaks[j]:
            peak_rows.append((i, j, gap, pk.center, pk.height, pk.fwhm))
    return [run.write("scan", cols, rows),
            run.write("scan_peaks", ("i", "j", "gap", "center", "height", "fwhm"), peak_rows)]


def cmd_validate(config: RunConfig):
    run = _Run(config)
    p, gr = config.propagation, config.goldenrule
    checks = run_validation(run.model, run.basis, config.convention, p.t_final, p.dt, p.integrator,
                            p.mode, gr.kernel, gr.kernel_param)
    rows = [(c.module, c.name, c.residual, c.tolerance, c.status) for c in checks]
    path = run.write("validate", ("module", "check", "residual", "tolerance", "status"), rows)
    failed = [c for c in checks if not c.ok]
    for c in failed:
        log.error("invariant failed: %s %s residual %.3e > %.1e", c.module, c.name, c.residual, c.tolerance)
    return [path], (EXIT_VALIDATE_FAILED if failed else EXIT_OK)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "melem": cmd_melem,
    "rates": cmd_rates,
    "propagate": cmd_propagate,
    "scan": cmd_scan,
    "validate": cmd_validate,
}


def _setup_logging():
    level = os.environ.get("SPHEREOSC_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sphereosc", description="Oscillator on a fluctuating sphere.")
    ap.add_argument("--version", action="version", version=f"sphereosc {__version__}")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", type=Path, help="JSON run configuration (packaged default if omitted)")
    ap.add_argument("--output", type=Path, help="output directory (overrides output.directory)")
    ap.add_argument("--format", choices=("csv", "json"), help="overrides output.format")
    ap.add_argument("--threads", type=int, default=None, help="cap on BLAS/LAPACK threads")
    return ap


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads: must be >= 1")
        config = load_config(args.config) if args.config else default_config()
        out = config.output
        if args.output is not None:
            out = replace(out, directory=str(args.output))
        if args.format is not None:
            out = replace(out, format=args.format)
        config = replace(config, output=out)
        with threadpool_limits(limits=args.threads):
            result = COMMANDS[args.command](config)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    _, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    return code


if __name__ == "__main__":
    sys.exit(main())
