"""JSON run configuration with strict field checking."""
from __future__ import annotations

import hashlib
import json
from dataclasses import MISSING, asdict, dataclass, field, fields
from pathlib import Path

from .background import BackgroundModel, FluctuationMode
from .basis import BasisSpec


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class ModeConfig:
    alpha: float
    omega: float


@dataclass(frozen=True)
class BackgroundConfig:
    R0: float
    modes: tuple[ModeConfig, ...] = ()


@dataclass(frozen=True)
class BasisConfig:
    n_max: int
    pad: int = 4
    quad_order: int | None = None


@dataclass(frozen=True)
class PropagationConfig:
    t_final: float = 20.0
    dt: float | None = None
    integrator: str = "rk4"
    initial_state_index: int = 0
    mode: str = "first_order"


@dataclass(frozen=True)
class ScanConfig:
    omega_min: float = 0.5
    omega_max: float = 6.0
    points: int = 2001
    t_probe: float = 100.0
    alpha_probe: float = 1e-3
    source_state: int = 0
    target_states: tuple[int, ...] | None = None


@dataclass(frozen=True)
class GoldenRuleConfig:
    kernel: str = "sinc2"
    kernel_param: float = 100.0


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    background: BackgroundConfig
    basis: BasisConfig
    hbar: float = 1.0
    convention: str = "printed"
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    goldenrule: GoldenRuleConfig = field(default_factory=GoldenRuleConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def model(self) -> BackgroundModel:
        modes = tuple(FluctuationMode(m.alpha, m.omega) for m in self.background.modes)
        return BackgroundModel(self.background.R0, modes, self.hbar)

    def basis_spec(self) -> BasisSpec:
        b = self.basis
        return BasisSpec(b.n_max, b.pad, b.quad_order)

    def to_dict(self) -> dict:
        return asdict(self)

    def sha256(self) -> str:
        """Hash of the canonical JSON of every section except ``output``."""
        d = self.to_dict()
        d.pop("output")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_SECTIONS = {
    "background": BackgroundConfig,
    "basis": BasisConfig,
    "propagation": PropagationConfig,
    "scan": ScanConfig,
    "goldenrule": GoldenRuleConfig,
    "output": OutputConfig,
}


def _number(value, path, integer=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if integer:
        if int(value) != value:
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _check_keys(data, cls, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown field" if path else f"{unknown[0]}: unknown field")
    required = {f.name for f in fields(cls)
                if f.default is MISSING and f.default_factory is MISSING}
    missing = sorted(required - set(data))
    if missing:
        raise ConfigError(f"{path}.{missing[0]}: required field missing" if path else f"{missing[0]}: required field missing")


def _positive(v, path, strict=True):
    if v is not None and (v <= 0 if strict else v < 0):
        raise ConfigError(f"{path}: must be {'>' if strict else '>='} 0, got {v}")
    return v


def _choice(v, path, options):
    if v not in options:
        raise ConfigError(f"{path}: must be one of {list(options)}, got {v!r}")
    return v


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded JSON object and build a :class:`RunConfig`."""
    _check_keys(data, RunConfig, "")
    hbar = _positive(_number(data.get("hbar", 1.0), "hbar"), "hbar")
    convention = _choice(data.get("convention", "printed"), "convention", ("printed", "consistent"))

    bg = data["background"]
    _check_keys(bg, BackgroundConfig, "background")
    modes = []
    if not isinstance(bg.get("modes", []), list):
        raise ConfigError("background.modes: expected a list")
    for k, m in enumerate(bg.get("modes", [])):
        p = f"background.modes[{k}]"
        _check_keys(m, ModeConfig, p)
        alpha = _positive(_number(m["alpha"], f"{p}.alpha"), f"{p}.alpha", strict=False)
        omega = _positive(_number(m["omega"], f"{p}.omega"), f"{p}.omega")
        modes.append(ModeConfig(alpha, omega))
    background = BackgroundConfig(_positive(_number(bg["R0"], "background.R0"), "background.R0"), tuple(modes))

    b = data["basis"]
    _check_keys(b, BasisConfig, "basis")
    basis = BasisConfig(
        _positive(_number(b["n_max"], "basis.n_max", integer=True), "basis.n_max", strict=False),
        _positive(_number(b.get("pad", 4), "basis.pad", integer=True), "basis.pad", strict=False),
        _positive(_number(b.get("quad_order"), "basis.quad_order", integer=True, allow_none=True), "basis.quad_order"),
    )

    pr = data.get("propagation", {})
    _check_keys(pr, PropagationConfig, "propagation")
    d = PropagationConfig()
    propagation = PropagationConfig(
        _positive(_number(pr.get("t_final", d.t_final), "propagation.t_final"), "propagation.t_final"),
        _positive(_number(pr.get("dt"), "propagation.dt", allow_none=True), "propagation.dt"),
        _choice(pr.get("integrator", d.integrator), "propagation.integrator", ("rk4", "expm_midpoint")),
        _positive(_number(pr.get("initial_state_index", 0), "propagation.initial_state_index", integer=True),
                  "propagation.initial_state_index", strict=False),
        _choice(pr.get("mode", d.mode), "propagation.mode", ("first_order", "exact")),
    )

    sc = data.get("scan", {})
    _check_keys(sc, ScanConfig, "scan")
    d = ScanConfig()
    targets = sc.get("target_states", None)
    if targets is not None:
        if not isinstance(targets, list):
            raise ConfigError("scan.target_states: expected a list or null")
        targets = tuple(_number(t, f"scan.target_states[{k}]", integer=True) for k, t in enumerate(targets))
    scan = ScanConfig(
        _positive(_number(sc.get("omega_min", d.omega_min), "scan.omega_min"), "scan.omega_min"),
        _positive(_number(sc.get("omega_max", d.omega_max), "scan.omega_max"), "scan.omega_max"),
        _positive(_number(sc.get("points", d.points), "scan.points", integer=True), "scan.points"),
        _positive(_number(sc.get("t_probe", d.t_probe), "scan.t_probe"), "scan.t_probe"),
        _positive(_number(sc.get("alpha_probe", d.alpha_probe), "scan.alpha_probe"), "scan.alpha_probe"),
        _positive(_number(sc.get("source_state", 0), "scan.source_state", integer=True), "scan.source_state", strict=False),
        targets,
    )
    if scan.omega_max <= scan.omega_min:
        raise ConfigError("scan.omega_max: must exceed scan.omega_min")

    gr = data.get("goldenrule", {})
    _check_keys(gr, GoldenRuleConfig, "goldenrule")
    d = GoldenRuleConfig()
    golden = GoldenRuleConfig(
        _choice(gr.get("kernel", d.kernel), "goldenrule.kernel", ("sinc2", "lorentzian", "gaussian")),
        _positive(_number(gr.get("kernel_param", d.kernel_param), "goldenrule.kernel_param"), "goldenrule.kernel_param"),
    )

    out = data.get("output", {})
    _check_keys(out, OutputConfig, "output")
    if not isinstance(out.get("directory", "out"), str):
        raise ConfigError("output.directory: expected a string")
    output = OutputConfig(out.get("directory", "out"), _choice(out.get("format", "csv"), "output.format", ("csv", "json")))

    cfg = RunConfig(background, basis, hbar, convention, propagation, scan, golden, output)
    # cross-field checks against module invariants
    try:
        model = cfg.model()
        spec = cfg.basis_spec()
    except ValueError as exc:
        section = "basis" if "quad" in str(exc) or "n_max" in str(exc) else "background"
        raise ConfigError(f"{section}: {exc}") from exc
    if scan.alpha_probe / background.R0 > model.small_amplitude_guard:
        raise ConfigError("scan.alpha_probe: exceeds the small-amplitude guard")
    dim = spec.dim
    for path, idx in (("propagation.initial_state_index", propagation.initial_state_index),
                      ("scan.source_state", scan.source_state), *[
                          (f"scan.target_states[{k}]", t) for k, t in enumerate(scan.target_states or ())]):
        if idx >= dim:
            raise ConfigError(f"{path}: index {idx} outside basis of dimension {dim}")
    return cfg


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(data)


DEFAULT_CONFIG = {
    "hbar": 1.0,
    "background": {"R0": 5.0, "modes": [{"alpha": 0.001, "omega": 2.1606448677547}]},
    "basis": {"n_max": 8, "pad": 4},
    "propagation": {"t_final": 20.0, "dt": 0.003, "integrator": "rk4",
                    "initial_state_index": 0, "mode": "first_order"},
    "scan": {"omega_min": 0.5, "omega_max": 6.0, "points": 2001, "t_probe": 100.0,
             "alpha_probe": 0.001, "source_state": 0, "target_states": None},
    "goldenrule": {"kernel": "sinc2", "kernel_param": 100.0},
    "output": {"directory": "out", "format": "csv"},
}


def default_config() -> RunConfig:
    return parse_config(json.loads(json.dumps(DEFAULT_CONFIG)))
