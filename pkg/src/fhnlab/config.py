"""Experiment configuration: INI-style files, strict parsing, presets.

A config has four sections — model, sim, ic, output — with a flat key-value
layout. Unknown sections or keys are rejected so that typos fail loudly
instead of silently running a default experiment. ``RunConfig.resolve``
turns a parsed config into the (ModelSpec, StateField, SimConfig) triple the
simulator consumes.
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import ConfigError
from .grid import GridFunction, StateField, UniformGrid
from .model import (
    ConstantProfile,
    ModelKind,
    ModelSpec,
    WellProfile,
    stationary_solution,
)
from .sim import SimConfig
from .spectral import CosineBasis

__all__ = [
    "IcConfig",
    "ModelConfig",
    "OutputConfig",
    "RunConfig",
    "build_ic",
    "preset",
    "PRESET_NAMES",
]

_KINDS = {
    "ode_fhn": ModelKind.ODE_FHN,
    "toy_linear": ModelKind.TOY_LINEAR,
    "toy_nonlinear": ModelKind.TOY_NONLINEAR,
    "const_c_fhn": ModelKind.CONST_C_FHN,
    "nh_fhn": ModelKind.NH_FHN,
}


@dataclass(frozen=True)
class ModelConfig:
    kind: str = "toy_nonlinear"
    alpha: float = 0.0
    epsilon: float = 1.0
    d: float = 1.0
    a: float = 0.0
    b: float = 1.0
    profile: str = "constant"
    c: float = 0.0
    p: float = 1.0

    def to_spec(self) -> ModelSpec:
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}")
        kind = _KINDS[self.kind]
        if self.profile == "constant":
            prof = ConstantProfile(self.c)
        elif self.profile == "well":
            prof = WellProfile(self.p)
        else:
            raise ConfigError(f"unknown profile {self.profile!r}")
        try:
            return ModelSpec(
                kind=kind, epsilon=self.epsilon, d=self.d, alpha=self.alpha,
                a=self.a, b=self.b, c_profile=prof,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class IcConfig:
    """Initial condition recipe.

    kinds: ``step`` (left/right values, optionally copied to v),
    ``modes`` (explicit cosine coefficients "k:u_k:v_k, ..."),
    ``stationary`` (the stationary state plus an optional single-mode
    perturbation), ``random`` (seeded band-limited noise in u), and
    ``from_file`` (two-column text file with u and v nodal values).
    """

    kind: str = "step"
    left: float = 1.0
    right: float = -1.0
    v_from_u: bool = True
    modes: tuple[tuple[int, float, float], ...] = ()
    amplitude: float = 0.0
    perturb_mode: int = 1
    n_modes: int = 3
    seed: int = 0
    path: str = ""


@dataclass(frozen=True)
class OutputConfig:
    out_dir: str = "out"
    snapshots: bool = True
    series: bool = True


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    dt: float = 1e-5
    t_end: float = 1.0
    h: float = 0.02
    record_every: int = 1000
    series_every: int = 0
    backend: str = "fd"
    n_modes: int = 32
    probes: tuple[float, ...] = ()
    safety: float = 0.9
    ic: IcConfig = field(default_factory=IcConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # -- resolution ---------------------------------------------------

    def grid(self) -> UniformGrid:
        m = self.model
        n = int(round((m.b - m.a) / self.h)) + 1
        if n < 3:
            raise ConfigError("grid spacing h leaves fewer than 3 nodes")
        if abs((m.b - m.a) / (n - 1) - self.h) > 1e-9 * max(1.0, self.h):
            raise ConfigError("h does not evenly divide the domain length")
        return UniformGrid(m.a, m.b, n)

    def sim_config(self) -> SimConfig:
        try:
            return SimConfig(
                dt=self.dt, t_end=self.t_end, record_every=self.record_every,
                series_every=self.series_every, backend=self.backend,
                n_modes=self.n_modes, probe_positions=self.probes,
                safety=self.safety,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def resolve(self):
        spec = self.model.to_spec()
        grid = self.grid()
        return spec, build_ic(self.ic, spec, grid), self.sim_config()

    # -- serialization ------------------------------------------------

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"config parse failure: {exc}") from exc
        known = {"model", "sim", "ic", "output"}
        extra = set(parser.sections()) - known
        if extra:
            raise ConfigError(f"unknown config sections: {sorted(extra)}")

        model = _load_section(parser, "model", ModelConfig)
        ic = _load_section(parser, "ic", IcConfig)
        output = _load_section(parser, "output", OutputConfig)
        sim_fields = {
            f.name: f for f in fields(cls)
            if f.name not in ("model", "ic", "output")
        }
        kwargs = {}
        if parser.has_section("sim"):
            for key, raw in parser.items("sim"):
                if key not in sim_fields:
                    raise ConfigError(f"unknown key {key!r} in [sim]")
                kwargs[key] = _coerce(sim_fields[key], raw)
        return cls(model=model, ic=ic, output=output, **kwargs)

    def to_ini(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        parser["model"] = {f.name: _fmt(getattr(self.model, f.name))
                           for f in fields(ModelConfig)}
        parser["sim"] = {
            f.name: _fmt(getattr(self, f.name))
            for f in fields(RunConfig)
            if f.name not in ("model", "ic", "output")
        }
        parser["ic"] = {f.name: _fmt(getattr(self.ic, f.name))
                        for f in fields(IcConfig)}
        parser["output"] = {f.name: _fmt(getattr(self.output, f.name))
                            for f in fields(OutputConfig)}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        return cls.from_ini(text)


def _fmt(value) -> str:
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ", ".join(f"{k}:{u:.17g}:{v:.17g}" for k, u, v in value)
        return ", ".join(f"{x:.17g}" for x in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _coerce(fld, raw: str):
    raw = raw.strip()
    typ = fld.type
    try:
        if typ == "bool":
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"not a boolean: {raw!r}")
            return raw.lower() in ("true", "1", "yes")
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float(raw)
        if fld.name == "modes":
            if not raw:
                return ()
            out = []
            for item in raw.split(","):
                k, u, v = item.strip().split(":")
                out.append((int(k), float(u), float(v)))
            return tuple(out)
        if fld.name == "probes":
            if not raw:
                return ()
            return tuple(float(x) for x in raw.split(","))
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {fld.name!r}: {raw!r} ({exc})") from exc


def _load_section(parser, name, cls):
    if not parser.has_section(name):
        return cls()
    by_name = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, raw in parser.items(name):
        if key not in by_name:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        kwargs[key] = _coerce(by_name[key], raw)
    return cls(**kwargs)


# ---------------------------------------------------------------------------
# initial conditions


def build_ic(ic: IcConfig, spec: ModelSpec, grid: UniformGrid) -> StateField:
    if ic.kind == "step":
        mid = 0.5 * (grid.a + grid.b)
        u = np.where(grid.x < mid, ic.left, ic.right)
        u[np.isclose(grid.x, mid)] = 0.5 * (ic.left + ic.right)
        v = u.copy() if ic.v_from_u else np.zeros_like(u)
        return StateField(GridFunction(grid, u), GridFunction(grid, v))
    if ic.kind == "modes":
        basis = CosineBasis(grid.a, grid.b)
        u = np.zeros(grid.n)
        v = np.zeros(grid.n)
        for k, uk, vk in ic.modes:
            phi = basis.eval(k, grid.x)
            u += uk * phi
            v += vk * phi
        return StateField(GridFunction(grid, u), GridFunction(grid, v))
    if ic.kind == "stationary":
        base = stationary_solution(spec, grid.n)
        if ic.amplitude == 0.0:
            return base
        basis = CosineBasis(grid.a, grid.b)
        bump = ic.amplitude * basis.eval(ic.perturb_mode, grid.x)
        return StateField(
            GridFunction(grid, base.u.values + bump),
            GridFunction(grid, base.v.values.copy()),
        )
    if ic.kind == "random":
        rng = np.random.default_rng(ic.seed)
        basis = CosineBasis(grid.a, grid.b)
        amp = ic.amplitude or 1.0
        u = np.zeros(grid.n)
        for k in range(ic.n_modes + 1):
            u += amp * rng.uniform(-1.0, 1.0) * basis.eval(k, grid.x)
        return StateField(GridFunction(grid, u), GridFunction(grid, np.zeros(grid.n)))
    if ic.kind == "from_file":
        try:
            data = np.loadtxt(ic.path)
        except OSError as exc:
            raise ConfigError(f"cannot read IC file {ic.path!r}: {exc}") from exc
        if data.ndim != 2 or data.shape != (grid.n, 2):
            raise ConfigError(
                f"IC file must hold {grid.n} rows of (u, v); got {data.shape}"
            )
        return StateField(GridFunction(grid, data[:, 0]), GridFunction(grid, data[:, 1]))
    raise ConfigError(f"unknown ic kind {ic.kind!r}")


# ---------------------------------------------------------------------------
# presets


def _toy_preset(alpha: float, ic: IcConfig, t_end: float = 100.0) -> RunConfig:
    return RunConfig(
        model=ModelConfig(kind="toy_nonlinear", alpha=alpha),
        dt=1e-5, t_end=t_end, h=0.02, record_every=10000, series_every=1000,
        ic=ic,
    )


def _nhfhn_preset(p: float, fast: bool) -> RunConfig:
    return RunConfig(
        model=ModelConfig(kind="nh_fhn", epsilon=0.1, d=1.0, a=-50.0, b=50.0,
                          profile="well", p=p),
        dt=2e-4 if fast else 1e-4,
        t_end=100.0 if fast else 200.0,
        h=0.1 if fast else 0.05,
        record_every=25000 if fast else 100000,
        series_every=250 if fast else 500,
        probes=(-46.0, 0.0),
        ic=IcConfig(kind="stationary", amplitude=0.1, perturb_mode=0),
    )


def preset(name: str, fast: bool = False, seed: int = 0) -> RunConfig:
    """Named experiment configurations for the reproduction runs."""
    if name == "fig1":
        cfg = _toy_preset(1.0, IcConfig(kind="step", left=1.0, right=-1.0))
    elif name == "fig2":
        cfg = _toy_preset(1.0, IcConfig(kind="step", left=1.0, right=-0.5))
    elif name == "fig3":
        cfg = _toy_preset(15.0, IcConfig(kind="step", left=1.0, right=-1.0))
    elif name == "fig4":
        cfg = _toy_preset(15.0, IcConfig(kind="step", left=1.0, right=-0.5))
    elif name == "nhfhn_p1.1":
        cfg = _nhfhn_preset(1.1, fast)
    elif name == "nhfhn_p2":
        cfg = _nhfhn_preset(2.0, fast)
    elif name == "ode_c-1.5":
        cfg = RunConfig(
            model=ModelConfig(kind="ode_fhn", epsilon=0.5, c=-1.5),
            dt=1e-4, t_end=200.0, record_every=100,
            ic=IcConfig(kind="modes", modes=((0, 0.0, 0.0),)),
        )
    elif name == "ode_c0":
        cfg = RunConfig(
            model=ModelConfig(kind="ode_fhn", epsilon=0.5, c=0.0),
            dt=1e-4, t_end=400.0, record_every=100,
            ic=IcConfig(kind="modes", modes=((0, 0.1, 0.0),)),
        )
    else:
        raise ConfigError(f"unknown preset {name!r}")
    if fast and not name.startswith("nhfhn"):
        cfg = replace(cfg, t_end=min(cfg.t_end, 20.0))
    if seed:
        cfg = replace(cfg, ic=replace(cfg.ic, seed=seed))
    return cfg


PRESET_NAMES = (
    "fig1", "fig2", "fig3", "fig4",
    "nhfhn_p1.1", "nhfhn_p2", "ode_c-1.5", "ode_c0",
)
