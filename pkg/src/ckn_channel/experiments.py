"""Reproducible figure datasets and property scans.

Each ``run_*`` function takes a :class:`RunConfig` and returns a list of
:class:`~ckn_channel.records.ExperimentRecord` rows sharing one schema. Rows
are produced in a fixed order and every random draw comes from a child
stream addressed by the row index, so output does not depend on ``workers``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial

import numpy as np

from .bipartite import PairGeometry, double_scatter_probability, probability_envelope
from .channel import (
    ScatteringGeometry,
    error_probabilities,
    extremal_pure_probabilities,
    kraus_set,
    single_scatter_probability,
)
from .entanglement import SAMPLING_LAWS, entanglement_breaking_scan
from .klein_nishina import klein_nishina_oracle
from .linalg import RngStream, random_pure_state
from .records import ExperimentRecord
from .states import H, PSI_MINUS, PSI_PLUS, RHO_MIXED, UNPOLARIZED, V

EXPERIMENTS = ("fig1", "fig2", "fig3", "kn-check", "scan")
INPUT_STATES = {"psi+": PSI_PLUS, "psi-": PSI_MINUS, "rho-mixed": RHO_MIXED}
FIG1_THETAS = (10.0, 82.0, 170.0)
FIG2_CONFIGS = ((10.0, 10.0), (82.0, 82.0), (82.0, 10.0))
KN_TOL = 1e-10
SCAN_TOL = 1e-10
DEFAULT_GRID = {"fig1": 181, "fig2": 73, "kn-check": 1000}
DEFAULT_SAMPLES = {"fig3": 5000, "scan": 1000}

COLUMNS = {
    "fig1": ["panel", "state", "theta_a_deg", "phi_a_deg", "p1", "p2", "p3",
             "p1_min", "p1_max", "p2_min", "p2_max", "p3_min", "p3_max"],
    "fig2": ["theta_a_deg", "theta_b_deg", "delta_phi_deg", "p_psi_plus", "p_psi_minus",
             "p_rho_mixed", "all_min", "all_max", "product_min", "product_max",
             "maxent_min", "maxent_max"],
    "fig3": ["sample", "theta_a_deg", "theta_b_deg", "phi_a_deg", "c_full", "c_accessible",
             "degenerate"],
    "kn-check": ["theta_deg", "p_kraus", "p_oracle_half", "abs_diff"],
    "scan": ["sample", "theta_s_deg", "phi_s_deg", "theta_a_deg", "phi_a_deg",
             "defect_general", "defect_canonical", "p1", "p2", "p3", "p_single"],
}


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    grid: int | None = None
    theta_a: float | None = None
    theta_b: float | None = None
    samples: int | None = None
    seed: int = 0
    sampling_law: str = "uniform-theta"
    input: str = "psi+"
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        for name in ("grid", "samples", "workers"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        for name in ("theta_a", "theta_b"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 180.0:
                raise ConfigError(f"{name} must be in [0, 180] degrees, got {v!r}")
        if self.sampling_law not in SAMPLING_LAWS:
            raise ConfigError(f"sampling_law must be one of {SAMPLING_LAWS}")
        if self.input not in INPUT_STATES:
            raise ConfigError(f"input must be one of {tuple(INPUT_STATES)}")

    @property
    def grid_points(self) -> int:
        return self.grid or DEFAULT_GRID.get(self.experiment, 181)

    @property
    def sample_count(self) -> int:
        return self.samples or DEFAULT_SAMPLES.get(self.experiment, 1000)


_CONVERTERS = {"grid": int, "samples": int, "seed": int, "workers": int,
               "theta_a": float, "theta_b": float}


def parse_config_text(text: str) -> dict:
    """Parse the flat ``key = value`` config grammar.

    One assignment per line; ``#`` starts a comment; blank lines are ignored;
    dashes and underscores in keys are interchangeable.
    """
    known = {f.name for f in fields(RunConfig)} - {"experiment"}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS.get(key, str)(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return values


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc


def build_config(experiment: str, cli: dict, config_path: str | None = None) -> RunConfig:
    """Merge defaults < config file < CLI flags (``None`` flags are unset).

    Without ``config_path`` the file named by ``CKN_CONFIG`` is used if set.
    """
    merged = {}
    path = config_path or os.environ.get("CKN_CONFIG")
    if path:
        merged.update(load_config_file(path))
    merged.update({k: v for k, v in cli.items() if v is not None})
    try:
        return RunConfig(experiment=experiment, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _map(fn, items, workers):
    items = list(items)
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _envelopes(ks):
    out = {}
    for l in (1, 2, 3):
        lo, hi = extremal_pure_probabilities(ks, l)
        out[f"p{l}_min"], out[f"p{l}_max"] = lo, hi
    return out


def _fig1_row(panel, state_name, theta_deg, phi_deg):
    rho = {"unpolarized": UNPOLARIZED, "H": H, "V": V}[state_name]
    ks = kraus_set(ScatteringGeometry.canonical(np.radians(theta_deg), np.radians(phi_deg)))
    p = error_probabilities(ks, rho)
    return ExperimentRecord(
        "fig1",
        {"panel": panel, "state": state_name, "theta_a_deg": theta_deg, "phi_a_deg": phi_deg},
        {"p1": p[0], "p2": p[1], "p3": p[2], **_envelopes(ks)},
    )


def run_fig1(cfg: RunConfig) -> list[ExperimentRecord]:
    """Single-photon error probabilities.

    Panel ``a``: polar sweep for the unpolarized state. Panels ``b``-``d``:
    azimuth sweeps at 10, 82 and 170 degrees (or ``cfg.theta_a``) for
    ``|H>`` and ``|V>``, with the pure-state envelopes on every row.
    """
    n = cfg.grid_points
    rows = [("a", "unpolarized", float(t), 0.0) for t in np.linspace(0.0, 180.0, n)]
    thetas = (cfg.theta_a,) if cfg.theta_a is not None else FIG1_THETAS
    for panel, theta in zip("bcd", thetas):
        for phi in np.linspace(0.0, 360.0, n):
            for state in ("H", "V"):
                rows.append((panel, state, theta, float(phi)))
    return _map(partial(_apply_star, _fig1_row), rows, cfg.workers)


def _apply_star(fn, args):
    return fn(*args)


def _fig2_row(seed, index, theta_a_deg, theta_b_deg, dphi_deg):
    pg = PairGeometry.from_angles(np.radians(theta_a_deg), np.radians(theta_b_deg),
                                  np.radians(dphi_deg), 0.0)
    all_lo, all_hi = probability_envelope(pg, "all")
    prod_lo, prod_hi = probability_envelope(pg, "product-pure", rng=RngStream(seed, index))
    me_lo, me_hi = probability_envelope(pg, "maximally-entangled")
    return ExperimentRecord(
        "fig2",
        {"theta_a_deg": theta_a_deg, "theta_b_deg": theta_b_deg, "delta_phi_deg": dphi_deg},
        {"p_psi_plus": double_scatter_probability(pg, PSI_PLUS),
         "p_psi_minus": double_scatter_probability(pg, PSI_MINUS),
         "p_rho_mixed": double_scatter_probability(pg, RHO_MIXED),
         "all_min": all_lo, "all_max": all_hi,
         "product_min": prod_lo, "product_max": prod_hi,
         "maxent_min": me_lo, "maxent_max": me_hi},
        seed,
    )


def run_fig2(cfg: RunConfig) -> list[ExperimentRecord]:
    """Double-scattering probability versus ``delta_phi`` (``phi_b = 0``)."""
    if cfg.theta_a is not None or cfg.theta_b is not None:
        configs = ((cfg.theta_a if cfg.theta_a is not None else 82.0,
                    cfg.theta_b if cfg.theta_b is not None else 82.0),)
    else:
        configs = FIG2_CONFIGS
    rows = []
    for ta, tb in configs:
        for dphi in np.linspace(0.0, 360.0, cfg.grid_points):
            rows.append((cfg.seed, len(rows), ta, tb, float(dphi)))
    return _map(partial(_apply_star, _fig2_row), rows, cfg.workers)


def run_fig3(cfg: RunConfig) -> list[ExperimentRecord]:
    """Concurrence after full and post-selected double scattering, random angles."""
    return entanglement_breaking_scan(cfg.sample_count, RngStream(cfg.seed),
                                      INPUT_STATES[cfg.input], cfg.sampling_law, cfg.workers)


def run_kn_check(cfg: RunConfig):
    """Kraus single-scatter probability against half the Klein-Nishina cross section.

    Returns:
        ``(records, failures)`` where ``failures`` are records whose absolute
        difference exceeds ``KN_TOL``.
    """
    records = []
    for theta in np.linspace(0.0, np.pi, cfg.grid_points):
        p = single_scatter_probability(ScatteringGeometry.canonical(theta), UNPOLARIZED)
        q = 0.5 * klein_nishina_oracle(theta)
        records.append(ExperimentRecord(
            "kn-check", {"theta_deg": float(np.degrees(theta))},
            {"p_kraus": p, "p_oracle_half": float(q), "abs_diff": abs(p - q)}))
    failures = [r for r in records if r.outputs["abs_diff"] > KN_TOL]
    return records, failures


def _scan_row(seed, index):
    gen = RngStream(seed).generator(index)
    ts, ta = gen.uniform(0.0, np.pi, size=2)
    ps, pa = gen.uniform(0.0, 2 * np.pi, size=2)
    rho = random_pure_state(2, gen)
    g = ScatteringGeometry(ts, ps, ta, pa)
    general = kraus_set(g, "general")
    canonical = kraus_set(ScatteringGeometry.canonical(ta, pa), "canonical")
    p = error_probabilities(general, rho)
    return ExperimentRecord(
        "scan",
        {"sample": index, "theta_s_deg": float(np.degrees(ts)), "phi_s_deg": float(np.degrees(ps)),
         "theta_a_deg": float(np.degrees(ta)), "phi_a_deg": float(np.degrees(pa))},
        {"defect_general": general.completeness_defect(),
         "defect_canonical": canonical.completeness_defect(),
         "p1": p[0], "p2": p[1], "p3": p[2],
         "p_single": single_scatter_probability(g, rho)},
        seed,
    )


def run_scan(cfg: RunConfig):
    """Completeness and positivity over random geometries and random pure states.

    Returns:
        ``(records, failures)``; a row fails when a completeness defect exceeds
        ``SCAN_TOL`` or a probability leaves ``[-1e-12, 1 + 1e-12]``.
    """
    records = _map(partial(_scan_row, cfg.seed), range(cfg.sample_count), cfg.workers)

    def bad(r):
        o = r.outputs
        probs = (o["p1"], o["p2"], o["p3"])
        return (o["defect_general"] > SCAN_TOL or o["defect_canonical"] > SCAN_TOL
                or min(probs) < -1e-12 or max(probs) > 1 + 1e-12)

    return records, [r for r in records if bad(r)]


def run(cfg: RunConfig):
    """Dispatch on ``cfg.experiment``; returns ``(records, failures)``."""
    if cfg.experiment == "kn-check":
        return run_kn_check(cfg)
    if cfg.experiment == "scan":
        return run_scan(cfg)
    runner = {"fig1": run_fig1, "fig2": run_fig2, "fig3": run_fig3}[cfg.experiment]
    return runner(cfg), []

