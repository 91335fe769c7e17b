"""Deterministic Monte Carlo harness for the calibration studies.

Every scenario is reproducible from (config, seed): each grid point or table
cell owns the substream derived from its position, and within table cells
each replication owns a further substream, so output is byte-identical for
any worker count.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boundary import euclid_d, least_divergent_point, sup_M
from .dist import ChiSqParams, RandomStream, sample_chisq, sample_family
from .divergence import J_uniform
from .evidence import EquivalenceParams, equiv_transform, lof_transform
from .model_fit import evidence_for_normality, evidence_for_poisson
from .pearson import multinomial_power_mc

__all__ = [
    "SimConfig",
    "SimSummary",
    "PoissonCellSummary",
    "Table1Row",
    "SCENARIOS",
    "run_vst_lof",
    "run_vst_equiv",
    "run_normal_table",
    "run_poisson_table",
    "run_table1",
    "run_scenario",
]

SCENARIOS = (
    "vst_lof_calibration",
    "vst_equiv_calibration",
    "normal_fit_table",
    "poisson_fit_table",
    "table1_models",
)

TABLE3_FAMILIES = ("normal", "logistic", "t5")
TABLE4_DISTS = tuple(
    [("poisson", mu) for mu in (1, 5, 10, 20)]
    + [("neg_binomial", mu, 0.01) for mu in (1, 5, 10, 20)]
)
TABLE_N_LIST = (100, 400, 1600, 6400)


@dataclass(frozen=True)
class SimSummary:
    """Mean/sd of evidence values at one grid point, with replication metadata."""

    grid_point: tuple
    mean_t: float
    sd_t: float
    mc_se: float
    reps: int


@dataclass(frozen=True)
class PoissonCellSummary(SimSummary):
    mean_r: float = 0.0
    sd_r: float = 0.0
    mean_m0: float = 0.0
    sd_m0: float = 0.0


@dataclass(frozen=True)
class Table1Row:
    model: str
    d: float
    sup_m: float
    j_div: float
    power: float
    power_se: float
    reps: int


@dataclass(frozen=True)
class SimConfig:
    scenario: str
    reps: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.reps < 100:
            raise ValueError("reps must be at least 100")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        _validate_params(self.scenario, self.params)


_PARAM_KEYS = {
    "vst_lof_calibration": {"nu", "lambda_grid"},
    "vst_equiv_calibration": {"nu", "lambda0", "lambda_grid"},
    "normal_fit_table": {"families", "n_list"},
    "poisson_fit_table": {"dists", "n_list"},
    "table1_models": {"n", "alpha"},
}


def _validate_params(scenario: str, params: dict) -> None:
    extra = set(params) - _PARAM_KEYS[scenario]
    if extra:
        raise ValueError(f"unknown parameters {sorted(extra)} for scenario {scenario!r}")
    for key in ("nu", "lambda0"):
        if key in params and not params[key] > 0:
            raise ValueError(f"{key} must be positive")
    if "lambda_grid" in params and any(l < 0 for l in params["lambda_grid"]):
        raise ValueError("lambda_grid values must be nonnegative")
    if "families" in params:
        bad = set(params["families"]) - set(TABLE3_FAMILIES)
        if bad:
            raise ValueError(f"unknown families {sorted(bad)}; choose from {TABLE3_FAMILIES}")
    if "n_list" in params and any(n < 100 for n in params["n_list"]):
        raise ValueError("n_list entries must be at least 100")
    if "alpha" in params and not (0 < params["alpha"] < 1):
        raise ValueError("alpha must lie strictly in (0, 1)")


def _map_units(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _summarize(grid_point: tuple, values: np.ndarray) -> SimSummary:
    sd = float(values.std(ddof=1))
    return SimSummary(grid_point=grid_point, mean_t=float(values.mean()), sd_t=sd,
                      mc_se=float(sd / np.sqrt(len(values))), reps=len(values))


def run_vst_lof(nu: float, lambda_grid, reps: int, seed: int, workers: int = 1):
    """Simulated mean/sd of the bias-adjusted lack-of-fit evidence per lambda."""
    grid = [float(l) for l in lambda_grid]

    def unit(item):
        idx, lam = item
        s = sample_chisq(RandomStream(seed, idx), ChiSqParams(nu, lam), size=reps)
        return _summarize((nu, lam), lof_transform(s, nu, bias_adjust=True))

    return _map_units(unit, list(enumerate(grid)), workers)


def run_vst_equiv(nu: float, lambda0: float, lambda_grid, reps: int, seed: int,
                  workers: int = 1):
    """Simulated mean/sd of the bias-adjusted equivalence evidence per lambda."""
    params = EquivalenceParams(nu=nu, lambda0=lambda0)
    grid = [float(l) for l in lambda_grid]

    def unit(item):
        idx, lam = item
        s = sample_chisq(RandomStream(seed, idx), ChiSqParams(nu, lam), size=reps)
        return _summarize((nu, lambda0, lam), equiv_transform(s, params, bias_adjust=True))

    return _map_units(unit, list(enumerate(grid)), workers)


def _draw_table3(stream: RandomStream, family: str, n: int) -> np.ndarray:
    if family == "normal":
        return sample_family(stream, "normal", size=n)
    if family == "logistic":
        return sample_family(stream, "logistic", size=n)
    if family == "t5":
        return sample_family(stream, "student_t", size=n, df=5.0)
    raise ValueError(f"unknown family {family!r}")


def run_normal_table(families=TABLE3_FAMILIES, n_list=TABLE_N_LIST, reps: int = 4000,
                     seed: int = 0, workers: int = 1):
    """Evidence-for-normality summaries per (family, n) cell."""
    cells = [(family, int(n)) for family in families for n in n_list]

    def unit(item):
        idx, (family, n) = item
        cell_stream = RandomStream(seed, idx)
        ts = np.empty(reps)
        for i in range(reps):
            data = _draw_table3(cell_stream.substream(i), family, n)
            ts[i] = evidence_for_normality(data).evidence.t
        return _summarize((family, n), ts)

    return _map_units(unit, list(enumerate(cells)), workers)


def _draw_table4(stream: RandomStream, dist: tuple, n: int) -> np.ndarray:
    kind = dist[0]
    if kind == "poisson":
        values = sample_family(stream, "poisson", size=n, mu=dist[1])
    elif kind == "neg_binomial":
        values = sample_family(stream, "neg_binomial", size=n, mu=dist[1], alpha=dist[2])
    else:
        raise ValueError(f"unknown count distribution {dist!r}")
    return np.bincount(values)


def run_poisson_table(dists=TABLE4_DISTS, n_list=TABLE_N_LIST, reps: int = 4000,
                      seed: int = 0, workers: int = 1):
    """Evidence-for-Poisson summaries (plus cell-count and m0 columns) per cell."""
    cells = [(tuple(dist), int(n)) for dist in dists for n in n_list]

    def unit(item):
        idx, (dist, n) = item
        cell_stream = RandomStream(seed, idx)
        ts = np.empty(reps)
        rs = np.empty(reps)
        m0s = np.empty(reps)
        for i in range(reps):
            counts = _draw_table4(cell_stream.substream(i), dist, n)
            report = evidence_for_poisson(counts)
            ts[i] = report.evidence.t
            rs[i] = report.r
            m0s[i] = report.m0
        base = _summarize((dist, n), ts)
        return PoissonCellSummary(
            grid_point=base.grid_point, mean_t=base.mean_t, sd_t=base.sd_t,
            mc_se=base.mc_se, reps=base.reps,
            mean_r=float(rs.mean()), sd_r=float(rs.std(ddof=1)),
            mean_m0=float(m0s.mean()), sd_m0=float(m0s.std(ddof=1)),
        )

    return _map_units(unit, list(enumerate(cells)), workers)


def run_table1(n: int = 100, alpha: float = 0.05, reps: int = 20000, seed: int = 0,
               workers: int = 1):
    """Distance/divergence metrics and simulated power for the reconstructible
    least-divergence model, with a uniform control row."""
    r = 6
    uniform = np.full(r, 1.0 / r)
    p7 = least_divergent_point(r, 0.15)
    rows = []
    for idx, (name, probs) in enumerate([("p7", p7), ("uniform", uniform)]):
        est = multinomial_power_mc(RandomStream(seed, idx), n, probs, uniform,
                                   alpha, reps, workers=workers)
        rows.append(Table1Row(
            model=name,
            d=euclid_d(probs, uniform),
            sup_m=sup_M(probs, uniform),
            j_div=J_uniform(probs, 1),
            power=est.power, power_se=est.se, reps=reps,
        ))
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _rows_to_csv(rows) -> str:
    record = rows[0]
    if isinstance(record, Table1Row):
        header = ["model", "d", "sup_m", "j_div", "power", "power_se", "reps"]
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(getattr(row, c)) for c in header))
        return "\n".join(lines) + "\n"
    extra = ["mean_r", "sd_r", "mean_m0", "sd_m0"] if isinstance(record, PoissonCellSummary) else []
    width = max(len(row.grid_point) for row in rows)
    header = [f"grid_{i}" for i in range(width)] + ["mean_t", "sd_t", "mc_se", "reps"] + extra
    lines = [",".join(header)]
    for row in rows:
        cells = ["/".join(map(str, gp)) if isinstance(gp, tuple) else _fmt(gp)
                 for gp in row.grid_point]
        cells += [_fmt(getattr(row, c)) for c in ["mean_t", "sd_t", "mc_se", "reps"] + extra]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _rows_to_json(rows) -> str:
    def as_dict(row):
        d = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(row).items()}
        return d

    return json.dumps([as_dict(r) for r in rows], sort_keys=True, indent=2) + "\n"


def run_scenario(config: SimConfig, out_dir=None, workers: int = 1):
    """Run one scenario; optionally write CSV + JSON + manifest to out_dir."""
    t0 = time.perf_counter()
    p = config.params
    if config.scenario == "vst_lof_calibration":
        rows = run_vst_lof(p.get("nu", 1.0), p.get("lambda_grid", list(range(36))),
                           config.reps, config.seed, workers)
    elif config.scenario == "vst_equiv_calibration":
        rows = run_vst_equiv(p.get("nu", 1.0), p.get("lambda0", 12.0),
                             p.get("lambda_grid", list(range(26))),
                             config.reps, config.seed, workers)
    elif config.scenario == "normal_fit_table":
        rows = run_normal_table(p.get("families", TABLE3_FAMILIES),
                                p.get("n_list", TABLE_N_LIST),
                                config.reps, config.seed, workers)
    elif config.scenario == "poisson_fit_table":
        rows = run_poisson_table(p.get("dists", TABLE4_DISTS),
                                 p.get("n_list", TABLE_N_LIST),
                                 config.reps, config.seed, workers)
    else:
        rows = run_table1(p.get("n", 100), p.get("alpha", 0.05),
                          config.reps, config.seed, workers)
    elapsed = time.perf_counter() - t0

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{config.scenario}.csv").write_text(_rows_to_csv(rows))
        (out / f"{config.scenario}.json").write_text(_rows_to_json(rows))
        manifest = {
            "scenario": config.scenario,
            "seed": config.seed,
            "reps": config.reps,
            "params": config.params,
            "rows": len(rows),
            "elapsed_s": elapsed,
        }
        (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return rows
