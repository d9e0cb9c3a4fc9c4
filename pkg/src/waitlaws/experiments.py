"""Named experiments: configs, checks, and deterministic CSV/JSON output.

Every experiment produces a :class:`Report`, a list of rows

    {experiment, n, N, statistic, value, band, pass, ...}

where ``band`` is a short text form of the acceptance condition and
``pass`` is ``None`` for purely informational rows.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import limits
from .cf import farey_waiting_samples
from .distort import critical_arrays, distorted_arrays
from .floatorbits import CENSORED, DEGRADED, OK, lasota_yorke_samples, thaler_samples
from .limits import LimitLaw, limit_law
from .maps import FareyWandering, farey_wandering
from .renewal import renewal_wandering, simulate
from .stats import Ecdf, ReferenceExceedsOne, binomial_ci, ks_distance, ks_uniform, ld_joint, ld_sigma, ld_v_process

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ConfigError",
    "Report",
    "default_config",
    "run",
    "run_dynkin_lamperti",
    "run_critical_farey",
    "run_critical_thaler",
    "run_large_deviation",
    "run_sigma",
    "emit_tables",
    "write_outputs",
]

EXPERIMENTS = ("dynkin-lamperti", "critical", "critical-thaler", "large-deviation", "sigma", "tables")

SQRT_10_9 = int(round(10**4.5))


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    map: str = "farey"
    alphas: list = field(default_factory=lambda: [0.5])
    horizons: list = field(default_factory=lambda: [1000])
    samples: int = 10_000
    seed: int = 0
    x_grid: list = field(default_factory=list)
    xy_grid: list = field(default_factory=list)
    cap: int | None = None
    bands: dict = field(default_factory=dict)
    laws: list = field(default_factory=list)
    grid_points: int = 201
    grid_max: float = 5.0
    max_degraded: float = 0.01
    write_records: bool = False
    # runtime-only: never part of the manifest, never affect results
    out: str | None = None
    jobs: int = 1

    RUNTIME_KEYS = ("out", "jobs")

    def resolved(self) -> dict:
        d = dataclasses.asdict(self)
        for k in self.RUNTIME_KEYS:
            d.pop(k)
        d["xy_grid"] = [list(p) for p in d["xy_grid"]]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.experiment == "tables":
            for a in self.alphas:
                if not 0 < a < 1:
                    raise ConfigError(f"table alpha must lie in (0, 1), got {a}")
            for k in self.laws:
                if k not in limits.PARAMETRIC_KINDS + ("uniform01",):
                    raise ConfigError(f"unknown law {k!r}")
            return
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if not self.horizons or any(int(h) < 2 for h in self.horizons):
            raise ConfigError("need at least one horizon, each >= 2")
        if self.experiment == "dynkin-lamperti":
            if self.map != "renewal":
                raise ConfigError("dynkin-lamperti runs on the renewal surrogate (map 'renewal')")
            if not self.alphas:
                raise ConfigError("need at least one alpha")
            for a in self.alphas:
                if a in (0, 1):
                    raise ConfigError(
                        f"alpha = {a} is a critical case with degenerate limits; use the "
                        "'critical' (alpha = 1, farey or lasota-yorke) or 'critical-thaler' "
                        "(alpha = 0) experiment"
                    )
                if not 0 < a < 1:
                    raise ConfigError(f"alpha must lie in (0, 1), got {a}")
        if self.experiment == "critical" and self.map not in ("farey", "lasota-yorke"):
            raise ConfigError("the alpha = 1 experiment runs on 'farey' or 'lasota-yorke'")
        if self.experiment in ("large-deviation", "sigma") and self.map != "farey":
            raise ConfigError(f"{self.experiment} is implemented for the farey map only")
        if self.experiment == "critical-thaler":
            if self.map != "thaler0":
                raise ConfigError("critical-thaler runs on the 'thaler0' map")
            if self.cap is None or any(self.cap < h for h in self.horizons):
                raise ConfigError("iteration cap must be given and at least every horizon")
            if not self.x_grid or any(not 0 < x <= 1 for x in self.x_grid):
                raise ConfigError("x grid must be non-empty with values in (0, 1]")
            for h in self.horizons:
                xmin = math.log(h) / math.log(self.cap + 1)
                if min(self.x_grid) < xmin:
                    raise ConfigError(
                        f"x = {min(self.x_grid)} needs V up to {h}^(1/x) > cap; raise the cap"
                    )
        if self.experiment == "large-deviation" and not (self.x_grid or self.xy_grid):
            raise ConfigError("large-deviation needs a non-empty x or (x, y) grid")
        for p in self.xy_grid:
            x, y = p
            if not (0 <= x < 1 and y >= 0 and x + y > 0):
                raise ConfigError(f"invalid (x, y) = {tuple(p)}")


_DEFAULTS = {
    "dynkin-lamperti": dict(map="renewal", alphas=[0.3, 0.5, 0.7], horizons=[10**5], samples=50_000,
                            bands={"dynkin_lamperti": 0.02, "distorted": 0.03}),
    "critical": dict(map="farey", horizons=[1000, SQRT_10_9, 10**6], samples=10_000,
                     bands={"ks_final": 0.12}),
    "critical-thaler": dict(map="thaler0", horizons=[1000], samples=1000, cap=10**6,
                            x_grid=[0.5, 0.6, 0.8, 1.0], bands={"pointwise": 0.1}),
    "large-deviation": dict(map="farey", horizons=[10**6], samples=10**6, x_grid=[0.5, 1.0, 2.0],
                            xy_grid=[[0.5, 0.5], [0.0, 1.0]], bands={"ratio": 0.2}),
    "sigma": dict(map="farey", horizons=[1000, SQRT_10_9, 10**6], samples=10_000,
                  x_grid=[1.0], bands={"ks_final": 0.12, "ratio": 0.2}),
    "tables": dict(map="farey", laws=["theta"], alphas=[0.15, 0.3, 0.5, 0.8, 0.98]),
}


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    if experiment not in _DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
    d = dict(_DEFAULTS[experiment])
    d["bands"] = dict(d.get("bands", {}))
    d.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict({"experiment": experiment, **d})


@dataclass
class Report:
    experiment: str
    rows: list = field(default_factory=list)
    records: dict = field(default_factory=dict)  # filename -> CSV text
    tables: dict = field(default_factory=dict)   # filename -> CSV text

    def add(self, n, N, statistic, value, band=None, passed=None, **extra):
        row = {"experiment": self.experiment, "n": n, "N": N, "statistic": statistic,
               "value": _num(value), "band": band, "pass": passed}
        row.update({k: _num(v) for k, v in extra.items()})
        self.rows.append(row)
        return row

    @property
    def all_pass(self) -> bool:
        return all(r["pass"] for r in self.rows if r["pass"] is not None)

    def failures(self) -> list:
        return [r for r in self.rows if r["pass"] is False]


def _num(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, tuple):
        return [_num(u) for u in v]
    return v


def _decreasing_row(rep, name, horizons, values, N):
    diffs = np.diff(values)
    worst = float(diffs.max()) if diffs.size else -math.inf
    rep.add(horizons[-1], N, f"{name}_decrease", worst, band="max step < 0",
            passed=bool(diffs.size == 0 or worst < 0))


# --- experiments -------------------------------------------------------------

_DL_LAWS = (("Y/n", "phi", "dynkin_lamperti"), ("V/n", "eta", "dynkin_lamperti"),
            ("lambda", "lambda", "distorted"), ("gamma", "gamma", "distorted"),
            ("delta", "delta", "distorted"), ("theta", "theta", "distorted"))


def run_dynkin_lamperti(cfg: ExperimentConfig) -> Report:
    """Renewal surrogate: KS of Y/n, V/n and the four distorted processes."""
    cfg.validate()
    rep = Report(cfg.experiment)
    for a in cfg.alphas:
        W = renewal_wandering(a)
        for ws in simulate(a, cfg.horizons, cfg.samples, seed=_sub_seed(cfg.seed, a), jobs=cfg.jobs):
            n = ws.n
            vals = {"Y/n": ws.Y / n, "V/n": ws.V / n}
            vals.update(distorted_arrays(ws, W))
            for stat, law, band_key in _DL_LAWS:
                band = cfg.bands[band_key]
                d = ks_distance(Ecdf(vals[stat]), limit_law(law, a))
                rep.add(n, len(ws), f"ks[{stat} vs {law}]", d, band=f"<= {band}",
                        passed=bool(d <= band), alpha=a)
            if a == 0.5:
                # closed forms at one half: arcsine for theta, Cauchy for delta
                band = cfg.bands["distorted"]
                for stat, name, F in (("theta", "arcsine", lambda t: 2 / np.pi * np.arcsin(np.clip(t, 0, 1))),
                                      ("delta", "cauchy", lambda t: 2 / np.pi * np.arctan(t))):
                    d = ks_distance(Ecdf(vals[stat]), F)
                    rep.add(n, len(ws), f"ks[{stat} vs {name}]", d, band=f"<= {band}",
                            passed=bool(d <= band), alpha=a)
            if cfg.write_records:
                cols = {k: vals[k] for k in ("lambda", "gamma", "delta", "theta")}
                rep.records[f"records_alpha{a}_n{n}.csv"] = ws.to_csv(cols)
    return rep


def _sub_seed(seed: int, alpha: float) -> int:
    # distinct alpha values get unrelated streams; stable across runs
    return int(seed) * 1_000_003 + int(round(alpha * 10**6))


def run_critical_farey(cfg: ExperimentConfig) -> Report:
    """alpha = 1: KS-to-uniform of the two critical statistics per horizon."""
    cfg.validate()
    rep = Report(cfg.experiment)
    band = cfg.bands["ks_final"]
    hs = [int(h) for h in cfg.horizons]
    if cfg.map == "farey":
        names = ("lambda", "delta")
        samples = farey_waiting_samples(hs, cfg.samples, cfg.seed, jobs=cfg.jobs)
        W = FareyWandering()
        stats = []
        for ws in samples:
            d = distorted_arrays(ws, W)
            stats.append((ws, {"lambda": d["lambda"], "delta": d["delta"]}))
            rep.add(ws.n, len(ws), "W_n", farey_wandering(ws.n), closed_form="log(n+2)")
    else:
        names = ("logV_logn", "logYn_logn")
        stats = []
        for n in hs:
            ws = lasota_yorke_samples(n, cfg.samples, cap=cfg.cap, seed=cfg.seed + n, jobs=cfg.jobs)
            status = ws.extra["status"]
            ok = status == OK
            deg = float(np.mean(status == DEGRADED))
            rep.add(n, len(ws), "degraded_fraction", deg, band=f"<= {cfg.max_degraded}",
                    passed=bool(deg <= cfg.max_degraded))
            sub = type(ws)(n, ws.Z[ok], ws.Y[ok], ws.in_A_n[ok])
            stats.append((sub, {k: critical_arrays(sub)[k] for k in names}))
    ks = {k: [] for k in names}
    for ws, vals in stats:
        last = ws.n == hs[-1]
        for k in names:
            d = ks_uniform(vals[k])
            ks[k].append(d)
            rep.add(ws.n, len(ws), f"ks[{k} vs uniform]", d,
                    band=f"<= {band}" if last else None, passed=bool(d <= band) if last else None)
        if cfg.write_records:
            rep.records[f"records_n{ws.n}.csv"] = ws.to_csv(vals)
    if len(hs) > 1:
        for k in names:
            _decreasing_row(rep, f"ks[{k} vs uniform]", hs, ks[k], cfg.samples)
    return rep


def run_critical_thaler(cfg: ExperimentConfig) -> Report:
    """alpha = 0: pointwise P(log n / log V_n <= x) against the uniform law.

    ``log n / log V <= x`` is ``V >= n^(1/x)``; censored samples have
    ``V > cap >= n^(1/x) - 1`` and so count as hits.
    """
    cfg.validate()
    rep = Report(cfg.experiment)
    band = cfg.bands["pointwise"]
    for n in (int(h) for h in cfg.horizons):
        ws = thaler_samples(n, cfg.samples, cfg.cap, seed=cfg.seed + n, jobs=cfg.jobs)
        status = ws.extra["status"]
        usable = status != DEGRADED
        m = int(usable.sum())
        deg = 1 - m / len(ws)
        rep.add(n, len(ws), "degraded_fraction", deg, band=f"<= {cfg.max_degraded}",
                passed=bool(deg <= cfg.max_degraded))
        rep.add(n, len(ws), "censored_fraction", float(np.mean(status == CENSORED)), cap=cfg.cap)
        cens = status == CENSORED
        V, Y = ws.V, ws.Y
        for x in cfg.x_grid:
            thr = n ** (1.0 / x)
            for stat, arr in (("log n/log V", V), ("log n/log Y", Y)):
                hit = (cens | ((status == OK) & (arr >= thr)))[usable]
                h = int(hit.sum())
                p = h / m if m else math.nan
                err = abs(p - x)
                checked = stat == "log n/log V"
                rep.add(n, m, f"P[{stat} <= {x}]", p, band=f"|p - x| <= {band}" if checked else None,
                        passed=bool(err <= band) if checked else None, x=x, reference=x,
                        ci=binomial_ci(h, m) if m else None)
        if cfg.write_records:
            rep.records[f"records_n{n}.csv"] = ws.to_csv({"status": status})
    return rep


def run_large_deviation(cfg: ExperimentConfig) -> Report:
    """Farey: p_hat * log(n+2) / rate for V_n, the joint (age, residual) event and sigma_n."""
    cfg.validate()
    rep = Report(cfg.experiment)
    band = cfg.bands["ratio"]
    hs = [int(h) for h in cfg.horizons]
    for ws in farey_waiting_samples(hs, cfg.samples, cfg.seed, jobs=cfg.jobs):
        ests = []
        for x in cfg.x_grid:
            ests.append((f"V_n/n > {x}", _guard(lambda: ld_v_process(ws, x))))
            ests.append((f"sigma_n/n > {x}", _guard(lambda: ld_sigma(ws.extra["sigma"], ws.n, x))))
        for x, y in cfg.xy_grid:
            ests.append((f"(n-Z_n)/n >= {x}, (Y_n-n)/n > {y}", _guard(lambda: ld_joint(ws, x, y))))
        for name, e in ests:
            if isinstance(e, str):
                rep.add(ws.n, len(ws), f"ratio[{name}]", None, band=None, passed=False, error=e)
                continue
            ok = abs(e.ratio - 1) <= band
            extra = {"x": e.x, "p_hat": e.p_hat, "reference": e.reference, "ci": e.ci}
            if e.y is not None:
                extra["y"] = e.y
            if name.startswith("sigma") and e.x >= 1:
                extra["beyond_hypothesis"] = True
            rep.add(ws.n, len(ws), f"ratio[{name}]", e.ratio, band=f"|r - 1| <= {band}",
                    passed=bool(ok), **extra)
    return rep


def _guard(fn):
    try:
        return fn()
    except ReferenceExceedsOne as exc:
        return str(exc)


def run_sigma(cfg: ExperimentConfig) -> Report:
    """Farey straddling digit: KS of log sigma_n / log n, plus tail ratios."""
    cfg.validate()
    rep = Report(cfg.experiment)
    hs = [int(h) for h in cfg.horizons]
    ks = []
    for ws in farey_waiting_samples(hs, cfg.samples, cfg.seed, jobs=cfg.jobs):
        n = ws.n
        sig = ws.extra["sigma"]
        last = n == hs[-1]
        band = cfg.bands["ks_final"]
        d = ks_uniform(np.log(sig) / math.log(n))
        ks.append(d)
        rep.add(n, len(ws), "ks[log sigma_n/log n vs uniform]", d,
                band=f"<= {band}" if last else None, passed=bool(d <= band) if last else None)
        for x in cfg.x_grid:
            e = _guard(lambda: ld_sigma(sig, n, x))
            if isinstance(e, str):
                rep.add(n, len(ws), f"ratio[sigma_n/n > {x}]", None, passed=None, error=e)
                continue
            rb = cfg.bands["ratio"]
            rep.add(n, len(ws), f"ratio[sigma_n/n > {x}]", e.ratio,
                    band=f"|r - 1| <= {rb}" if last else None,
                    passed=bool(abs(e.ratio - 1) <= rb) if last else None,
                    x=x, p_hat=e.p_hat, reference=e.reference, ci=e.ci,
                    beyond_hypothesis=bool(x >= 1))
    if len(hs) > 1:
        _decreasing_row(rep, "ks[log sigma_n/log n vs uniform]", hs, ks, cfg.samples)
    return rep


def _grid_for(kind: str, points: int, xmax: float) -> np.ndarray:
    if kind in ("theta", "uniform01"):
        return np.linspace(0.0, 1.0, points)
    if kind == "phi":
        return np.linspace(1.0, 1.0 + xmax, points)
    return np.linspace(0.0, xmax, points)


def emit_tables(cfg: ExperimentConfig) -> Report:
    """``(x, pdf, cdf)`` CSV grids for each requested law and alpha."""
    cfg.validate()
    rep = Report(cfg.experiment)
    for kind in cfg.laws:
        laws = [(None, limits.uniform01)] if kind == "uniform01" else [(a, LimitLaw(kind, a)) for a in cfg.alphas]
        for a, law in laws:
            tab = limits.tabulate(law, _grid_for(kind, cfg.grid_points, cfg.grid_max))
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["x", "pdf", "cdf"])
            for row in tab:
                w.writerow([repr(float(v)) for v in row])
            name = f"{kind}.csv" if a is None else f"{kind}_alpha{a}.csv"
            rep.tables[name] = buf.getvalue()
            rep.add(None, None, f"table[{name}]", len(tab))
    return rep


_RUNNERS = {
    "dynkin-lamperti": run_dynkin_lamperti,
    "critical": None,  # dispatched on map below
    "critical-thaler": run_critical_thaler,
    "large-deviation": run_large_deviation,
    "sigma": run_sigma,
    "tables": emit_tables,
}


def run(cfg: ExperimentConfig) -> Report:
    cfg.validate()
    if cfg.experiment == "critical":
        return run_critical_farey(cfg)
    return _RUNNERS[cfg.experiment](cfg)


def write_outputs(cfg: ExperimentConfig, rep: Report, out: str | Path) -> list[Path]:
    """Write report.json, report.csv, manifest.json and any record/table CSVs."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        p = out / name
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        written.append(p)

    put("report.json", json.dumps({"experiment": rep.experiment, "all_pass": rep.all_pass,
                                   "rows": rep.rows}, indent=2, sort_keys=True) + "\n")
    keys = ["experiment", "n", "N", "statistic", "value", "band", "pass"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rep.rows:
        w.writerow(["" if r[k] is None else r[k] for k in keys])
    put("report.csv", buf.getvalue())
    for name, text in sorted(rep.records.items()):
        put(name, text)
    for name, text in sorted(rep.tables.items()):
        put(f"tables/{name}", text)
    manifest = {"config": cfg.resolved(), "files": sorted(str(p.relative_to(out)) for p in written)}
    put("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return written
