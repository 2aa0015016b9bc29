"""Declarative experiment specs and the sweep runner.

A spec is usually loaded from YAML::

    model: {alpha: 1.2, variant: PurePareto, u0: 1.0}
    sweep:
      - {n: 10, x: 100}
      - {n: 10, x: 1000, c: 0.3, b: 0.3}
    estimators: [crude, decomposition, one_big_pos, refined]
    samples: 100000
    seed: 20240601
    ci_level: 0.99
    workers: 1
    regime_threshold: 0.2
    output: {path: report.csv, format: csv}

Omitted ``c``/``b`` are filled by :func:`bigjump.regime.default_cb`. Every
sweep point uses the spec seed; distinct estimators draw from distinct
stream tags, and ``crude``/``decomposition`` share one batch by design.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import yaml

from . import bounds, mc, regime
from .dist import TailModel, Variant
from .events import TERM_NAMES, EventKind, EventParams
from .report import ReportRow
from .streams import resolve_workers

log = logging.getLogger(__name__)

ESTIMATORS = ("crude", "decomposition", "one_big_pos", "one_big_neg", "one_mid", "refined")
BOUND_METHOD = "Bound"
ORACLE_METHOD = "Oracle"


class ConfigError(ValueError):
    """Invalid experiment spec; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class SweepPoint:
    n: int
    x: float
    c: Optional[float] = None
    b: Optional[float] = None


@dataclass
class ExperimentSpec:
    alpha: float = 1.2
    variant: str = Variant.PURE.value
    u0: float = 1.0
    sweep: list = field(default_factory=lambda: [SweepPoint(10, 100.0)])
    estimators: tuple = ESTIMATORS
    samples: int = 100_000
    seed: int = 20240601
    ci_level: float = mc.DEFAULT_CI_LEVEL
    workers: object = 1
    regime_threshold: float = regime.DEFAULT_THRESHOLD
    out: Optional[str] = None
    format: str = "csv"

    def model(self) -> TailModel:
        return TailModel(self.alpha, self.u0, Variant(self.variant))

    def validate(self) -> "ExperimentSpec":
        if self.variant not in {v.value for v in Variant}:
            raise ConfigError("model.variant", f"expected one of {[v.value for v in Variant]}, got {self.variant!r}")
        for name in ("alpha", "u0"):
            try:
                float(getattr(self, name))
            except (TypeError, ValueError):
                raise ConfigError(f"model.{name}", f"not a number: {getattr(self, name)!r}") from None
        if not 0.0 < self.alpha < 2.0:
            raise ConfigError("model.alpha", f"must lie in (0, 2), got {self.alpha!r}")
        if not (self.u0 > 0 and math.isfinite(self.u0)):
            raise ConfigError("model.u0", f"must be positive and finite, got {self.u0!r}")
        if not self.sweep:
            raise ConfigError("sweep", "at least one sweep point is required")
        for i, pt in enumerate(self.sweep):
            c = 0.5 if pt.c is None else pt.c
            b = 0.5 if pt.b is None else pt.b
            try:
                EventParams(pt.n, pt.x, c, b)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"sweep[{i}]", str(exc)) from None
        unknown = [e for e in self.estimators if e not in ESTIMATORS]
        if unknown:
            raise ConfigError("estimators", f"unknown estimator(s) {unknown}; choose from {list(ESTIMATORS)}")
        if isinstance(self.samples, bool) or int(self.samples) != self.samples or self.samples < mc.MIN_SAMPLES:
            raise ConfigError("samples", f"must be an integer >= {mc.MIN_SAMPLES}, got {self.samples!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an integer in [0, 2**64), got {self.seed!r}")
        if not 0.0 < self.ci_level < 1.0:
            raise ConfigError("ci_level", f"must lie in (0, 1), got {self.ci_level!r}")
        try:
            resolve_workers(self.workers)
        except (TypeError, ValueError) as exc:
            raise ConfigError("workers", str(exc)) from None
        if not self.regime_threshold > 0:
            raise ConfigError("regime_threshold", "must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("output.format", f"expected csv or json, got {self.format!r}")
        return self

    def resolved(self) -> dict:
        """Plain-data view of the spec, echoed into JSON report metadata."""
        d = asdict(self)
        d["estimators"] = list(self.estimators)
        d["sweep"] = [asdict(p) for p in self.sweep]
        d["workers"] = resolve_workers(self.workers)
        return d


def _points(raw) -> list[SweepPoint]:
    if not isinstance(raw, list):
        raise ConfigError("sweep", "must be a list of {n, x, c?, b?} mappings")
    pts = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "n" not in item or "x" not in item:
            raise ConfigError(f"sweep[{i}]", "each point needs at least n and x")
        extra = set(item) - {"n", "x", "c", "b"}
        if extra:
            raise ConfigError(f"sweep[{i}]", f"unknown keys {sorted(extra)}")
        try:
            pts.append(
                SweepPoint(
                    n=int(item["n"]),
                    x=float(item["x"]),
                    c=None if item.get("c") is None else float(item["c"]),
                    b=None if item.get("b") is None else float(item["b"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sweep[{i}]", str(exc)) from None
    return pts


def spec_from_dict(data: dict, base: Optional[ExperimentSpec] = None) -> ExperimentSpec:
    spec = base or ExperimentSpec()
    data = dict(data or {})
    updates = {}
    model = data.pop("model", {}) or {}
    if not isinstance(model, dict):
        raise ConfigError("model", "must be a mapping")
    for key in ("alpha", "variant", "u0"):
        if key in model:
            updates[key] = model.pop(key)
    if model:
        raise ConfigError("model", f"unknown keys {sorted(model)}")
    output = data.pop("output", {}) or {}
    if "path" in output:
        updates["out"] = output.pop("path")
    if "format" in output:
        updates["format"] = output.pop("format")
    if output:
        raise ConfigError("output", f"unknown keys {sorted(output)}")
    if "sweep" in data:
        updates["sweep"] = _points(data.pop("sweep"))
    if "estimators" in data:
        est = data.pop("estimators")
        updates["estimators"] = tuple([est] if isinstance(est, str) else est or ())
    for key in ("samples", "seed", "ci_level", "workers", "regime_threshold"):
        if key in data:
            updates[key] = data.pop(key)
    if data:
        raise ConfigError(sorted(data)[0], "unknown configuration key")
    return replace(spec, **updates)


def load_spec(path) -> ExperimentSpec:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror or exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"{path} is not valid YAML: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ConfigError("config", f"{path} must contain a mapping at top level")
    return spec_from_dict(data or {})


@dataclass
class RunResult:
    rows: list
    metadata: dict


def _point_params(spec: ExperimentSpec, pt: SweepPoint):
    flagged = False
    try:
        dc, db = regime.default_cb(spec.alpha, pt.n, pt.x)
    except regime.RegimeError as exc:
        log.warning("%s; estimators still run with c=b=%.2g where not given", exc, regime.C_MAX)
        dc = db = regime.C_MAX
        flagged = True
    params = EventParams(pt.n, pt.x, dc if pt.c is None else pt.c, db if pt.b is None else pt.b)
    return params, flagged


def run(spec: ExperimentSpec) -> RunResult:
    """Run every estimator and bound at every sweep point.

    Output rows depend only on the spec (not on ``workers``), except for the
    ``wall_time`` column.
    """
    spec.validate()
    model = spec.model()
    workers = resolve_workers(spec.workers)
    kw = dict(ci_level=spec.ci_level, workers=workers)
    N, seed = int(spec.samples), int(spec.seed)
    rows, violations = [], []

    for pt in spec.sweep:
        params, flagged = _point_params(spec, pt)
        rr = regime.ratios(spec.alpha, params)
        if flagged:
            violations.append({"n": params.n, "x": params.x, "r1": rr.r1})

        def row(method, target, value, stderr=0.0, lo=None, hi=None, samples=0, wall=0.0):
            return ReportRow(
                alpha=model.alpha,
                variant=model.variant.value,
                n=params.n,
                x=params.x,
                c=params.c,
                b=params.b,
                r1=rr.r1,
                r2=rr.r2,
                r3=rr.r3,
                method=method,
                target=target,
                value=float(value),
                stderr=float(stderr),
                ci_lo=float(value if lo is None else lo),
                ci_hi=float(value if hi is None else hi),
                samples=int(samples),
                seed=seed,
                wall_time=float(wall),
            )

        def from_estimate(e: mc.Estimate, wall):
            return row(e.method.value, e.target, e.value, e.stderr, e.ci_lo, e.ci_hi, e.samples, wall)

        for name in ESTIMATORS:
            if name not in spec.estimators:
                continue
            t0 = time.perf_counter()
            if name == "crude":
                ests = [mc.estimate_crude(model, params, N, seed, **kw)]
            elif name == "decomposition":
                d = mc.estimate_decomposition(model, params, N, seed, **kw)
                ests = [d[k] for k in EventKind] + [d.total]
            elif name == "one_big_pos":
                ests = [mc.estimate_one_big(model, params, "+", N, seed, **kw)]
            elif name == "one_big_neg":
                ests = [mc.estimate_one_big(model, params, "-", N, seed, **kw)]
            elif name == "one_mid":
                ests = [mc.estimate_one_mid(model, params, N, seed, **kw)]
            else:
                ests = [mc.estimate_refined(model, params, N, seed, **kw)]
            wall = time.perf_counter() - t0
            rows.extend(from_estimate(e, wall) for e in ests)

        t0 = time.perf_counter()
        lb = bounds.term_bounds(model, params)
        wall = time.perf_counter() - t0
        p10 = lb.p10_upper_I
        for target, value in (
            ("feller_lower", lb.feller_lower),
            ("p0_upper", lb.p0_upper),
            ("pge2_upper", lb.pge2_upper),
            ("p10_I", p10.I),
            ("p10_I1", p10.I1),
            ("p10_I2", p10.I2),
            ("p10_I3", p10.I3),
            ("p10_explicit_upper", lb.p10_explicit_upper),
            ("p11m_upper", lb.p11m_upper),
            ("p11p_upper", lb.p11p_upper),
            ("diff_upper", lb.diff_upper),
        ):
            rows.append(row(BOUND_METHOD, target, value, wall=wall))
        if params.n <= 2:
            t0 = time.perf_counter()
            exact = bounds.convolution_oracle(model, params.n, params.x)
            rows.append(row(ORACLE_METHOD, "total", exact, wall=time.perf_counter() - t0))

    metadata = {
        "config": spec.resolved(),
        "seed": seed,
        "columns": list(ReportRow.__dataclass_fields__),
        "regime_threshold": spec.regime_threshold,
        "regime_violations": violations,
        "term_names": {k.name: v for k, v in TERM_NAMES.items()},
    }
    return RunResult(rows=rows, metadata=metadata)


def parse_x_values(text: str) -> list[float]:
    """Parse ``"100"`` or the log range ``"lo:hi:count"`` (``count`` log-spaced points)."""
    if ":" not in text:
        return [float(text)]
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like lo:hi:count, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo < hi) or count < 2:
        raise ValueError(f"range needs 0 < lo < hi and count >= 2, got {text!r}")
    a, b = math.log10(lo), math.log10(hi)
    return [10.0 ** (a + (b - a) * i / (count - 1)) for i in range(count)]
