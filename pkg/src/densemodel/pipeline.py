"""End-to-end sparse counting pipeline with machine-readable reports.

One run builds a majorant, selects a dense subset A of its support, forms the
weighted indicator f = 1_A nu, constructs a bounded approximant g by the
chosen variant, counts solutions of the linear form under f, g, and the
threshold level set of g, and certifies every inequality along the way.  The
report is canonical JSON: identical configs produce byte-identical bytes.

Config files are flat `key = value` text; every numeric claim in a report
carries its certification kind (exact, certified-bound, or sampled-estimate).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .counting import (
    LinearForm,
    count_comparison,
    count_weighted,
    threshold_extract,
    transfer_error_bound,
)
from .errors import DenseModelError, ValidationError
from .majorants import (
    Majorant,
    diagnose,
    make_random_sparse,
    make_squares,
    make_uniform,
    make_weighted_primes,
)
from .models import (
    green_model,
    hahn_banach_model,
    hdr_model,
    naslund_model,
)
from .signals import DiscreteSignal, FrequencyGrid

SCHEMA_VERSION = "tlab-report/1"

MAJORANT_KINDS = ("uniform", "sparse", "squares", "primes")
VARIANTS = ("green", "hdr", "naslund", "hahn_banach")
SELECTIONS = ("structured", "random")


def report_schema_version() -> str:
    return SCHEMA_VERSION


@dataclass
class PipelineConfig:
    """Every knob of one pipeline run; round-trips through flat key=value text."""

    N: int = 2000
    majorant: str = "sparse"
    exponent: float = 2.0 / 3.0
    delta: float = 0.5
    selection: str = "structured"
    seed: int = 0
    form: tuple = (1, 1, -2)
    variant: str = "hdr"
    eps: float = 0.1
    eta: float = 0.1
    k: int = 3
    p: float = 4.0
    grid_m: int = 0
    tol: float = 1e-6
    strict: bool = False
    output: str = ""

    def validate(self) -> None:
        if self.N < 1:
            raise ValidationError("config: N must be >= 1")
        if self.majorant not in MAJORANT_KINDS:
            raise ValidationError(f"config: unknown majorant {self.majorant!r}")
        if self.variant not in VARIANTS:
            raise ValidationError(f"config: unknown variant {self.variant!r}")
        if self.selection not in SELECTIONS:
            raise ValidationError(f"config: unknown selection {self.selection!r}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError("config: delta must lie in [0, 1]")
        LinearForm(self.form)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["form"] = list(self.form)
        return d

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "form":
                text = ",".join(str(int(c)) for c in v)
            elif isinstance(v, bool):
                text = "true" if v else "false"
            elif isinstance(v, float):
                text = repr(v)
            else:
                text = str(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        kinds = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"config line {ln}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in kinds:
                raise ValidationError(f"config line {ln}: unknown key {key!r}")
            default = getattr(cls(), key)
            try:
                if key == "form":
                    kwargs[key] = tuple(int(c) for c in val.split(","))
                elif isinstance(default, bool):
                    if val not in ("true", "false"):
                        raise ValueError(val)
                    kwargs[key] = val == "true"
                elif isinstance(default, int):
                    kwargs[key] = int(val)
                elif isinstance(default, float):
                    kwargs[key] = float(val)
                else:
                    kwargs[key] = val
            except ValueError as e:
                raise ValidationError(
                    f"config line {ln}: bad value for {key}: {val!r}") from e
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def read(cls, path) -> "PipelineConfig":
        with open(path) as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class PipelineReport:
    data: dict = field(repr=False)

    @property
    def ok(self) -> bool:
        return bool(self.data["ok"])

    def to_json(self) -> str:
        return canonical_json(self.data)


def _plain(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def canonical_json(data: dict) -> str:
    """Deterministic serialization: sorted keys, fixed separators, repr floats."""
    return json.dumps(_plain(data), sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"


def build_majorant(cfg: PipelineConfig) -> Majorant:
    if cfg.majorant == "uniform":
        return make_uniform(cfg.N)
    if cfg.majorant == "sparse":
        return make_random_sparse(cfg.N, cfg.exponent, cfg.seed)
    if cfg.majorant == "squares":
        return make_squares(cfg.N)
    return make_weighted_primes(cfg.N)


def select_subset(nu: Majorant, delta: float, selection: str,
                  seed: int) -> tuple[DiscreteSignal, int]:
    """f = 1_A nu for A of relative density delta inside supp nu.

    Structured mode keeps every ceil(1/delta)-th support element in increasing
    order; random mode draws a seeded uniform subset of size round(delta * |S|).
    """
    sig = nu.signal
    supp = np.nonzero(sig.values)[0]
    if delta == 0.0 or len(supp) == 0:
        return DiscreteSignal.zero(), 0
    if selection == "structured":
        step = math.ceil(1.0 / delta)
        chosen = supp[::step]
    else:
        rng = np.random.default_rng(seed)
        size = max(0, min(len(supp), round(delta * len(supp))))
        if size == 0:
            return DiscreteSignal.zero(), 0
        chosen = np.sort(rng.choice(supp, size=size, replace=False))
    vals = np.zeros_like(sig.values)
    vals[chosen] = sig.values[chosen]
    return DiscreteSignal(sig.support_lo, vals).trimmed(), len(chosen)


def _run_model(cfg: PipelineConfig, f: DiscreteSignal, nu: Majorant):
    grid = FrequencyGrid(cfg.grid_m) if cfg.grid_m else None
    if cfg.variant == "green":
        return green_model(f, nu, cfg.eps, cfg.eta, grid=grid, strict=cfg.strict)
    if cfg.variant == "hdr":
        return hdr_model(f, nu, cfg.eps, grid=grid, strict=cfg.strict)
    if cfg.variant == "naslund":
        return naslund_model(f, nu, cfg.k, cfg.p, grid=grid, strict=cfg.strict)
    return hahn_banach_model(f, nu, grid=grid, tol=cfg.tol)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DenseModelError as e:
        raise type(e)(f"stage {name}: {e}") from e


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    cfg.validate()
    flags: list = []
    claims: list = []

    def claim(name: str, kind: str, value, bound=None, ok=None):
        entry = {"name": name, "kind": kind, "value": value}
        if bound is not None:
            entry["bound"] = bound
        if ok is not None:
            entry["ok"] = bool(ok)
        claims.append(entry)

    nu = _stage("majorant", build_majorant, cfg)
    f, subset_size = _stage("subset", select_subset,
                            nu, cfg.delta, cfg.selection, cfg.seed)
    if f.is_zero:
        flags.append("empty_subset")
    diag = _stage("diagnose", diagnose, nu,
                  FrequencyGrid(cfg.grid_m) if cfg.grid_m else None,
                  seed=cfg.seed)
    model = _stage("model", _run_model, cfg, f, nu)
    flags.extend(model.flags)

    form = LinearForm(cfg.form)
    count_f = _stage("count", count_weighted, form, [f] * form.s)
    count_g = _stage("count", count_weighted, form, [model.g] * form.s)
    threshold = _stage("threshold", threshold_extract, model.g, cfg.delta, cfg.N)
    flags.extend(threshold.flags)
    comparison = _stage("threshold", count_comparison, form, model.g, threshold)
    transfer = _stage("transfer", transfer_error_bound, form, f, model.g)

    claim("fourier_err_upper", "certified-bound",
          model.fourier_err.certified_upper)
    checks = model.checks
    if "off_spectrum_max" in checks:
        claim("off_spectrum", "certified-bound", checks["off_spectrum_max"],
              checks["off_spectrum_bound"], checks["off_spectrum_ok"])
        claim("representative", "certified-bound", checks["representative_max"],
              checks["representative_bound"], checks["representative_ok"])
    if "linf_bound" in checks:
        claim("g_linf", "certified-bound", model.g_linf,
              checks["linf_bound"], checks["linf_ok"])
    if "l2_bound" in checks:
        claim("g_l2", "certified-bound", checks["l2_sum"],
              checks["l2_bound"], checks["l2_ok"])
    if "lk_collapse_bound" in checks:
        claim("g_lk", "certified-bound", checks["lk_sum"],
              checks["lk_collapse_bound"], checks["lk_collapse_ok"])
    if "t_star" in checks:
        claim("lp_optimum", "certified-bound", checks["t_star"],
              checks["t_upper"], checks["converged"])
    claim("transfer", "certified-bound",
          abs(transfer.count_f - transfer.count_g), transfer.delta, transfer.ok)
    claim("threshold_floor", "exact", threshold.size,
          threshold.certified_floor, threshold.ok)
    claim("count_comparison", "exact", comparison.count_g,
          comparison.factor * comparison.count_indicator, comparison.ok)
    for p, val in diag.restriction_estimate.items():
        claim(f"restriction_p{p:g}", "sampled-estimate", val)

    ok = all(c["ok"] for c in claims if "ok" in c)
    data = {
        "schema": report_schema_version(),
        "config": cfg.as_dict(),
        "majorant": {
            "mass": nu.l1_mass,
            "support_size": int(np.count_nonzero(nu.signal.values)),
            "metadata": dict(nu.metadata),
        },
        "diagnostics": diag.as_dict(),
        "subset": {"size": subset_size, "selection": cfg.selection,
                   "delta": cfg.delta, "mass_f": float(np.sum(f.values))},
        "model": model.as_dict(),
        "counts": {"f": count_f.as_dict(), "g": count_g.as_dict()},
        "threshold": threshold.as_dict(),
        "comparison": comparison.as_dict(),
        "transfer": transfer.as_dict(),
        "claims": claims,
        "flags": flags,
        "ok": ok,
    }
    report = PipelineReport(data=_plain(data))
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(report.to_json())
    return report
