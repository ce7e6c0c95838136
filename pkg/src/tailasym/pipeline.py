"""End-to-end analysis pipeline: CSV in, deterministic report out.

The pipeline aligns two columns on a key, optionally converts price levels to
log-returns, orients the requested tail upward, runs the estimator sweep and
the bootstrap tests, and emits a JSON or CSV report.  Emission is fully
deterministic: dictionaries keep insertion order, floats are rounded to 12
significant digits before serialization, and repeated runs with the same
inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .bootstrap import (
    summarize_rejection,
    test_delta_zero,
    test_eta_zero,
)
from .errors import (
    DomainError,
    EmptyIntersection,
    IoError,
    KOutOfRange,
    MissingColumn,
    NonPositivePrice,
    SeriesTooShort,
    UnparsableValue,
)
from .estimators import Direction, delta_sweep
from .ranks import make_sample


@dataclass(frozen=True, eq=False)
class SeriesTable:
    """Aligned numeric columns keyed by a shared identifier column."""

    keys: tuple
    columns: dict
    source: str

    @property
    def n_rows(self) -> int:
        return len(self.keys)


def load_csv(path, key_column, value_columns):
    """Read the requested columns from a headered CSV, inner-joined on the key.

    Rows with an empty key or an empty cell in any requested column are
    dropped (missing data); text that is present but not a finite number is an
    error, reported with its line and column.  Rows are returned sorted by
    key: numerically when every key parses as an integer, lexicographically
    otherwise.  Duplicate keys are kept in input order.
    """
    wanted = list(dict.fromkeys(value_columns))
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None

    rows = []
    with handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise UnparsableValue(f"{path} has no header row")
        missing = [c for c in [key_column, *wanted] if c not in reader.fieldnames]
        if missing:
            raise MissingColumn(
                f"{path} lacks column(s) {', '.join(repr(m) for m in missing)}"
            )
        for record in reader:
            key = record.get(key_column)
            if key is None or key.strip() == "":
                continue
            cells = [record.get(c) for c in wanted]
            if any(c is None or c.strip() == "" for c in cells):
                continue
            parsed = []
            for name, cell in zip(wanted, cells):
                try:
                    val = float(cell)
                except ValueError:
                    raise UnparsableValue(
                        f"{path} line {reader.line_num}, column {name!r}:"
                        f" cannot parse {cell!r}"
                    ) from None
                if not math.isfinite(val):
                    raise UnparsableValue(
                        f"{path} line {reader.line_num}, column {name!r}:"
                        f" non-finite value {cell!r}"
                    )
                parsed.append(val)
            rows.append((key, parsed))

    if not rows:
        raise EmptyIntersection(
            f"{path}: no rows with a key and values in {', '.join(map(repr, wanted))}"
        )

    def _as_int(text):
        try:
            return int(text)
        except ValueError:
            return None

    int_keys = [_as_int(k) for k, _ in rows]
    if all(v is not None for v in int_keys):
        order = sorted(range(len(rows)), key=lambda i: int_keys[i])
    else:
        order = sorted(range(len(rows)), key=lambda i: rows[i][0])

    keys = tuple(rows[i][0] for i in order)
    columns = {}
    for j, name in enumerate(wanted):
        col = np.asarray([rows[i][1][j] for i in order], dtype=np.float64)
        col.flags.writeable = False
        columns[name] = col
    return SeriesTable(keys=keys, columns=columns, source=str(path))


def log_returns(prices):
    """First differences of log price levels; prices must be strictly positive."""
    p = np.asarray(prices, dtype=np.float64)
    if p.ndim != 1:
        raise DomainError(f"prices must be one-dimensional, got shape {p.shape}")
    if p.size < 2:
        raise SeriesTooShort(f"need at least 2 prices, got {p.size}")
    bad = np.flatnonzero(~(p > 0.0) | ~np.isfinite(p))
    if bad.size:
        raise NonPositivePrice(f"prices[{bad[0]}] = {p[bad[0]]!r} is not a positive real")
    return np.diff(np.log(p))


def tail_view(values, tail):
    """Orient the requested tail upward: identity for 'upper', negation for 'lower'."""
    v = np.asarray(values, dtype=np.float64)
    if tail == "upper":
        return v.copy()
    if tail == "lower":
        return -v
    raise DomainError(f"tail must be 'upper' or 'lower', got {tail!r}")


@dataclass(frozen=True, eq=False)
class AcfSummary:
    """Sample autocorrelations at lags 1..max_lag with a white-noise band."""

    values: np.ndarray
    band: float
    n: int

    @property
    def lags(self):
        return np.arange(1, self.values.size + 1)

    def exceed_band(self):
        """Lags whose absolute autocorrelation pokes out of the +/- band."""
        return [int(l) for l, v in zip(self.lags, self.values) if abs(v) > self.band]


def acf(values, max_lag) -> AcfSummary:
    """Biased (divide-by-n) sample autocorrelation at lags 1..max_lag.

    The reported band +/- 1.96/sqrt(n) is the usual asymptotic white-noise
    yardstick.  Requires n > max_lag >= 1 and a non-constant series.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DomainError(f"values must be one-dimensional, got shape {v.shape}")
    if not (isinstance(max_lag, (int, np.integer)) and max_lag >= 1):
        raise DomainError(f"max_lag must be an integer >= 1, got {max_lag!r}")
    max_lag = int(max_lag)
    n = v.size
    if n <= max_lag:
        raise SeriesTooShort(f"need more than {max_lag} observations, got {n}")
    centered = v - v.mean()
    c0 = float(np.dot(centered, centered)) / n
    if c0 == 0.0:
        raise DomainError("autocorrelation of a constant series is undefined")
    vals = np.asarray(
        [float(np.dot(centered[lag:], centered[:-lag])) / n / c0 for lag in range(1, max_lag + 1)]
    )
    vals.flags.writeable = False
    return AcfSummary(values=vals, band=1.96 / math.sqrt(n), n=n)


def default_kgrid(n):
    """The default tail-size grid for a sample of size n.

    Large samples (n >= 2500) use the fixed grid 100, 110, ..., 500; smaller
    ones spread up to 20 points between ceil(5% of n) and floor(20% of n).
    """
    if not (isinstance(n, (int, np.integer))) or isinstance(n, bool):
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n >= 2500:
        return list(range(100, 501, 10))
    lo = max(2, -(-n // 20))
    hi = n // 5
    if hi < lo:
        raise SeriesTooShort(f"sample of size {n} leaves no usable tail sizes")
    span = hi - lo + 1
    if span <= 20:
        return list(range(lo, hi + 1))
    grid = np.unique(np.round(np.linspace(lo, hi, 20)).astype(np.int64))
    return [int(g) for g in grid]


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything run_pair_analysis needs besides the data itself."""

    k_min: Optional[int] = None
    k_max: Optional[int] = None
    k_step: Optional[int] = None
    B: int = 100
    alpha: float = 0.05
    seed: int = 0
    tail: str = "upper"
    tie_policy: str = "reject"
    rejection_fraction: float = 0.75
    eta_gate: bool = True
    prices: bool = False
    skip_tests: bool = False
    acf_lags: int = 50
    output_format: str = "json"

    def materialize_kgrid(self, n):
        given = (self.k_min, self.k_max, self.k_step)
        if any(g is not None for g in given):
            if any(g is None for g in given):
                raise DomainError("k_min, k_max and k_step must be given together")
            k_min, k_max, k_step = (int(g) for g in given)
            if k_step < 1:
                raise KOutOfRange(f"k_step must be >= 1, got {k_step}")
            if k_min < 2:
                raise KOutOfRange(f"k_min must be >= 2, got {k_min}")
            if k_max < k_min:
                raise KOutOfRange(f"k_max {k_max} is below k_min {k_min}")
            if k_max > n - 1:
                raise KOutOfRange(
                    f"k_max {k_max} exceeds n-1 = {n - 1}; tail sizes must leave"
                    " at least one observation out"
                )
            return list(range(k_min, k_max + 1, k_step))
        grid = default_kgrid(n)
        return [k for k in grid if k <= n - 1]


def _echo_config(config, kgrid):
    return {
        "package": f"tailasym {__version__}",
        "kgrid": [int(k) for k in kgrid],
        "B": config.B,
        "alpha": config.alpha,
        "seed": config.seed,
        "tail": config.tail,
        "tie_policy": config.tie_policy,
        "rejection_fraction": config.rejection_fraction,
        "eta_gate": config.eta_gate,
        "prices_as_log_returns": config.prices,
        "tests": not config.skip_tests,
        "multiplier_scheme": "unit_exponential",
        "output_format": config.output_format,
    }


def _acf_block(series, config):
    out = {}
    for name, values in series.items():
        max_lag = min(config.acf_lags, len(values) - 1)
        if max_lag < 1:
            out[name] = {"skipped": "series too short"}
            continue
        try:
            summary = acf(values, max_lag)
        except DomainError as exc:
            out[name] = {"skipped": str(exc)}
            continue
        out[name] = {
            "max_lag": int(max_lag),
            "band": summary.band,
            "lags_beyond_band": summary.exceed_band(),
            "max_abs": float(np.max(np.abs(summary.values))),
        }
    return out


@dataclass(frozen=True, eq=False)
class Report:
    """Analysis output: config echo, provenance, per-k table, verdicts."""

    config: dict
    provenance: dict
    per_k: dict
    verdicts: dict

    def to_document(self):
        """JSON-ready nested dict (insertion-ordered, floats rounded)."""
        doc = {
            "config": self.config,
            "provenance": self.provenance,
            "per_k": self.per_k,
            "verdicts": self.verdicts,
        }
        return _round_floats(doc)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _verdict_dict(results, threshold):
    verdict = summarize_rejection(results, threshold)
    return {
        "fraction_below_alpha": verdict.fraction_below_alpha,
        "reject": verdict.reject,
        "threshold": verdict.threshold,
        "n_k": verdict.n_k,
    }


def run_pair_analysis(table, col_x, col_y, config) -> Report:
    """Full pair analysis of two columns of an aligned table.

    Estimates both directional tail coefficients and their difference over the
    tail-size grid, runs the corresponding bootstrap tests, and packages the
    results with provenance (tail orientation, tie handling, autocorrelation
    diagnostics).  When the eta gate is active, the asymmetry test is only run
    if at least one directional sweep rejects tail independence: asymmetry of
    an empty tail is meaningless.
    """
    for col in (col_x, col_y):
        if col not in table.columns:
            raise MissingColumn(f"table has no column {col!r}")

    x = np.asarray(table.columns[col_x], dtype=np.float64)
    y = np.asarray(table.columns[col_y], dtype=np.float64)
    if config.prices:
        x = log_returns(x)
        y = log_returns(y)
    x = tail_view(x, config.tail)
    y = tail_view(y, config.tail)

    acf_summary = _acf_block({col_x: x, col_y: y}, config)
    sample = make_sample(x, y, tie_policy=config.tie_policy, seed=config.seed)
    kgrid = config.materialize_kgrid(sample.n)
    if not kgrid:
        raise SeriesTooShort(
            f"no usable tail sizes for a sample of {sample.n} observations"
        )

    deltas = delta_sweep(sample, kgrid)
    per_k = {
        "k": [int(k) for k in kgrid],
        "eta_xy": [d.eta_xy for d in deltas],
        "eta_yx": [d.eta_yx for d in deltas],
        "delta": [d.value for d in deltas],
        "p_eta_xy": [None] * len(kgrid),
        "p_eta_yx": [None] * len(kgrid),
        "p_delta": [None] * len(kgrid),
        "ci_delta_low": [None] * len(kgrid),
        "ci_delta_high": [None] * len(kgrid),
        "boot_sd_delta": [None] * len(kgrid),
    }
    verdicts = {}

    delta_gated = False
    if not config.skip_tests:
        res_xy = test_eta_zero(
            sample, kgrid, B=config.B, alpha=config.alpha, seed=config.seed,
            direction=Direction.X_GIVEN_Y,
        )
        res_yx = test_eta_zero(
            sample, kgrid, B=config.B, alpha=config.alpha, seed=config.seed,
            direction=Direction.Y_GIVEN_X,
        )
        per_k["p_eta_xy"] = [r.p_value for r in res_xy]
        per_k["p_eta_yx"] = [r.p_value for r in res_yx]
        verdicts["eta_xy"] = _verdict_dict(res_xy, config.rejection_fraction)
        verdicts["eta_yx"] = _verdict_dict(res_yx, config.rejection_fraction)

        run_delta = True
        if config.eta_gate:
            run_delta = verdicts["eta_xy"]["reject"] or verdicts["eta_yx"]["reject"]
        if run_delta:
            res_d = test_delta_zero(
                sample, kgrid, B=config.B, alpha=config.alpha, seed=config.seed
            )
            per_k["p_delta"] = [r.p_value for r in res_d]
            per_k["ci_delta_low"] = [r.ci_low for r in res_d]
            per_k["ci_delta_high"] = [r.ci_high for r in res_d]
            per_k["boot_sd_delta"] = [r.boot_sd for r in res_d]
            verdicts["delta"] = _verdict_dict(res_d, config.rejection_fraction)
        else:
            delta_gated = True
            verdicts["delta"] = {
                "skipped": "eta gate: neither directional sweep rejects"
            }

    provenance = {
        "source": table.source,
        "columns": {"x": col_x, "y": col_y},
        "rows_aligned": table.n_rows,
        "observations_analyzed": int(sample.n),
        "prices_converted_to_log_returns": bool(config.prices),
        "tail": config.tail,
        "tie_policy": config.tie_policy,
        "jitter_applied": bool(sample.jittered),
        "delta_test_gated_out": delta_gated,
        "acf": acf_summary,
    }
    return Report(
        config=_echo_config(config, kgrid),
        provenance=provenance,
        per_k=per_k,
        verdicts=verdicts,
    )


#: Exact column set and order of the CSV report format.
CSV_COLUMNS = (
    "k",
    "eta_xy",
    "eta_yx",
    "delta",
    "p_eta_xy",
    "p_eta_yx",
    "p_delta",
    "ci_delta_low",
    "ci_delta_high",
    "boot_sd_delta",
)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def render_report(report: Report, format="json") -> str:
    """Serialize a report deterministically to the requested text format."""
    if format == "json":
        return json.dumps(report.to_document(), indent=2) + "\n"
    if format == "csv":
        lines = [",".join(CSV_COLUMNS)]
        n = len(report.per_k["k"])
        for i in range(n):
            lines.append(
                ",".join(_format_cell(report.per_k[c][i]) for c in CSV_COLUMNS)
            )
        return "\n".join(lines) + "\n"
    raise DomainError(f"format must be 'json' or 'csv', got {format!r}")


def emit_report(report: Report, format="json", path=None) -> str:
    """Render and write a report; returns the rendered text.

    With a path, bytes are written atomically-enough for reproducibility
    checks (UTF-8, LF newlines); without one the text goes to stdout.
    """
    text = render_report(report, format)
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "wb") as fh:
                fh.write(text.encode("utf-8"))
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from None
    return text
