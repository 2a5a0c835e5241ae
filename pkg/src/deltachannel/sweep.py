"""Parameter sweeps: config parsing, grid evaluation, deterministic output.

The config format is flat `key = value` text with `#` comments and a
mandatory schema_version.  Sweep results are written as CSV or JSON with
shortest round-trip float formatting and a fixed column order, so a given
config always produces byte-identical files.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .capacity import capacity_bruteforce, capacity_closed_form
from .channel import ChannelParams, QubitState
from .errors import ConfigError, QuadratureError
from .field import (
    PairGeometry,
    SmearingSpec,
    VACUUM,
    assemble_statistics,
    commutator_closed,
    norm_sq_closed,
    norm_sq_quadrature,
    thermal,
    wightman_cross_quadrature,
)

SCHEMA_VERSION = 1

COLUMNS = (
    "lambda_a",
    "lambda_b",
    "L",
    "dtau",
    "nu_a",
    "nu_b",
    "nu_ab_plus",
    "nu_ab_minus",
    "delta_ab",
    "c_closed",
    "c_bruteforce",
    "gap",
    "oracle_residual",
    "status",
)

AXIS_NAMES = ("lambda_a", "lambda_b", "L", "dtau", "r_b")
RESIDUAL_FLOOR = 1e-12


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: name, range, point count, and linear or log spacing."""

    name: str
    lo: float
    hi: float
    count: int
    scale: str

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r}; choose from {AXIS_NAMES}")
        if self.count < 1:
            raise ConfigError(f"axis {self.name}: count must be >= 1")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo > self.hi:
            raise ConfigError(f"axis {self.name}: need finite min <= max")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: scale must be linear or log")
        if self.scale == "log" and self.lo <= 0.0:
            raise ConfigError(f"axis {self.name}: log spacing requires min > 0")

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.lo)]
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.lo, self.hi, self.count)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.count)]


@dataclass(frozen=True)
class SweepConfig:
    """Fixed parameters, up to two axes, and output options for one sweep."""

    eta_over_sigma: float = 1.0
    lambda_a: float = 1.0
    lambda_b: float = 1.0
    separation: float = 6.0
    delay: float = 6.0
    beta: float | None = None
    bob_bloch: tuple[float, float, float] = (0.0, 0.0, 1.0)
    r_b: float | None = None
    phase_a: float = 0.0
    phase_b: float = 0.0
    axes: tuple[AxisSpec, ...] = ()
    output: str | None = None
    format: str = "csv"
    oracle: bool = False
    optimizer: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.eta_over_sigma) and self.eta_over_sigma > 0.0):
            raise ConfigError(f"eta_over_sigma must be > 0, got {self.eta_over_sigma!r}")
        for name in ("lambda_a", "lambda_b"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ConfigError(f"{name} must be >= 0, got {v!r}")
        if not (math.isfinite(self.separation) and self.separation >= 0.0):
            raise ConfigError(f"L must be >= 0, got {self.separation!r}")
        if not math.isfinite(self.delay):
            raise ConfigError(f"dtau must be finite, got {self.delay!r}")
        if self.beta is not None and not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ConfigError(f"beta must be > 0, got {self.beta!r}")
        if len(self.bob_bloch) != 3 or not all(math.isfinite(c) for c in self.bob_bloch):
            raise ConfigError(f"bob_bloch must be a finite 3-vector, got {self.bob_bloch!r}")
        r_b_used = self.r_b is not None or any(a.name == "r_b" for a in self.axes)
        if r_b_used and all(c == 0.0 for c in self.bob_bloch):
            raise ConfigError("r_b scaling needs a nonzero bob_bloch direction")
        if self.r_b is not None and not 0.0 <= self.r_b <= 1.0:
            raise ConfigError(f"r_b must lie in [0, 1], got {self.r_b!r}")
        if not (math.isfinite(self.phase_a) and math.isfinite(self.phase_b)):
            raise ConfigError("phases must be finite")
        if len(self.axes) > 2:
            raise ConfigError(f"at most 2 axes are supported, got {len(self.axes)}")
        seen = set()
        for axis in self.axes:
            if axis.name in seen:
                raise ConfigError(f"axis {axis.name!r} given twice")
            seen.add(axis.name)
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")


# ---------------------------------------------------------------------------
# config file parsing
# ---------------------------------------------------------------------------

_SCALAR_KEYS = {
    "eta_over_sigma": float,
    "lambda_a": float,
    "lambda_b": float,
    "L": float,
    "dtau": float,
    "beta": float,
    "r_b": float,
    "phase_a": float,
    "phase_b": float,
}
_FIELD_FOR_KEY = {"L": "separation", "dtau": "delay"}


def _parse_bool(value: str, where: str) -> bool:
    low = value.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {value!r}")


def _parse_float(value: str, where: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None


def parse_config_text(text: str) -> SweepConfig:
    """Parse the flat key = value config grammar into a SweepConfig."""
    fields: dict = {}
    axes: list[AxisSpec] = []
    seen: set[str] = set()
    schema_version = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        seen.add(key)
        where = f"{where} ({key})"
        if key == "schema_version":
            schema_version = value
        elif key in _SCALAR_KEYS:
            fields[_FIELD_FOR_KEY.get(key, key)] = _parse_float(value, where)
        elif key == "bob_bloch":
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 3:
                raise ConfigError(f"{where}: expected three comma-separated numbers")
            fields["bob_bloch"] = tuple(_parse_float(p, where) for p in parts)
        elif key in ("oracle", "optimizer"):
            fields[key] = _parse_bool(value, where)
        elif key == "format":
            fields["format"] = value
        elif key == "output":
            fields["output"] = value
        elif key.startswith("axis."):
            name = key[len("axis."):]
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 4:
                raise ConfigError(f"{where}: expected min,max,count,scale")
            try:
                count = int(parts[2])
            except ValueError:
                raise ConfigError(f"{where}: count must be an integer") from None
            axes.append(
                AxisSpec(
                    name=name,
                    lo=_parse_float(parts[0], where),
                    hi=_parse_float(parts[1], where),
                    count=count,
                    scale=parts[3],
                )
            )
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    if schema_version is None:
        raise ConfigError("missing required key schema_version")
    if schema_version != str(SCHEMA_VERSION):
        raise ConfigError(
            f"unsupported schema_version {schema_version!r}; this build reads {SCHEMA_VERSION}"
        )
    return SweepConfig(axes=tuple(axes), **fields)


def parse_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config_text(text)


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------

def _resolve_bob(bob_bloch: tuple[float, float, float], r_b: float | None) -> QubitState:
    if r_b is None:
        return QubitState(*bob_bloch)
    norm = math.sqrt(sum(c * c for c in bob_bloch))
    return QubitState(*(r_b * c / norm for c in bob_bloch))


def evaluate_point(
    lambda_a: float,
    lambda_b: float,
    separation: float,
    delay: float,
    eta_over_sigma: float = 1.0,
    beta: float | None = None,
    bob: QubitState = QubitState(0.0, 0.0, 1.0),
    phase_a: float = 0.0,
    phase_b: float = 0.0,
    oracle: bool = False,
    optimizer: bool = False,
) -> dict:
    """One sweep row as a column -> value mapping.

    Quadrature failures never raise: the field-dependent columns go NaN and
    status records the failure.
    """
    row = dict.fromkeys(COLUMNS, math.nan)
    row.update(lambda_a=lambda_a, lambda_b=lambda_b, L=separation, dtau=delay)
    f_a = SmearingSpec(coupling=lambda_a * eta_over_sigma)
    f_b = SmearingSpec(coupling=lambda_b * eta_over_sigma)
    geom = PairGeometry(separation, delay)
    state = VACUUM if beta is None else thermal(beta)
    try:
        stats = assemble_statistics(f_a, f_b, geom, state)
    except QuadratureError:
        row["status"] = "quadrature_error"
        return row
    row.update(
        nu_a=stats.nu_a,
        nu_b=stats.nu_b,
        nu_ab_plus=stats.nu_ab_plus,
        nu_ab_minus=stats.nu_ab_minus,
        delta_ab=stats.delta_ab,
    )
    row["c_closed"] = capacity_closed_form(stats.nu_b, bob.r, stats.delta_ab)
    if optimizer:
        result = capacity_bruteforce(ChannelParams(stats, phase_a, phase_b, bob))
        row["c_bruteforce"] = result.c_bruteforce
        row["gap"] = result.gap
    if oracle:
        try:
            row["oracle_residual"] = _oracle_residual(f_a, f_b, geom, state, stats)
        except QuadratureError:
            row["status"] = "quadrature_error"
            return row
    row["status"] = "ok"
    return row


def _oracle_residual(f_a, f_b, geom, state, stats) -> float:
    """Largest relative disagreement between closed forms and quadrature.

    Vacuum checks both norms and the commutator; a thermal state has no
    closed-form norms, so only the commutator identity is checked there.
    """
    w_cross = wightman_cross_quadrature(f_a, f_b, geom, state)
    d_closed = commutator_closed(f_a, f_b, geom)
    residual = abs(d_closed - (-2.0 * w_cross.imag)) / max(abs(d_closed), RESIDUAL_FLOOR)
    if not state.is_thermal:
        for f in (f_a, f_b):
            closed = norm_sq_closed(f)
            rel = abs(closed - norm_sq_quadrature(f, state)) / max(closed, RESIDUAL_FLOOR)
            residual = max(residual, rel)
    return residual


def grid_overrides(cfg: SweepConfig) -> list[dict]:
    """Per-row axis overrides in row-major order (first axis outermost)."""
    if not cfg.axes:
        return [{}]
    value_lists = [axis.values() for axis in cfg.axes]
    overrides = []
    if len(cfg.axes) == 1:
        for v in value_lists[0]:
            overrides.append({cfg.axes[0].name: v})
        return overrides
    for outer in value_lists[0]:
        for inner in value_lists[1]:
            overrides.append({cfg.axes[0].name: outer, cfg.axes[1].name: inner})
    return overrides


def run_sweep(cfg: SweepConfig, threads: int = 1) -> list[dict]:
    """Evaluate the whole grid and write the result file if cfg.output is set.

    Rows come back in grid order regardless of thread count: points are
    pure functions and the assembly follows the grid index, not completion.
    """

    def one(overrides: dict) -> dict:
        return evaluate_point(
            lambda_a=overrides.get("lambda_a", cfg.lambda_a),
            lambda_b=overrides.get("lambda_b", cfg.lambda_b),
            separation=overrides.get("L", cfg.separation),
            delay=overrides.get("dtau", cfg.delay),
            eta_over_sigma=cfg.eta_over_sigma,
            beta=cfg.beta,
            bob=_resolve_bob(cfg.bob_bloch, overrides.get("r_b", cfg.r_b)),
            phase_a=cfg.phase_a,
            phase_b=cfg.phase_b,
            oracle=cfg.oracle,
            optimizer=cfg.optimizer,
        )

    points = grid_overrides(cfg)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]

    if cfg.output is not None:
        payload = format_csv(rows) if cfg.format == "csv" else format_json(rows)
        with open(cfg.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    return rows


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    return repr(float(value))


def format_csv(rows: list[dict]) -> str:
    lines = [",".join(COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def format_json(rows: list[dict]) -> str:
    def clean(row: dict) -> dict:
        out = {}
        for c in COLUMNS:
            v = row[c]
            if isinstance(v, float) and math.isnan(v):
                v = None
            out[c] = v
        return out

    doc = {"schema_version": SCHEMA_VERSION, "rows": [clean(r) for r in rows]}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# single-point query
# ---------------------------------------------------------------------------

def point_query(
    lambda_a: float,
    lambda_b: float,
    separation: float,
    delay: float,
    eta_over_sigma: float = 1.0,
    beta: float | None = None,
    bob: tuple[float, float, float] = (0.0, 0.0, 1.0),
    alice: tuple[float, float, float] = (1.0, 0.0, 0.0),
    phase_a: float = 0.0,
    phase_b: float = 0.0,
    oracle: bool = False,
    optimizer: bool = False,
) -> dict:
    """Everything the library knows about a single parameter point.

    The sweep-row fields reproduce a run_sweep row for the same point
    exactly; on top of those come the combined channel coefficients, the
    output eigenvalues for the given Alice input, and capacity details.
    """
    from .capacity import capacity_bruteforce as _bruteforce  # late bind for tests
    from .channel import apply as _apply
    from .weyl import gammas_from_statistics as _gammas
    from .field import FieldStatistics

    bob_state = QubitState(*bob)
    alice_state = QubitState(*alice)
    row = evaluate_point(
        lambda_a=lambda_a,
        lambda_b=lambda_b,
        separation=separation,
        delay=delay,
        eta_over_sigma=eta_over_sigma,
        beta=beta,
        bob=bob_state,
        phase_a=phase_a,
        phase_b=phase_b,
        oracle=oracle,
        optimizer=False,
    )
    record: dict = {"schema_version": SCHEMA_VERSION, "status": row["status"]}
    record["inputs"] = {
        "lambda_a": lambda_a,
        "lambda_b": lambda_b,
        "L": separation,
        "dtau": delay,
        "eta_over_sigma": eta_over_sigma,
        "beta": beta,
        "bob_bloch": list(bob),
        "alice_bloch": list(alice),
        "phase_a": phase_a,
        "phase_b": phase_b,
    }
    if row["status"] != "ok":
        return record
    stats = FieldStatistics(
        nu_a=row["nu_a"],
        nu_b=row["nu_b"],
        nu_ab_plus=row["nu_ab_plus"],
        nu_ab_minus=row["nu_ab_minus"],
        delta_ab=row["delta_ab"],
    )
    record["field_statistics"] = {
        "nu_a": stats.nu_a,
        "nu_b": stats.nu_b,
        "nu_ab_plus": stats.nu_ab_plus,
        "nu_ab_minus": stats.nu_ab_minus,
        "delta_ab": stats.delta_ab,
    }
    gammas = _gammas(stats)
    record["combined_coefficients"] = {
        "c_keep": gammas.c_keep,
        "c_flip": gammas.c_flip,
        "c_comm_imag": gammas.c_comm.imag,
    }
    params = ChannelParams(stats, phase_a, phase_b, bob_state)
    out = _apply(params, alice_state)
    record["eigenvalues"] = {"p_plus": out.eigenvalues[0], "p_minus": out.eigenvalues[1]}
    capacity_block = {
        "c_closed": row["c_closed"],
        "q_ea_lower": row["c_closed"] / 2.0,
        "nu_eff": stats.nu_b * bob_state.r,
    }
    if optimizer:
        result = _bruteforce(params)
        capacity_block["c_bruteforce"] = result.c_bruteforce
        capacity_block["gap"] = result.gap
    record["capacity"] = capacity_block
    if oracle:
        record["oracle_residual"] = row["oracle_residual"]
    return record
