"""File formats: spectrum JSON, outcome JSON, sweep CSV.

Floats are serialized with 17 significant digits, which round-trips IEEE
doubles exactly; rereading a written file reproduces the values bit for bit.
CSV uses '.' decimals, ',' separators, LF line endings and a mandatory
header, so outputs diff cleanly across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .efficiency import ConcentrationOutcome
from .errors import IoError, NotNormalizedError, ParseError, SchemaError, SchmidtForgeError
from .spectrum import SchmidtSpectrum, make_spectrum

OUTCOME_MODES = {"efficiency": "p_ref", "fixedprob": "p_fix"}


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _render(value) -> str:
    """Tiny JSON writer with fixed float formatting and key order."""
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(k)}: {_render(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if np.isnan(value) or np.isinf(value):
            return "null"  # undefined metrics stay valid JSON
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def write_json(obj: dict, path) -> None:
    try:
        Path(path).write_text(_render(obj) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            lineno=exc.lineno,
            colno=exc.colno,
        ) from exc


def write_spectrum(s: SchmidtSpectrum, path) -> None:
    write_json({"dim": s.dim, "squared_coefficients": list(s.sq_coeffs)}, path)


def read_spectrum(path) -> SchmidtSpectrum:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    missing = {"dim", "squared_coefficients"} - data.keys()
    if missing:
        raise SchemaError(f"{path}: missing fields {sorted(missing)}")
    dim = data["dim"]
    coeffs = data["squared_coefficients"]
    if not isinstance(dim, int) or not isinstance(coeffs, list):
        raise SchemaError(f"{path}: wrong field types")
    if dim != len(coeffs):
        raise SchemaError(f"{path}: dim={dim} but {len(coeffs)} coefficients")
    try:
        return make_spectrum(coeffs, input_kind="squared", normalize=False)
    except NotNormalizedError as exc:
        raise SchemaError(f"{path}: NotNormalized: {exc}") from exc
    except SchmidtForgeError as exc:
        raise SchemaError(f"{path}: {type(exc).__name__}: {exc}") from exc


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    """Flat, serialization-ready view of a concentration outcome.

    ``mode`` selects the leading JSON field name: ``p_ref`` for efficiency
    outcomes, ``p_fix`` for fixed-probability ones.
    """

    mode: str
    ref_value: float
    n_opt: int
    crop_level: float
    y: tuple[float, ...]
    p_success: float
    post_spectrum: tuple[float, ...]
    purity: float
    schmidt_number: float
    concurrence_sq: float
    q_value: float | None

    @classmethod
    def from_outcome(cls, outcome: ConcentrationOutcome, mode: str, ref_value: float):
        if mode not in OUTCOME_MODES:
            raise ValueError(f"unknown outcome mode {mode!r}")
        return cls(
            mode=mode,
            ref_value=float(ref_value),
            n_opt=outcome.plan.n_opt,
            crop_level=outcome.plan.crop_level,
            y=tuple(float(v) for v in outcome.plan.y),
            p_success=outcome.p_success,
            post_spectrum=tuple(float(v) for v in outcome.post_spectrum.sq_coeffs),
            purity=outcome.post_measures.purity,
            schmidt_number=outcome.post_measures.schmidt_number,
            concurrence_sq=outcome.post_measures.concurrence_sq,
            q_value=outcome.q_value,
        )

    def to_dict(self) -> dict:
        return {
            OUTCOME_MODES[self.mode]: self.ref_value,
            "n_opt": self.n_opt,
            "crop_level": self.crop_level,
            "y": list(self.y),
            "p_success": self.p_success,
            "post_spectrum": list(self.post_spectrum),
            "purity": self.purity,
            "schmidt_number": self.schmidt_number,
            "concurrence_sq": self.concurrence_sq,
            "q_value": self.q_value,
        }


def write_outcome(record: OutcomeRecord, path) -> None:
    write_json(record.to_dict(), path)


def read_outcome(path) -> OutcomeRecord:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    if "p_ref" in data:
        mode, key = "efficiency", "p_ref"
    elif "p_fix" in data:
        mode, key = "fixedprob", "p_fix"
    else:
        raise SchemaError(f"{path}: neither p_ref nor p_fix present")
    required = {
        key, "n_opt", "crop_level", "y", "p_success", "post_spectrum",
        "purity", "schmidt_number", "concurrence_sq", "q_value",
    }
    missing = required - data.keys()
    if missing:
        raise SchemaError(f"{path}: missing fields {sorted(missing)}")
    try:
        return OutcomeRecord(
            mode=mode,
            ref_value=float(data[key]),
            n_opt=int(data["n_opt"]),
            crop_level=float(data["crop_level"]),
            y=tuple(float(v) for v in data["y"]),
            p_success=float(data["p_success"]),
            post_spectrum=tuple(float(v) for v in data["post_spectrum"]),
            purity=float(data["purity"]),
            schmidt_number=float(data["schmidt_number"]),
            concurrence_sq=float(data["concurrence_sq"]),
            q_value=None if data["q_value"] is None else float(data["q_value"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed field: {exc}") from exc


def report_record(report, s: SchmidtSpectrum, ref_value: float) -> dict:
    """Oracle-report JSON: the outcome fields its best point implies, plus
    the oracle's own metrics. Undefined relative differences serialize as
    null."""
    from .spectrum import measures as _measures

    y = np.asarray(report.best_y, dtype=float)
    x = s.sq_coeffs * y
    p = float(np.sum(x))
    record: dict = {OUTCOME_MODES[report.mode]: float(ref_value)}
    if report.best_config is not None:
        record["n_opt"] = report.best_config.n
        record["crop_level"] = report.best_config.level
    record["y"] = list(y)
    record["p_success"] = p
    if p > 0.0:
        post = SchmidtSpectrum(s.dim, x / p)
        m = _measures(post)
        record["post_spectrum"] = list(post.sq_coeffs)
        record["purity"] = m.purity
        record["schmidt_number"] = m.schmidt_number
        record["concurrence_sq"] = m.concurrence_sq
    record["q_value"] = report.best_q
    record["configurations_tested"] = report.configurations_tested
    record["delta_y_relative"] = report.delta_y_relative
    record["delta_q_relative"] = report.delta_q_relative
    record["converged"] = report.converged
    return record


def write_csv(path, header: list[str], rows) -> None:
    """Write rows of numbers (ints kept as ints) under a mandatory header."""
    def cell(v) -> str:
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            return str(int(v))
        return repr(float(v))

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = [ln for ln in text.split("\n") if ln]
    if not lines:
        raise SchemaError(f"{path}: empty CSV")
    header = lines[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    return header, rows
