"""JSON file formats and report serialisation.

Operators travel as {"dim": n, "re": [[...]], "im": [[...]]}; states add
PSD and trace validation on load; conditions are ball lists; posets are
ball lists with the order derived automatically.  qr-number expression
trees serialise with operators inline or referenced by file path.

A small structural validator checks documents against the JSON schemas
shipped under qrlab/schemas (type / required / properties / items subset,
which is all these formats need).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .collimation import CollimationReport
from .errors import ValidationError
from .experiments import ExperimentReport
from .logic import BasisPoset, TruthValue
from .operators import HermitianOperator
from . import qrnum
from .qrnum import QrNumber, RangeInterval
from .states import Ball, Condition, DensityState


# ---------------------------------------------------------------------------
# schema validation

def load_schema(name: str) -> dict:
    with resources.files("qrlab.schemas").joinpath(f"{name}.json").open() as fh:
        return json.load(fh)


def _check_type(doc, expected: str, path: str):
    ok = {
        "object": lambda d: isinstance(d, dict),
        "array": lambda d: isinstance(d, list),
        "number": lambda d: isinstance(d, (int, float)) and not isinstance(d, bool),
        "integer": lambda d: isinstance(d, int) and not isinstance(d, bool),
        "string": lambda d: isinstance(d, str),
        "boolean": lambda d: isinstance(d, bool),
    }[expected](doc)
    if not ok:
        raise ValidationError(f"{path}: expected {expected}, got {type(doc).__name__}")


def validate_document(doc, schema: dict, path: str = "$"):
    """Structural validation: type, required, properties, items."""
    if "type" in schema:
        _check_type(doc, schema["type"], path)
    for key in schema.get("required", []):
        if key not in doc:
            raise ValidationError(f"{path}: missing required field {key!r}")
    if isinstance(doc, dict):
        for key, sub in schema.get("properties", {}).items():
            if key in doc:
                validate_document(doc[key], sub, f"{path}.{key}")
    if isinstance(doc, list) and "items" in schema:
        for i, item in enumerate(doc):
            validate_document(item, schema["items"], f"{path}[{i}]")


# ---------------------------------------------------------------------------
# matrices

def _matrix_to_dict(m: np.ndarray) -> dict:
    return {
        "dim": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def _matrix_from_dict(doc: dict, what: str) -> np.ndarray:
    validate_document(doc, load_schema("operator"), f"<{what}>")
    dim = doc["dim"]
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc["im"], dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValidationError(
            f"{what}: matrix blocks must be {dim}x{dim}, got {re.shape} and {im.shape}"
        )
    m = re + 1j * im
    if not np.all(np.isfinite(re)) or not np.all(np.isfinite(im)):
        raise ValidationError(f"{what}: non-finite entries")
    return m


def operator_to_dict(a: HermitianOperator) -> dict:
    return _matrix_to_dict(a.matrix)


def operator_from_dict(doc: dict) -> HermitianOperator:
    return HermitianOperator(_matrix_from_dict(doc, "operator"))


def state_to_dict(rho: DensityState) -> dict:
    return _matrix_to_dict(rho.matrix)


def state_from_dict(doc: dict) -> DensityState:
    return DensityState(_matrix_from_dict(doc, "state"))


def condition_to_dict(w: Condition) -> dict:
    return {
        "balls": [
            {"center": state_to_dict(b.center), "radius": b.radius} for b in w.balls
        ]
    }


def condition_from_dict(doc: dict) -> Condition:
    validate_document(doc, load_schema("condition"), "<condition>")
    balls = [
        Ball(state_from_dict(item["center"]), float(item["radius"]))
        for item in doc["balls"]
    ]
    if not balls:
        raise ValidationError("condition file lists no balls")
    return Condition(balls)


def poset_from_dict(doc: dict) -> BasisPoset:
    validate_document(doc, load_schema("poset"), "<poset>")
    if doc.get("order", "auto") != "auto":
        raise ValidationError("only order = 'auto' (containment-derived) is supported")
    balls = [
        Ball(state_from_dict(item["center"]), float(item["radius"]))
        for item in doc["balls"]
    ]
    return BasisPoset.from_balls(balls)


def truth_value_to_list(t: TruthValue) -> list[int]:
    return sorted(t.members)


# ---------------------------------------------------------------------------
# qr-number expression trees

def qrnumber_to_dict(q: QrNumber) -> dict:
    if q.kind == "linear":
        return {
            "kind": "linear",
            "operator": operator_to_dict(q.operator),
            "extent": condition_to_dict(q.extent),
        }
    if q.kind == "const":
        out = {"kind": "const", "value": q.value}
        if q.extent is not None:
            out["extent"] = condition_to_dict(q.extent)
        return out
    out = {"kind": q.kind, "args": [qrnumber_to_dict(a) for a in q.args]}
    if q.kind == "scale":
        out["factor"] = q.value
    if q.kind == "apply":
        out["fn"] = q.fn
        if q.coeffs is not None:
            out["coeffs"] = list(q.coeffs)
    return out


def _resolve_operator(doc: dict, base_dir: Path | None) -> HermitianOperator:
    if "path" in doc:
        path = Path(doc["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_operator(path)
    return operator_from_dict(doc)


def qrnumber_from_dict(doc: dict, base_dir: Path | None = None) -> QrNumber:
    kind = doc.get("kind")
    if kind == "linear":
        return QrNumber.linear(
            _resolve_operator(doc["operator"], base_dir),
            condition_from_dict(doc["extent"]),
        )
    if kind == "const":
        extent = condition_from_dict(doc["extent"]) if "extent" in doc else None
        return QrNumber.constant(float(doc["value"]), extent)
    args = [qrnumber_from_dict(a, base_dir) for a in doc.get("args", [])]
    if kind == "add":
        return qrnum.qr_add(*args)
    if kind == "sub":
        return qrnum.qr_sub(*args)
    if kind == "mul":
        return qrnum.qr_mul(*args)
    if kind == "scale":
        return qrnum.qr_scale(args[0], float(doc["factor"]))
    if kind == "apply":
        return qrnum.qr_apply(doc["fn"], args[0], coeffs=doc.get("coeffs"))
    raise ValidationError(f"unknown qr-number node kind {kind!r}")


# ---------------------------------------------------------------------------
# reports

def range_to_dict(r: RangeInterval) -> dict:
    out = {"lo": r.lo, "hi": r.hi, "rigor": r.rigor}
    if r.rigor == "sampled":
        out["n"] = r.n
        out["seed"] = r.seed
    return out


def collimation_report_to_dict(rep: CollimationReport) -> dict:
    return {
        "a_range": range_to_dict(rep.a_range),
        "s_range": range_to_dict(rep.s_range),
        "interval": list(rep.interval),
        "eps": rep.eps,
        "clauses": dict(rep.clauses),
        "verdicts": {
            "sharp": rep.sharp,
            "located": rep.located,
            "strict": rep.strict,
        },
        "strict_sup": rep.strict_sup,
        "witnesses": {k: state_to_dict(v) for k, v in rep.witnesses.items()},
    }


def experiment_report_to_dict(rep: ExperimentReport, values: bool = False) -> dict:
    out = {
        "mean": rep.mean,
        "target": rep.target,
        "bound": rep.bound,
        "pass": rep.passed,
        "runs": int(len(rep.values)),
    }
    if values:
        out["values"] = np.asarray(rep.values).tolist()
    for key, val in rep.extra.items():
        if isinstance(val, (bool, int, float, str)):
            out[key] = val
        elif isinstance(val, np.ndarray) and values:
            out[key] = val.tolist()
    return out


# ---------------------------------------------------------------------------
# files

def _load_json(path) -> dict:
    path = Path(path)
    try:
        with path.open() as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc


def load_operator(path) -> HermitianOperator:
    return operator_from_dict(_load_json(path))


def load_state(path) -> DensityState:
    return state_from_dict(_load_json(path))


def load_condition(path) -> Condition:
    return condition_from_dict(_load_json(path))


def load_poset(path) -> BasisPoset:
    return poset_from_dict(_load_json(path))


def load_qrnumber(path) -> QrNumber:
    path = Path(path)
    return qrnumber_from_dict(_load_json(path), base_dir=path.parent)


def save_json(doc: dict, path):
    with Path(path).open("w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
