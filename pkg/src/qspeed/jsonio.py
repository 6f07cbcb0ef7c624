"""JSON input handling and deterministic report serialization.

File schemas: a matrix is {"dim": n, "entries": [[[re, im], ...], ...]}
row-major; a distribution is {"weights": [...]} with an optional
"derivative"; snapshots are a list of {"theta": t, "weights": [...]};
a family is {"kind": ..., ...} per the parametric-family kinds; a POVM
is {"elements": [<matrix>, ...]}.  Reports are emitted with 12
significant digits so identical inputs and seeds produce byte-identical
output.
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import bounds, matcore, quantum
from .errors import InvalidInputError

_ROLES = ("auto", "density", "hermitian", "povm", "prob", "family", "snapshots")


# -- loading ----------------------------------------------------------


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        ) from exc


def _require_number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInputError(f"{field} must be a number, got {value!r}")
    return float(value)


def matrix_from_json(obj, name: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{name} must be an object with dim and entries")
    if "dim" not in obj:
        raise InvalidInputError(f"{name}: missing field \"dim\"")
    if "entries" not in obj:
        raise InvalidInputError(f"{name}: missing field \"entries\"")
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InvalidInputError(f"{name}: \"dim\" must be a positive integer")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != dim:
        raise InvalidInputError(f"{name}: \"entries\" must hold {dim} rows")
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != dim:
            raise InvalidInputError(
                f"{name}: entries[{i}] must hold {dim} cells"
            )
        for j, cell in enumerate(row):
            if not isinstance(cell, list) or len(cell) != 2:
                raise InvalidInputError(
                    f"{name}: entries[{i}][{j}] must be a [re, im] pair"
                )
            re = _require_number(cell[0], f"{name}: entries[{i}][{j}][0]")
            im = _require_number(cell[1], f"{name}: entries[{i}][{j}][1]")
            out[i, j] = complex(re, im)
    return out


def matrix_to_json(a) -> dict:
    a = matcore.as_matrix(a)
    return {
        "dim": int(a.shape[0]),
        "entries": [[[float(np.real(a[i, j])), float(np.imag(a[i, j]))]
                     for j in range(a.shape[1])] for i in range(a.shape[0])],
    }


def load_matrix(path: str, name: str = "matrix") -> np.ndarray:
    return matrix_from_json(load_json(path), name)


def prob_from_json(obj, name: str = "distribution"):
    if not isinstance(obj, dict) or "weights" not in obj:
        raise InvalidInputError(f"{name} must be an object with \"weights\"")
    weights = obj["weights"]
    if not isinstance(weights, list) or not weights:
        raise InvalidInputError(f"{name}: \"weights\" must be a nonempty list")
    w = np.array([_require_number(v, f"{name}: weights[{i}]")
                  for i, v in enumerate(weights)])
    deriv = None
    if "derivative" in obj:
        derivative = obj["derivative"]
        if not isinstance(derivative, list) or len(derivative) != len(weights):
            raise InvalidInputError(
                f"{name}: \"derivative\" must match \"weights\" in length"
            )
        deriv = np.array([_require_number(v, f"{name}: derivative[{i}]")
                          for i, v in enumerate(derivative)])
    return w, deriv


def load_prob(path: str):
    return prob_from_json(load_json(path))


def snapshots_from_json(obj):
    if not isinstance(obj, list) or len(obj) < 1:
        raise InvalidInputError("snapshots must be a nonempty list")
    out = []
    for i, item in enumerate(obj):
        if not isinstance(item, dict) or "theta" not in item \
                or "weights" not in item:
            raise InvalidInputError(
                f"snapshots[{i}] must be an object with \"theta\" and \"weights\""
            )
        theta = _require_number(item["theta"], f"snapshots[{i}].theta")
        w, _ = prob_from_json({"weights": item["weights"]}, f"snapshots[{i}]")
        out.append((theta, w))
    return out


def load_snapshots(path: str):
    return snapshots_from_json(load_json(path))


def povm_from_json(obj, name: str = "povm") -> quantum.POVM:
    if not isinstance(obj, dict) or "elements" not in obj:
        raise InvalidInputError(f"{name} must be an object with \"elements\"")
    elements = obj["elements"]
    if not isinstance(elements, list) or not elements:
        raise InvalidInputError(f"{name}: \"elements\" must be a nonempty list")
    mats = [matrix_from_json(e, f"{name}: elements[{i}]")
            for i, e in enumerate(elements)]
    return quantum.POVM(mats)


def povm_to_json(povm: quantum.POVM) -> dict:
    return {"elements": [matrix_to_json(e) for e in povm]}


def family_from_json(obj, name: str = "family") -> quantum.ParametricFamily:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidInputError(f"{name} must be an object with \"kind\"")
    kind = obj["kind"]

    def field(key: str):
        if key not in obj:
            raise InvalidInputError(
                f"{name}: kind {kind!r} requires field \"{key}\""
            )
        return obj[key]

    if kind == "unitary":
        h = matrix_from_json(field("hamiltonian"), f"{name}.hamiltonian")
        state = matrix_from_json(field("state"), f"{name}.state")
        return quantum.ParametricFamily.unitary(h, state)
    if kind == "non_hermitian":
        h = matrix_from_json(field("h"), f"{name}.h")
        gamma = matrix_from_json(field("gamma"), f"{name}.gamma")
        state = matrix_from_json(field("state"), f"{name}.state")
        return quantum.ParametricFamily.non_hermitian(h, gamma, state)
    if kind == "lindblad":
        sup = matrix_from_json(field("superop"), f"{name}.superop")
        state = matrix_from_json(field("state"), f"{name}.state")
        return quantum.ParametricFamily.lindblad(
            matcore.Superoperator.from_matrix(sup), state
        )
    if kind == "thermal":
        h = matrix_from_json(field("hamiltonian"), f"{name}.hamiltonian")
        return quantum.ParametricFamily.thermal(h)
    if kind == "table":
        points = field("points")
        if not isinstance(points, list) or len(points) < 3:
            raise InvalidInputError(
                f"{name}: \"points\" must list at least 3 snapshots"
            )
        parsed = []
        for i, item in enumerate(points):
            if not isinstance(item, dict) or "theta" not in item \
                    or "state" not in item:
                raise InvalidInputError(
                    f"{name}: points[{i}] must hold \"theta\" and \"state\""
                )
            theta = _require_number(item["theta"], f"{name}: points[{i}].theta")
            state = matrix_from_json(item["state"], f"{name}: points[{i}].state")
            parsed.append((theta, state))
        return quantum.ParametricFamily.table(parsed)
    raise InvalidInputError(
        f"{name}: \"kind\" must be one of unitary, non_hermitian, lindblad, "
        f"thermal, table; got {kind!r}"
    )


def load_family(path: str) -> quantum.ParametricFamily:
    return family_from_json(load_json(path))


def partition_from_json(obj, name: str = "partition") -> bounds.Partition:
    if not isinstance(obj, dict) or "blocks" not in obj \
            or "hamiltonians" not in obj:
        raise InvalidInputError(
            f"{name} must be an object with \"blocks\" and \"hamiltonians\""
        )
    blocks = obj["blocks"]
    hams = obj["hamiltonians"]
    if not isinstance(blocks, list) or not isinstance(hams, list):
        raise InvalidInputError(
            f"{name}: \"blocks\" and \"hamiltonians\" must be lists"
        )
    parsed_blocks = []
    for i, block in enumerate(blocks):
        if not isinstance(block, list):
            raise InvalidInputError(f"{name}: blocks[{i}] must be a list of sites")
        parsed_blocks.append(tuple(
            int(_require_number(s, f"{name}: blocks[{i}][{j}]"))
            for j, s in enumerate(block)
        ))
    parsed_hams = [matrix_from_json(hk, f"{name}: hamiltonians[{i}]")
                   for i, hk in enumerate(hams)]
    return bounds.Partition(tuple(parsed_blocks), tuple(parsed_hams))


def load_partition(path: str) -> bounds.Partition:
    return partition_from_json(load_json(path))


# -- report serialization ---------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.12g" % x


def dump_report(obj, indent: int = 0) -> str:
    """Serialize a report deterministically with 12 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {dump_report(v, indent + 1)}"
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dump_report(v, indent + 1) for v in obj]
        if all(len(s) <= 24 and "\n" not in s for s in items):
            return "[" + ", ".join(items) + "]"
        inner = ",\n".join(f"{pad}  {s}" for s in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise InvalidInputError(f"cannot serialize {type(obj).__name__} in a report")


def _flatten(obj, prefix: str, rows: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", rows)
    elif isinstance(obj, bool):
        rows.append((prefix, "true" if obj else "false"))
    elif obj is None:
        rows.append((prefix, "null"))
    elif isinstance(obj, (int, np.integer)):
        rows.append((prefix, str(int(obj))))
    elif isinstance(obj, (float, np.floating)):
        rows.append((prefix, _format_float(float(obj)).strip('"')))
    else:
        rows.append((prefix, str(obj)))


def report_to_csv(obj) -> str:
    """Flatten a report into key,value rows with the same formatted values."""
    rows: list = []
    _flatten(obj, "", rows)
    return "\n".join(f"{k},{v}" for k, v in rows)


# -- validation diagnostics -------------------------------------------


def _detect_role(obj) -> str:
    if isinstance(obj, list):
        return "snapshots"
    if isinstance(obj, dict):
        if "entries" in obj:
            return "density"
        if "elements" in obj:
            return "povm"
        if "weights" in obj:
            return "prob"
        if "kind" in obj:
            return "family"
    raise InvalidInputError(
        "cannot detect the file role; expected a matrix, POVM, distribution, "
        "family, or snapshot list"
    )


def _matrix_diagnostics(a: np.ndarray, role: str, name: str) -> list:
    diags = []
    asym = float(np.abs(a - a.conj().T).max())
    if asym > matcore.HERM_TOL:
        diags.append({
            "check": "hermiticity",
            "magnitude": asym,
            "message": f"{name}: max asymmetry entry {asym:.6g}",
        })
    if role == "density":
        trace_dev = abs(float(np.real(np.trace(a))) - 1.0)
        if trace_dev > matcore.TRACE_TOL:
            diags.append({
                "check": "trace",
                "magnitude": trace_dev,
                "message": f"{name}: trace deviation {trace_dev:.6g}",
            })
        herm = 0.5 * (a + a.conj().T)
        w = np.linalg.eigvalsh(herm)
        tol = matcore.psd_tol(a.shape[0], float(np.abs(w).max()) if w.size else 0.0)
        if float(w[0]) < -tol:
            diags.append({
                "check": "positivity",
                "magnitude": float(-w[0]),
                "message": f"{name}: negative eigenvalue {float(w[0]):.6g}",
            })
    return diags


def validate_file(path: str, role: str = "auto"):
    """Run the type invariants for a file and report each violation.

    Returns (resolved role, diagnostics); each diagnostic carries the
    check name, the violation magnitude, and a message.
    """
    if role not in _ROLES:
        raise InvalidInputError(f"role must be one of {_ROLES}, got {role!r}")
    obj = load_json(path)
    if role == "auto":
        role = _detect_role(obj)
    diags: list = []
    if role in ("density", "hermitian"):
        a = matrix_from_json(obj)
        diags = _matrix_diagnostics(a, role, "matrix")
    elif role == "povm":
        if not isinstance(obj, dict) or "elements" not in obj \
                or not isinstance(obj["elements"], list) or not obj["elements"]:
            raise InvalidInputError(
                "povm must be an object with a nonempty \"elements\" list"
            )
        mats = [matrix_from_json(e, f"elements[{i}]")
                for i, e in enumerate(obj["elements"])]
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise InvalidInputError("povm elements must share one dimension")
        total = np.zeros_like(mats[0])
        for i, m in enumerate(mats):
            for d in _matrix_diagnostics(m, "density", f"elements[{i}]"):
                if d["check"] != "trace":  # elements need not have unit trace
                    diags.append(d)
            total = total + m
        defect = float(np.abs(total - np.eye(total.shape[0])).max())
        if defect > quantum.COMPLETENESS_TOL:
            diags.append({
                "check": "completeness",
                "magnitude": defect,
                "message": f"povm: completeness defect {defect:.6g}",
            })
    elif role == "prob":
        w, deriv = prob_from_json(obj)
        neg = float(np.min(w))
        if neg < -1e-12:
            diags.append({
                "check": "positivity",
                "magnitude": -neg,
                "message": f"weights: negative entry {neg:.6g}",
            })
        sum_dev = abs(float(np.sum(w)) - 1.0)
        if sum_dev > 1e-9:
            diags.append({
                "check": "normalization",
                "magnitude": sum_dev,
                "message": f"weights: sum deviation {sum_dev:.6g}",
            })
        if deriv is not None:
            dsum = abs(float(np.sum(deriv)))
            if dsum > 1e-9:
                diags.append({
                    "check": "derivative-sum",
                    "magnitude": dsum,
                    "message": f"derivative: sum deviation {dsum:.6g}",
                })
    elif role == "family":
        try:
            family_from_json(obj)
        except InvalidInputError as exc:
            diags.append({
                "check": "family",
                "magnitude": math.nan,
                "message": str(exc),
            })
    elif role == "snapshots":
        try:
            snaps = snapshots_from_json(obj)
        except InvalidInputError as exc:
            diags.append({
                "check": "snapshots",
                "magnitude": math.nan,
                "message": str(exc),
            })
        else:
            for i, (_, w) in enumerate(snaps):
                sum_dev = abs(float(np.sum(w)) - 1.0)
                if sum_dev > 1e-9:
                    diags.append({
                        "check": "normalization",
                        "magnitude": sum_dev,
                        "message":
                            f"snapshots[{i}]: sum deviation {sum_dev:.6g}",
                    })
            thetas = [t for t, _ in snaps]
            if any(b <= a for a, b in zip(thetas, thetas[1:])):
                diags.append({
                    "check": "grid",
                    "magnitude": math.nan,
                    "message": "snapshots: theta grid must increase strictly",
                })
    return role, diags
