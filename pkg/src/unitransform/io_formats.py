"""Interchange file formats.

All writers are deterministic: fixed key order, floats rendered with 17
significant digits, no timestamps.  Running the same request twice
produces byte-identical files.

Kinds::

    function      {"kind":"function","grid":[...],"values":[[re,im],...],"meta":{...}}
    function2d    {"kind":"function2d","x_grid":[...],"t_grid":[...],
                   "values":[[[re,im],...],...],"meta":{...}}
                  values[i][j] belongs to (x_grid[i], t_grid[j])
    coefficients  {"kind":"fourier-coefficients","L":..,"K":..,
                   "c":[[k,re,im],...],"meta":{...}}
                  real variant carries "a":[[k,a_k],...] and "b":[[k,b_k],...]
                  instead of "c"
    spectrum      {"kind":"spectrum","convention":"paper-fourier"|"laplace-line"
                   |"fourier-laplace", ...grids..., "values":...,"meta":{...}}
    value         {"kind":"value","value":[re,im],"meta":{...}}
    report        {"kind":"report","check":..., ...fields..., "meta":{...}}

Every file embeds the request that produced it under meta.request.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import ContractViolationError
from .fourier_laplace import FourierLaplaceSpectrum
from .fourier_transform import ContinuousSpectrum
from .laplace import LaplaceSpectrum
from .numerics import Grid, SampledFunction, SampledFunction2D


def format_float(v: float) -> str:
    """Render a float with 17 significant digits, the round-trip precision."""
    v = float(v)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    if math.isnan(v) or math.isinf(v):
        raise ContractViolationError("cannot serialize a non-finite number")
    return format(v, ".17g")


def _render(obj: Any, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for idx, (key, val) in enumerate(obj.items()):
            if idx:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _render(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for idx, val in enumerate(obj):
            if idx:
                out.append(",")
            _render(val, out)
        out.append("]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise ContractViolationError(f"cannot serialize {type(obj).__name__}")


def to_json_bytes(payload: dict) -> bytes:
    out: list[str] = []
    _render(payload, out)
    out.append("\n")
    return "".join(out).encode("ascii")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _grid_list(grid: Grid) -> list[float]:
    return [float(v) for v in grid.points]


def function_payload(fn: SampledFunction, meta: dict) -> dict:
    return {
        "kind": "function",
        "grid": _grid_list(fn.grid),
        "values": [_pair(v) for v in fn.values],
        "meta": meta,
    }


def function2d_payload(fn: SampledFunction2D, meta: dict) -> dict:
    return {
        "kind": "function2d",
        "x_grid": _grid_list(fn.x_grid),
        "t_grid": _grid_list(fn.t_grid),
        "values": [[_pair(v) for v in row] for row in fn.values],
        "meta": meta,
    }


def coefficients_payload(coeffs, meta: dict) -> dict:
    return {
        "kind": "fourier-coefficients",
        "L": float(coeffs.L),
        "K": int(coeffs.K),
        "c": [[k, coeffs.c[k].real, coeffs.c[k].imag] for k in range(-coeffs.K, coeffs.K + 1)],
        "meta": meta,
    }


def real_coefficients_payload(coeffs, meta: dict) -> dict:
    return {
        "kind": "fourier-coefficients",
        "L": float(coeffs.L),
        "K": int(coeffs.K),
        "a": [[k, float(coeffs.a[k])] for k in range(0, coeffs.K + 1)],
        "b": [[k, float(coeffs.b[k])] for k in range(1, coeffs.K + 1)],
        "meta": meta,
    }


def spectrum_payload(spectrum, meta: dict) -> dict:
    if isinstance(spectrum, ContinuousSpectrum):
        return {
            "kind": "spectrum",
            "convention": spectrum.convention,
            "lambda_grid": _grid_list(spectrum.lambda_grid),
            "values": [_pair(v) for v in spectrum.values],
            "meta": meta,
        }
    if isinstance(spectrum, LaplaceSpectrum):
        return {
            "kind": "spectrum",
            "convention": "laplace-line",
            "sigma": float(spectrum.sigma),
            "tau_grid": _grid_list(spectrum.tau_grid),
            "values": [_pair(v) for v in spectrum.values],
            "meta": meta,
        }
    if isinstance(spectrum, FourierLaplaceSpectrum):
        return {
            "kind": "spectrum",
            "convention": "fourier-laplace",
            "lambda_grid": _grid_list(spectrum.lambda_grid),
            "sigma": float(spectrum.sigma),
            "tau_grid": _grid_list(spectrum.tau_grid),
            "values": [[_pair(v) for v in row] for row in spectrum.values],
            "meta": meta,
        }
    raise ContractViolationError(f"not a spectrum: {type(spectrum).__name__}")


def value_payload(value: complex, meta: dict) -> dict:
    return {"kind": "value", "value": _pair(value), "meta": meta}


def report_payload(check: str, fields: dict, meta: dict) -> dict:
    payload: dict = {"kind": "report", "check": check}
    payload.update(fields)
    payload["meta"] = meta
    return payload


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ContractViolationError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ContractViolationError(f"{path} is not a toolkit file (missing 'kind')")
    return doc


def _values_1d(doc: dict, key: str, path: str) -> np.ndarray:
    try:
        return np.array([complex(re, im) for re, im in doc[key]])
    except (TypeError, ValueError, KeyError) as exc:
        raise ContractViolationError(f"{path}: malformed '{key}' entries") from exc


def load_function(path: str) -> SampledFunction:
    doc = _load(path)
    if doc["kind"] != "function":
        raise ContractViolationError(f"{path}: expected kind 'function', got {doc['kind']!r}")
    grid = Grid(np.asarray(doc["grid"], dtype=float))
    return SampledFunction(grid=grid, values=_values_1d(doc, "values", path))


def load_function2d(path: str) -> SampledFunction2D:
    doc = _load(path)
    if doc["kind"] != "function2d":
        raise ContractViolationError(f"{path}: expected kind 'function2d', got {doc['kind']!r}")
    x_grid = Grid(np.asarray(doc["x_grid"], dtype=float))
    t_grid = Grid(np.asarray(doc["t_grid"], dtype=float))
    values = np.array([[complex(re, im) for re, im in row] for row in doc["values"]])
    return SampledFunction2D(x_grid=x_grid, t_grid=t_grid, values=values)


def load_spectrum(path: str):
    doc = _load(path)
    if doc["kind"] != "spectrum":
        raise ContractViolationError(f"{path}: expected kind 'spectrum', got {doc['kind']!r}")
    convention = doc.get("convention")
    if convention == "paper-fourier":
        grid = Grid(np.asarray(doc["lambda_grid"], dtype=float))
        return ContinuousSpectrum(lambda_grid=grid, values=_values_1d(doc, "values", path))
    if convention == "laplace-line":
        grid = Grid(np.asarray(doc["tau_grid"], dtype=float))
        return LaplaceSpectrum(
            sigma=float(doc["sigma"]), tau_grid=grid, values=_values_1d(doc, "values", path)
        )
    if convention == "fourier-laplace":
        lam = Grid(np.asarray(doc["lambda_grid"], dtype=float))
        tau = Grid(np.asarray(doc["tau_grid"], dtype=float))
        values = np.array([[complex(re, im) for re, im in row] for row in doc["values"]])
        return FourierLaplaceSpectrum(
            lambda_grid=lam, sigma=float(doc["sigma"]), tau_grid=tau, values=values
        )
    raise ContractViolationError(f"{path}: unknown spectrum convention {convention!r}")


def to_csv_bytes(payload: dict) -> bytes:
    """Flat CSV rendering for plotting; one row per grid point."""
    kind = payload["kind"]
    lines: list[str] = []
    if kind == "function":
        lines.append("x,re,im")
        for x, (re, im) in zip(payload["grid"], payload["values"]):
            lines.append(f"{format_float(x)},{format_float(re)},{format_float(im)}")
    elif kind == "spectrum" and payload["convention"] == "paper-fourier":
        lines.append("lambda,re,im")
        for lam, (re, im) in zip(payload["lambda_grid"], payload["values"]):
            lines.append(f"{format_float(lam)},{format_float(re)},{format_float(im)}")
    elif kind == "spectrum" and payload["convention"] == "laplace-line":
        lines.append("tau,re,im")
        for tau, (re, im) in zip(payload["tau_grid"], payload["values"]):
            lines.append(f"{format_float(tau)},{format_float(re)},{format_float(im)}")
    elif kind == "fourier-coefficients" and "c" in payload:
        lines.append("k,re,im")
        for k, re, im in payload["c"]:
            lines.append(f"{k},{format_float(re)},{format_float(im)}")
    elif kind == "fourier-coefficients":
        lines.append("k,a,b")
        b = {k: v for k, v in payload["b"]}
        for k, a in payload["a"]:
            b_text = format_float(b[k]) if k in b else ""
            lines.append(f"{k},{format_float(a)},{b_text}")
    elif kind == "value":
        lines.append("re,im")
        re, im = payload["value"]
        lines.append(f"{format_float(re)},{format_float(im)}")
    else:
        raise ContractViolationError(f"no CSV rendering for kind {kind!r}")
    return ("\n".join(lines) + "\n").encode("ascii")
