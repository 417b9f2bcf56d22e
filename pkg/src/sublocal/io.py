"""JSON files for channels, lifted pairs and dilations.

A channel file looks like::

    {"shape": {"source": [ds1, ds2], "target": [dt1, dt2]},
     "representation": "kraus",
     "data": [K_0, K_1, ...],
     "meta": {...}}

Each matrix is a list of rows and each entry an ``[re, im]`` pair. With
``"representation": "choi"`` the data is the single Choi matrix instead.
Floats are written with Python's shortest round-trip repr, so reading a
file back yields bit-identical numbers. Non-finite numbers are rejected.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import channels
from .channels import ChoiMatrix, KrausChannel
from .errors import DomainError, FormatError, ShapeError
from .params import AbsorbParams, LspParams, SwapParams
from .secondq import ProductChannelPair, build_embeddings
from .spaces import ChannelShape, SubspaceSplit


def _reject_constant(name):
    raise FormatError(f"non-finite number {name} in JSON input")


def loads(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False, indent=1)


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    obj = loads(text)
    if not isinstance(obj, dict):
        raise FormatError("top-level JSON value must be an object")
    return obj


def save_json(obj, path) -> None:
    try:
        Path(path).write_text(dumps(obj) + "\n")
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc}") from exc


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise FormatError("non-finite number")
    return float(x)


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def decode_vector(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise FormatError("vector must be a non-empty list of [re, im] pairs")
    return np.array([_entry(z) for z in data], dtype=complex)


def _entry(z) -> complex:
    if not isinstance(z, list) or len(z) != 2:
        raise FormatError(f"complex entry must be [re, im], got {z!r}")
    return complex(_number(z[0]), _number(z[1]))


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m, dtype=complex)]


def decode_matrix(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise FormatError("matrix must be a non-empty list of rows")
    rows = [decode_vector(row) for row in data]
    if len({r.size for r in rows}) != 1:
        raise FormatError("ragged matrix: rows differ in length")
    return np.array(rows)


def encode_split(split: SubspaceSplit) -> list:
    return split.as_list()


def decode_split(data) -> SubspaceSplit:
    if not isinstance(data, list) or len(data) != 2:
        raise FormatError(f"split must be [dim1, dim2], got {data!r}")
    dims = []
    for d in data:
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise FormatError(f"split dimensions must be positive integers, got {data!r}")
        dims.append(d)
    return SubspaceSplit(*dims)


def encode_shape(shape: ChannelShape) -> dict:
    return {"source": encode_split(shape.source), "target": encode_split(shape.target)}


def decode_shape(data) -> ChannelShape:
    if not isinstance(data, dict) or set(data) != {"source", "target"}:
        raise FormatError("shape must be an object with 'source' and 'target'")
    return ChannelShape(decode_split(data["source"]), decode_split(data["target"]))


def channel_to_dict(ch: KrausChannel, meta: dict | None = None, representation: str = "kraus") -> dict:
    if ch.shape is None:
        raise DomainError("only channels with split metadata can be written")
    if representation == "kraus":
        data = [encode_matrix(k) for k in ch.kraus]
    elif representation == "choi":
        data = encode_matrix(channels.choi_from_kraus(ch).matrix)
    else:
        raise DomainError(f"unknown representation {representation!r}")
    out = {"shape": encode_shape(ch.shape), "representation": representation, "data": data}
    if meta:
        out["meta"] = meta
    return out


def channel_from_dict(obj) -> tuple[KrausChannel, dict]:
    if not isinstance(obj, dict):
        raise FormatError("channel must be a JSON object")
    for key in ("shape", "representation", "data"):
        if key not in obj:
            raise FormatError(f"channel file lacks '{key}'")
    shape = decode_shape(obj["shape"])
    rep, data = obj["representation"], obj["data"]
    dt, ds = shape.target.total, shape.source.total
    if rep == "kraus":
        if not isinstance(data, list) or not data:
            raise FormatError("kraus data must be a non-empty list of matrices")
        ops = tuple(decode_matrix(m) for m in data)
        for k in ops:
            if k.shape != (dt, ds):
                raise FormatError(f"Kraus operator is {k.shape}, shape requires {(dt, ds)}")
        ch = KrausChannel(ops, shape)
    elif rep == "choi":
        m = decode_matrix(data)
        if m.shape != (dt * ds, dt * ds):
            raise FormatError(f"Choi matrix is {m.shape}, shape requires {(dt * ds,) * 2}")
        ch = channels.kraus_from_choi(ChoiMatrix(m, dt, ds, shape))
    else:
        raise FormatError(f"unknown representation {rep!r}")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise FormatError("meta must be an object")
    return ch, meta


def write_channel(ch: KrausChannel, path, meta: dict | None = None, representation: str = "kraus") -> None:
    save_json(channel_to_dict(ch, meta, representation), path)


def read_channel(path) -> tuple[KrausChannel, dict]:
    try:
        return channel_from_dict(load_json(path))
    except (ShapeError, DomainError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def params_to_dict(tag: str, p) -> dict:
    """Generator parameters in JSON form (stored under ``meta``)."""
    if isinstance(p, LspParams):
        return {
            "kraus1": [encode_matrix(k) for k in p.kraus1],
            "kraus2": [encode_matrix(k) for k in p.kraus2],
            "c1": encode_vector(p.c1),
            "c2": encode_vector(p.c2),
        }
    if isinstance(p, SwapParams):
        return {
            "rho1": encode_matrix(p.rho1),
            "rho2": encode_matrix(p.rho2),
            "C": encode_matrix(p.cmat),
            "D": encode_matrix(p.dmat),
        }
    if isinstance(p, AbsorbParams):
        return {"rho": encode_matrix(p.rho), "inner": [encode_matrix(k) for k in p.inner.kraus]}
    raise DomainError(f"no serialization for parameters of {tag}")


def params_from_dict(tag: str, obj: dict):
    try:
        if tag == "C1":
            return LspParams(
                [decode_matrix(k) for k in obj["kraus1"]],
                [decode_matrix(k) for k in obj["kraus2"]],
                decode_vector(obj["c1"]),
                decode_vector(obj["c2"]),
            )
        if tag == "C2":
            return SwapParams(
                decode_matrix(obj["rho1"]), decode_matrix(obj["rho2"]),
                decode_matrix(obj["C"]), decode_matrix(obj["D"]),
            )
        if tag in ("C3", "C4"):
            return AbsorbParams(
                decode_matrix(obj["rho"]),
                KrausChannel(tuple(decode_matrix(k) for k in obj["inner"])),
            )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed parameters for {tag}: {exc}") from exc
    raise FormatError(f"unknown class tag {tag!r}")


def pair_to_dict(pair: ProductChannelPair) -> dict:
    return {
        "kind": "product_pair",
        "shape": encode_shape(pair.shape),
        "phi1": channel_to_dict(pair.phi1),
        "phi2": channel_to_dict(pair.phi2),
    }


def pair_from_dict(obj) -> ProductChannelPair:
    if not isinstance(obj, dict) or obj.get("kind") != "product_pair":
        raise FormatError("not a lifted pair file")
    for key in ("shape", "phi1", "phi2"):
        if key not in obj:
            raise FormatError(f"pair file lacks '{key}'")
    shape = decode_shape(obj["shape"])
    phi1, _ = channel_from_dict(obj["phi1"])
    phi2, _ = channel_from_dict(obj["phi2"])
    f1, f2 = build_embeddings(shape).factor_shapes()
    if phi1.shape != f1 or phi2.shape != f2:
        raise FormatError("factor shapes do not match the first-quantized shape")
    return ProductChannelPair(phi1, phi2, shape)


def dilation_to_dict(res) -> dict:
    return {
        "kind": "dilation",
        "split": encode_split(res.split),
        "dim_a1": res.dim_a1,
        "dim_a2": res.dim_a2,
        "a1": encode_vector(res.a1),
        "a2": encode_vector(res.a2),
        "V1": encode_matrix(res.v1),
        "V2": encode_matrix(res.v2),
        "U": encode_matrix(res.u),
    }
