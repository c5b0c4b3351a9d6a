"""
Field serialization: a JSON header {m, grid, lengths, twist, N} followed by
the values in row-major grid order with the spinor index fastest.

JSON documents carry the values as [re, im] pairs; binary documents are the
header as one UTF-8 JSON line followed by little-endian complex128 values.
"""

import json
from pathlib import Path

import numpy as np

from lattice.fields import SpinorField
from lattice.torus import TorusModel
from shared.exceptions import ConfigurationError

BINARY_DTYPE = np.dtype("<c16")


def field_header(f):
    return {
        "m": f.model.m,
        "grid": list(f.model.grid),
        "lengths": list(f.model.lengths),
        "twist": list(f.model.twist),
        "N": f.spinor_dim,
    }


def _model_from_header(header):
    try:
        model = TorusModel(
            m=header["m"],
            grid=tuple(header["grid"]),
            lengths=tuple(header["lengths"]),
            twist=tuple(header["twist"]),
        )
        shape = model.grid + (int(header["N"]),)
    except KeyError as exc:
        raise ConfigurationError(f"field header is missing {exc.args[0]!r}") from exc
    return model, shape


def to_json(f):
    flat = f.values.reshape(-1)
    return json.dumps(
        {
            "header": field_header(f),
            "values": [[float(v.real), float(v.imag)] for v in flat],
        }
    )


def from_json(text):
    document = json.loads(text)
    model, shape = _model_from_header(document["header"])
    pairs = np.asarray(document["values"], dtype=np.float64)
    if pairs.shape != (int(np.prod(shape)), 2):
        raise ConfigurationError("value count does not match the header")
    values = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape)
    return SpinorField(model, values)


def to_bytes(f):
    header = json.dumps(field_header(f), sort_keys=True).encode("utf-8")
    return header + b"\n" + f.values.astype(BINARY_DTYPE).tobytes(order="C")


def from_bytes(data):
    header, _, payload = data.partition(b"\n")
    model, shape = _model_from_header(json.loads(header.decode("utf-8")))
    values = np.frombuffer(payload, dtype=BINARY_DTYPE)
    if values.size != int(np.prod(shape)):
        raise ConfigurationError("value count does not match the header")
    return SpinorField(model, values.reshape(shape).astype(np.complex128))


def dump(f, path):
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(to_json(f))
    else:
        path.write_bytes(to_bytes(f))
    return path


def load(path):
    path = Path(path)
    if path.suffix == ".json":
        return from_json(path.read_text())
    return from_bytes(path.read_bytes())
