"""JSON serialization shared by the library and the CLI.

Matrices are stored as nested arrays of [re, im] pairs, row-major. A channel
spec document is a JSON object with keys dim_in, dim_out, kraus (list of
matrices), h_in, h_out (Hamiltonians, optional) and beta.
"""

import json

import numpy as np

from .errors import SpecFormatError


def matrix_to_json(mat):
    """Matrix -> nested lists of [re, im] pairs."""
    a = np.asarray(mat, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def matrix_from_json(doc) -> np.ndarray:
    """Nested [re, im] lists -> complex matrix."""
    try:
        a = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed matrix entry: {exc}") from None
    if a.ndim != 3 or a.shape[2] != 2:
        raise SpecFormatError(f"matrix entries must be [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def channel_spec_to_json(channel, beta: float) -> dict:
    doc = {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_json(k) for k in channel.kraus],
        "beta": float(beta),
    }
    if channel.h_in is not None:
        doc["h_in"] = matrix_to_json(channel.h_in)
    if channel.h_out is not None:
        doc["h_out"] = matrix_to_json(channel.h_out)
    return doc


def channel_spec_from_json(doc):
    """Parse a channel spec document into (Channel, beta).

    Raises SpecFormatError on missing keys or inconsistent dimensions.
    """
    from .channels import channel_from_kraus

    if not isinstance(doc, dict):
        raise SpecFormatError("channel spec must be a JSON object")
    for key in ("dim_in", "dim_out", "kraus", "beta"):
        if key not in doc:
            raise SpecFormatError(f"channel spec is missing required key {key!r}")
    dim_in = int(doc["dim_in"])
    dim_out = int(doc["dim_out"])
    if not doc["kraus"]:
        raise SpecFormatError("channel spec has an empty kraus list")
    kraus = [matrix_from_json(k) for k in doc["kraus"]]
    for k in kraus:
        if k.shape != (dim_out, dim_in):
            raise SpecFormatError(
                f"kraus shape {k.shape} does not match dims ({dim_out}, {dim_in})"
            )
    h_in = matrix_from_json(doc["h_in"]) if "h_in" in doc else None
    h_out = matrix_from_json(doc["h_out"]) if "h_out" in doc else None
    beta = float(doc["beta"])
    if not beta > 0:
        raise SpecFormatError(f"beta must be positive, got {beta}")
    try:
        ch = channel_from_kraus(kraus, h_in=h_in, h_out=h_out)
    except Exception as exc:
        raise SpecFormatError(f"invalid channel spec: {exc}") from exc
    return ch, beta


def read_channel_spec(path):
    """Load (Channel, beta) from a channel spec file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"invalid JSON in {path}: {exc}") from None
    return channel_spec_from_json(doc)


def write_channel_spec(path, channel, beta: float):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_spec_to_json(channel, beta), fh, indent=2, sort_keys=True)
        fh.write("\n")


def povm_to_json(povm) -> dict:
    """Export a labeled POVM (one label + projector matrix per element)."""
    return {
        "kind": povm.kind,
        "n": povm.n,
        "local_dim": povm.local_dim,
        "elements": [
            {"label": float(label), "projector": matrix_to_json(proj)}
            for label, proj in povm.elements
        ],
    }


def implementation_to_json(impl) -> dict:
    """Export an implementation: the W operator plus build metadata."""
    return {
        "n": impl.n,
        "dim_in": impl.channel.dim_in,
        "dim_out": impl.channel.dim_out,
        "dim_env": impl.dim_env,
        "completion": impl.completion,
        "threshold": float(impl.threshold),
        "eta": float(impl.eta),
        "beta": float(impl.beta),
        "diagnostics": {k: float(v) for k, v in impl.diagnostics.items()},
        "w": matrix_to_json(impl.w),
    }
