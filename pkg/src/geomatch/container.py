"""Binary matrix container and instance directory persistence.

Matrix files carry an 8-byte magic string "GMATv1\\0\\0", a little-endian u32
row count, a little-endian u32 column count, then the row-major IEEE-754
float64 payload. Instances serialize as a directory of such files plus a JSON
manifest {n, d, sigma, seed, truth, kind}.
"""

from __future__ import annotations

import json
import os
import struct
from typing import Tuple

import numpy as np

from .model import ModelInstance, ModelKind, Permutation, observe_distance, observe_dot

MAGIC = b"GMATv1\x00\x00"
_HEADER = struct.Struct("<II")

INSTANCE_MATRICES = ("x", "z", "y", "a", "b")


class ContainerFormatError(Exception):
    """Raised when a matrix file or instance directory is malformed."""


def write_matrix(path: str, matrix: np.ndarray) -> None:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"only 2-D matrices can be written, got shape {m.shape}")
    payload = np.ascontiguousarray(m).astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(m.shape[0], m.shape[1]))
        fh.write(payload)


def read_matrix(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + _HEADER.size:
        raise ContainerFormatError(f"{path}: truncated header")
    if blob[: len(MAGIC)] != MAGIC:
        raise ContainerFormatError(f"{path}: bad magic string")
    rows, cols = _HEADER.unpack_from(blob, len(MAGIC))
    expected = len(MAGIC) + _HEADER.size + rows * cols * 8
    if len(blob) != expected:
        raise ContainerFormatError(
            f"{path}: payload size mismatch, expected {expected} bytes, got {len(blob)}"
        )
    data = np.frombuffer(blob, dtype="<f8", offset=len(MAGIC) + _HEADER.size)
    return data.reshape(rows, cols).astype(float)


def write_matrix_csv(path: str, matrix: np.ndarray) -> None:
    """Plain CSV export with round-trip precision."""
    np.savetxt(path, np.asarray(matrix, dtype=float), delimiter=",", fmt="%.17g")


def read_matrix_csv(path: str) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def save_instance(
    directory: str, instance: ModelInstance, kind: ModelKind, write_csv: bool = False
) -> str:
    """Write an instance (latent matrices, observations, manifest) into a directory.

    Returns the manifest path. The observation pair written matches ``kind``.
    """
    os.makedirs(directory, exist_ok=True)
    pair = observe_dot(instance) if kind is ModelKind.DOT_PRODUCT else observe_distance(instance)
    matrices = {
        "x": instance.x,
        "z": instance.z,
        "y": instance.y,
        "a": pair.a,
        "b": pair.b,
    }
    for name, matrix in matrices.items():
        write_matrix(os.path.join(directory, f"{name}.gmat"), matrix)
        if write_csv:
            write_matrix_csv(os.path.join(directory, f"{name}.csv"), matrix)
    manifest = {
        "n": instance.n,
        "d": instance.d,
        "sigma": instance.sigma,
        "seed": instance.seed,
        "truth": [int(i) for i in instance.truth.map],
        "kind": kind.value,
    }
    manifest_path = os.path.join(directory, "manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest_path


def load_instance(directory: str) -> Tuple[ModelInstance, ModelKind]:
    """Read back an instance directory written by ``save_instance``."""
    manifest_path = os.path.join(directory, "manifest.json")
    try:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ContainerFormatError(f"{manifest_path}: invalid JSON: {exc}") from exc
    try:
        kind = ModelKind(manifest["kind"])
        truth = Permutation(np.array(manifest["truth"], dtype=np.int64))
        instance = ModelInstance(
            n=int(manifest["n"]),
            d=int(manifest["d"]),
            sigma=float(manifest["sigma"]),
            x=read_matrix(os.path.join(directory, "x.gmat")),
            z=read_matrix(os.path.join(directory, "z.gmat")),
            y=read_matrix(os.path.join(directory, "y.gmat")),
            truth=truth,
            seed=int(manifest["seed"]),
        )
    except KeyError as exc:
        raise ContainerFormatError(f"{manifest_path}: missing manifest key {exc}") from exc
    return instance, kind
