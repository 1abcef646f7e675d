"""Feature file I/O.

FAB1 layout: 8-byte magic "FABFEAT1", u32 LE row count, u32 LE column count,
rows*cols float32 LE row-major payload, then a JSON trailer (UTF-8 to EOF)
holding frame_spec, channel_freqs, and the frontend name. CSV export writes
one row per frame.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .errors import FormatError
from .spectral import FeatureMatrix, FrameSpec

__all__ = ["write_fab1", "read_fab1", "write_feature_csv"]

MAGIC = b"FABFEAT1"


def write_fab1(path: str, features: FeatureMatrix, frontend: str) -> None:
    rows, cols = features.values.shape
    trailer = json.dumps(
        {
            "frame_spec": features.frame_spec.to_dict(),
            "channel_freqs": [float(f) for f in features.channel_freqs],
            "frontend": frontend,
        },
        sort_keys=True,
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", rows, cols))
        fh.write(features.values.astype("<f4").tobytes(order="C"))
        fh.write(trailer)


def read_fab1(path: str) -> tuple[FeatureMatrix, str]:
    """Read a FAB1 file, returning (features, frontend name)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 16 or data[:8] != MAGIC:
        raise FormatError(f"{path}: not a FAB1 feature file (magic {data[:8]!r})")
    rows, cols = struct.unpack_from("<II", data, 8)
    need = 16 + rows * cols * 4
    if len(data) < need:
        raise FormatError(f"{path}: truncated FAB1 payload")
    values = (
        np.frombuffer(data, dtype="<f4", count=rows * cols, offset=16)
        .reshape(rows, cols)
        .astype(float)
    )
    try:
        trailer = json.loads(data[need:].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: bad FAB1 JSON trailer: {exc}") from exc
    spec = FrameSpec.from_dict(trailer["frame_spec"])
    feats = FeatureMatrix(values, spec, np.asarray(trailer["channel_freqs"]))
    return feats, trailer["frontend"]


def write_feature_csv(path: str, features: FeatureMatrix) -> None:
    """One feature row per frame; header names channels by center frequency."""
    if features.channel_freqs.size:
        header = ",".join(f"ch{i}_{f:.2f}hz" for i, f in enumerate(features.channel_freqs))
    else:
        header = ",".join(f"ch{i}" for i in range(features.n_channels))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("frame," + header + "\n")
        for t, row in enumerate(features.values):
            fh.write(str(t) + "," + ",".join(f"{v:.9g}" for v in row) + "\n")
