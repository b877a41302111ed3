"""Checkpoint directory format: manifest.json plus one raw float32 blob per array.

Blobs are little-endian IEEE-754 32-bit, row-major. The format is
language-neutral, diff-able, and bit-exact across round-trips.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def config_digest(config: dict) -> str:
    """SHA-256 of the canonicalized (sorted-keys, compact) config JSON."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class Checkpoint:
    arrays: dict[str, np.ndarray]
    manifest: dict

    @property
    def digest(self) -> str | None:
        return self.manifest.get("config_digest")

    @property
    def config(self) -> dict | None:
        return self.manifest.get("config")


def save_checkpoint(
    path: str | Path,
    arrays: dict[str, np.ndarray],
    config: dict | None = None,
    extra: dict | None = None,
) -> None:
    """Write atomically: assemble in a temp dir, then rename into place."""
    path = Path(path)
    manifest: dict = {
        "format_version": FORMAT_VERSION,
        "config_digest": config_digest(config) if config is not None else None,
        "config": config,
        "extra": extra or {},
        "arrays": {},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=path.name + ".tmp.", dir=path.parent))
    try:
        (tmp / "data").mkdir()
        for i, name in enumerate(sorted(arrays)):
            array = np.ascontiguousarray(arrays[name], dtype="<f4")
            blob = f"data/{i:05d}.bin"
            with (tmp / blob).open("wb") as fh:
                fh.write(array.tobytes())
            manifest["arrays"][name] = {"shape": list(array.shape), "file": blob}
        with (tmp / "manifest.json").open("w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
        if path.exists():
            shutil.rmtree(path)
        os.rename(tmp, path)
    finally:
        if tmp.exists():
            shutil.rmtree(tmp, ignore_errors=True)


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    manifest_path = path / "manifest.json"
    if not manifest_path.exists():
        raise CheckpointError(f"{path}: not a checkpoint (missing manifest.json)")
    with manifest_path.open("r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported format version {manifest.get('format_version')}"
        )
    arrays: dict[str, np.ndarray] = {}
    for name, entry in manifest["arrays"].items():
        shape = tuple(entry["shape"])
        blob_path = path / entry["file"]
        expected = int(np.prod(shape, dtype=np.int64)) * 4
        data = blob_path.read_bytes()
        if len(data) != expected:
            raise CheckpointError(
                f"{path}: array {name!r}: blob {entry['file']} has {len(data)} bytes, "
                f"expected {expected} for shape {list(shape)}"
            )
        arrays[name] = np.frombuffer(data, dtype="<f4").reshape(shape).copy()
    return Checkpoint(arrays=arrays, manifest=manifest)
