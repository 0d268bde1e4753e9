"""Model persistence: per (station, bucket) JSON with scaler and metadata.

Floats are serialised through Python's shortest round-trip repr, so a
save/load cycle reproduces coefficients bit-identically, and therefore
predictions too (same design path, same dot products).
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from assistcast.gam.model import FittedModel
from assistcast.panel.scaling import Scaler


def sha256_of_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def scaler_hash(scaler: Scaler) -> str:
    payload = json.dumps(scaler.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


class ModelStore:
    """Directory layout::

        <root>/scaler.json
        <root>/manifest.json          # stations, buckets, data hash, timestamps
        <root>/<station>/<bucket>.json
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def save(
        self,
        models: dict[str, dict[str, FittedModel]],
        scaler: Scaler,
        *,
        data_hash: str | None = None,
        extra: dict | None = None,
    ) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "scaler.json").write_text(json.dumps(scaler.to_dict(), indent=2, sort_keys=True))
        manifest = {
            "stations": sorted(models),
            "buckets": sorted({b for by_bucket in models.values() for b in by_bucket}),
            "data_hash": data_hash,
            "trained_at": datetime.now(timezone.utc).isoformat(),
            "scaler_hash": scaler_hash(scaler),
        }
        if extra:
            manifest.update(extra)
        (self.root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
        for station, by_bucket in models.items():
            station_dir = self.root / station
            station_dir.mkdir(parents=True, exist_ok=True)
            for bucket_name, model in by_bucket.items():
                payload = json.dumps(model.to_dict(), sort_keys=True)
                (station_dir / f"{bucket_name}.json").write_text(payload)

    def load(self) -> tuple[dict[str, dict[str, FittedModel]], Scaler, dict]:
        manifest = json.loads((self.root / "manifest.json").read_text())
        scaler = Scaler.from_dict(json.loads((self.root / "scaler.json").read_text()))
        models: dict[str, dict[str, FittedModel]] = {}
        for station in manifest["stations"]:
            station_dir = self.root / station
            by_bucket = {}
            for path in sorted(station_dir.glob("*.json")):
                by_bucket[path.stem] = FittedModel.from_dict(json.loads(path.read_text()))
            models[station] = by_bucket
        return models, scaler, manifest

    def exists(self) -> bool:
        return (self.root / "manifest.json").exists()
