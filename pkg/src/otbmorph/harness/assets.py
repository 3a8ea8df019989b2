"""File-backed assets: population/pool manifests, landmark JSON, PNG images.

Formats:

* embeddings JSONL, one record per face sample:
  ``{"id", "identity", "group", "vector", "params"}`` for parametric faces
  or ``{"id", "identity", "group", "vector", "image", "landmarks"}`` with
  paths (relative to the manifest) for raster faces.
* key-pool JSONL: ``{"id", "group", "vector", "face"}`` where ``face`` is
  a parametric coefficient list or an image path (with landmarks expected
  at ``<image>.landmarks.json`` unless a ``landmarks`` key is present).
* landmark JSON: ``{"image_id", "width", "height", "points"}``.

Vectors are taken on trust as extractor outputs for their faces.
"""

import json
import os

import numpy as np
from PIL import Image

from ..errors import ExtractionError, LoadError
from ..keyselect import GROUPS, KeyPool, KeyPoolEntry
from ..morph import Landmarks, ParametricFace, RasterFace
from .synthetic import Identity, Population, SyntheticExtractor


class LookupExtractor:
    """Extractor that serves stored embeddings keyed by asset id.

    Derived faces (morphs have no asset id) cannot be embedded; protected
    verification therefore needs a real extractor or a synthetic one.
    """

    def __init__(self, table: dict):
        self.table = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}

    def __call__(self, face) -> np.ndarray:
        asset_id = getattr(face, "asset_id", None)
        if asset_id is None:
            raise ExtractionError(
                "face has no asset id (morphed faces are not in the embedding "
                "file); supply an extractor that can embed derived faces"
            )
        if asset_id not in self.table:
            raise ExtractionError(f"no stored embedding for asset {asset_id!r}")
        return self.table[asset_id]


def load_image(path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise LoadError("image file not found", path=path)
    except OSError as exc:
        raise LoadError(f"cannot read image: {exc}", path=path)


def save_image(path, pixels: np.ndarray):
    Image.fromarray(np.asarray(pixels, dtype=np.uint8), mode="RGB").save(path, format="PNG")


def load_landmarks(path) -> Landmarks:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise LoadError("landmark file not found", path=path)
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno)
    for key in ("image_id", "width", "height", "points"):
        if key not in raw:
            raise LoadError(f"landmark file missing key {key!r}", path=path)
    try:
        return Landmarks(
            np.asarray(raw["points"], dtype=np.float64),
            int(raw["width"]),
            int(raw["height"]),
        )
    except (TypeError, ValueError) as exc:
        raise LoadError(f"bad landmarks for {raw.get('image_id')!r}: {exc}", path=path)


def save_landmarks(path, landmarks: Landmarks, image_id: str):
    payload = {
        "image_id": image_id,
        "width": landmarks.width,
        "height": landmarks.height,
        "points": landmarks.points.tolist(),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def _iter_jsonl(path):
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        raise LoadError("file not found", path=path)
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LoadError(f"invalid JSON: {exc.msg}", path=path, line=lineno)
            if not isinstance(record, dict):
                raise LoadError("record must be a JSON object", path=path, line=lineno)
            yield lineno, record


def _vector(record, key, dim, path, lineno, owner) -> np.ndarray:
    value = record.get(key)
    if not isinstance(value, list):
        raise LoadError(f"{owner}: missing or non-list {key!r}", path=path, line=lineno)
    v = np.asarray(value, dtype=np.float64)
    if v.ndim != 1 or (dim is not None and v.shape[0] != dim):
        raise LoadError(
            f"{owner}: {key!r} has dimension {v.shape[0] if v.ndim == 1 else v.shape}, "
            f"expected {dim}",
            path=path,
            line=lineno,
        )
    return v


def _face_from_record(record, path, lineno, owner, param_dim):
    if "params" in record:
        return ParametricFace(
            _vector(record, "params", param_dim, path, lineno, owner),
            asset_id=record["id"],
        )
    if "image" in record:
        base = os.path.dirname(os.path.abspath(path))
        image_path = os.path.join(base, record["image"])
        lm_rel = record.get("landmarks", record["image"] + ".landmarks.json")
        pixels = load_image(image_path)
        landmarks = load_landmarks(os.path.join(base, lm_rel))
        try:
            return RasterFace(pixels, landmarks, asset_id=record["id"])
        except Exception as exc:
            raise LoadError(f"{owner}: {exc}", path=path, line=lineno)
    raise LoadError(f"{owner}: needs 'params' or 'image'", path=path, line=lineno)


def load_embeddings_file(path, dim, param_dim=None):
    """Read sample records grouped by identity, preserving file order."""
    order = []
    by_identity = {}
    groups = {}
    vectors = {}
    for lineno, record in _iter_jsonl(path):
        for key in ("id", "identity", "group"):
            if key not in record:
                raise LoadError(f"record missing key {key!r}", path=path, line=lineno)
        sample_id = record["id"]
        identity = record["identity"]
        if sample_id in vectors:
            raise LoadError(f"duplicate sample id {sample_id!r}", path=path, line=lineno)
        if record["group"] not in GROUPS:
            raise LoadError(
                f"{sample_id}: unknown group {record['group']!r}", path=path, line=lineno
            )
        if identity in groups and groups[identity] != record["group"]:
            raise LoadError(
                f"{sample_id}: identity {identity!r} changes group", path=path, line=lineno
            )
        groups[identity] = record["group"]
        vectors[sample_id] = _vector(record, "vector", dim, path, lineno, sample_id)
        face = _face_from_record(record, path, lineno, sample_id, param_dim)
        if identity not in by_identity:
            order.append(identity)
            by_identity[identity] = []
        by_identity[identity].append((sample_id, face))
    if not order:
        raise LoadError("no sample records found", path=path)
    identities = tuple(
        Identity(
            identity_id=identity,
            group=groups[identity],
            samples=tuple(face for _, face in by_identity[identity]),
            sample_ids=tuple(sid for sid, _ in by_identity[identity]),
        )
        for identity in order
    )
    return identities, vectors


def load_pool_file(path, dim, param_dim=None) -> KeyPool:
    entries = []
    seen = set()
    for lineno, record in _iter_jsonl(path):
        for key in ("id", "group", "vector", "face"):
            if key not in record:
                raise LoadError(f"pool record missing key {key!r}", path=path, line=lineno)
        entry_id = record["id"]
        if entry_id in seen:
            raise LoadError(f"duplicate pool id {entry_id!r}", path=path, line=lineno)
        seen.add(entry_id)
        if record["group"] not in GROUPS:
            raise LoadError(
                f"{entry_id}: unknown group {record['group']!r}", path=path, line=lineno
            )
        vector = _vector(record, "vector", dim, path, lineno, entry_id)
        face_spec = record["face"]
        if isinstance(face_spec, list):
            face = ParametricFace(
                _vector({"face": face_spec}, "face", param_dim, path, lineno, entry_id),
                asset_id=entry_id,
            )
        elif isinstance(face_spec, str):
            base = os.path.dirname(os.path.abspath(path))
            image_path = os.path.join(base, face_spec)
            face = RasterFace(
                load_image(image_path),
                load_landmarks(
                    os.path.join(base, record.get("landmarks", face_spec + ".landmarks.json"))
                ),
                asset_id=entry_id,
            )
        else:
            raise LoadError(
                f"{entry_id}: 'face' must be a coefficient list or an image path",
                path=path,
                line=lineno,
            )
        entries.append(
            KeyPoolEntry(id=entry_id, face=face, embedding=vector, group=record["group"])
        )
    if not entries:
        raise LoadError("no pool records found", path=path)
    return KeyPool(entries)


def load_assets(config) -> tuple:
    """Assemble (Population, KeyPool) from the configured input files."""
    inputs = config.inputs or {}
    identities, vectors = load_embeddings_file(
        inputs["embeddings"], config.dim, config.param_dim
    )
    pool = load_pool_file(inputs["pool"], config.dim, config.param_dim)
    if "extractor" in inputs:
        with open(inputs["extractor"], "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise LoadError(
                    f"invalid JSON: {exc.msg}", path=inputs["extractor"], line=exc.lineno
                )
        extractor = SyntheticExtractor.from_jsonable(raw)
        if extractor.dim != config.dim:
            raise LoadError(
                f"extractor dimension {extractor.dim} does not match config dim "
                f"{config.dim}",
                path=inputs["extractor"],
            )
        param_dim = extractor.param_dim
    else:
        table = dict(vectors)
        for entry in pool.entries:
            table[entry.id] = entry.embedding
        extractor = LookupExtractor(table)
        param_dim = config.param_dim
    return (
        Population(
            identities=identities,
            extractor=extractor,
            dim=config.dim,
            param_dim=param_dim,
            mode="ingested",
        ),
        pool,
    )


def _dump_line(fh, record):
    json.dump(record, fh, sort_keys=True)
    fh.write("\n")


def write_population_assets(population: Population, pool: KeyPool, out_dir) -> dict:
    """Write a population to disk in the ingestion formats; returns paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "embeddings": os.path.join(out_dir, "embeddings.jsonl"),
        "pool": os.path.join(out_dir, "pool.jsonl"),
    }
    with open(paths["embeddings"], "w", encoding="utf-8", newline="\n") as fh:
        for identity in population.identities:
            for sample_id, face in zip(identity.sample_ids, identity.samples):
                _dump_line(
                    fh,
                    {
                        "id": sample_id,
                        "identity": identity.identity_id,
                        "group": identity.group,
                        "params": face.params.tolist(),
                        "vector": population.extractor(face).tolist(),
                    },
                )
    with open(paths["pool"], "w", encoding="utf-8", newline="\n") as fh:
        for entry in pool.entries:
            _dump_line(
                fh,
                {
                    "id": entry.id,
                    "group": entry.group,
                    "vector": entry.embedding.tolist(),
                    "face": entry.face.params.tolist(),
                },
            )
    if isinstance(population.extractor, SyntheticExtractor):
        paths["extractor"] = os.path.join(out_dir, "extractor.json")
        with open(paths["extractor"], "w", encoding="utf-8", newline="\n") as fh:
            json.dump(population.extractor.to_jsonable(), fh, sort_keys=True)
            fh.write("\n")
    return paths
