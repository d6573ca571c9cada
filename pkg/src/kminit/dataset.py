"""Delimited-text dataset loading, label handling and min-max normalization."""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import BinaryIO, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import EmptyDataset, MissingLabels, ParseError

DATA_DIR_ENV = "KMINIT_DATA_DIR"
BUNDLED = ("ruspini", "iris", "wine")


@dataclass(frozen=True)
class DatasetSchema:
    """How to read one delimited file.

    ``delimiter=None`` splits on runs of whitespace.  ``class_column`` may be
    negative to count from the end of the row.
    """

    delimiter: Optional[str] = ","
    class_column: Optional[int] = None
    missing_token: str = "?"
    has_header: bool = False


@dataclass(frozen=True, eq=False)
class Dataset:
    points: np.ndarray
    labels: Optional[tuple] = None
    name: str = ""
    attributes: tuple = ()
    k_override: Optional[int] = None
    table_id: Optional[int] = None
    dropped_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise EmptyDataset(f"dataset {self.name!r} has no points")
        if not np.all(np.isfinite(pts)):
            raise ParseError(f"dataset {self.name!r} contains non-finite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != pts.shape[0]:
                raise ValueError("labels must have one entry per point")
            object.__setattr__(self, "labels", labels)
        if not self.attributes:
            object.__setattr__(self, "attributes", default_attribute_names(pts.shape[1]))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def attr_min(self) -> np.ndarray:
        return self.points.min(axis=0)

    @property
    def attr_max(self) -> np.ndarray:
        return self.points.max(axis=0)

    def take(self, order: Sequence[int]) -> "Dataset":
        """Return a copy with points (and labels) reordered by ``order``."""
        order = np.asarray(order)
        labels = None if self.labels is None else tuple(self.labels[i] for i in order)
        return replace(self, points=self.points[order], labels=labels)

    def __repr__(self):
        return f"Dataset(name={self.name!r}, n={self.n}, d={self.d})"


def default_attribute_names(d: int) -> tuple:
    if d <= 3:
        return ("X", "Y", "Z")[:d]
    return tuple(f"A{j + 1}" for j in range(d))


def load_delimited(source: Union[BinaryIO, bytes, str], schema: DatasetSchema = DatasetSchema(),
                   name: str = "") -> Dataset:
    """Parse delimited numeric text into a :class:`Dataset`.

    Rows containing ``schema.missing_token`` in any field are dropped.  The
    class column, when configured, is split off into ``labels``.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    rows = []
    labels = []
    header = None
    width = None
    dropped = 0
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in (line.split(schema.delimiter) if schema.delimiter
                                      else line.split())]
        if schema.has_header and header is None:
            header = fields
            width = len(fields)
            continue
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(f"expected {width} fields, found {len(fields)}", lineno)
        cls = None
        if schema.class_column is not None:
            ci = schema.class_column
            if not -width <= ci < width:
                raise ParseError(f"class column {ci} out of range for {width} fields", lineno)
            cls = fields.pop(ci)
        if schema.missing_token and (schema.missing_token in fields
                                     or cls == schema.missing_token):
            dropped += 1
            continue
        try:
            values = [float(f) for f in fields]
        except ValueError:
            bad = next(f for f in fields if not _is_float(f))
            raise ParseError(f"non-numeric field {bad!r}", lineno) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value", lineno)
        rows.append(values)
        if cls is not None:
            labels.append(cls)

    if not rows:
        raise EmptyDataset(f"no complete rows in dataset {name!r}")
    attributes = ()
    if header is not None:
        if schema.class_column is not None:
            header = list(header)
            header.pop(schema.class_column)
        attributes = tuple(header)
    return Dataset(
        points=np.array(rows, dtype=np.float64),
        labels=tuple(labels) if schema.class_column is not None else None,
        name=name,
        attributes=attributes,
        dropped_rows=dropped,
    )


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_path(path: Union[str, os.PathLike], schema: DatasetSchema = DatasetSchema(),
              name: Optional[str] = None) -> Dataset:
    path = Path(path)
    with open(path, "rb") as fh:
        return load_delimited(fh, schema, name=name or path.stem)


def min_max_normalize(ds: Dataset) -> Dataset:
    """Map every attribute linearly onto [0, 1]; constant attributes become 0."""
    x = ds.points
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    out = (x - lo) / safe
    out[:, span == 0] = 0.0
    return replace(ds, points=out)


def class_count(ds: Dataset) -> int:
    if ds.labels is None:
        raise MissingLabels(f"dataset {ds.name!r} has no class labels")
    return len(set(ds.labels))


def cluster_count(ds: Dataset) -> int:
    """Number of clusters to use: the manifest override if any, else K'."""
    if ds.k_override is not None:
        return ds.k_override
    return class_count(ds)


# --- manifests -------------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: Path
    schema: DatasetSchema
    k: Optional[int] = None
    table_id: Optional[int] = None

    def load(self) -> Dataset:
        ds = load_path(self.path, self.schema, name=self.name)
        return replace(ds, k_override=self.k, table_id=self.table_id)


def read_manifest(path: Union[str, os.PathLike]) -> list:
    """Read a JSON manifest: a list of objects with ``name``, ``path``,
    ``delimiter``, ``class_column`` and optional ``has_header``, ``k``, ``id``.
    Relative paths resolve against the manifest's directory."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = raw["datasets"]
    entries = []
    for item in raw:
        delim = item.get("delimiter", ",")
        if delim in ("whitespace", "", None):
            delim = None
        schema = DatasetSchema(
            delimiter=delim,
            class_column=item.get("class_column"),
            missing_token=item.get("missing_token", "?"),
            has_header=bool(item.get("has_header", False)),
        )
        entries.append(ManifestEntry(
            name=item["name"],
            path=(path.parent / item["path"]).resolve(),
            schema=schema,
            k=item.get("k"),
            table_id=item.get("id"),
        ))
    return entries


def bundled_manifest_path() -> Path:
    return Path(str(resources.files("kminit") / "data" / "manifest.json"))


def resolve_dataset(ref: str, manifest: Optional[Union[str, os.PathLike]] = None) -> ManifestEntry:
    """Find a dataset by file path, manifest name, or bundled name.

    Lookup order: an existing file path; a name in ``manifest``; a name in the
    manifest under ``$KMINIT_DATA_DIR``; a bundled dataset.
    """
    candidate = Path(ref)
    if candidate.is_file():
        return _guess_entry(candidate)
    manifests = []
    if manifest is not None:
        manifests.append(Path(manifest))
    env_dir = os.environ.get(DATA_DIR_ENV)
    if env_dir:
        m = Path(env_dir) / "manifest.json"
        if m.is_file():
            manifests.append(m)
        direct = Path(env_dir) / ref
        if direct.is_file():
            return _guess_entry(direct)
    manifests.append(bundled_manifest_path())
    for m in manifests:
        for entry in read_manifest(m):
            if entry.name == ref or str(entry.table_id) == ref:
                return entry
    raise FileNotFoundError(f"dataset {ref!r} not found")


def _guess_entry(path: Path) -> ManifestEntry:
    # bare files: comma-delimited unless no comma appears; class in last column
    # only when that column is non-numeric.
    with open(path, "rb") as fh:
        head = fh.read(4096).decode("utf-8", errors="replace")
    lines = [ln for ln in head.splitlines() if ln.strip()]
    delim = "," if lines and "," in lines[0] else None
    has_header = False
    class_column = None
    if lines:
        first = lines[0].split(delim) if delim else lines[0].split()
        has_header = not all(_is_float(f.strip()) or f.strip() == "?" for f in first[:-1])
        sample = lines[1] if has_header and len(lines) > 1 else lines[0]
        last = (sample.split(delim) if delim else sample.split())[-1].strip()
        if not _is_float(last) and last != "?":
            class_column = -1
    schema = DatasetSchema(delimiter=delim, class_column=class_column, has_header=has_header)
    return ManifestEntry(name=path.stem, path=path, schema=schema)


def load_bundled(name: str) -> Dataset:
    if name not in BUNDLED:
        raise FileNotFoundError(f"no bundled dataset {name!r}")
    for entry in read_manifest(bundled_manifest_path()):
        if entry.name == name:
            return entry.load()
    raise FileNotFoundError(name)


def load_many(entries: Iterable[ManifestEntry], normalize: bool = True) -> list:
    out = []
    for entry in entries:
        ds = entry.load()
        out.append(min_max_normalize(ds) if normalize else ds)
    return out
