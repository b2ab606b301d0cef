"""Point-cloud CSV files, sequence manifests and candidate lattices.

CSV clouds hold one point per row, comma-separated floats. Lines starting
with ``#`` are comments; a first non-comment line with no numeric field is
a header. Floats are written with ``repr`` (shortest round-trip form), so
``load_cloud(save_cloud(A))`` reproduces A bit for bit.

A manifest is JSON ``{"dim": d, "entries": [{"index": 1, "path": "A1.csv"}, ...]}``
with indices 1..N in order; relative paths resolve against the manifest's
directory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, EmptyCloud, ManifestError, ParseError, RaggedRow
from .metric import EUCLIDEAN, MetricSpec, PointSet

MAX_LATTICE_POINTS = 2_000_000


def parse_cloud(text: str, dim: Optional[int] = None, path=None) -> PointSet:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    rows = []
    width = dim
    seen_content = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r").strip()
        if line.startswith("#"):
            continue
        if not line:
            raise ParseError(lineno, "blank line", path=path)
        fields = [f.strip() for f in line.split(",")]
        try:
            values = [float(f) for f in fields]
        except ValueError:
            if not seen_content and not any(_is_float(f) for f in fields):
                seen_content = True  # header row
                continue
            raise ParseError(lineno, f"not a number in {line!r}", path=path) from None
        seen_content = True
        if not all(math.isfinite(v) for v in values):
            raise ParseError(lineno, "non-finite coordinate", path=path)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise RaggedRow(lineno, width, len(values), path=path)
        rows.append(values)
    if not rows:
        raise EmptyCloud(f"{path or 'input'}: no points")
    return PointSet(np.array(rows, dtype=np.float64))


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_cloud(path, dim: Optional[int] = None) -> PointSet:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise DataError(f"{path}: no such file") from None
    return parse_cloud(text, dim, path=path)


def format_cloud(A: PointSet) -> str:
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in A.points)


def save_cloud(A: PointSet, path):
    Path(path).write_text(format_cloud(A))


@dataclass(frozen=True)
class Manifest:
    dim: int
    entries: tuple  # ((index, Path), ...)

    def paths(self):
        return [p for _, p in self.entries]


def manifest_from_dict(data, base: Path = Path(".")) -> Manifest:
    try:
        dim = int(data["dim"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError):
        raise ManifestError("manifest needs an integer 'dim' and an 'entries' list") from None
    if dim < 1 or not isinstance(entries, list) or not entries:
        raise ManifestError("manifest needs dim >= 1 and a non-empty 'entries' list")
    out = []
    for expected, e in enumerate(entries, start=1):
        try:
            index, p = int(e["index"]), str(e["path"])
        except (KeyError, TypeError, ValueError):
            raise ManifestError(f"entry {expected}: needs 'index' and 'path'") from None
        if index != expected:
            raise ManifestError(f"entry {expected}: index {index}, expected {expected} (indices run 1..N)")
        path = Path(p)
        out.append((index, path if path.is_absolute() else base / path))
    return Manifest(dim, tuple(out))


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise DataError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON: {exc}") from None
    return manifest_from_dict(data, path.parent)


def load_sequence(manifest, metric: MetricSpec = EUCLIDEAN):
    """Load every cloud of a manifest into a ``SetSequence``."""
    from .hyperspace import SetSequence

    if not isinstance(manifest, Manifest):
        manifest = load_manifest(manifest)
    sets = []
    for index, p in manifest.entries:
        A = load_cloud(p, manifest.dim)
        if A.dim != manifest.dim:
            raise ManifestError(f"entry {index}: cloud has dimension {A.dim}, manifest says {manifest.dim}")
        sets.append(A)
    if len(sets) < 2:
        raise ManifestError("a sequence needs at least two entries")
    return SetSequence(tuple(sets), metric)


def write_sequence(sets: Sequence[PointSet], directory, stem: str = "A") -> Path:
    """Write each set as ``<stem><n>.csv`` plus ``manifest.json``; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for n, A in enumerate(sets, start=1):
        name = f"{stem}{n}.csv"
        save_cloud(A, directory / name)
        entries.append({"index": n, "path": name})
    path = directory / "manifest.json"
    path.write_text(json.dumps({"dim": sets[0].dim, "entries": entries}, indent=2) + "\n")
    return path


def lattice_candidates(points: np.ndarray, step: float) -> PointSet:
    """Multiples of ``step`` covering the bounding box of ``points`` grown by ``step``.

    Lattice coordinates are integer multiples of ``step``, so the origin is a
    candidate whenever the grown box contains it.
    """
    if not step > 0:
        raise DataError("grid step must be > 0")
    lo = points.min(axis=0) - step
    hi = points.max(axis=0) + step
    axes = []
    for a, b in zip(lo, hi):
        k = np.arange(math.ceil(a / step), math.floor(b / step) + 1)
        axes.append(k * step)
    total = math.prod(len(ax) for ax in axes)
    if total > MAX_LATTICE_POINTS:
        raise DataError(f"grid step {step!r} gives {total} candidates (limit {MAX_LATTICE_POINTS})")
    mesh = np.meshgrid(*axes, indexing="ij")
    return PointSet(np.stack([m.reshape(-1) for m in mesh], axis=1))
