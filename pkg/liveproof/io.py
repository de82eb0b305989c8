"""Read and write the pipeline artifacts: sensor CSVs, frame directories and JSON manifests.

Decimal values are written with the shortest representation that round-trips and read back with
the round-trip float parser, so ``save`` followed by ``load`` reproduces every value bit for bit.
"""
from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from PIL import Image

from .model import (
    AccelStream,
    Annotation,
    Chunk,
    FrameSequence,
    Label,
    MotionTrace,
    ParseError,
    Sample,
    Source,
    ValidationError,
    category_name,
    estimate_rate,
    parse_category,
)

logger = logging.getLogger(__name__)

ACCEL_COLUMNS = ["t", "ax", "ay", "az"]
"Header of an accelerometer CSV file."

MOTION_COLUMNS = ["t", "x", "y", "z"]
"Header of a motion trace CSV file, the ``z`` column being optional."

FRAME_PATTERN = "frame_{:06d}.pgm"
"File name of the frames stored in a frame directory."


# -- csv helpers ---------------------------------------------------------------
def _read_table(path: Path) -> pd.DataFrame:
    """Read a CSV file and convert pandas parser failures into :py:class:`ParseError`."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"No such file: {path}")
    try:
        return pd.read_csv(path, float_precision="round_trip", skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise ParseError("file is empty", path, 1) from e
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ParseError(str(e), path, int(match.group(1)) if match else None) from e


def _numeric(df: pd.DataFrame, path: Path) -> np.ndarray:
    """Return the table as floats, reporting the first non numeric or missing cell."""
    for column in df.columns:
        converted = pd.to_numeric(df[column], errors="coerce")
        bad = np.flatnonzero(converted.isna().to_numpy())
        if bad.size:
            row = int(bad[0])
            # header is line 1 and data lines start at 2
            raise ParseError(f"invalid value {df[column].iloc[row]!r} in column {column!r}", path, row + 2)
    return df.to_numpy(dtype=float)


def _write_table(df: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=None)
    return path


# -- accelerometer -------------------------------------------------------------
def load_accel_csv(path: str | Path, nominal_rate_hz: float | None = None) -> AccelStream:
    """Load an accelerometer stream from a ``t,ax,ay,az`` CSV file.

    Parameters:
        path: The CSV file to read.
        nominal_rate_hz: The sampling rate of the stream. Estimated from the timestamps as
            ``(n - 1) / (t_last - t_first)`` when not given.

    Returns:
        The accelerometer stream.

    Examples:
        .. code-block:: python

            from liveproof.io import load_accel_csv

            stream = load_accel_csv("accel.csv")
            stream.nominal_rate_hz
    """
    path = Path(path)
    df = _read_table(path)
    if list(df.columns) != ACCEL_COLUMNS:
        raise ParseError(f"expected header {','.join(ACCEL_COLUMNS)}, got {','.join(map(str, df.columns))}", path, 1)
    rows = _numeric(df, path)
    if rows.shape[0] < 2:
        raise ValidationError(f"{path}: an accelerometer stream needs at least 2 readings")
    t = rows[:, 0]
    rate = nominal_rate_hz if nominal_rate_hz is not None else estimate_rate(t)
    return AccelStream(t, rows[:, 1:], rate)


def save_accel_csv(stream: AccelStream, path: str | Path) -> Path:
    """Write an accelerometer stream as a ``t,ax,ay,az`` CSV file."""
    data = np.column_stack([stream.t, stream.values])
    return _write_table(pd.DataFrame(data, columns=ACCEL_COLUMNS), Path(path))


# -- motion traces -------------------------------------------------------------
def load_motion_csv(path: str | Path, source: Source | str | None = None) -> MotionTrace:
    """Load a motion trace from a ``t,x,y[,z]`` CSV file.

    Parameters:
        path: The CSV file to read.
        source: The stream the trace derives from. Defaults to video for 2 axes and to the
            accelerometer for 3 axes.

    Returns:
        The motion trace. The first row must hold zeros on every axis.
    """
    path = Path(path)
    df = _read_table(path)
    columns = list(df.columns)
    if columns == ["t"]:
        raise ValidationError(f"{path}: a motion trace needs at least one axis")
    if columns not in (MOTION_COLUMNS[:3], MOTION_COLUMNS):
        raise ParseError(f"expected header t,x,y[,z], got {','.join(map(str, columns))}", path, 1)
    rows = _numeric(df, path)
    if rows.shape[0] == 0:
        raise ValidationError(f"{path}: a motion trace needs at least one point")
    if source is None:
        source = Source.VIDEO if len(columns) == 3 else Source.ACCEL
    return MotionTrace(rows[:, 0], rows[:, 1:], Source(source))


def save_motion_csv(trace: MotionTrace, path: str | Path) -> Path:
    """Write a motion trace as a ``t,x,y[,z]`` CSV file."""
    data = np.column_stack([trace.t, trace.values])
    columns = ["t", *trace.axes]
    return _write_table(pd.DataFrame(data, columns=columns), Path(path))


# -- frames --------------------------------------------------------------------
def read_frames(directory: str | Path, fps: float = 30.0) -> FrameSequence:
    """Read the ``frame_%06d.pgm`` files of a directory, in name order."""
    directory = Path(directory)
    files = sorted(directory.glob("frame_*.pgm"))
    if not files:
        raise FileNotFoundError(f"No frame_*.pgm file in {directory}")
    frames = []
    for file in files:
        with Image.open(file) as image:
            frames.append(np.asarray(image.convert("L"), dtype=np.uint8))
    logger.debug(f"read {len(frames)} frames from {directory}")
    return FrameSequence(frames, fps)


def write_frames(frames: FrameSequence | Iterable[np.ndarray], directory: str | Path) -> list[Path]:
    """Write frames as binary PGM (P5) files named ``frame_%06d.pgm``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stack = frames.frames if isinstance(frames, FrameSequence) else frames
    paths = []
    for i, frame in enumerate(stack):
        path = directory / FRAME_PATTERN.format(i)
        Image.fromarray(np.asarray(frame, dtype=np.uint8)).save(path, format="PPM")
        paths.append(path)
    return paths


# -- manifests -----------------------------------------------------------------
def _relative(path: Path, root: Path) -> str:
    return path.relative_to(root).as_posix()


def _read_manifest(path: Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"No such manifest: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path, e.lineno) from e


def save_sample(sample: Sample, directory: str | Path) -> Path:
    """Write a sample as a JSON manifest with companion CSV files.

    The manifest is ``<directory>/<id>.json`` and its paths are relative to ``directory``.

    Parameters:
        sample: The sample to save.
        directory: The destination directory.

    Returns:
        The path to the manifest.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "id": sample.id,
        "motion_path": _relative(save_motion_csv(sample.video_motion, directory / f"{sample.id}.motion.csv"), directory),
        "accel_path": None,
        "annotation": sample.annotation.to_tuples(),
        "label": sample.label.value,
        "provenance": sample.provenance,
    }
    if sample.accel is not None:
        path = save_accel_csv(sample.accel, directory / f"{sample.id}.accel.csv")
        manifest["accel_path"] = _relative(path, directory)
    if sample.accel_motion is not None:
        path = save_motion_csv(sample.accel_motion, directory / f"{sample.id}.accel_motion.csv")
        manifest["accel_motion_path"] = _relative(path, directory)
    if sample.fake_windows:
        manifest["fake_windows"] = [list(w) for w in sample.fake_windows]
    if sample.parent_id is not None:
        manifest["parent_id"] = sample.parent_id
    if sample.accel is not None:
        manifest["nominal_rate_hz"] = sample.accel.nominal_rate_hz
    path = directory / f"{sample.id}.json"
    path.write_text(json.dumps(manifest, indent=2))
    return path


def load_sample(path: str | Path) -> Sample:
    """Load a sample from its JSON manifest."""
    path = Path(path)
    manifest = _read_manifest(path)
    root = path.parent
    missing = {"id", "motion_path", "annotation", "label"} - set(manifest)
    if missing:
        raise ParseError(f"missing manifest keys {sorted(missing)}", path)
    accel = None
    if manifest.get("accel_path"):
        accel = load_accel_csv(root / manifest["accel_path"], manifest.get("nominal_rate_hz"))
    accel_motion = None
    if manifest.get("accel_motion_path"):
        accel_motion = load_motion_csv(root / manifest["accel_motion_path"], Source.ACCEL)
    return Sample(
        id=str(manifest["id"]),
        video_motion=load_motion_csv(root / manifest["motion_path"], Source.VIDEO),
        accel=accel,
        annotation=Annotation.from_tuples(manifest["annotation"]),
        label=Label.of(manifest["label"]),
        provenance=manifest.get("provenance", manifest["label"]),
        accel_motion=accel_motion,
        fake_windows=tuple(tuple(w) for w in manifest.get("fake_windows", [])),
        parent_id=manifest.get("parent_id"),
    )


def _file_id(id: str) -> str:
    return id.replace("@", "_at_").replace("/", "_")


def save_chunk(chunk: Chunk, directory: str | Path) -> Path:
    """Write a chunk as a JSON manifest with its two motion traces as CSV files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = _file_id(chunk.id)
    manifest = {
        "id": chunk.id,
        "parent_sample_id": chunk.parent_sample_id,
        "start_s": chunk.start_s,
        "end_s": chunk.end_s,
        "motion_path": _relative(save_motion_csv(chunk.video_motion, directory / f"{name}.motion.csv"), directory),
        "accel_motion_path": _relative(
            save_motion_csv(chunk.accel_motion, directory / f"{name}.accel_motion.csv"), directory
        ),
        "category": category_name(chunk.category),
        "label": chunk.label.value,
        "provenance": chunk.provenance,
    }
    path = directory / f"{name}.json"
    path.write_text(json.dumps(manifest, indent=2))
    return path


def load_chunk(path: str | Path) -> Chunk:
    """Load a chunk from its JSON manifest."""
    path = Path(path)
    manifest = _read_manifest(path)
    root = path.parent
    return Chunk(
        parent_sample_id=manifest["parent_sample_id"],
        start_s=float(manifest["start_s"]),
        end_s=float(manifest["end_s"]),
        video_motion=load_motion_csv(root / manifest["motion_path"], Source.VIDEO),
        accel_motion=load_motion_csv(root / manifest["accel_motion_path"], Source.ACCEL),
        category=parse_category(manifest.get("category")),
        label=Label.of(manifest["label"]),
        provenance=manifest.get("provenance", manifest["label"]),
    )


def save_samples(samples: Sequence[Sample], directory: str | Path) -> list[Path]:
    """Write every sample of a corpus into ``directory``."""
    paths = [save_sample(s, directory) for s in samples]
    logger.info(f"wrote {len(paths)} sample manifests to {directory}")
    return paths


def load_samples(directory: str | Path) -> list[Sample]:
    """Load every sample manifest of a directory, in file name order."""
    return [load_sample(p) for p in sorted(Path(directory).glob("*.json"))]


def save_chunks(chunks: Sequence[Chunk], directory: str | Path) -> list[Path]:
    """Write every chunk into ``directory``."""
    paths = [save_chunk(c, directory) for c in chunks]
    logger.info(f"wrote {len(paths)} chunk manifests to {directory}")
    return paths


def load_chunks(directory: str | Path) -> list[Chunk]:
    """Load every chunk manifest of a directory, in file name order."""
    return [load_chunk(p) for p in sorted(Path(directory).glob("*.json"))]


# -- descriptor tables ---------------------------------------------------------
FEATURE_META_COLUMNS = ["id", "sample_id", "category", "label", "provenance"]
"Leading text columns of a descriptor CSV file, followed by the numeric descriptors."


def save_features_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write a chunk descriptor table."""
    missing = [c for c in FEATURE_META_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"Descriptor table lacks the columns {missing}")
    return _write_table(frame, Path(path))


def load_features_csv(path: str | Path) -> pd.DataFrame:
    """Read a chunk descriptor table written by :py:func:`save_features_csv`."""
    path = Path(path)
    table = _read_table(path)
    missing = [c for c in FEATURE_META_COLUMNS if c not in table.columns]
    if missing:
        raise ParseError(f"missing columns {missing}", path, 1)
    meta = table[FEATURE_META_COLUMNS].astype(str)
    values = table.drop(columns=FEATURE_META_COLUMNS)
    numeric = pd.DataFrame(_numeric(values, path), columns=values.columns, index=table.index)
    return pd.concat([meta, numeric], axis=1)
