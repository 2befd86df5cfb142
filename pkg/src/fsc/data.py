"""Core containers, CSV ingestion, and column normalization."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .metrics import ClusteringResult

# Columns with Euclidean norm at or below this are left unscaled.
EPS_NORM = 1e-12


@dataclass
class Dataset:
    """A column-oriented dataset: ``points[:, i]`` is the i-th sample.

    Args:
        points: (D, n) real matrix, features by samples.
        labels: optional (n,) integer ground-truth labels in {0..K-1}.
        id: optional source name.
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    id: str | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 2:
            raise ValueError(f"points must be 2-D, got shape {self.points.shape}")
        if self.points.shape[0] < 1 or self.points.shape[1] < 1:
            raise ValueError(f"points must be at least 1x1, got shape {self.points.shape}")
        if not np.all(np.isfinite(self.points)):
            bad = np.argwhere(~np.isfinite(self.points))[0]
            raise ValueError(f"non-finite entry at feature {bad[0]}, sample {bad[1]}")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if not np.issubdtype(self.labels.dtype, np.integer):
                raise ValueError("labels must be integers")
            self.labels = self.labels.astype(np.int64)
            if self.labels.shape != (self.n,):
                raise ValueError(
                    f"labels must have length n={self.n}, got shape {self.labels.shape}"
                )
            if self.labels.min() < 0:
                raise ValueError("labels must be nonnegative cluster ids")

    @property
    def dim(self) -> int:
        """Ambient dimension D."""
        return self.points.shape[0]

    @property
    def n(self) -> int:
        """Number of samples."""
        return self.points.shape[1]


def _parse_label(cell: str, row: int, col: int) -> int:
    try:
        value = float(cell)
    except ValueError:
        raise ValueError(f"label at row {row}, column {col} is not a number: {cell!r}")
    if not value.is_integer():
        raise ValueError(f"label at row {row}, column {col} is not an integer: {cell!r}")
    return int(value)


def load_csv(
    path: str,
    has_header: bool = False,
    label_column: int | str | None = None,
) -> Dataset:
    """Load a CSV of samples-as-rows into a (D, n) Dataset.

    Args:
        path: CSV file; comma separated, '.' decimal.
        has_header: whether the first row is a header.
        label_column: optional column holding integer labels, given as a
            0-based index (negative allowed) or, when a header is present,
            a column name. The column is removed from the features.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: empty file")

    header = None
    if has_header:
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: no data rows")

    ncols = len(rows[0])
    label_idx = None
    if label_column is not None:
        if isinstance(label_column, str):
            if header is None:
                raise ValueError("label column given by name requires has_header=True")
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise ValueError(f"label column {label_column!r} not in header {header}")
        else:
            label_idx = int(label_column)
            if label_idx < 0:
                label_idx += ncols
            if not 0 <= label_idx < ncols:
                raise ValueError(f"label column index {label_column} out of range for {ncols} columns")

    first_data_row = 2 if has_header else 1
    features = np.empty((len(rows), ncols - (label_idx is not None)), dtype=np.float64)
    labels = np.empty(len(rows), dtype=np.int64) if label_idx is not None else None
    for r, row in enumerate(rows):
        rownum = first_data_row + r
        if len(row) != ncols:
            raise ValueError(f"{path}: row {rownum} has {len(row)} cells, expected {ncols}")
        k = 0
        for c, cell in enumerate(row):
            if c == label_idx:
                labels[r] = _parse_label(cell.strip(), rownum, c + 1)
                continue
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(f"{path}: row {rownum}, column {c + 1} is not a number: {cell!r}")
            if not np.isfinite(value):
                raise ValueError(f"{path}: row {rownum}, column {c + 1} is not finite: {cell!r}")
            features[r, k] = value
            k += 1

    return Dataset(points=features.T, labels=labels, id=path)


def save_csv(data: Dataset, path: str, header: bool = True) -> None:
    """Write a Dataset as samples-by-rows CSV, labels (if any) in a trailing column.

    Values are printed with 17 significant digits so float64 round-trips exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            names = [f"x{i}" for i in range(data.dim)]
            if data.labels is not None:
                names.append("label")
            writer.writerow(names)
        for i in range(data.n):
            row = [f"{v:.17g}" for v in data.points[:, i]]
            if data.labels is not None:
                row.append(str(int(data.labels[i])))
            writer.writerow(row)


def normalize_columns(data: Dataset) -> Dataset:
    """Scale every column to unit Euclidean norm.

    Columns with norm <= EPS_NORM are left unchanged; a warning reports
    how many were skipped.
    """
    norms = np.linalg.norm(data.points, axis=0)
    keep = norms > EPS_NORM
    skipped = int(data.n - keep.sum())
    if skipped:
        warnings.warn(f"normalize_columns: {skipped} column(s) with norm <= {EPS_NORM} left unscaled")
    scale = np.where(keep, norms, 1.0)
    return Dataset(points=data.points / scale, labels=data.labels, id=data.id)


def save_result(result: ClusteringResult, path: str, format: str = "json") -> None:
    """Persist a clustering result.

    CSV: one ``index,label`` row per point. JSON: labels, accuracy (null
    when no ground truth), per-stage timings in seconds, config echo, seed.
    """
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "label"])
            for i, label in enumerate(result.labels):
                writer.writerow([i, int(label)])
    elif format == "json":
        payload = {
            "labels": [int(v) for v in result.labels],
            "accuracy": None if result.accuracy is None else float(result.accuracy),
            "timings": {k: float(v) for k, v in result.timings.items()},
            "config": result.config,
            "seed": result.seed,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {format!r}, expected 'csv' or 'json'")
