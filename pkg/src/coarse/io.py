"""Space files: the JSON schema shared by the CLI and generators, plus CSV matrices."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .metric import CoarseInputError, FiniteMetricSpace, Violation, validate_metric


class InvalidMetricError(CoarseInputError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__(f"{len(violations)} metric violation(s), first: {violations[0].to_dict()}")


def space_to_dict(space: FiniteMetricSpace) -> dict:
    out: dict = {"name": space.name, "metric": space.metric}
    if space.metric == "matrix":
        D = space.dist
        out["matrix"] = [D[i, : i + 1].tolist() for i in range(space.n)]
    else:
        out["points"] = space.coords.tolist()
    if space.subsets:
        out["subsets"] = {k: sorted(v) for k, v in sorted(space.subsets.items())}
    if space.interior is not None:
        out["interior"] = space.interior.tolist()
    if space.labels is not None:
        out["labels"] = list(space.labels)
    return out


def _matrix_from_rows(rows) -> np.ndarray:
    # either n full rows, or lower-triangle rows i of length i + 1 (diagonal kept) or i
    n = len(rows)
    if all(len(row) == n for row in rows):
        return np.array(rows, dtype=np.float64).reshape(n, n)
    M = np.zeros((n, n))
    for i, row in enumerate(rows):
        if len(row) not in (i, i + 1):
            raise CoarseInputError(f"matrix row {i} has {len(row)} entries")
        M[i, : len(row)] = row
        M[: len(row), i] = row
    return M


def space_from_dict(data: dict) -> FiniteMetricSpace:
    try:
        metric = data.get("metric", "matrix")
        common = dict(
            name=data.get("name", ""),
            subsets=data.get("subsets"),
            interior=data.get("interior"),
            labels=data.get("labels"),
        )
        if metric == "matrix":
            return FiniteMetricSpace.from_matrix(_matrix_from_rows(data["matrix"]), **common)
        points = data["points"]
        return FiniteMetricSpace.from_points(np.array(points, dtype=np.float64).reshape(len(points), -1), metric, **common)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CoarseInputError):
            raise
        raise CoarseInputError(f"malformed space description: {exc}") from exc


def _read_csv_matrix(path: Path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows:
        try:
            [float(v) for v in rows[0]]
        except ValueError:
            rows = rows[1:]
    try:
        M = np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise CoarseInputError(f"non-numeric CSV entry: {exc}") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise CoarseInputError("CSV distance matrix must be square")
    return M


def load_space(path, fmt: str | None = None, allow_invalid: bool = False) -> FiniteMetricSpace:
    """Read a space file and run metric validation on it."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    try:
        if fmt == "csv":
            space = FiniteMetricSpace.from_matrix(_read_csv_matrix(path), name=path.stem)
        else:
            space = space_from_dict(json.loads(path.read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise CoarseInputError(f"cannot read {path}: {exc}") from exc
    if not allow_invalid:
        bad = validate_metric(space)
        if bad:
            raise InvalidMetricError(bad)
    return space


def save_space(space: FiniteMetricSpace, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(space_to_dict(space)))
    tmp.replace(path)
