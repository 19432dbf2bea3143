"""Render one figure from one CSV, as described by a small JSON spec.

The renderer is strictly read-only over its input tables: it draws what
the CSV says and never recomputes an incentive value. Three kinds:

* ``lines``   -- one or more y columns against x, optionally split into
  one line per distinct value of a group column,
* ``contour`` -- a filled contour of a value column over a complete
  rectangular (x, y) grid, with the zero level overlaid in black
  whenever the values actually cross zero,
* ``scatter`` -- y against x, optionally one series per group value.

Axis ranges always come from the data.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "RenderError", "RenderResult", "load_spec", "render"]

KINDS = ("lines", "contour", "scatter")


class RenderError(Exception):
    """Defective spec or input table; the CLI maps this to exit 1."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: Path
    kind: str
    x: str
    y: tuple[str, ...]
    output_image: Path
    value: Optional[str] = None
    group: Optional[str] = None


@dataclass(frozen=True)
class RenderResult:
    output_image: Path
    # number of connected zero-level segments drawn (contour kind only)
    zero_segments: Optional[int] = None


_SPEC_KEYS = {"input_csv", "kind", "x", "y", "value", "group", "output_image"}


def load_spec(path: Path) -> FigureSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise RenderError(f"cannot read spec: {exc}") from None
    except json.JSONDecodeError as exc:
        raise RenderError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise RenderError("spec must be a JSON object")
    unknown = set(obj) - _SPEC_KEYS
    if unknown:
        raise RenderError(f"unknown spec key '{sorted(unknown)[0]}'")
    for key in ("input_csv", "kind", "x", "y", "output_image"):
        if key not in obj:
            raise RenderError(f"spec is missing key '{key}'")
    kind = obj["kind"]
    if kind not in KINDS:
        raise RenderError(f"kind must be one of {'/'.join(KINDS)}, got '{kind}'")
    y = obj["y"]
    y_cols = tuple(y) if isinstance(y, list) else (y,)
    if not y_cols or not all(isinstance(c, str) for c in y_cols):
        raise RenderError("'y' must be a column name or a list of column names")
    if kind == "contour" and "value" not in obj:
        raise RenderError("contour kind needs a 'value' column")
    return FigureSpec(
        input_csv=Path(obj["input_csv"]),
        kind=kind,
        x=obj["x"],
        y=y_cols,
        output_image=Path(obj["output_image"]),
        value=obj.get("value"),
        group=obj.get("group"),
    )


def _load_table(path: Path) -> dict[str, list[str]]:
    try:
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise RenderError(f"cannot read CSV: {exc}") from None
    if not rows:
        raise RenderError(f"empty CSV {path}: no header row")
    header, data = rows[0], rows[1:]
    if not data:
        raise RenderError(f"empty CSV {path}: no data rows")
    if any(len(row) != len(header) for row in data):
        raise RenderError(f"ragged CSV {path}: row width differs from header")
    return {name: [row[i] for row in data] for i, name in enumerate(header)}


def _column(table: dict[str, list[str]], name: str, path: Path) -> list[str]:
    if name not in table:
        raise RenderError(f"missing column '{name}' in {path} (has {', '.join(table)})")
    return table[name]


def _floats(table: dict[str, list[str]], name: str, path: Path) -> np.ndarray:
    raw = _column(table, name, path)
    try:
        return np.array([float(v) for v in raw])
    except ValueError:
        raise RenderError(f"column '{name}' in {path} is not numeric") from None


def render(spec: FigureSpec) -> RenderResult:
    table = _load_table(spec.input_csv)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    try:
        if spec.kind == "contour":
            zero_segments = _render_contour(ax, spec, table)
        elif spec.kind == "lines":
            zero_segments = None
            _render_lines(ax, spec, table)
        else:
            zero_segments = None
            _render_scatter(ax, spec, table)
        ax.set_xlabel(spec.x)
        if spec.kind == "contour":
            ax.set_ylabel(spec.y[0])
        else:
            ax.set_ylabel(", ".join(spec.y))
        fig.tight_layout()
        try:
            fig.savefig(spec.output_image, dpi=150)
        except OSError as exc:
            raise RenderError(f"cannot write image: {exc}") from None
    finally:
        plt.close(fig)
    return RenderResult(output_image=spec.output_image, zero_segments=zero_segments)


def _groups(spec: FigureSpec, table, path):
    if spec.group is None:
        yield None, np.arange(len(next(iter(table.values()))))
        return
    raw = _column(table, spec.group, path)
    seen = []
    for v in raw:
        if v not in seen:
            seen.append(v)
    arr = np.array(raw)
    for v in seen:
        yield v, np.flatnonzero(arr == v)


def _render_lines(ax, spec: FigureSpec, table) -> None:
    xs = _floats(table, spec.x, spec.input_csv)
    for label, idx in _groups(spec, table, spec.input_csv):
        order = idx[np.argsort(xs[idx], kind="stable")]
        for col in spec.y:
            ys = _floats(table, col, spec.input_csv)
            name = col if label is None else f"{col} [{spec.group}={label}]"
            ax.plot(xs[order], ys[order], label=name)
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)


def _render_scatter(ax, spec: FigureSpec, table) -> None:
    xs = _floats(table, spec.x, spec.input_csv)
    for label, idx in _groups(spec, table, spec.input_csv):
        for col in spec.y:
            ys = _floats(table, col, spec.input_csv)
            name = col if label is None else f"{spec.group}={label}"
            ax.scatter(xs[idx], ys[idx], s=12, label=name)
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)


def _render_contour(ax, spec: FigureSpec, table) -> int:
    path = spec.input_csv
    if len(spec.y) != 1:
        raise RenderError("contour kind takes exactly one 'y' column")
    xs = _floats(table, spec.x, path)
    ys = _floats(table, spec.y[0], path)
    zs = _floats(table, spec.value, path)

    x_axis = np.unique(xs)
    y_axis = np.unique(ys)
    if len(xs) != len(x_axis) * len(y_axis):
        raise RenderError(
            f"ragged grid in {path}: {len(xs)} rows != "
            f"{len(x_axis)} x-values * {len(y_axis)} y-values"
        )
    grid = np.full((len(y_axis), len(x_axis)), math.nan)
    xi = np.searchsorted(x_axis, xs)
    yi = np.searchsorted(y_axis, ys)
    grid[yi, xi] = zs
    if np.isnan(grid).any():
        raise RenderError(f"ragged grid in {path}: duplicate and missing (x, y) points")

    filled = ax.contourf(x_axis, y_axis, grid, levels=24, cmap="viridis")
    ax.figure.colorbar(filled, ax=ax, label=spec.value)
    with warnings.catch_warnings():
        # an all-positive or all-negative surface has no zero level; that
        # is expected, not a defect
        warnings.simplefilter("ignore")
        zero = ax.contour(x_axis, y_axis, grid, levels=[0.0], colors="black", linewidths=1.5)
    # a level with no crossing yields one empty vertex array; count only
    # segments that actually contain points
    return sum(1 for level in zero.allsegs for seg in level if len(seg) > 0)
