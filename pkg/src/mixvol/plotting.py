"""Figures written next to the JSON reports (``--figures DIR``).

Uses matplotlib's object API with Figure directly, so no GUI backend is
ever selected.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

from .geometry import LatticePolytope, dilated_sum


def _ring(p: LatticePolytope) -> list[tuple[int, int]]:
    """Vertices of a polygon in counter-clockwise order."""
    verts = list(p.vertices)
    if p.affine_dim < 2:
        return verts
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)
    return sorted(verts, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))


def plot_tuple(polys: Sequence[LatticePolytope], path: Path) -> Path | None:
    """Each polytope and their Minkowski sum; dimensions 1 and 2 only."""
    n = polys[0].ambient_dim
    if n > 2:
        return None
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    total = dilated_sum(polys, [1] * len(polys))
    shapes = list(polys) + [total]
    labels = [f"Q{i + 1}" for i in range(len(polys))] + ["sum"]
    for k, (p, label) in enumerate(zip(shapes, labels)):
        if n == 1:
            xs = [v[0] for v in p.vertices]
            ax.plot([min(xs), max(xs)], [k, k], marker="o", label=label)
        else:
            ring = _ring(p)
            xs = [v[0] for v in ring] + [ring[0][0]]
            ys = [v[1] for v in ring] + [ring[0][1]]
            style = "--" if label == "sum" else "-"
            ax.plot(xs, ys, style, marker="o", label=label)
    if n == 2:
        ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.legend()
    ax.set_title("polytopes and Minkowski sum")
    fig.savefig(path)
    return path


def plot_hilbert_diagonal(series: dict[str, list[tuple[int, int]]], path: Path) -> Path:
    """H(t * lam) against t for one or more directions lam."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    for label, pts in series.items():
        ax.plot([t for t, _ in pts], [h for _, h in pts], marker=".", label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("H(t lam)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path)
    return path


def plot_route_agreement(pairs: Sequence[tuple[int, int]], path: Path,
                         xlabel: str = "geometric", ylabel: str = "algebraic") -> Path:
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    if pairs:
        xs, ys = zip(*pairs)
        top = max(max(xs), max(ys), 1)
        ax.plot([0, top], [0, top], color="grey", lw=0.8)
        ax.scatter(xs, ys, s=14)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(f"{len(pairs)} instances")
    fig.savefig(path)
    return path


def plot_bernstein(bound: int, distinct: dict[int, int], multiplicity: int | None, path: Path) -> Path:
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot()
    labels = [f"F_{q} distinct" for q in distinct]
    values = list(distinct.values())
    if multiplicity is not None:
        labels.append("with multiplicity")
        values.append(multiplicity)
    ax.bar(labels, values)
    ax.axhline(bound, color="red", ls="--", label=f"mixed volume = {bound}")
    ax.legend()
    ax.set_ylabel("torus zeros")
    fig.savefig(path)
    return path
