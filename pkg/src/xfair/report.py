"""File-producing studies: scaling curves and the convexity sweep.

Two deliverables, each a delimited data file with a rendered figure next
to it:

* the scaling study replays the padded-feature game family across both
  query disciplines and writes ``scaling_moves.csv`` (columns ``variant,
  k, explainee_moves, oracle_calls``) plus a log-scale move-count plot;
* the shape sweep tabulates flip degree against the three convexity
  notions over every non-constant three-feature function and writes the
  per-instance JSON lines, the co-occurrence matrix, and a matrix heatmap.

All files are deterministic for a fixed package version; the figures are
presentation-only and carry no data that is not in the delimited files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .game import simulate
from .scenarios import separation_instance
from .structure import CONVEXITY_NOTIONS, all_binary_function_instances, shape_sweep

DEFAULT_KS = tuple(range(2, 9))


def scaling_rows(ks: Sequence[int] = DEFAULT_KS) -> list[dict]:
    """Simulate the game family at each padding count, both disciplines."""
    rows: list[dict] = []
    for k in ks:
        for variant, policy in (
            ("restriction", "exhaustive"),
            ("forcing", "directed_local_search"),
        ):
            config = separation_instance(k, variant)
            state, metrics = simulate(config, policy, max_moves=(1 << k) + 8)
            if not metrics.won:
                raise RuntimeError(
                    f"scaling instance k={k} variant={variant} did not finish"
                )
            rows.append(
                {
                    "variant": variant,
                    "k": k,
                    "explainee_moves": metrics.explainee_moves,
                    "oracle_calls": metrics.adversary_oracle_calls,
                }
            )
    return rows


def write_scaling_study(out_dir: Path, ks: Sequence[int] = DEFAULT_KS) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = scaling_rows(ks)
    csv_path = out_dir / "scaling_moves.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.DictWriter(
            handle,
            fieldnames=["variant", "k", "explainee_moves", "oracle_calls"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for variant, marker in (("restriction", "o"), ("forcing", "s")):
        series = [r for r in rows if r["variant"] == variant]
        ax.plot(
            [r["k"] for r in series],
            [r["explainee_moves"] for r in series],
            marker=marker,
            label=variant,
        )
    ax.set_yscale("log", base=2)
    ax.set_xlabel("padding features k")
    ax.set_ylabel("explainee moves to win")
    ax.set_title("Moves to win by game variant")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    png_path = out_dir / "scaling_moves.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {"csv": str(csv_path), "figure": str(png_path), "rows": len(rows)}


def write_shape_sweep(out_dir: Path, n: int = 3) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    report = shape_sweep(all_binary_function_instances(n))
    jsonl_path = out_dir / f"shape_sweep_n{n}.jsonl"
    jsonl_path.write_text(report.to_jsonl())
    matrix_path = out_dir / f"shape_sweep_n{n}_matrix.json"
    matrix_path.write_text(report.matrix_json())

    cells = ["degree_le2_holds", "degree_le2_fails", "degree_gt2_holds", "degree_gt2_fails"]
    data = [[report.matrix[notion][cell] for cell in cells] for notion in CONVEXITY_NOTIONS]
    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    image = ax.imshow(data, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(cells)), [c.replace("_", "\n") for c in cells])
    ax.set_yticks(range(len(CONVEXITY_NOTIONS)), CONVEXITY_NOTIONS)
    for i in range(len(CONVEXITY_NOTIONS)):
        for j in range(len(cells)):
            ax.text(j, i, str(data[i][j]), ha="center", va="center", color="white")
    ax.set_title(f"Convexity notions vs flip degree (n={n})")
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    png_path = out_dir / f"shape_sweep_n{n}_matrix.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {
        "jsonl": str(jsonl_path),
        "matrix": str(matrix_path),
        "figure": str(png_path),
        "rows": len(report.rows),
    }


def write_report(out_dir: Path, ks: Sequence[int] = DEFAULT_KS, n: int = 3) -> dict:
    """Run both studies into one directory; returns the file manifest."""
    return {
        "scaling": write_scaling_study(out_dir, ks),
        "shape_sweep": write_shape_sweep(out_dir, n),
    }
