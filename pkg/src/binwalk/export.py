"""
Data files for a run: CSV tables, JSON summary, SVG heatmap, pump masks.

Floats are written with ``repr`` so every value round-trips exactly; together
with a fixed column and row order this makes repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import json
from collections import defaultdict
from dataclasses import replace
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

import numpy as np

from .fbgrid import compile_mask, write_mask_csv
from .metrics import SimilarityReport, bhattacharyya
from .runner import RunResult, walk_unitaries

__all__ = [
    "export_results",
    "write_masks",
    "load_positions",
    "compare_files",
    "heatmap_svg",
]


def _f(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows: Iterable[list]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _positions_rows(result: RunResult):
    for s in result.steps:
        for i, x in enumerate(s.theory.positions):
            row = [s.n, int(x), _f(s.theory.probs[i])]
            if s.sim is not None:
                row.append(_f(s.sim.probs[i]))
            yield row


def _modes_rows(result: RunResult):
    topo = result.config.topology
    for s in result.steps:
        for m in topo.modes():
            row = [s.n, m.coin, m.position, _f(s.theory_modes.probs[m.flat])]
            if s.sim_modes is not None:
                row.append(_f(s.sim_modes.probs[m.flat]))
            yield row


def summary_dict(result: RunResult) -> dict:
    r = result.report
    return {
        "scenario": r.scenario,
        "seed": r.seed,
        "steps": [{"n": n, "S": S} for n, S in zip(r.steps, r.values)],
        "mean_similarity": r.mean,
        "config_hash": result.provenance["config_hash"],
        "version": result.provenance["version"],
    }


def heatmap_svg(result: RunResult, use_sim: bool = False, cell: int = 14) -> str:
    """
    Step × position grayscale map, positions as rows and measured steps as
    columns. Darker cells carry more probability.
    """
    steps = result.steps
    positions = steps[0].theory.positions
    left, top = 48, 24
    width = left + cell * len(steps) + 8
    height = top + cell * len(positions) + 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(result.config.name)}</title>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for j, s in enumerate(steps):
        dist = s.sim if (use_sim and s.sim is not None) else s.theory
        for i, p in enumerate(dist.probs):
            level = int(round(255 * (1.0 - min(1.0, max(0.0, float(p))))))
            parts.append(
                f'<rect x="{left + j * cell}" y="{top + i * cell}" width="{cell}" '
                f'height="{cell}" fill="rgb({level},{level},{level})"/>'
            )
    for i, x in enumerate(positions):
        parts.append(
            f'<text x="{left - 4}" y="{top + i * cell + cell - 3}" font-size="9" '
            f'text-anchor="end">{int(x)}</text>'
        )
    label_every = max(1, len(steps) // 12)
    for j, s in enumerate(steps):
        if j % label_every == 0:
            parts.append(
                f'<text x="{left + j * cell + cell / 2}" y="{top + len(positions) * cell + 12}" '
                f'font-size="9" text-anchor="middle">{s.n}</text>'
            )
    parts.append(
        f'<text x="{left + cell * len(steps) / 2}" y="{height - 6}" font-size="11" '
        'text-anchor="middle">step n</text>'
    )
    parts.append(
        f'<text x="12" y="{top + cell * len(positions) / 2}" font-size="11" '
        f'text-anchor="middle" transform="rotate(-90 12 {top + cell * len(positions) / 2})">'
        "position x</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_masks(result_or_config, out_dir: str | Path, steps: Iterable[int] | None = None) -> list[Path]:
    """Write one mask CSV per (step, target mode) under ``out_dir/masks``."""
    config = getattr(result_or_config, "config", result_or_config)
    if steps is not None:
        config = replace(config, steps=tuple(sorted(set(steps))))
    out = Path(out_dir) / "masks"
    written = []
    for n, U in walk_unitaries(config).items():
        step_dir = out / f"step_{n:04d}"
        step_dir.mkdir(parents=True, exist_ok=True)
        for t in config.topology.modes():
            mask = compile_mask(U, t, config.grid, config.topology)
            written.append(write_mask_csv(mask, step_dir / f"target_{t.flat:03d}.csv"))
    return written


def export_results(result: RunResult, out_dir: str | Path, formats: Iterable[str] | None = None) -> list[Path]:
    """
    Write the requested artifacts and return their paths.

    ``csv`` → positions.csv and modes.csv; ``json`` → summary.json;
    ``svg`` → heatmap.svg; ``masks`` → masks/step_NNNN/target_TTT.csv.
    """
    formats = tuple(result.config.outputs if formats is None else formats)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sim = result.simulated
    written = []
    if "csv" in formats:
        head = ["step", "position", "p_theory"] + (["p_sim"] if sim else [])
        _write_csv(out / "positions.csv", head, _positions_rows(result))
        head = ["step", "coin", "position", "p_theory"] + (["p_sim"] if sim else [])
        _write_csv(out / "modes.csv", head, _modes_rows(result))
        written += [out / "positions.csv", out / "modes.csv"]
    if "json" in formats:
        path = out / "summary.json"
        path.write_text(json.dumps(summary_dict(result), indent=2) + "\n")
        written.append(path)
    if "svg" in formats:
        path = out / "heatmap.svg"
        path.write_text(heatmap_svg(result, use_sim=sim))
        written.append(path)
    if "masks" in formats:
        written += write_masks(result, out)
    return written


def load_positions(path: str | Path) -> dict[str, dict[int, dict[int, float]]]:
    """
    Read a positions.csv into ``{column: {step: {position: p}}}``.

    Only probability columns (``p_theory`` and, if present, ``p_sim``) are keyed.
    """
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if fields[:3] != ["step", "position", "p_theory"]:
            raise ValueError(f"{path}: unexpected header {fields}")
        cols = fields[2:]
        table: dict[str, dict[int, dict[int, float]]] = {c: defaultdict(dict) for c in cols}
        for row in reader:
            n, x = int(row["step"]), int(row["position"])
            for c in cols:
                table[c][n][x] = float(row[c])
    return {c: dict(v) for c, v in table.items()}


def _pick(table: dict, column: str | None, path) -> dict[int, dict[int, float]]:
    if column is None:
        column = "p_sim" if "p_sim" in table else "p_theory"
    if column not in table:
        raise ValueError(f"{path}: no column {column!r}")
    return table[column]


def compare_files(
    a: str | Path,
    b: str | Path | None = None,
    column_a: str | None = None,
    column_b: str | None = None,
) -> SimilarityReport:
    """
    Per-step Bhattacharyya similarity between two positions.csv files.

    By default each file contributes its ``p_sim`` column when present and
    ``p_theory`` otherwise. With ``b`` omitted, ``p_theory`` of ``a`` is compared
    with its own ``p_sim`` column.
    """
    ta = load_positions(a)
    if b is None:
        da, db = _pick(ta, column_a or "p_theory", a), _pick(ta, column_b or "p_sim", a)
    else:
        da, db = _pick(ta, column_a, a), _pick(load_positions(b), column_b, b)

    problems = []
    if set(da) != set(db):
        problems.append(f"steps only in first: {sorted(set(da) - set(db))}, "
                        f"only in second: {sorted(set(db) - set(da))}")
    else:
        for n in sorted(da):
            if set(da[n]) != set(db[n]):
                problems.append(f"step {n}: positions differ "
                                f"({sorted(set(da[n]) ^ set(db[n]))})")
    if problems:
        raise ValueError("index mismatch: " + "; ".join(problems))

    steps = sorted(da)
    values = []
    for n in steps:
        xs = sorted(da[n])
        values.append(bhattacharyya(np.array([da[n][x] for x in xs]), np.array([db[n][x] for x in xs])))
    return SimilarityReport(steps=steps, values=values, scenario=f"{Path(a).name} vs {Path(b or a).name}")
