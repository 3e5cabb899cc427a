"""Monte Carlo coverage study for the asymptotic confidence intervals.

For each replicate: draw a sample, build the interval, and test whether the
exact entropy lands inside (endpoints inclusive; a zero-width degenerate
interval therefore counts as a hit only on exact containment).  Replicate r
of an experiment uses the derived seed (seed, r) and a sweep derives each
grid point's seed from (seed, n), so results are deterministic regardless
of worker count, and fresh samples are drawn at every n.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from io import StringIO
from pathlib import Path
from typing import Iterable, Sequence, Union

from .distributions import AnalyticDistribution, derive_seed, distribution_config, sample
from .entropy import gse_analytic
from .estimation import confidence_interval


@dataclass(frozen=True)
class CoveragePoint:
    """Coverage proportion of the nominal interval at one sample size."""

    n: int
    m: int
    reps: int
    hits: int
    coverage: float
    se: float
    seed: int


@dataclass(frozen=True)
class SweepResult:
    """Coverage curve over increasing sample sizes for one distribution."""

    distribution: dict
    m: int
    alpha: float
    true_gse: float
    points: tuple[CoveragePoint, ...]


def coverage_experiment(dist: AnalyticDistribution, m: int, n: int, reps: int,
                        alpha: float, seed: int, workers: int = 1,
                        true_value: float | None = None) -> CoveragePoint:
    """Proportion of reps seeded replicates whose interval covers the truth."""
    if n < 2:
        raise ValueError("coverage experiments need n >= 2")
    if reps < 1:
        raise ValueError("need at least one replicate")
    truth = gse_analytic(dist, m) if true_value is None else true_value
    hit_flags = [False] * reps

    def fill(block: range) -> None:
        for r in block:
            counts = sample(dist, n, derive_seed(seed, r))
            hit_flags[r] = confidence_interval(counts, m, alpha).contains(truth)

    if workers <= 1:
        fill(range(reps))
    else:
        step = -(-reps // workers)
        blocks = [range(i, min(i + step, reps)) for i in range(0, reps, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for future in [pool.submit(fill, block) for block in blocks]:
                future.result()

    hits = sum(hit_flags)
    coverage = hits / reps
    return CoveragePoint(
        n=n, m=m, reps=reps, hits=hits, coverage=coverage,
        se=math.sqrt(coverage * (1.0 - coverage) / reps), seed=seed,
    )


def coverage_sweep(dist: AnalyticDistribution, m: int, n_grid: Sequence[int],
                   reps: int, alpha: float, seed: int, workers: int = 1) -> SweepResult:
    """One coverage experiment per grid point, sharing a single exact entropy."""
    grid = [int(n) for n in n_grid]
    if not grid:
        raise ValueError("empty sample-size grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sample-size grid must be strictly increasing")
    truth = gse_analytic(dist, m)
    points = tuple(
        coverage_experiment(dist, m, n, reps, alpha, derive_seed(seed, n),
                            workers=workers, true_value=truth)
        for n in grid
    )
    return SweepResult(distribution_config(dist), m, alpha, truth, points)


def default_grid(start: int = 10, stop: int = 1000, step: int = 10) -> list[int]:
    """Sample sizes 10, 20, ..., 1000 unless overridden."""
    return list(range(start, stop + 1, step))


# ---------------------------------------------------------------------------
# artifacts: CSV (the contract of record) and an optional SVG plot
# ---------------------------------------------------------------------------

COVERAGE_CSV_HEADER = "n,m,reps,coverage,se,seed"


def coverage_csv(points: Iterable[CoveragePoint]) -> str:
    out = StringIO()
    out.write(COVERAGE_CSV_HEADER + "\n")
    for pt in points:
        out.write(f"{pt.n},{pt.m},{pt.reps},{pt.coverage!r},{pt.se!r},{pt.seed}\n")
    return out.getvalue()


def write_coverage_csv(result: SweepResult, path: Union[str, Path]) -> None:
    Path(path).write_text(coverage_csv(result.points), encoding="utf-8")


def write_coverage_svg(result: SweepResult, path: Union[str, Path],
                       width: int = 640, height: int = 420) -> None:
    """Minimal standalone plot: coverage vs n with a dashed line at 1 - alpha."""
    pts = result.points
    margin = 50
    x0, x1 = pts[0].n, pts[-1].n
    span_x = max(x1 - x0, 1)
    lo = min(min(p.coverage for p in pts), 1.0 - result.alpha) - 0.02
    y0, y1 = max(0.0, min(lo, 0.9)), 1.0

    def sx(n: float) -> float:
        return margin + (n - x0) / span_x * (width - 2 * margin)

    def sy(c: float) -> float:
        return height - margin - (c - y0) / (y1 - y0) * (height - 2 * margin)

    level = 1.0 - result.alpha
    rows = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{sy(level):.2f}" x2="{width - margin}" y2="{sy(level):.2f}" '
        f'stroke="red" stroke-dasharray="6,4"/>',
        f'<text x="{width - margin}" y="{sy(level) - 5:.2f}" fill="red" font-size="12" '
        f'text-anchor="end">{level:g}</text>',
        f'<text x="{width // 2}" y="{height - 12}" font-size="13" text-anchor="middle">sample size n</text>',
        f'<text x="14" y="{height // 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {height // 2})">coverage</text>',
    ]
    for n in (x0, (x0 + x1) // 2, x1):
        rows.append(f'<text x="{sx(n):.2f}" y="{height - margin + 16}" font-size="11" '
                    f'text-anchor="middle">{n}</text>')
    for c in (y0, (y0 + y1) / 2, y1):
        rows.append(f'<text x="{margin - 6}" y="{sy(c) + 4:.2f}" font-size="11" '
                    f'text-anchor="end">{c:.2f}</text>')
    for pt in pts:
        rows.append(f'<circle cx="{sx(pt.n):.2f}" cy="{sy(pt.coverage):.2f}" r="3.5" '
                    f'fill="steelblue"/>')
    rows.append("</svg>")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def stable_from(result: SweepResult, band_se: float = 3.0) -> int | None:
    """Smallest grid n from which every later point sits within band_se
    binomial standard errors of the nominal level (None if never)."""
    level = 1.0 - result.alpha
    pts = result.points
    for i, start in enumerate(pts):
        if all(abs(p.coverage - level) <= band_se * math.sqrt(level * (1 - level) / p.reps)
               for p in pts[i:]):
            return start.n
    return None


def convergence_gap(result: SweepResult) -> tuple[float, float]:
    """(bottom-quartile, top-quartile) mean absolute distance from 1 - alpha.

    A soft diagnostic for "coverage settles as n grows": the top quartile of
    sample sizes is expected to sit closer to the nominal level.
    """
    level = 1.0 - result.alpha
    pts = result.points
    q = max(1, len(pts) // 4)
    bottom = sum(abs(p.coverage - level) for p in pts[:q]) / q
    top = sum(abs(p.coverage - level) for p in pts[-q:]) / q
    return bottom, top
