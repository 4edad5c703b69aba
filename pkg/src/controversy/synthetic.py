"""Planted two-community random graphs and score sweeps over (p1, p2)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputDataError
from .graph import ConversationGraph, largest_component
from .partition import Partition, spectral_bisection
from .measures import rwc_rwr
from .walks import RestartWalkConfig

DEFAULT_P1_GRID = tuple(round(0.002 * i, 3) for i in range(1, 11))
DEFAULT_P2_GRID = (0.0005, 0.001, 0.002, 0.004)


@dataclass(frozen=True)
class PlantedConfig:
    """Two equal Erdos-Renyi blocks with intra probability p1 and cross
    probability p2."""

    n: int
    p1: float
    p2: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 4:
            raise InputDataError("n must be >= 4")
        if self.n % 2:
            raise InputDataError("n must be even")
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 1.0:
                raise InputDataError(f"{name} must be in [0, 1]")


def planted_two_community(cfg: PlantedConfig):
    """Sample the planted graph; returns (graph, ground-truth partition).

    Vertices 0..n/2-1 form side X, the rest side Y. The random draws
    happen in a fixed order (block X pairs, block Y pairs, cross pairs)
    so the edge set is a pure function of the seed.
    """
    rng = np.random.default_rng(cfg.seed)
    half = cfg.n // 2
    arcs = []
    iu, ju = np.triu_indices(half, k=1)
    for offset, prob in ((0, cfg.p1), (half, cfg.p1)):
        mask = rng.random(len(iu)) < prob
        arcs.extend(
            (int(a) + offset, int(b) + offset, 1)
            for a, b in zip(iu[mask], ju[mask])
        )
    cross = rng.random((half, half)) < cfg.p2
    xs, ys = np.nonzero(cross)
    arcs.extend((int(a), int(b) + half, 1) for a, b in zip(xs, ys))
    ids = [str(i) for i in range(cfg.n)]
    graph = ConversationGraph(ids, arcs, directed=False)
    sides = np.zeros(cfg.n, dtype=np.int8)
    sides[half:] = 1
    return graph, Partition(sides)


def _cell_seed(base_seed, i1, i2, run) -> int:
    return int(np.random.SeedSequence([int(base_seed), i1, i2, run]).generate_state(1)[0])


def ground_truth_partition_for(sub, n):
    """Planted-block partition restricted to a subgraph (matched by vertex
    id); None when the subgraph lies entirely inside one block."""
    half = n // 2
    labels = np.array([0 if int(uid) < half else 1 for uid in sub.ids], dtype=np.int8)
    if not (labels == 0).any() or not (labels == 1).any():
        return None
    return Partition(labels)


@dataclass(frozen=True)
class SweepRow:
    p1: float
    p2: float
    mean_rwc: float
    std_rwc: float
    runs: int

    @property
    def valid(self):
        return self.runs > 0


def rwc_sweep(
    n=2000,
    p1_values=DEFAULT_P1_GRID,
    p2_values=DEFAULT_P2_GRID,
    runs=10,
    base_seed=0,
    k=None,
    cfg: RestartWalkConfig | None = None,
    use_largest_component=True,
    redetect=False,
):
    """Average restart-walk controversy per (p1, p2) grid cell.

    Scoring uses the planted ground-truth partition unless ``redetect``
    asks for spectral re-partitioning. The largest-component restriction
    is skipped for a run whenever it would leave one side empty (e.g.
    p2 = 0), matching the convention that cross-free sides score 1.
    Cells whose every run degenerates are marked invalid (runs=0).
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    rows = []
    for i1, p1 in enumerate(p1_values):
        for i2, p2 in enumerate(p2_values):
            scores = []
            for run in range(runs):
                seed = _cell_seed(base_seed, i1, i2, run)
                graph, truth = planted_two_community(
                    PlantedConfig(n=n, p1=p1, p2=p2, seed=seed)
                )
                if graph.n_edges == 0:
                    continue
                target, part = graph, truth
                if use_largest_component:
                    sub = largest_component(graph)
                    sub_truth = ground_truth_partition_for(sub, n)
                    if sub_truth is not None:
                        target, part = sub, sub_truth
                if redetect:
                    part = spectral_bisection(target, seed=seed)
                scores.append(rwc_rwr(target, part, k=k, cfg=cfg))
            if scores:
                arr = np.array(scores)
                rows.append(
                    SweepRow(
                        p1=p1,
                        p2=p2,
                        mean_rwc=float(arr.mean()),
                        std_rwc=float(arr.std(ddof=0)),
                        runs=len(scores),
                    )
                )
            else:
                rows.append(
                    SweepRow(p1=p1, p2=p2, mean_rwc=math.nan, std_rwc=math.nan, runs=0)
                )
    return rows


def write_sweep_csv(rows, path):
    """CSV table: p1,p2,mean_rwc,std_rwc,runs (invalid rows have runs=0)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("p1,p2,mean_rwc,std_rwc,runs\n")
        for r in rows:
            mean = "nan" if math.isnan(r.mean_rwc) else repr(r.mean_rwc)
            std = "nan" if math.isnan(r.std_rwc) else repr(r.std_rwc)
            fh.write(f"{r.p1!r},{r.p2!r},{mean},{std},{r.runs}\n")
