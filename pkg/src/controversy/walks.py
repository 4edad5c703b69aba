"""Random-walk machinery shared by the controversy measures.

Covers per-side authority (top-degree) selection, restart-walk stationary
distributions on the directed view, Monte Carlo walk sampling on the
undirected view, and exact expected hitting times.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError

WALK_STEP_CAP = 10**6


@dataclass(frozen=True)
class RestartWalkConfig:
    """Parameters of the power iteration for restart walks."""

    damping: float = 0.85
    tolerance: float = 1e-10
    max_iters: int = 10000

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must be in (0, 1)")


@dataclass(frozen=True)
class HighDegreeSets:
    """Top-k degree vertices of each side (the walk terminals)."""

    x_plus: tuple
    y_plus: tuple
    k: int

    @property
    def all(self):
        return frozenset(self.x_plus) | frozenset(self.y_plus)


def default_k(p) -> int:
    """5% of the smaller side, at least 1 (the same convention the
    dipole-moment seeds use)."""
    return max(1, math.ceil(0.05 * min(len(p.x), len(p.y))))


def top_degree(g, p, k) -> HighDegreeSets:
    """Pick the k highest-degree vertices per side, ties to the smaller index."""
    if k < 1:
        raise ValueError("k must be >= 1")
    deg = g.degrees

    def pick(side):
        ranked = sorted(side, key=lambda v: (-deg[v], v))
        return tuple(int(v) for v in ranked[: min(k, len(side))])

    return HighDegreeSets(x_plus=pick(p.x), y_plus=pick(p.y), k=k)


@dataclass(frozen=True)
class StationaryDistribution:
    probs: np.ndarray

    def mass(self, vertices) -> float:
        """Total stationary probability on the given vertex indices."""
        idx = np.fromiter((int(v) for v in vertices), dtype=np.int64)
        return float(self.probs[idx].sum()) if idx.size else 0.0


def _transition_matrix(g, dangling):
    """Row-stochastic transitions of the directed view, with the rows of
    dangling (and out-degree-0) vertices removed. Returns the transposed
    matrix (for fast left-multiplication) and the restart-row mask."""
    n = g.n_vertices
    dang = set(int(v) for v in dangling)
    rows, cols, vals = [], [], []
    restart_row = np.zeros(n, dtype=bool)
    for v in range(n):
        outs = g.out_neighbors(v)
        if v in dang or len(outs) == 0:
            restart_row[v] = True
            continue
        share = 1.0 / len(outs)
        for w in outs:
            rows.append(v)
            cols.append(int(w))
            vals.append(share)
    mat_t = sp.coo_matrix((vals, (cols, rows)), shape=(n, n)).tocsr()
    return mat_t, restart_row


def stationary_rwr(g, restart, dangling=(), cfg: RestartWalkConfig | None = None):
    """Stationary distribution of the restart walk on the directed view.

    Each step follows a uniformly random out-arc with probability
    ``damping`` and otherwise restarts uniformly inside ``restart``.
    Vertices in ``dangling`` (and any vertex without out-arcs) restart
    with probability 1. Power iteration stops when the L1 change drops
    below the configured tolerance.
    """
    cfg = cfg or RestartWalkConfig()
    n = g.n_vertices
    restart = sorted(set(int(v) for v in restart))
    if not restart:
        raise ValueError("restart set is empty")
    r = np.zeros(n)
    r[restart] = 1.0 / len(restart)
    mat_t, restart_row = _transition_matrix(g, dangling)
    pi = r.copy()
    d = cfg.damping
    for _ in range(cfg.max_iters):
        new = d * (mat_t @ pi)
        new += (d * float(pi[restart_row].sum()) + (1.0 - d)) * r
        residual = float(np.abs(new - pi).sum())
        pi = new
        if residual < cfg.tolerance:
            return StationaryDistribution(probs=pi)
    raise ConvergenceError(
        f"restart walk did not converge in {cfg.max_iters} iterations "
        f"(last residual {residual:.3e})",
        residual=residual,
    )


def walk_rng(seed, walk_index) -> random.Random:
    """Independent per-walk RNG stream derived from (seed, walk index).

    String seeding hashes through SHA-512 inside ``random.Random``, so
    the streams are identical regardless of how walks are scheduled
    across workers.
    """
    return random.Random(f"{seed}:{walk_index}")


def sample_walk(g, start, terminals, rng: random.Random) -> int:
    """Uniform-neighbor walk on the undirected view until a terminal is hit.

    Returns the terminal vertex; a start inside ``terminals`` returns
    immediately. Aborts after 10^6 steps (unreachable terminals).
    """
    if not terminals:
        raise ValueError("terminals set is empty")
    terminal_set = terminals if isinstance(terminals, (set, frozenset)) else set(terminals)
    v = int(start)
    if v in terminal_set:
        return v
    for _ in range(WALK_STEP_CAP):
        nbrs = g.neighbors(v)
        if len(nbrs) == 0:
            break
        v = int(nbrs[rng.randrange(len(nbrs))])
        if v in terminal_set:
            return v
    raise ConvergenceError(
        f"walk did not terminate within {WALK_STEP_CAP} steps; "
        "are the terminals reachable from the start vertex?"
    )


def expected_hitting_times(g, targets) -> np.ndarray:
    """Exact expected steps of the uniform undirected walk to reach any target.

    Solves the absorbing-chain system l_u = 1 + mean(l over neighbors)
    with l = 0 on targets. Vertices whose component contains no target
    get +inf.
    """
    targets = sorted(set(int(v) for v in targets))
    if not targets:
        raise ValueError("targets set is empty")
    n = g.n_vertices
    times = np.full(n, np.inf)
    times[targets] = 0.0
    target_set = set(targets)
    # vertices that can reach a target: reverse-BFS over the undirected view
    reach = set(targets)
    stack = list(targets)
    while stack:
        u = stack.pop()
        for v in g.neighbors(u):
            v = int(v)
            if v not in reach:
                reach.add(v)
                stack.append(v)
    free = sorted(reach - target_set)
    if not free:
        return times
    idx = {v: i for i, v in enumerate(free)}
    m = len(free)
    rows, cols, vals = [], [], []
    for v in free:
        nbrs = g.neighbors(v)
        rows.append(idx[v])
        cols.append(idx[v])
        vals.append(1.0)
        share = 1.0 / len(nbrs)
        for w in nbrs:
            w = int(w)
            if w not in target_set:
                rows.append(idx[v])
                cols.append(idx[w])
                vals.append(-share)
    system = sp.coo_matrix((vals, (rows, cols)), shape=(m, m)).tocsr()
    sol = spla.spsolve(system, np.ones(m))
    times[free] = sol
    return times
