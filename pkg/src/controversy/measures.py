"""Graph-level controversy scores.

Five measures over a partitioned conversation graph: two random-walk
scores (Monte Carlo and restart-walk variants), a betweenness-divergence
score, an embedding-separation score, a boundary-connectivity score, and
a label-propagation dipole score.
"""
from __future__ import annotations

import json
import math
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateStructureError
from .partition import Partition, cut_edges
from .walks import (
    RestartWalkConfig,
    default_k,
    sample_walk,
    stationary_rwr,
    top_degree,
    walk_rng,
)

DENSITY_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# Random Walk Controversy, Monte Carlo estimator
# ---------------------------------------------------------------------------


def rwc_mc(g, p: Partition, k=None, n_walks=10000, seed=0) -> float:
    """Monte Carlo random-walk controversy.

    Each walk picks a side with probability 0.5, starts uniformly inside
    it, and stops at the first top-degree vertex of either side. With
    P[A|B] = Pr[started in A | ended on B's terminals], the score is
    P[X|X]*P[Y|Y] - P[Y|X]*P[X|Y].
    """
    if n_walks < 1:
        raise ValueError("n_walks must be >= 1")
    k = default_k(p) if k is None else k
    hds = top_degree(g, p, k)
    terminals = hds.all
    x_plus = frozenset(hds.x_plus)
    # sampling is keyed to the side containing vertex 0 so that relabeling
    # X/Y cannot change which walks get drawn
    side0_is_x = p.side_of(0) == "X"
    side0 = p.x if side0_is_x else p.y
    side1 = p.y if side0_is_x else p.x
    counts = np.zeros((2, 2), dtype=np.int64)  # [start side0?][end side0-terminals?]
    for i in range(n_walks):
        rng = walk_rng(seed, i)
        from_side0 = rng.random() < 0.5
        pool = side0 if from_side0 else side1
        start = int(pool[rng.randrange(len(pool))])
        end = sample_walk(g, start, terminals, rng)
        end_side0 = (end in x_plus) == side0_is_x
        counts[0 if from_side0 else 1][0 if end_side0 else 1] += 1
    if side0_is_x:
        c_xx, c_xy, c_yx, c_yy = counts[0, 0], counts[0, 1], counts[1, 0], counts[1, 1]
    else:
        c_yy, c_yx, c_xy, c_xx = counts[0, 0], counts[0, 1], counts[1, 0], counts[1, 1]
    end_x = c_xx + c_yx
    end_y = c_yy + c_xy
    if end_x == 0 or end_y == 0:
        raise DegenerateStructureError(
            "insufficient terminations: no walk ended on one side; "
            "try increasing n_walks"
        )
    p_xx = c_xx / end_x
    p_yx = c_yx / end_x
    p_xy = c_xy / end_y
    p_yy = c_yy / end_y
    return float(p_xx * p_yy - p_yx * p_xy)


# ---------------------------------------------------------------------------
# Random Walk Controversy, restart-walk variant
# ---------------------------------------------------------------------------


def rwr_conditionals(g, p: Partition, k=None, cfg: RestartWalkConfig | None = None):
    """The four start-side probabilities conditioned on where the restart
    walk sits at steady state (own/other side's top-degree vertices).

    Returns a dict with keys "xx", "xy", "yx", "yy" where e.g. "xy" is
    Pr[start = X | end = Y+]. Complements hold by construction:
    xx + yx = 1 and xy + yy = 1.
    """
    cfg = cfg or RestartWalkConfig()
    k = default_k(p) if k is None else k
    hds = top_degree(g, p, k)
    dangling = hds.all
    p1 = stationary_rwr(g, p.x, dangling, cfg)
    p2 = stationary_rwr(g, p.y, dangling, cfg)
    w_x = len(p.x) / g.n_vertices
    w_y = len(p.y) / g.n_vertices
    m1x, m2x = p1.mass(hds.x_plus), p2.mass(hds.x_plus)
    m1y, m2y = p1.mass(hds.y_plus), p2.mass(hds.y_plus)
    den_x = w_x * m1x + w_y * m2x
    den_y = w_x * m1y + w_y * m2y
    if den_x <= 0.0 or den_y <= 0.0:
        raise DegenerateStructureError(
            "no stationary mass on a high-degree set; cannot condition"
        )
    return {
        "xx": w_x * m1x / den_x,
        "yx": w_y * m2x / den_x,
        "xy": w_x * m1y / den_y,
        "yy": w_y * m2y / den_y,
    }


def rwc_rwr(g, p: Partition, k=None, cfg: RestartWalkConfig | None = None) -> float:
    """Restart-walk variant of the random-walk controversy score.

    Computes the stationary distributions restarting on X and on Y with
    the top-degree vertices made dangling, then combines the four
    conditional probabilities into P_xx*P_yy - P_xy*P_yx. Well-defined on
    disconnected graphs (two cross-free sides score exactly 1).
    """
    c = rwr_conditionals(g, p, k, cfg)
    return float(c["xx"] * c["yy"] - c["xy"] * c["yx"])


# ---------------------------------------------------------------------------
# Betweenness
# ---------------------------------------------------------------------------


def edge_betweenness(g):
    """Exact edge betweenness over ordered vertex pairs (both (s,t) and
    (t,s) count), via Brandes' accumulation on the unweighted undirected
    view. Returns {(u, v) with u < v: value}."""
    n = g.n_vertices
    bc = {(u, v): 0.0 for u, v, _ in g.undirected_edges}
    for s in range(n):
        # single-source shortest paths
        dist = np.full(n, -1, dtype=np.int64)
        sigma = np.zeros(n)
        preds = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1.0
        order = []
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.neighbors(u):
                v = int(v)
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        # dependency accumulation onto edges
        delta = np.zeros(n)
        for w in reversed(order):
            for u in preds[w]:
                contribution = sigma[u] / sigma[w] * (1.0 + delta[w])
                key = (u, w) if u < w else (w, u)
                bc[key] += contribution
                delta[u] += contribution
    return bc


def _scott_bandwidth(values):
    spread = values.std(ddof=1) if len(values) > 1 else 0.0
    h = spread * len(values) ** (-0.2)
    return h if h > 0 and np.isfinite(h) else 1e-3


def _kde_density(points, centers, bandwidth):
    """Gaussian KDE evaluated at ``points``, chunked to bound memory."""
    out = np.empty(len(points))
    norm = len(centers) * bandwidth * math.sqrt(2.0 * math.pi)
    step = max(1, (1 << 22) // max(1, len(centers)))
    for lo in range(0, len(points), step):
        z = (points[lo : lo + step, None] - centers[None, :]) / bandwidth
        out[lo : lo + step] = np.exp(-0.5 * z * z).sum(axis=1) / norm
    return out


def bcc(g, p: Partition, n_samples=10000, seed=0) -> float:
    """Betweenness-divergence controversy.

    Fits Gaussian KDEs (Scott's rule) to the betweenness values of cut
    and non-cut edges, estimates KL(cut || rest) by sampling n_samples
    points from the cut KDE, and maps through 1 - exp(-KL). Densities are
    floored at 1e-12; the result is clamped to [0, 1).
    """
    bc = edge_betweenness(g)
    cut = set(cut_edges(g, p))
    cut_vals = np.array([v for e, v in bc.items() if e in cut], dtype=float)
    rest_vals = np.array([v for e, v in bc.items() if e not in cut], dtype=float)
    if len(cut_vals) == 0 or len(rest_vals) == 0:
        raise DegenerateStructureError(
            "degenerate partition for BCC: need both cut and non-cut edges"
        )
    h_cut = _scott_bandwidth(cut_vals)
    h_rest = _scott_bandwidth(rest_vals)
    rng = np.random.default_rng(seed)
    points = rng.choice(cut_vals, size=n_samples, replace=True)
    points = points + h_cut * rng.standard_normal(n_samples)
    p_cut = np.maximum(_kde_density(points, cut_vals, h_cut), DENSITY_FLOOR)
    p_rest = np.maximum(_kde_density(points, rest_vals, h_rest), DENSITY_FLOOR)
    d_kl = float(np.mean(np.log(p_cut) - np.log(p_rest)))
    return float(min(max(1.0 - math.exp(-d_kl), 0.0), np.nextafter(1.0, 0.0)))


# ---------------------------------------------------------------------------
# Embedding
# ---------------------------------------------------------------------------


def force_layout(g, iterations=500, seed=0):
    """Two-dimensional spring-electrical layout (repulsion ~ 1/d,
    attraction ~ d^2/k along edges, annealed displacement cap).

    Deterministic given (graph, seed, iterations). Returns an (n, 2)
    coordinate array indexed by vertex.
    """
    n = g.n_vertices
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    if n <= 1 or iterations < 1:
        return pos
    k = math.sqrt(1.0 / n)
    edges = np.array([(u, v) for u, v, _ in g.undirected_edges], dtype=np.int64)
    t0 = 0.1
    for it in range(iterations):
        temp = t0 * (1.0 - it / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta**2).sum(axis=-1))
        np.fill_diagonal(dist, np.inf)
        dist = np.maximum(dist, 1e-9)
        disp = (k * k / dist**2)[:, :, None] * delta
        disp = disp.sum(axis=1)
        if len(edges):
            evec = pos[edges[:, 0]] - pos[edges[:, 1]]
            edist = np.maximum(np.sqrt((evec**2).sum(axis=-1)), 1e-9)
            pull = (edist / k)[:, None] * evec
            np.subtract.at(disp, edges[:, 0], pull)
            np.add.at(disp, edges[:, 1], pull)
        length = np.maximum(np.sqrt((disp**2).sum(axis=-1)), 1e-12)
        pos = pos + disp / length[:, None] * np.minimum(length, temp)[:, None]
    return pos


def ec(embedding, p: Partition) -> float:
    """Embedding controversy: 1 - (d_X + d_Y) / (2 * d_XY) where d_* are
    mean pairwise Euclidean distances within and across the sides.
    Singleton sides contribute a within-distance of 0."""
    pos = np.asarray(embedding, dtype=float)
    xs, ys = pos[p.x], pos[p.y]

    def mean_within(pts):
        m = len(pts)
        if m < 2:
            return 0.0
        diff = pts[:, None, :] - pts[None, :, :]
        d = np.sqrt((diff**2).sum(axis=-1))
        iu = np.triu_indices(m, 1)
        return float(d[iu].mean())

    # orient the cross matrix by the side holding vertex 0 so the float
    # summation order (hence the result, bit for bit) survives relabeling
    first, second = (xs, ys) if p.side_of(0) == "X" else (ys, xs)
    cross = np.sqrt(((first[:, None, :] - second[None, :, :]) ** 2).sum(axis=-1))
    d_xy = float(cross.mean())
    if d_xy == 0.0:
        raise DegenerateStructureError("coincident partitions: zero cross distance")
    return float(1.0 - (mean_within(xs) + mean_within(ys)) / (2.0 * d_xy))


# ---------------------------------------------------------------------------
# Boundary connectivity
# ---------------------------------------------------------------------------


def gmck(g, p: Partition) -> float:
    """Boundary-connectivity controversy.

    A vertex is on the boundary if it touches the other side and also
    touches a same-side vertex that has no cross-side edge. The score
    averages d_i/(d_b + d_i) over the boundary (edges into non-boundary
    vs boundary vertices) and subtracts 0.5.
    """
    n = g.n_vertices
    sides = p.sides
    has_cross = np.zeros(n, dtype=bool)
    for u in range(n):
        nbrs = g.neighbors(u)
        if len(nbrs) and (sides[nbrs] != sides[u]).any():
            has_cross[u] = True
    boundary = np.zeros(n, dtype=bool)
    for u in range(n):
        if not has_cross[u]:
            continue
        nbrs = g.neighbors(u)
        same = nbrs[sides[nbrs] == sides[u]]
        if len(same) and (~has_cross[same]).any():
            boundary[u] = True
    members = np.flatnonzero(boundary)
    if len(members) == 0:
        raise DegenerateStructureError(
            "no boundary (sides disconnected or fully mixed)"
        )
    total = 0.0
    for u in members:
        nbrs = g.neighbors(u)
        d_b = int(boundary[nbrs].sum())
        d_i = len(nbrs) - d_b
        total += d_i / (d_b + d_i)
    return float(total / len(members) - 0.5)


# ---------------------------------------------------------------------------
# Dipole moment
# ---------------------------------------------------------------------------


def propagate_polarity(g, plus_seeds, minus_seeds, tol=1e-6, max_iters=1000):
    """Clamp +1/-1 on the seed vertices and sweep every other vertex to
    the mean of its neighbors until the max change drops below tol."""
    n = g.n_vertices
    values = np.zeros(n)
    values[list(plus_seeds)] = 1.0
    values[list(minus_seeds)] = -1.0
    clamped = np.zeros(n, dtype=bool)
    clamped[list(plus_seeds)] = clamped[list(minus_seeds)] = True
    free = np.flatnonzero(~clamped)
    rows, cols, vals = [], [], []
    for u, v, _ in g.undirected_edges:
        rows += [u, v]
        cols += [v, u]
        vals += [1.0, 1.0]
    adj = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    deg = g.degrees
    inv_deg = np.zeros(n)
    nz = deg > 0
    inv_deg[nz] = 1.0 / deg[nz]
    for _ in range(max_iters):
        means = (adj @ values) * inv_deg
        change = np.abs(means[free] - values[free]).max() if len(free) else 0.0
        values[free] = means[free]
        if change < tol:
            break
    return values


def dipole_of_polarities(values, n) -> float:
    """(1 - |n+ - n-|/n) * |gc+ - gc-|/2; zero-polarity vertices count to
    neither group."""
    n_pos = int((values > 0).sum())
    n_neg = int((values < 0).sum())
    if n_pos == 0 or n_neg == 0:
        warnings.warn("one-sided propagation: no vertices on one polarity", stacklevel=3)
        return 0.0
    delta_a = abs(n_pos - n_neg) / n
    gc_pos = float(values[values > 0].mean())
    gc_neg = float(values[values < 0].mean())
    d = abs(gc_pos - gc_neg) / 2.0
    return float((1.0 - delta_a) * d)


def mblb(g, p: Partition, seed_fraction=0.05, tol=1e-6, max_iters=1000) -> float:
    """Label-propagation dipole moment.

    Clamps +1/-1 on the top seed_fraction highest-degree vertices of each
    side, propagates neighbor means synchronously to the rest, then
    combines the polarity-group imbalance and the gap between the group
    means: (1 - |n+ - n-|/|V|) * |gc+ - gc-|/2.
    """
    deg = g.degrees

    def seeds_of(side):
        count = max(1, math.ceil(seed_fraction * len(side)))
        ranked = sorted(side, key=lambda v: (-deg[v], v))
        return [int(v) for v in ranked[:count]]

    values = propagate_polarity(g, seeds_of(p.x), seeds_of(p.y), tol, max_iters)
    return dipole_of_polarities(values, g.n_vertices)


# ---------------------------------------------------------------------------
# Report container
# ---------------------------------------------------------------------------

MEASURE_NAMES = ("rwc_mc", "rwc_rwr", "bcc", "ec", "gmck", "mblb")


@dataclass
class MeasureEntry:
    name: str
    value: float
    parameters: dict
    seed: int | None = None


@dataclass
class ControversyReport:
    """All scores computed for one topic, with enough parameters to rerun."""

    topic: str
    n_vertices: int
    n_edges: int
    entries: list[MeasureEntry] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    timestamp: str = ""

    def add(self, name, value, parameters, seed=None):
        self.entries.append(
            MeasureEntry(name=name, value=float(value), parameters=dict(parameters), seed=seed)
        )

    def value_of(self, name):
        for entry in self.entries:
            if entry.name == name:
                return entry.value
        raise KeyError(name)

    def to_dict(self):
        return {
            "schema_version": 1,
            "topic": self.topic,
            "graph": {"vertices": self.n_vertices, "edges": self.n_edges},
            "config": self.config,
            "measures": [
                {
                    "name": e.name,
                    "value": e.value,
                    "parameters": e.parameters,
                    "seed": e.seed,
                }
                for e in self.entries
            ],
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def csv_header(self) -> str:
        return ",".join(["topic", "n_vertices", "n_edges", *MEASURE_NAMES])

    def to_csv_row(self) -> str:
        by_name = {e.name: e.value for e in self.entries}
        cells = [self.topic, str(self.n_vertices), str(self.n_edges)]
        for name in MEASURE_NAMES:
            cells.append(repr(by_name[name]) if name in by_name else "")
        return ",".join(cells)
