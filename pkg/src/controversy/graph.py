"""Conversation graphs: build, load and normalize interaction networks.

A conversation graph has one vertex per user active on a topic and one
edge per endorsement-style relation (repeated retweets, follow links,
shared content). Directed arc records are kept alongside an undirected
view so that both walk flavours can be computed from the same object.
"""
from __future__ import annotations

import json
import warnings
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from urllib.parse import urlparse

import numpy as np

from .errors import InputDataError


def normalize_tag(tag: str) -> str:
    """Lowercase a hashtag and strip one leading '#'."""
    tag = tag.strip().lower()
    return tag[1:] if tag.startswith("#") else tag


@dataclass(frozen=True)
class InteractionRecord:
    """One post event: who wrote it, whom it endorsed, and its metadata."""

    author: str
    endorsed: str | None
    hashtags: frozenset[str]
    urls: frozenset[str]
    timestamp: int

    @classmethod
    def make(cls, author, endorsed=None, hashtags=(), urls=(), timestamp=0):
        """Build a normalized record.

        User ids are lowercased, hashtags lose their leading '#', and a
        self-endorsement is dropped (treated as no endorsement at all).
        """
        author = str(author).strip().lower()
        if not author:
            raise InputDataError("record with empty author")
        if endorsed is not None:
            endorsed = str(endorsed).strip().lower()
            if not endorsed or endorsed == author:
                endorsed = None
        return cls(
            author=author,
            endorsed=endorsed,
            hashtags=frozenset(normalize_tag(t) for t in hashtags if normalize_tag(t)),
            urls=frozenset(str(u).strip() for u in urls if str(u).strip()),
            timestamp=int(timestamp),
        )


@dataclass(frozen=True)
class Topic:
    """A seed hashtag plus the related hashtags that define a discussion."""

    seed: str
    members: tuple[str, ...]

    @classmethod
    def make(cls, seed, members=()):
        seed = normalize_tag(seed)
        if not seed:
            raise InputDataError("topic seed is empty")
        ordered = [seed]
        for tag in members:
            tag = normalize_tag(tag)
            if tag and tag not in ordered:
                ordered.append(tag)
        return cls(seed=seed, members=tuple(ordered))

    def __contains__(self, tag):
        return normalize_tag(tag) in self.members


class ConversationGraph:
    """Immutable graph over dense vertex indices 0..n-1.

    ``ids[i]`` is the user id of vertex ``i``. ``arcs`` holds directed
    (src, dst, weight) records; for undirected graphs each edge is stored
    once with src < dst. The undirected view merges both arc directions
    and sums their weights. Instances never mutate after construction and
    are safe to share across threads.
    """

    def __init__(self, ids, arcs, directed):
        self._ids = tuple(str(i) for i in ids)
        if len(set(self._ids)) != len(self._ids):
            raise InputDataError("duplicate user ids in vertex list")
        self._index = {u: i for i, u in enumerate(self._ids)}
        self.directed = bool(directed)
        agg: Counter = Counter()
        n = len(self._ids)
        for src, dst, w in arcs:
            src, dst, w = int(src), int(dst), int(w)
            if src == dst:
                continue
            if not (0 <= src < n and 0 <= dst < n):
                raise InputDataError(f"arc ({src},{dst}) out of vertex range")
            if w <= 0:
                raise InputDataError(f"non-positive weight on arc ({src},{dst})")
            if not self.directed and src > dst:
                src, dst = dst, src
            agg[(src, dst)] += w
        self._arcs = tuple(sorted((u, v, w) for (u, v), w in agg.items()))

    # -- basic accessors ------------------------------------------------

    @property
    def ids(self):
        return self._ids

    @property
    def n_vertices(self):
        return len(self._ids)

    @property
    def arcs(self):
        return self._arcs

    def index_of(self, user_id):
        try:
            return self._index[str(user_id).strip().lower()]
        except KeyError:
            raise InputDataError(f"unknown user id: {user_id!r}") from None

    def __eq__(self, other):
        if not isinstance(other, ConversationGraph):
            return NotImplemented
        return (
            self._ids == other._ids
            and self.directed == other.directed
            and self._arcs == other._arcs
        )

    def __hash__(self):
        return hash((self._ids, self.directed, self._arcs))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return (
            f"ConversationGraph({self.n_vertices} vertices, "
            f"{self.n_edges} edges, {kind})"
        )

    # -- undirected view --------------------------------------------------

    @cached_property
    def undirected_edges(self):
        """Sorted (u, v, weight) with u < v; weight sums both arc directions."""
        if not self.directed:
            return self._arcs
        agg: Counter = Counter()
        for u, v, w in self._arcs:
            agg[(min(u, v), max(u, v))] += w
        return tuple(sorted((u, v, w) for (u, v), w in agg.items()))

    @property
    def n_edges(self):
        return len(self.undirected_edges)

    @cached_property
    def _adjacency(self):
        nbrs = [[] for _ in range(self.n_vertices)]
        for u, v, _ in self.undirected_edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return [np.array(sorted(a), dtype=np.int64) for a in nbrs]

    def neighbors(self, v):
        """Sorted undirected neighbor indices of v."""
        return self._adjacency[v]

    @cached_property
    def degrees(self):
        """Undirected degree (neighbor count) per vertex."""
        return np.array([len(a) for a in self._adjacency], dtype=np.int64)

    # -- directed view ----------------------------------------------------

    @cached_property
    def _out_adjacency(self):
        if not self.directed:
            return self._adjacency
        outs = [[] for _ in range(self.n_vertices)]
        for u, v, _ in self._arcs:
            outs[u].append(v)
        return [np.array(sorted(a), dtype=np.int64) for a in outs]

    def out_neighbors(self, v):
        """Out-neighbors in the directed view (both directions when the
        graph is undirected)."""
        return self._out_adjacency[v]


# -- construction helpers ----------------------------------------------


def graph_from_weighted_pairs(pairs, directed):
    """Build a graph from (src_id, dst_id, weight) triples.

    Vertex indices follow the lexicographic order of the user ids, so the
    same edge set always produces the same graph no matter the input order.
    """
    pairs = [(str(a).strip().lower(), str(b).strip().lower(), int(w)) for a, b, w in pairs]
    pairs = [(a, b, w) for a, b, w in pairs if a != b]
    ids = sorted({a for a, _, _ in pairs} | {b for _, b, _ in pairs})
    index = {u: i for i, u in enumerate(ids)}
    return ConversationGraph(
        ids, [(index[a], index[b], w) for a, b, w in pairs], directed
    )


def build_retweet_graph(records, topic, tau=2):
    """Endorsement graph from retweet events, thresholded per hashtag.

    A pair of users becomes an edge only if, for at least one single
    hashtag of the topic, they exchanged >= tau retweets (pooling both
    directions). Arc weights count the events per direction across all
    topic hashtags, one count per record. Users with no qualifying edge
    are omitted.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    members = set(topic.members)
    per_tag: dict[str, Counter] = {}
    directed_counts: Counter = Counter()
    for rec in records:
        if rec.endorsed is None:
            continue
        tags = rec.hashtags & members
        if not tags:
            continue
        pair = (min(rec.author, rec.endorsed), max(rec.author, rec.endorsed))
        for tag in tags:
            per_tag.setdefault(tag, Counter())[pair] += 1
        directed_counts[(rec.author, rec.endorsed)] += 1
    qualifying = set()
    for counts in per_tag.values():
        qualifying.update(p for p, c in counts.items() if c >= tau)
    pairs = [
        (src, dst, w)
        for (src, dst), w in directed_counts.items()
        if (min(src, dst), max(src, dst)) in qualifying
    ]
    return graph_from_weighted_pairs(pairs, directed=True)


def build_follow_graph(follow_edges, active_users):
    """Undirected follow graph restricted to users active on the topic.

    Edge weight is the number of directed follow relations between the
    pair (1 or 2 after deduplication)."""
    active = {str(u).strip().lower() for u in active_users}
    relations = set()
    for follower, followee in follow_edges:
        a = str(follower).strip().lower()
        b = str(followee).strip().lower()
        if a == b or a not in active or b not in active:
            continue
        relations.add((a, b))
    counts: Counter = Counter()
    for a, b in relations:
        counts[(min(a, b), max(a, b))] += 1
    return graph_from_weighted_pairs(
        [(a, b, w) for (a, b), w in counts.items()], directed=False
    )


def url_domain(url):
    """Host part of a URL with a leading 'www.' stripped; None if unparseable."""
    url = url.strip()
    if not url:
        return None
    if "//" not in url:
        url = "http://" + url
    host = urlparse(url).netloc.split("@")[-1].split(":")[0].lower()
    if not host or "." not in host:
        return None
    return host[4:] if host.startswith("www.") else host


CONTENT_MODES = ("shared-hashtag", "shared-url", "shared-domain")


def build_content_graph(records, topic, mode):
    """Connect users who posted at least one identical content item.

    ``mode`` selects the item kind: a hashtag outside the topic, an exact
    URL, or a URL domain. Edge weight counts distinct shared items.
    """
    if mode not in CONTENT_MODES:
        raise ValueError(f"mode must be one of {CONTENT_MODES}")
    members = set(topic.members)
    posted: dict[str, set[str]] = {}
    skipped = 0
    for rec in records:
        if mode == "shared-hashtag":
            items = rec.hashtags - members
        elif mode == "shared-url":
            items = rec.urls
        else:
            items = set()
            for u in rec.urls:
                dom = url_domain(u)
                if dom is None:
                    skipped += 1
                else:
                    items.add(dom)
        for item in items:
            posted.setdefault(item, set()).add(rec.author)
    if skipped:
        warnings.warn(f"skipped {skipped} unparseable urls", stacklevel=2)
    counts: Counter = Counter()
    for users in posted.values():
        ordered = sorted(users)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                counts[(a, b)] += 1
    return graph_from_weighted_pairs(
        [(a, b, w) for (a, b), w in counts.items()], directed=False
    )


def connected_components(g):
    """Vertex index arrays of the undirected components, by smallest member."""
    seen = np.zeros(g.n_vertices, dtype=bool)
    comps = []
    for root in range(g.n_vertices):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(np.array(sorted(comp), dtype=np.int64))
    return comps


def induced_subgraph(g, vertices):
    """Subgraph on the given vertex indices, reindexed in ascending order."""
    keep = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
    old_to_new = {int(v): i for i, v in enumerate(keep)}
    ids = [g.ids[v] for v in keep]
    arcs = [
        (old_to_new[u], old_to_new[v], w)
        for u, v, w in g.arcs
        if u in old_to_new and v in old_to_new
    ]
    return ConversationGraph(ids, arcs, g.directed)


def largest_component(g):
    """Induced subgraph on the largest connected component.

    Ties between equal-size components go to the one containing the
    smallest vertex index. Empty graphs pass through unchanged.
    """
    if g.n_vertices == 0:
        return g
    comps = connected_components(g)
    best = max(comps, key=lambda c: (len(c), -int(c.min())))
    if len(best) == g.n_vertices:
        return g
    return induced_subgraph(g, best)


# -- file formats -------------------------------------------------------


def read_records(path):
    """Read interaction records from a JSON-lines file.

    Expected object shape per line:
    ``{"author": str, "endorsed": str|null, "hashtags": [str],
    "urls": [str], "ts": int}``. Exact duplicate records are dropped.
    """
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                rec = InteractionRecord.make(
                    author=obj["author"],
                    endorsed=obj.get("endorsed"),
                    hashtags=obj.get("hashtags") or (),
                    urls=obj.get("urls") or (),
                    timestamp=obj.get("ts") or 0,
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise InputDataError(f"{path}:{lineno}: bad record ({exc})") from exc
            if rec not in seen:
                seen.add(rec)
                records.append(rec)
    return records


def read_edgelist(path, directed=False):
    """Read a TSV edge list: ``src<TAB>dst<TAB>weight`` (weight optional,
    default 1). Lines starting with '#' are ignored."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise InputDataError(f"{path}:{lineno}: expected 2 or 3 columns")
            src, dst = parts[0].strip(), parts[1].strip()
            if not src or not dst:
                raise InputDataError(f"{path}:{lineno}: empty vertex id")
            try:
                w = int(parts[2]) if len(parts) == 3 else 1
            except ValueError:
                raise InputDataError(f"{path}:{lineno}: bad weight {parts[2]!r}") from None
            pairs.append((src, dst, w))
    return graph_from_weighted_pairs(pairs, directed=directed)


def write_edgelist(g, path):
    """Write the canonical sorted edge list (ascending src id, then dst id).

    Round-trips bit-exactly through :func:`read_edgelist` for graphs of
    the matching directedness.
    """
    rows = []
    records = g.arcs if g.directed else g.undirected_edges
    for u, v, w in records:
        a, b = g.ids[u], g.ids[v]
        if not g.directed and a > b:
            a, b = b, a
        rows.append((a, b, w))
    rows.sort()
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, w in rows:
            fh.write(f"{a}\t{b}\t{w}\n")


def read_follow_edges(path):
    """Read follower<TAB>followee pairs; '#' comment lines ignored."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise InputDataError(f"{path}:{lineno}: expected follower<TAB>followee")
            edges.append((parts[0].strip(), parts[1].strip()))
    return edges
