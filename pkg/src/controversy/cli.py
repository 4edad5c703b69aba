"""Command-line driver: build graphs, partition them, score controversy.

One subcommand per pipeline stage plus end-to-end ``score``, the
synthetic ``simulate`` sweep, and the ``sentiment`` variance check.
Flags map 1:1 onto :class:`PipelineConfig`; a ``key=value`` config file
supplies defaults that explicit flags override.

Exit codes: 0 success, 2 input error, 3 numerical non-convergence,
4 degenerate structure (empty cut/boundary/terminations).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, fields, asdict
from datetime import datetime, timezone

from . import graph as graphmod
from .errors import (
    ControversyError,
    ConvergenceError,
    DegenerateStructureError,
    InputDataError,
)
from .graph import Topic
from .measures import (
    MEASURE_NAMES,
    ControversyReport,
    bcc,
    ec,
    force_layout,
    gmck,
    mblb,
    rwc_mc,
    rwc_rwr,
)
from .partition import import_partition, spectral_bisection, write_partition
from .sentiment import classify_by_variance, read_sentiment, sentiment_variance
from .synthetic import DEFAULT_P1_GRID, DEFAULT_P2_GRID, rwc_sweep, write_sweep_csv
from .topics import ExpansionConfig, build_profiles, expand_topic, read_profiles, write_profiles
from .users import user_score_table, write_user_scores
from .walks import RestartWalkConfig, default_k, top_degree

DEFAULT_SEED = 0
GRAPH_KINDS = ("retweet", "follow", "content")


@dataclass
class PipelineConfig:
    """Everything one ``score`` run needs; doubles as the report config."""

    # graph source: exactly one of edgelist / records
    edgelist: str | None = None
    directed: bool = False
    records: str | None = None
    kind: str = "retweet"
    follows: str | None = None
    content_mode: str = "shared-hashtag"
    tau: int = 2
    topic_seed: str | None = None
    topic_tags: str | None = None  # comma-separated explicit members
    profiles: str | None = None
    expand_k: int = 20
    expand_alpha: float = 0.3
    # stages
    largest_component: bool = True
    partition_mode: str = "spectral"
    partition_file: str | None = None
    # measure parameters
    measures: str = ",".join(MEASURE_NAMES)
    k: int | None = None
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iters: int = 10000
    n_walks: int = 10000
    n_samples: int = 10000
    layout_iterations: int = 500
    seed: int = DEFAULT_SEED
    topic_label: str | None = None
    # outputs
    out: str | None = None
    csv_out: str | None = None
    user_scores_out: str | None = None
    layout_out: str | None = None
    force: bool = False


@contextmanager
def _stage(name):
    """Tag errors with the pipeline stage they came from."""
    try:
        yield
    except ControversyError as exc:
        exc.args = (f"{name}: {exc.args[0]}",) + exc.args[1:]
        raise
    except ValueError as exc:
        raise InputDataError(f"{name}: {exc}") from exc


def _resolve_topic(cfg: PipelineConfig) -> Topic:
    if not cfg.topic_seed:
        raise InputDataError("a topic seed is required for record-based graphs")
    if cfg.topic_tags:
        return Topic.make(cfg.topic_seed, cfg.topic_tags.split(","))
    if cfg.profiles:
        return expand_topic(
            cfg.topic_seed,
            read_profiles(cfg.profiles),
            ExpansionConfig(alpha=cfg.expand_alpha, k=cfg.expand_k),
        )
    return Topic.make(cfg.topic_seed)


def _build_graph(cfg: PipelineConfig):
    if (cfg.edgelist is None) == (cfg.records is None):
        raise InputDataError("exactly one graph source (edgelist or records) required")
    if cfg.edgelist is not None:
        g = graphmod.read_edgelist(cfg.edgelist, directed=cfg.directed)
        label = cfg.topic_label or os.path.splitext(os.path.basename(cfg.edgelist))[0]
        return g, label
    records = graphmod.read_records(cfg.records)
    if cfg.kind not in GRAPH_KINDS:
        raise InputDataError(f"unknown graph kind {cfg.kind!r}")
    if cfg.kind == "follow":
        if not cfg.follows:
            raise InputDataError("follow graphs need --follows")
        g = graphmod.build_follow_graph(
            graphmod.read_follow_edges(cfg.follows),
            {r.author for r in records},
        )
        label = cfg.topic_label or "follow"
    else:
        topic = _resolve_topic(cfg)
        if cfg.kind == "retweet":
            g = graphmod.build_retweet_graph(records, topic, tau=cfg.tau)
        else:
            g = graphmod.build_content_graph(records, topic, mode=cfg.content_mode)
        label = cfg.topic_label or topic.seed
    if g.n_vertices == 0:
        raise InputDataError("empty graph: no qualifying edges in the records")
    return g, label


def _check_overwrite(cfg, paths):
    for path in paths:
        if path and os.path.exists(path) and not cfg.force:
            raise InputDataError(f"refusing to overwrite {path} (use --force)")


def run_pipeline(cfg: PipelineConfig) -> ControversyReport:
    """Execute build -> largest component -> partition -> measures and
    write the requested outputs. Nothing is written if any stage fails."""
    with _stage("output"):
        _check_overwrite(
            cfg, [cfg.out, cfg.csv_out, cfg.user_scores_out, cfg.layout_out]
        )
    with _stage("build"):
        g, label = _build_graph(cfg)
    with _stage("component"):
        if cfg.largest_component:
            g = graphmod.largest_component(g)
    with _stage("partition"):
        if cfg.partition_mode == "import":
            if not cfg.partition_file:
                raise InputDataError("partition import needs --partition-file")
            part = import_partition(g, cfg.partition_file)
        elif cfg.partition_mode == "spectral":
            part = spectral_bisection(g, seed=cfg.seed)
        else:
            raise InputDataError(f"unknown partition mode {cfg.partition_mode!r}")

    wanted = [m.strip() for m in cfg.measures.split(",") if m.strip()]
    unknown = [m for m in wanted if m not in MEASURE_NAMES]
    if unknown:
        raise InputDataError(f"unknown measures: {', '.join(unknown)}")
    k = cfg.k if cfg.k is not None else default_k(part)
    walk_cfg = RestartWalkConfig(
        damping=cfg.damping, tolerance=cfg.tolerance, max_iters=cfg.max_iters
    )
    report = ControversyReport(
        topic=label,
        n_vertices=g.n_vertices,
        n_edges=g.n_edges,
        config=asdict(cfg),
    )
    layout = None
    with _stage("measure"):
        for name in wanted:
            if name == "rwc_mc":
                value = rwc_mc(g, part, k=k, n_walks=cfg.n_walks, seed=cfg.seed)
                params = {"k": k, "n_walks": cfg.n_walks}
            elif name == "rwc_rwr":
                value = rwc_rwr(g, part, k=k, cfg=walk_cfg)
                params = {"k": k, "damping": cfg.damping, "tolerance": cfg.tolerance}
            elif name == "bcc":
                value = bcc(g, part, n_samples=cfg.n_samples, seed=cfg.seed)
                params = {"n_samples": cfg.n_samples}
            elif name == "ec":
                layout = force_layout(g, iterations=cfg.layout_iterations, seed=cfg.seed)
                value = ec(layout, part)
                params = {"layout_iterations": cfg.layout_iterations}
            elif name == "gmck":
                value = gmck(g, part)
                params = {}
            else:
                value = mblb(g, part)
                params = {"seed_fraction": 0.05, "tol": 1e-6, "max_iters": 1000}
            report.add(name, value, params, seed=cfg.seed)
    user_rows = None
    if cfg.user_scores_out:
        with _stage("user-scores"):
            hds = top_degree(g, part, k)
            user_rows = user_score_table(g, part, hds, walk_cfg)
    report.timestamp = datetime.now(timezone.utc).isoformat()

    with _stage("output"):
        if cfg.layout_out and layout is None:
            layout = force_layout(g, iterations=cfg.layout_iterations, seed=cfg.seed)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(report.to_json() + "\n")
        if cfg.csv_out:
            with open(cfg.csv_out, "w", encoding="utf-8") as fh:
                fh.write(report.csv_header() + "\n" + report.to_csv_row() + "\n")
        if user_rows is not None:
            write_user_scores(user_rows, cfg.user_scores_out)
        if cfg.layout_out:
            with open(cfg.layout_out, "w", encoding="utf-8") as fh:
                for i, uid in enumerate(g.ids):
                    fh.write(f"{uid}\t{layout[i, 0]!r}\t{layout[i, 1]!r}\n")
    return report


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _read_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputDataError(f"{path}:{lineno}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            raw = raw.strip()
            try:
                values[key] = json.loads(raw)
            except json.JSONDecodeError:
                values[key] = raw
    return values


def _merged(defaults_obj, ns) -> dict:
    """defaults < config file < explicit flags."""
    merged = asdict(defaults_obj) if defaults_obj is not None else {}
    explicit = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    if getattr(ns, "config", None):
        file_values = _read_config_file(ns.config)
        unknown = set(file_values) - set(merged) - set(explicit)
        if defaults_obj is not None and unknown:
            raise InputDataError(
                f"{ns.config}: unknown config keys: {', '.join(sorted(unknown))}"
            )
        merged.update(file_values)
    merged.update(explicit)
    return merged


def _add_bool(parser, name, help_text):
    dest = name.replace("-", "_")
    parser.add_argument(f"--{name}", dest=dest, action="store_true", help=help_text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="controversy",
        description="Quantify how controversial a topic is from its conversation graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def new_sub(name, help_text):
        p = sub.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="key=value defaults file (flags override)")
        return p

    def add_source_flags(p, with_topic=True):
        p.add_argument("--edgelist", help="TSV edge list (src, dst, optional weight)")
        _add_bool(p, "directed", "read the edge list as directed arcs")
        p.add_argument("--records", help="JSON-lines interaction records")
        p.add_argument("--kind", choices=GRAPH_KINDS, help="graph built from records")
        p.add_argument("--follows", help="TSV follower/followee pairs (kind=follow)")
        p.add_argument("--content-mode", dest="content_mode",
                       choices=("shared-hashtag", "shared-url", "shared-domain"))
        p.add_argument("--tau", type=int, help="per-hashtag retweet threshold")
        if with_topic:
            p.add_argument("--topic-seed", dest="topic_seed")
            p.add_argument("--topic-tags", dest="topic_tags",
                           help="comma-separated explicit topic members")
            p.add_argument("--profiles", help="JSON-lines hashtag profiles for expansion")
            p.add_argument("--expand-k", dest="expand_k", type=int)
            p.add_argument("--expand-alpha", dest="expand_alpha", type=float)

    p = new_sub("build-graph", "build a conversation graph and write its edge list")
    add_source_flags(p)
    p.add_argument("--out", required=True)
    _add_bool(p, "force", "overwrite existing outputs")
    _add_bool(p, "no-largest-component", "keep the full graph")

    p = new_sub("expand-topic", "expand a seed hashtag into a topic")
    p.add_argument("--seed-tag", dest="topic_seed", required=True)
    p.add_argument("--profiles", help="JSON-lines hashtag profiles")
    p.add_argument("--records", help="derive profiles from these records instead")
    p.add_argument("--write-profiles", dest="write_profiles_path",
                   help="also write the derived profiles here")
    p.add_argument("--expand-k", dest="expand_k", type=int, default=20)
    p.add_argument("--expand-alpha", dest="expand_alpha", type=float, default=0.3)
    p.add_argument("--out")
    _add_bool(p, "force", "overwrite existing outputs")

    p = new_sub("partition", "bisect a graph (spectral) or import labels")
    add_source_flags(p)
    p.add_argument("--partition-mode", dest="partition_mode", choices=("spectral", "import"))
    p.add_argument("--partition-file", dest="partition_file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    _add_bool(p, "force", "overwrite existing outputs")
    _add_bool(p, "no-largest-component", "keep the full graph")

    p = new_sub("score", "run the full pipeline and emit a report")
    add_source_flags(p)
    p.add_argument("--partition-mode", dest="partition_mode", choices=("spectral", "import"))
    p.add_argument("--partition-file", dest="partition_file")
    p.add_argument("--measures", help=f"comma list from: {','.join(MEASURE_NAMES)}")
    p.add_argument("--k", type=int, help="authorities per side (default: 5%% of smaller side)")
    p.add_argument("--damping", type=float)
    p.add_argument("--n-walks", dest="n_walks", type=int)
    p.add_argument("--n-samples", dest="n_samples", type=int)
    p.add_argument("--layout-iterations", dest="layout_iterations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--topic-label", dest="topic_label")
    p.add_argument("--out", help="report JSON (stdout when omitted)")
    p.add_argument("--csv-out", dest="csv_out")
    p.add_argument("--user-scores-out", dest="user_scores_out")
    p.add_argument("--layout-out", dest="layout_out")
    _add_bool(p, "force", "overwrite existing outputs")
    _add_bool(p, "no-largest-component", "keep the full graph")

    p = new_sub("user-scores", "per-user controversy scores")
    add_source_flags(p, with_topic=True)
    p.add_argument("--partition-mode", dest="partition_mode", choices=("spectral", "import"))
    p.add_argument("--partition-file", dest="partition_file")
    p.add_argument("--k", type=int)
    p.add_argument("--damping", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    _add_bool(p, "force", "overwrite existing outputs")
    _add_bool(p, "no-largest-component", "keep the full graph")

    p = new_sub("simulate", "planted two-community sweep over (p1, p2)")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--p1-grid", dest="p1_grid",
                   default=",".join(str(v) for v in DEFAULT_P1_GRID))
    p.add_argument("--p2-grid", dest="p2_grid",
                   default=",".join(str(v) for v in DEFAULT_P2_GRID))
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--k", type=int, default=None)
    _add_bool(p, "redetect", "re-partition spectrally instead of using ground truth")
    _add_bool(p, "no-largest-component", "score the full graph")
    p.add_argument("--out", required=True)
    _add_bool(p, "force", "overwrite existing outputs")

    p = new_sub("sentiment", "variance label for per-post sentiment scores")
    p.add_argument("--scores", required=True, help="CSV post_id,score")
    p.add_argument("--out")
    _add_bool(p, "force", "overwrite existing outputs")

    return parser


def _cfg_from_ns(ns) -> PipelineConfig:
    merged = _merged(PipelineConfig(), ns)
    no_lc = merged.pop("no_largest_component", False)
    largest = bool(merged.pop("largest_component", True)) and not no_lc
    known = {f.name for f in fields(PipelineConfig)}
    extra = set(merged) - known
    if extra:
        raise InputDataError(f"unknown options: {', '.join(sorted(extra))}")
    cfg = PipelineConfig(**merged)
    cfg.largest_component = largest
    return cfg


def _cmd_build_graph(ns):
    cfg = _cfg_from_ns(ns)
    with _stage("output"):
        _check_overwrite(cfg, [cfg.out])
    with _stage("build"):
        g, _ = _build_graph(cfg)
    with _stage("component"):
        if cfg.largest_component:
            g = graphmod.largest_component(g)
    with _stage("output"):
        graphmod.write_edgelist(g, cfg.out)
    return 0


def _cmd_expand_topic(ns):
    merged = _merged(None, ns)
    force = merged.get("force", False)
    out = merged.get("out")
    with _stage("output"):
        for path in (out, merged.get("write_profiles_path")):
            if path and os.path.exists(path) and not force:
                raise InputDataError(f"refusing to overwrite {path} (use --force)")
    with _stage("expand"):
        if merged.get("profiles"):
            profiles = read_profiles(merged["profiles"])
        elif merged.get("records"):
            profiles = build_profiles(graphmod.read_records(merged["records"]))
        else:
            raise InputDataError("need --profiles or --records")
        topic = expand_topic(
            merged["topic_seed"],
            profiles,
            ExpansionConfig(alpha=merged.get("expand_alpha", 0.3),
                            k=merged.get("expand_k", 20)),
        )
    payload = json.dumps({"seed": topic.seed, "members": list(topic.members)}, indent=2)
    with _stage("output"):
        if merged.get("write_profiles_path"):
            write_profiles(profiles, merged["write_profiles_path"])
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)
    return 0


def _cmd_partition(ns):
    cfg = _cfg_from_ns(ns)
    with _stage("output"):
        _check_overwrite(cfg, [cfg.out])
    with _stage("build"):
        g, _ = _build_graph(cfg)
    with _stage("component"):
        if cfg.largest_component:
            g = graphmod.largest_component(g)
    with _stage("partition"):
        if cfg.partition_mode == "import":
            part = import_partition(g, cfg.partition_file)
        else:
            part = spectral_bisection(g, seed=cfg.seed)
    with _stage("output"):
        write_partition(g, part, cfg.out)
    return 0


def _cmd_score(ns):
    cfg = _cfg_from_ns(ns)
    report = run_pipeline(cfg)
    if not cfg.out:
        print(report.to_json())
    return 0


def _cmd_user_scores(ns):
    cfg = _cfg_from_ns(ns)
    cfg.user_scores_out = cfg.user_scores_out or cfg.out
    cfg.out = None
    cfg.measures = ""  # user scores only
    run_pipeline(cfg)
    return 0


def _cmd_simulate(ns):
    merged = _merged(None, ns)
    out = merged["out"]
    if os.path.exists(out) and not merged.get("force", False):
        raise InputDataError(f"output: refusing to overwrite {out} (use --force)")
    p1_values = [float(v) for v in str(merged["p1_grid"]).split(",") if v]
    p2_values = [float(v) for v in str(merged["p2_grid"]).split(",") if v]
    with _stage("simulate"):
        rows = rwc_sweep(
            n=merged["n"],
            p1_values=p1_values,
            p2_values=p2_values,
            runs=merged["runs"],
            base_seed=merged["seed"],
            k=merged.get("k"),
            use_largest_component=not merged.get("no_largest_component", False),
            redetect=merged.get("redetect", False),
        )
    with _stage("output"):
        write_sweep_csv(rows, out)
    return 0


def _cmd_sentiment(ns):
    merged = _merged(None, ns)
    with _stage("sentiment"):
        records = read_sentiment(merged["scores"])
        variance = sentiment_variance(records)
        label = classify_by_variance(variance)
    payload = json.dumps(
        {"n_posts": len(records), "variance": variance, "label": label}, indent=2
    )
    out = merged.get("out")
    with _stage("output"):
        if out:
            if os.path.exists(out) and not merged.get("force", False):
                raise InputDataError(f"refusing to overwrite {out} (use --force)")
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)
    return 0


_COMMANDS = {
    "build-graph": _cmd_build_graph,
    "expand-topic": _cmd_expand_topic,
    "partition": _cmd_partition,
    "score": _cmd_score,
    "user-scores": _cmd_user_scores,
    "simulate": _cmd_simulate,
    "sentiment": _cmd_sentiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return _COMMANDS[ns.command](ns)
    except InputDataError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 3
    except DegenerateStructureError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
