"""Dataset ingestion and report emission.

Edge-list text format: one edge per line, ``u v [w]``, whitespace
separated, ``#`` starts a comment, missing weight defaults to 1.0.
Label files hold ``node label`` per line. Node tokens that look like
integers are parsed as integers so that edge and label files agree on
identifiers regardless of which convention a dataset uses.

All emitted numbers use shortest round-trip decimal (`repr`), all writes
go through a temp file + rename, and every report directory carries a
manifest echoing the full configuration.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .errors import ParseError, UnknownLabelNode, UnlabeledNode
from .graph import Partition, WeightedGraph, build_graph

_INT_RE = re.compile(r"^[+-]?\d+$")

# diameters are a dataset-card nicety, not worth an O(n^2) stall on big inputs
_DIAMETER_NODE_CAP = 3000


def _node_token(tok: str):
    return int(tok) if _INT_RE.match(tok) else tok


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield line_no, line.split()


def read_edge_list(path) -> list[tuple]:
    """Parse ``u v [w]`` lines into (node, node, weight) triples."""
    triples = []
    for line_no, parts in _data_lines(path):
        if len(parts) not in (2, 3):
            raise ParseError(path, line_no, f"expected 'u v [w]', got {len(parts)} fields")
        u, v = _node_token(parts[0]), _node_token(parts[1])
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(path, line_no, f"bad weight {parts[2]!r}") from None
        else:
            w = 1.0
        triples.append((u, v, w))
    return triples


def read_labels(path) -> dict:
    labels = {}
    for line_no, parts in _data_lines(path):
        if len(parts) != 2:
            raise ParseError(path, line_no, f"expected 'node label', got {len(parts)} fields")
        labels[_node_token(parts[0])] = _node_token(parts[1])
    return labels


def load_dataset(edge_path, label_path=None) -> tuple[WeightedGraph, Partition | None]:
    """Graph (+ ground truth when a label file is given) from text files.

    Every graph node must be labeled (UnlabeledNode otherwise) and every
    labeled node must exist in the graph (UnknownLabelNode).
    """
    g = build_graph(read_edge_list(edge_path))
    truth = None
    if label_path is not None:
        labels = read_labels(label_path)
        node_set = set(g.nodes)
        for node in labels:
            if node not in node_set:
                raise UnknownLabelNode(repr(node))
        missing = [u for u in g.nodes if u not in labels]
        if missing:
            raise UnlabeledNode(repr(missing[0]))
        truth = Partition(g.nodes, [labels[u] for u in g.nodes])
    return g, truth


def dataset_stats(g: WeightedGraph, truth: Partition | None = None) -> dict:
    """Table-style dataset card: counts, average degree, density, diameter.

    The diameter is the unweighted (hop) diameter, skipped above
    _DIAMETER_NODE_CAP nodes and reported as inf for disconnected graphs.
    """
    n, m = g.n, g.m
    stats = {
        "nodes": n,
        "edges": m,
        "classes": truth.k if truth is not None else None,
        "avg_degree": round(2.0 * m / n, 2) if n else 0.0,
        "density": round(m / (n * (n - 1) / 2.0), 3) if n > 1 else 0.0,
    }
    if n and n <= _DIAMETER_NODE_CAP:
        hops = kernels.apsp(g.indptr, g.nbr, np.ones(2 * m), n)
        stats["diameter"] = float(hops.max())
    else:
        stats["diameter"] = None
    return stats


# ---------------------------------------------------------------------------
# writers


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_edge_list(path, g: WeightedGraph) -> None:
    rows = (
        f"{g.nodes[u]} {g.nodes[v]} {_fmt(w)}"
        for u, v, w in zip(g.edge_u, g.edge_v, g.weights)
    )
    atomic_write_text(path, "\n".join(rows) + "\n")


def write_partition(path, part: Partition) -> None:
    rows = (f"{u} {part.labels[i]}" for i, u in enumerate(part.nodes))
    atomic_write_text(path, "\n".join(rows) + "\n")


def write_sweep_csv(path, report) -> None:
    write_csv(
        path,
        ["cutoff", "removed", "components", "Q", "ARI", "NMI"],
        (
            (r.cutoff, r.removed_edges, r.components, r.q, r.ari, r.nmi)
            for r in report.records
        ),
    )


def write_curvature_csv(path, g: WeightedGraph, cmap) -> None:
    write_csv(
        path,
        ["edge_u", "edge_v", "weight", "rho", "kappa"],
        (
            (g.nodes[u], g.nodes[v], w, rho, kappa)
            for u, v, w, rho, kappa in zip(
                g.edge_u, g.edge_v, g.weights, cmap.rho, cmap.kappa
            )
        ),
    )


def write_histogram_csv(path, values, bins: int = 20) -> None:
    counts, edges = np.histogram(np.asarray(values), bins=bins)
    write_csv(
        path,
        ["bin_lo", "bin_hi", "count"],
        ((edges[i], edges[i + 1], int(counts[i])) for i in range(len(counts))),
    )


def write_trajectory_csv(path, g: WeightedGraph, traj) -> None:
    def rows():
        for rec in traj.records:
            for e in range(g.m):
                yield (
                    rec.step,
                    g.nodes[g.edge_u[e]],
                    g.nodes[g.edge_v[e]],
                    rec.weights[e],
                    rec.kappa[e],
                    rec.rho[e],
                )

    write_csv(path, ["step", "edge_u", "edge_v", "weight", "kappa", "rho"], rows())


def write_badedge_csv(path, g: WeightedGraph, report) -> None:
    write_csv(
        path,
        ["edge_u", "edge_v", "first_step", "condition"],
        (
            (g.nodes[g.edge_u[e]], g.nodes[g.edge_v[e]], step, cond)
            for e, (step, cond) in sorted(report.first_trigger.items())
        ),
    )


def write_suite_csv(path, result) -> None:
    write_csv(
        path,
        ["suite", "param", "method", "metric", "mean", "stddev"],
        (
            (r["suite"], r["param"], r["method"], r["metric"], r["mean"], r["stddev"])
            for r in result.aggregate()
        ),
    )


def write_suite_raw_csv(path, result) -> None:
    write_csv(
        path,
        ["suite", "param", "method", "rep", "seed", "q", "ari", "nmi", "seconds"],
        (
            (r.suite, r.cell, r.method, r.rep, r.seed, r.q, r.ari, r.nmi, r.seconds)
            for r in result.rows
        ),
    )


def write_json(path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def make_manifest(command: str, config: dict, timings: dict | None = None) -> dict:
    return {
        "command": command,
        "config": config,
        "toolkit_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "timings_seconds": timings or {},
    }
