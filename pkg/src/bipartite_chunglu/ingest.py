"""Loading real bipartite edge lists and turning their degrees into model weights."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import EmptyGraphError, ParseError
from .sampler import BipartiteGraph
from .weights import Side, WeightSequence

log = logging.getLogger(__name__)


@dataclass
class DatasetMeta:
    name: str
    n_left: int
    n_right: int
    n_edges: int
    source_path: str
    duplicate_lines: int = 0
    swapped: bool = False
    left_labels: list = field(default_factory=list, repr=False)
    right_labels: list = field(default_factory=list, repr=False)

    def to_dict(self, labels=False):
        d = asdict(self)
        if not labels:
            d.pop("left_labels")
            d.pop("right_labels")
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def load_bipartite_edgelist(path, swap_sides=False, name=None):
    """Parse ``left_label right_label`` lines into a :class:`BipartiteGraph`.

    Labels are arbitrary tokens, mapped to dense 0-based ids per side in
    order of first appearance. Extra columns (weights, timestamps) are
    ignored; ``#`` and ``%`` lines are comments. Duplicate edges collapse.
    """
    path = Path(path)
    left_ids, right_ids = {}, {}
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) < 2:
                raise ParseError(f"expected at least two columns, got {s!r}", lineno)
            a, b = (parts[1], parts[0]) if swap_sides else (parts[0], parts[1])
            ia = left_ids.setdefault(a, len(left_ids))
            ib = right_ids.setdefault(b, len(right_ids))
            rows.append((ia, ib))
    if not rows:
        raise EmptyGraphError(f"{path} contains no edges")
    edges = np.array(rows, dtype=np.int64)
    graph = BipartiteGraph(len(left_ids), len(right_ids), edges)
    meta = DatasetMeta(
        name=name or path.stem,
        n_left=graph.n_left,
        n_right=graph.n_right,
        n_edges=graph.n_edges,
        source_path=str(path),
        duplicate_lines=len(rows) - graph.n_edges,
        swapped=swap_sides,
        left_labels=list(left_ids),
        right_labels=list(right_ids),
    )
    return graph, meta


def write_label_map(meta: DatasetMeta, path):
    """Sidecar file: ``side id label`` per line, so projected ids can be traced back."""
    with Path(path).open("w") as fh:
        fh.write(f"# labels for {meta.source_path}\n")
        for i, lab in enumerate(meta.left_labels):
            fh.write(f"left {i} {lab}\n")
        for i, lab in enumerate(meta.right_labels):
            fh.write(f"right {i} {lab}\n")


def degrees_as_weights(G_b: BipartiteGraph):
    """Left and right bipartite degrees as integer weight sequences.

    Nodes of degree 0 are dropped (they can never receive an edge). Both
    sequences sum to the edge count, so no rescaling is needed.
    """
    if G_b.n_edges == 0:
        raise EmptyGraphError("cannot derive weights from a graph without edges")
    dl = G_b.left_degrees()
    dr = G_b.right_degrees()
    dropped_l = int(np.sum(dl == 0))
    dropped_r = int(np.sum(dr == 0))
    if dropped_l or dropped_r:
        log.info("dropping %d left and %d right isolated nodes", dropped_l, dropped_r)
    return (
        WeightSequence(dl[dl > 0], side=Side.LEFT),
        WeightSequence(dr[dr > 0], side=Side.RIGHT),
    )
