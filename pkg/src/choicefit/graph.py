"""Graphviz DOT rendering of recovered preferences.

Arrows point from the preferred alternative to the dominated one and only
the covering pairs of the strict part are drawn.  Indifferent alternatives
share a cluster; arrows leave from and enter the first member of a cluster.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .relations import (
    BinaryRelation,
    index_of,
    is_preorder,
    is_strict_partial_order,
    label,
    parts,
    transitive_closure,
    transitive_reduction,
)


def _classes(indiff: np.ndarray) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for x in range(indiff.shape[0]):
        if x in seen:
            continue
        cls = tuple(int(y) for y in np.nonzero(indiff[x])[0])
        seen.update(cls)
        out.append(cls)
    return out


def to_dot(relation: BinaryRelation, name: str = "preference", annotations: Mapping[str, str] | None = None) -> str:
    """DOT digraph for a preorder or a strict partial order.

    ``annotations`` become graph attributes (for instance a subject id or
    score) and are written in sorted key order.
    """
    if is_preorder(relation):
        strict, indiff, _ = (p.matrix for p in parts(relation))
        indiff = indiff | np.eye(relation.n, dtype=bool)
    elif is_strict_partial_order(relation):
        strict = relation.matrix
        indiff = np.eye(relation.n, dtype=bool)
    else:
        raise ValueError("graph input must be a preorder or a strict partial order")
    classes = _classes(indiff)
    reps = [c[0] for c in classes]
    quotient = strict[np.ix_(reps, reps)]
    cover = transitive_reduction(BinaryRelation(quotient)).matrix

    lines = [f'digraph "{name}" {{']
    for key in sorted(annotations or {}):
        value = str(annotations[key]).replace('"', r"\"")
        lines.append(f'  {key}="{value}";')
    lines.append("  node [shape=circle];")
    k = 0
    for cls in classes:
        if len(cls) == 1:
            lines.append(f"  {label(cls[0])};")
        else:
            members = "; ".join(label(x) for x in cls)
            lines.append(f'  subgraph cluster_{k} {{ label="~"; {members}; }}')
            k += 1
    for i, j in zip(*np.nonzero(cover)):
        lines.append(f"  {label(reps[i])} -> {label(reps[j])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DotGraph:
    nodes: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    def strict_relation(self, n: int | None = None) -> BinaryRelation:
        """Strict preference implied by the arrows, with clusters expanded."""
        n = max(self.nodes) + 1 if n is None else n
        owner = {x: (x,) for x in self.nodes}
        for cls in self.clusters:
            for x in cls:
                owner[x] = cls
        m = np.zeros((n, n), dtype=bool)
        for a, b in self.edges:
            m[a, b] = True
        closed = transitive_closure(BinaryRelation(m)).matrix
        out = np.zeros((n, n), dtype=bool)
        for a, b in zip(*np.nonzero(closed)):
            for x in owner[int(a)]:
                for y in owner[int(b)]:
                    out[x, y] = True
        return BinaryRelation(out)


_EDGE = re.compile(r"^\s*([A-Za-z]+)\s*->\s*([A-Za-z]+)\s*;?\s*$")
_CLUSTER = re.compile(r"^\s*subgraph\s+cluster_\d+\s*\{(.*)\}\s*$")
_NODE = re.compile(r"^\s*([A-Za-z]+)\s*;\s*$")


def parse_dot(text: str) -> DotGraph:
    """Read back the subset of DOT written by :func:`to_dot`."""
    stripped = text.strip()
    if not stripped.startswith("digraph") or not stripped.endswith("}"):
        raise ValueError("not a DOT digraph")
    nodes, clusters, edges = set(), [], []
    for line in stripped.splitlines()[1:-1]:
        if m := _EDGE.match(line):
            a, b = index_of(m.group(1)), index_of(m.group(2))
            edges.append((a, b))
            nodes.update((a, b))
        elif m := _CLUSTER.match(line):
            body = [t.strip() for t in m.group(1).split(";")]
            cls = tuple(index_of(t) for t in body if t and "=" not in t)
            clusters.append(cls)
            nodes.update(cls)
        elif m := _NODE.match(line):
            nodes.add(index_of(m.group(1)))
        elif "=" in line or "[" in line or not line.strip():
            continue
        else:
            raise ValueError(f"unrecognised DOT line: {line.strip()!r}")
    return DotGraph(tuple(sorted(nodes)), tuple(clusters), tuple(edges))
