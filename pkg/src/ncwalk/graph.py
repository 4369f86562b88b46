"""Chain, binary-tree and glued-binary-tree graphs.

Chains label their sites ``0 .. N-1``.  Trees use heap labels starting at 1
(root = 1, children of ``i`` are ``2i`` and ``2i+1``).  Internally every node
also has a 0-based *position*, which is what the Hilbert space uses for its
occupation bits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import InvalidSizeError


class GraphKind(str, Enum):
    CHAIN = "chain"
    BINARY_TREE = "binary_tree"
    GLUED_TREE = "glued_tree"


@dataclass(frozen=True)
class Graph:
    kind: GraphKind
    size: int
    labels: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    layers: tuple[int, ...]

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {label: pos for pos, label in enumerate(self.labels)}

    def position(self, label: int) -> int:
        try:
            return self._position[label]
        except KeyError:
            raise InvalidSizeError(f"node {label} is not part of this {self.kind.value}") from None

    def layer_of(self, label: int) -> int:
        return self.layers[self.position(label)]

    @cached_property
    def pairs(self) -> np.ndarray:
        """Edges as an ``(E, 2)`` array of node positions."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array([(self.position(a), self.position(b)) for a, b in self.edges], dtype=np.int64)

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Node coordinate used for wave-packet widths (the node label)."""
        return np.asarray(self.labels, dtype=float)

    @cached_property
    def layer_array(self) -> np.ndarray:
        return np.asarray(self.layers, dtype=np.int64)

    @property
    def layer_values(self) -> list[int]:
        return sorted(set(self.layers))

    def nodes_in_layer(self, layer: int) -> list[int]:
        return [lab for lab, lay in zip(self.labels, self.layers) if lay == layer]

    def layer_counts(self) -> list[int]:
        return [self.layers.count(j) for j in self.layer_values]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        for a, b in self.pairs:
            deg[a] += 1
            deg[b] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.node_count, self.node_count))
        for i, j in self.pairs:
            a[i, j] = a[j, i] = 1.0
        return a

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return False
        nbrs = [[] for _ in range(self.node_count)]
        for i, j in self.pairs:
            nbrs[i].append(j)
            nbrs[j].append(i)
        seen = {0}
        queue = deque([0])
        while queue:
            for k in nbrs[queue.popleft()]:
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
        return len(seen) == self.node_count

    @property
    def default_start(self) -> int:
        """Label of the natural starting node: chain centre, tree root or glued-tree head."""
        if self.kind is GraphKind.CHAIN:
            return self.node_count // 2
        return self.labels[0]

    @property
    def bottom(self) -> int:
        """Label of the last node (deepest leaf of a tree, far end of a chain)."""
        return self.labels[-1]


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def build_chain(n: int) -> Graph:
    """Open chain of ``n`` sites."""
    if n < 2:
        raise InvalidSizeError(f"a chain needs at least 2 sites, got {n}")
    return Graph(
        kind=GraphKind.CHAIN,
        size=n,
        labels=tuple(range(n)),
        edges=tuple((i, i + 1) for i in range(n - 1)),
        layers=tuple(range(n)),
    )


def build_binary_tree(g: int) -> Graph:
    """Rooted binary tree with ``g`` layers (``2**g - 1`` nodes), root in layer 1."""
    if g < 1:
        raise InvalidSizeError(f"a binary tree needs at least 1 layer, got {g}")
    n = 2**g - 1
    edges = []
    for i in range(1, n + 1):
        for child in (2 * i, 2 * i + 1):
            if child <= n:
                edges.append((i, child))
    layers = tuple(i.bit_length() for i in range(1, n + 1))
    return Graph(
        kind=GraphKind.BINARY_TREE,
        size=g,
        labels=tuple(range(1, n + 1)),
        edges=tuple(edges),
        layers=layers,
    )


def build_glued_tree(d: int) -> Graph:
    """Two ``d``-layer binary trees glued through a shared leaf layer.

    The head (label 1) sits in layer 0 and the bottom node in layer ``2d - 2``,
    so the layer populations read ``1, 2, .., 2**(d-1), .., 2, 1``.  The upper
    half is heap-labelled; the mirrored half continues the labels layer by
    layer, its node ``k`` in each layer joining nodes ``2k`` and ``2k+1`` of
    the layer above.
    """
    if d < 2:
        raise InvalidSizeError(f"a glued tree needs depth at least 2, got {d}")
    upper = 2**d - 1
    labels = list(range(1, upper + 1))
    layers = [i.bit_length() - 1 for i in labels]
    edges = [(i, c) for i in range(1, upper + 1) for c in (2 * i, 2 * i + 1) if c <= upper]

    prev = list(range(2 ** (d - 1), upper + 1))  # shared leaf layer
    next_label = upper + 1
    for layer in range(d, 2 * d - 1):
        current = list(range(next_label, next_label + len(prev) // 2))
        next_label += len(current)
        for k, node in enumerate(current):
            edges.append(_edge(prev[2 * k], node))
            edges.append(_edge(prev[2 * k + 1], node))
        labels.extend(current)
        layers.extend([layer] * len(current))
        prev = current

    return Graph(
        kind=GraphKind.GLUED_TREE,
        size=d,
        labels=tuple(labels),
        edges=tuple(sorted(edges)),
        layers=tuple(layers),
    )


def build_graph(kind: GraphKind | str, size: int) -> Graph:
    kind = GraphKind(kind)
    builder = {
        GraphKind.CHAIN: build_chain,
        GraphKind.BINARY_TREE: build_binary_tree,
        GraphKind.GLUED_TREE: build_glued_tree,
    }[kind]
    return builder(size)


def graph_to_text(graph: Graph) -> str:
    """Plain adjacency-list dump: a header line, then one ``a b`` edge per line."""
    lines = [f"# kind={graph.kind.value} size={graph.size} nodes={graph.node_count} edges={len(graph.edges)}"]
    lines.extend(f"{a} {b}" for a, b in graph.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    """Parse :func:`graph_to_text` output, rebuilding and cross-checking the edges."""
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not rows or not rows[0].startswith("#"):
        raise ValueError("missing graph header line")
    header = dict(tok.split("=", 1) for tok in rows[0].lstrip("#").split())
    graph = build_graph(header["kind"], int(header["size"]))
    edges = tuple(tuple(int(x) for x in row.split()) for row in rows[1:])
    if edges != graph.edges or int(header["nodes"]) != graph.node_count:
        raise ValueError("edge list does not match the declared graph")
    return graph
