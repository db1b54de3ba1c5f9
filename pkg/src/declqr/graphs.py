"""Directed graphs over subsystem indices.

Vertices are numbered 1..q.  An edge (j, i) is read "j influences i":
the state of subsystem j enters the dynamics of subsystem i.  The
adjacency matrix follows the same convention, s[i, j] = 1 iff (j, i) is
an edge, so row i lists the subsystems feeding into i.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph on vertices 1..q with edges (source, target)."""

    q: int
    edges: frozenset

    def __init__(self, q, edges=()):
        if q < 1:
            raise ValueError(f"need at least one vertex, got q={q}")
        normalized = set()
        for e in edges:
            j, i = e
            if not (1 <= j <= q and 1 <= i <= q):
                raise ValueError(f"edge {e!r} out of range for q={q}")
            normalized.add((int(j), int(i)))
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def complete(cls, q):
        """Complete graph, self-loops included."""
        return cls(q, [(j, i) for j in range(1, q + 1) for i in range(1, q + 1)])

    @classmethod
    def self_loops(cls, q):
        """Self-loops only: each vertex sees itself and nothing else."""
        return cls(q, [(i, i) for i in range(1, q + 1)])

    @classmethod
    def empty(cls, q):
        return cls(q, [])

    @classmethod
    def from_adjacency(cls, s):
        """Build from a 0/1 matrix with s[i-1, j-1] = 1 iff (j, i) is an edge."""
        s = np.asarray(s)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {s.shape}")
        q = s.shape[0]
        return cls(q, [(j + 1, i + 1) for i in range(q) for j in range(q) if s[i, j]])

    @classmethod
    def from_adjacency_lists(cls, q, lists):
        """Build from {source: [targets...]} with 1-based vertices."""
        edges = []
        for j, targets in lists.items():
            for i in targets:
                edges.append((int(j), int(i)))
        return cls(q, edges)

    def has_edge(self, j, i):
        return (j, i) in self.edges

    def successors(self, j):
        return tuple(sorted(i for (jj, i) in self.edges if jj == j))

    def predecessors(self, i):
        return tuple(sorted(j for (j, ii) in self.edges if ii == i))

    def union(self, other):
        if other.q != self.q:
            raise ValueError(f"vertex count mismatch: {self.q} vs {other.q}")
        return DirectedGraph(self.q, self.edges | other.edges)

    def adjacency_lists(self):
        """Serializable {source: [targets...]} form, sorted."""
        return {j: list(self.successors(j)) for j in range(1, self.q + 1)
                if self.successors(j)}


def adjacency(g):
    """0/1 matrix with row i marking the subsystems that influence i."""
    s = np.zeros((g.q, g.q), dtype=int)
    for (j, i) in g.edges:
        s[i - 1, j - 1] = 1
    return s


def sinks(g):
    """Vertices with no out-edge to a distinct vertex; self-loops allowed."""
    out = {v: False for v in range(1, g.q + 1)}
    for (j, i) in g.edges:
        if i != j:
            out[j] = True
    return tuple(v for v in range(1, g.q + 1) if not out[v])


def isolated_nodes(g):
    """Vertices with no incident edge at all (self-loop counts as incident)."""
    touched = set()
    for (j, i) in g.edges:
        touched.add(j)
        touched.add(i)
    return tuple(v for v in range(1, g.q + 1) if v not in touched)


def is_supergraph(g1, g2):
    """True iff g1 contains every edge of g2 (same vertex count required)."""
    if g1.q != g2.q:
        raise ValueError(f"vertex count mismatch: {g1.q} vs {g2.q}")
    return g2.edges <= g1.edges


def has_loop(g):
    """Detect a cycle over distinct vertices; a self-loop is a length-1 loop.

    Returns (flag, witness) where witness is a vertex tuple (v1, ..., vt)
    with edges v1 -> v2 -> ... -> vt -> v1, or None when acyclic.
    """
    for (j, i) in g.edges:
        if j == i:
            return True, (j,)
    succ = {v: [] for v in range(1, g.q + 1)}
    for (j, i) in g.edges:
        if j != i:
            succ[j].append(i)
    color = {v: 0 for v in range(1, g.q + 1)}  # 0 new, 1 on stack, 2 done
    for root in range(1, g.q + 1):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        path = [root]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(succ[w])))
                    path.append(w)
                    advanced = True
                    break
                if color[w] == 1:
                    return True, tuple(path[path.index(w):])
            if not advanced:
                color[v] = 2
                stack.pop()
                path.pop()
    return False, None


@dataclass(frozen=True)
class SinkBlockPartition:
    """Vertex reordering with the sinks renumbered last.

    permutation[k] is the original label of the vertex at new position
    k+1; blocks are cut from the reordered adjacency matrix, with s11 the
    non-sink rows/columns, s21 the sink rows over non-sink columns, and
    s22 the sink rows/columns.  The upper-right block is structurally
    zero because sinks influence nobody else.
    """

    non_sinks: tuple
    sinks: tuple
    permutation: tuple
    s11: np.ndarray
    s21: np.ndarray
    s22: np.ndarray

    @cached_property
    def s11_zero(self):
        return not self.s11.any()

    @cached_property
    def s11_diagonal(self):
        return not (self.s11 - np.diag(np.diag(self.s11))).any()

    @cached_property
    def s22_zero(self):
        return not self.s22.any()


def sink_block_partition(g):
    """Renumber vertices so sinks come last and cut the adjacency blocks."""
    snk = sinks(g)
    non = tuple(v for v in range(1, g.q + 1) if v not in snk)
    perm = non + snk
    s = adjacency(g)
    idx = [v - 1 for v in perm]
    sp = s[np.ix_(idx, idx)]
    k = len(non)
    s12 = sp[:k, k:]
    if s12.any():
        raise AssertionError("sink column leaks into a non-sink row")
    return SinkBlockPartition(non_sinks=non, sinks=snk, permutation=perm,
                              s11=sp[:k, :k], s21=sp[k:, :k], s22=sp[k:, k:])
