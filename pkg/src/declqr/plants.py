"""Plant descriptions: block-partitioned LTI dynamics x+ = A x + B u.

A plant belongs to the admissible set for a plant graph when the blocks
of A vanish wherever the graph has no edge, B is block diagonal with
smallest singular value at least epsilon, and any cost weights Q, R are
block diagonal and positive definite.  Subsystems may carry fewer inputs
than states (under-actuation) only when they are sinks of the graph.
"""

from dataclasses import dataclass, replace

import numpy as np

from .graphs import DirectedGraph, adjacency, sinks


@dataclass(frozen=True)
class SubsystemPartition:
    """State (and optionally input) dimensions of the q subsystems."""

    dims: tuple
    input_dims: tuple = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        if self.input_dims is None:
            object.__setattr__(self, "input_dims", dims)
        else:
            idims = tuple(int(d) for d in self.input_dims)
            if len(idims) != len(dims) or any(d < 0 for d in idims):
                raise ValueError(f"bad input dimensions {self.input_dims} for {dims}")
            object.__setattr__(self, "input_dims", idims)

    @classmethod
    def scalars(cls, q):
        """q scalar subsystems."""
        return cls((1,) * q)

    @property
    def q(self):
        return len(self.dims)

    @property
    def n(self):
        return sum(self.dims)

    @property
    def m(self):
        return sum(self.input_dims)

    def state_slice(self, i):
        """Python slice of subsystem i's states, i in 1..q."""
        lo = sum(self.dims[: i - 1])
        return slice(lo, lo + self.dims[i - 1])

    def input_slice(self, i):
        lo = sum(self.input_dims[: i - 1])
        return slice(lo, lo + self.input_dims[i - 1])

    def index_set(self, i):
        """1-based state indices of subsystem i."""
        s = self.state_slice(i)
        return tuple(range(s.start + 1, s.stop + 1))

    def block(self, m, i, j):
        """State-partition block (i, j) of an n-by-n matrix."""
        return m[self.state_slice(i), self.state_slice(j)]

    def row_block(self, m, i):
        return m[self.state_slice(i), :]

    def input_block(self, b, i):
        """Diagonal block of the n-by-m input matrix for subsystem i."""
        return b[self.state_slice(i), self.input_slice(i)]


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Plant:
    """One interconnected plant: matrices, initial state, actuation floor."""

    partition: SubsystemPartition
    A: np.ndarray
    B: np.ndarray
    x0: np.ndarray
    epsilon: float
    Q: np.ndarray = None
    R: np.ndarray = None

    def __post_init__(self):
        n, m = self.partition.n, self.partition.m
        a = _readonly(self.A)
        b = _readonly(self.B)
        x0 = _readonly(self.x0).reshape(-1)
        if a.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}, got {a.shape}")
        if b.shape != (n, m):
            raise ValueError(f"B must be {n}x{m}, got {b.shape}")
        if x0.shape != (n,):
            raise ValueError(f"x0 must have length {n}, got {x0.shape}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "x0", _readonly(x0))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        for name, dim in (("Q", n), ("R", m)):
            w = getattr(self, name)
            if w is not None:
                w = _readonly(w)
                if w.shape != (dim, dim):
                    raise ValueError(f"{name} must be {dim}x{dim}, got {w.shape}")
                object.__setattr__(self, name, w)

    @property
    def n(self):
        return self.partition.n

    @property
    def m(self):
        return self.partition.m

    @property
    def q(self):
        return self.partition.q

    def with_x0(self, x0):
        return replace(self, x0=x0)


def min_singular_value(b):
    return float(np.linalg.svd(np.asarray(b, dtype=float), compute_uv=False)[-1])


def _offdiag_block_indices(part, shape):
    """(i, j) pairs of off-diagonal blocks of a block matrix of given kind."""
    rows = part.dims if shape == "state" else part.input_dims
    return [(i, j) for i in range(1, part.q + 1) for j in range(1, part.q + 1) if i != j]


def check_membership(plant, graph):
    """List the ways a plant leaves the admissible set; empty means member."""
    part = plant.partition
    if graph.q != part.q:
        raise ValueError(f"graph has {graph.q} vertices but partition has {part.q}")
    violations = []
    s = adjacency(graph)
    for i in range(1, part.q + 1):
        for j in range(1, part.q + 1):
            if not s[i - 1, j - 1] and part.block(plant.A, i, j).any():
                violations.append(
                    f"A block ({i},{j}) is nonzero but the plant graph has no edge {j}->{i}")
    for i in range(1, part.q + 1):
        for j in range(1, part.q + 1):
            if i != j:
                blk = plant.B[part.state_slice(i), part.input_slice(j)]
                if blk.any():
                    violations.append(f"B block ({i},{j}) is nonzero; B must be block diagonal")
    smin = min_singular_value(plant.B)
    if smin < plant.epsilon * (1 - 1e-12):
        violations.append(
            f"smallest singular value of B is {smin:.6g}, below epsilon={plant.epsilon:.6g}")
    snk = sinks(graph)
    for i in range(1, part.q + 1):
        ni, mi = part.dims[i - 1], part.input_dims[i - 1]
        if mi > ni:
            violations.append(f"subsystem {i} has more inputs ({mi}) than states ({ni})")
        elif mi < ni and i not in snk:
            violations.append(
                f"subsystem {i} is under-actuated ({mi}<{ni}) but is not a sink")
    for name in ("Q", "R"):
        w = getattr(plant, name)
        if w is None:
            continue
        kind = "state" if name == "Q" else "input"
        for i in range(1, part.q + 1):
            for j in range(1, part.q + 1):
                if i == j:
                    continue
                if kind == "state":
                    blk = w[part.state_slice(i), part.state_slice(j)]
                else:
                    blk = w[part.input_slice(i), part.input_slice(j)]
                if blk.any():
                    violations.append(f"{name} block ({i},{j}) is nonzero; weights must be block diagonal")
        if np.linalg.norm(w - w.T) > 1e-12 * max(1.0, np.linalg.norm(w)):
            violations.append(f"{name} is not symmetric")
        else:
            lo = float(np.linalg.eigvalsh(w)[0])
            if lo <= 0:
                violations.append(f"{name} is not positive definite (min eigenvalue {lo:.6g})")
    return violations


def _pd_sqrt(w, label):
    """Symmetric square root and inverse square root of an SPD matrix."""
    vals, vecs = np.linalg.eigh(0.5 * (w + w.T))
    if vals[0] <= 0:
        raise ValueError(f"{label} must be positive definite (min eigenvalue {vals[0]:.6g})")
    root = vecs @ np.diag(np.sqrt(vals)) @ vecs.T
    inv_root = vecs @ np.diag(1.0 / np.sqrt(vals)) @ vecs.T
    return root, inv_root


def normalize_weights(plant):
    """Absorb Q and R into the dynamics; the result has unit weights.

    The returned plant carries A' = Q^{1/2} A Q^{-1/2}, B' = Q^{1/2} B
    R^{-1/2} and x0' = Q^{1/2} x0.  A gain K for the original plant maps
    to R^{1/2} K Q^{-1/2}; costs are unchanged under that pairing.
    """
    if plant.Q is None and plant.R is None:
        return plant
    n, m = plant.n, plant.m
    q_mat = plant.Q if plant.Q is not None else np.eye(n)
    r_mat = plant.R if plant.R is not None else np.eye(m)
    q_root, q_inv_root = _pd_sqrt(q_mat, "Q")
    _, r_inv_root = _pd_sqrt(r_mat, "R")
    return Plant(plant.partition,
                 q_root @ plant.A @ q_inv_root,
                 q_root @ plant.B @ r_inv_root,
                 q_root @ plant.x0,
                 plant.epsilon)


def weight_gain_transform(plant, k):
    """Map a gain for `plant` to the equivalent gain for normalize_weights(plant)."""
    n, m = plant.n, plant.m
    q_mat = plant.Q if plant.Q is not None else np.eye(n)
    r_mat = plant.R if plant.R is not None else np.eye(m)
    q_root, q_inv_root = _pd_sqrt(q_mat, "Q")
    r_root, _ = _pd_sqrt(r_mat, "R")
    return r_root @ np.asarray(k, dtype=float) @ q_inv_root


def diagonalize_b(plant):
    """Rotate states and inputs so every B block becomes rectangular diagonal.

    Uses one SVD per subsystem block, singular values in descending
    order.  Returns (plant', U, V) where A' = U^T A U, B' = U^T B V and
    x0' = U^T x0; a gain K maps to V^T K U.  Requires unit weights.
    """
    if plant.Q is not None or plant.R is not None:
        raise ValueError("normalize weights before diagonalizing B")
    part = plant.partition
    u = np.zeros((plant.n, plant.n))
    v = np.zeros((plant.m, plant.m))
    for i in range(1, part.q + 1):
        bi = part.input_block(plant.B, i)
        ui, _, vhi = np.linalg.svd(bi, full_matrices=True)
        u[part.state_slice(i), part.state_slice(i)] = ui
        v[part.input_slice(i), part.input_slice(i)] = vhi.T
    b2 = u.T @ plant.B @ v
    # scrub round-off outside the rectangular diagonal
    mask = np.zeros_like(b2)
    for i in range(1, part.q + 1):
        ssl, isl = part.state_slice(i), part.input_slice(i)
        k = min(ssl.stop - ssl.start, isl.stop - isl.start)
        for t in range(k):
            mask[ssl.start + t, isl.start + t] = 1.0
    b2 = b2 * mask
    p2 = Plant(part, u.T @ plant.A @ u, b2, u.T @ plant.x0, plant.epsilon)
    return p2, u, v


def random_plant(graph, partition=None, epsilon=1.0, magnitude=1.0, seed=0, rng=None):
    """Seed-deterministic member of the admissible set for `graph`.

    A gets independent uniform(-magnitude, magnitude) entries in the
    blocks the graph allows, B is diagonal with entries in [epsilon,
    2 epsilon], and x0 is a uniformly random unit vector.
    """
    if partition is None:
        partition = SubsystemPartition.scalars(graph.q)
    if graph.q != partition.q:
        raise ValueError(f"graph has {graph.q} vertices but partition has {partition.q}")
    if partition.input_dims != partition.dims:
        raise ValueError("random_plant generates fully actuated plants only")
    if rng is None:
        rng = np.random.default_rng(seed)
    n = partition.n
    a = np.zeros((n, n))
    s = adjacency(graph)
    for i in range(1, partition.q + 1):
        for j in range(1, partition.q + 1):
            if s[i - 1, j - 1]:
                shape = (partition.dims[i - 1], partition.dims[j - 1])
                a[partition.state_slice(i), partition.state_slice(j)] = \
                    rng.uniform(-magnitude, magnitude, size=shape)
    b = np.diag(rng.uniform(epsilon, 2 * epsilon, size=n))
    x0 = rng.standard_normal(n)
    x0 = x0 / np.linalg.norm(x0)
    return Plant(partition, a, b, x0, epsilon)


def block_pattern_graph(m, partition, tol=0.0):
    """Graph with edge (j, i) wherever block (i, j) of m has an entry above tol."""
    edges = []
    for i in range(1, partition.q + 1):
        for j in range(1, partition.q + 1):
            if np.abs(partition.block(m, i, j)).max(initial=0.0) > tol:
                edges.append((j, i))
    return DirectedGraph(partition.q, edges)
