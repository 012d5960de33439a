"""
Immutable d-regular graph families.

Hypercube and torus adjacency is generated on the fly from the vertex index;
explicit graphs keep an (N, d) neighbour table. Every family implements a
vectorised ``neighbor_counts`` over a batch of boolean masks with shape
``(..., N)``, which is all the dynamics engine needs.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

import numpy as np

from src.core.exceptions import GraphSpecError, InvariantBreachError, VertexRangeError

logger = logging.getLogger(__name__)

# Structural self-checks on generated families run up to this many vertices.
_SELF_CHECK_LIMIT = 2**16


class Graph(ABC):
    """A d-regular graph on vertices 0..N-1."""

    family: str = "abstract"
    is_vertex_transitive: bool = False

    def __init__(self, spec: str, num_vertices: int, degree: int):
        self._spec = spec
        self._num_vertices = num_vertices
        self._degree = degree

    @property
    def spec(self) -> str:
        return self._spec

    @property
    def num_vertices(self) -> int:
        return self._num_vertices

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def count_dtype(self) -> type:
        return np.uint8 if self._degree < 256 else np.uint16

    def check_vertex(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self._num_vertices:
            raise VertexRangeError(f"vertex {v} outside [0, {self._num_vertices}) of {self.spec}")
        return v

    @abstractmethod
    def neighbors(self, v: int) -> np.ndarray:
        """Neighbour indices of ``v`` (length ``degree``)."""

    @abstractmethod
    def neighbor_counts(self, masks: np.ndarray) -> np.ndarray:
        """Number of neighbours inside the mask, for every vertex of every row."""

    def neighbor_table(self) -> np.ndarray:
        """(N, d) array of neighbours; only sensible for small N."""
        return np.stack([self.neighbors(v) for v in range(self._num_vertices)])

    def adjacency_lists(self) -> List[List[int]]:
        return [sorted(int(u) for u in row) for row in self.neighbor_table()]

    def self_check(self) -> None:
        """Verify degree, loop-freeness and symmetry of the neighbour table."""
        table = self.neighbor_table()
        check_neighbor_table(table, self._degree, self.spec)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec} N={self.num_vertices} d={self.degree}>"


def check_neighbor_table(table: np.ndarray, degree: int, spec: str) -> None:
    """
    Validate an (N, d) neighbour table.

    Raises:
        InvariantBreachError: If the table is not a simple d-regular symmetric graph
    """
    n = table.shape[0]
    if table.ndim != 2 or table.shape[1] != degree:
        raise InvariantBreachError(f"{spec}: neighbour table is not {degree}-regular")
    if n == 0:
        return
    if table.min() < 0 or table.max() >= n:
        raise InvariantBreachError(f"{spec}: neighbour index out of range")
    rows = np.arange(n)[:, None]
    if np.any(table == rows):
        raise InvariantBreachError(f"{spec}: self-loop present")
    ordered = np.sort(table, axis=1)
    if degree > 1 and np.any(ordered[:, 1:] == ordered[:, :-1]):
        raise InvariantBreachError(f"{spec}: repeated neighbour present")
    src = np.repeat(np.arange(n), degree)
    dst = table.reshape(-1)
    forward = np.lexsort((dst, src))
    backward = np.lexsort((src, dst))
    if not (
        np.array_equal(src[forward], dst[backward]) and np.array_equal(dst[forward], src[backward])
    ):
        raise InvariantBreachError(f"{spec}: adjacency is not symmetric")


class HypercubeGraph(Graph):
    """Q_n: vertex i is the subset of [n] given by its binary digits."""

    family = "hypercube"
    is_vertex_transitive = True

    def __init__(self, n: int, spec: str = ""):
        super().__init__(spec or f"hypercube:{n}", 2**n, n)
        self.n = n
        self._bits = np.left_shift(1, np.arange(n, dtype=np.int64))
        if self.num_vertices <= _SELF_CHECK_LIMIT:
            self.self_check()

    def neighbors(self, v: int) -> np.ndarray:
        return np.bitwise_xor(self.check_vertex(v), self._bits)

    def neighbor_table(self) -> np.ndarray:
        return np.bitwise_xor(np.arange(self.num_vertices, dtype=np.int64)[:, None], self._bits)

    def neighbor_counts(self, masks: np.ndarray) -> np.ndarray:
        lead = masks.shape[:-1]
        m = np.ascontiguousarray(masks, dtype=np.uint8)
        counts = np.zeros(m.shape, dtype=self.count_dtype)
        for i in range(self.n):
            shape = lead + (-1, 2, 1 << i)
            counts.reshape(shape)[...] += m.reshape(shape)[..., ::-1, :]
        return counts

    def coordinates(self, v: int) -> Tuple[int, ...]:
        """The subset of [n] (1-based) encoded by ``v``."""
        v = self.check_vertex(v)
        return tuple(i + 1 for i in range(self.n) if (v >> i) & 1)


class TorusGraph(Graph):
    """[n]^d: coordinates c_0..c_{d-1} with vertex index sum c_j * n^j."""

    family = "torus"
    is_vertex_transitive = True

    def __init__(self, n: int, dims: int, spec: str = ""):
        degree = 2 * dims if n >= 3 else dims
        super().__init__(spec or f"torus:{n}^{dims}", n**dims, degree)
        self.n = n
        self.dims = dims
        self._steps = (1, -1) if n >= 3 else (1,)
        if self.num_vertices <= _SELF_CHECK_LIMIT:
            self.self_check()

    def neighbors(self, v: int) -> np.ndarray:
        v = self.check_vertex(v)
        out = []
        for j in range(self.dims):
            base = self.n**j
            c = (v // base) % self.n
            for step in self._steps:
                out.append(v + ((c + step) % self.n - c) * base)
        return np.asarray(out, dtype=np.int64)

    def neighbor_table(self) -> np.ndarray:
        idx = np.arange(self.num_vertices, dtype=np.int64)
        columns = []
        for j in range(self.dims):
            base = self.n**j
            c = (idx // base) % self.n
            for step in self._steps:
                columns.append(idx + ((c + step) % self.n - c) * base)
        return np.stack(columns, axis=1)

    def neighbor_counts(self, masks: np.ndarray) -> np.ndarray:
        lead = masks.shape[:-1]
        m = np.ascontiguousarray(masks, dtype=np.uint8)
        counts = np.zeros(m.shape, dtype=self.count_dtype)
        for j in range(self.dims):
            shape = lead + (-1, self.n, self.n**j)
            view = m.reshape(shape)
            target = counts.reshape(shape)
            for step in self._steps:
                target[...] += np.roll(view, step, axis=-2)
        return counts

    def coordinates(self, v: int) -> Tuple[int, ...]:
        v = self.check_vertex(v)
        return tuple((v // self.n**j) % self.n for j in range(self.dims))


class ExplicitGraph(Graph):
    """Graph given by an (N, d) neighbour table (adjacency files, random-regular)."""

    family = "explicit"

    def __init__(self, table: np.ndarray, spec: str):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2:
            raise GraphSpecError(f"{spec}: neighbour table must be two-dimensional")
        super().__init__(spec, table.shape[0], table.shape[1])
        try:
            check_neighbor_table(table, self.degree, spec)
        except InvariantBreachError as e:
            raise GraphSpecError(str(e)) from e
        self._table = np.sort(table, axis=1)
        self._table.flags.writeable = False

    def neighbors(self, v: int) -> np.ndarray:
        return self._table[self.check_vertex(v)]

    def neighbor_table(self) -> np.ndarray:
        return self._table

    def neighbor_counts(self, masks: np.ndarray) -> np.ndarray:
        m = np.asarray(masks, dtype=np.uint8)
        return m[..., self._table].sum(axis=-1, dtype=self.count_dtype)


class DisjointUnionGraph(Graph):
    """H_1 ∪ … ∪ H_M placed side by side; part j occupies a contiguous index block."""

    family = "disjoint_union"

    def __init__(self, parts: Sequence[Graph], spec: str = ""):
        if not parts:
            raise GraphSpecError("a disjoint union needs at least one part")
        degrees = {p.degree for p in parts}
        if len(degrees) != 1:
            raise GraphSpecError(f"union parts must share one degree, got {sorted(degrees)}")
        sizes = [p.num_vertices for p in parts]
        super().__init__(
            spec or "union:" + "+".join(p.spec for p in parts), sum(sizes), degrees.pop()
        )
        self.parts = tuple(parts)
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self._uniform = len({p.spec for p in parts}) == 1
        logger.debug(f"Built union of {len(parts)} parts, N={self.num_vertices}")

    def part_of(self, v: int) -> int:
        v = self.check_vertex(v)
        return int(np.searchsorted(self.offsets, v, side="right") - 1)

    def neighbors(self, v: int) -> np.ndarray:
        j = self.part_of(v)
        off = int(self.offsets[j])
        return self.parts[j].neighbors(v - off) + off

    def neighbor_table(self) -> np.ndarray:
        return np.concatenate(
            [p.neighbor_table() + off for p, off in zip(self.parts, self.offsets[:-1])]
        )

    def neighbor_counts(self, masks: np.ndarray) -> np.ndarray:
        lead = masks.shape[:-1]
        if self._uniform:
            # identical parts: fold the part axis into the batch axes
            part = self.parts[0]
            stacked = masks.reshape(lead + (len(self.parts), part.num_vertices))
            return part.neighbor_counts(stacked).reshape(masks.shape)
        counts = np.empty(masks.shape, dtype=self.count_dtype)
        for p, lo, hi in zip(self.parts, self.offsets[:-1], self.offsets[1:]):
            counts[..., lo:hi] = p.neighbor_counts(masks[..., lo:hi])
        return counts

    def part_slices(self) -> List[slice]:
        return [slice(int(lo), int(hi)) for lo, hi in zip(self.offsets[:-1], self.offsets[1:])]
