"""
Saturation Toolkit Models
Graph, trigraph, pair and vertex-set value types stored as integer bit rows
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np

MAX_ORDER = 320


class GraphError(Exception):
    """Invalid graph or trigraph data"""
    pass


class ColorConflictError(GraphError):
    """Pair assignment contradicts an existing color"""
    pass


class OrderTooSmallError(GraphError):
    """Graph has fewer vertices than the clique parameter"""
    pass


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _check_rows(n: int, rows: Sequence[int], label: str):
    if len(rows) != n:
        raise GraphError(f"{label}: expected {n} rows, got {len(rows)}")
    full = (1 << n) - 1
    for v, row in enumerate(rows):
        if row < 0 or row & ~full:
            raise GraphError(f"{label}: row {v} has bits outside 0..{n - 1}")
        if (row >> v) & 1:
            raise GraphError(f"{label}: loop at vertex {v}")
        for u in bits_of(row):
            if not (rows[u] >> v) & 1:
                raise GraphError(f"{label}: pair {{{u},{v}}} is not symmetric")


class PairColor(Enum):
    BLACK = 'black'
    WHITE = 'white'
    GRAY = 'gray'


@dataclass(frozen=True, order=True)
class Pair:
    """Unordered vertex pair stored with u < v"""
    u: int
    v: int

    def __post_init__(self):
        if not 0 <= self.u < self.v:
            raise GraphError(f"Pair must satisfy 0 <= u < v, got ({self.u}, {self.v})")

    @classmethod
    def of(cls, a: int, b: int) -> 'Pair':
        if a == b:
            raise GraphError(f"Pair endpoints must differ, got {a}")
        return cls(min(a, b), max(a, b))

    @property
    def mask(self) -> int:
        return (1 << self.u) | (1 << self.v)

    def token(self) -> str:
        return f"{self.u}-{self.v}"

    def __str__(self):
        return f"{{{self.u},{self.v}}}"


@dataclass(frozen=True)
class VertexSet:
    """Set of vertices as a bit mask; ordered lexicographically by sorted members"""
    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise GraphError("VertexSet bits must be non-negative")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> 'VertexSet':
        return cls(mask_of(vertices))

    def members(self) -> Tuple[int, ...]:
        return tuple(bits_of(self.bits))

    def __iter__(self):
        return bits_of(self.bits)

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and bool((self.bits >> v) & 1)

    def __lt__(self, other: 'VertexSet') -> bool:
        return self.members() < other.members()

    def __str__(self):
        return '{' + ','.join(str(v) for v in self.members()) + '}'


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; adj[v] is the neighbor mask of v"""
    n: int
    adj: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise GraphError(f"Graph order must be in 1..{MAX_ORDER}, got {self.n}")
        object.__setattr__(self, 'adj', tuple(self.adj))
        _check_rows(self.n, self.adj, 'Graph')

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> 'Graph':
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        rows = [0] * n
        for a, b in edges:
            if a == b:
                raise GraphError(f"Loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"Edge ({a}, {b}) out of range for n = {n}")
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return cls(n, tuple(rows))

    @classmethod
    def from_numpy(cls, matrix: np.ndarray) -> 'Graph':
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GraphError(f"Adjacency matrix must be square, got shape {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise GraphError("Adjacency matrix entries must be 0 or 1")
        rows = tuple(mask_of(np.flatnonzero(matrix[v]).tolist()) for v in range(matrix.shape[0]))
        return cls(matrix.shape[0], rows)

    def to_numpy(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=np.uint8)
        for v, row in enumerate(self.adj):
            matrix[v, list(bits_of(row))] = 1
        return matrix

    @classmethod
    def from_adjacency_text(cls, text: str) -> 'Graph':
        """Parse the adjacency-matrix text format: n, then n rows of 0/1."""
        lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if not lines:
            raise GraphError("Adjacency text is empty")
        try:
            n = int(lines[0])
            matrix = np.array([[int(tok) for tok in line.split()] for line in lines[1:]], dtype=np.int64)
        except ValueError as e:
            raise GraphError(f"Malformed adjacency text: {e}")
        if matrix.shape != (n, n):
            raise GraphError(f"Adjacency text declares n = {n} but has shape {matrix.shape}")
        return cls.from_numpy(matrix)

    def to_adjacency_text(self) -> str:
        matrix = self.to_numpy()
        body = '\n'.join(' '.join(str(x) for x in row) for row in matrix)
        return f"{self.n}\n{body}\n"

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from((p.u, p.v) for p in self.edges())
        return G

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> List[int]:
        return [row.bit_count() for row in self.adj]

    def degree_multiset(self) -> Counter:
        return Counter(self.degrees())

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> List[Pair]:
        return [Pair(u, v) for u in range(self.n) for v in bits_of(self.adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> List[Pair]:
        full = (1 << self.n) - 1
        result = []
        for u in range(self.n):
            missing = full & ~self.adj[u] & ~((1 << (u + 1)) - 1)
            result.extend(Pair(u, v) for v in bits_of(missing))
        return result

    def complement(self) -> 'Graph':
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def add_edge(self, u: int, v: int) -> 'Graph':
        p = Pair.of(u, v)
        rows = list(self.adj)
        rows[p.u] |= 1 << p.v
        rows[p.v] |= 1 << p.u
        return Graph(self.n, tuple(rows))

    def relabel(self, perm: Sequence[int]) -> 'Graph':
        """Return the graph with vertex v renamed perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("Relabeling must be a permutation of the vertices")
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            rows[perm[v]] = mask_of(perm[u] for u in bits_of(row))
        return Graph(self.n, tuple(rows))

    def delete_vertex(self, v: int) -> 'Graph':
        if not 0 <= v < self.n:
            raise GraphError(f"Vertex {v} out of range for n = {self.n}")
        if self.n == 1:
            raise GraphError("Cannot delete the only vertex")
        low = (1 << v) - 1

        def squeeze(row):
            return (row & low) | ((row >> (v + 1)) << v)

        return Graph(self.n - 1, tuple(squeeze(row) for u, row in enumerate(self.adj) if u != v))


@dataclass(frozen=True)
class Trigraph:
    """Pairs colored black, white or gray; gray is neither black nor white"""
    n: int
    black: Tuple[int, ...]
    white: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise GraphError(f"Trigraph order must be in 1..{MAX_ORDER}, got {self.n}")
        object.__setattr__(self, 'black', tuple(self.black))
        object.__setattr__(self, 'white', tuple(self.white))
        _check_rows(self.n, self.black, 'Trigraph black')
        _check_rows(self.n, self.white, 'Trigraph white')
        for v in range(self.n):
            if self.black[v] & self.white[v]:
                raise ColorConflictError(f"Vertex {v} has pairs colored both black and white")

    @classmethod
    def all_gray(cls, n: int) -> 'Trigraph':
        return cls(n, (0,) * n, (0,) * n)

    @classmethod
    def from_graph(cls, graph: Graph) -> 'Trigraph':
        """All pairs assigned: edges black, non-edges white."""
        return cls(graph.n, graph.adj, graph.complement().adj)

    def color(self, u: int, v: int) -> PairColor:
        if (self.black[u] >> v) & 1:
            return PairColor.BLACK
        if (self.white[u] >> v) & 1:
            return PairColor.WHITE
        return PairColor.GRAY

    def gray_row(self, v: int) -> int:
        full = (1 << self.n) - 1
        return full & ~(1 << v) & ~self.black[v] & ~self.white[v]

    def gray_pairs(self) -> List[Pair]:
        result = []
        for u in range(self.n):
            result.extend(Pair(u, v) for v in bits_of(self.gray_row(u) >> (u + 1) << (u + 1)))
        return result

    def gray_count(self) -> int:
        return sum(self.gray_row(v).bit_count() for v in range(self.n)) // 2

    def is_complete(self) -> bool:
        return all(self.gray_row(v) == 0 for v in range(self.n))

    def touched_mask(self) -> int:
        """Vertices lying in at least one black or white pair."""
        return mask_of(v for v in range(self.n) if self.black[v] or self.white[v])

    def assign(self, black: Iterable[Pair] = (), white: Iterable[Pair] = ()) -> 'Trigraph':
        """
        Return a copy with extra black and white pairs

        Raises:
            ColorConflictError: If a pair would change between black and white
        """
        black_rows = list(self.black)
        white_rows = list(self.white)
        for p in black:
            if (white_rows[p.u] >> p.v) & 1:
                raise ColorConflictError(f"Pair {p} is white and cannot become black")
            black_rows[p.u] |= 1 << p.v
            black_rows[p.v] |= 1 << p.u
        for p in white:
            if (black_rows[p.u] >> p.v) & 1:
                raise ColorConflictError(f"Pair {p} is black and cannot become white")
            white_rows[p.u] |= 1 << p.v
            white_rows[p.v] |= 1 << p.u
        return Trigraph(self.n, tuple(black_rows), tuple(white_rows))

    def black_graph(self) -> Graph:
        return Graph(self.n, self.black)

    def to_graph(self) -> Graph:
        """Realization of a trigraph without gray pairs."""
        if not self.is_complete():
            raise GraphError(f"Trigraph still has {self.gray_count()} gray pairs")
        return self.black_graph()
