"""
Clique Service
Bit-parallel clique counting, enumeration and maximum clique search with
greedy coloring bounds
"""

import logging
from typing import List, Optional, Tuple

from models import Graph, Pair, Trigraph, VertexSet, bits_of

logger = logging.getLogger(__name__)


def color_classes(adj, cand: int) -> Tuple[List[int], List[int]]:
    """
    Greedy sequential coloring of the subgraph induced by cand

    Returns:
        (order, colors): vertices in nondecreasing color order and the color
        (1-based) of each vertex; colors[-1] bounds the clique number of cand
    """
    order = []
    colors = []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            available &= ~low & ~adj[v]
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def count_cliques_within(adj, cand: int, k: int, cap: Optional[int] = None) -> int:
    """Number of k-cliques inside cand, or min(count, cap) when cap is given."""
    if k == 0:
        return 1
    size = cand.bit_count()
    if size < k:
        return 0
    if k == 1:
        return size if cap is None else min(size, cap)
    if k == 2:
        total = 0
        rest = cand
        for v in bits_of(cand):
            rest &= ~(1 << v)
            total += (adj[v] & rest).bit_count()
            if cap is not None and total >= cap:
                return cap
        return total

    order, colors = color_classes(adj, cand)
    if colors[-1] < k:
        return 0
    total = 0
    remaining = cand
    # Each clique is counted at its last vertex in color order
    for idx in range(len(order) - 1, -1, -1):
        if colors[idx] < k:
            break
        v = order[idx]
        remaining &= ~(1 << v)
        sub_cap = None if cap is None else cap - total
        total += count_cliques_within(adj, adj[v] & remaining, k - 1, sub_cap)
        if cap is not None and total >= cap:
            return cap
    return total


def count_r_cliques(graph: Graph, r: int, cap: Optional[int] = None) -> int:
    """
    Count the r-vertex cliques of graph

    Args:
        graph: Graph to inspect
        r: Clique size (r > n yields 0)
        cap: Stop counting once this many cliques are found

    Returns:
        int: Exact count, or min(count, cap)
    """
    if r < 0:
        raise ValueError(f"Clique size must be non-negative, got {r}")
    if r > graph.n:
        return 0
    full = (1 << graph.n) - 1
    return count_cliques_within(graph.adj, full, r, cap)


def cliques_within(adj, cand: int, k: int, limit: Optional[int] = None) -> List[int]:
    """k-cliques inside cand as bit masks, in lexicographic order of members."""
    found = []

    def walk(cand, k, acc):
        if k == 0:
            found.append(acc)
            return limit is not None and len(found) >= limit
        for v in bits_of(cand):
            cand &= ~(1 << v)
            if walk(cand & adj[v], k - 1, acc | (1 << v)):
                return True
            if cand.bit_count() < k:
                break
        return False

    if cand.bit_count() >= k:
        walk(cand, k, 0)
    return found


def kr_completions(trigraph: Trigraph, pair: Pair, r: int, limit: Optional[int] = None) -> List[VertexSet]:
    """
    Black K_r-completions of a pair

    Args:
        trigraph: Trigraph whose black pairs are used
        pair: Pair of any color
        r: Clique parameter (>= 2)
        limit: Stop after this many completions

    Returns:
        list: (r-2)-sets S with every pair of S + {u, v} black except {u, v}
    """
    if r < 2:
        raise ValueError(f"Clique parameter must be at least 2, got {r}")
    black = trigraph.black
    cand = black[pair.u] & black[pair.v] & ~pair.mask
    return [VertexSet(m) for m in cliques_within(black, cand, r - 2, limit)]


def completion_count(adj, u: int, v: int, r: int, cap: Optional[int] = None) -> int:
    """Number of (r-2)-cliques in the common neighborhood of u and v."""
    cand = adj[u] & adj[v] & ~((1 << u) | (1 << v))
    return count_cliques_within(adj, cand, r - 2, cap)


def maximum_clique_within(adj, cand: int) -> int:
    """Mask of one maximum clique inside cand (branch and bound with coloring bound)."""
    best = [0, 0]

    def expand(cand, size, acc):
        order, colors = color_classes(adj, cand)
        for idx in range(len(order) - 1, -1, -1):
            if size + colors[idx] <= best[0]:
                return
            v = order[idx]
            grown = acc | (1 << v)
            nxt = cand & adj[v]
            if nxt:
                expand(nxt, size + 1, grown)
            elif size + 1 > best[0]:
                best[0] = size + 1
                best[1] = grown
            cand &= ~(1 << v)

    if cand:
        expand(cand, 0, 0)
    return best[1]


def maximum_clique(graph: Graph) -> VertexSet:
    return VertexSet(maximum_clique_within(graph.adj, (1 << graph.n) - 1))


def clique_number(graph: Graph) -> int:
    """Exact clique number of graph."""
    omega = len(maximum_clique(graph))
    logger.debug(f"Clique number of graph on {graph.n} vertices: {omega}")
    return omega


def maximal_cliques(graph: Graph, containing: Optional[int] = None) -> List[VertexSet]:
    """All maximal cliques (optionally those containing a vertex), Bron-Kerbosch with pivoting."""
    adj = graph.adj
    found = []

    def extend(R, P, X):
        if not P and not X:
            found.append(VertexSet(R))
            return
        pivot = max(bits_of(P | X), key=lambda u: (adj[u] & P).bit_count())
        for v in bits_of(P & ~adj[pivot]):
            bit = 1 << v
            extend(R | bit, P & adj[v], X & adj[v])
            P &= ~bit
            X |= bit

    if containing is None:
        extend(0, (1 << graph.n) - 1, 0)
    else:
        extend(1 << containing, adj[containing], 0)
    return sorted(found)
