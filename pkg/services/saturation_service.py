"""
Saturation Service
Unique K_r-saturation predicates, primitivity and dominating vertex reduction
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from models import Graph, GraphError, OrderTooSmallError
from services.clique_service import completion_count, count_r_cliques

logger = logging.getLogger(__name__)


class NotDominatingError(GraphError):
    """Vertex is not adjacent to every other vertex"""
    pass


@dataclass(frozen=True)
class SaturationVerdict:
    ok: bool
    reason: str = ''

    def line(self) -> str:
        return 'YES' if self.ok else f"NO {self.reason}"


def _check_order(graph: Graph, r: int):
    if r < 2:
        raise GraphError(f"Clique parameter must be at least 2, got {r}")
    if graph.n < r:
        raise OrderTooSmallError(f"Graph has {graph.n} vertices, fewer than r = {r}")


def dominating_vertices(graph: Graph) -> List[int]:
    others = (1 << graph.n) - 1
    return [v for v in range(graph.n) if graph.adj[v] == others & ~(1 << v)]


def has_dominating_vertex(graph: Graph) -> bool:
    return bool(dominating_vertices(graph))


def saturation_verdict(graph: Graph, r: int, primitive: bool = False) -> SaturationVerdict:
    """
    Check unique K_r-saturation and report the first failure

    Args:
        graph: Graph to verify
        r: Clique parameter
        primitive: Also reject graphs with a dominating vertex

    Returns:
        SaturationVerdict: ok flag and a reason naming the failing witness

    Raises:
        OrderTooSmallError: If graph has fewer than r vertices
    """
    _check_order(graph, r)
    if count_r_cliques(graph, r, cap=1):
        return SaturationVerdict(False, f"contains K_{r}")
    for pair in graph.non_edges():
        count = completion_count(graph.adj, pair.u, pair.v, r, cap=2)
        if count != 1:
            shown = '>=2' if count >= 2 else '0'
            return SaturationVerdict(False, f"non-edge {pair} has {shown} completions")
    if primitive:
        dominating = dominating_vertices(graph)
        if dominating:
            return SaturationVerdict(False, f"dominating vertex {dominating[0]}")
    return SaturationVerdict(True)


def is_uniquely_kr_saturated(graph: Graph, r: int) -> bool:
    return saturation_verdict(graph, r).ok


def is_r_primitive(graph: Graph, r: int) -> bool:
    return saturation_verdict(graph, r, primitive=True).ok


def delete_dominating_vertex(graph: Graph, v: int) -> Graph:
    """
    Remove a dominating vertex, compacting labels above it

    Raises:
        NotDominatingError: If v is not adjacent to all other vertices
    """
    if v not in dominating_vertices(graph):
        raise NotDominatingError(f"Vertex {v} does not dominate the graph")
    return graph.delete_vertex(v)


def strip_dominating_vertices(graph: Graph, r: int) -> Tuple[Graph, int]:
    """
    Repeatedly delete dominating vertices

    Each deletion lowers the clique parameter by one, so a uniquely
    K_r-saturated input reduces to an r'-primitive graph.

    Returns:
        (graph, r): Reduced graph and reduced clique parameter
    """
    while graph.n > 1 and r > 2:
        dominating = dominating_vertices(graph)
        if not dominating:
            break
        graph = delete_dominating_vertex(graph, dominating[0])
        r -= 1
    logger.debug(f"Reduced to {graph.n} vertices at r = {r}")
    return graph, r
