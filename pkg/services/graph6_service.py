"""
graph6 encoding and decoding through networkx
"""

import logging

import networkx as nx

from models import Graph, GraphError, MAX_ORDER, mask_of

logger = logging.getLogger(__name__)

GRAPH6_HEADER = '>>graph6<<'


class Graph6FormatError(GraphError):
    """Malformed graph6 input"""
    pass


def strip_graph6_header(text: str) -> str:
    """Remove the optional '>>graph6<<' header and surrounding whitespace."""
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):].strip()
    return s


def graph6_encode(graph: Graph) -> str:
    """Header-free graph6 text of graph with vertices in label order."""
    data = nx.to_graph6_bytes(graph.to_networkx(), nodes=range(graph.n), header=False)
    return data.decode('ascii').strip()


def graph6_decode(text: str) -> Graph:
    """
    Parse one graph6 string

    Raises:
        Graph6FormatError: If the bytes are out of range, the length does not
            match the declared order, or the order exceeds the graph cap
    """
    s = strip_graph6_header(text)
    if not s:
        raise Graph6FormatError("Empty graph6 string")
    bad = [c for c in s if not 63 <= ord(c) <= 126]
    if bad:
        raise Graph6FormatError(f"graph6 bytes must be in range 63..126, found {bad[0]!r}")
    try:
        G = nx.from_graph6_bytes(s.encode('ascii'))
    except (nx.NetworkXError, ValueError, IndexError) as e:
        raise Graph6FormatError(f"Malformed graph6 string {s!r}: {e}")

    n = G.number_of_nodes()
    if not 1 <= n <= MAX_ORDER:
        raise Graph6FormatError(f"graph6 order {n} outside 1..{MAX_ORDER}")
    rows = tuple(mask_of(G.neighbors(v)) for v in range(n))
    return Graph(n, rows)


def read_graph6_lines(lines) -> list:
    """Decode every non-blank line of an iterable of graph6 text."""
    return [graph6_decode(line) for line in lines if line.strip()]
