"""
Atlas Service
Named uniquely K_r-saturated graphs: the sporadic r-primitive constructions,
the small classic families, and a verification report over all of them
"""

import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import pandas as pd

from models import Graph, GraphError
from services.cayley_service import CayleySpec, cayley_complement
from services.graph6_service import graph6_encode
from services.saturation_service import saturation_verdict
from services.symmetry_service import canonical_form

logger = logging.getLogger(__name__)

PARAMETERIZED_PATTERN = re.compile(r'^\s*(\w+)\s*\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*$')


class AtlasError(Exception):
    """Unknown or malformed atlas entry name"""
    pass


@dataclass(frozen=True)
class AtlasEntry:
    """A named construction with the parameters it is expected to satisfy"""
    name: str
    builder: Callable[[], Graph] = field(compare=False, repr=False)
    expected_r: int
    expected_n: int
    expected_degrees: Counter = field(compare=False)
    primitive: bool = True
    sporadic: bool = False
    # degree multiset printed alongside the construction, when it disagrees with the built graph
    stated_degrees: Optional[Counter] = field(default=None, compare=False)

    def build(self) -> Graph:
        return self.builder()


@dataclass
class EntryVerdict:
    name: str
    n: int
    r: int
    passed: bool
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        remarks = self.failures + [f"note: {note}" for note in self.notes]
        detail = f"\t{'; '.join(remarks)}" if remarks else ''
        return f"{self.name}\t{self.n}\t{self.r}\t{status}{detail}"


@dataclass
class AtlasReport:
    verdicts: List[EntryVerdict]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failures(self) -> List[EntryVerdict]:
        return [v for v in self.verdicts if not v.passed]

    def summary(self) -> str:
        ok = sum(v.passed for v in self.verdicts)
        return f"{ok}/{len(self.verdicts)} atlas entries pass"


# Small shared constructions

def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def odd_cycle_complement(r: int) -> Graph:
    """Complement of C_{2r-1}; uniquely K_r-saturated."""
    return cycle_graph(2 * r - 1).complement()


def ehm_graph(r: int, m: int) -> Graph:
    """K_{r-2} joined to m independent vertices."""
    k = r - 2
    edges = [(a, b) for a in range(k) for b in range(a + 1, k + m)]
    return Graph.from_edges(k + m, edges)


def star_graph(m: int) -> Graph:
    return ehm_graph(3, m)


def petersen_graph() -> Graph:
    edges = []
    for i in range(5):
        edges += [(i, (i + 1) % 5), (5 + i, 5 + (i + 2) % 5), (i, 5 + i)]
    return Graph.from_edges(10, edges)


# Sporadic r-primitive constructions; vertex numbering is noted per builder

def build_g10() -> Graph:
    # a_i = i, b_i = 5 + i
    edges = []
    for i in range(5):
        edges += [(i, (i + 1) % 5), (5 + i, 5 + (i + 1) % 5)]
        edges += [(i, 5 + (2 * i + d) % 5) for d in (-1, 0, 1)]
    return Graph.from_edges(10, edges)


def build_g12() -> Graph:
    # v_0 = 0, v_1 = 1, u_{j,i} = 2 + 5j + i
    edges = [(0, 1)]
    for j in range(2):
        for i in range(5):
            edges += [(j, 2 + 5 * j + i), (2 + 5 * j + i, 2 + 5 * j + (i + 1) % 5)]
    for i in range(5):
        edges += [(2 + i, 7 + (i + d) % 5) for d in (0, 1, 3)]
    return Graph.from_edges(12, edges)


def build_g13() -> Graph:
    """x = 0, y_i = i and z_i = 6 + i for i in 1..6 with indices taken cyclically"""
    def nxt(i, step):
        return (i + step - 1) % 6 + 1

    edges = []
    for i in range(1, 7):
        edges += [(0, i), (i, nxt(i, 1)), (6 + i, 6 + nxt(i, 1)), (6 + i, 6 + nxt(i, 3))]
        edges += [(6 + i, i), (6 + i, nxt(i, -1)), (6 + i, nxt(i, 2))]
    return Graph.from_edges(13, edges)


def build_paley13() -> Graph:
    squares = {(x * x) % 13 for x in range(1, 13)}
    edges = [(a, b) for a in range(13) for b in range(a + 1, 13) if (b - a) % 13 in squares]
    return Graph.from_edges(13, edges)


def build_g18a() -> Graph:
    # (a, x) = 6a, (a, v_i) = 6a + i for a in Z_3, i in 1..5
    edges = []
    for a in range(3):
        edges.append((6 * a, 6 * ((a + 1) % 3)))
        for i in range(1, 6):
            edges += [(6 * a, 6 * a + i), (6 * a + i, 6 * a + i % 5 + 1)]
            for s in (-1, 1):
                for e in (-2, 2):
                    edges.append((6 * a + i, 6 * ((a + s) % 3) + (i - 1 + e) % 5 + 1))
    return Graph.from_edges(18, edges)


def build_g18b() -> Graph:
    # (a, i) = 9a + i for a in Z_2, i in Z_9
    edges = []
    for a in range(2):
        for i in range(9):
            edges += [(9 * a + i, 9 * a + (i + 1) % 9), (9 * a + i, 9 * a + (i + 2) % 9)]
    for i in range(9):
        edges += [(i, 9 + (2 * i + d) % 9) for d in (0, 4, 5)]
    return Graph.from_edges(18, edges)


def build_g16a() -> Graph:
    # v_1 = 0, v_2 = 1, (j, i) = 2 + 7(j - 1) + i for j in {1, 2}, i in Z_7
    edges = [(0, 1)]
    for j in (1, 2):
        base = 2 + 7 * (j - 1)
        for i in range(7):
            edges += [(j - 1, base + i), (base + i, base + (i + 1) % 7), (base + i, base + (i + 2) % 7)]
    for i in range(7):
        edges += [(2 + i, 9 + (2 * i + d) % 7) for d in (0, 1, -1, -3)]
    return Graph.from_edges(16, edges)


def build_g16b() -> Graph:
    # x = 0, u_i = 1 + i, v_j = 4 + j, z_{k,i} = 10 + 3k + i
    def z(k, i):
        return 10 + 3 * k + i % 3

    def v(j):
        return 4 + j % 6

    edges = []
    for j in range(6):
        edges += [(0, v(j)), (v(j), v(j + 1))]
    for i in range(3):
        edges.append((0, 1 + i))
        edges += [(z(0, i), z(1, j)) for j in range(3)]
        edges += [(1 + i, v(2 * i + d)) for d in (-1, 0, 1, 2)]
        edges += [(1 + i, z(k, i + s)) for k in (0, 1) for s in (-1, 1)]
        edges += [(z(0, i), v(2 * i + d)) for d in (0, 1, 2, 4)]
        edges += [(z(1, i), v(2 * i + d)) for d in (-1, 0, 1, 3)]
    return Graph.from_edges(16, edges)


def build_g15a() -> Graph:
    """
    x = 0, v_0 = 1, v_1 = 2, u_i = 3 + i, c_i = 7 + i, q_i = 11 + i for i in Z_4

    u_i ~ c_j unless j = i xor 1.
    """
    edges = [(0, w) for w in range(1, 11)]
    edges.append((1, 2))
    for k in range(2):
        edges += [(1 + k, 3 + i) for i in range(4)]
        edges += [(1 + k, w) for w in (7 + 2 * k, 8 + 2 * k, 11 + 2 * k, 12 + 2 * k)]
    edges += [(3, 5), (4, 6)]
    for i in range(4):
        edges.append((7 + i, 7 + (i + 1) % 4))
        for j in range(4):
            if j != i ^ 1:
                edges.append((3 + i, 7 + j))
            if j != i:
                edges += [(3 + i, 11 + j), (7 + i, 11 + j)]
            if j > i:
                edges.append((11 + i, 11 + j))
    return Graph.from_edges(15, edges)


def build_g15b() -> Graph:
    # q_i = i, first cycle c_i = 5 + i, second cycle d_i = 10 + i for i in Z_5
    edges = []
    for i in range(5):
        edges += [(i, j) for j in range(i + 1, 5)]
        edges += [(5 + i, 5 + (i + 1) % 5), (10 + i, 10 + (i + 1) % 5)]
        edges += [(5 + i, 10 + j) for j in range(5)]
        edges += [(i, 5 + (i + d) % 5) for d in (-1, 0, 1)]
        edges += [(i, 10 + (2 * i + d) % 5) for d in (-1, 0, 2)]
    return Graph.from_edges(15, edges)


def build_g16c() -> Graph:
    # q_{1,i} = i, q_{2,i} = 4 + i for i in Z_4, c_k = 8 + k for k in Z_8
    edges = []
    for k in range(2):
        edges += [(4 * k + i, 4 * k + j) for i in range(4) for j in range(i + 1, 4)]
    for a in range(8):
        edges += [(8 + a, 8 + b) for b in range(a + 2, 8) if (b - a) % 8 != 7]
    for i in range(4):
        edges += [(i, 8 + (2 * i + d) % 8) for d in (0, 1, 2, 3, 4, 5)]
        edges += [(4 + i, 8 + (2 * i + d) % 8) for d in (0, 1, 3, 4, 5, 6)]
        edges += [(i, 4 + (i + 1) % 4), (i, 4 + (i - 1) % 4)]
    return Graph.from_edges(16, edges)


def build_cayley17() -> Graph:
    return cayley_complement(CayleySpec(17, (1, 4)))


def _regular(n: int, d: int) -> Counter:
    return Counter({d: n})


def _sporadic(name, builder, r, n, degrees, stated=None) -> AtlasEntry:
    return AtlasEntry(name, builder, r, n, degrees, primitive=True, sporadic=True, stated_degrees=stated)


SPORADIC_ENTRIES: Tuple[AtlasEntry, ...] = (
    _sporadic('G10', build_g10, 4, 10, _regular(10, 5)),
    _sporadic('G12', build_g12, 4, 12, _regular(12, 6)),
    _sporadic('G13', build_g13, 4, 13, _regular(13, 6)),
    _sporadic('Paley13', build_paley13, 4, 13, _regular(13, 6)),
    _sporadic('G15A', build_g15a, 6, 15, _regular(15, 10)),
    _sporadic('G15B', build_g15b, 6, 15, _regular(15, 10)),
    _sporadic('G16A', build_g16a, 5, 16, Counter({8: 2, 9: 14})),
    _sporadic('G16B', build_g16b, 5, 16, _regular(16, 9)),
    _sporadic('G16C', build_g16c, 6, 16, _regular(16, 11), stated=_regular(16, 10)),
    _sporadic('G18A', build_g18a, 4, 18, _regular(18, 7)),
    _sporadic('G18B', build_g18b, 4, 18, _regular(18, 7)),
)


def ehm_entry(r: int, m: int) -> AtlasEntry:
    if r < 3 or m < 2:
        raise AtlasError(f"EHM needs r >= 3 and m >= 2, got EHM({r},{m})")
    k = r - 2
    degrees = Counter({k + m - 1: k, k: m})
    return AtlasEntry(f"EHM({r},{m})", lambda: ehm_graph(r, m), r, k + m, degrees, primitive=False)


def star_entry(m: int) -> AtlasEntry:
    if m < 2:
        raise AtlasError(f"Star needs m >= 2, got Star({m})")
    return AtlasEntry(f"Star({m})", lambda: star_graph(m), 3, m + 1,
                      Counter({m: 1, 1: m}), primitive=False)


def odd_cycle_complement_entry(r: int) -> AtlasEntry:
    if r < 3:
        raise AtlasError(f"OddCycleComplement needs r >= 3, got {r}")
    n = 2 * r - 1
    return AtlasEntry(f"OddCycleComplement({r})", lambda: odd_cycle_complement(r), r, n,
                      _regular(n, n - 3))


CLASSIC_ENTRIES: Tuple[AtlasEntry, ...] = (
    AtlasEntry('Cayley17', build_cayley17, 7, 17, _regular(17, 12), stated_degrees=_regular(17, 14)),
    AtlasEntry('C5', lambda: cycle_graph(5), 3, 5, _regular(5, 2)),
    AtlasEntry('Petersen', petersen_graph, 3, 10, _regular(10, 3)),
    odd_cycle_complement_entry(4),
    odd_cycle_complement_entry(5),
    ehm_entry(4, 5),
    star_entry(5),
)

_PARAMETERIZED: Dict[str, Tuple[int, Callable[..., AtlasEntry]]] = {
    'ehm': (2, ehm_entry),
    'star': (1, star_entry),
    'oddcyclecomplement': (1, odd_cycle_complement_entry),
}


def list_entries() -> List[AtlasEntry]:
    """Default entries: the sporadic constructions first, then classic ones."""
    return list(SPORADIC_ENTRIES) + list(CLASSIC_ENTRIES)


def get_entry(name: str) -> AtlasEntry:
    """
    Look up an entry by name

    Fixed names match case-insensitively; EHM(r,m), Star(m) and
    OddCycleComplement(r) accept any admissible parameters.

    Raises:
        AtlasError: If the name is unknown or its parameters are invalid
    """
    for entry in list_entries():
        if entry.name.lower() == name.strip().lower():
            return entry
    match = PARAMETERIZED_PATTERN.match(name)
    if match:
        key = match.group(1).lower()
        args = [int(x) for x in match.group(2).split(',')]
        if key in _PARAMETERIZED:
            arity, factory = _PARAMETERIZED[key]
            if len(args) != arity:
                raise AtlasError(f"{match.group(1)} takes {arity} parameter(s), got {len(args)}")
            return factory(*args)
    raise AtlasError(f"Unknown atlas entry: {name!r}")


def build(name: str) -> Graph:
    entry = get_entry(name)
    graph = entry.build()
    logger.debug(f"Built {entry.name}: n={graph.n}, {graph.edge_count()} edges")
    return graph


def _fails_at(graph: Graph, r: int) -> bool:
    if r < 2:
        return True
    try:
        return not saturation_verdict(graph, r).ok
    except GraphError:
        return True


def verify_entry(entry: AtlasEntry) -> EntryVerdict:
    verdict = EntryVerdict(entry.name, entry.expected_n, entry.expected_r, True)
    try:
        graph = entry.build()
        if graph.n != entry.expected_n:
            verdict.failures.append(f"order {graph.n} != {entry.expected_n}")
        degrees = graph.degree_multiset()
        if degrees != entry.expected_degrees:
            verdict.failures.append(f"degrees {dict(sorted(degrees.items()))} != "
                                    f"{dict(sorted(entry.expected_degrees.items()))}")
        if entry.stated_degrees is not None and entry.stated_degrees != degrees:
            verdict.notes.append(f"stated degrees {dict(sorted(entry.stated_degrees.items()))}, "
                                 f"constructed {dict(sorted(degrees.items()))}")
        check = saturation_verdict(graph, entry.expected_r, primitive=entry.primitive)
        if not check.ok:
            verdict.failures.append(check.reason)
        elif not entry.primitive and saturation_verdict(graph, entry.expected_r, primitive=True).ok:
            verdict.failures.append("expected a dominating vertex")
        for other in (entry.expected_r - 1, entry.expected_r + 1):
            if not _fails_at(graph, other):
                verdict.failures.append(f"also uniquely K_{other}-saturated")
    except Exception as e:
        logger.error(f"Atlas entry {entry.name} raised: {e}")
        verdict.failures.append(f"error: {e}")
    verdict.passed = not verdict.failures
    return verdict


def verify_all(entries: Optional[Iterable[AtlasEntry]] = None) -> AtlasReport:
    """
    Verify every entry and check that entries sharing (n, r) are pairwise
    non-isomorphic

    Returns:
        AtlasReport: one verdict per entry; never raises on entry failures
    """
    entries = list_entries() if entries is None else list(entries)
    verdicts = [verify_entry(entry) for entry in entries]

    forms: Dict[Tuple[int, int], List[Tuple[str, str]]] = {}
    for entry, verdict in zip(entries, verdicts):
        try:
            form = canonical_form(entry.build())
        except Exception as e:
            verdict.failures.append(f"error: {e}")
            verdict.passed = False
            continue
        key = (entry.expected_n, entry.expected_r)
        for other_name, other_form in forms.get(key, []):
            if other_form == form:
                verdict.failures.append(f"isomorphic to {other_name}")
                verdict.passed = False
        forms.setdefault(key, []).append((entry.name, form))

    report = AtlasReport(verdicts)
    for v in report.failures():
        logger.warning(f"Atlas entry {v.name} failed: {'; '.join(v.failures)}")
    for v in report.verdicts:
        for note in v.notes:
            logger.info(f"Atlas entry {v.name}: {note}")
    logger.info(report.summary())
    return report


def manifest(entries: Optional[Iterable[AtlasEntry]] = None) -> pd.DataFrame:
    rows = []
    for entry in (list_entries() if entries is None else entries):
        regular = len(entry.expected_degrees) == 1
        rows.append({'name': entry.name, 'n': entry.expected_n, 'r': entry.expected_r,
                     'regularity': 'regular' if regular else 'irregular'})
    return pd.DataFrame(rows, columns=['name', 'n', 'r', 'regularity'])


def export(directory: str, entries: Optional[Iterable[AtlasEntry]] = None) -> List[str]:
    """
    Write <name>.g6 for each entry plus manifest.tsv

    Returns:
        list: paths written, manifest last
    """
    entries = list_entries() if entries is None else list(entries)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for entry in entries:
        path = os.path.join(directory, f"{entry.name}.g6")
        with open(path, 'w', encoding='ascii') as f:
            f.write(graph6_encode(entry.build()) + '\n')
        paths.append(path)
    manifest_path = os.path.join(directory, 'manifest.tsv')
    manifest(entries).to_csv(manifest_path, sep='\t', index=False)
    paths.append(manifest_path)
    logger.info(f"Exported {len(entries)} atlas entries to {directory}")
    return paths
