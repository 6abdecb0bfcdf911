"""
Symmetry Service
Canonical labeling and automorphism groups by individualization-refinement

Trigraphs are encoded as a two-layer vertex-colored graph: vertex v becomes
v (layer 0) and n + v (layer 1) joined by a rung; black pairs are edges in
layer 0, gray pairs are edges in layer 1, white pairs are absent.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from models import Graph, Trigraph, bits_of, mask_of
from services.graph6_service import graph6_encode
from services.group_service import (PairOrbit, Permutation, PermutationGroup,
                                    UnionFind, pair_orbits)

logger = logging.getLogger(__name__)


class SymmetryError(Exception):
    """Computed permutation is not an automorphism"""
    pass


class LabelingEngine:
    """
    Search tree over ordered partitions

    Every node refines its partition to an equitable one; leaves are discrete
    partitions whose relabeled adjacency rows form a certificate. Equal
    certificates yield automorphisms, the least certificate is the canonical
    form. Subtrees are pruned by orbits of the automorphisms found so far
    that fix the current prefix pointwise.
    """

    def __init__(self, rows: Sequence[int], cells: Sequence[Sequence[int]]):
        self.rows = tuple(rows)
        self.n = len(self.rows)
        self.initial = [sorted(cell) for cell in cells if cell]
        self.generators: List[Tuple[int, ...]] = []
        self.leaves = 0
        self.first_lab = self.first_cert = self.first_path = None
        self.best_lab = self.best_cert = self.best_path = None

    def run(self) -> 'LabelingEngine':
        self._search(self._refine(self.initial), [])
        logger.debug(f"Labeling of {self.n} vertices: {self.leaves} leaves, "
                     f"{len(self.generators)} generators")
        return self

    def _refine(self, cells: List[List[int]]) -> List[List[int]]:
        rows = self.rows
        cells = [list(cell) for cell in cells]
        changed = True
        while changed:
            changed = False
            s = 0
            while s < len(cells):
                splitter = mask_of(cells[s])
                refined = []
                for cell in cells:
                    if len(cell) == 1:
                        refined.append(cell)
                        continue
                    buckets = {}
                    for v in cell:
                        buckets.setdefault((rows[v] & splitter).bit_count(), []).append(v)
                    if len(buckets) == 1:
                        refined.append(cell)
                    else:
                        refined.extend(buckets[count] for count in sorted(buckets))
                        changed = True
                cells = refined
                s += 1
        return cells

    @staticmethod
    def _target_cell(cells: List[List[int]]) -> Optional[int]:
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) > len(cells[target])):
                target = i
        return target

    def _fixing_orbits(self, path: List[int]) -> UnionFind:
        uf = UnionFind(self.n)
        for g in self.generators:
            if all(g[v] == v for v in path):
                for v in range(self.n):
                    uf.union(v, g[v])
        return uf

    def _search(self, cells: List[List[int]], path: List[int]) -> Optional[int]:
        """Returns the level to backjump to, or None."""
        target = self._target_cell(cells)
        if target is None:
            return self._leaf(cells, path)

        level = len(path)
        tried = []
        for v in sorted(cells[target]):
            if tried:
                uf = self._fixing_orbits(path)
                if any(uf.find(v) == uf.find(w) for w in tried):
                    continue
            rest = [w for w in cells[target] if w != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            jump = self._search(self._refine(child), path + [v])
            tried.append(v)
            if jump is not None and jump < level:
                return jump
        return None

    def _certificate(self, lab: List[int]) -> Tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        return tuple(mask_of(pos[u] for u in bits_of(self.rows[v])) for v in lab)

    def _leaf(self, cells: List[List[int]], path: List[int]) -> Optional[int]:
        lab = [cell[0] for cell in cells]
        cert = self._certificate(lab)
        self.leaves += 1
        if self.first_cert is None:
            self.first_lab = self.best_lab = lab
            self.first_cert = self.best_cert = cert
            self.first_path = self.best_path = list(path)
            return None
        if cert == self.first_cert:
            self._add_automorphism(self.first_lab, lab)
            return _common_prefix(path, self.first_path)
        if cert == self.best_cert:
            self._add_automorphism(self.best_lab, lab)
            return _common_prefix(path, self.best_path)
        if cert < self.best_cert:
            self.best_lab, self.best_cert, self.best_path = lab, cert, list(path)
        return None

    def _add_automorphism(self, source: List[int], target: List[int]):
        images = [0] * self.n
        for a, b in zip(source, target):
            images[a] = b
        self.generators.append(tuple(images))

    def canonical_rows(self) -> Tuple[int, ...]:
        return self.best_cert


def _common_prefix(a: List[int], b: List[int]) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


def layered_rows(trigraph: Trigraph) -> List[int]:
    n = trigraph.n
    rows = [0] * (2 * n)
    for v in range(n):
        rows[v] = trigraph.black[v] | (1 << (n + v))
        rows[n + v] = (trigraph.gray_row(v) << n) | (1 << v)
    return rows


def _preserves_colors(trigraph: Trigraph, perm: Permutation) -> bool:
    for v in range(trigraph.n):
        image = perm(v)
        if perm.apply_mask(trigraph.black[v]) != trigraph.black[image]:
            return False
        if perm.apply_mask(trigraph.white[v]) != trigraph.white[image]:
            return False
    return True


def automorphism_group(trigraph: Trigraph) -> PermutationGroup:
    """
    Color-preserving automorphism group of a trigraph

    Returns:
        PermutationGroup: Generators found by the labeling engine on the
        layered encoding, restricted to layer 0

    Raises:
        SymmetryError: If a generator fails to preserve pair colors
    """
    n = trigraph.n
    engine = LabelingEngine(layered_rows(trigraph), [range(n), range(n, 2 * n)]).run()
    gens = []
    for images in engine.generators:
        perm = Permutation(images[:n])
        if not _preserves_colors(trigraph, perm):
            raise SymmetryError(f"Generator {perm.cycles()} does not preserve pair colors")
        gens.append(perm)
    return PermutationGroup(n, gens)


def graph_automorphism_group(graph: Graph) -> PermutationGroup:
    return automorphism_group(Trigraph.from_graph(graph))


def gray_pair_orbits(trigraph: Trigraph, group: PermutationGroup) -> List[PairOrbit]:
    """Partition of the gray pairs into orbits, ordered by representative."""
    return pair_orbits(group, trigraph.gray_pairs())


def canonical_graph(graph: Graph) -> Graph:
    engine = LabelingEngine(graph.adj, [range(graph.n)]).run()
    return Graph(graph.n, engine.canonical_rows())


def canonical_form(graph: Graph) -> str:
    """graph6 text of the canonical relabeling; equal exactly for isomorphic graphs."""
    return graph6_encode(canonical_graph(graph))
