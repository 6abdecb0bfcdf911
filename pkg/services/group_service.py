"""
Group Service
Permutations, generator-based permutation groups, a deterministic
Schreier-Sims stabilizer chain, and union-find orbit computations
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from models import Pair, VertexSet, bits_of

logger = logging.getLogger(__name__)


class GroupError(Exception):
    """Invalid permutation or group data"""
    pass


def _mult(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """p then q."""
    return tuple(q[i] for i in p)


def _inv(p: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _is_identity(p: Sequence[int]) -> bool:
    return all(i == j for i, j in enumerate(p))


@dataclass(frozen=True)
class Permutation:
    """Bijection on 0..n-1; images[v] is the image of v"""
    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise GroupError(f"Not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> 'Permutation':
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> 'Permutation':
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v]

    def then(self, other: 'Permutation') -> 'Permutation':
        return Permutation(_mult(self.images, other.images))

    def inverse(self) -> 'Permutation':
        return Permutation(_inv(self.images))

    def is_identity(self) -> bool:
        return _is_identity(self.images)

    def apply_mask(self, mask: int) -> int:
        images = self.images
        out = 0
        for v in bits_of(mask):
            out |= 1 << images[v]
        return out

    def apply_pair(self, pair: Pair) -> Pair:
        return Pair.of(self.images[pair.u], self.images[pair.v])

    def cycles(self) -> str:
        seen = set()
        out = []
        for i in range(self.n):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.images[j]
            out.append('(' + ' '.join(map(str, cycle)) + ')')
        return ''.join(out) or '()'


class _StabilizerChain:
    """Schreier-Sims chain: transversal of one base point plus the chain of its stabilizer"""

    def __init__(self, n: int):
        self.n = n
        self.base_point: Optional[int] = None
        self.gens: List[Tuple[int, ...]] = []
        self.transversal: Dict[int, Tuple[int, ...]] = {}
        self.stab: Optional['_StabilizerChain'] = None

    def generators(self) -> List[Tuple[int, ...]]:
        if self.stab is None:
            return list(self.gens)
        return self.stab.generators() + self.gens

    def order(self) -> int:
        if self.base_point is None:
            return 1
        return len(self.transversal) * self.stab.order()

    def sift(self, p: Tuple[int, ...]) -> Tuple[int, ...]:
        if self.base_point is None:
            return p
        x = p[self.base_point]
        if x not in self.transversal:
            return p
        return self.stab.sift(_mult(p, _inv(self.transversal[x])))

    def add_gen(self, p: Tuple[int, ...]) -> bool:
        """Add p; False if it was already a member."""
        residue = self.sift(p)
        if _is_identity(residue):
            return False
        self._add_nonmember(residue)
        return True

    def _add_nonmember(self, p: Tuple[int, ...]):
        if self.base_point is None:
            self.base_point = next(i for i, j in enumerate(p) if i != j)
            self.stab = _StabilizerChain(self.n)

        if p[self.base_point] == self.base_point:
            self.stab._add_nonmember(p)
        else:
            self.gens.append(p)

        self._rebuild_orbit()
        self._add_all_schreier_gens()

    def _rebuild_orbit(self):
        identity = tuple(range(self.n))
        self.transversal = {self.base_point: identity}
        queue = [self.base_point]
        gens = self.generators()
        for x in queue:
            for g in gens:
                y = g[x]
                if y not in self.transversal:
                    self.transversal[y] = _mult(self.transversal[x], g)
                    queue.append(y)

    def _add_all_schreier_gens(self):
        for g in self.generators():
            for x in sorted(self.transversal):
                h = _mult(_mult(self.transversal[x], g), _inv(self.transversal[g[x]]))
                self.stab.add_gen(h)


class PermutationGroup:
    """Group given by generators on 0..n-1"""

    def __init__(self, n: int, generators: Iterable[Permutation] = ()):
        self.n = n
        gens = []
        seen = set()
        for g in generators:
            if g.n != n:
                raise GroupError(f"Generator of degree {g.n} in a group of degree {n}")
            if g.is_identity() or g.images in seen:
                continue
            seen.add(g.images)
            gens.append(g)
        self.generators: List[Permutation] = gens
        self._chain: Optional[_StabilizerChain] = None

    def __repr__(self):
        return f"<PermutationGroup n={self.n} generators={len(self.generators)}>"

    def is_trivial(self) -> bool:
        return not self.generators

    def chain(self) -> _StabilizerChain:
        if self._chain is None:
            chain = _StabilizerChain(self.n)
            for g in self.generators:
                chain.add_gen(g.images)
            self._chain = chain
        return self._chain

    def order(self) -> int:
        return self.chain().order()

    def contains(self, perm: Permutation) -> bool:
        if perm.n != self.n:
            return False
        return _is_identity(self.chain().sift(perm.images))

    def orbits(self) -> List[Tuple[int, ...]]:
        """Vertex orbits, each sorted, ordered by least element."""
        found = find_orbits(self.generators, list(range(self.n)), lambda g, v: g(v))
        return sorted(tuple(members) for members in found.values())


def trivial_group(n: int) -> PermutationGroup:
    return PermutationGroup(n)


def symmetric_group(n: int) -> PermutationGroup:
    if n < 2:
        return PermutationGroup(n)
    return PermutationGroup(n, [Permutation.from_cycles(n, [(0, 1)]),
                                Permutation.from_cycles(n, [tuple(range(n))])])


def dihedral_group(n: int) -> PermutationGroup:
    rotation = Permutation(tuple((i + 1) % n for i in range(n)))
    reflection = Permutation(tuple((-i) % n for i in range(n)))
    return PermutationGroup(n, [rotation, reflection])


def group_order(group: PermutationGroup) -> int:
    return group.order()


class UnionFind:
    """Union-find whose class representative is the least element index"""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if y < x:
            x, y = y, x
        self.parent[y] = x


def find_orbits(gens: Sequence[Permutation], space: Sequence[Hashable],
                action: Callable[[Permutation, Hashable], Hashable]) -> Dict[Hashable, List[Hashable]]:
    """
    Orbits of a general group action by union-find over generator images

    Returns:
        dict: first element of each orbit (in space order) -> members in space order
    """
    index = {x: i for i, x in enumerate(space)}
    uf = UnionFind(len(space))
    for g in gens:
        for i, x in enumerate(space):
            y = action(g, x)
            if y not in index:
                raise GroupError(f"Action maps {x!r} outside the orbit space")
            uf.union(i, index[y])
    orbits: Dict[Hashable, List[Hashable]] = {}
    for i, x in enumerate(space):
        orbits.setdefault(space[uf.find(i)], []).append(x)
    return orbits


@dataclass(frozen=True)
class PairOrbit:
    members: Tuple[Pair, ...]
    representative: Pair = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(sorted(self.members)))
        object.__setattr__(self, 'representative', self.members[0])

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class SubsetOrbit:
    representative: VertexSet
    size: int


def pair_orbits(group: PermutationGroup, pairs: Sequence[Pair]) -> List[PairOrbit]:
    """Orbits of group on a closed set of pairs, ordered by representative."""
    space = sorted(pairs)
    found = find_orbits(group.generators, space, lambda g, p: g.apply_pair(p))
    return sorted((PairOrbit(tuple(members)) for members in found.values()),
                  key=lambda orbit: orbit.representative)


def pair_stabilizer(group: PermutationGroup, pair: Pair) -> PermutationGroup:
    """
    Setwise stabilizer of a pair

    Schreier generators from the pair's orbit transversal, kept only when
    they are not already in the group generated so far.
    """
    n = group.n
    identity = tuple(range(n))
    gens = [g.images for g in group.generators]

    def act(p, q: Pair) -> Pair:
        return Pair.of(p[q.u], p[q.v])

    transversal = {pair: identity}
    queue = [pair]
    for q in queue:
        for g in gens:
            image = act(g, q)
            if image not in transversal:
                transversal[image] = _mult(transversal[q], g)
                queue.append(image)

    chain = _StabilizerChain(n)
    kept = []
    for q in queue:
        for g in gens:
            h = _mult(_mult(transversal[q], g), _inv(transversal[act(g, q)]))
            if not _is_identity(h) and chain.add_gen(h):
                kept.append(Permutation(h))
    logger.debug(f"Stabilizer of {pair}: orbit {len(queue)}, {len(kept)} generators")
    return PermutationGroup(n, kept)


def subset_orbit_representatives(group: PermutationGroup, ground: VertexSet, k: int) -> List[SubsetOrbit]:
    """
    Orbits of k-subsets of ground under group

    Raises:
        GroupError: If a generator does not map ground onto itself
    """
    if k > len(ground):
        raise GroupError(f"Subset size {k} exceeds ground set size {len(ground)}")
    for g in group.generators:
        if g.apply_mask(ground.bits) != ground.bits:
            raise GroupError("Generator does not preserve the ground set")

    space = [sum(1 << v for v in combo) for combo in combinations(ground.members(), k)]
    found = find_orbits(group.generators, space, lambda g, m: g.apply_mask(m))
    return [SubsetOrbit(VertexSet(rep), len(members)) for rep, members in found.items()]
