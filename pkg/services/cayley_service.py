"""
Cayley Service
Circulant Cayley complements on Z_n: construction, clique number,
r-primitivity checks, generator-set scans, the two infinite families and
block/frame analysis of their unique cliques
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum, unique
from itertools import combinations
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd
from joblib import Parallel, delayed

from config import Config
from models import Graph, MAX_ORDER, VertexSet
from services.clique_service import completion_count, maximum_clique_within
from services.group_service import Permutation

logger = logging.getLogger(__name__)

SPEC_PATTERN = re.compile(r'^\s*n\s*=\s*(\d+)\s*;\s*S\s*=\s*([\d,\s]+)$')


class CayleyError(Exception):
    """Invalid Cayley specification or family data"""
    pass


class _WindowOverflow(Exception):
    pass


@dataclass(frozen=True)
class CayleySpec:
    """Modulus n and generators S; x ~ y iff (x - y) mod n avoids +-S"""
    n: int
    S: Tuple[int, ...]

    def __post_init__(self):
        gens = tuple(sorted(set(self.S)))
        if len(gens) != len(tuple(self.S)):
            raise CayleyError(f"Generators must be distinct: {self.S}")
        object.__setattr__(self, 'S', gens)
        if not 3 <= self.n <= MAX_ORDER:
            raise CayleyError(f"Modulus must be in 3..{MAX_ORDER}, got {self.n}")
        if not gens:
            raise CayleyError("Generator set is empty")
        for s in gens:
            if not 1 <= s <= self.n // 2:
                raise CayleyError(f"Generator {s} outside 1..{self.n // 2} for n = {self.n}")

    @classmethod
    def parse(cls, text: str) -> 'CayleySpec':
        """Parse 'n=17;S=1,4'."""
        match = SPEC_PATTERN.match(text)
        if not match:
            raise CayleyError(f"Cannot parse Cayley spec {text!r}; expected 'n=17;S=1,4'")
        try:
            gens = tuple(int(tok) for tok in match.group(2).split(',') if tok.strip())
        except ValueError as e:
            raise CayleyError(f"Bad generator list in {text!r}: {e}")
        return cls(int(match.group(1)), gens)

    def __str__(self):
        return f"n={self.n};S={self.generator_text()}"

    def generator_text(self) -> str:
        return ','.join(str(s) for s in self.S)

    @property
    def is_scan_admissible(self) -> bool:
        return self.n >= 2 * max(self.S) + 1

    def differences(self) -> frozenset:
        return frozenset(d for s in self.S for d in (s % self.n, (-s) % self.n))

    @property
    def degree(self) -> int:
        return self.n - 1 - len(self.differences())


@unique
class FamilyKind(Enum):
    TWO = 'two'
    THREE = 'three'


@dataclass(frozen=True)
class FamilyInstance:
    kind: FamilyKind
    t: int
    n: int
    r: int
    S: Tuple[int, ...]

    @property
    def spec(self) -> CayleySpec:
        return CayleySpec(self.n, self.S)


def family_instance(kind: FamilyKind, t: int) -> FamilyInstance:
    """
    Parameters of a family member

    Raises:
        CayleyError: If t < 2
    """
    if t < 2:
        raise CayleyError(f"Family parameter t must be at least 2, got {t}")
    if kind is FamilyKind.TWO:
        return FamilyInstance(kind, t, 4 * t * t + 1, 2 * t * t - t + 1, (1, 2 * t))
    return FamilyInstance(kind, t, 9 * t * t - 3 * t + 1, 3 * t * t - 2 * t + 1, (1, 3 * t - 1, 3 * t))


def family_table(kind: FamilyKind, ts: Iterable[int]) -> pd.DataFrame:
    rows = []
    for t in ts:
        inst = family_instance(kind, t)
        rows.append({'t': t, 'S': inst.spec.generator_text(), 'r': inst.r, 'n': inst.n})
    return pd.DataFrame(rows, columns=['t', 'S', 'r', 'n'])


def _rotate(mask: int, x: int, n: int) -> int:
    x %= n
    full = (1 << n) - 1
    return ((mask << x) | (mask >> (n - x))) & full


def cayley_complement(spec: CayleySpec) -> Graph:
    diffs = spec.differences()
    base = sum(1 << d for d in range(1, spec.n) if d not in diffs)
    return Graph(spec.n, tuple(_rotate(base, x, spec.n) for x in range(spec.n)))


def circulant_window_scan(spec: CayleySpec, forced: Optional[int] = None,
                          state_limit: Optional[int] = None) -> Tuple[int, int, int]:
    """
    Largest cliques of the complement that contain 0

    Dynamic program over positions 1..n-1 whose state is the chosen set on
    the first max(S) positions and on the last max(S) positions. With forced
    = i the set must contain i and the pair {0, i} counts as adjacent, which
    models the complement plus the edge {0, i}.

    Returns:
        (size, count, witness): maximum size, number of sets of that size and
        the bit mask of one of them

    Raises:
        _WindowOverflow: If the state set exceeds state_limit
    """
    n, gens = spec.n, spec.S
    width = max(gens)
    window_mask = (1 << width) - 1

    def allowed(a, b):
        return forced is not None and a == 0 and b == forced

    states: Dict[Tuple[int, int], Tuple[int, int, int]] = {(1, 1): (1, 1, 1)}
    for p in range(1, n):
        must = p == forced
        nxt: Dict[Tuple[int, int], Tuple[int, int, int]] = {}

        def merge(key, size, count, witness):
            current = nxt.get(key)
            if current is None or size > current[0]:
                nxt[key] = (size, count, witness)
            elif size == current[0]:
                nxt[key] = (size, current[1] + count, current[2])

        for (first, window), (size, count, witness) in states.items():
            if not must:
                merge((first, (window << 1) & window_mask), size, count, witness)
            ok = True
            for s in gens:
                if (window >> (s - 1)) & 1 and not allowed(p - s, p):
                    ok = False
                    break
                q = p + s - n
                if q >= 0 and (first >> q) & 1 and not allowed(q, p):
                    ok = False
                    break
            if ok:
                grown_first = first | (1 << p) if p < width else first
                merge((grown_first, ((window << 1) | 1) & window_mask), size + 1, count, witness | (1 << p))
        states = nxt
        if state_limit is not None and len(states) > state_limit:
            raise _WindowOverflow(f"{len(states)} states at position {p}")

    best = max(size for size, _, _ in states.values())
    count = sum(c for size, c, _ in states.values() if size == best)
    witness = next(w for size, _, w in states.values() if size == best)
    return best, count, witness


def _state_limit(state_limit: Optional[int]) -> int:
    return Config.CAYLEY_WINDOW_STATE_LIMIT if state_limit is None else state_limit


def circulant_clique_number(spec: CayleySpec, method: str = 'auto',
                            state_limit: Optional[int] = None) -> int:
    """Clique number of the complement; vertex transitivity lets every maximum clique contain 0."""
    if method in ('auto', 'window'):
        try:
            return circulant_window_scan(spec, state_limit=_state_limit(state_limit))[0]
        except _WindowOverflow as e:
            if method == 'window':
                raise CayleyError(f"Window scan overflow for {spec}: {e}")
            logger.info(f"Window scan overflow for {spec} ({e}); using branch and bound")
    graph = cayley_complement(spec)
    return 1 + maximum_clique_within(graph.adj, graph.adj[0]).bit_count()


def pair_clique_count(spec: CayleySpec, i: int, r: int, cap: Optional[int] = None,
                      method: str = 'auto', state_limit: Optional[int] = None) -> int:
    """Number of r-cliques of the complement plus the edge {0, i}, assuming it is K_r-free."""
    if method in ('auto', 'window'):
        try:
            size, count, _ = circulant_window_scan(spec, forced=i, state_limit=_state_limit(state_limit))
            found = count if size == r else 0
            return found if cap is None else min(found, cap)
        except _WindowOverflow as e:
            if method == 'window':
                raise CayleyError(f"Window scan overflow for {spec}: {e}")
            logger.info(f"Window scan overflow for {spec} at i = {i}; using branch and bound")
    graph = cayley_complement(spec)
    return completion_count(graph.adj, 0, i, r, cap)


def check_cayley_primitive(spec: CayleySpec, method: str = 'auto',
                           state_limit: Optional[int] = None) -> Optional[int]:
    """
    r-primitivity of a circulant complement

    Every non-edge is a translate of some {0, i} with i in S, so it is enough
    to compute r = omega + 1 and find exactly one r-clique in G + {0, i} for
    each generator.

    Returns:
        Optional[int]: r when the complement is r-primitive, else None
    """
    omega = circulant_clique_number(spec, method, state_limit)
    r = omega + 1
    for i in spec.S:
        if pair_clique_count(spec, i, r, cap=2, method=method, state_limit=state_limit) != 1:
            logger.debug(f"{spec}: pair {{0,{i}}} does not have a unique {r}-clique")
            return None
    logger.debug(f"{spec}: {r}-primitive")
    return r


def unique_pair_clique(spec: CayleySpec, i: int, r: int,
                       state_limit: Optional[int] = None) -> Optional[VertexSet]:
    """The r-clique of G + {0, i} when it is unique, else None."""
    size, count, witness = circulant_window_scan(spec, forced=i, state_limit=_state_limit(state_limit))
    if size != r or count != 1:
        return None
    return VertexSet(witness)


def _scan_task(n: int, gens: Tuple[int, ...], state_limit: int) -> Tuple[int, Tuple[int, ...], Optional[int]]:
    return n, gens, check_cayley_primitive(CayleySpec(n, gens), state_limit=state_limit)


def scan_generator_sets(g: int, max_gen: int, n_range: Iterable[int],
                        only: Optional[Iterable[Sequence[int]]] = None,
                        workers: int = 1, state_limit: Optional[int] = None) -> List[Tuple[CayleySpec, int]]:
    """
    Circulant complements that are r-primitive

    Args:
        g: Number of generators
        max_gen: Largest generator considered
        n_range: Moduli to try; only n >= 2 max(S) + 1 are checked
        only: Restrict to these generator sets
        workers: joblib worker count

    Returns:
        list: (spec, r) sorted by generator set then modulus
    """
    if g < 1:
        raise CayleyError(f"Generator count must be at least 1, got {g}")
    if only is not None:
        sets = sorted({tuple(sorted(s)) for s in only if len(set(s)) == g})
    else:
        sets = [(1,) + rest for rest in combinations(range(2, max_gen + 1), g - 1)]
    limit = _state_limit(state_limit)
    tasks = [(n, gens) for gens in sets for n in n_range if n >= 2 * max(gens) + 1]
    logger.info(f"Scanning {len(sets)} generator sets over {len(tasks)} (S, n) pairs")

    if workers <= 1:
        outcomes = [_scan_task(n, gens, limit) for n, gens in tasks]
    else:
        outcomes = Parallel(n_jobs=workers)(delayed(_scan_task)(n, gens, limit) for n, gens in tasks)

    hits = [(CayleySpec(n, gens), r) for n, gens, r in outcomes if r is not None]
    hits.sort(key=lambda hit: (len(hit[0].S), hit[0].S, hit[0].n))
    for spec, r in hits:
        logger.info(f"Scan hit {spec} r={r}")
    return hits


def scan_table(hits: Sequence[Tuple[CayleySpec, int]]) -> pd.DataFrame:
    rows = [{'g': len(spec.S), 'S': spec.generator_text(), 'r': r, 'n': spec.n} for spec, r in hits]
    return pd.DataFrame(rows, columns=['g', 'S', 'r', 'n'])


def predicted_unique_clique(inst: FamilyInstance) -> VertexSet:
    """
    Block structure of the unique clique of G + {0, 1}

    Two family: a 1-block then 2-blocks, with 3-blocks at indices
    t + (j - 1)(t - 1) for j = 1..2t. Three family: a 1-block then 3-blocks,
    with 4-blocks at the same indices for j = 1..3t.

    Raises:
        CayleyError: If the constructed set is not an r-clique of G + {0, 1}
    """
    t = inst.t
    if inst.kind is FamilyKind.TWO:
        base, specials = 2, 2 * t
    else:
        base, specials = 3, 3 * t
    special = {t + (j - 1) * (t - 1) for j in range(1, specials + 1)}
    sizes = [1] + [base + 1 if k in special else base for k in range(1, inst.r)]
    if sum(sizes) != inst.n:
        raise CayleyError(f"Block sizes sum to {sum(sizes)}, expected {inst.n}")

    points = [0]
    for size in sizes[:-1]:
        points.append(points[-1] + size)
    clique = VertexSet.of(points)

    graph = cayley_complement(inst.spec).add_edge(0, 1)
    for a, b in combinations(points, 2):
        if not graph.has_edge(a, b):
            raise CayleyError(f"Predicted set is not a clique: {a} and {b} are not adjacent")
    return clique


@dataclass(frozen=True)
class BlockDecomposition:
    """Cyclic gaps of a residue set; block k runs from x_k up to x_{k+1} - 1"""
    X: Tuple[int, ...]
    n: int
    t: int
    blocks: Tuple[int, ...]

    def sigma(self, start: int, length: Optional[int] = None) -> int:
        """Elements covered by length consecutive blocks from start (default t)."""
        length = self.t if length is None else length
        m = len(self.blocks)
        return sum(self.blocks[(start + k) % m] for k in range(length))

    def frames(self) -> List[Tuple[int, ...]]:
        m = len(self.blocks)
        return [tuple(self.blocks[(j + k) % m] for k in range(self.t)) for j in range(m)]

    def frame_sums(self) -> List[int]:
        return [self.sigma(j) for j in range(len(self.blocks))]


def block_decomposition(X: VertexSet, n: int, t: int) -> BlockDecomposition:
    points = X.members()
    if not points:
        raise CayleyError("Block decomposition needs a nonempty set")
    if points[-1] >= n:
        raise CayleyError(f"Residue {points[-1]} outside Z_{n}")
    blocks = tuple((points[(k + 1) % len(points)] - points[k]) % n or n for k in range(len(points)))
    return BlockDecomposition(points, n, t, blocks)


def check_sigma_constraint(bd: BlockDecomposition, S: Iterable[int], strict: bool = False) -> bool:
    """
    No frame of t consecutive blocks covers a number of elements in S

    In strict mode every run of 1..t consecutive blocks is checked.
    """
    gens = set(S)
    lengths = range(1, bd.t + 1) if strict else (bd.t,)
    return not any(bd.sigma(j, length) in gens for length in lengths for j in range(len(bd.blocks)))


def min_frame_sum(bd: BlockDecomposition) -> int:
    return min(bd.frame_sums())


def multiplier_automorphism(spec: CayleySpec, m: int) -> Permutation:
    """
    The map x -> m x mod n as an automorphism of the complement

    Raises:
        CayleyError: If m is not a unit or the map does not preserve adjacency
    """
    n = spec.n
    if gcd(m % n, n) != 1:
        raise CayleyError(f"Multiplier {m} is not a unit mod {n}")
    perm = Permutation(tuple((m * x) % n for x in range(n)))
    graph = cayley_complement(spec)
    for x in range(n):
        if perm.apply_mask(graph.adj[x]) != graph.adj[perm(x)]:
            raise CayleyError(f"x -> {m}x does not preserve adjacency of {spec}")
    return perm
