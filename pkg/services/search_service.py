"""
Search Service
Exhaustive orbital-branching search for uniquely K_r-saturated graphs over
trigraphs, with job splitting and prefix replay for parallel runs
"""

import logging
from dataclasses import asdict, dataclass, fields
from enum import Enum, unique
from itertools import combinations
from typing import Iterable, List, Optional, Set, Tuple

from config import Config
from models import Graph, GraphError, Pair, PairColor, Trigraph, VertexSet
from services.clique_service import cliques_within, count_cliques_within
from services.group_service import (PairOrbit, pair_stabilizer,
                                    subset_orbit_representatives)
from services.saturation_service import has_dominating_vertex, saturation_verdict
from services.symmetry_service import (automorphism_group, canonical_form,
                                       gray_pair_orbits)

logger = logging.getLogger(__name__)

ROOT_TOKEN = 'ROOT'


class SearchError(Exception):
    """Search configuration or soundness error"""
    pass


class StalePrefixError(SearchError):
    """Job prefix does not replay against this configuration"""
    pass


class JobFormatError(SearchError):
    """Unparsable job or checkpoint text"""
    pass


@dataclass(frozen=True)
class SearchConfig:
    n: int
    r: int
    primitive_only: bool = False
    max_depth_for_split: int = 3
    count_cap: bool = True

    def __post_init__(self):
        if not 3 <= self.r <= self.n <= Config.MAX_SEARCH_ORDER:
            raise SearchError(f"Search requires 3 <= r <= n <= {Config.MAX_SEARCH_ORDER}, "
                              f"got n = {self.n}, r = {self.r}")
        if self.max_depth_for_split < 0:
            raise SearchError("max_depth_for_split must be non-negative")


@unique
class DecisionKind(Enum):
    WHITE = 'W'
    BLACK = 'B'


@dataclass(frozen=True)
class BranchDecision:
    """White representative with a completion-orbit index, or whole orbit black"""
    kind: DecisionKind
    pair: Pair
    orbit_index: Optional[int] = None

    def token(self) -> str:
        if self.kind is DecisionKind.WHITE:
            return f"W:{self.pair.token()}:{self.orbit_index}"
        return f"B:{self.pair.token()}"

    @classmethod
    def parse(cls, token: str) -> 'BranchDecision':
        parts = token.strip().split(':')
        try:
            u, v = (int(x) for x in parts[1].split('-'))
            pair = Pair(u, v)
            if parts[0] == 'W' and len(parts) == 3:
                index = int(parts[2])
                if index < 0:
                    raise ValueError("negative orbit index")
                return cls(DecisionKind.WHITE, pair, index)
            if parts[0] == 'B' and len(parts) == 2:
                return cls(DecisionKind.BLACK, pair)
        except (IndexError, ValueError, GraphError) as e:
            raise JobFormatError(f"Bad decision token {token!r}: {e}")
        raise JobFormatError(f"Bad decision token {token!r}")


@dataclass(frozen=True)
class SearchJob:
    prefix: Tuple[BranchDecision, ...] = ()

    def to_line(self) -> str:
        if not self.prefix:
            return ROOT_TOKEN
        return ','.join(d.token() for d in self.prefix)

    @classmethod
    def from_line(cls, line: str) -> 'SearchJob':
        line = line.strip()
        if not line:
            raise JobFormatError("Empty job line")
        if line == ROOT_TOKEN:
            return cls()
        return cls(tuple(BranchDecision.parse(tok) for tok in line.split(',')))


@dataclass
class SearchStats:
    nodes_visited: int = 0
    constraint_failures_c1: int = 0
    constraint_failures_c2: int = 0
    outputs: int = 0
    duplicates: int = 0
    propagations: int = 0
    branch_white: int = 0
    branch_black: int = 0
    jobs: int = 0

    def merge(self, other: 'SearchStats') -> 'SearchStats':
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        return ' '.join(f"{k}={v}" for k, v in self.as_dict().items())


def check_c1(trigraph: Trigraph, r: int) -> bool:
    """No black r-clique."""
    full = (1 << trigraph.n) - 1
    return count_cliques_within(trigraph.black, full, r, cap=1) == 0


def check_c2(trigraph: Trigraph, r: int, exact: bool = False) -> bool:
    """Every pair, of any color, has at most one black K_r-completion."""
    black = trigraph.black
    k = r - 2
    cap = None if exact else 2
    for u in range(trigraph.n):
        for v in range(u + 1, trigraph.n):
            cand = black[u] & black[v] & ~((1 << u) | (1 << v))
            if cand.bit_count() < k:
                continue
            if count_cliques_within(black, cand, k, cap) > 1:
                return False
    return True


def _has_completion(trigraph: Trigraph, pair: Pair, r: int) -> bool:
    black = trigraph.black
    cand = black[pair.u] & black[pair.v] & ~pair.mask
    return bool(cliques_within(black, cand, r - 2, limit=1))


def propagate_c3(trigraph: Trigraph, r: int) -> Trigraph:
    """Whiten every gray pair that already has a black K_r-completion."""
    forced = [p for p in trigraph.gray_pairs() if _has_completion(trigraph, p, r)]
    if not forced:
        return trigraph
    result = trigraph.assign(white=forced)
    # whitening never creates black completions, so one pass is a fixpoint
    assert not any(_has_completion(result, p, r) for p in result.gray_pairs())
    return result


def select_branch_orbit(trigraph: Trigraph, orbits: List[PairOrbit]) -> PairOrbit:
    """
    Branching rule

    Prefer orbits whose pairs have both endpoints touched by an assigned
    (black or white) pair, then orbits with one touched endpoint, then any
    orbit; among those take the largest, ties to the least representative.
    """
    if not orbits:
        raise SearchError("No gray pair orbits to branch on")
    touched = trigraph.touched_mask()

    def touches(orbit):
        return (orbit.representative.mask & touched).bit_count()

    both = [o for o in orbits if touches(o) == 2]
    one = [o for o in orbits if touches(o) == 1]
    eligible = both or one or orbits
    return min(eligible, key=lambda o: (-len(o), o.representative))


def root_trigraph(n: int, r: int) -> Trigraph:
    """White pair {0,1} with black completion {2..r-1}."""
    completion = range(2, r)
    black = [Pair.of(a, b) for a, b in combinations(completion, 2)]
    black += [Pair.of(end, a) for end in (0, 1) for a in completion]
    return Trigraph.all_gray(n).assign(black=black, white=[Pair(0, 1)])


@unique
class NodeStatus(Enum):
    FAILED = 'failed'
    LEAF = 'leaf'
    BRANCH = 'branch'


class SaturationSearch:
    """Depth-first orbital branching from the root trigraph or a replayed prefix"""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.stats = SearchStats()
        self.results: Set[str] = set()

    def expand(self, trigraph: Trigraph, stats: Optional[SearchStats] = None):
        """
        Evaluate one node

        Returns:
            (NodeStatus, payload): payload is the realized Graph for a leaf,
            a list of (BranchDecision, child Trigraph) for a branch node
        """
        r = self.cfg.r
        if stats is not None:
            stats.nodes_visited += 1
        if not check_c1(trigraph, r):
            if stats is not None:
                stats.constraint_failures_c1 += 1
            return NodeStatus.FAILED, None
        if not check_c2(trigraph, r, exact=not self.cfg.count_cap):
            if stats is not None:
                stats.constraint_failures_c2 += 1
            return NodeStatus.FAILED, None

        propagated = propagate_c3(trigraph, r)
        if stats is not None:
            stats.propagations += trigraph.gray_count() - propagated.gray_count()
        if propagated.is_complete():
            return NodeStatus.LEAF, propagated.to_graph()

        group = automorphism_group(propagated)
        orbit = select_branch_orbit(propagated, gray_pair_orbits(propagated, group))
        children = self._children(propagated, group, orbit)
        if stats is not None:
            stats.branch_white += len(children) - 1
            stats.branch_black += 1
        return NodeStatus.BRANCH, children

    def _children(self, trigraph: Trigraph, group, orbit: PairOrbit) -> List[Tuple[BranchDecision, Trigraph]]:
        rep = orbit.representative
        whitened = trigraph.assign(white=[rep])
        stabilizer = pair_stabilizer(group, rep)
        ground = VertexSet(((1 << trigraph.n) - 1) & ~rep.mask)

        children = []
        subsets = subset_orbit_representatives(stabilizer, ground, self.cfg.r - 2)
        for index, sub in enumerate(subsets):
            members = sub.representative.members()
            pairs = [Pair.of(end, a) for end in (rep.u, rep.v) for a in members]
            pairs += [Pair.of(a, b) for a, b in combinations(members, 2)]
            if any(whitened.color(p.u, p.v) is PairColor.WHITE for p in pairs):
                continue
            decision = BranchDecision(DecisionKind.WHITE, rep, index)
            children.append((decision, whitened.assign(black=pairs)))

        children.append((BranchDecision(DecisionKind.BLACK, rep), trigraph.assign(black=orbit.members)))
        return children

    def _emit(self, graph: Graph):
        if self.cfg.primitive_only and has_dominating_vertex(graph):
            return
        verdict = saturation_verdict(graph, self.cfg.r)
        if not verdict.ok:
            raise SearchError(f"Unsound output ({verdict.reason})")
        form = canonical_form(graph)
        if form in self.results:
            self.stats.duplicates += 1
            return
        self.results.add(form)
        self.stats.outputs += 1
        logger.debug(f"Output {form}")

    def explore(self, trigraph: Trigraph):
        stack = [trigraph]
        while stack:
            status, payload = self.expand(stack.pop(), self.stats)
            if status is NodeStatus.LEAF:
                self._emit(payload)
            elif status is NodeStatus.BRANCH:
                stack.extend(child for _, child in reversed(payload))

    def replay(self, prefix: Iterable[BranchDecision]) -> Trigraph:
        """
        Follow decisions from the root

        Raises:
            StalePrefixError: If a decision is not a branch of its node
        """
        trigraph = root_trigraph(self.cfg.n, self.cfg.r)
        for depth, decision in enumerate(prefix):
            status, payload = self.expand(trigraph)
            if status is not NodeStatus.BRANCH:
                raise StalePrefixError(f"Decision {decision.token()} at depth {depth} "
                                       f"meets a {status.value} node")
            matches = [child for d, child in payload if d == decision]
            if not matches:
                raise StalePrefixError(f"Decision {decision.token()} at depth {depth} is not a branch")
            trigraph = matches[0]
        return trigraph


def run_job(cfg: SearchConfig, job: SearchJob) -> Tuple[Set[str], SearchStats]:
    """
    Search the subtree below a job's prefix

    Returns:
        (results, stats): canonical graph6 strings of the subtree and counters

    Raises:
        StalePrefixError: If the prefix does not replay
    """
    search = SaturationSearch(cfg)
    start = search.replay(job.prefix)
    search.explore(start)
    search.stats.jobs = 1
    logger.info(f"Job {job.to_line()} (n={cfg.n}, r={cfg.r}): {search.stats.summary()}")
    return search.results, search.stats


def saturated_search(cfg: SearchConfig) -> Tuple[Set[str], SearchStats]:
    """Uniquely K_r-saturated graphs on n vertices up to isomorphism, as canonical graph6."""
    return run_job(cfg, SearchJob())


def split_jobs(cfg: SearchConfig, depth: int) -> List[SearchJob]:
    """
    Frontier of the search tree at the given depth

    Leaves above the frontier become jobs of their own, so the union of all
    job results is the whole search output.
    """
    search = SaturationSearch(cfg)
    jobs = []

    def walk(trigraph, prefix):
        if len(prefix) >= depth:
            jobs.append(SearchJob(prefix))
            return
        status, payload = search.expand(trigraph)
        if status is NodeStatus.LEAF:
            jobs.append(SearchJob(prefix))
        elif status is NodeStatus.BRANCH:
            for decision, child in payload:
                walk(child, prefix + (decision,))

    walk(root_trigraph(cfg.n, cfg.r), ())
    logger.info(f"Split n={cfg.n}, r={cfg.r} at depth {depth} into {len(jobs)} jobs")
    return jobs


def write_job_file(path, jobs: Iterable[SearchJob]):
    with open(path, 'w', encoding='ascii') as f:
        for job in jobs:
            f.write(job.to_line() + '\n')


def read_job_file(path) -> List[SearchJob]:
    with open(path, encoding='ascii') as f:
        return [SearchJob.from_line(line) for line in f if line.strip()]


def write_output_file(path, results: Iterable[str]):
    """One canonical graph6 per line, sorted."""
    with open(path, 'w', encoding='ascii') as f:
        for form in sorted(results):
            f.write(form + '\n')
