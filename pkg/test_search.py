"""
Test Search - constraints, branching, job splitting, checkpoints and known outputs
"""

from itertools import combinations

import pytest

from models import Graph, Pair, PairColor, Trigraph
from services.atlas_service import build, cycle_graph, ehm_graph, odd_cycle_complement, petersen_graph
from services.background_tasks import CheckpointStore, checkpoint_header, run_jobs
from services.group_service import PairOrbit
from services.search_service import (BranchDecision, DecisionKind, JobFormatError, NodeStatus,
                                     SaturationSearch, SearchConfig, SearchError, SearchJob,
                                     SearchStats, StalePrefixError, check_c1, check_c2,
                                     propagate_c3, read_job_file, root_trigraph, run_job,
                                     saturated_search, select_branch_orbit, split_jobs,
                                     write_job_file, write_output_file)
from services.symmetry_service import automorphism_group, canonical_form, gray_pair_orbits


def oracle_search(n, r, primitive_only=False):
    """Canonical forms of every uniquely K_r-saturated graph on n vertices, by exhaustion."""
    pairs = list(combinations(range(n), 2))
    found = set()
    for bits in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if (bits >> i) & 1]
        adj = [set() for _ in range(n)]
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)

        def is_clique(vs):
            return all(b in adj[a] for a, b in combinations(vs, 2))

        if any(is_clique(c) for c in combinations(range(n), r)):
            continue
        ok = True
        for a, b in pairs:
            if b in adj[a]:
                continue
            common = sorted(adj[a] & adj[b])
            if sum(1 for c in combinations(common, r - 2) if is_clique(c)) != 1:
                ok = False
                break
        if not ok:
            continue
        if primitive_only and any(len(adj[v]) == n - 1 for v in range(n)):
            continue
        found.add(canonical_form(Graph.from_edges(n, edges)))
    return found


# 1. Configuration and tokens

def test_search_config_bounds():
    SearchConfig(5, 3)
    for n, r in ((5, 6), (5, 2), (65, 4)):
        with pytest.raises(SearchError):
            SearchConfig(n, r)


def test_decision_tokens():
    white = BranchDecision(DecisionKind.WHITE, Pair(0, 4), 2)
    black = BranchDecision(DecisionKind.BLACK, Pair(0, 4))
    assert white.token() == 'W:0-4:2'
    assert black.token() == 'B:0-4'
    assert BranchDecision.parse('W:0-4:2') == white
    assert BranchDecision.parse('B:0-4') == black
    for bad in ('X:0-4', 'W:0-4', 'B:4-0', 'W:0-4:-1', 'B:0-4:1', 'B:a-b'):
        with pytest.raises(JobFormatError):
            BranchDecision.parse(bad)


def test_job_lines():
    assert SearchJob().to_line() == 'ROOT'
    assert SearchJob.from_line('ROOT\n') == SearchJob()
    job = SearchJob.from_line('W:0-4:1,B:2-5')
    assert job.to_line() == 'W:0-4:1,B:2-5'
    assert job.prefix[1].kind is DecisionKind.BLACK
    with pytest.raises(JobFormatError):
        SearchJob.from_line('   ')


def test_job_file_round_trip(tmp_path):
    jobs = [SearchJob(), SearchJob.from_line('B:0-4')]
    path = tmp_path / 'jobs.txt'
    write_job_file(path, jobs)
    assert path.read_text() == 'ROOT\nB:0-4\n'
    assert read_job_file(path) == jobs


def test_output_file_is_sorted(tmp_path):
    path = tmp_path / 'out.g6'
    write_output_file(path, ['Dhc', 'C~', 'FQhVW'])
    assert path.read_text().splitlines() == ['C~', 'Dhc', 'FQhVW']


def test_stats_merge():
    a = SearchStats(nodes_visited=3, outputs=1)
    a.merge(SearchStats(nodes_visited=2, duplicates=4))
    assert a.nodes_visited == 5 and a.duplicates == 4
    assert 'nodes_visited=5' in a.summary()


# 2. Constraints and branching

def test_root_trigraph():
    t = root_trigraph(6, 4)
    assert t.color(0, 1) is PairColor.WHITE
    for a, b in ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        assert t.color(a, b) is PairColor.BLACK
    assert t.gray_count() == 15 - 6


def test_c1_and_c2():
    k4 = Trigraph.from_graph(Graph.complete(4))
    assert not check_c1(k4, 4)
    assert check_c1(k4, 5)
    square = Trigraph.all_gray(4).assign(black=[Pair.of(0, 2), Pair.of(2, 1), Pair.of(1, 3), Pair.of(3, 0)])
    assert not check_c2(square, 3)
    assert check_c2(root_trigraph(6, 4), 4)
    assert check_c2(root_trigraph(6, 4), 4, exact=True)


def test_c2_two_triangles_on_one_pair():
    t = Trigraph.all_gray(5).assign(black=[Pair(0, 1), Pair(0, 2), Pair(1, 2), Pair(0, 3), Pair(1, 3)])
    assert not check_c1(t, 3)
    assert check_c1(t, 4)
    assert not check_c2(t, 3)
    assert not check_c2(t, 3, exact=True)


def test_propagation_whitens_completed_pairs():
    t = Trigraph.all_gray(4).assign(black=[Pair(0, 1), Pair(1, 2)])
    result = propagate_c3(t, 3)
    assert result.color(0, 2) is PairColor.WHITE
    assert result.gray_count() == t.gray_count() - 1
    assert propagate_c3(result, 3) == result


def test_branch_orbit_prefers_touched_pairs():
    t = root_trigraph(6, 4)
    orbits = gray_pair_orbits(t, automorphism_group(t))
    chosen = select_branch_orbit(t, orbits)
    assert chosen.representative == Pair(0, 4)
    assert len(chosen) == 4
    with pytest.raises(SearchError):
        select_branch_orbit(t, [])


def test_branch_orbit_tiers():
    t = Trigraph.all_gray(6).assign(black=[Pair(0, 1), Pair(2, 3)])
    both = PairOrbit((Pair(0, 2),))
    one = PairOrbit((Pair(0, 4), Pair(1, 4), Pair(2, 4)))
    none = PairOrbit((Pair(4, 5),))
    assert select_branch_orbit(t, [none, one, both]) == both
    assert select_branch_orbit(t, [none, one]) == one


def test_expand_root_branches():
    search = SaturationSearch(SearchConfig(6, 4))
    status, children = search.expand(root_trigraph(6, 4), search.stats)
    assert status is NodeStatus.BRANCH
    decisions = [d for d, _ in children]
    assert decisions[-1] == BranchDecision(DecisionKind.BLACK, Pair(0, 4))
    assert all(d.kind is DecisionKind.WHITE and d.pair == Pair(0, 4) for d in decisions[:-1])
    for decision, child in children[:-1]:
        assert child.color(0, 4) is PairColor.WHITE
    assert search.stats.nodes_visited == 1


def test_emit_rejects_unsound_graph():
    search = SaturationSearch(SearchConfig(6, 3))
    with pytest.raises(SearchError):
        search._emit(cycle_graph(6))


# 3. Search results

@pytest.mark.parametrize('n, r, count', [
    (4, 3, 1), (5, 3, 2), (6, 3, 1), (7, 3, 1),
    (4, 4, 1), (5, 4, 1), (6, 4, 2), (7, 4, 2),
])
def test_search_counts(n, r, count):
    results, stats = saturated_search(SearchConfig(n, r))
    assert len(results) == count
    assert stats.outputs == count
    assert stats.nodes_visited > 0


@pytest.mark.parametrize('n, r', [
    (4, 3), (5, 3), (6, 3), (7, 3),
    (4, 4), (5, 4), (6, 4), (7, 4),
    (6, 5),
])
def test_search_matches_exhaustive_oracle(n, r):
    results, _ = saturated_search(SearchConfig(n, r))
    assert results == oracle_search(n, r)


def test_primitive_only_filters_dominating_vertices():
    results, _ = saturated_search(SearchConfig(5, 3, primitive_only=True))
    assert results == {canonical_form(cycle_graph(5))}
    results, _ = saturated_search(SearchConfig(7, 4, primitive_only=True))
    assert results == {canonical_form(odd_cycle_complement(4))}
    results, _ = saturated_search(SearchConfig(7, 4))
    assert canonical_form(ehm_graph(4, 5)) in results


def test_exact_counting_gives_same_results():
    capped, _ = saturated_search(SearchConfig(6, 4))
    exact, _ = saturated_search(SearchConfig(6, 4, count_cap=False))
    assert capped == exact


# 4. Jobs, replay and checkpoints

def test_split_jobs_cover_the_tree():
    cfg = SearchConfig(7, 4)
    direct, _ = saturated_search(cfg)
    for depth in (0, 1, 2, 3):
        jobs = split_jobs(cfg, depth)
        assert jobs
        union = set()
        for job in jobs:
            union |= run_job(cfg, job)[0]
        assert union == direct
    assert split_jobs(cfg, 0) == [SearchJob()]


def test_replay_rejects_stale_prefix():
    search = SaturationSearch(SearchConfig(6, 4))
    with pytest.raises(StalePrefixError):
        search.replay([BranchDecision(DecisionKind.BLACK, Pair(2, 5))])
    with pytest.raises(StalePrefixError):
        search.replay([BranchDecision(DecisionKind.WHITE, Pair(0, 4), 99)])


def test_replay_reaches_job_subtree():
    cfg = SearchConfig(6, 4)
    for job in split_jobs(cfg, 2):
        start = SaturationSearch(cfg).replay(job.prefix)
        assert start.n == 6


@pytest.mark.parametrize('workers', [1, 2, 8])
def test_run_jobs_output_is_independent_of_workers(tmp_path, workers):
    cfg = SearchConfig(8, 4)
    jobs = split_jobs(cfg, 2)
    expected, _ = saturated_search(cfg)
    results, stats = run_jobs(cfg, jobs, workers=workers)
    assert results == expected
    assert stats.jobs == len(jobs)
    assert stats.outputs == len(results) <= stats.nodes_visited

    serial = tmp_path / 'serial.g6'
    pooled = tmp_path / f'workers{workers}.g6'
    write_output_file(serial, expected)
    write_output_file(pooled, results)
    assert pooled.read_bytes() == serial.read_bytes()


def test_checkpoint_resume(tmp_path):
    cfg = SearchConfig(7, 4)
    jobs = split_jobs(cfg, 2)
    path = str(tmp_path / 'run.ckpt')
    first, _ = run_jobs(cfg, jobs, checkpoint=path, fsync=False)
    lines = open(path).read().splitlines()
    assert lines[0] == checkpoint_header(cfg)
    assert len(lines) == len(jobs) + 1
    assert all('\t' in line for line in lines[1:])

    with open(path, 'a') as f:
        f.write('B:0-')
    second, stats = run_jobs(cfg, jobs, checkpoint=path, fsync=False)
    assert second == first
    assert stats.jobs == 0
    assert stats.outputs == 0 == stats.nodes_visited
    assert not open(path).read().endswith('B:0-')


def test_checkpoint_resumes_half_finished_run(tmp_path):
    cfg = SearchConfig(7, 4)
    jobs = split_jobs(cfg, 2)
    path = str(tmp_path / 'run.ckpt')
    run_jobs(cfg, jobs[:1], checkpoint=path, fsync=False)
    results, stats = run_jobs(cfg, jobs, checkpoint=path, fsync=False)
    assert results == saturated_search(cfg)[0]
    assert stats.jobs == len(jobs) - 1
    assert stats.outputs <= stats.nodes_visited


def test_checkpoint_from_other_configuration_is_rejected(tmp_path):
    path = str(tmp_path / 'run.ckpt')
    run_jobs(SearchConfig(6, 4), [SearchJob()], checkpoint=path, fsync=False)
    for other in (SearchConfig(7, 4, primitive_only=True), SearchConfig(6, 4, primitive_only=True),
                  SearchConfig(6, 3), SearchConfig(6, 4, count_cap=False)):
        with pytest.raises(StalePrefixError):
            run_jobs(other, [SearchJob()], checkpoint=path, fsync=False)
    results, stats = run_jobs(SearchConfig(6, 4), [SearchJob()], checkpoint=path, fsync=False)
    assert len(results) == 2 and stats.jobs == 0


def test_checkpoint_store_rejects_malformed_files(tmp_path):
    cfg = SearchConfig(5, 3)
    headerless = tmp_path / 'headerless.ckpt'
    headerless.write_text('ROOT\tDhc\n')
    with pytest.raises(JobFormatError):
        CheckpointStore(str(headerless), cfg).load()

    bad = tmp_path / 'bad.ckpt'
    bad.write_text(f"{checkpoint_header(cfg)}\nROOT no tab here\n")
    with pytest.raises(JobFormatError):
        CheckpointStore(str(bad), cfg).load()

    assert CheckpointStore(str(tmp_path / 'missing.ckpt'), cfg).load() == {}


# 5. Known graphs

def test_petersen_is_the_primitive_graph_on_ten_vertices():
    results, _ = saturated_search(SearchConfig(10, 3, primitive_only=True))
    assert results == {canonical_form(petersen_graph())}


def test_g10_is_recovered():
    results, _ = saturated_search(SearchConfig(10, 4, primitive_only=True))
    assert results == {canonical_form(build('G10'))}


def test_nine_vertices_r5_contains_odd_cycle_complement():
    results, _ = saturated_search(SearchConfig(9, 5, primitive_only=True))
    assert canonical_form(odd_cycle_complement(5)) in results


def test_g12_is_recovered():
    results, _ = saturated_search(SearchConfig(12, 4, primitive_only=True))
    assert results == {canonical_form(build('G12'))}


@pytest.mark.extended
def test_thirteen_vertices_r4():
    results, _ = saturated_search(SearchConfig(13, 4, primitive_only=True))
    assert results == {canonical_form(build('G13')), canonical_form(build('Paley13'))}
