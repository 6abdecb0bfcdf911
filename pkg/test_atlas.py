"""
Test Atlas - named constructions, verification report and export
"""

from collections import Counter

import pandas as pd
import pytest

from services.atlas_service import (AtlasEntry, AtlasError, build, ehm_entry, export, get_entry,
                                    list_entries, manifest, verify_all, verify_entry)
from services.cayley_service import CayleySpec, cayley_complement
from services.graph6_service import graph6_decode
from services.saturation_service import (has_dominating_vertex, is_r_primitive,
                                         is_uniquely_kr_saturated)
from services.symmetry_service import canonical_form

SPORADIC = {
    'G10': (10, 4), 'G12': (12, 4), 'G13': (13, 4), 'Paley13': (13, 4),
    'G15A': (15, 6), 'G15B': (15, 6), 'G16A': (16, 5), 'G16B': (16, 5),
    'G16C': (16, 6), 'G18A': (18, 4), 'G18B': (18, 4),
}


def test_sporadic_entries_listed():
    entries = [e for e in list_entries() if e.sporadic]
    assert {e.name: (e.expected_n, e.expected_r) for e in entries} == SPORADIC
    assert all(e.primitive for e in entries)


@pytest.mark.parametrize('name', sorted(SPORADIC))
def test_sporadic_graph_is_primitive(name):
    n, r = SPORADIC[name]
    graph = build(name)
    assert graph.n == n
    assert is_r_primitive(graph, r)
    assert not is_uniquely_kr_saturated(graph, r - 1)
    assert not is_uniquely_kr_saturated(graph, r + 1)


def test_degree_facts():
    assert build('G16A').degree_multiset() == Counter({8: 2, 9: 14})
    assert build('G18A').degree_multiset() == Counter({7: 18})
    assert build('G18B').degree_multiset() == Counter({7: 18})
    assert build('G15A').degree_multiset() == Counter({10: 15})
    assert build('G15B').degree_multiset() == Counter({10: 15})
    assert build('G16B').degree_multiset() == Counter({9: 16})
    assert build('G16C').degree_multiset() == Counter({11: 16})
    assert build('G10').degree_multiset() == Counter({5: 10})


def test_entries_sharing_parameters_are_distinct():
    assert canonical_form(build('G13')) != canonical_form(build('Paley13'))
    assert canonical_form(build('G15A')) != canonical_form(build('G15B'))
    assert canonical_form(build('G16A')) != canonical_form(build('G16B'))
    assert canonical_form(build('G18A')) != canonical_form(build('G18B'))


def test_paley13_is_the_circulant():
    assert canonical_form(build('Paley13')) == canonical_form(cayley_complement(CayleySpec(13, (1, 3, 4))))


def test_classic_families():
    ehm = build('EHM(4,5)')
    assert ehm.n == 7 and ehm.edge_count() == 11
    assert is_uniquely_kr_saturated(ehm, 4)
    assert has_dominating_vertex(ehm)
    odd = build('OddCycleComplement(5)')
    assert odd.n == 9 and is_r_primitive(odd, 5)
    star = build('star(6)')
    assert star.n == 7 and is_uniquely_kr_saturated(star, 3)
    assert is_r_primitive(build('Petersen'), 3)
    assert is_r_primitive(build('c5'), 3)
    assert is_r_primitive(build('Cayley17'), 7)


def test_unknown_and_malformed_names():
    for name in ('nope', 'EHM(4)', 'Star(1)', 'OddCycleComplement(2)', 'Foo(3)', 'EHM(2,5)'):
        with pytest.raises(AtlasError):
            get_entry(name)


def test_verify_all_passes():
    report = verify_all()
    assert report.passed, [v.line() for v in report.failures()]
    assert len(report.verdicts) == len(list_entries())
    assert sum(1 for v in report.verdicts if v.passed and v.name in SPORADIC) == 11
    assert report.summary() == f"{len(report.verdicts)}/{len(report.verdicts)} atlas entries pass"


def test_verify_entry_reports_wrong_expectations():
    entry = get_entry('G10')
    wrong = AtlasEntry('G10-wrong', entry.builder, 5, 10, Counter({5: 10}), primitive=True)
    verdict = verify_entry(wrong)
    assert not verdict.passed
    assert any('completions' in failure or 'K_5' in failure for failure in verdict.failures)
    assert verdict.line().startswith('G10-wrong\t10\t5\tFAIL')


def test_verify_all_flags_duplicates_and_builder_errors():
    def broken():
        raise ValueError('boom')

    duplicate = AtlasEntry('G13-copy', get_entry('G13').builder, 4, 13, Counter({6: 13}))
    failing = AtlasEntry('Broken', broken, 3, 5, Counter({2: 5}))
    report = verify_all([get_entry('G13'), duplicate, failing])
    assert not report.passed
    names = {v.name for v in report.failures()}
    assert names == {'G13-copy', 'Broken'}
    assert any('isomorphic to G13' in f for f in report.failures()[0].failures)


def test_ehm_degree_expectation():
    entry = ehm_entry(5, 4)
    assert entry.expected_n == 7
    assert entry.build().degree_multiset() == entry.expected_degrees
    assert not entry.primitive


def test_export_writes_graphs_and_manifest(tmp_path):
    entries = [get_entry('G10'), get_entry('G16A'), get_entry('Petersen')]
    paths = export(str(tmp_path / 'atlas'), entries)
    assert len(paths) == 4
    g10 = graph6_decode((tmp_path / 'atlas' / 'G10.g6').read_text())
    assert g10 == build('G10')
    table = pd.read_csv(tmp_path / 'atlas' / 'manifest.tsv', sep='\t')
    assert table['name'].tolist() == ['G10', 'G16A', 'Petersen']
    assert table['regularity'].tolist() == ['regular', 'irregular', 'regular']
    assert manifest(entries)['r'].tolist() == [4, 5, 3]


def test_stated_degree_mismatch_is_noted():
    report = verify_all([get_entry('G16C'), get_entry('Cayley17'), get_entry('G10')])
    assert report.passed
    g16c, cayley17, g10 = report.verdicts
    assert g16c.notes == ['stated degrees {10: 16}, constructed {11: 16}']
    assert cayley17.notes == ['stated degrees {14: 17}, constructed {12: 17}']
    assert g10.notes == []
    assert g16c.line() == 'G16C\t16\t6\tPASS\tnote: stated degrees {10: 16}, constructed {11: 16}'
    assert g10.line() == 'G10\t10\t4\tPASS'
