"""
Saturation Toolkit services
"""

from services.atlas_service import AtlasError, build, list_entries, verify_all
from services.cayley_service import (CayleyError, CayleySpec, FamilyKind, cayley_complement,
                                     check_cayley_primitive, circulant_clique_number,
                                     family_instance, predicted_unique_clique,
                                     scan_generator_sets)
from services.clique_service import (clique_number, completion_count, count_r_cliques,
                                     kr_completions, maximal_cliques)
from services.graph6_service import Graph6FormatError, graph6_decode, graph6_encode
from services.group_service import GroupError, Permutation, PermutationGroup, group_order
from services.saturation_service import (is_r_primitive, is_uniquely_kr_saturated,
                                         saturation_verdict, strip_dominating_vertices)
from services.search_service import (SearchConfig, SearchError, SearchJob, SearchStats,
                                     StalePrefixError, saturated_search, split_jobs)
from services.symmetry_service import (SymmetryError, automorphism_group, canonical_form,
                                       gray_pair_orbits)

__all__ = [
    'AtlasError', 'build', 'list_entries', 'verify_all',
    'CayleyError', 'CayleySpec', 'FamilyKind', 'cayley_complement', 'check_cayley_primitive',
    'circulant_clique_number', 'family_instance', 'predicted_unique_clique', 'scan_generator_sets',
    'clique_number', 'completion_count', 'count_r_cliques', 'kr_completions', 'maximal_cliques',
    'Graph6FormatError', 'graph6_decode', 'graph6_encode',
    'GroupError', 'Permutation', 'PermutationGroup', 'group_order',
    'is_r_primitive', 'is_uniquely_kr_saturated', 'saturation_verdict', 'strip_dominating_vertices',
    'SearchConfig', 'SearchError', 'SearchJob', 'SearchStats', 'StalePrefixError',
    'saturated_search', 'split_jobs',
    'SymmetryError', 'automorphism_group', 'canonical_form', 'gray_pair_orbits',
]
