"""Maximally symmetric trees from edge-indexed graphs.

Exact algorithms on finite edge-indexed graphs (quotients of bounded valence
trees): covering maps and minimal subcovers, index-1 collapses and blowups,
the pumping-up algorithm that produces a maximally symmetric quotient, the
maximal-symmetry decision, and symbolic enumeration of maximally symmetric
indexings of a graph shape.
"""

from .graph import (Edge, EdgeIndexedGraph, End, GraphError, Trichotomy, cycle_value, fundamental_cycles,
                    is_bushy, is_orbifold, is_thorn, is_thornless, is_unimodular, subdivide, thornless_core,
                    total_index, trichotomy)
from .covering import (CoverReport, CoveringError, CoveringMap, NotBushyError, are_isomorphic, collapse_bigon,
                       compose, find_proper_subcover, fold_loop, identity, isometry_quotient, minimal_subcover,
                       verify_covering)
from .pumping import (Blowup, Collapse, MaxSymResult, PumpCertificate, PumpError, Witness, collapse_and_subcover,
                      enumerate_blowups, has_blowup_and_proper_subcover, index1_collapse, is_maximally_symmetric,
                      maximal_index1_forest_collapse, pump_up, pushout, subroutine1, subroutine2, verify_blowup)
from .linalg import AffineSystem
from .symbolic import (GraphShape, MonomialVariety, check_consistency, compute_X, enumerate_maxsym_indexings,
                       is_vacuous_isomorphism, reduce_system, symbolic_blowups, symbolic_subcovers,
                       unimodular_variety)
from .ucover import TruncatedCoverTree, build_truncated_cover, bushy_witness, check_local_even_covering

__version__ = "0.1.0"
