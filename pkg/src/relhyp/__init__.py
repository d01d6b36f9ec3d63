"""Exact combinatorics for relatively hyperbolic group pairs."""
from .complexes import Chain, SComplex, boundary, build_rips, homology_rank
from .cusped import CuspedGraph, build_cusped_ball, build_cusped_graph, check_horoball_convexity
from .filling import circuit_decomposition, dehn_sample, filling_norm_lp
from .geomfill import (FillingCertificate, fill_graphlike_cycle, fill_triangle_cycle, local_fill,
                       slice_cycle_along_geodesic, spider_cover, thin_fill)
from .graphs import SimpGraph, canonical_geodesic
from .groups import (FreeAbelianGroup, FreeGroup, GroupPair, Subgroup, cyclic_group, load_group_pair,
                     parse_group_pair, symmetric_group)
from .hyperbolicity import TruncationUnsafe, four_point_delta
from .paircomplex import (CombComplex2, build_quotient_complex, build_relative_cayley_complex,
                          parse_relative_presentation)

__version__ = "0.1.0"
