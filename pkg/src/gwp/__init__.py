"""Symbolic and numeric free probability on directed-graph operator algebras.

Workflow: build a graph, form elements of the creation/annihilation algebra
(directly or from expressions), and evaluate moments, free cumulants and
R-transforms exactly; a truncated matrix representation provides an
independent numeric cross-check for everything.
"""

from .algebra import (
    DiagonalElement,
    Element,
    adjoint,
    annihilation,
    apply_to_basis,
    creation,
    expectation,
    identity,
    linear_combine,
    make_element,
    multiply,
    projection,
    support,
    trace,
)
from .exprparse import ExprSyntaxError, format_element, parse_element_expr
from .fock import (
    FockBasis,
    FockRep,
    build_rep,
    matrix_of,
    vacuum_expectation,
    vacuum_moment,
    verify_relations,
)
from .freeprob import (
    PowerSeries,
    SemicircularSystem,
    catalan_moment_formula,
    compress_to_vertex,
    embed_free_group_factor,
    freeness_check,
    generating_operator,
    identically_distributed,
    loops_at,
    moment_series,
    nc2_moment_sum,
    r_transform,
    semicircular,
)
from .graphs import (
    Graph,
    GraphSpecError,
    PathWord,
    build_graph,
    concat,
    diagram,
    diagram_distinct,
    endpoints,
    enumerate_paths,
)
from .noncrossing import (
    NCPartition,
    catalan,
    cumulants_to_moments,
    enumerate_nc,
    enumerate_nc_pairings,
    kreweras,
    mixed_cumulant,
    mobius_to_top,
    moments_to_cumulants,
    partitioned_expectation,
    theorem13_factor,
)

__version__ = "0.1.0"
