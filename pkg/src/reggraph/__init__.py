"""Regression graphs: construction, Markov equivalence, implied independences,
summary graphs and numerical oracles."""

from .edgematrix import (EdgeMatrix, InducedMatrix, NodePartition, implied_zero,
                         indicator_closure, induced_edge_matrix, to_edge_matrix, zero_test)
from .equivalence import (EquivalenceReport, NodeSetMismatch, equivalent_subclass_members,
                          markov_equivalent)
from .graph import (BadBlockOrder, BlockOrder, CyclicOrArrowIntoPast, DuplicateEdge, Edge,
                    EdgeKind, GraphError, MixedGraph, RegressionGraph, SelfLoop, Subclass,
                    SummaryGraph, UnknownNode, VConfiguration, VKind, WrongEdgeKindForBlock,
                    build_graph, classify_subclass, collision_triples, enumerate_vs,
                    infer_order, random_regression_graph, skeleton)
from .io import (GraphSyntaxError, export_dot, load_fixture, parse_document, parse_graph,
                 serialize)
from .kernels import available_backends, use_backend
from .oracle import (GaussianSystem, JointTable, OracleError, check_combination_properties,
                     check_singleton_transitivity, cond_cov, dag_binary_table, marg_con,
                     partial_corr, regress_coeff, sample_system, scan_binary_transitivity)
from .separation import (IndependenceQuery, QueryError, QueryVerdict, SubclassMismatch,
                         d_separate, rg_separate, separate, separate_concentration)
from .transform import (ConditioningPresent, DistortionReport, EdgeAbsent, TransformSpec,
                        detect_conditioning_distortions, detect_direct_confounding,
                        detect_indirect_confounding, distortion_report, summary_graph)

__version__ = "0.1.0"

__all__ = [
    "BadBlockOrder",
    "BlockOrder",
    "ConditioningPresent",
    "CyclicOrArrowIntoPast",
    "DistortionReport",
    "DuplicateEdge",
    "Edge",
    "EdgeAbsent",
    "EdgeKind",
    "EdgeMatrix",
    "EquivalenceReport",
    "GaussianSystem",
    "GraphError",
    "GraphSyntaxError",
    "IndependenceQuery",
    "InducedMatrix",
    "JointTable",
    "MixedGraph",
    "NodePartition",
    "NodeSetMismatch",
    "OracleError",
    "QueryError",
    "QueryVerdict",
    "RegressionGraph",
    "SelfLoop",
    "Subclass",
    "SubclassMismatch",
    "SummaryGraph",
    "TransformSpec",
    "UnknownNode",
    "VConfiguration",
    "VKind",
    "WrongEdgeKindForBlock",
    "available_backends",
    "build_graph",
    "check_combination_properties",
    "check_singleton_transitivity",
    "classify_subclass",
    "collision_triples",
    "cond_cov",
    "d_separate",
    "dag_binary_table",
    "detect_conditioning_distortions",
    "detect_direct_confounding",
    "detect_indirect_confounding",
    "distortion_report",
    "enumerate_vs",
    "equivalent_subclass_members",
    "export_dot",
    "implied_zero",
    "indicator_closure",
    "induced_edge_matrix",
    "infer_order",
    "load_fixture",
    "marg_con",
    "markov_equivalent",
    "parse_document",
    "parse_graph",
    "partial_corr",
    "random_regression_graph",
    "regress_coeff",
    "rg_separate",
    "sample_system",
    "scan_binary_transitivity",
    "separate",
    "separate_concentration",
    "serialize",
    "skeleton",
    "summary_graph",
    "to_edge_matrix",
    "use_backend",
    "zero_test",
]

