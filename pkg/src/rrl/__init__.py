"""Regularity, removal and property testing for colored partite hypergraphs."""
from .core import (ColoredHypergraph, Edge, Params, SimplicialComplex, TotalColor, UniformColoredGraph,
                   index_sets, subsets, total_color, validate_complex)
from .counting import copy_probability, exact_count, find_copy, isolated_padding
from .editor import edit_size_report, lift, modify
from .errors import (BudgetExceeded, EditorStuck, EmptyCondition, InvalidParams, ParseError, RRLError,
                     StageError)
from .family import Family, load_family, parse_family
from .harness import farness_exact, farness_packing, generate, run_experiment
from .pipeline import PipelineConfig, removal_pipeline
from .regularity import DeltaCertificate, fit_delta, regularity_search, verify_regularity
from .regularize import DensityQuery, regularize, regularize_vector, relative_density
from .representative import NULL, build_table
from .rng import RngStream
from .sampling import PartitionwiseMap, random_map
from .tester import PropertyOracle, TesterConfig, monotone_reduction, run_tester

__version__ = "0.1.0"

__all__ = [
    "ColoredHypergraph", "Edge", "Params", "SimplicialComplex", "TotalColor", "UniformColoredGraph",
    "index_sets", "subsets", "total_color", "validate_complex", "copy_probability", "exact_count",
    "find_copy", "isolated_padding", "edit_size_report", "lift", "modify", "BudgetExceeded",
    "EditorStuck", "EmptyCondition", "InvalidParams", "ParseError", "RRLError", "StageError", "Family",
    "load_family", "parse_family", "farness_exact", "farness_packing", "generate", "run_experiment",
    "PipelineConfig", "removal_pipeline", "DeltaCertificate", "fit_delta", "regularity_search",
    "verify_regularity", "DensityQuery", "regularize", "regularize_vector", "relative_density", "NULL",
    "build_table", "RngStream", "PartitionwiseMap", "random_map", "PropertyOracle", "TesterConfig",
    "monotone_reduction", "run_tester"
]
