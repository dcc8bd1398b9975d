"""Genetic-programming synthesis of circuits preparing maximally multipartite entangled states."""

from .entanglement import (
    Bipartition,
    FitnessReport,
    entanglement_potential,
    enumerate_bipartitions,
    negativity,
    reduced_density,
    upper_bound,
    vn_entropy,
)
from .errors import ConfigurationError, IntegrityError, NumericalIntegrityError, UsageError
from .evolution import GaConfig, GenerationStats, crossover, evolve, mutate, tournament_select
from .genome import GateAlphabet, Genome, Topology, build_alphabet, decode, encode, random_genome
from .oracle import OracleReport, exhaustive_min_search
from .search import SearchResult, count_cnots, extract_connection_graph, find_minimal_circuit
from .simulator import CNOT, Gate, H, PureState, T, apply_gate, run_circuit, zero_state

__version__ = "0.1.0"
