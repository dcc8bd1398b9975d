"""Iterative deepening over circuit length with the GP as the inner solver."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

import numpy as np

from .entanglement import FitnessReport, entanglement_potential, fast_report, upper_bound
from .errors import UsageError
from .evolution import TIE_TOL, GaConfig, evolve, with_seed
from .genome import GateAlphabet, Genome, Topology, build_alphabet, decode, default_gate_set, format_circuit
from .simulator import Gate, _apply_inplace, zero_state, run_circuit

log = logging.getLogger(__name__)

# tolerance when comparing best potentials found at different lengths
PLATEAU_TOL = 1e-6


class CircuitEvaluator:
    """Memoized genome -> FitnessReport for one alphabet.

    The memo doubles as the pool of every circuit seen at this length, which
    the driver scans when minimizing CNOT counts.
    """

    def __init__(self, alphabet: GateAlphabet):
        self.alphabet = alphabet
        self.memo: dict[tuple[int, ...], FitnessReport] = {}

    def __call__(self, genome: Genome) -> FitnessReport:
        report = self.memo.get(genome.genes)
        if report is None:
            state = zero_state(self.alphabet.n_qubits)
            n = self.alphabet.n_qubits
            for g, options in zip(genome.genes, self.alphabet.per_position):
                _apply_inplace(state.amplitudes, options[g], n)
            report = fast_report(state)
            self.memo[genome.genes] = report
        return report


def count_cnots(circuit: Iterable[Gate]) -> int:
    return sum(1 for g in circuit if g.kind == "CNOT")


def extract_connection_graph(circuit: Iterable[Gate]) -> set[frozenset[int]]:
    return {frozenset((g.control, g.target)) for g in circuit if g.kind == "CNOT"}


def sorted_edges(graph: set[frozenset[int]]) -> list[list[int]]:
    return sorted(sorted(e) for e in graph)


def derive_seed(master: int, length: int, restart: int) -> int:
    ss = np.random.SeedSequence([master & 0xFFFFFFFFFFFFFFFF, length, restart])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class LengthRecord:
    length: int
    best_potential: float
    runs: int
    hit_target: bool

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "best_potential": self.best_potential,
            "runs": self.runs,
            "hit_target": self.hit_target,
        }


@dataclass
class SearchResult:
    n_qubits: int
    topology: str
    gate_set: str
    circuit: list[Gate]
    total_gates: int
    cnot_count: int
    potential: float
    upper_bound: int
    reached_upper_bound: bool
    target: float
    reached_target: bool
    connection_graph: set[frozenset[int]]
    restarts_used: int
    seed: int
    lengths: list[LengthRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "topology": self.topology,
            "gate_set": self.gate_set,
            "circuit": [str(g) for g in self.circuit],
            "circuit_text": format_circuit(self.circuit),
            "total_gates": self.total_gates,
            "cnot_count": self.cnot_count,
            "potential": self.potential,
            "upper_bound": self.upper_bound,
            "reached_upper_bound": self.reached_upper_bound,
            "target": self.target,
            "reached_target": self.reached_target,
            "connection_graph": sorted_edges(self.connection_graph),
            "restarts_used": self.restarts_used,
            "seed": self.seed,
            "lengths": [r.to_dict() for r in self.lengths],
        }


def _fewest_cnots(evaluator: CircuitEvaluator, threshold: float) -> list[Gate]:
    best = None
    for genes, report in evaluator.memo.items():
        if report.potential >= threshold:
            gates = decode(Genome(genes), evaluator.alphabet)
            key = count_cnots(gates)
            if best is None or key < best[0]:
                best = (key, gates)
    return best[1]


def find_minimal_circuit(
    n: int,
    topology: Topology,
    ga_cfg: GaConfig,
    max_length: int,
    restarts_per_length: int = 5,
    gate_set: Optional[str] = None,
    target: Optional[float] = None,
    min_length: int = 1,
    restrict_prefix: bool = True,
    plateau_lengths: Optional[int] = None,
    threads: int = 1,
    stats_sink: Optional[TextIO] = None,
) -> SearchResult:
    """Run the GP at lengths ``min_length..max_length`` and stop at the first that hits ``target``.

    ``target`` defaults to the upper bound. All restarts run at the first
    successful length and the circuit with fewest CNOTs among every
    evaluated target-hitting circuit is kept. If no length hits the target,
    the shortest length whose best potential matches the overall best
    (within ``PLATEAU_TOL``) is reported instead. ``plateau_lengths`` ends
    deepening early once that many consecutive lengths bring no improvement.
    """
    if n < 2:
        raise UsageError(f"search needs at least 2 qubits, got {n}")
    if max_length < 1 or min_length < 1 or min_length > max_length:
        raise UsageError(f"invalid length range [{min_length}, {max_length}]")
    if topology.n_qubits != n:
        raise UsageError(f"topology is for {topology.n_qubits} qubits, search for {n}")
    gate_set = gate_set or default_gate_set(n)
    bound = upper_bound(n)
    goal = float(bound if target is None else target)

    records: list[LengthRecord] = []
    pools: dict[int, CircuitEvaluator] = {}
    chosen: Optional[tuple[int, list[Gate]]] = None

    for length in range(min_length, max_length + 1):
        alphabet = build_alphabet(topology, gate_set, length, restrict_prefix)
        evaluator = CircuitEvaluator(alphabet)
        best = -np.inf
        hit = False
        runs = 0
        for r in range(restarts_per_length):
            cfg = with_seed(ga_cfg, derive_seed(ga_cfg.seed, length, r), target_fitness=goal)
            incumbent, _ = evolve(alphabet, evaluator, cfg, stats_sink=stats_sink, threads=threads)
            runs += 1
            best = max(best, incumbent.fitness)
            hit = hit or incumbent.fitness >= goal - TIE_TOL
        records.append(LengthRecord(length, float(best), runs, hit))
        log.info("length %d: best potential %.6f over %d runs", length, best, runs)
        if hit:
            chosen = (length, _fewest_cnots(evaluator, goal - TIE_TOL))
            break
        pools[length] = evaluator
        # keep only what the fallback can still need
        overall = max(rec.best_potential for rec in records)
        for L in list(pools):
            if records[L - min_length].best_potential < overall - PLATEAU_TOL:
                del pools[L]
        if plateau_lengths and len(records) > plateau_lengths:
            before = max(r.best_potential for r in records[:-plateau_lengths])
            if before >= overall - PLATEAU_TOL:
                log.info("no improvement over %d lengths, stopping", plateau_lengths)
                break

    if chosen is None:
        overall = max(rec.best_potential for rec in records)
        rec = next(r for r in records if r.best_potential >= overall - PLATEAU_TOL)
        chosen = (rec.length, _fewest_cnots(pools[rec.length], rec.best_potential - PLATEAU_TOL))

    length, circuit = chosen
    potential = entanglement_potential(run_circuit(circuit, n)).potential
    return SearchResult(
        n_qubits=n,
        topology=topology.name,
        gate_set=gate_set,
        circuit=circuit,
        total_gates=len(circuit),
        cnot_count=count_cnots(circuit),
        potential=potential,
        upper_bound=bound,
        reached_upper_bound=potential >= bound - 1e-9,
        target=goal,
        reached_target=potential >= goal - TIE_TOL,
        connection_graph=extract_connection_graph(circuit),
        restarts_used=records[length - min_length].runs,
        seed=ga_cfg.seed,
        lengths=records,
    )
