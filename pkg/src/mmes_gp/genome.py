"""Fixed-length genome encoding of circuits over topology-constrained gate alphabets."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .entanglement import FitnessReport
from .errors import ConfigurationError, IntegrityError, UsageError
from .simulator import CNOT, Gate, H, T

GATE_SETS = ("H+CNOT", "H+CNOT+T")
TOPOLOGY_NAMES = ("spin_chain", "complete", "custom")


@dataclass(frozen=True)
class Topology:
    n_qubits: int
    cnot_pairs: tuple[tuple[int, int], ...]
    name: str = "custom"

    def __post_init__(self):
        if self.name not in TOPOLOGY_NAMES:
            raise ConfigurationError(f"unknown topology name {self.name!r}")
        pairs = tuple(sorted({(int(c), int(t)) for c, t in self.cnot_pairs}))
        for c, t in pairs:
            if c == t or not (0 <= c < self.n_qubits and 0 <= t < self.n_qubits):
                raise ConfigurationError(
                    f"CNOT pair ({c}, {t}) invalid for {self.n_qubits} qubits"
                )
        object.__setattr__(self, "cnot_pairs", pairs)

    @classmethod
    def spin_chain(cls, n: int) -> "Topology":
        pairs = [(i, j) for i in range(n) for j in range(n) if abs(i - j) == 1]
        return cls(n, tuple(pairs), "spin_chain")

    @classmethod
    def complete(cls, n: int) -> "Topology":
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        return cls(n, tuple(pairs), "complete")

    @classmethod
    def from_edges(cls, n: int, spec: str) -> "Topology":
        """Parse ``"0-1,1>2"``: ``a-b`` allows both directions, ``a>b`` only control a."""
        pairs = []
        for item in filter(None, (s.strip() for s in spec.split(","))):
            if ">" in item:
                c, t = item.split(">")
                pairs.append((int(c), int(t)))
            elif "-" in item:
                a, b = item.split("-")
                pairs += [(int(a), int(b)), (int(b), int(a))]
            else:
                raise ConfigurationError(f"cannot parse edge {item!r}")
        return cls(n, tuple(pairs), "custom")

    @classmethod
    def named(cls, name: str, n: int, edges: Optional[str] = None) -> "Topology":
        key = name.replace("-", "_")
        if key == "spin_chain":
            return cls.spin_chain(n)
        if key == "complete":
            return cls.complete(n)
        if key == "custom":
            if not edges:
                raise ConfigurationError("custom topology needs an edge list")
            return cls.from_edges(n, edges)
        raise ConfigurationError(f"unknown topology {name!r}")


def default_gate_set(n: int) -> str:
    # the phase gate only pays off from 7 qubits up
    return "H+CNOT" if n <= 6 else "H+CNOT+T"


@dataclass(frozen=True)
class GateAlphabet:
    per_position: tuple[tuple[Gate, ...], ...]
    n_qubits: int
    topology_name: str = "custom"
    gate_set: str = "H+CNOT"

    @property
    def length(self) -> int:
        return len(self.per_position)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([len(p) for p in self.per_position], dtype=np.int64)


def build_alphabet(
    topology: Topology, gate_set: str, length: int, restrict_prefix: bool = True
) -> GateAlphabet:
    """Enumerate the legal gates at every genome position.

    Order within a position: H by qubit, then T by qubit (if enabled), then
    CNOTs in sorted (control, target) order. With ``restrict_prefix`` the
    gate at 1-indexed position p may only touch qubits below ``min(n, 2p)``.
    """
    if length < 1:
        raise UsageError(f"genome length must be >= 1, got {length}")
    if gate_set not in GATE_SETS:
        raise ConfigurationError(f"unknown gate set {gate_set!r}; choose from {GATE_SETS}")
    n = topology.n_qubits
    if n >= 2 and not topology.cnot_pairs:
        raise ConfigurationError("topology allows no CNOT pairs")
    full: list[Gate] = [H(q) for q in range(n)]
    if gate_set == "H+CNOT+T":
        full += [T(q) for q in range(n)]
    full += [CNOT(c, t) for c, t in topology.cnot_pairs]

    positions = []
    for p in range(1, length + 1):
        limit = min(n, 2 * p) if restrict_prefix else n
        allowed = tuple(g for g in full if max(g.qubits) < limit)
        if not allowed:
            raise ConfigurationError(f"no legal gates at position {p}")
        positions.append(allowed)
    return GateAlphabet(tuple(positions), n, topology.name, gate_set)


@dataclass
class Genome:
    genes: tuple[int, ...]
    cached_fitness: Optional[FitnessReport] = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.genes)

    @property
    def fitness(self) -> float:
        if self.cached_fitness is None:
            raise UsageError("genome has not been evaluated")
        return self.cached_fitness.potential


def random_genome(alphabet: GateAlphabet, rng: np.random.Generator) -> Genome:
    return Genome(tuple(int(g) for g in rng.integers(0, alphabet.sizes)))


def decode(genome: Genome, alphabet: GateAlphabet) -> list[Gate]:
    if len(genome.genes) != alphabet.length:
        raise IntegrityError(
            f"genome length {len(genome.genes)} != alphabet length {alphabet.length}"
        )
    out = []
    for p, (g, options) in enumerate(zip(genome.genes, alphabet.per_position)):
        if not 0 <= g < len(options):
            raise IntegrityError(f"gene {g} at position {p} outside alphabet of {len(options)}")
        out.append(options[g])
    return out


def encode(gates: Sequence[Gate], alphabet: GateAlphabet) -> Genome:
    if len(gates) != alphabet.length:
        raise UsageError(f"circuit has {len(gates)} gates, alphabet length {alphabet.length}")
    genes = []
    for p, (gate, options) in enumerate(zip(gates, alphabet.per_position)):
        try:
            genes.append(options.index(gate))
        except ValueError:
            raise UsageError(f"gate {gate} not legal at position {p + 1}") from None
    return Genome(tuple(genes))


def format_circuit(gates: Iterable[Gate]) -> str:
    return "".join(f"{g}\n" for g in gates)


def parse_circuit(text: str) -> list[Gate]:
    """Parse one gate per line (``H q``, ``T q``, ``CNOT c t``); ``#`` starts a comment."""
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].upper()
        try:
            if kind in ("H", "T") and len(parts) == 2:
                gates.append(Gate(kind, int(parts[1])))
            elif kind in ("CNOT", "CX") and len(parts) == 3:
                gates.append(CNOT(int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"line {lineno}: cannot parse gate {raw.strip()!r}") from None
    return gates
