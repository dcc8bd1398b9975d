"""Exhaustive enumeration of all circuits up to a length cap.

Enumeration uses the unrestricted alphabet (no prefix rule), so a reported
minimum holds over every circuit over the gate set and topology.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .entanglement import entanglement_potential, potential_batch, upper_bound
from .errors import ConfigurationError, NumericalIntegrityError, UsageError
from .genome import Topology, build_alphabet, default_gate_set, format_circuit
from .simulator import Gate, _apply_inplace, run_circuit

DEFAULT_BUDGET = 10**8
HIT_TOL = 1e-9


@dataclass
class OracleReport:
    n_qubits: int
    topology: str
    gate_set: str
    length_cap: int
    target: float
    minimal_length: Optional[int]
    minimal_cnot_at_that_length: Optional[int]
    witness_circuit: list[Gate]
    circuits_enumerated: int
    best_potential_by_length: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "topology": self.topology,
            "gate_set": self.gate_set,
            "length_cap": self.length_cap,
            "target": self.target,
            "minimal_length": self.minimal_length if self.minimal_length is not None
            else f"not found <= {self.length_cap}",
            "minimal_cnot_at_that_length": self.minimal_cnot_at_that_length,
            "witness_circuit": [str(g) for g in self.witness_circuit],
            "witness_text": format_circuit(self.witness_circuit),
            "circuits_enumerated": self.circuits_enumerated,
            "best_potential_by_length": {str(k): v for k, v in self.best_potential_by_length.items()},
        }


def _gate_matrix(gate: Gate, n: int) -> np.ndarray:
    eye = np.eye(1 << n, dtype=complex)
    for col in range(1 << n):
        _apply_inplace(eye[:, col], gate, n)
    return eye


@lru_cache(maxsize=None)
def _leaf_operator(gates: tuple[Gate, ...], n: int) -> np.ndarray:
    # rows: every gate applied to one state, as one (A * 2^n, 2^n) matrix
    return np.concatenate([_gate_matrix(g, n) for g in gates], axis=0)


def _subtree(first: int, gates: tuple[Gate, ...], cnots: np.ndarray, n: int, length: int,
             threshold: float, stop_early: bool):
    """Enumerate circuits of ``length`` starting with ``gates[first]``.

    Returns (count, best potential, best (cnot, genes) among hits or None).
    """
    leaf = _leaf_operator(gates, n)
    dim = 1 << n
    size = len(gates)
    best_pot = -np.inf
    best_hit = None
    count = 0
    state0 = np.zeros(dim, dtype=complex)
    state0[0] = 1.0
    _apply_inplace(state0, gates[first], n)

    # depth-first over prefixes of length - 1, then batch the final gate
    stack = [((first,), state0)]
    while stack:
        prefix, state = stack.pop()
        if len(prefix) == length - 1 or length == 1:
            if length == 1:
                pots = potential_batch(state[None, :])
                finals = [()]
                prefix_cnots = int(cnots[first])
                finals_cnots = np.array([prefix_cnots])
            else:
                pots = potential_batch((leaf @ state).reshape(size, dim))
                finals = [(g,) for g in range(size)]
                finals_cnots = int(cnots[list(prefix)].sum()) + cnots
            count += len(finals)
            best_pot = max(best_pot, float(pots.max()))
            hits = np.flatnonzero(pots >= threshold)
            for h in hits:
                cand = (int(finals_cnots[h]), prefix + finals[h])
                if best_hit is None or cand < best_hit:
                    best_hit = cand
            if best_hit is not None and stop_early:
                break
            continue
        for g in range(size - 1, -1, -1):
            nxt = state.copy()
            _apply_inplace(nxt, gates[g], n)
            stack.append((prefix + (g,), nxt))
    return count, best_pot, best_hit


def exhaustive_min_search(
    n: int,
    topology: Topology,
    gate_set: Optional[str] = None,
    length_cap: int = 3,
    target: Optional[float] = None,
    minimize_cnots: bool = True,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> OracleReport:
    """Find the shortest circuit whose potential reaches ``target`` (default: the upper bound)."""
    if n < 2:
        raise UsageError(f"oracle needs at least 2 qubits, got {n}")
    if length_cap < 1:
        raise ConfigurationError(f"length cap must be >= 1, got {length_cap}")
    gate_set = gate_set or default_gate_set(n)
    alphabet = build_alphabet(topology, gate_set, 1, restrict_prefix=False)
    gates = alphabet.per_position[0]
    if len(gates) ** length_cap > budget:
        raise ConfigurationError(
            f"{len(gates)}^{length_cap} circuits exceeds the enumeration budget {budget}"
        )
    goal = float(upper_bound(n) if target is None else target)
    cnots = np.array([g.kind == "CNOT" for g in gates], dtype=np.int64)

    total = 0
    best_by_length: dict[int, float] = {}
    for length in range(1, length_cap + 1):
        args = [(f, gates, cnots, n, length, goal - HIT_TOL, not minimize_cnots) for f in range(len(gates))]
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda a: _subtree(*a), args))
        else:
            parts = [_subtree(*a) for a in args]
        total += sum(p[0] for p in parts)
        best_by_length[length] = max(p[1] for p in parts)
        hits = [p[2] for p in parts if p[2] is not None]
        if hits:
            cnot_count, genes = min(hits)
            # min over (cnots, genes) does not depend on enumeration order
            witness = [gates[g] for g in genes]
            pot = entanglement_potential(run_circuit(witness, n)).potential
            if pot < goal - HIT_TOL:
                raise NumericalIntegrityError(f"witness re-simulates to {pot}, below target {goal}")
            return OracleReport(n, topology.name, gate_set, length_cap, goal, length, cnot_count,
                                witness, total, best_by_length)
    return OracleReport(n, topology.name, gate_set, length_cap, goal, None, None, [], total, best_by_length)
