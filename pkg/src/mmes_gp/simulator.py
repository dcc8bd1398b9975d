"""Dense statevector simulation over the {H, T, CNOT} gate set.

Qubit ``q`` is bit ``q`` of the basis-state index (little-endian), so
``|10>`` written as a ket with qubit 0 leftmost is basis index 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .errors import ConfigurationError, UsageError

MAX_QUBITS = 12
GATE_KINDS = ("H", "T", "CNOT")

_SQRT1_2 = 1.0 / np.sqrt(2.0)
_T_PHASE = np.exp(1j * np.pi / 4)


@dataclass(frozen=True, order=True)
class Gate:
    kind: str
    target: int
    control: Optional[int] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise UsageError(f"unknown gate kind {self.kind!r}")
        if self.target < 0:
            raise UsageError(f"negative target qubit {self.target}")
        if self.kind == "CNOT":
            if self.control is None or self.control < 0:
                raise UsageError("CNOT needs a non-negative control qubit")
            if self.control == self.target:
                raise UsageError("CNOT control and target must differ")
        elif self.control is not None:
            raise UsageError(f"{self.kind} takes no control qubit")

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    def __str__(self) -> str:
        if self.kind == "CNOT":
            return f"CNOT {self.control} {self.target}"
        return f"{self.kind} {self.target}"


def H(q: int) -> Gate:
    return Gate("H", q)


def T(q: int) -> Gate:
    return Gate("T", q)


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", target, control)


@dataclass(frozen=True)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise UsageError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(amps.size).bit_length() - 1
        if amps.size != 1 << n or n < 1:
            raise UsageError(f"amplitude count {amps.size} is not a power of two >= 2")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ConfigurationError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def zero_state(n: int) -> PureState:
    _check_n(n)
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return PureState(n, amps)


@lru_cache(maxsize=None)
def _cnot_indices(n: int, control: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    src = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    return src, src | (1 << target)


def _validate(gate: Gate, n: int) -> None:
    for q in gate.qubits:
        if q >= n:
            raise UsageError(f"gate {gate} touches qubit {q} but state has {n} qubits")


def _apply_inplace(amps: np.ndarray, gate: Gate, n: int) -> None:
    if gate.kind == "CNOT":
        lo, hi = _cnot_indices(n, gate.control, gate.target)
        amps[lo], amps[hi] = amps[hi], amps[lo]
        return
    q = gate.target
    view = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    if gate.kind == "H":
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = (a0 + a1) * _SQRT1_2
        view[:, 1, :] = (a0 - a1) * _SQRT1_2
    else:
        view[:, 1, :] *= _T_PHASE


def apply_gate(state: PureState, gate: Gate) -> PureState:
    """Return a new state with ``gate`` applied; the input is untouched."""
    _validate(gate, state.n_qubits)
    amps = state.amplitudes.copy()
    _apply_inplace(amps, gate, state.n_qubits)
    return PureState(state.n_qubits, amps)


def run_circuit(gates: Iterable[Gate], n: int) -> PureState:
    state = zero_state(n)
    amps = state.amplitudes
    for g in gates:
        _validate(g, n)
        _apply_inplace(amps, g, n)
    return state
