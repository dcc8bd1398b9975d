"""Multipartite entanglement potential: summed von Neumann entropy over bipartitions.

For a pure state the reduced density on a subset ``Y`` is ``A A^dagger`` where
``A`` is the amplitude vector reshaped with rows indexed by the ``Y`` bits and
columns by the complement bits. Every entropy is in bits, so a maximally mixed
``k``-qubit reduction scores exactly ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import ConfigurationError, NumericalIntegrityError, UsageError
from .simulator import PureState

NEG_EIG_TOL = 1e-9
TRACE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
NEGATIVITY_MAX_QUBITS = 8


@dataclass(frozen=True, order=True)
class Bipartition:
    y_mask: int
    n_qubits: int

    @property
    def size(self) -> int:
        return bin(self.y_mask).count("1")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if self.y_mask >> q & 1)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if not self.y_mask >> q & 1)

    def is_canonical(self) -> bool:
        k = self.size
        if not 1 <= 2 * k <= self.n_qubits or k == 0:
            return False
        return 2 * k < self.n_qubits or bool(self.y_mask & 1)


@dataclass
class FitnessReport:
    potential: float
    per_bipartition: list[tuple[Bipartition, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "potential": self.potential,
            "per_bipartition": [
                {"qubits": list(b.qubits), "entropy": s} for b, s in self.per_bipartition
            ],
        }


@lru_cache(maxsize=None)
def _bipartitions(n: int) -> tuple[Bipartition, ...]:
    out = []
    for k in range(1, n // 2 + 1):
        for mask in range(1, 1 << n):
            b = Bipartition(mask, n)
            if b.size == k and b.is_canonical():
                out.append(b)
    return tuple(out)


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """Canonical bipartitions ordered by size of the kept side, then by mask."""
    if n < 2:
        raise UsageError(f"bipartitions need at least 2 qubits, got {n}")
    return list(_bipartitions(n))


def upper_bound(n: int) -> int:
    if n < 2:
        raise UsageError(f"upper bound needs at least 2 qubits, got {n}")
    total = 0
    for k in range(1, n // 2 + 1):
        count = comb(n, k)
        if 2 * k == n:
            count //= 2
        total += k * count
    return total


@lru_cache(maxsize=None)
def _coefficient_index(n: int, y_mask: int) -> np.ndarray:
    """Basis index for (Y-bit pattern, complement-bit pattern) pairs."""
    ys = [q for q in range(n) if y_mask >> q & 1]
    xs = [q for q in range(n) if not y_mask >> q & 1]

    def scatter(patterns: np.ndarray, qubits: list[int]) -> np.ndarray:
        out = np.zeros_like(patterns)
        for bit, q in enumerate(qubits):
            out |= ((patterns >> bit) & 1) << q
        return out

    rows = scatter(np.arange(1 << len(ys)), ys)
    cols = scatter(np.arange(1 << len(xs)), xs)
    return rows[:, None] | cols[None, :]


def coefficient_matrix(state: PureState, b: Bipartition) -> np.ndarray:
    if b.n_qubits != state.n_qubits:
        raise UsageError(
            f"bipartition is over {b.n_qubits} qubits, state has {state.n_qubits}"
        )
    if not 0 < b.y_mask < 1 << b.n_qubits:
        raise UsageError(f"invalid subset mask {b.y_mask:#b}")
    return state.amplitudes[_coefficient_index(b.n_qubits, b.y_mask)]


def reduced_density(state: PureState, b: Bipartition) -> np.ndarray:
    """Reduced density matrix on the Y side, indexed by Y-bit patterns (little-endian)."""
    a = coefficient_matrix(state, b)
    return a @ a.conj().T


def _entropy_from_eigs(eigs: np.ndarray) -> np.ndarray:
    """Entropy in bits along the last axis; 0 log 0 = 0, tiny negatives clamp to 0."""
    low = eigs.min()
    if low < -NEG_EIG_TOL:
        raise NumericalIntegrityError(
            f"density matrix has eigenvalue {low:.3e} below -{NEG_EIG_TOL}"
        )
    if eigs.ndim == 1:
        lam = eigs[eigs > 0]
        lam = np.minimum(lam, 1.0)
        return -(lam @ np.log2(lam))
    lam = np.clip(eigs, 0.0, 1.0)
    logs = np.log2(lam, out=np.zeros_like(lam), where=lam > 0)
    return -(lam * logs).sum(axis=-1)


def vn_entropy(rho: np.ndarray) -> float:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise NumericalIntegrityError("density matrix is not hermitian")
    tr = rho.trace().real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NumericalIntegrityError(f"density matrix trace {tr!r} deviates from 1")
    eigs = np.linalg.eigvalsh(rho)
    return max(float(_entropy_from_eigs(eigs)), 0.0)


def entanglement_potential(state: PureState) -> FitnessReport:
    n = state.n_qubits
    if n < 2:
        raise UsageError("entanglement potential needs at least 2 qubits")
    per = [(b, vn_entropy(reduced_density(state, b))) for b in enumerate_bipartitions(n)]
    return FitnessReport(sum(s for _, s in per), per)


@lru_cache(maxsize=None)
def _stacked_indices(n: int) -> tuple[tuple[int, np.ndarray], ...]:
    groups: dict[int, list[np.ndarray]] = {}
    for b in _bipartitions(n):
        groups.setdefault(b.size, []).append(_coefficient_index(n, b.y_mask))
    return tuple((k, np.stack(v)) for k, v in sorted(groups.items()))


def bipartition_entropies(amplitudes: np.ndarray) -> np.ndarray:
    """Entropies of every canonical bipartition for a batch of states.

    ``amplitudes`` has shape ``(2**n,)`` or ``(batch, 2**n)``; the result has
    one column per bipartition, in ``enumerate_bipartitions`` order.
    """
    amps = np.asarray(amplitudes, dtype=complex)
    single = amps.ndim == 1
    if single:
        amps = amps[None, :]
    n = amps.shape[1].bit_length() - 1
    cols = []
    for _, idx in _stacked_indices(n):
        a = amps[:, idx]
        rho = a @ np.swapaxes(a.conj(), -1, -2)
        cols.append(_entropy_from_eigs(np.linalg.eigvalsh(rho)))
    out = np.maximum(np.concatenate(cols, axis=1), 0.0)
    return out[0] if single else out


def potential_batch(amplitudes: np.ndarray) -> np.ndarray:
    return bipartition_entropies(amplitudes).sum(axis=-1)


def fast_report(state: PureState) -> FitnessReport:
    """Same result as ``entanglement_potential`` via the batched path, skipping validation."""
    ents = bipartition_entropies(state.amplitudes)
    bs = _bipartitions(state.n_qubits)
    return FitnessReport(float(ents.sum()), list(zip(bs, ents.tolist())))


def partial_transpose(rho: np.ndarray, n: int, y_mask: int) -> np.ndarray:
    """Transpose the qubits in ``y_mask`` of an ``n``-qubit density matrix."""
    t = rho.reshape((2,) * (2 * n))
    # row axis i (C order) is qubit n-1-i; column axes follow at offset n
    perm = list(range(2 * n))
    for q in range(n):
        if y_mask >> q & 1:
            r, c = n - 1 - q, 2 * n - 1 - q
            perm[r], perm[c] = c, r
    return t.transpose(perm).reshape(1 << n, 1 << n)


def negativity(state: PureState, b: Bipartition, max_qubits: int = NEGATIVITY_MAX_QUBITS) -> float:
    n = state.n_qubits
    if n > max_qubits:
        raise ConfigurationError(f"negativity is capped at {max_qubits} qubits, got {n}")
    if b.n_qubits != n:
        raise UsageError(f"bipartition is over {b.n_qubits} qubits, state has {n}")
    psi = state.amplitudes
    rho = np.outer(psi, psi.conj())
    eigs = np.linalg.eigvalsh(partial_transpose(rho, n, b.y_mask))
    return max(float((np.abs(eigs).sum() - 1.0) / 2.0), 0.0)
