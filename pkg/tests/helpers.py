"""Independent reference computations used as test oracles."""
import itertools
from pathlib import Path

import numpy as np

from mmes_gp.simulator import PureState

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def basis_index(bits: str) -> int:
    # ket strings list qubit 0 leftmost
    return sum(int(b) << i for i, b in enumerate(bits))


def ket_sum(terms) -> np.ndarray:
    n = len(terms[0][0])
    amps = np.zeros(1 << n, dtype=complex)
    for bits, coeff in terms:
        amps[basis_index(bits)] += coeff
    return amps


def psi6_state() -> PureState:
    """The 16-coefficient six-qubit state, written out term by term from its Bell form."""
    bell = {
        "psi+": [("00", 1), ("11", 1)],
        "psi-": [("00", 1), ("11", -1)],
        "phi+": [("01", 1), ("10", 1)],
        "phi-": [("01", 1), ("10", -1)],
    }
    blocks = [
        ([("0000", 1), ("1111", -1)], "psi+"),
        ([("0011", 1), ("1100", 1)], "psi-"),
        ([("0101", 1), ("1010", 1)], "phi+"),
        ([("0110", 1), ("1001", -1)], "phi-"),
    ]
    terms = []
    for four, name in blocks:
        for head, c1 in four:
            for tail, c2 in bell[name]:
                terms.append((head + tail, c1 * c2 / 4))
    return PureState(6, ket_sum(terms))


def literal_partial_trace(amps: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    """rho_keep[a, b] = sum over traced bits of psi[a, x] conj(psi[b, x]), by explicit loops."""
    traced = [q for q in range(n) if q not in keep]
    k = len(keep)
    rho = np.zeros((1 << k, 1 << k), dtype=complex)
    for a in range(1 << k):
        for b in range(1 << k):
            total = 0j
            for x in range(1 << len(traced)):
                ia = ib = 0
                for bit, q in enumerate(keep):
                    ia |= ((a >> bit) & 1) << q
                    ib |= ((b >> bit) & 1) << q
                for bit, q in enumerate(traced):
                    ia |= ((x >> bit) & 1) << q
                    ib |= ((x >> bit) & 1) << q
                total += amps[ia] * np.conj(amps[ib])
            rho[a, b] = total
    return rho


def literal_partial_transpose(rho: np.ndarray, n: int, ys: tuple[int, ...]) -> np.ndarray:
    """Swap the Y bits between row and column index, entry by entry."""
    mask = sum(1 << q for q in ys)
    out = np.zeros_like(rho)
    for i in range(1 << n):
        for j in range(1 << n):
            i2 = (i & ~mask) | (j & mask)
            j2 = (j & ~mask) | (i & mask)
            out[i2, j2] = rho[i, j]
    return out


def literal_negativity(amps: np.ndarray, n: int, ys: tuple[int, ...]) -> float:
    rho = np.outer(amps, amps.conj())
    eigs = np.linalg.eigvals(literal_partial_transpose(rho, n, ys))
    return float(-eigs.real[eigs.real < 0].sum())


def permute_qubits(amps: np.ndarray, n: int, perm) -> np.ndarray:
    """Move qubit q to position perm[q]."""
    out = np.empty_like(amps)
    for i in range(1 << n):
        j = 0
        for q in range(n):
            j |= ((i >> q) & 1) << perm[q]
        out[j] = amps[i]
    return out


def canonical_key(amps: np.ndarray, n: int, decimals: int = 8):
    """Representative of a state's orbit under qubit permutations, up to global sign."""
    keys = []
    for perm in itertools.permutations(range(n)):
        p = permute_qubits(amps, n, perm)
        for sign in (1, -1):
            v = np.round(sign * p, decimals) + 0.0
            keys.append(tuple(np.concatenate([v.real, v.imag]).tolist()))
    return min(keys)
