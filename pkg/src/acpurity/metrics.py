"""Purity, gate purity, fidelity and averages over all pure states.

Averages over the unitarily invariant ensemble of pure states reduce to the
second and fourth moments of the state amplitudes,

    mean(c_m c_n^*) = delta_mn / N
    mean(c_m c_n^* c_m' c_n'^*) = (delta_mn delta_m'n' + delta_mn' delta_nm') / (N (N + 1)),

from which every quantity here is evaluated in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import coupling_operators, unitarity_error
from .redfield import DissipativePropagator


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.einsum("ab,ba->", rho, rho).real)


def purity_decay_rate(q_ops: Sequence[np.ndarray], n_dim: int | None = None) -> float:
    """Initial decay rate of the gate purity, 4/(N+1) sum_j tr(sx_j Q_j).

    The double-commutator term is the only one that removes purity at t=0,
    so the relaxation kernels P_j do not enter.
    """
    q_ops = [np.asarray(q) for q in q_ops]
    if not q_ops:
        return 0.0
    n = q_ops[0].shape[0] if n_dim is None else n_dim
    n_qubits = int(round(math.log2(n)))
    if 2**n_qubits != n or len(q_ops) != n_qubits or any(q.shape != (n, n) for q in q_ops):
        raise ValueError("need one N x N kernel per qubit")
    total = sum(np.trace(s @ q) for s, q in zip(coupling_operators(n_qubits), q_ops))
    return float(4 * total.real / (n + 1))


def _w_tensor(w) -> np.ndarray:
    return w.w_tensor if isinstance(w, DissipativePropagator) else np.asarray(w)


def gate_purity(w, n_dim: int | None = None) -> float:
    """Output purity averaged over all pure inputs; basis independent."""
    w4 = _w_tensor(w)
    n = w4.shape[0] if n_dim is None else n_dim
    if w4.shape != (n, n, n, n):
        raise ValueError("W must have shape (N, N, N, N)")
    a = np.einsum("abcd,badc->", w4, w4)
    b = np.einsum("abcc,badd->", w4, w4)
    return float(((a + b) / (n * (n + 1))).real)


def gate_fidelity(w, ideal: np.ndarray, n_dim: int | None = None) -> float:
    """Overlap tr(U rho U^dagger W[rho]) averaged over all pure inputs.

    W and ``ideal`` must be expressed in the same basis.
    """
    w4 = _w_tensor(w)
    u = np.asarray(ideal, dtype=complex)
    n = w4.shape[0] if n_dim is None else n_dim
    if u.shape != (n, n) or w4.shape != (n, n, n, n):
        raise ValueError("dimension mismatch between W and the ideal gate")
    if unitarity_error(u) > 1e-9:
        raise ValueError("ideal gate is not unitary")
    trace_of_identity = np.einsum("aacc->", w4)
    overlap = np.einsum("an,abnm,bm->", u.conj(), w4, u)
    return float(((trace_of_identity + overlap) / (n * (n + 1))).real)


def ensemble_avg_1(a: np.ndarray):
    """mean over pure states of tr(rho A) = tr(A) / N."""
    a = np.asarray(a)
    return np.trace(a) / a.shape[0]


def ensemble_avg_2(a: np.ndarray, b: np.ndarray):
    """mean over pure states of tr(rho A rho B)."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("A and B must be square matrices of equal size")
    n = a.shape[0]
    return (np.trace(a) * np.trace(b) + np.trace(a @ b)) / (n * (n + 1))


def haar_states(n_dim: int, size: int, seed: int) -> np.ndarray:
    """``size`` uniformly distributed pure state vectors, shape (size, N)."""
    if n_dim < 2:
        raise ValueError("n_dim must be >= 2")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((size, n_dim)) + 1j * rng.standard_normal((size, n_dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_sample(n_dim: int, seed: int) -> np.ndarray:
    """One uniformly distributed pure density matrix."""
    psi = haar_states(n_dim, 1, seed)[0]
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class GateReport:
    purity_loss: float
    fidelity_defect: float
    decay_rate: float
    duration: float

    def __post_init__(self):
        for name in ("purity_loss", "fidelity_defect", "decay_rate", "duration"):
            if not math.isnan(getattr(self, name)) and getattr(self, name) < -1e-9:
                raise ValueError(f"{name} is negative")
