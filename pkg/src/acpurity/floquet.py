"""Floquet decomposition of periodically driven qubit Hamiltonians.

The one-period propagator is built by midpoint stepping, diagonalized with
a complex Schur decomposition (for a unitary matrix the Schur vectors are an
orthonormal eigenbasis, also inside degenerate subspaces), and the periodic
Floquet modes are reconstructed on a uniform time grid. Matrix elements of
the bath coupling operators between the modes are then Fourier analysed.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .core import _step

DEGENERACY_TOL = 1e-10
DEFAULT_STEPS = 256
DEFAULT_SAMPLES = 128
DEFAULT_KMAX = 32


@dataclass(frozen=True)
class FloquetBasis:
    """Quasienergies and Floquet modes sampled over one drive period.

    ``modes[m]`` holds the modes at time ``m * period / n_samples`` as
    columns. A static (undriven) eigenbasis is represented with
    ``omega=None``, a single sample and unfolded eigenenergies.
    """

    quasienergies: np.ndarray
    modes: np.ndarray
    omega: Optional[float]
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.quasienergies.shape[0]

    @property
    def n_samples(self) -> int:
        return self.modes.shape[0]

    @property
    def period(self) -> float:
        return math.inf if self.omega is None else 2 * math.pi / self.omega

    @property
    def is_static(self) -> bool:
        return self.omega is None

    @property
    def times(self) -> np.ndarray:
        if self.is_static:
            return np.zeros(1)
        return np.arange(self.n_samples) * self.period / self.n_samples

    def frame(self, t: float = 0.0) -> np.ndarray:
        """Mode matrix at time t; only sample times (mod period) are stored."""
        if self.is_static:
            return self.modes[0]
        x = (t / self.period) * self.n_samples
        m = round(x)
        if abs(x - m) > 1e-6 * max(1.0, abs(x)):
            raise ValueError(f"t={t} is not on the Floquet sampling grid")
        return self.modes[m % self.n_samples]

    def to_basis(self, op: np.ndarray, t: float = 0.0) -> np.ndarray:
        v = self.frame(t)
        return v.conj().T @ op @ v

    def from_basis(self, op: np.ndarray, t: float = 0.0) -> np.ndarray:
        v = self.frame(t)
        return v @ op @ v.conj().T


@dataclass(frozen=True)
class FourierCoupling:
    """Fourier coefficients X_{ab,k} of <phi_a(t)| op |phi_b(t)>.

    ``coefficients[k + k_max]`` is the N x N matrix for harmonic k.
    """

    coefficients: np.ndarray
    k_max: int
    reconstruction_error: float = 0.0

    @property
    def harmonics(self) -> np.ndarray:
        return np.arange(-self.k_max, self.k_max + 1)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.coefficients[k + self.k_max]

    def reconstruct(self, omega: float, t) -> np.ndarray:
        phases = np.exp(1j * np.multiply.outer(np.atleast_1d(t), self.harmonics * omega))
        return np.einsum("tk,kab->tab", phases, self.coefficients)


def fold(energies, omega: float) -> np.ndarray:
    """Map energies into the first Brillouin zone [-omega/2, omega/2)."""
    e = np.asarray(energies, dtype=float)
    return e - omega * np.floor(e / omega + 0.5)


def monodromy(h: Callable[[float], np.ndarray], omega: float, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """One-period propagator U(2 pi / omega, 0)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    return _step(h, 0.0, 2 * math.pi / omega, steps)[-1]


def _fix_phases(v: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(v), axis=0)
    ph = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(ph) / ph)


def floquet_decompose(
    h: Callable[[float], np.ndarray],
    omega: float,
    steps: int = DEFAULT_STEPS,
    n_samples: int = DEFAULT_SAMPLES,
) -> FloquetBasis:
    """Quasienergies and periodic modes of a 2 pi / omega periodic Hamiltonian.

    ``steps`` is rounded up to a multiple of ``n_samples`` so that every
    sample time coincides with a step boundary.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    per = max(1, math.ceil(steps / n_samples))
    period = 2 * math.pi / omega
    props = _step(h, 0.0, period, per * n_samples, record_every=per)
    u_period = props[-1]
    props = props[:n_samples]

    schur, z = scipy.linalg.schur(u_period, output="complex")
    lam = np.diag(schur)
    gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(len(lam))
    degenerate = bool(gaps.min() < DEGENERACY_TOL)

    eps = fold(-np.angle(lam) / period, omega)
    order = np.argsort(eps, kind="stable")
    eps = eps[order]
    v0 = _fix_phases(z[:, order])

    times = np.arange(n_samples) * period / n_samples
    modes = np.array([(u @ v0) * np.exp(1j * eps * t) for u, t in zip(props, times)])
    return FloquetBasis(eps, modes, float(omega), degenerate)


def static_basis(h0: np.ndarray) -> FloquetBasis:
    """Eigenbasis of a time-independent Hamiltonian, energies ascending."""
    w, v = np.linalg.eigh(h0)
    gaps = np.abs(np.diff(w))
    return FloquetBasis(w, _fix_phases(v)[None], None, bool(np.any(gaps < DEGENERACY_TOL)))


def fourier_coupling(basis: FloquetBasis, coupling_op: np.ndarray, k_max: int = DEFAULT_KMAX) -> FourierCoupling:
    """Discrete Fourier transform of the coupling operator in the mode basis."""
    elements = np.einsum("mia,ij,mjb->mab", basis.modes.conj(), coupling_op, basis.modes)
    if basis.is_static:
        return FourierCoupling(elements, 0, 0.0)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    K = basis.n_samples
    if K < 2 * k_max + 2:
        raise ValueError(f"n_samples={K} aliases harmonics up to k_max={k_max}; need >= {2 * k_max + 2}")
    spectrum = np.fft.fft(elements, axis=0) / K
    ks = np.arange(-k_max, k_max + 1)
    coeffs = spectrum[ks % K]
    rebuilt = np.einsum("mk,kab->mab", np.exp(2j * np.pi * np.outer(np.arange(K), ks) / K), coeffs)
    err = float(np.max(np.abs(rebuilt - elements)))
    if err > 1e-6:
        warnings.warn(
            f"Fourier truncation at k_max={k_max} leaves a reconstruction error of {err:.2e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return FourierCoupling(coeffs, k_max, err)


def coherent_floquet_propagator(basis: FloquetBasis, t: float) -> np.ndarray:
    """U(t, 0) rebuilt from the Floquet decomposition (t on the sample grid)."""
    vt = basis.frame(t)
    return (vt * np.exp(-1j * basis.quasienergies * t)) @ basis.frame(0.0).conj().T


__all__ = [
    "FloquetBasis",
    "FourierCoupling",
    "fold",
    "monodromy",
    "floquet_decompose",
    "static_basis",
    "fourier_coupling",
    "coherent_floquet_propagator",
]
