"""Bloch-Redfield dissipation for static and periodically driven qubits.

The master equation

    d rho/dt = -i[H(t), rho] - sum_j [sx_j, [Q_j, rho]] + i sum_j [sx_j, {P_j, rho}]

is written in the Floquet basis of the coherent dynamics. The bath kernels
are evaluated in frequency space: every Floquet transition (a, b, k) at
frequency nu = e_a - e_b + k*omega contributes S(|nu|)/8 to Q and
-i sign(nu) I(|nu|)/8 to P, weighted by the Fourier component X_{ab,k} of
the coupling operator. Principal-value (Lamb shift) parts are dropped.
The periodic generator is replaced by its time average, and by default a
secular filter removes couplings between coherences that rotate at
different frequencies.

Superoperators act on row-major vectorized density matrices, so
vec(A rho B) = kron(A, B.T) vec(rho).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import floquet as fl
from .bath import OhmicBath, WeakCouplingWarning, noise_power, spectral_density, transition_rate
from .core import NO_DRIVE, DriveSpec, SystemSpec, Waveform, build_hamiltonian, coupling_operators, time_dependent_hamiltonian

RWA_MODES = ("secular", "average")


@dataclass(frozen=True)
class Numerics:
    """Discretization knobs for the Floquet-Redfield pipeline."""

    steps_per_period: int = fl.DEFAULT_STEPS
    n_samples: int = fl.DEFAULT_SAMPLES
    k_max: int = fl.DEFAULT_KMAX
    rwa: str = "secular"
    secular_tol: float = 1e-6

    def __post_init__(self):
        if min(self.steps_per_period, self.n_samples, self.k_max) < 1 or self.secular_tol <= 0:
            raise ValueError("numerics values must be positive")
        if self.rwa not in RWA_MODES:
            raise ValueError(f"rwa must be one of {RWA_MODES}, got {self.rwa!r}")


def working_basis(system: SystemSpec, drive: DriveSpec = NO_DRIVE, numerics: Numerics = Numerics()) -> fl.FloquetBasis:
    """Static eigenbasis for an undriven system, Floquet basis otherwise."""
    if drive.waveform == Waveform.NONE:
        return fl.static_basis(build_hamiltonian(system))
    return fl.floquet_decompose(
        time_dependent_hamiltonian(system, drive),
        drive.omega,
        steps=numerics.steps_per_period,
        n_samples=numerics.n_samples,
    )


def _transition_frequencies(basis: fl.FloquetBasis, harmonics: np.ndarray) -> np.ndarray:
    eps = basis.quasienergies
    omega = 0.0 if basis.is_static else basis.omega
    return eps[None, :, None] - eps[None, None, :] + harmonics[:, None, None] * omega


def _lab_average(basis: fl.FloquetBasis, coupling: fl.FourierCoupling, weighted: np.ndarray) -> np.ndarray:
    """Period average of sum_k w_k e^{ik omega t} |phi_a(t)><phi_b(t)| in the lab frame."""
    if basis.is_static:
        v = basis.modes[0]
        return v @ weighted[0] @ v.conj().T
    phases = np.exp(1j * np.outer(basis.times, coupling.harmonics) * basis.omega)
    in_basis = np.einsum("mk,kab->mab", phases, weighted)
    lab = np.einsum("mia,mab,mjb->mij", basis.modes, in_basis, basis.modes.conj())
    return lab.mean(axis=0)


def _coupling(system, drive, basis, numerics, qubit):
    if basis is None:
        basis = working_basis(system, drive, numerics)
    if not 0 <= qubit < system.n_qubits:
        raise IndexError(f"qubit {qubit} out of range")
    op = coupling_operators(system.n_qubits)[qubit]
    fc = fl.fourier_coupling(basis, op, numerics.k_max)
    return basis, fc, _transition_frequencies(basis, fc.harmonics)


def q_operator(
    system: SystemSpec,
    drive: DriveSpec,
    bath: OhmicBath,
    qubit: int,
    numerics: Numerics = Numerics(),
    basis: Optional[fl.FloquetBasis] = None,
) -> np.ndarray:
    """Time-averaged decoherence kernel Q_j in the lab frame.

    tr(sx_j Q_j) is what enters the purity decay rate.
    """
    basis, fc, nu = _coupling(system, drive, basis, numerics, qubit)
    weighted = noise_power(bath, np.abs(nu)) * fc.coefficients / 8
    return _lab_average(basis, fc, weighted)


def p_operator(
    system: SystemSpec,
    drive: DriveSpec,
    bath: OhmicBath,
    qubit: int,
    numerics: Numerics = Numerics(),
    basis: Optional[fl.FloquetBasis] = None,
) -> np.ndarray:
    """Time-averaged relaxation kernel P_j in the lab frame."""
    basis, fc, nu = _coupling(system, drive, basis, numerics, qubit)
    weighted = -0.125j * np.sign(nu) * spectral_density(bath, np.abs(nu)) * fc.coefficients
    return _lab_average(basis, fc, weighted)


@dataclass(frozen=True)
class DissipativeGenerator:
    """Time-averaged Redfield tensor in a working basis.

    With rho in the working basis, d rho_ab/dt = -i (e_a - e_b) rho_ab -
    sum_cd lambda_tensor[a, b, c, d] rho_cd.
    """

    lambda_tensor: np.ndarray
    basis: fl.FloquetBasis
    q_ops: list = field(default_factory=list)
    p_ops: list = field(default_factory=list)
    rwa: str = "secular"

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def quasienergies(self) -> np.ndarray:
        return self.basis.quasienergies

    @property
    def basis_tag(self) -> str:
        return "static" if self.basis.is_static else "floquet"

    def superoperator(self) -> np.ndarray:
        """Full generator L with d vec(rho)/dt = L vec(rho)."""
        n = self.dim
        e = self.quasienergies
        coherent = -1j * (e[:, None] - e[None, :]).ravel()
        return np.diag(coherent) - self.lambda_tensor.reshape(n * n, n * n)

    def dissipator(self, rho: np.ndarray) -> np.ndarray:
        """Lambda rho, with rho in the working basis."""
        n = self.dim
        return (self.lambda_tensor.reshape(n * n, n * n) @ rho.ravel()).reshape(n, n)


def _validity_check(system: SystemSpec, drive: DriveSpec, bath: OhmicBath):
    scale = max([abs(d) for d in system.delta] + [4 * abs(system.j_coupling)])
    if drive.is_driven:
        scale = max(scale, drive.omega)
    if bath.alpha > 0 and scale > 0 and bath.alpha * math.log(max(bath.omega_c / scale, 1.0)) > 0.1:
        warnings.warn(
            "alpha*ln(omega_c/E) > 0.1: neglected renormalization effects may matter",
            WeakCouplingWarning,
            stacklevel=3,
        )


def build_generator(
    system: SystemSpec,
    drive: DriveSpec,
    bath: OhmicBath,
    numerics: Numerics = Numerics(),
    basis: Optional[fl.FloquetBasis] = None,
) -> DissipativeGenerator:
    """Assemble the time-averaged Redfield tensor for all qubit baths."""
    if basis is None:
        basis = working_basis(system, drive, numerics)
    n = system.dim
    if basis.dim != n:
        raise ValueError(f"basis dimension {basis.dim} does not match system dimension {n}")
    _validity_check(system, drive, bath)

    eye = np.eye(n)
    dissipator = np.zeros((n * n, n * n), dtype=complex)
    q_ops, p_ops = [], []
    for j, op in enumerate(coupling_operators(system.n_qubits)):
        fc = fl.fourier_coupling(basis, op, numerics.k_max)
        nu = _transition_frequencies(basis, fc.harmonics)
        x = fc.coefficients
        # G = Q - iP, harmonic by harmonic
        g = transition_rate(bath, nu) * x / 8
        m = np.einsum("kca,kcb->ab", x.conj(), g)
        jumps = np.einsum("kab,kcd->acbd", x, g.conj()) + np.einsum("kab,kcd->acbd", g, x.conj())
        dissipator += jumps.reshape(n * n, n * n) - np.kron(m, eye) - np.kron(eye, m.conj())
        q_ops.append(_lab_average(basis, fc, noise_power(bath, np.abs(nu)) * x / 8))
        p_ops.append(_lab_average(basis, fc, -0.125j * np.sign(nu) * spectral_density(bath, np.abs(nu)) * x))

    lam = -dissipator
    if numerics.rwa == "secular":
        w = (basis.quasienergies[:, None] - basis.quasienergies[None, :]).ravel()
        lam = np.where(np.abs(w[:, None] - w[None, :]) < numerics.secular_tol, lam, 0.0)
    return DissipativeGenerator(lam.reshape(n, n, n, n), basis, q_ops, p_ops, numerics.rwa)


@dataclass(frozen=True)
class DissipativePropagator:
    """Linear map W with rho_out[a, b] = sum_cd w_tensor[a, b, c, d] rho_in[c, d]."""

    w_tensor: np.ndarray
    duration: float
    basis: Optional[fl.FloquetBasis] = None

    @property
    def dim(self) -> int:
        return self.w_tensor.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        n = self.dim
        return self.w_tensor.reshape(n * n, n * n)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        n = self.dim
        return (self.matrix @ np.asarray(rho, dtype=complex).ravel()).reshape(n, n)

    def to_lab(self) -> "DissipativePropagator":
        """Re-express W in the computational basis.

        For a driven system the duration has to sit on the Floquet sampling
        grid (an integer number of periods is always fine).
        """
        if self.basis is None:
            return self
        v_in = self.basis.frame(0.0)
        v_out = self.basis.frame(self.duration)
        mat = np.kron(v_out, v_out.conj()) @ self.matrix @ np.kron(v_in.conj().T, v_in.T)
        n = self.dim
        return DissipativePropagator(mat.reshape(n, n, n, n), self.duration, None)

    @classmethod
    def from_unitary(cls, u: np.ndarray, duration: float = 0.0) -> "DissipativePropagator":
        """Coherent map rho -> U rho U^dagger."""
        n = u.shape[0]
        return cls(np.kron(u, u.conj()).reshape(n, n, n, n), duration)


def _check_time(generator: DissipativeGenerator, t: float):
    if not t >= 0:
        raise ValueError("evolution time must be non-negative")
    if not np.all(np.isfinite(generator.lambda_tensor)):
        raise ValueError("generator has non-finite entries")


def dissipative_propagator(generator: DissipativeGenerator, t: float) -> DissipativePropagator:
    _check_time(generator, t)
    n = generator.dim
    w = scipy.linalg.expm(generator.superoperator() * t)
    return DissipativePropagator(w.reshape(n, n, n, n), float(t), generator.basis)


def evolve(generator: DissipativeGenerator, rho: np.ndarray, t: float) -> np.ndarray:
    """Density matrix (working basis) after time t."""
    _check_time(generator, t)
    rho = np.asarray(rho, dtype=complex)
    n = generator.dim
    if rho.shape != (n, n):
        raise ValueError(f"rho must be {n}x{n}")
    out = scipy.linalg.expm(generator.superoperator() * t) @ rho.ravel()
    return out.reshape(n, n)


def evolve_lab(generator: DissipativeGenerator, rho: np.ndarray, t: float) -> np.ndarray:
    """Like :func:`evolve` but with rho given and returned in the computational basis."""
    basis = generator.basis
    out = evolve(generator, basis.to_basis(np.asarray(rho, dtype=complex), 0.0), t)
    return basis.from_basis(out, t)
