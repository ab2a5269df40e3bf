"""Pauli algebra, Hamiltonians and coherent propagation for one or two qubits.

Units: hbar = k_B = 1. Energies are given in units of a reference energy
(the tunnel splitting for single-qubit studies, the exchange coupling J for
two-qubit studies) and times in its inverse.

Two-qubit states are ordered as |q1 q2> with qubit 1 (index 0) the most
significant bit.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg

Hamiltonian = Union[np.ndarray, Callable[[float], np.ndarray]]

SIGMA = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-9


class Interaction(str, enum.Enum):
    HEISENBERG = "heisenberg"
    ISING_XX = "ising_xx"
    NONE = "none"


class Waveform(str, enum.Enum):
    NONE = "none"
    HARMONIC = "harmonic"
    RECTANGULAR = "rectangular"


class Axis(str, enum.Enum):
    X = "x"
    Z = "z"


def _tuple_of_floats(values, n, name):
    if np.isscalar(values):
        values = [values] * n
    values = tuple(float(v) for v in values)
    if len(values) != n:
        raise ValueError(f"{name} needs {n} entries, got {len(values)}")
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{name} must be finite")
    return values


@dataclass(frozen=True)
class SystemSpec:
    """Static qubit Hamiltonian parameters.

    ``delta`` and ``epsilon`` hold one tunnel splitting and one bias per
    qubit. ``j_coupling`` multiplies either the isotropic exchange
    sigma_1 . sigma_2 or the Ising term sigma_1^x sigma_2^x.
    """

    n_qubits: int = 1
    delta: Sequence[float] = (1.0,)
    epsilon: Sequence[float] = (0.0,)
    j_coupling: float = 0.0
    interaction: Interaction = Interaction.NONE

    def __post_init__(self):
        if self.n_qubits not in (1, 2):
            raise ValueError(f"n_qubits must be 1 or 2, got {self.n_qubits}")
        object.__setattr__(self, "delta", _tuple_of_floats(self.delta, self.n_qubits, "delta"))
        object.__setattr__(
            self, "epsilon", _tuple_of_floats(self.epsilon, self.n_qubits, "epsilon")
        )
        object.__setattr__(self, "interaction", Interaction(self.interaction))
        if not math.isfinite(self.j_coupling):
            raise ValueError("j_coupling must be finite")
        if self.n_qubits == 1 and (self.j_coupling != 0 or self.interaction != Interaction.NONE):
            raise ValueError("a single qubit cannot carry a qubit-qubit coupling")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def single(cls, delta: float = 1.0, epsilon: float = 0.0) -> "SystemSpec":
        return cls(1, (delta,), (epsilon,))

    @classmethod
    def pair(
        cls,
        j_coupling: float = 1.0,
        interaction: Interaction | str = Interaction.HEISENBERG,
        delta: Sequence[float] = (0.0, 0.0),
        epsilon: Sequence[float] = (0.0, 0.0),
    ) -> "SystemSpec":
        return cls(2, delta, epsilon, j_coupling, Interaction(interaction))


@dataclass(frozen=True)
class DriveSpec:
    """A periodic drive f(t) coupling to ``axis`` of ``target_qubit``.

    Harmonic: f(t) = (A/2) cos(omega t). Rectangular: f(t) = +A/2 on the
    first half period and -A/2 on the second.
    """

    waveform: Waveform = Waveform.NONE
    amplitude: float = 0.0
    omega: float = 1.0
    target_qubit: int = 0
    axis: Axis = Axis.X

    def __post_init__(self):
        object.__setattr__(self, "waveform", Waveform(self.waveform))
        object.__setattr__(self, "axis", Axis(self.axis))
        if not (math.isfinite(self.amplitude) and math.isfinite(self.omega)):
            raise ValueError("drive parameters must be finite")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if self.waveform != Waveform.NONE and self.omega <= 0:
            raise ValueError("omega must be positive for a driven system")

    @property
    def is_driven(self) -> bool:
        return self.waveform != Waveform.NONE and self.amplitude > 0

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def f(self, t: float) -> float:
        """Scalar drive amplitude f(t)."""
        if self.waveform == Waveform.NONE:
            return 0.0
        if self.waveform == Waveform.HARMONIC:
            return 0.5 * self.amplitude * math.cos(self.omega * t)
        phase = (t / self.period) % 1.0
        return 0.5 * self.amplitude if phase < 0.5 else -0.5 * self.amplitude

    @classmethod
    def harmonic(cls, amplitude, omega, target_qubit=0, axis=Axis.X) -> "DriveSpec":
        return cls(Waveform.HARMONIC, amplitude, omega, target_qubit, axis)

    @classmethod
    def at_ratio(cls, ratio, omega, waveform=Waveform.HARMONIC, target_qubit=0, axis=Axis.X):
        """Drive with amplitude ``ratio * omega``."""
        return cls(waveform, ratio * omega, omega, target_qubit, axis)


NO_DRIVE = DriveSpec()


def pauli(axis: str, qubit: int, n_qubits: int) -> np.ndarray:
    """Pauli matrix on ``qubit``, identity on the others."""
    if n_qubits not in (1, 2):
        raise ValueError("n_qubits must be 1 or 2")
    if not 0 <= qubit < n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {n_qubits} qubit(s)")
    key = str(getattr(axis, "value", axis)).upper()
    if key not in SIGMA:
        raise ValueError(f"unknown Pauli axis {axis!r}")
    ops = [np.eye(2, dtype=complex)] * n_qubits
    ops[qubit] = SIGMA[key]
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def coupling_operators(n_qubits: int) -> list[np.ndarray]:
    """The bath coupling operators sigma_j^x, one per qubit."""
    return [pauli("X", j, n_qubits) for j in range(n_qubits)]


def build_hamiltonian(spec: SystemSpec) -> np.ndarray:
    n = spec.n_qubits
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for j in range(n):
        h += 0.5 * (spec.delta[j] * pauli("Z", j, n) + spec.epsilon[j] * pauli("X", j, n))
    if spec.interaction == Interaction.HEISENBERG:
        h += spec.j_coupling * sum(pauli(a, 0, 2) @ pauli(a, 1, 2) for a in "XYZ")
    elif spec.interaction == Interaction.ISING_XX:
        h += spec.j_coupling * pauli("X", 0, 2) @ pauli("X", 1, 2)
    # symmetrize so the result is Hermitian to the last bit
    return 0.5 * (h + h.conj().T)


def drive_operator(drive: DriveSpec, n_qubits: int) -> np.ndarray:
    return pauli(drive.axis.value, drive.target_qubit, n_qubits)


def drive_hamiltonian(drive: DriveSpec, t: float, n_qubits: int = 1) -> np.ndarray:
    """Instantaneous drive term f(t) sigma^{axis}_{target}."""
    dim = 2**n_qubits
    if drive.waveform == Waveform.NONE:
        return np.zeros((dim, dim), dtype=complex)
    return drive.f(t) * drive_operator(drive, n_qubits)


def time_dependent_hamiltonian(spec: SystemSpec, drive: DriveSpec) -> Callable[[float], np.ndarray]:
    h0 = build_hamiltonian(spec)
    if drive.waveform == Waveform.NONE:
        return lambda t: h0
    if drive.target_qubit >= spec.n_qubits:
        raise IndexError("drive targets a qubit outside the system")
    op = drive_operator(drive, spec.n_qubits)
    return lambda t: h0 + drive.f(t) * op


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def unitarity_error(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def _expm_hermitian(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i h dt) for Hermitian h via eigendecomposition (exactly unitary)."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * dt)) @ v.conj().T


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    Anti-Hermitian input (i times a Hermitian matrix) goes through an
    eigendecomposition, which keeps the result unitary to machine precision;
    everything else uses scaling-and-squaring Pade.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix_exp needs a square matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix_exp got non-finite entries")
    if np.allclose(m, -m.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(m).max())):
        return _expm_hermitian(1j * m, 1.0)
    out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed")
    return out


def propagator(h: Hamiltonian, t0: float, t1: float, steps: int = 256) -> np.ndarray:
    """Coherent propagator U(t1, t0).

    A constant matrix ``h`` is exponentiated in one shot. A callable is
    sampled at the midpoint of each of ``steps`` equal slices and the slice
    exponentials are multiplied in time order.
    """
    if t1 < t0:
        raise ValueError("propagator needs t1 >= t0")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not callable(h):
        h = np.asarray(h, dtype=complex)
        if not np.all(np.isfinite(h)):
            raise ValueError("Hamiltonian has non-finite entries")
        return _expm_hermitian(h, t1 - t0)
    return _step(h, t0, t1, steps)[-1]


def _step(h: Callable[[float], np.ndarray], t0: float, t1: float, steps: int, record_every: int = 0):
    """Midpoint stepping; returns the propagators recorded every ``record_every``
    steps (including t0) plus the final one."""
    dt = (t1 - t0) / steps
    u = None
    out = []
    for n in range(steps):
        hm = np.asarray(h(t0 + (n + 0.5) * dt), dtype=complex)
        if not np.all(np.isfinite(hm)):
            raise ValueError("Hamiltonian has non-finite entries")
        if u is None:
            u = np.eye(hm.shape[0], dtype=complex)
            if record_every:
                out.append(u.copy())
        u = _expm_hermitian(hm, dt) @ u
        if record_every and (n + 1) % record_every == 0 and n + 1 < steps:
            out.append(u.copy())
    out.append(u)
    return out


def check_density_matrix(rho: np.ndarray, tol: float = 1e-10, neg_tol: float = 1e-7) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Small negative eigenvalues are tolerated since Redfield dynamics is not
    guaranteed to be completely positive.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -neg_tol:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
