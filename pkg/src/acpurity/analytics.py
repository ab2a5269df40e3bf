"""Closed-form rates and effective parameters for driven qubits.

Single qubit (H = delta1/2 sz, bath on sx):
  * a harmonic z-drive shifts the noise sensitivity to multiples of the
    drive frequency (continuous-wave dynamical decoupling, ``eta_dd``);
  * an x-drive renormalizes the tunnel splitting to <cos 2phi(t)> delta1
    (coherent destruction of tunneling, ``eta_cdt``).

Qubit pair with exchange J: an x-drive on qubit 1 reduces the transverse
part of the exchange to J_perp = J <cos 2phi(t)>; where J_perp vanishes the
pair behaves like an Ising pair and only thermal noise S(0) remains.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bath import OhmicBath, noise_power
from .core import Axis, DriveSpec, Waveform


class ValidityWarning(UserWarning):
    """A closed form is used outside the regime it was derived for."""


# ---------------------------------------------------------------- Bessel J_n

_RESCALE = 1e250


def _series(nmax: int, x: float) -> np.ndarray:
    out = np.empty(nmax + 1)
    h = 0.5 * x
    for n in range(nmax + 1):
        term = h**n / math.factorial(n)
        total = term
        m = 0
        while abs(term) > 1e-17 * abs(total):
            m += 1
            term *= -h * h / (m * (m + n))
            total += term
        out[n] = total
    return out


def bessel_j_orders(nmax: int, x: float) -> np.ndarray:
    """J_0(x) ... J_nmax(x) by Miller's downward recurrence.

    The recurrence starts far above both nmax and |x| and is normalized
    with J_0 + 2 sum_k J_2k = 1. Small arguments use the power series.
    """
    if nmax < 0:
        raise ValueError("order must be non-negative")
    x = float(x)
    if not math.isfinite(x) or abs(x) >= 1e3:
        raise OverflowError("bessel_j supports |x| < 1e3")
    sign = np.ones(nmax + 1)
    if x < 0:
        x = -x
        sign[1::2] = -1
    if x == 0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x < 0.5:
        return sign * _series(nmax, x)

    top = max(nmax, x)
    start = 2 * ((int(top + 30 + 8 * math.sqrt(top)) + 1) // 2)
    j = np.zeros(start + 2)
    j[start] = 1e-30
    for k in range(start, 0, -1):
        j[k - 1] = (2 * k / x) * j[k] - j[k + 1]
        if abs(j[k - 1]) > _RESCALE:
            j[k - 1 :] /= _RESCALE
    norm = j[0] + 2 * j[2::2].sum()
    return sign * j[: nmax + 1] / norm


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for integer n >= 0."""
    return float(bessel_j_orders(int(n), x)[n])


def working_points(count: int) -> list["WorkingPoint"]:
    """The first ``count`` zeros of J_0, located by bisection."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for k in range(1, count + 1):
        # McMahon: zeros sit close to (k - 1/4) pi
        lo, hi = (k - 0.25) * math.pi - 0.5, (k - 0.25) * math.pi + 0.5
        flo = bessel_j(0, lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fmid = bessel_j(0, mid)
            if fmid == 0 or hi - lo < 1e-15 * mid:
                break
            if (fmid > 0) == (flo > 0):
                lo, flo = mid, fmid
            else:
                hi = mid
        out.append(WorkingPoint(0.5 * (lo + hi), k))
    return out


@dataclass(frozen=True)
class WorkingPoint:
    """Drive ratio A/omega at the ``index``-th zero of J_0."""

    ratio: float
    index: int


def first_working_point() -> float:
    return working_points(1)[0].ratio


# ------------------------------------------------------ effective parameters


def cos2phi_average(drive: DriveSpec) -> float:
    """Period average of cos(2 phi(t)) with phi the integrated drive f(t)."""
    if drive.waveform == Waveform.NONE or drive.amplitude == 0:
        return 1.0
    ratio = drive.amplitude / drive.omega
    if drive.waveform == Waveform.HARMONIC:
        return bessel_j(0, ratio)
    # 2 phi(t) ramps linearly from 0 to pi A / omega and back
    theta = math.pi * ratio
    return math.sin(theta) / theta


def delta_eff(delta1: float, drive: DriveSpec) -> float:
    return cos2phi_average(drive) * delta1


def j_perp(j: float, drive: DriveSpec) -> float:
    return cos2phi_average(drive) * j


# ------------------------------------------------------------- single qubit


def gamma_0(delta1: float, bath: OhmicBath) -> float:
    """Closed-form undriven single-qubit purity decay rate S(delta1)/6.

    Evaluating the ensemble average of the master equation directly gives
    twice this value (see :func:`gamma_single_qubit`); ratios such as
    ``eta_dd`` and ``eta_cdt`` are unaffected.
    """
    if delta1 <= 0:
        raise ValueError("delta1 must be positive")
    return noise_power(bath, delta1) / 6


def _dd_terms(delta1: float, drive: DriveSpec):
    if drive.waveform == Waveform.RECTANGULAR:
        raise ValueError("the dynamical decoupling closed form needs a harmonic drive")
    if drive.is_driven and delta1 > 0.1 * drive.omega:
        warnings.warn("eta_dd assumes delta1 << omega", ValidityWarning, stacklevel=3)
    x = drive.amplitude / drive.omega
    cap = int(10 * x) + 50
    return x, cap, bessel_j_orders(cap, x)


def eta_dd(delta1: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """Decoherence factor of a harmonic z-drive, Gamma_DD / Gamma_0."""
    if not drive.is_driven:
        return 1.0
    x, cap, jn = _dd_terms(delta1, drive)
    T = bath.temperature
    total = jn[0] ** 2
    for n in range(1, cap + 1):
        w = n * drive.omega
        thermal = 1.0 if T == 0 else math.tanh(delta1 / (2 * T)) / math.tanh(w / (2 * T))
        term = 2 * (w / delta1) * thermal * math.exp(-w / bath.omega_c) * jn[n] ** 2
        total += term
        if n > x and term < 1e-12 * total:
            break
    return total


def q_dd_coefficient(delta1: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """c in Q_DD = c sx: (J0^2 S(delta1) + 2 sum_n Jn^2 S(n omega)) / 8."""
    if not drive.is_driven:
        return noise_power(bath, delta1) / 8
    x, cap, jn = _dd_terms(delta1, drive)
    total = jn[0] ** 2 * noise_power(bath, delta1)
    for n in range(1, cap + 1):
        term = 2 * jn[n] ** 2 * noise_power(bath, n * drive.omega)
        total += term
        if n > x and term < 1e-12 * total:
            break
    return total / 8


def q_cdt_coefficient(delta1: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """c in Q_CDT = c sx: S(|delta_eff|) / 8."""
    return noise_power(bath, abs(delta_eff(delta1, drive))) / 8


def eta_cdt(delta1: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """Decoherence factor of an x-drive, S(|delta_eff|) / S(delta1)."""
    return noise_power(bath, abs(delta_eff(delta1, drive))) / noise_power(bath, delta1)


def gamma_single_qubit(delta1: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """Ensemble-averaged initial purity decay rate of a single qubit.

    4/(N+1) tr(sx Q) with N = 2 and Q = c sx taken from the closed forms,
    i.e. 8c/3.
    """
    if not drive.is_driven:
        c = noise_power(bath, delta1) / 8
    elif drive.axis == Axis.Z:
        c = q_dd_coefficient(delta1, bath, drive)
    else:
        c = q_cdt_coefficient(delta1, bath, drive)
    return 8 * c / 3


# -------------------------------------------------------------- qubit pair


def gamma_heisenberg(j: float, bath: OhmicBath) -> float:
    """(2/5) {S(0) + S(4J)}."""
    return 0.4 * (noise_power(bath, 0.0) + noise_power(bath, 4 * abs(j)))


def gamma_ising(bath: OhmicBath) -> float:
    """(4/5) S(0) = 16 pi alpha T / 5, set purely by thermal noise.

    This is also the limit of :func:`gamma_heisenberg_driven` at a working
    point, where J_perp = 0.
    """
    return 0.8 * noise_power(bath, 0.0)


def gamma_heisenberg_driven(j: float, bath: OhmicBath, drive: DriveSpec) -> float:
    """(2/5) {S(0) + S(4 J_perp)}: the exchange rate with J -> J_perp."""
    return gamma_heisenberg(j_perp(j, drive), bath)


def interaction_time(j: float) -> float:
    """Gate time pi / (4J)."""
    if j <= 0:
        raise ValueError("J must be positive")
    return math.pi / (4 * j)


def periods_per_gate(j: float, omega: float) -> float:
    """Number of drive periods in the interaction time, omega / (8J)."""
    return interaction_time(j) * omega / (2 * math.pi)
