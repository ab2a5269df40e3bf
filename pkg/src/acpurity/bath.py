"""Ohmic heat bath: spectral density and symmetrized noise power."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

STRONG_COUPLING_ALPHA = 0.1


class WeakCouplingWarning(UserWarning):
    """Bath parameters outside the weak-coupling (Born-Markov) regime."""


@dataclass(frozen=True)
class OhmicBath:
    """I(w) = 2 pi alpha w exp(-w / omega_c) at temperature ``temperature``."""

    alpha: float = 0.0
    omega_c: float = 500.0
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "omega_c", "temperature"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.strong_coupling:
            warnings.warn(
                f"alpha={self.alpha} exceeds {STRONG_COUPLING_ALPHA}; "
                "Born-Markov results are unreliable",
                WeakCouplingWarning,
                stacklevel=3,
            )

    @property
    def strong_coupling(self) -> bool:
        return self.alpha > STRONG_COUPLING_ALPHA

    def spectral_density(self, omega):
        return spectral_density(self, omega)

    def noise_power(self, omega):
        return noise_power(self, omega)


def _check_frequency(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("frequencies must be finite and non-negative")
    return w


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def spectral_density(bath: OhmicBath, omega):
    w = _check_frequency(omega)
    out = 2 * math.pi * bath.alpha * w * np.exp(-w / bath.omega_c)
    return _scalar_or_array(out, omega)


def noise_power(bath: OhmicBath, omega):
    """S(w) = I(w) coth(w / 2T), with the w -> 0 limit 4 pi alpha T."""
    w = _check_frequency(omega)
    if bath.temperature == 0:
        return spectral_density(bath, omega)
    T = bath.temperature
    small = w < 1e-9 * max(T, 1.0)
    ws = np.where(small, 1.0, w)
    with np.errstate(over="ignore"):
        out = spectral_density(bath, ws) / np.tanh(ws / (2 * T))
    out = np.where(small, 4 * math.pi * bath.alpha * T * np.exp(-w / bath.omega_c), out)
    return _scalar_or_array(out, omega)


def transition_rate(bath: OhmicBath, nu):
    """S(|nu|) - sign(nu) I(|nu|): the one-sided kernel of a transition at nu.

    Positive nu marks a transition that takes energy from the bath, negative
    nu one that releases it; the ratio of the two obeys detailed balance.
    """
    nu = np.asarray(nu, dtype=float)
    a = np.abs(nu)
    return noise_power(bath, a) - np.sign(nu) * spectral_density(bath, a)
