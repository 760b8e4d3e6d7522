"""Sideband states and their quadrature observables.

Coherent modulation tones ride on a quantum-noise-limited field: a state
tracks one complex amplitude per mode plus a per-mode pair of quadrature
noise variances with vacuum floor 1. Amplitudes are normalised so a
sideband of photon flux n has |alpha|^2 = 2n, which makes the relation
n = (S+ + S- - 2)/4 between measured variances and photon number exact.

Single-photon superpositions over the same basket are carried separately
as a normalised amplitude vector; a passive unitary transforms the photon
amplitudes by the same matrix that transforms the mode operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modes import ModeBasket, ModeId, Port, basket_standard
from .optics import ModeUnitary, umzi_unitary, analyser_unitary

_NOISE_FLOOR_TOL = 1e-12


@dataclass(frozen=True)
class CoherentSidebandState:
    """Coherent amplitudes plus quadrature noise variances per mode.

    noise_plus / noise_minus hold the amplitude- and phase-quadrature noise
    of each mode; 1 is the vacuum floor and squeezing (values below 1) is
    not representable.
    """

    basket: ModeBasket
    alpha: np.ndarray
    noise_plus: np.ndarray
    noise_minus: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=complex)
        n_plus = np.array(self.noise_plus, dtype=float)
        n_minus = np.array(self.noise_minus, dtype=float)
        n = len(self.basket)
        for name, arr in (("alpha", alpha), ("noise_plus", n_plus),
                          ("noise_minus", n_minus)):
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},), got {arr.shape}")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("amplitudes must be finite")
        if np.min(n_plus) < 1.0 - _NOISE_FLOOR_TOL or np.min(n_minus) < 1.0 - _NOISE_FLOOR_TOL:
            raise ValueError("noise variances cannot drop below the vacuum floor")
        for name, arr in (("alpha", alpha), ("noise_plus", n_plus),
                          ("noise_minus", n_minus)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def alpha_at(self, mode: ModeId) -> complex:
        return complex(self.alpha[self.basket.index(mode)])

    def noise_at(self, mode: ModeId) -> tuple[float, float]:
        i = self.basket.index(mode)
        return float(self.noise_plus[i]), float(self.noise_minus[i])


@dataclass(frozen=True)
class QuadratureMeans:
    """Signal components of the amplitude (xplus) and phase (xminus)
    quadratures of a sideband pair."""

    xplus: complex
    xminus: complex


@dataclass(frozen=True)
class SinglePhotonState:
    """One photon in a normalised superposition over basket modes."""

    basket: ModeBasket
    amp: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amp, dtype=complex)
        if amp.shape != (len(self.basket),):
            raise ValueError(
                f"amp must have shape ({len(self.basket)},), got {amp.shape}"
            )
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - 1.0) > 1e-9:
            raise ValueError(f"amplitudes must be normalised, got |amp|^2 = {norm_sq}")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    def amp_at(self, mode: ModeId) -> complex:
        return complex(self.amp[self.basket.index(mode)])

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amp) ** 2))


def vacuum_state(basket: ModeBasket | None = None) -> CoherentSidebandState:
    """All amplitudes zero, all noise at the vacuum floor."""
    if basket is None:
        basket = basket_standard()
    n = len(basket)
    return CoherentSidebandState(basket, np.zeros(n, dtype=complex),
                                 np.ones(n), np.ones(n))


def _tone_state(basket: ModeBasket | None, port: Port, upper: complex,
                lower: complex) -> CoherentSidebandState:
    if basket is None:
        basket = basket_standard()
    n = len(basket)
    alpha = np.zeros(n, dtype=complex)
    alpha[basket.index(ModeId(port, +1))] = upper
    alpha[basket.index(ModeId(port, -1))] = lower
    return CoherentSidebandState(basket, alpha, np.ones(n), np.ones(n))


def pm_state(beta: float, port: Port = Port.IN,
             basket: ModeBasket | None = None) -> CoherentSidebandState:
    """Phase-modulation tone: amplitudes +beta and -beta on the upper and
    lower sidebands (sine-modulation convention), noise at the vacuum floor.

    The antisymmetric pair puts the whole signal in the phase quadrature:
    xplus = 0 and |xminus| = 2*beta.
    """
    if beta < 0:
        raise ValueError("modulation amplitude must be non-negative")
    return _tone_state(basket, port, beta, -beta)


def am_state(beta: float, port: Port = Port.IN,
             basket: ModeBasket | None = None) -> CoherentSidebandState:
    """Amplitude-modulation tone: equal amplitudes +beta on both sidebands,
    pure amplitude-quadrature signal (xminus = 0)."""
    if beta < 0:
        raise ValueError("modulation amplitude must be non-negative")
    return _tone_state(basket, port, beta, beta)


def with_carrier(state: CoherentSidebandState, amplitude: complex,
                 port: Port = Port.IN) -> CoherentSidebandState:
    """Copy of the state with the carrier slot of a port set to amplitude.

    The carrier is normally left out of the sideband model; set it when a
    spectrum scan should show the carrier and its frequency-shifted images.
    """
    alpha = np.array(state.alpha, dtype=complex)
    alpha[state.basket.index(ModeId(port, 0))] = amplitude
    return CoherentSidebandState(state.basket, alpha,
                                 state.noise_plus, state.noise_minus)


def attenuate(state: CoherentSidebandState, factor: float) -> CoherentSidebandState:
    """Beam through a lossy tap of power attenuation `factor` >= 1: amplitudes
    scale by 1/sqrt(factor) and excess noise mixes toward the vacuum floor."""
    if factor < 1.0:
        raise ValueError("attenuation factor must be >= 1")
    g = 1.0 / factor
    alpha = state.alpha * math.sqrt(g)
    n_plus = 1.0 + g * (state.noise_plus - 1.0)
    n_minus = 1.0 + g * (state.noise_minus - 1.0)
    return CoherentSidebandState(state.basket, alpha, n_plus, n_minus)


def apply_unitary(u: ModeUnitary, state: CoherentSidebandState) -> CoherentSidebandState:
    """Propagate a coherent state through a mode unitary.

    Amplitudes transform as alpha' = U alpha; power routed to loss modes is
    dropped. Noise excesses above the vacuum floor mix with the squared
    entry magnitudes, so an all-vacuum-noise state stays exactly at the
    floor through any passive network.
    """
    if u.basket != state.basket:
        raise ValueError("unitary and state are defined on different baskets")
    alpha, _lost = u.apply(state.alpha)
    weights = np.abs(u.matrix[: u.n_basket, : u.n_basket]) ** 2
    n_plus = 1.0 + weights @ (state.noise_plus - 1.0)
    n_minus = 1.0 + weights @ (state.noise_minus - 1.0)
    return CoherentSidebandState(state.basket, alpha, n_plus, n_minus)


def ssb_prep(state: CoherentSidebandState, Omega_tau: float,
             lock_sign: int) -> CoherentSidebandState:
    """Single-sideband preparation: pass the input through an unequal-arm
    interferometer and keep one output port as the new input beam.

    With Omega_tau = 1.33 rad a phase-modulated input turns into nearly a
    single sideband: lock_sign = -1 leaves ~98.6% of the surviving sideband
    power on the lower sideband (lock_sign = +1 on the upper). The
    discarded port's power is simply lost, as in the physical preparation.
    """
    u = umzi_unitary(Omega_tau, lock_sign, state.basket)
    routed = apply_unitary(u, state)
    basket = state.basket
    n = len(basket)
    alpha = np.zeros(n, dtype=complex)
    n_plus = np.ones(n)
    n_minus = np.ones(n)
    for k in basket.offsets():
        src = basket.index(ModeId(Port.OUT1, k))
        dst = basket.index(ModeId(Port.IN, k))
        alpha[dst] = routed.alpha[src]
        n_plus[dst] = routed.noise_plus[src]
        n_minus[dst] = routed.noise_minus[src]
    return CoherentSidebandState(basket, alpha, n_plus, n_minus)


def quadrature_means(state: CoherentSidebandState, port: Port) -> QuadratureMeans:
    """Mean quadratures of the +1/-1 sideband pair on a port:
    xplus = a(+1) + conj(a(-1)), xminus = i*(a(+1) - conj(a(-1)))."""
    a_plus = state.alpha_at(ModeId(port, +1))
    a_minus = state.alpha_at(ModeId(port, -1))
    return QuadratureMeans(
        xplus=a_plus + np.conj(a_minus),
        xminus=1j * (a_plus - np.conj(a_minus)),
    )


def pair_noise(state: CoherentSidebandState, port: Port) -> tuple[float, float]:
    np_hi, nm_hi = state.noise_at(ModeId(port, +1))
    np_lo, nm_lo = state.noise_at(ModeId(port, -1))
    return (np_hi + np_lo) / 2.0, (nm_hi + nm_lo) / 2.0


def measured_variances(state: CoherentSidebandState, port: Port) -> tuple[float, float]:
    """Spectrum-analyser variances (S+, S-) of a port's sideband pair: the
    coherent tone power inside the resolution bandwidth sits on top of the
    noise floor, S = V_noise + |xbar|^2."""
    means = quadrature_means(state, port)
    v_plus, v_minus = pair_noise(state, port)
    return (v_plus + abs(means.xplus) ** 2,
            v_minus + abs(means.xminus) ** 2)


def photon_number(s_plus: float, s_minus: float) -> float:
    """Sideband photon number from a pair of quadrature variances,
    n = (S+ + S- - 2)/4."""
    n = (s_plus + s_minus - 2.0) / 4.0
    if n < -1e-12:
        raise ValueError(
            f"variance pair ({s_plus}, {s_minus}) implies negative photon number"
        )
    return max(n, 0.0)


def sideband_power(state: CoherentSidebandState, mode: ModeId) -> float:
    """Coherent power |alpha|^2 of one mode."""
    return abs(state.alpha_at(mode)) ** 2


def sideband_pair_power(state: CoherentSidebandState, port: Port) -> float:
    """Total coherent power of the +1/-1 sideband pair on a port."""
    return (sideband_power(state, ModeId(port, +1))
            + sideband_power(state, ModeId(port, -1)))


def sideband_photon(mu: complex, nu: complex,
                    basket: ModeBasket | None = None) -> SinglePhotonState:
    """Single photon split over the input sideband pair: amplitude mu on the
    lower (-1) sideband and nu on the upper (+1). The pair is normalised."""
    if basket is None:
        basket = basket_standard()
    norm = math.sqrt(abs(mu) ** 2 + abs(nu) ** 2)
    if norm == 0.0:
        raise ValueError("mu and nu cannot both be zero")
    amp = np.zeros(len(basket), dtype=complex)
    amp[basket.index(ModeId(Port.IN, -1))] = mu / norm
    amp[basket.index(ModeId(Port.IN, +1))] = nu / norm
    return SinglePhotonState(basket, amp)


def single_photon_transform(psi: SinglePhotonState, theta: float,
                            phi: float) -> SinglePhotonState:
    """Send a single photon on the input sideband pair through the analyser.

    The photon ends up split between (OUT2, -1) and (OUT1, +1):

        amp(OUT2, -1) = i mu e^{i phi} cos(theta) + i nu sin(theta)
        amp(OUT1, +1) = nu cos(theta) - mu e^{i phi} sin(theta)

    for mu = amp(IN, -1) and nu = amp(IN, +1); the norm is preserved.
    """
    basket = psi.basket
    support = {basket.index(ModeId(Port.IN, -1)), basket.index(ModeId(Port.IN, +1))}
    for i, a in enumerate(psi.amp):
        if i not in support and abs(a) > 1e-12:
            raise ValueError(
                f"photon has support outside the input sideband pair at {basket.mode_at(i)}"
            )
    u = analyser_unitary(theta, phi, basket)
    out, lost = u.apply(psi.amp)
    if np.max(np.abs(lost)) > 1e-12:
        raise ValueError("photon amplitude leaked out of the tracked comb")
    return SinglePhotonState(basket, out)
