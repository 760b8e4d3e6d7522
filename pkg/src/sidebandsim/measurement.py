"""Detection chains: scanning-cavity spectra and homodyne readout.

The scanning confocal cavity is modelled as a periodic comb of unit-peak
Lorentzian resonances (one family per coupled spatial mode); the homodyne
detector measures the quadrature selected by the local-oscillator phase,
with optical/mode-matching loss folded into a single efficiency that mixes
the signal toward the vacuum floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .modes import ModeId, Port
from .optics import NOMINAL_SIDEBAND_HZ
from .states import (
    CoherentSidebandState,
    photon_number,
    quadrature_means,
    pair_noise,
)


@dataclass(frozen=True)
class OsaParams:
    """Scanning-cavity parameters: free spectral range and linewidth in Hz,
    plus the power fraction coupled into the mode-mismatch resonance family
    sitting half a free spectral range away."""

    fsr: float = 500e6
    linewidth: float = 2e6
    mismatch_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.linewidth < self.fsr:
            raise ValueError("need 0 < linewidth < fsr")
        if not 0.0 <= self.mismatch_fraction < 1.0:
            raise ValueError("mismatch_fraction must lie in [0, 1)")


@dataclass(frozen=True)
class HomodyneParams:
    """Homodyne chain: detection efficiency in (0, 1] and local-oscillator
    phase in radians (0 reads the amplitude quadrature)."""

    efficiency: float = 0.95
    lo_phase: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in (0, 1]")


@dataclass(frozen=True)
class Trace:
    """Sampled sweep output: strictly increasing x, one y per sample."""

    x: np.ndarray
    y: np.ndarray
    x_label: str = "x"
    y_label: str = "y"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size == 0:
            raise ValueError("trace cannot be empty")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x values must be strictly increasing")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def _lorentzian(nu: np.ndarray, center: float, fwhm: float) -> np.ndarray:
    half = fwhm / 2.0
    return half * half / ((nu - center) ** 2 + half * half)


def osa_scan(state: CoherentSidebandState, carrier_power: float, port: Port,
             params: OsaParams, scan_start: float, scan_stop: float,
             n_samples: int,
             sideband_spacing_hz: float = NOMINAL_SIDEBAND_HZ) -> Trace:
    """Transmission of a scanning cavity over [scan_start, scan_stop] Hz.

    Every populated mode of the port contributes a Lorentzian line at
    offset * sideband_spacing_hz, the carrier line carries carrier_power
    (plus any carrier amplitude held in the state), and each line is imaged
    periodically every free spectral range. A mismatch_fraction > 0 adds
    the secondary resonance family displaced by half a free spectral range.
    """
    if n_samples < 2:
        raise ValueError("scan needs at least two samples")
    if scan_stop - scan_start < params.fsr:
        raise ValueError("scan range must cover at least one free spectral range")

    lines: list[tuple[float, float]] = []
    carrier = float(carrier_power)
    for k in state.basket.offsets():
        power = abs(state.alpha_at(ModeId(port, k))) ** 2
        if k == 0:
            carrier += power
        elif power > 0.0:
            lines.append((k * sideband_spacing_hz, power))
    if carrier > 0.0:
        lines.append((0.0, carrier))

    nu = np.linspace(scan_start, scan_stop, n_samples)
    y = np.zeros_like(nu)
    families = [(0.0, 1.0)]
    if params.mismatch_fraction > 0.0:
        families.append((params.fsr / 2.0, params.mismatch_fraction))
    for center, power in lines:
        for displacement, weight in families:
            base = center + displacement
            m_lo = math.floor((scan_start - base) / params.fsr) - 1
            m_hi = math.ceil((scan_stop - base) / params.fsr) + 1
            for m in range(m_lo, m_hi + 1):
                y += weight * power * _lorentzian(nu, base + m * params.fsr,
                                                  params.linewidth)
    return Trace(nu, y, "frequency_hz", "power_arb",
                 meta={"fsr_hz": params.fsr, "linewidth_hz": params.linewidth,
                       "port": port.value})


def spectral_peaks(trace: Trace, min_rel_height: float = 0.005) -> np.ndarray:
    """Positions of local maxima higher than min_rel_height of the tallest
    peak; returns an empty array for an all-zero trace."""
    top = float(np.max(trace.y))
    if top <= 0.0:
        return np.array([])
    idx, _ = find_peaks(trace.y, height=min_rel_height * top)
    return trace.x[idx]


def homodyne_variance(state: CoherentSidebandState, port: Port,
                      params: HomodyneParams) -> float:
    """Detected quadrature variance of a port's sideband pair.

    The ideal variance at local-oscillator phase f is
    V = Vn+ cos^2 f + Vn- sin^2 f + |xplus cos f + xminus sin f|^2;
    detection loss mixes it with vacuum: efficiency * V + (1 - efficiency).
    """
    means = quadrature_means(state, port)
    vn_plus, vn_minus = pair_noise(state, port)
    cos_f = math.cos(params.lo_phase)
    sin_f = math.sin(params.lo_phase)
    noise = vn_plus * cos_f ** 2 + vn_minus * sin_f ** 2
    signal = abs(means.xplus * cos_f + means.xminus * sin_f) ** 2
    ideal = noise + signal
    return params.efficiency * ideal + (1.0 - params.efficiency)


def homodyne_scan(state: CoherentSidebandState, port: Port,
                  params: HomodyneParams, lo_phases) -> Trace:
    """Detected variance in dB relative to the vacuum floor, swept over
    local-oscillator phases (which must be strictly increasing)."""
    phases = np.asarray(lo_phases, dtype=float)
    if phases.size == 0:
        raise ValueError("need at least one local-oscillator phase")
    y = np.array([
        10.0 * math.log10(homodyne_variance(
            state, port, HomodyneParams(params.efficiency, float(f))))
        for f in phases
    ])
    return Trace(phases, y, "lo_phase_rad", "variance_db",
                 meta={"efficiency": params.efficiency, "port": port.value})


def attenuated_variance(variance: float, attenuation: float) -> float:
    """Forward model of a power attenuator (factor g >= 1) on a variance:
    V_det = V/g + (1 - 1/g), the vacuum mixing of a 1/g tap."""
    if attenuation < 1.0:
        raise ValueError("attenuation factor must be >= 1")
    return variance / attenuation + (1.0 - 1.0 / attenuation)


def infer_input_variance(v_detected: float, attenuation: float) -> float:
    """Undo a calibrated power attenuation on a measured variance:
    V = g * V_det - (g - 1). For g = 4 this is V = 4 V_det - 3."""
    if attenuation < 1.0:
        raise ValueError("attenuation factor must be >= 1")
    if v_detected < 1.0 - 1e-12:
        raise ValueError("detected variance below the vacuum floor")
    v = attenuation * v_detected - (attenuation - 1.0)
    if v < 1.0 - 1e-9:
        raise ValueError(
            f"inferred variance {v} below the vacuum floor: inconsistent inputs"
        )
    return v


def photon_number_from_scan(s_plus_det: float, s_minus_det: float,
                            params: HomodyneParams,
                            attenuation: float = 1.0) -> float:
    """Photon number at the source from detected quadrature variances:
    undo the detection efficiency, undo the attenuation, then apply
    n = (S+ + S- - 2)/4."""
    eta = params.efficiency
    undone = []
    for v_det in (s_plus_det, s_minus_det):
        v = (v_det - (1.0 - eta)) / eta
        if v < 1.0 - 1e-9:
            raise ValueError("efficiency correction produced an unphysical variance")
        undone.append(infer_input_variance(v, attenuation))
    return photon_number(undone[0], undone[1])
