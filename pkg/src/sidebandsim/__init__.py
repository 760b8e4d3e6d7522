"""Simulator of coherent sideband-mode analysis.

A frequency-shifting interferometer (unequal-arm Mach-Zehnder plus
acousto-optic recombination) rotates the two sidebands of an optical
carrier into separate output beams. This package builds that device as an
exact unitary over a truncated comb of (port, frequency-offset) modes,
propagates coherent-tone and single-photon states through it, and models
the two readout chains: scanning-cavity spectra and homodyne detection.
"""

from .modes import (
    OUT_OF_BASKET,
    ModeBasket,
    ModeId,
    OutOfBasket,
    Port,
    basket_standard,
    shift_offset,
)
from .optics import (
    NOMINAL_SIDEBAND_HZ,
    Aom,
    Beamsplitter,
    Delay,
    DeviceParams,
    ModeUnitary,
    PhaseShift,
    analyser_closed_form,
    analyser_unitary,
    compose,
    compose_chain,
    element_unitary,
    identity_unitary,
    port_swap,
    umzi_port_transmission,
    umzi_unitary,
)
from .states import (
    CoherentSidebandState,
    QuadratureMeans,
    SinglePhotonState,
    am_state,
    apply_unitary,
    attenuate,
    measured_variances,
    photon_number,
    pm_state,
    quadrature_means,
    sideband_pair_power,
    sideband_photon,
    sideband_power,
    single_photon_transform,
    ssb_prep,
    vacuum_state,
    with_carrier,
)
from .measurement import (
    HomodyneParams,
    OsaParams,
    Trace,
    attenuated_variance,
    homodyne_scan,
    homodyne_variance,
    infer_input_variance,
    osa_scan,
    photon_number_from_scan,
    spectral_peaks,
)
from .experiments import (
    DRIVE_GAIN_DEFAULT,
    PREP_OMEGA_TAU,
    DistinguishReport,
    ImperfectionModel,
    InputKind,
    distinguish_inputs,
    fringe_visibility,
    homodyne_response_ratio,
    make_input,
    response_ratio,
    sweep_drive,
    sweep_phi,
    theta_from_drive,
)

__version__ = "0.1.0"
