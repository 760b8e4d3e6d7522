"""Linear optical elements as unitary matrices on a mode basket.

Every element maps annihilation-operator amplitudes as a_out = U a_in with
rows indexing outputs and columns indexing inputs. The frequency-shifting
coupler routes light that would leave the tracked comb into dedicated loss
modes appended after the basket block, so each matrix stays exactly unitary
and energy accounting stays closed under truncation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .modes import ModeBasket, ModeId, Port, basket_standard

UNITARITY_TOL = 1e-12

NOMINAL_SIDEBAND_HZ = 90.5e6


@dataclass(frozen=True)
class Beamsplitter:
    """50/50 coupler between two distinct ports, symmetric phase convention:
    the cross amplitudes carry the factor i."""

    port_a: Port
    port_b: Port

    def __post_init__(self):
        if self.port_a == self.port_b:
            raise ValueError("beamsplitter must couple two distinct ports")


@dataclass(frozen=True)
class Delay:
    """Path delay on one port: phase exp(i*(omega0_tau + k*Omega_tau)) on the
    mode at offset k (carrier phase plus a linear frequency ramp)."""

    port: Port
    omega0_tau: float
    Omega_tau: float


@dataclass(frozen=True)
class PhaseShift:
    """Offset-independent phase exp(i*phi) on one port. Models a path-length
    trim short enough that dispersion across the comb is negligible."""

    port: Port
    phi: float


@dataclass(frozen=True)
class Aom:
    """Acousto-optic coupler merging two beams with a frequency shift.

    A power fraction sin(theta)^2 is diffracted. Light entering the
    diffracted port emerges in the undiffracted port's output direction
    shifted up by shift_k comb steps; conversely, the undiffracted port's
    diffracted fraction exits in the other direction shifted down by
    shift_k. Both diffracted amplitudes carry the factor i (same symmetric
    convention as the beamsplitters); this choice is frozen by the
    closed-form pinning test of the composite analyser.
    """

    undiffracted_port: Port
    diffracted_port: Port
    theta: float
    shift_k: int = 2

    def __post_init__(self):
        if self.undiffracted_port == self.diffracted_port:
            raise ValueError("AOM must couple two distinct ports")
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")


ElementSpec = Union[Beamsplitter, Delay, PhaseShift, Aom]


@dataclass(frozen=True)
class DeviceParams:
    """Operating point of the analyser; defaults are the bench values.

    delta_l is the differential interferometer path length; tau = delta_l/c
    is the corresponding time delay, matched so that the sideband spacing
    accumulates a quarter-wave phase across it.
    """

    Omega: float = 2 * math.pi * NOMINAL_SIDEBAND_HZ  # rad/s
    omega0_tau: float = math.pi / 2
    Omega_tau: float = math.pi / 2
    phi: float = 0.0
    theta: float = 0.0
    delta_l: float = 0.83  # m

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError("Omega must be positive")
        for name in ("omega0_tau", "Omega_tau", "phi", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def tau(self) -> float:
        """Differential time delay delta_l / c in seconds."""
        return self.delta_l / SPEED_OF_LIGHT


class ModeUnitary:
    """Complex matrix acting on the stacked vector of basket modes followed
    by any loss modes.

    Entry (i, j) is the coefficient of input-mode operator j in output-mode
    operator i. Loss modes are non-physical bookkeeping slots: as columns
    they are vacuum feeds, as rows they collect amplitudes shifted out of
    the comb. Instances are immutable.
    """

    def __init__(self, basket: ModeBasket, matrix: np.ndarray,
                 loss_labels: Sequence[str] = ()):
        matrix = np.array(matrix, dtype=complex)
        self.basket = basket
        self.loss_labels = tuple(loss_labels)
        dim = len(basket) + len(self.loss_labels)
        if matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match basket plus "
                f"{len(self.loss_labels)} loss modes (expected {(dim, dim)})"
            )
        matrix.setflags(write=False)
        self.matrix = matrix

    @property
    def n_basket(self) -> int:
        return len(self.basket)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def entry(self, out_mode: ModeId, in_mode: ModeId) -> complex:
        """Coefficient of in_mode in the out_mode output operator."""
        return complex(self.matrix[self.basket.index(out_mode),
                                   self.basket.index(in_mode)])

    def submatrix(self, out_modes: Sequence[ModeId],
                  in_modes: Sequence[ModeId]) -> np.ndarray:
        rows = [self.basket.index(m) for m in out_modes]
        cols = [self.basket.index(m) for m in in_modes]
        return self.matrix[np.ix_(rows, cols)]

    def unitarity_defect(self) -> float:
        """max |U U^dag - I| over all entries, loss block included."""
        gram = self.matrix @ self.matrix.conj().T
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self.basket, self.matrix.conj().T, self.loss_labels)

    def apply(self, amplitudes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Propagate a basket amplitude vector (loss inputs are vacuum).

        Returns (basket amplitudes, loss amplitudes); the squared norm of
        the loss part is the power shifted out of the comb.
        """
        a = np.asarray(amplitudes, dtype=complex)
        if a.shape != (self.n_basket,):
            raise ValueError(
                f"amplitude vector has shape {a.shape}, expected ({self.n_basket},)"
            )
        full = np.zeros(self.dim, dtype=complex)
        full[: self.n_basket] = a
        out = self.matrix @ full
        return out[: self.n_basket], out[self.n_basket:]


def identity_unitary(basket: ModeBasket) -> ModeUnitary:
    return ModeUnitary(basket, np.eye(len(basket), dtype=complex))


def port_swap(basket: ModeBasket, port_a: Port, port_b: Port) -> ModeUnitary:
    """Relabeling permutation exchanging two ports at every offset."""
    mat = np.eye(len(basket), dtype=complex)
    for k in basket.offsets():
        ia = basket.index(ModeId(port_a, k))
        ib = basket.index(ModeId(port_b, k))
        mat[[ia, ib]] = mat[[ib, ia]]
    return ModeUnitary(basket, mat)


def _require_port(port: Port) -> None:
    if not isinstance(port, Port):
        raise ValueError(f"unknown port {port!r}")


def _beamsplitter_unitary(spec: Beamsplitter, basket: ModeBasket) -> ModeUnitary:
    _require_port(spec.port_a)
    _require_port(spec.port_b)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    mat = np.eye(len(basket), dtype=complex)
    for k in basket.offsets():
        ia = basket.index(ModeId(spec.port_a, k))
        ib = basket.index(ModeId(spec.port_b, k))
        mat[ia, ia] = inv_sqrt2
        mat[ia, ib] = 1j * inv_sqrt2
        mat[ib, ia] = 1j * inv_sqrt2
        mat[ib, ib] = inv_sqrt2
    return ModeUnitary(basket, mat)


def _delay_unitary(spec: Delay, basket: ModeBasket) -> ModeUnitary:
    _require_port(spec.port)
    mat = np.eye(len(basket), dtype=complex)
    for k in basket.offsets():
        i = basket.index(ModeId(spec.port, k))
        mat[i, i] = np.exp(1j * (spec.omega0_tau + k * spec.Omega_tau))
    return ModeUnitary(basket, mat)


def _phase_shift_unitary(spec: PhaseShift, basket: ModeBasket) -> ModeUnitary:
    _require_port(spec.port)
    mat = np.eye(len(basket), dtype=complex)
    for k in basket.offsets():
        i = basket.index(ModeId(spec.port, k))
        mat[i, i] = np.exp(1j * spec.phi)
    return ModeUnitary(basket, mat)


def _aom_unitary(spec: Aom, basket: ModeBasket) -> ModeUnitary:
    _require_port(spec.undiffracted_port)
    _require_port(spec.diffracted_port)
    m_off = basket.max_offset
    shift = int(spec.shift_k)
    if abs(shift) > 2 * m_off:
        raise ValueError(
            f"AOM shift {shift} exceeds the basket reach (max 2*{m_off})"
        )
    cos_t = math.cos(spec.theta)
    sin_t = math.sin(spec.theta)
    n = len(basket)

    # Couple (undiffracted, k) with (diffracted, k - shift). Pairs with one
    # partner outside the comb get a fresh loss mode in that slot, keeping
    # every 2x2 block closed.
    loss_labels: list[str] = []
    blocks: list[tuple[int, int]] = []
    dim = n
    k_lo = min(-m_off, -m_off + shift)
    k_hi = max(m_off, m_off + shift)
    for k in range(k_lo, k_hi + 1):
        undiff_in = abs(k) <= m_off
        diff_in = abs(k - shift) <= m_off
        if not (undiff_in or diff_in):
            continue
        if undiff_in:
            i_u = basket.index(ModeId(spec.undiffracted_port, k))
        else:
            i_u = dim
            dim += 1
            loss_labels.append(f"{spec.undiffracted_port.value}:{k:+d}")
        if diff_in:
            i_d = basket.index(ModeId(spec.diffracted_port, k - shift))
        else:
            i_d = dim
            dim += 1
            loss_labels.append(f"{spec.diffracted_port.value}:{k - shift:+d}")
        blocks.append((i_u, i_d))

    mat = np.eye(dim, dtype=complex)
    for i_u, i_d in blocks:
        mat[i_u, i_u] = cos_t
        mat[i_u, i_d] = 1j * sin_t
        mat[i_d, i_u] = 1j * sin_t
        mat[i_d, i_d] = cos_t
    return ModeUnitary(basket, mat, loss_labels)


def element_unitary(spec: ElementSpec, basket: ModeBasket) -> ModeUnitary:
    """Unitary matrix of a single optical element on the given basket."""
    if isinstance(spec, Beamsplitter):
        return _beamsplitter_unitary(spec, basket)
    if isinstance(spec, Delay):
        return _delay_unitary(spec, basket)
    if isinstance(spec, PhaseShift):
        return _phase_shift_unitary(spec, basket)
    if isinstance(spec, Aom):
        return _aom_unitary(spec, basket)
    raise TypeError(f"not an element spec: {spec!r}")


def compose(first: ModeUnitary, then: ModeUnitary) -> ModeUnitary:
    """Unitary of `first` followed by `then` (matrix product then @ first).

    Loss modes of the two factors are kept disjoint: light lost in the
    first element can never re-enter through the second element's vacuum
    feeds, and the product stays exactly unitary.
    """
    if first.basket != then.basket:
        raise ValueError("cannot compose unitaries over different baskets")
    n = first.n_basket
    l1 = len(first.loss_labels)
    l2 = len(then.loss_labels)
    dim = n + l1 + l2

    f_ext = np.eye(dim, dtype=complex)
    f_ext[: n + l1, : n + l1] = first.matrix

    t_ext = np.eye(dim, dtype=complex)
    t_ext[:n, :n] = then.matrix[:n, :n]
    if l2:
        t_ext[:n, n + l1:] = then.matrix[:n, n:]
        t_ext[n + l1:, :n] = then.matrix[n:, :n]
        t_ext[n + l1:, n + l1:] = then.matrix[n:, n:]

    return ModeUnitary(first.basket, t_ext @ f_ext,
                       first.loss_labels + then.loss_labels)


def compose_chain(elements: Sequence[ModeUnitary]) -> ModeUnitary:
    """Compose a sequence of unitaries applied in list order."""
    if not elements:
        raise ValueError("need at least one unitary to compose")
    return functools.reduce(compose, elements)


def umzi_unitary(Omega_tau: float, lock_sign: int = +1,
                 basket: ModeBasket | None = None) -> ModeUnitary:
    """Unequal-arm interferometer: splitter, one-arm delay, recombiner.

    The light enters on IN (with VAC as the idle input) and leaves on
    OUT1/OUT2. The delayed arm is the one fed with the i cross-amplitude of
    the first splitter; the carrier phase across the delay is locked to
    lock_sign * pi/2 and the sideband phase per comb step is Omega_tau.
    """
    if lock_sign not in (+1, -1):
        raise ValueError(f"lock_sign must be +1 or -1, got {lock_sign}")
    if basket is None:
        basket = basket_standard()
    steps = [
        element_unitary(Beamsplitter(Port.IN, Port.VAC), basket),
        port_swap(basket, Port.IN, Port.ARM1),
        port_swap(basket, Port.VAC, Port.ARM2),
        element_unitary(Delay(Port.ARM2, lock_sign * math.pi / 2, Omega_tau),
                        basket),
        element_unitary(Beamsplitter(Port.ARM1, Port.ARM2), basket),
        port_swap(basket, Port.ARM1, Port.OUT1),
        port_swap(basket, Port.ARM2, Port.OUT2),
    ]
    return compose_chain(steps)


def analyser_unitary(theta: float, phi: float,
                     basket: ModeBasket | None = None) -> ModeUnitary:
    """Full sideband analyser: quarter-wave interferometer, phase trim phi
    on the path feeding the AOM's diffracted port, then the AOM at angle
    theta shifting by +2 comb steps.

    At the interferometer lock point the +1/-1 input sidebands separate
    completely into the two internal paths, so the AOM recombination mixes
    the sideband pair like a variable-reflectivity splitter with phase phi.
    """
    if basket is None:
        basket = basket_standard()
    u = umzi_unitary(math.pi / 2, +1, basket)
    u = compose(u, element_unitary(PhaseShift(Port.OUT2, phi), basket))
    u = compose(u, element_unitary(Aom(Port.OUT1, Port.OUT2, theta, 2), basket))
    return u


def analyser_closed_form(theta: float, phi: float) -> dict[ModeId, dict[ModeId, complex]]:
    """Closed-form coefficient table of the analyser on the sideband pair.

    Maps each populated output mode to its input-mode coefficients:

        (OUT1, +1) <- cos(theta) (IN, +1) - e^{i phi} sin(theta) (IN, -1)
        (OUT1, -1) <- i cos(theta) (VAC, -1) - i e^{i phi} sin(theta) (VAC, -3)
        (OUT2, +1) <- -e^{i phi} cos(theta) (VAC, +1) - sin(theta) (VAC, +3)
        (OUT2, -1) <- i e^{i phi} cos(theta) (IN, -1) + i sin(theta) (IN, +1)
    """
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    ph = np.exp(1j * phi)
    return {
        ModeId(Port.OUT1, +1): {
            ModeId(Port.IN, +1): complex(cos_t),
            ModeId(Port.IN, -1): complex(-ph * sin_t),
        },
        ModeId(Port.OUT1, -1): {
            ModeId(Port.VAC, -1): complex(1j * cos_t),
            ModeId(Port.VAC, -3): complex(-1j * ph * sin_t),
        },
        ModeId(Port.OUT2, +1): {
            ModeId(Port.VAC, +1): complex(-ph * cos_t),
            ModeId(Port.VAC, +3): complex(-sin_t),
        },
        ModeId(Port.OUT2, -1): {
            ModeId(Port.IN, -1): complex(1j * ph * cos_t),
            ModeId(Port.IN, +1): complex(1j * sin_t),
        },
    }


def umzi_port_transmission(Omega_tau: float, sideband_sign: int) -> float:
    """Power fraction of a sideband leaving the selected interferometer port.

    With the carrier locked a quarter wave across the delay, the favored
    sideband (+1) exits the selected port with fraction
    (1 + sin(Omega_tau))/2 and the suppressed one (-1) with
    (1 - sin(Omega_tau))/2. For a lock of sign s, the fraction of the
    offset-k sideband on OUT1 corresponds to sideband_sign = s * k.
    """
    if sideband_sign not in (+1, -1):
        raise ValueError(f"sideband_sign must be +1 or -1, got {sideband_sign}")
    return (1.0 + sideband_sign * math.sin(Omega_tau)) / 2.0
