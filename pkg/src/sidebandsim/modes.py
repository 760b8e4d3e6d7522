"""Bookkeeping of optical modes: spatial ports crossed with a truncated comb
of frequency offsets at integer multiples of the sideband spacing."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Port(Enum):
    """Spatial ports of the two-input, two-output sideband analyser."""

    IN = "in"
    VAC = "vac"
    ARM1 = "arm1"
    ARM2 = "arm2"
    OUT1 = "out1"
    OUT2 = "out2"


PORT_ORDER = (Port.IN, Port.VAC, Port.ARM1, Port.ARM2, Port.OUT1, Port.OUT2)

SOURCE_PORTS = (Port.IN, Port.VAC)
INTERNAL_PORTS = (Port.ARM1, Port.ARM2)
SINK_PORTS = (Port.OUT1, Port.OUT2)


@dataclass(frozen=True)
class ModeId:
    """One optical mode: a spatial port at an integer frequency offset.

    The offset counts comb steps from the carrier (offset 0); the physical
    frequency is carrier + offset * sideband spacing.
    """

    port: Port
    offset: int


class OutOfBasket:
    """Sentinel returned when a frequency shift leaves the tracked comb."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OUT_OF_BASKET"


OUT_OF_BASKET = OutOfBasket()


class ModeBasket:
    """Ordered, indexable set of every (port, offset) mode with
    |offset| <= max_offset.

    Ordering is port-major (declaration order) with offsets ascending, so
    mode indices are stable and reproducible. Instances are immutable; two
    baskets with the same max_offset compare equal.
    """

    def __init__(self, max_offset: int):
        if max_offset < 3:
            raise ValueError(
                "max_offset must be >= 3 to house the third-order vacuum "
                f"sidebands, got {max_offset}"
            )
        self.max_offset = int(max_offset)
        self.modes = tuple(
            ModeId(port, k)
            for port in PORT_ORDER
            for k in range(-self.max_offset, self.max_offset + 1)
        )
        self._index = {mode: i for i, mode in enumerate(self.modes)}

    def __len__(self) -> int:
        return len(self.modes)

    def __contains__(self, mode: ModeId) -> bool:
        return mode in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModeBasket) and other.max_offset == self.max_offset

    def __hash__(self) -> int:
        return hash(("ModeBasket", self.max_offset))

    def __repr__(self) -> str:
        return f"ModeBasket(max_offset={self.max_offset}, n_modes={len(self)})"

    def index(self, mode: ModeId) -> int:
        """Contiguous index of a mode; raises ValueError for unknown modes."""
        try:
            return self._index[mode]
        except KeyError:
            raise ValueError(f"mode {mode} is not in this basket") from None

    def mode_at(self, i: int) -> ModeId:
        return self.modes[i]

    def offsets(self) -> range:
        return range(-self.max_offset, self.max_offset + 1)


def basket_standard(max_offset: int = 3) -> ModeBasket:
    """Basket with all six ports at offsets -max_offset..+max_offset."""
    return ModeBasket(max_offset)


def shift_offset(mode: ModeId, delta_k: int, basket: ModeBasket):
    """Move a mode by delta_k comb steps on the same port.

    Returns the shifted ModeId, or OUT_OF_BASKET when the result falls
    outside the tracked comb. Shifting an unknown mode is an error.
    """
    if mode not in basket:
        raise ValueError(f"mode {mode} is not in this basket")
    k = mode.offset + delta_k
    if abs(k) > basket.max_offset:
        return OUT_OF_BASKET
    return ModeId(mode.port, k)
