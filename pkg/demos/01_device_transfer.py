"""Walk through the analyser as a mode unitary.

Builds the frequency-shifting interferometer element by element, checks it
against the closed-form coefficient table on the sideband pair, and shows
where every input ends up at full diffraction.
"""

import numpy as np

from sidebandsim import (
    ModeId,
    Port,
    analyser_closed_form,
    analyser_unitary,
    basket_standard,
)

basket = basket_standard(3)
theta, phi = np.pi / 3, 0.8

print(f"analyser at theta={theta:.4f} rad, phi={phi:.4f} rad")
u = analyser_unitary(theta, phi, basket)
print(f"matrix size: {u.dim} x {u.dim} "
      f"({u.n_basket} basket modes + {len(u.loss_labels)} loss slots)")
print(f"unitarity defect max|UU+-I|: {u.unitarity_defect():.2e}")

print("\nclosed-form rows vs the composed matrix:")
for out_mode, row in analyser_closed_form(theta, phi).items():
    for in_mode, coeff in row.items():
        got = u.entry(out_mode, in_mode)
        print(f"  ({out_mode.port.value},{out_mode.offset:+d}) <- "
              f"({in_mode.port.value},{in_mode.offset:+d}):  "
              f"table {coeff:+.6f}   matrix {got:+.6f}   "
              f"|diff| {abs(got - coeff):.1e}")

print("\nfull diffraction (theta = pi/2): every input leaves its offset")
u_full = analyser_unitary(np.pi / 2, 0.0, basket)
for k in (-1, 0, +1):
    amp = np.zeros(len(basket), dtype=complex)
    amp[basket.index(ModeId(Port.IN, k))] = 1.0
    kept, lost = u_full.apply(amp)
    landing = [
        (mode.port.value, mode.offset, abs(a) ** 2)
        for mode, a in zip(basket.modes, kept)
        if abs(a) ** 2 > 1e-20
    ]
    spots = ", ".join(f"{port}({offset:+d}) {frac:.3f}"
                      for port, offset, frac in landing)
    print(f"  input (in,{k:+d}) -> {spots}")
