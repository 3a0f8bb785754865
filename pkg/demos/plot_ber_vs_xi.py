"""
Where does the BER bottom out in xi?
====================================

Sweep the beam-to-jitter ratio xi for a 6 x 6 link at a few average SNRs,
print the BER column by column, and compare the grid minimum with the
stationary point found by the optimizer.
"""

import numpy as np

from fsomimo import BPSK, ChannelParams, ber_closed, optimize_xi

MN = 36
xis = np.round(np.arange(1.0, 6.01, 0.5), 2)
snrs_db = (0, 10, 20)

# %%
# One column per SNR. BER falls steeply at first, then climbs again as
# xi² approaches M*N + 1 and the Γ(MN - xi² + 1) factor blows up.
print("xi    " + "".join(f"{db:>14d} dB" for db in snrs_db))
for xi in xis:
    row = [ber_closed(BPSK, 10 ** (db / 10), ChannelParams(MN, xi, 1.0)) for db in snrs_db]
    print(f"{xi:<5} " + "".join(f"{v:17.3e}" for v in row))

# %%
# The optimum moves right as the SNR grows.
for db in snrs_db:
    res = optimize_xi(BPSK, 10 ** (db / 10), MN, A0=1.0)
    print(f"{db:>3d} dB: xi* = {res.xi_star:.4f}  BER = {res.ber_at_optimum:.3e}  ({res.method.value})")
