"""
Outage probability against normalized SNR
=========================================

The outage closed form depends on the SNR only through gamma_th / gamma_avg.
This script prints it on a small grid of normalized SNR and xi for a 2 x 2
link, and flags the corner where the power-law CDF leaves [0, 1].
"""

import warnings

import numpy as np

from fsomimo import ChannelParams, outage_probability
from fsomimo.exceptions import ModelRangeWarning

MN, A0 = 4, 0.710144
xis = (0.8, 1.2, 1.6, 1.9)
normalized_db = np.arange(0, 31, 5)  # 10 log10(gamma_avg / gamma_th)

print("norm SNR  " + "".join(f"xi={xi:<9}" for xi in xis))
for db in normalized_db:
    cells = []
    for xi in xis:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ModelRangeWarning)
            value = outage_probability(1.0, 10 ** (db / 10), ChannelParams(MN, xi, A0))
        mark = "*" if caught else " "
        cells.append(f"{value:10.3e}{mark} ")
    print(f"{db:>5d} dB  " + "".join(cells))

print("* value above 1: the threshold sits outside the power-law range")
