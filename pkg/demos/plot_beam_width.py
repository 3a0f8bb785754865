"""
From an optimal xi to a physical beam width
===========================================

Holding A0 fixed gives an optimal xi. Mapping that back to a beam width needs
the geometry, and xi(w_z) is not monotone. A second, physical optimization
lets both xi and A0 move with w_z. It lands on the narrow branch, where A0 is
close to 1, so it nearly coincides with the fixed-A0 answer.
"""

from fsomimo import BPSK, optimize_beam_width, optimize_xi
from fsomimo.geometry import beam_width_for_xi, turning_beam_width, xi_of_beam_width

r, sigma_s, MN, g = 0.05, 0.05, 36, 1.0

w_turn = turning_beam_width(r)
print(f"xi(w_z) has its minimum {xi_of_beam_width(w_turn, r, sigma_s):.4f} at w_z = {w_turn:.4f} m")

xi_star = optimize_xi(BPSK, g, MN, A0=1.0).xi_star
for branch, bracket in (("narrow", (0.015, w_turn)), ("wide", (w_turn, 1.0))):
    try:
        wz = beam_width_for_xi(xi_star, r, sigma_s, bracket, branch=branch)
        print(f"{branch:>6} branch: xi* = {xi_star:.4f} at w_z = {wz:.6f} m")
    except ValueError as exc:
        print(f"{branch:>6} branch: {exc}")

# %%
# The physical mode scans a bracket in which every width keeps xi² < M*N + 1.
res = optimize_beam_width(BPSK, g, MN, r, sigma_s, (0.0226, 0.6))
print(
    f"physical optimum: w_z = {res.wz_star:.6f} m, xi = {res.xi_star:.4f}, "
    f"A0 = {res.A0_at_star:.5f}, BER = {res.ber:.3e}"
)
