"""Spectrum of a ring with one PT-symmetric impurity, and its exceptional point."""
import numpy as np

from nonunitary_lab import impurity_chain
from nonunitary_lab.analytic import check_ep
from nonunitary_lab.eigensys import classify_pt, solve

# %% A 32-cell ring at criticality (v1 = -w1 = 1) with u = 3 on one cell.
spec = impurity_chain(32, u=3.0, lam=1.0)
sys_ = solve(spec)
print("PT phase:", classify_pt(sys_).value)
print("largest |Im E|:", np.abs(sys_.energies.imag).max())

# %% Two levels coalesce at E = 0.  The solver detunes lambda slightly so the
# eigenbasis stays invertible, and reports how far it moved.
print("detuning applied:", sys_.ep_detuning)
print("minimum phase rigidity:", sys_.min_phase_rigidity)

# %% The coalesced state is the uniform (1, -i) vector.
print("EP residual with one impurity:", check_ep(spec).residual_norm)
print("EP residual with two impurities:", check_ep(impurity_chain(32, x=(-8, 8))).residual_norm)

# %% A twist of the closing bond removes it.
twisted = impurity_chain(32, boundary="TBC", phi=np.pi / 2)
print("EP residual under a pi/2 twist:", check_ep(twisted).residual_norm)
