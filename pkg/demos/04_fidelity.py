"""Fidelity susceptibility along lambda: it blows up on the way to the exceptional point."""
import numpy as np

from nonunitary_lab import impurity_chain
from nonunitary_lab.fidelity import fidelity_susceptibility

curve = fidelity_susceptibility(impurity_chain(24), eps=1e-3, steps=200)
for lam in (0.1, 0.5, 0.9, 0.99):
    i = int(np.argmin(np.abs(curve.lambdas - lam)))
    print(f"lambda = {curve.lambdas[i]:.3f}  chi = {curve.chi[i]:.5g}")
print(f"last point lambda = {curve.lambdas[-1]:.3f}  chi = {curve.chi[-1]:.5g}")
