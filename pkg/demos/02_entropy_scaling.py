"""Entanglement entropy of the half-filled ring and the central charge it implies."""
from nonunitary_lab import impurity_chain
from nonunitary_lab.entanglement import entropy_profile
from nonunitary_lab.scaling import fit_entropy

L = 96

# %% Without the impurity the chain is an ordinary c = 1 free fermion.
clean = fit_entropy(entropy_profile(impurity_chain(L, lam=0.0)))
print(f"lambda = 0: c = {clean.c:.4f}")

# %% At lambda = 1 the ground state contains the exceptional point and the
# slope of S against the chord log turns negative.
curve = entropy_profile(impurity_chain(L))
fit = fit_entropy(curve)
print(f"lambda = 1: c = {fit.c:.4f}, rms = {fit.residual_rms:.2g}, "
      f"largest Im S = {curve.max_im:.2g}")

# %% Renyi entropies carry the same c once the (n+1)/n prefactor is divided out.
for n in (2, 3):
    print(f"Renyi n = {n}: c = {fit_entropy(entropy_profile(impurity_chain(L), renyi_n=n)).c:.4f}")
