"""Open chains: the u = 3 impurity is harmless, the fine-tuned one is not."""
from nonunitary_lab import fine_tuned_chain, impurity_chain
from nonunitary_lab.entanglement import entropy_profile
from nonunitary_lab.scaling import entropy_prefactor, fit_entropy

# %% An odd cell count keeps the impurity on the inversion centre.
n = 97
margin = n // 4

plain = fit_entropy(entropy_profile(impurity_chain(n, boundary="OBC")), impurity_margin=margin)
print(f"u = 3 impurity: c = {plain.c:.4f}")

# %% alpha = 7/5, beta = 2/5 places the chain on an exceptional point.
tuned = fit_entropy(entropy_profile(fine_tuned_chain(n)), impurity_margin=margin)
print(f"fine-tuned: c = {tuned.c:.4f}, slope x 3 = {3 * tuned.c * entropy_prefactor('OBC'):.4f}")
