"""Ground-state energy against ring size, fitted for the 1/L term."""
from nonunitary_lab import impurity_chain
from nonunitary_lab.eigensys import energy_vs_size
from nonunitary_lab.scaling import fit_energy

sizes = range(32, 161, 16)
points = energy_vs_size(impurity_chain(sizes[0]), sizes)
for p in points:
    print(f"L = {p.n_cells:4d}  E = {p.energy:.10f}")

# %% E = A + eps L + B/L + C/L^2, and c = -6 B / (pi v_F) on a ring.
fit = fit_energy(points, "PBC")
print(fit.summary())
