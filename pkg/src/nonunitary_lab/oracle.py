"""
Brute-force Fock-space reference for tiny chains (at most ``MAX_SITES`` sites).

Basis states are the ``N``-element subsets of the sites in lexicographic
order; a subset ``(s1 < s2 < ...)`` stands for ``c+_{s1} c+_{s2} ... |0>``.
Test-only: it exists to cross-check the determinant and correlation-matrix
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

MAX_SITES = 12


class OracleSizeError(ValueError):
    pass


@dataclass
class FockState:
    amplitudes: np.ndarray
    n_sites: int
    n_particles: int
    energy: complex = 0.0

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return fock_basis(self.n_sites, self.n_particles)


def _guard(n_sites: int) -> None:
    if n_sites > MAX_SITES:
        raise OracleSizeError(f"{n_sites} sites exceed the oracle limit of {MAX_SITES}")


def fock_basis(n_sites: int, n_particles: int) -> list[tuple[int, ...]]:
    _guard(n_sites)
    return list(combinations(range(n_sites), n_particles))


def _hop(config: tuple[int, ...], i: int, j: int):
    """Apply ``c+_i c_j``; return (sign, new config) or None."""
    if j not in config:
        return None
    sign = (-1) ** config.index(j)
    rest = [s for s in config if s != j]
    if i in rest:
        return None
    sign *= (-1) ** sum(1 for s in rest if s < i)
    return sign, tuple(sorted(rest + [i]))


def many_body_hamiltonian(h: np.ndarray, n_particles: int) -> np.ndarray:
    """Matrix of ``sum_ij h_ij c+_i c_j`` in the ``n_particles`` sector."""
    h = np.asarray(h, dtype=complex)
    n_sites = h.shape[0]
    basis = fock_basis(n_sites, n_particles)
    index = {c: k for k, c in enumerate(basis)}
    hm = np.zeros((len(basis), len(basis)), dtype=complex)
    nz = np.argwhere(h != 0)
    for col, config in enumerate(basis):
        for i, j in nz:
            res = _hop(config, int(i), int(j))
            if res is not None:
                sign, new = res
                hm[index[new], col] += sign * h[i, j]
    return hm


def fock_ground_state(h: np.ndarray, n_particles: int) -> FockState:
    """Lowest-real-energy eigenstate of the many-body Hamiltonian."""
    h = np.asarray(h, dtype=complex)
    n_sites = h.shape[0]
    _guard(n_sites)
    hm = many_body_hamiltonian(h, n_particles)
    if np.allclose(hm, hm.conj().T, atol=0, rtol=0):
        e, v = np.linalg.eigh(hm)
        k = 0
    else:
        e, v = np.linalg.eig(hm)
        k = int(np.argmin(e.real))
    psi = v[:, k] / np.linalg.norm(v[:, k])
    return FockState(psi, n_sites, n_particles, complex(e[k]))


def slater_state(orbitals: np.ndarray) -> FockState:
    """Fock amplitudes of ``prod_n (sum_i orbitals[i, n] c+_i) |0>``."""
    orb = np.asarray(orbitals, dtype=complex)
    n_sites, n = orb.shape
    basis = fock_basis(n_sites, n)
    amp = np.array([np.linalg.det(orb[list(c), :]) if n else 1.0 for c in basis], dtype=complex)
    return FockState(amp, n_sites, n)


def fock_correlation(state: FockState) -> np.ndarray:
    """``C_ij = <c+_j c_i>``, the convention of the correlation-matrix module."""
    basis = state.basis
    index = {c: k for k, c in enumerate(basis)}
    psi = state.amplitudes
    n = state.n_sites
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for col, config in enumerate(basis):
                res = _hop(config, i, j)
                if res is not None:
                    sign, new = res
                    acc += np.conj(psi[index[new]]) * sign * psi[col]
            g[i, j] = acc  # <c+_i c_j>
    return g.T


def fock_entropy(state: FockState, cut) -> float:
    """Von Neumann entropy of the reduced density matrix of the sites in ``cut``."""
    _guard(state.n_sites)
    a_sites = sorted(set(int(s) for s in cut))
    a_set = set(a_sites)
    rows: dict[tuple, int] = {}
    cols: dict[tuple, int] = {}
    entries = []
    for amp, config in zip(state.amplitudes, state.basis):
        if amp == 0:
            continue
        ca = tuple(s for s in config if s in a_set)
        cb = tuple(s for s in config if s not in a_set)
        # sign of reordering the creation string to (A modes, B modes)
        swaps = sum(1 for x in cb for y in ca if x < y)
        entries.append((rows.setdefault(ca, len(rows)), cols.setdefault(cb, len(cols)),
                        (-1) ** swaps * amp))
    m = np.zeros((max(len(rows), 1), max(len(cols), 1)), dtype=complex)
    for r, c, v in entries:
        m[r, c] += v
    p = np.linalg.svd(m, compute_uv=False) ** 2
    p = p[p > 1e-300] / p.sum()
    return float(-(p * np.log(p)).sum())


def fock_overlap(a: FockState, b: FockState) -> complex:
    """``<a|b>``; zero between different particle-number sectors."""
    if a.n_sites != b.n_sites:
        raise ValueError(f"basis mismatch: {a.n_sites} vs {b.n_sites} sites")
    if a.n_particles != b.n_particles:
        return 0j
    return complex(np.vdot(a.amplitudes, b.amplitudes))
