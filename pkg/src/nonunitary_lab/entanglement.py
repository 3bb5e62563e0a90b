"""
Biorthogonal entanglement and Renyi entropies from the one-particle
correlation matrix ``C = sum_{n occ} |R_n><L_n|``.

For a subsystem block with eigenvalues ``zeta``::

    S_1 = -sum [zeta log zeta + (1 - zeta) log(1 - zeta)]
    S_n = 1/(1 - n) sum log[zeta**n + (1 - zeta)**n]

Away from the Hermitian limit ``zeta`` may be complex or lie outside
[0, 1].  Two branch conventions are offered for ``S_1``:

``"modulus"`` (default)
    ``zeta * log|zeta|``; the real part is insensitive to how close the
    state is to an exceptional point.
``"principal"``
    ``zeta * Log(zeta)`` on the principal branch.  Its real part diverges
    linearly in the size of the large ``zeta`` pair that an EP produces.

Both agree whenever ``zeta`` is real and in [0, 1].  Renyi entropies always
use the principal branch, whose real part is ``log|.|``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .eigensys import (BiorthSystem, ManyBodyState, ground_state, solve)
from .model import ChainSpec, lattice_coordinate

logger = logging.getLogger(__name__)

IMAG_FLAG_TOL = 1e-6
EP_COND_WARN = 1e6
_ZERO = 1e-14


@dataclass
class CorrelationMatrix:
    entries: np.ndarray
    n_occupied: int
    ep_warning: bool = False

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def block(self, sites) -> np.ndarray:
        idx = np.asarray(sites)
        return self.entries[np.ix_(idx, idx)]


@dataclass
class EntropySample:
    value: float
    imag: float

    @property
    def flagged(self) -> bool:
        return abs(self.imag) > IMAG_FLAG_TOL


@dataclass
class EntropyCurve:
    """Entropy versus subsystem size (in unit cells) for one chain."""

    cut_sizes: np.ndarray
    values: np.ndarray
    imag: np.ndarray
    renyi_n: float
    total_L: int
    boundary: str
    impurity_cells: tuple = ()
    cut_origin: int = 0
    spec_hash: str = ""
    ep_detuning: float = 0.0
    min_phase_rigidity: float = 1.0
    log_branch: str = "modulus"
    meta: dict = field(default_factory=dict)

    @property
    def flags(self) -> np.ndarray:
        return np.abs(self.imag) > IMAG_FLAG_TOL

    @property
    def max_im(self) -> float:
        return float(np.abs(self.imag).max()) if len(self.imag) else 0.0

    @property
    def samples(self) -> list[tuple[int, float]]:
        return [(int(a), float(s)) for a, s in zip(self.cut_sizes, self.values)]


def correlation_matrix(sys_: BiorthSystem, state: ManyBodyState) -> CorrelationMatrix:
    """``C_ij = sum_{n occ} R_n(i) conj(L_n(j))``.

    In the Hermitian limit this is ``<c_j^dagger c_i>``.
    """
    occ = np.asarray(state.occupied)
    r = sys_.right_vecs[:, occ]
    l = sys_.left_vecs[:, occ]
    warn = sys_.overlap_cond > EP_COND_WARN
    if warn:
        logger.warning("correlation matrix built near an EP (overlap_cond=%.3g)",
                       sys_.overlap_cond)
    return CorrelationMatrix(r @ l.conj().T, len(occ), warn)


def _xlogx(z: np.ndarray, branch: str) -> np.ndarray:
    small = np.abs(z) < _ZERO
    safe = np.where(small, 1.0, z)
    if branch == "modulus":
        log = np.log(np.abs(safe))
    elif branch == "principal":
        log = np.log(safe.astype(complex))
    else:
        raise ValueError(f"unknown log branch {branch!r}")
    return np.where(small, 0.0, z * log)


def entropy_from_eigenvalues(zeta, renyi_n: float = 1.0, branch: str = "modulus") -> complex:
    """Entropy (complex; real part is the entropy) from block eigenvalues."""
    z = np.asarray(zeta, dtype=complex)
    if renyi_n == 1:
        return complex(-(_xlogx(z, branch) + _xlogx(1 - z, branch)).sum())
    if renyi_n <= 0:
        raise ValueError(f"renyi_n must be positive, got {renyi_n}")
    arg = z**renyi_n + (1 - z) ** renyi_n
    return complex(np.log(arg).sum() / (1 - renyi_n))


def subsystem_entropy(C: CorrelationMatrix, cut, renyi_n: float = 1.0,
                      branch: str = "modulus") -> EntropySample:
    """Entropy of the sites in ``cut`` (a slice, range or index array)."""
    if isinstance(cut, slice):
        sites = np.arange(C.dim)[cut]
    else:
        sites = np.asarray(cut, dtype=int)
    if len(sites) == 0 or len(sites) >= C.dim:
        raise ValueError("cut must be a non-empty proper subset of the sites")
    zeta = np.linalg.eigvals(C.block(sites))
    s = entropy_from_eigenvalues(zeta, renyi_n, branch)
    return EntropySample(s.real, s.imag)


def cell_cut(cut_origin: int, n_cut: int, n_cells: int) -> np.ndarray:
    """Sites of ``n_cut`` consecutive cells starting at ``cut_origin`` (wrapping)."""
    cells = (cut_origin + np.arange(n_cut)) % n_cells
    return np.stack([2 * cells, 2 * cells + 1], axis=1).ravel()


def entropy_profile(spec: ChainSpec, renyi_n: float = 1.0, cut_origin: int = 0,
                    cut_sizes: Sequence[int] | None = None, branch: str = "modulus",
                    sys_: BiorthSystem | None = None) -> EntropyCurve:
    """Entropy of ``L_A`` consecutive cells starting at ``cut_origin``, for each ``L_A``.

    One diagonalization serves all cuts.  Default cut sizes are
    ``1 .. n_cells - 1``.
    """
    n = spec.n_cells
    if cut_sizes is None:
        cut_sizes = range(1, n)
    cut_sizes = np.asarray(list(cut_sizes), dtype=int)
    if len(cut_sizes) == 0 or cut_sizes.min() < 1 or cut_sizes.max() >= n:
        raise ValueError(f"cut sizes must lie in [1, {n - 1}]")
    if sys_ is None:
        sys_ = solve(spec)
    C = correlation_matrix(sys_, ground_state(sys_))
    vals, ims = [], []
    for la in cut_sizes:
        s = subsystem_entropy(C, cell_cut(cut_origin, la, n), renyi_n, branch)
        vals.append(s.value)
        ims.append(s.imag)
    curve = EntropyCurve(
        cut_sizes=cut_sizes, values=np.array(vals), imag=np.array(ims),
        renyi_n=float(renyi_n), total_L=n, boundary=spec.boundary.value,
        impurity_cells=tuple((i.cell - cut_origin) % n for i in spec.impurities),
        cut_origin=cut_origin, spec_hash=spec.spec_hash(),
        ep_detuning=sys_.ep_detuning, min_phase_rigidity=sys_.min_phase_rigidity,
        log_branch=branch,
        meta={"impurity_x": [lattice_coordinate(i.cell, n) for i in spec.impurities]},
    )
    if curve.flags.any():
        logger.info("%d of %d entropy samples flagged (max |Im| = %.3g)",
                    int(curve.flags.sum()), len(cut_sizes), curve.max_im)
    return curve
