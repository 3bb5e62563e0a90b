"""
Biorthonormal diagonalization of non-Hermitian single-particle Hamiltonians.

Left eigenvectors are the columns of ``inv(R)^dagger``, so ``L^dagger R = 1``
holds by construction whenever ``R`` is invertible.  Proximity to an
exceptional point shows up as a blow-up of ``overlap_cond`` and a collapse
of the phase rigidity of the coalescing pair.
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import ChainSpec, build_hamiltonian

logger = logging.getLogger(__name__)

#: relative detuning applied to impurity strengths when a chain sits on an EP
EP_DETUNE = 1e-8
#: phase rigidity below which a spectrum is treated as EP-degenerate
EP_RIGIDITY_TOL = 1e-5
#: condition number above which the right-eigenvector matrix counts as singular
SINGULAR_COND = 1e14


class PTPhase(str, enum.Enum):
    PRESERVED = "Preserved"
    BROKEN = "Broken"


class EPDegenerateError(np.linalg.LinAlgError):
    """Right eigenvectors are numerically linearly dependent."""

    def __init__(self, msg, overlap_cond=np.inf):
        super().__init__(msg)
        self.overlap_cond = overlap_cond


class PTBrokenError(ValueError):
    pass


@dataclass
class BiorthSystem:
    """Single-particle spectrum with a biorthonormal eigenbasis.

    Attributes
    ----------
    energies : ndarray, shape (D,)
        Sorted by real part, then imaginary part, then original index.
    right_vecs, left_vecs : ndarray, shape (D, D)
        Column ``n`` pairs with ``energies[n]``; ``left_vecs^H @ right_vecs = 1``.
    overlap_cond : float
        Condition number of the raw right-eigenvector matrix.
    phase_rigidity : ndarray, shape (D,)
        ``|<L_n|R_n>| / (|L_n| |R_n|)``; 1 for Hermitian input, -> 0 at an EP.
    hamiltonian : ndarray
    ep_detuning : float
        Relative impurity detuning used to step off an exact EP (0 if none).
    """

    energies: np.ndarray
    right_vecs: np.ndarray
    left_vecs: np.ndarray
    overlap_cond: float
    phase_rigidity: np.ndarray
    hamiltonian: np.ndarray
    ep_detuning: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def min_phase_rigidity(self) -> float:
        return float(self.phase_rigidity.min())

    def default_realness_tol(self) -> float:
        return default_realness_tol(self.hamiltonian)


@dataclass
class ManyBodyState:
    occupied: np.ndarray
    total_energy: complex

    @property
    def n_particles(self) -> int:
        return len(self.occupied)

    @property
    def energy(self) -> float:
        return float(np.real(self.total_energy))


def default_realness_tol(h: np.ndarray) -> float:
    return 1e-8 * max(float(np.abs(h).max()), 1.0)


def _sort_order(e: np.ndarray) -> np.ndarray:
    # lexsort: last key is primary
    return np.lexsort((np.arange(len(e)), e.imag, e.real))


def diagonalize(h: np.ndarray, realness_tol: float | None = None) -> BiorthSystem:
    """Biorthonormal eigendecomposition of ``h``.

    Hermitian input goes through ``eigh`` so degenerate subspaces come back
    orthonormal.  ``realness_tol`` is accepted for symmetry with
    :func:`classify_pt` and only used to decide whether to zero round-off
    imaginary parts of a Hermitian spectrum.
    """
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("Hamiltonian has non-finite entries")
    if np.array_equal(h, h.conj().T):
        e, r = np.linalg.eigh(h)
        e = e.astype(complex)
        rigidity = np.ones(len(e))
        return BiorthSystem(e, r, r.copy(), 1.0, rigidity, h)

    e, r = np.linalg.eig(h)
    order = _sort_order(e)
    e, r = e[order], r[:, order]
    cond = float(np.linalg.cond(r))
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise EPDegenerateError(
            f"right eigenvectors are singular (overlap_cond={cond:.3g}); "
            "the Hamiltonian is at an exceptional point", cond)
    left = np.linalg.inv(r).conj().T
    num = np.abs(np.einsum("ij,ij->j", left.conj(), r))
    den = np.linalg.norm(left, axis=0) * np.linalg.norm(r, axis=0)
    return BiorthSystem(e, r, left, cond, num / den, h)


def solve(spec: ChainSpec, realness_tol: float | None = None,
          ep_detune: float = EP_DETUNE,
          rigidity_tol: float = EP_RIGIDITY_TOL) -> BiorthSystem:
    """Build and diagonalize ``spec``, stepping off an exact EP if needed.

    At an exact EP the coalescing pair is split by round-off in a random
    direction, which makes eigenvector-derived quantities irreproducible.
    When the minimum phase rigidity drops below ``rigidity_tol`` the
    impurity strengths are scaled by ``1 - ep_detune`` so the pair splits
    deterministically along the physical path.  Pass ``ep_detune=0`` to
    disable.
    """
    try:
        sys_ = diagonalize(build_hamiltonian(spec), realness_tol)
        at_ep = sys_.min_phase_rigidity < rigidity_tol
    except EPDegenerateError:
        if not ep_detune:
            raise
        at_ep = True
    if at_ep and ep_detune and spec.impurities:
        logger.debug("spec %s at an EP; detuning impurities by %g", spec.spec_hash(), ep_detune)
        sys_ = diagonalize(build_hamiltonian(spec.detuned(ep_detune)), realness_tol)
        sys_.ep_detuning = ep_detune
    return sys_


def classify_pt(sys_: BiorthSystem, realness_tol: float | None = None) -> PTPhase:
    tol = sys_.default_realness_tol() if realness_tol is None else realness_tol
    if np.abs(sys_.energies.imag).max() < tol:
        return PTPhase.PRESERVED
    return PTPhase.BROKEN


def conjugate_pairing_error(energies: np.ndarray) -> float:
    """Distance between the spectrum and its complex conjugate as multisets."""
    e = np.asarray(energies)
    a = e[_sort_order(e)]
    c = e.conj()
    b = c[_sort_order(c)]
    # greedy matching is enough once both sides are sorted the same way,
    # except for near-ties in the real part, handled by the nearest search
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for z in a:
        d = np.abs(b - z)
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
    return worst


def ground_state(sys_: BiorthSystem, n_particles: int | None = None,
                 realness_tol: float | None = None) -> ManyBodyState:
    """Occupy the ``n_particles`` orbitals of lowest real energy (default: half filling).

    Ties at the Fermi level (e.g. a split EP pair at E = 0) are resolved in
    favour of the lower sorted index, so exactly one member of the pair is
    filled.
    """
    if classify_pt(sys_, realness_tol) is PTPhase.BROKEN:
        raise PTBrokenError(
            "spectrum is not real within tolerance (max |Im E| = "
            f"{np.abs(sys_.energies.imag).max():.3g}); ground state is undefined")
    n = sys_.dim // 2 if n_particles is None else int(n_particles)
    if not 0 <= n <= sys_.dim:
        raise ValueError(f"cannot place {n} particles in {sys_.dim} orbitals")
    occ = np.arange(n)
    return ManyBodyState(occ, complex(sys_.energies[occ].sum()))


@dataclass
class EnergyPoint:
    n_cells: int
    energy: float
    overlap_cond: float
    min_phase_rigidity: float
    ep_detuning: float = 0.0


class SizeSweepError(RuntimeError):
    def __init__(self, n_cells, cause):
        super().__init__(f"L={n_cells}: {cause}")
        self.n_cells = n_cells
        self.cause = cause


def _energy_point(spec: ChainSpec, realness_tol) -> EnergyPoint:
    try:
        s = solve(spec, realness_tol)
        gs = ground_state(s, realness_tol=realness_tol)
    except (EPDegenerateError, PTBrokenError, ValueError) as exc:
        raise SizeSweepError(spec.n_cells, exc) from exc
    return EnergyPoint(spec.n_cells, gs.energy, s.overlap_cond, s.min_phase_rigidity,
                       s.ep_detuning)


def energy_vs_size(spec_template: ChainSpec, sizes, realness_tol: float | None = None,
                   threads: int = 1) -> list[EnergyPoint]:
    """Half-filled ground-state energies for each cell count in ``sizes``.

    Impurities keep their lattice coordinate (see :meth:`ChainSpec.resized`).
    """
    specs = [spec_template.resized(int(n)) for n in sizes]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda s: _energy_point(s, realness_tol), specs))
    return [_energy_point(s, realness_tol) for s in specs]
