"""
Biorthogonal many-body fidelity along the impurity path ``lam in [0, 1]``.

    F(lam) = <GS_L(lam)|GS_R(lam+eps)> <GS_L(lam+eps)|GS_R(lam)>
    chi(lam) = (1 - Re F) / eps**2

Slater overlaps reduce to determinants over occupied orbitals.  Orbital
bases are biorthonormal, so ``F = 1`` exactly when ``eps = 0``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigensys import BiorthSystem, ManyBodyState, ground_state, solve
from .model import ChainSpec

logger = logging.getLogger(__name__)

_KEY_DIGITS = 12


class FidelityError(RuntimeError):
    def __init__(self, lam, cause):
        super().__init__(f"lambda={lam:.12g}: {cause}")
        self.lam = lam
        self.cause = cause


@dataclass
class FidelityCurve:
    lambdas: np.ndarray
    eps: float
    chi: np.ndarray
    fidelity_raw: np.ndarray
    spec_hash: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.lambdas)
        if not (len(self.chi) == n == len(self.fidelity_raw)):
            raise ValueError("lambdas, chi and fidelity_raw must have equal length")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if n > 1 and np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambdas must be strictly increasing")

    @property
    def max_im_f(self) -> float:
        return float(np.abs(self.fidelity_raw.imag).max()) if len(self.lambdas) else 0.0

    def rows(self):
        for lam, chi, f in zip(self.lambdas, self.chi, self.fidelity_raw):
            yield float(lam), float(chi), float(f.real), float(f.imag)


def gs_overlap(sys_a: BiorthSystem, state_a: ManyBodyState,
               sys_b: BiorthSystem, state_b: ManyBodyState) -> complex:
    """``<GS_L(a)|GS_R(b)> = det(L_a[:, occ_a]^H R_b[:, occ_b])``."""
    if sys_a.dim != sys_b.dim:
        raise ValueError(f"dimension mismatch: {sys_a.dim} vs {sys_b.dim}")
    if state_a.n_particles != state_b.n_particles:
        raise ValueError(f"particle number mismatch: {state_a.n_particles} "
                         f"vs {state_b.n_particles}")
    la = sys_a.left_vecs[:, state_a.occupied]
    rb = sys_b.right_vecs[:, state_b.occupied]
    return complex(np.linalg.det(la.conj().T @ rb))


def default_grid(steps: int = 1000, eps: float | None = None) -> np.ndarray:
    """``0, 1/steps, ...`` up to ``1 - eps`` so that ``lam + eps <= 1``."""
    eps = 1.0 / steps if eps is None else eps
    grid = np.arange(steps + 1) / steps
    return grid[grid <= 1.0 - eps + 1e-12]


def _orbitals(spec: ChainSpec, lam: float):
    try:
        s = solve(spec.with_lambda(lam))
        gs = ground_state(s)
    except Exception as exc:  # tag any numerical failure with its lambda
        raise FidelityError(lam, exc) from exc
    occ = gs.occupied
    return s.right_vecs[:, occ], s.left_vecs[:, occ], s.ep_detuning


def _chunk(spec: ChainSpec, lams: np.ndarray, eps: float):
    # neighbouring grid points share diagonalizations when lam + eps hits the grid
    cache: dict[float, tuple] = {}
    out = []
    detuned = []
    for lam in lams:
        pair = []
        for x in (lam, min(lam + eps, 1.0)):
            key = round(float(x), _KEY_DIGITS)
            if key not in cache:
                cache[key] = _orbitals(spec, key)
                if cache[key][2]:
                    detuned.append(key)
            pair.append(cache[key])
        (ra, la, _), (rb, lb, _) = pair
        f = np.linalg.det(la.conj().T @ rb) * np.linalg.det(lb.conj().T @ ra)
        out.append(complex(f))
        for k in [k for k in cache if k < round(float(lam), _KEY_DIGITS)]:
            del cache[k]
    return out, detuned


def fidelity_susceptibility(spec_template: ChainSpec, lambdas=None, eps: float = 1e-3,
                            steps: int = 1000, threads: int = 1) -> FidelityCurve:
    """Fidelity susceptibility on a ``lam`` grid for every impurity of ``spec_template``.

    Parameters
    ----------
    spec_template : ChainSpec
        Impurity ``lam`` values are overwritten by the grid.
    lambdas : array_like, optional
        Defaults to :func:`default_grid` with ``steps`` and ``eps``.
    eps : float
        Finite step; ``lam + eps`` must stay inside [0, 1].
    threads : int
        Contiguous grid chunks are processed in parallel.  The result does
        not depend on this value.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    lams = default_grid(steps, eps) if lambdas is None else np.asarray(lambdas, dtype=float)
    if len(lams) == 0:
        raise ValueError("empty lambda grid")
    if lams.min() < 0 or lams.max() + eps > 1.0 + 1e-12:
        raise ValueError("every lambda and lambda + eps must lie in [0, 1]")
    if threads > 1 and len(lams) > threads:
        chunks = np.array_split(lams, threads)
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: _chunk(spec_template, c, eps), chunks))
    else:
        parts = [_chunk(spec_template, lams, eps)]
    f = np.array([z for p, _ in parts for z in p])
    detuned = sorted({k for _, d in parts for k in d})
    chi = (1.0 - f.real) / eps**2
    curve = FidelityCurve(lams, float(eps), chi, f, spec_template.spec_hash(),
                          meta={"ep_detuned_lambdas": detuned})
    if curve.max_im_f > 1e-6:
        logger.info("max |Im F| = %.3g", curve.max_im_f)
    return curve
