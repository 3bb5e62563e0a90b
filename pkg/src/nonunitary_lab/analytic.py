"""
Closed-form exceptional-point check.

At ``v1 = -w1`` on a ring, the uniform state with ``(1, -i)`` on every cell
is annihilated by the clean hoppings.  An impurity block annihilates it as
well when ``lam * diag == offdiag``, which holds at ``lam = 1`` for the
single-parameter impurity.  The state is then a zero mode shared by the
non-Hermitian and Hermitian sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChainSpec, build_hamiltonian


@dataclass
class EpReport:
    residual_norm: float
    exists: bool
    candidate_state: np.ndarray
    tol: float

    def to_dict(self) -> dict:
        return {"residual_norm": self.residual_norm, "exists": self.exists, "tol": self.tol}


def ep_candidate(n_cells: int) -> np.ndarray:
    """Normalized vector with ``(1, -i)`` on every cell."""
    if n_cells < 2:
        raise ValueError(f"n_cells must be >= 2, got {n_cells}")
    return np.tile(np.array([1.0, -1.0j]), n_cells) / np.sqrt(2 * n_cells)


def check_ep(spec: ChainSpec, tol: float | None = None) -> EpReport:
    """Residual ``||H phi||`` of the uniform candidate; ``exists`` iff below ``tol``.

    ``tol`` defaults to ``1e-10 * max|H_ij|``.
    """
    h = build_hamiltonian(spec)
    phi = ep_candidate(spec.n_cells)
    if tol is None:
        tol = 1e-10 * float(np.abs(h).max())
    res = float(np.linalg.norm(h @ phi))
    return EpReport(res, res < tol, phi, tol)
