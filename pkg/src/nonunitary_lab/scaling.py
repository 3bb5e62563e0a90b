"""
Linear least-squares extraction of central charges.

Entropy:  S = k * c * log[(L / pi) sin(pi L_A / L)] + b, with
k = (n + 1) / (6 n) for periodic rings and (n + 1) / (12 n) for open chains
(k = 1/3 and 1/6 for the von Neumann entropy).  The UV cutoff is one
lattice unit and lives in ``b``.

Energy:   E(L) = A + eps * L + B / L + C / L**2, with
c = -6 B / (pi v_F) for rings and c = -24 B / (pi v_F) for open chains.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .entanglement import EntropyCurve

DEFAULT_EXCLUDE_MARGIN = 4
#: relative rms (residual / spread of samples) above which a log fit is rejected
LOG_FORM_TOL = 0.05


class FitError(ValueError):
    pass


@dataclass
class FitResult:
    model: str
    coefficients: dict
    v_fermi: float
    residual_rms: float
    n_points_used: int
    n_excluded: int
    window: str
    n_flagged: int = 0
    log_form_ok: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def c(self) -> float:
        return self.coefficients["c"]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def summary(self) -> str:
        return (f"{self.model}: c={self.c:.6g} residual_rms={self.residual_rms:.3g} "
                f"n_points={self.n_points_used}")


def chord_log(cut_sizes, total_L) -> np.ndarray:
    la = np.asarray(cut_sizes, dtype=float)
    return np.log(total_L / np.pi * np.sin(np.pi * la / total_L))


def entropy_prefactor(geometry: str, renyi_n: float = 1.0) -> float:
    """Coefficient multiplying ``c`` in front of the chord log."""
    base = {"PBC": 6.0, "TBC": 6.0, "OBC": 12.0}[str(geometry).upper()]
    return (renyi_n + 1) / (base * renyi_n)


def _lstsq(design: np.ndarray, y: np.ndarray):
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise FitError("rank-deficient design matrix")
    resid = y - design @ coef
    return coef, float(np.sqrt(np.mean(resid**2)))


def entropy_window(cut_sizes, total_L: int, impurity_cells: Iterable[int] = (),
                   exclude_margin: int = DEFAULT_EXCLUDE_MARGIN,
                   impurity_margin: int | None = None) -> np.ndarray:
    """Boolean mask of cuts kept by the fit window.

    A cut of ``L_A`` cells has its movable edge at ``L_A``.  Cuts whose edge is
    closer than ``exclude_margin`` cells to either chain end, or closer than
    ``impurity_margin`` (default ``exclude_margin``) to an impurity cell, are
    dropped.
    """
    la = np.asarray(cut_sizes)
    m_imp = exclude_margin if impurity_margin is None else impurity_margin
    keep = (la >= exclude_margin) & (la <= total_L - exclude_margin)
    for p in impurity_cells:
        dist = np.minimum(np.abs(la - p), np.abs(la - (p + 1)))
        keep &= dist >= m_imp
    return keep


def fit_entropy(curve: EntropyCurve, geometry: str | None = None,
                exclude_margin: int = DEFAULT_EXCLUDE_MARGIN,
                impurity_margin: int | None = None, use_flagged: bool = False) -> FitResult:
    """Fit ``curve`` to the chord-log form and return ``c`` and the constant.

    Samples flagged for a non-negligible imaginary residue are left out
    unless ``use_flagged`` is set, in which case their real parts enter the
    fit.  Either way a window containing flagged samples, or a relative
    residual above ``LOG_FORM_TOL``, marks the fit ``log_form_ok=False``.
    """
    geometry = (geometry or curve.boundary).upper()
    k = entropy_prefactor(geometry, curve.renyi_n)
    keep = entropy_window(curve.cut_sizes, curve.total_L, curve.impurity_cells,
                          exclude_margin, impurity_margin)
    flagged = keep & curve.flags
    if not use_flagged:
        keep &= ~curve.flags
    n_used = int(keep.sum())
    if n_used < 4:
        raise FitError(f"need at least 4 usable samples, have {n_used} "
                       f"({int(flagged.sum())} flagged)")
    x = chord_log(curve.cut_sizes[keep], curve.total_L)
    y = curve.values[keep]
    if np.ptp(x) == 0:
        raise FitError("zero variance in the chord log")
    (slope, const), rms = _lstsq(np.column_stack([x, np.ones_like(x)]), y)
    spread = float(np.std(y))
    log_ok = bool(not flagged.any() and (spread == 0 or rms <= LOG_FORM_TOL * spread))
    m_imp = exclude_margin if impurity_margin is None else impurity_margin
    return FitResult(
        model=f"entropy-{geometry}-n{curve.renyi_n:g}",
        coefficients={"c": slope / k, "const": const, "slope": slope},
        v_fermi=float("nan"),
        residual_rms=rms,
        n_points_used=n_used,
        n_excluded=len(curve.cut_sizes) - n_used,
        window=f"ends<{exclude_margin} cells, impurity<{m_imp} cells",
        n_flagged=int(flagged.sum()),
        log_form_ok=log_ok,
        extras={"relative_rms": rms / spread if spread else 0.0, "prefactor": k},
    )


def fit_energy(points: Sequence, geometry: str, v_fermi: float = 1.0,
               min_size: int | None = None) -> FitResult:
    """Fit ``E(L) = A + eps L + B/L + C/L^2`` and convert ``B`` to ``c``.

    ``points`` holds ``(L, E)`` pairs or objects with ``n_cells`` and
    ``energy`` attributes.  ``min_size`` drops smaller systems.
    """
    pts = [(p.n_cells, p.energy) if hasattr(p, "energy") else tuple(p) for p in points]
    L = np.array([p[0] for p in pts], dtype=float)
    E = np.array([p[1] for p in pts], dtype=float)
    keep = np.ones(len(L), bool) if min_size is None else L >= min_size
    L, E = L[keep], E[keep]
    if len(L) < 5:
        raise FitError(f"need at least 5 sizes, have {len(L)}")
    if len(np.unique(L)) != len(L):
        raise FitError("sizes must be distinct")
    design = np.column_stack([np.ones_like(L), L, 1 / L, 1 / L**2])
    (A, eps, B, C), rms = _lstsq(design, E)
    factor = {"PBC": 6.0, "TBC": 6.0, "OBC": 24.0}[geometry.upper()]
    c = -factor * B / (np.pi * v_fermi)
    return FitResult(
        model=f"energy-{geometry.upper()}",
        coefficients={"A": A, "eps_density": eps, "B": B, "c": c, "C_coeff": C},
        v_fermi=v_fermi,
        residual_rms=rms,
        n_points_used=len(L),
        n_excluded=int((~keep).sum()),
        window="all sizes" if min_size is None else f"L>={min_size}",
    )
