"""
Single-particle Hamiltonians for a critical SSH chain with PT-symmetric
non-Hermitian impurities.

Sites are ordered cell-major with A before B, so site ``2*x`` is ``A_x`` and
``2*x + 1`` is ``B_x``.  Cells are indexed ``0 .. n_cells-1``; the symmetric
lattice coordinate ``x`` used for physical placement maps to the index
``x + n_cells // 2`` (see :func:`cell_index`).

The impurity block on cell ``x`` is::

    [[ i*diag*lam**2,  lam*offdiag   ],
     [ lam*offdiag,   -i*diag*lam**2 ]]

and is added to the clean on-cell block.  ``diag == offdiag == u`` is the
single-parameter impurity; ``diag = alpha, offdiag = beta`` the generalized
(fine-tuned) one.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np


class Boundary(str, enum.Enum):
    PBC = "PBC"
    OBC = "OBC"
    TBC = "TBC"


class SpecError(ValueError):
    """Raised for a ChainSpec that violates its invariants."""


@dataclass(frozen=True)
class ImpuritySpec:
    cell: int
    lam: float = 1.0
    diag: float = 3.0
    offdiag: float = 3.0

    def block(self) -> np.ndarray:
        d = 1j * self.diag * self.lam**2
        o = self.lam * self.offdiag
        return np.array([[d, o], [o, -d]], dtype=complex)

    def to_dict(self) -> dict:
        # "lambda" is the documented field name; ``lam`` avoids the keyword
        return {"cell": self.cell, "lambda": self.lam, "diag": self.diag,
                "offdiag": self.offdiag}

    @classmethod
    def from_dict(cls, d: dict) -> "ImpuritySpec":
        lam = d.get("lambda", d.get("lam", 1.0))
        return cls(cell=int(d["cell"]), lam=float(lam),
                   diag=float(d["diag"]), offdiag=float(d["offdiag"]))


@dataclass(frozen=True)
class ChainSpec:
    """Full description of a finite chain.

    Parameters
    ----------
    n_cells : int
        Number of unit cells (two sites each).
    v1, w1 : float
        Intra-cell (A_x-B_x) and inter-cell (B_x-A_{x+1}) hoppings.
    impurities : tuple of ImpuritySpec
        Impurity cells use the internal index ``0 .. n_cells-1``.
    boundary : Boundary
    phi : float
        Twist phase on the closing bond, TBC only.
    """

    n_cells: int
    v1: float = 1.0
    w1: float = -1.0
    impurities: tuple[ImpuritySpec, ...] = field(default_factory=tuple)
    boundary: Boundary = Boundary.PBC
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "impurities", tuple(self.impurities))
        self.validate()

    def validate(self) -> None:
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise SpecError(f"n_cells must be an integer >= 2, got {self.n_cells}")
        if self.boundary is Boundary.OBC and self.phi != 0.0:
            raise SpecError("phi must be 0 for OBC")
        if self.boundary is Boundary.PBC and self.phi != 0.0:
            raise SpecError("phi must be 0 for PBC; use TBC for a twisted ring")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise SpecError(f"phi must lie in [0, 2*pi), got {self.phi}")
        cells = [imp.cell for imp in self.impurities]
        if len(set(cells)) != len(cells):
            raise SpecError(f"impurity cells must be distinct, got {cells}")
        for c in cells:
            if not 0 <= c < self.n_cells:
                raise SpecError(f"impurity cell {c} out of range [0, {self.n_cells})")

    @property
    def dim(self) -> int:
        return 2 * self.n_cells

    def with_lambda(self, lam: float) -> "ChainSpec":
        """Same chain with every impurity set to interpolation parameter ``lam``."""
        return replace(self, impurities=tuple(replace(i, lam=lam) for i in self.impurities))

    def detuned(self, eta: float) -> "ChainSpec":
        """Scale every impurity ``lam`` by ``1 - eta``."""
        return replace(self, impurities=tuple(
            replace(i, lam=i.lam * (1.0 - eta)) for i in self.impurities))

    def resized(self, n_cells: int) -> "ChainSpec":
        """Change the cell count, keeping impurities at the same lattice coordinate."""
        imps = tuple(
            replace(i, cell=cell_index(lattice_coordinate(i.cell, self.n_cells), n_cells))
            for i in self.impurities)
        return replace(self, n_cells=n_cells, impurities=imps)

    def to_dict(self) -> dict:
        return {
            "n_cells": self.n_cells,
            "v1": self.v1,
            "w1": self.w1,
            "impurities": [i.to_dict() for i in self.impurities],
            "boundary": self.boundary.value,
            "phi": self.phi,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChainSpec":
        return cls(
            n_cells=int(d["n_cells"]),
            v1=float(d.get("v1", 1.0)),
            w1=float(d.get("w1", -1.0)),
            impurities=tuple(ImpuritySpec.from_dict(i) for i in d.get("impurities", [])),
            boundary=Boundary(d.get("boundary", "PBC")),
            phi=float(d.get("phi", 0.0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        return cls.from_dict(json.loads(text))

    def spec_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


def cell_index(x: int, n_cells: int) -> int:
    """Internal cell index of lattice coordinate ``x`` (``x = 0`` is the middle)."""
    return x + n_cells // 2


def lattice_coordinate(cell: int, n_cells: int) -> int:
    return cell - n_cells // 2


def impurity_chain(n_cells: int, u: float = 3.0, lam: float = 1.0,
                   boundary: Boundary | str = Boundary.PBC, phi: float = 0.0,
                   v1: float = 1.0, w1: float = -1.0,
                   x: Sequence[int] = (0,)) -> ChainSpec:
    """Chain with ``diag = offdiag = u`` impurities at lattice coordinates ``x``."""
    imps = tuple(ImpuritySpec(cell_index(xi, n_cells), lam, u, u) for xi in x)
    return ChainSpec(n_cells, v1, w1, imps, Boundary(boundary), phi)


def fine_tuned_chain(n_cells: int, alpha: float = 7 / 5, beta: float = 2 / 5,
                     lam: float = 1.0, boundary: Boundary | str = Boundary.OBC,
                     v1: float = 1.0, w1: float = -1.0) -> ChainSpec:
    """Chain with one generalized ``(alpha, beta)`` impurity at the middle cell."""
    imp = ImpuritySpec(cell_index(0, n_cells), lam, alpha, beta)
    return ChainSpec(n_cells, v1, w1, (imp,), Boundary(boundary), 0.0)


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    spec.validate()
    n = spec.n_cells
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    a = np.arange(n) * 2
    b = a + 1
    h[b, a] += spec.v1
    h[a, b] += spec.v1
    # inter-cell B_x -> A_{x+1}
    h[a[1:], b[:-1]] += spec.w1
    h[b[:-1], a[1:]] += spec.w1
    if spec.boundary is not Boundary.OBC:
        twist = np.exp(1j * spec.phi) if spec.boundary is Boundary.TBC else 1.0
        # closing hop B_{n-1} -> A_0 carries the twist, its reverse the conjugate
        h[0, 2 * n - 1] += spec.w1 * twist
        h[2 * n - 1, 0] += spec.w1 * np.conj(twist)
    for imp in spec.impurities:
        s = slice(2 * imp.cell, 2 * imp.cell + 2)
        h[s, s] += imp.block()
    return h


def parity_permutation(n_cells: int, axis: int, periodic: bool = True) -> np.ndarray:
    """Permutation ``A_x <-> B_{axis - x}``; indices wrap when ``periodic``."""
    p = np.zeros((2 * n_cells, 2 * n_cells))
    for x in range(n_cells):
        y = axis - x
        if periodic:
            y %= n_cells
        elif not 0 <= y < n_cells:
            raise SpecError(f"reflection axis {axis} does not map an open chain "
                            f"of {n_cells} cells onto itself")
        p[2 * y + 1, 2 * x] = 1.0
        p[2 * y, 2 * x + 1] = 1.0
    return p


def pt_operator(spec: ChainSpec, axis: int | None = None) -> np.ndarray:
    """Parity part of the PT operation, ``A_x <-> B_{axis - x}``.

    PT acts as ``P @ conj(H) @ P``.  The default axis reflects the outermost
    impurities onto each other (the impurity cell itself for a single one),
    or inverts the whole chain when there are none.  On one cell this is
    the plain A/B swap.
    """
    n = spec.n_cells
    if axis is None:
        cells = [i.cell for i in spec.impurities]
        axis = min(cells) + max(cells) if cells else n - 1
    return parity_permutation(n, axis, periodic=spec.boundary is not Boundary.OBC)


def bloch_energies(v1: float, w1: float, n_cells: int) -> np.ndarray:
    """Clean-chain PBC spectrum ``+-|v1 + w1 e^{ik}|`` on the momentum grid, sorted."""
    k = 2 * np.pi * np.arange(n_cells) / n_cells
    eps = np.abs(v1 + w1 * np.exp(1j * k))
    return np.sort(np.concatenate([-eps, eps]))


def iter_specs(template: ChainSpec, sizes: Iterable[int]) -> list[ChainSpec]:
    return [template.resized(int(n)) for n in sizes]
