"""
Figure presets.  Couplings are ``v1 = -w1 = 1`` (so ``v_F = 1``) throughout.

Open chains use an odd cell count with the impurity on the middle cell, the
only placement that keeps an open chain inversion symmetric and its
spectrum real.  Entropy fits on open chains skip a quarter of the chain
around the impurity, where short-range impurity effects dominate.
"""

from __future__ import annotations

from .model import Boundary, fine_tuned_chain, impurity_chain
from .runs import (DEFAULT_SIZES, Artifact, run_energy_scaling, run_entropy,
                   run_fidelity)

PBC_L = 128
PBC_FIDELITY_L = 64
OBC_L = 129
OBC_FIDELITY_L = 65
OBC_SIZES = tuple(n + 1 for n in DEFAULT_SIZES)
OBC_IMPURITY_MARGIN = OBC_L // 4


def fig2a(threads: int = 1) -> list[Artifact]:
    return [run_entropy(impurity_chain(PBC_L), name="fig2a-entropy")]


def fig2b(threads: int = 1) -> list[Artifact]:
    a = run_energy_scaling(impurity_chain(DEFAULT_SIZES[0]), DEFAULT_SIZES, threads=threads)
    a.name = "fig2b-energy"
    return [a]


def fig2c(threads: int = 1) -> list[Artifact]:
    a = run_fidelity(impurity_chain(PBC_FIDELITY_L), steps=1000, threads=threads)
    a.name = "fig2c-fidelity"
    return [a]


def _obc_set(spec_of, tag: str, fidelity_steps: int, threads: int) -> list[Artifact]:
    ent = run_entropy(spec_of(OBC_L), impurity_margin=OBC_IMPURITY_MARGIN,
                      name=f"{tag}-entropy")
    en = run_energy_scaling(spec_of(OBC_SIZES[0]), OBC_SIZES, threads=threads)
    en.name = f"{tag}-energy"
    fid = run_fidelity(spec_of(OBC_FIDELITY_L), steps=fidelity_steps, threads=threads)
    fid.name = f"{tag}-fidelity"
    return [ent, en, fid]


def figS2(threads: int = 1) -> list[Artifact]:
    return _obc_set(lambda n: impurity_chain(n, boundary=Boundary.OBC), "figS2", 4000, threads)


def figS3(threads: int = 1) -> list[Artifact]:
    return _obc_set(fine_tuned_chain, "figS3", 1000, threads)


def figS4(threads: int = 1) -> list[Artifact]:
    out = [run_entropy(impurity_chain(PBC_L), renyi_n=n, name=f"figS4-pbc-renyi{n}")
           for n in (2, 3)]
    out.append(run_entropy(fine_tuned_chain(OBC_L), renyi_n=2,
                           impurity_margin=OBC_IMPURITY_MARGIN, name="figS4-obc-renyi2"))
    return out


FIGURES = {"fig2a": fig2a, "fig2b": fig2b, "fig2c": fig2c,
           "figS2": figS2, "figS3": figS3, "figS4": figS4}


def reproduce_figure(figure_id: str, threads: int = 1) -> list[Artifact]:
    try:
        preset = FIGURES[figure_id]
    except KeyError:
        raise ValueError(f"unknown figure {figure_id!r}; choose from {sorted(FIGURES)}") from None
    return preset(threads=threads)
