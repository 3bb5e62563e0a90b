"""
Task runners shared by the command line and the figure presets.  Each
returns one or more :class:`Artifact` tables ready to be written.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import eigensys, entanglement
from .analytic import check_ep
from .eigensys import classify_pt, energy_vs_size, solve
from .entanglement import entropy_profile
from .fidelity import fidelity_susceptibility
from .io import metadata, render_csv, render_json
from .model import Boundary, ChainSpec
from .scaling import DEFAULT_EXCLUDE_MARGIN, FitError, fit_energy, fit_entropy

DEFAULT_SIZES = tuple(range(32, 257, 16))
DEFAULT_PHIS = tuple(k * np.pi / 4 for k in range(8))


def tolerances() -> dict:
    return {
        "realness_tol_rel": 1e-8,
        "imag_flag_tol": entanglement.IMAG_FLAG_TOL,
        "ep_detune": eigensys.EP_DETUNE,
        "ep_rigidity_tol": eigensys.EP_RIGIDITY_TOL,
    }


@dataclass
class Artifact:
    name: str
    columns: list[str]
    rows: list[tuple]
    spec: ChainSpec | None
    params: dict = field(default_factory=dict)
    fit: dict | None = None
    summary: str = ""
    extra: dict = field(default_factory=dict)

    def meta(self) -> dict:
        m = metadata(task=self.name, params=self.params, tolerances=tolerances(), **self.extra)
        if self.spec is not None:
            m["spec_hash"] = self.spec.spec_hash()
            m["spec"] = self.spec.to_dict()
        if self.fit is not None:
            m["fit"] = self.fit
        return m

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return render_csv(self.columns, self.rows, self.meta())
        if fmt == "json":
            data = {c: [r[i] for r in self.rows] for i, c in enumerate(self.columns)}
            return render_json({"data": data}, self.meta())
        raise ValueError(f"unknown format {fmt!r}")


def run_spectrum(spec: ChainSpec) -> Artifact:
    s = solve(spec)
    rows = [(n, float(e.real), float(e.imag), float(r))
            for n, (e, r) in enumerate(zip(s.energies, s.phase_rigidity))]
    return Artifact("spectrum", ["n", "re_E", "im_E", "phase_rigidity"], rows, spec,
                    extra={"overlap_cond": s.overlap_cond, "pt_phase": classify_pt(s).value,
                           "ep_detuning": s.ep_detuning},
                    summary=f"spectrum: {s.dim} levels, PT {classify_pt(s).value}, "
                            f"min phase rigidity {s.min_phase_rigidity:.3g}")


def run_entropy(spec: ChainSpec, renyi_n: float = 1.0, cut_origin: int = 0,
                exclude_margin: int = DEFAULT_EXCLUDE_MARGIN,
                impurity_margin: int | None = None, branch: str = "modulus",
                name: str | None = None) -> Artifact:
    curve = entropy_profile(spec, renyi_n=renyi_n, cut_origin=cut_origin, branch=branch)
    params = {"renyi_n": renyi_n, "cut_origin": cut_origin, "exclude_margin": exclude_margin,
              "impurity_margin": impurity_margin, "branch": branch}
    try:
        fit = fit_entropy(curve, exclude_margin=exclude_margin, impurity_margin=impurity_margin,
                          use_flagged=curve.flags.all())
        fit_d, summary = fit.to_dict(), fit.summary() + f" log_form_ok={fit.log_form_ok}"
    except FitError as exc:
        fit_d, summary = {"error": str(exc)}, f"entropy fit failed: {exc}"
    rows = [(int(a), float(s), float(abs(im)), bool(f))
            for a, s, im, f in zip(curve.cut_sizes, curve.values, curve.imag, curve.flags)]
    return Artifact(name or ("entropy" if renyi_n == 1 else "renyi"),
                    ["L_A", "S", "max_im", "flag"], rows, spec, params, fit_d, summary,
                    extra={"renyi_n": renyi_n, "max_im": curve.max_im,
                           "ep_detuning": curve.ep_detuning,
                           "min_phase_rigidity": curve.min_phase_rigidity})


def run_energy_scaling(spec: ChainSpec, sizes, v_fermi: float = 1.0,
                       min_size: int | None = None, threads: int = 1) -> Artifact:
    pts = energy_vs_size(spec, sizes, threads=threads)
    fit = fit_energy(pts, spec.boundary.value, v_fermi=v_fermi, min_size=min_size)
    rows = [(p.n_cells, p.energy, p.overlap_cond, p.min_phase_rigidity) for p in pts]
    return Artifact("energy-scaling", ["L", "E", "overlap_cond", "min_phase_rigidity"], rows,
                    spec, {"sizes": [int(n) for n in sizes], "v_fermi": v_fermi,
                           "min_size": min_size}, fit.to_dict(), fit.summary())


def run_fidelity(spec: ChainSpec, steps: int = 1000, eps: float | None = None,
                 threads: int = 1) -> Artifact:
    eps = 1.0 / steps if eps is None else eps
    curve = fidelity_susceptibility(spec, eps=eps, steps=steps, threads=threads)
    mid = int(np.argmin(np.abs(curve.lambdas - 0.5)))
    ratio = abs(curve.chi[-1]) / abs(curve.chi[mid]) if curve.chi[mid] else float("inf")
    summary = (f"fidelity: chi(0.5)={curve.chi[mid]:.6g} chi({curve.lambdas[-1]:.6g})="
               f"{curve.chi[-1]:.6g} ratio={ratio:.3g}")
    return Artifact("fidelity", ["lambda", "chi", "re_F", "im_F"], list(curve.rows()), spec,
                    {"steps": steps, "eps": eps}, summary=summary,
                    extra={"max_im_F": curve.max_im_f, "tail_ratio": ratio, **curve.meta})


def run_ep_check(spec: ChainSpec, tol: float | None = None) -> Artifact:
    rep = check_ep(spec, tol)
    return Artifact("ep-check", ["residual_norm", "exists", "tol"],
                    [(rep.residual_norm, rep.exists, rep.tol)], spec, {"tol": tol},
                    summary=f"ep-check: residual={rep.residual_norm:.3g} "
                            f"exists={rep.exists}")


def _tbc_point(spec, phi, exclude_margin, impurity_margin):
    s = replace(spec, boundary=Boundary.TBC, phi=float(phi))
    curve = entropy_profile(s)
    fit = fit_entropy(curve, exclude_margin=exclude_margin, impurity_margin=impurity_margin)
    return (float(phi), fit.c, fit.residual_rms, fit.n_points_used, curve.max_im)


def run_tbc_sweep(spec: ChainSpec, phis=DEFAULT_PHIS,
                  exclude_margin: int = DEFAULT_EXCLUDE_MARGIN,
                  impurity_margin: int | None = None, threads: int = 1) -> Artifact:
    if spec.boundary is Boundary.OBC:
        raise ValueError("tbc-sweep needs a ring (PBC or TBC) template")
    job = lambda p: _tbc_point(spec, p, exclude_margin, impurity_margin)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(job, phis))
    else:
        rows = [job(p) for p in phis]
    summary = "tbc-sweep: " + " ".join(f"c({r[0]:.4g})={r[1]:.4g}" for r in rows)
    return Artifact("tbc-sweep", ["phi", "c", "residual_rms", "n_points", "max_im"], rows,
                    spec, {"phis": [float(p) for p in phis], "exclude_margin": exclude_margin,
                           "impurity_margin": impurity_margin}, summary=summary)
