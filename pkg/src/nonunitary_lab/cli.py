"""
Command-line driver.

    nonunitary-lab entropy --n-cells 128 --out s.csv
    nonunitary-lab energy-scaling --boundary OBC --sizes 33:257:16
    nonunitary-lab reproduce fig2a --out results/

A JSON config file (``--config``) may hold either a bare chain spec or
``{"spec": {...}, <task parameters>}``; command-line flags override it.
Failures print a JSON error object on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .io import write_text
from .model import Boundary, ChainSpec, ImpuritySpec, cell_index
from .presets import FIGURES, reproduce_figure
from .runs import (DEFAULT_PHIS, run_energy_scaling, run_entropy, run_ep_check,
                   run_fidelity, run_spectrum, run_tbc_sweep)
from .scaling import DEFAULT_EXCLUDE_MARGIN

TASKS = ("spectrum", "entropy", "renyi", "energy-scaling", "fidelity", "ep-check", "tbc-sweep")
EXIT_CONFIG = 2
EXIT_NUMERIC = 1

_TASK_HELP = {
    "spectrum": "single-particle levels and phase rigidities",
    "entropy": "von Neumann entropy profile and c fit",
    "renyi": "Renyi entropy profile and c fit",
    "energy-scaling": "ground-state energy sweep and c fit",
    "fidelity": "fidelity susceptibility along lambda",
    "ep-check": "residual of the uniform (1, -i) zero mode",
    "tbc-sweep": "entropy c fit for each twist phase",
}

_SPEC_FLAGS = ("n_cells", "v1", "w1", "boundary", "phi")
_IMP_FLAGS = ("impurity_x", "u", "diag", "offdiag", "lam", "no_impurity")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors become config errors so they are reported as JSON too
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    spec: ChainSpec
    task: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"
    threads: int = 1

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        p = self.params
        if self.task == "renyi":
            n = p.get("renyi_n")
            if n is None or n <= 0 or n == 1:
                raise ConfigError("renyi needs renyi_n > 0 and != 1")
        if self.task == "energy-scaling":
            sizes = p.get("sizes")
            if not sizes:
                raise ConfigError("energy-scaling needs sizes")
            if len(set(sizes)) < 5 or min(sizes) < 2:
                raise ConfigError("energy-scaling needs at least 5 distinct sizes >= 2")
        if self.task == "fidelity":
            if p.get("steps", 1000) < 1:
                raise ConfigError("steps must be >= 1")
            if p.get("eps") is not None and not 0 < p["eps"] < 1:
                raise ConfigError("eps must lie in (0, 1)")
            if not self.spec.impurities:
                raise ConfigError("fidelity needs at least one impurity")
        if self.task == "tbc-sweep":
            if self.spec.boundary is Boundary.OBC:
                raise ConfigError("tbc-sweep needs a PBC or TBC spec")
            if any(not 0 <= x < 2 * math.pi for x in p.get("phis", DEFAULT_PHIS)):
                raise ConfigError("phis must lie in [0, 2*pi)")
        if self.task in ("entropy", "renyi", "tbc-sweep"):
            if p.get("exclude_margin", DEFAULT_EXCLUDE_MARGIN) < 0:
                raise ConfigError("exclude_margin must be >= 0")


def parse_sizes(text: str) -> list[int]:
    """``"32:256:16"`` (inclusive) or ``"32,48,64"``."""
    if ":" in text:
        parts = [int(t) for t in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ConfigError(f"bad size range {text!r}; use start:stop:step")
        return list(range(parts[0], parts[1] + 1, parts[2]))
    return [int(t) for t in text.split(",") if t.strip()]


def parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--threads", type=int, help="worker threads (env NONUNITARY_LAB_THREADS)")
    g.add_argument("-v", "--verbose", action="store_true")


def _add_spec(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("chain")
    g.add_argument("--n-cells", type=int)
    g.add_argument("--v1", type=float)
    g.add_argument("--w1", type=float)
    g.add_argument("--boundary", choices=[b.value for b in Boundary])
    g.add_argument("--phi", type=float, help="twist phase (TBC)")
    g.add_argument("--impurity-x", type=int, action="append",
                   help="impurity lattice coordinate, 0 = middle cell (repeatable)")
    g.add_argument("--u", type=float, help="sets diag = offdiag = u")
    g.add_argument("--diag", type=float)
    g.add_argument("--offdiag", type=float)
    g.add_argument("--lam", type=float)
    g.add_argument("--no-impurity", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nonunitary-lab", description=__doc__.split("\n")[1])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        p = sub.add_parser(task, help=_TASK_HELP[task])
        _add_spec(p)
        _add_common(p)
        if task in ("entropy", "renyi", "tbc-sweep"):
            p.add_argument("--exclude-margin", type=int)
            p.add_argument("--impurity-margin", type=int)
        if task in ("entropy", "renyi"):
            p.add_argument("--cut-origin", type=int)
            p.add_argument("--branch", choices=("modulus", "principal"))
        if task == "renyi":
            p.add_argument("--renyi-n", type=float)
        if task == "energy-scaling":
            p.add_argument("--sizes", type=parse_sizes, help="start:stop:step or a,b,c")
            p.add_argument("--v-fermi", type=float)
            p.add_argument("--min-size", type=int)
        if task == "fidelity":
            p.add_argument("--steps", type=int)
            p.add_argument("--eps", type=float)
        if task == "ep-check":
            p.add_argument("--tol", type=float)
        if task == "tbc-sweep":
            p.add_argument("--phis", type=parse_floats, help="comma-separated phases")
    p = sub.add_parser("reproduce", help="run a figure preset")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _threads(arg) -> int:
    if arg is not None:
        return int(arg)
    env = os.environ.get("NONUNITARY_LAB_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"NONUNITARY_LAB_THREADS must be an integer, got {env!r}")
    return 1


def _load_config(path: str | None) -> tuple[dict, dict]:
    if path is None:
        return {}, {}
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if "spec" in doc:
        return dict(doc["spec"]), {k: v for k, v in doc.items() if k != "spec"}
    return doc, {}


def _spec_from(args, spec_doc: dict) -> ChainSpec:
    base = dict(spec_doc)
    for key in _SPEC_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    n = int(base.get("n_cells", 128))
    if "impurities" in base and not any(getattr(args, k, None) for k in _IMP_FLAGS):
        base["n_cells"] = n
        return ChainSpec.from_dict(base)
    if args.no_impurity:
        imps = ()
    else:
        diag = args.diag if args.diag is not None else (args.u if args.u is not None else 3.0)
        off = args.offdiag if args.offdiag is not None else (args.u if args.u is not None else 3.0)
        lam = 1.0 if args.lam is None else args.lam
        xs = args.impurity_x or [0]
        imps = tuple(ImpuritySpec(cell_index(x, n), lam, diag, off) for x in xs)
    return ChainSpec(n, float(base.get("v1", 1.0)), float(base.get("w1", -1.0)), imps,
                     Boundary(base.get("boundary", "PBC")), float(base.get("phi", 0.0)))


_PARAM_FLAGS = ("renyi_n", "sizes", "v_fermi", "min_size", "steps", "eps", "tol", "phis",
                "exclude_margin", "impurity_margin", "cut_origin", "branch")


def config_from_args(args) -> RunConfig:
    spec_doc, params = _load_config(args.config)
    for key in _PARAM_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    out = args.out if args.out is not None else params.pop("out", None)
    fmt = args.format or params.pop("format", "csv")
    threads = _threads(args.threads if args.threads is not None else params.pop("threads", None))
    params.pop("out", None), params.pop("format", None), params.pop("threads", None)
    params.pop("task", None)
    cfg = RunConfig(_spec_from(args, spec_doc), args.task, params, out, fmt, threads)
    cfg.validate()
    return cfg


def run(cfg: RunConfig):
    p, s = cfg.params, cfg.spec
    margins = {k: p[k] for k in ("exclude_margin", "impurity_margin") if k in p}
    if cfg.task == "spectrum":
        return run_spectrum(s)
    if cfg.task in ("entropy", "renyi"):
        n = p["renyi_n"] if cfg.task == "renyi" else 1.0
        return run_entropy(s, renyi_n=n, cut_origin=p.get("cut_origin", 0),
                           branch=p.get("branch", "modulus"), **margins)
    if cfg.task == "energy-scaling":
        return run_energy_scaling(s, p["sizes"], v_fermi=p.get("v_fermi", 1.0),
                                  min_size=p.get("min_size"), threads=cfg.threads)
    if cfg.task == "fidelity":
        return run_fidelity(s, steps=p.get("steps", 1000), eps=p.get("eps"),
                            threads=cfg.threads)
    if cfg.task == "ep-check":
        return run_ep_check(s, p.get("tol"))
    return run_tbc_sweep(s, p.get("phis", DEFAULT_PHIS), threads=cfg.threads, **margins)


def _fail(kind: str, exc: BaseException, code: int) -> int:
    err = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        return _fail("usage", exc, EXIT_CONFIG)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.task == "reproduce":
            threads = _threads(args.threads)
            if threads < 1:
                raise ConfigError("threads must be >= 1")
        else:
            cfg = config_from_args(args)
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        return _fail("config", exc, EXIT_CONFIG)
    try:
        if args.task == "reproduce":
            outdir = Path(args.out or ".")
            for art in reproduce_figure(args.figure_id, threads=threads):
                write_text(art.render(args.format), outdir / f"{art.name}.{args.format}")
                print(art.summary)
            return 0
        art = run(cfg)
        write_text(art.render(cfg.format), cfg.out)
        print(art.summary, file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
        return 0
    except Exception as exc:  # numerical failures carry context in the message
        return _fail("numeric", exc, EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
