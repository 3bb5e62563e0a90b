import json

import numpy as np
import pytest

from nonunitary_lab.entanglement import EntropyCurve
from nonunitary_lab.scaling import (FitError, chord_log, entropy_prefactor, entropy_window,
                                    fit_energy, fit_entropy)


def synthetic_curve(c, b, L=128, renyi_n=1.0, boundary="PBC", imps=(), imag=None):
    la = np.arange(1, L)
    k = entropy_prefactor(boundary, renyi_n)
    s = k * c * chord_log(la, L) + b
    im = np.zeros(len(la)) if imag is None else imag
    return EntropyCurve(la, s, im, renyi_n, L, boundary, imps)


def synthetic_energy(A, eps, c, C, geometry="PBC", sizes=range(32, 257, 16), v_f=1.0):
    factor = {"PBC": 6.0, "OBC": 24.0}[geometry]
    return [(L, A + eps * L - np.pi * v_f * c / (factor * L) + C / L**2) for L in sizes]


def test_entropy_fit_recovers_model():
    fit = fit_entropy(synthetic_curve(-2.0, 0.7))
    assert fit.c == pytest.approx(-2.0, abs=1e-10)
    assert fit.coefficients["const"] == pytest.approx(0.7, abs=1e-10)
    assert fit.residual_rms < 1e-12
    assert fit.log_form_ok


@pytest.mark.parametrize("geometry,n", [("OBC", 1), ("PBC", 2), ("OBC", 2), ("TBC", 3)])
def test_prefactors(geometry, n):
    fit = fit_entropy(synthetic_curve(1.3, -0.2, L=64, renyi_n=n, boundary=geometry))
    assert fit.c == pytest.approx(1.3, abs=1e-10)


def test_prefactor_values():
    assert entropy_prefactor("PBC") == pytest.approx(1 / 3)
    assert entropy_prefactor("OBC") == pytest.approx(1 / 6)
    assert entropy_prefactor("PBC", 2) == pytest.approx(1 / 4)


def test_constant_shift_changes_only_const():
    a = fit_entropy(synthetic_curve(-2.0, 0.7))
    b = fit_entropy(synthetic_curve(-2.0, 5.7))
    assert a.c == pytest.approx(b.c, abs=1e-10)
    assert b.coefficients["const"] - a.coefficients["const"] == pytest.approx(5.0)


def test_window_drops_ends_and_impurity():
    keep = entropy_window(np.arange(1, 32), 32, impurity_cells=(16,), exclude_margin=4)
    kept = set(np.arange(1, 32)[keep])
    assert kept == set(range(4, 13)) | set(range(21, 29))


def test_flagged_samples_excluded_and_counted():
    imag = np.zeros(127)
    imag[[10, 20, 30]] = 1e-3
    fit = fit_entropy(synthetic_curve(-2.0, 0.7, imag=imag))
    assert fit.n_flagged == 3
    assert fit.n_points_used == 121 - 3
    assert not fit.log_form_ok
    assert fit.c == pytest.approx(-2.0, abs=1e-10)


def test_all_flagged_needs_opt_in():
    curve = synthetic_curve(-2.0, 0.7, L=32, imag=np.full(31, 1e-2))
    with pytest.raises(FitError):
        fit_entropy(curve)
    fit = fit_entropy(curve, use_flagged=True)
    assert not fit.log_form_ok and fit.n_flagged == fit.n_points_used


def test_non_logarithmic_data_rejected():
    la = np.arange(1, 64)
    curve = EntropyCurve(la, 0.01 * (la - 32.0) ** 2, np.zeros(63), 1.0, 64, "PBC")
    assert not fit_entropy(curve).log_form_ok


def test_entropy_fit_needs_points():
    curve = synthetic_curve(-2.0, 0.7, L=8)
    with pytest.raises(FitError):
        fit_entropy(curve, exclude_margin=3)


def test_energy_fit_recovers_model():
    fit = fit_energy(synthetic_energy(-1.328, 1.247239, -2.0, 0.4117), "PBC")
    co = fit.coefficients
    assert co["A"] == pytest.approx(-1.328, abs=1e-8)
    assert co["eps_density"] == pytest.approx(1.247239, abs=1e-8)
    assert co["c"] == pytest.approx(-2.0, abs=1e-8)
    assert co["C_coeff"] == pytest.approx(0.4117, abs=1e-8)
    assert fit.residual_rms < 1e-10


def test_energy_fit_obc_factor():
    fit = fit_energy(synthetic_energy(0.7268, -1.27324, -3.36, -1.111, "OBC"), "OBC")
    assert fit.c == pytest.approx(-3.36, abs=1e-8)


def test_energy_fit_is_linear():
    pts = synthetic_energy(-1.0, 1.2, 1.0, 0.3)
    a = fit_energy(pts, "PBC")
    b = fit_energy([(L, 3.5 * e) for L, e in pts], "PBC")
    for key in ("A", "eps_density", "B", "C_coeff"):
        assert b.coefficients[key] == pytest.approx(3.5 * a.coefficients[key], rel=1e-9)


def test_energy_fit_errors():
    with pytest.raises(FitError):
        fit_energy([(32, 1.0), (48, 2.0)], "PBC")
    with pytest.raises(FitError):
        fit_energy([(32, 1.0)] * 6, "PBC")


def test_energy_window():
    pts = synthetic_energy(-1.0, 1.2, 1.0, 0.3)
    fit = fit_energy(pts, "PBC", min_size=64)
    assert fit.n_excluded == 2 and fit.window == "L>=64"


def test_fit_result_json():
    fit = fit_entropy(synthetic_curve(-2.0, 0.7))
    doc = json.loads(fit.to_json())
    assert doc["coefficients"]["c"] == pytest.approx(-2.0)
    assert "c=-2" in fit.summary()
