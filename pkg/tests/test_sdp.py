"""
Tests for the standard-form problem, the embedded interior-point solver and
the LMI modelling layer.
"""

import importlib
import logging

import numpy as np
import pytest

import zerocap.utils.config as config_module
from zerocap.utils.config import settings
from zerocap.utils.constants import INFEASIBLE, OPTIMAL, UNBOUNDED
from zerocap.utils.errors import DimensionError, NotHermitianError, SolverError
from zerocap.services.matcore import random_hermitian
from zerocap.services.sdp import solver as solver_module
from zerocap.services.sdp import (
    DIAGONAL,
    HERMITIAN,
    LmiProgram,
    SdpBlock,
    SdpEquality,
    SdpProblem,
    SolveOptions,
    dump_problem,
    get_backend,
    inner,
    measure_residuals,
    partial_trace,
    solve,
)


def _min_eig_problem(C: np.ndarray) -> SdpProblem:
    """min ⟨C, X⟩ s.t. tr X = 1, X ⪰ 0, whose value is λ_min(C)."""
    d = C.shape[0]
    blk = SdpBlock("X", d)
    return SdpProblem.build([blk], {"X": C}, [SdpEquality({"X": np.eye(d)}, 1.0)], name="min_eig")


def test_min_eigenvalue_of_complex_hermitian(rng):
    C = random_hermitian(4, rng)
    sol = solve(_min_eig_problem(C))
    assert sol.status == OPTIMAL
    lam = np.linalg.eigvalsh(C)[0]
    assert sol.primal_value == pytest.approx(lam, abs=1e-6)
    assert sol.dual_value == pytest.approx(lam, abs=1e-6)
    X = sol.X["X"]
    assert np.trace(X).real == pytest.approx(1.0, abs=1e-7)
    assert np.linalg.eigvalsh(X)[0] >= -1e-7


def test_diagonal_block_is_a_linear_program():
    # min x0 + 2 x1 s.t. x0 + x1 = 1, x ≥ 0
    blk = SdpBlock("x", 2, DIAGONAL)
    prob = SdpProblem.build([blk], {"x": np.array([1.0, 2.0])}, [SdpEquality({"x": np.ones(2)}, 1.0)])
    sol = solve(prob)
    assert sol.status == OPTIMAL
    assert sol.primal_value == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(sol.X["x"], [1.0, 0.0], atol=1e-5)
    assert sol.integer_tag == 1


def test_primal_infeasibility_is_detected():
    # tr X = −1 with X ⪰ 0
    blk = SdpBlock("X", 2)
    prob = SdpProblem.build([blk], {"X": np.eye(2)}, [SdpEquality({"X": np.eye(2)}, -1.0)])
    assert solve(prob).status == INFEASIBLE


def test_build_rejects_duplicate_labels_and_bad_shapes():
    with pytest.raises(DimensionError):
        SdpProblem.build([SdpBlock("X", 2), SdpBlock("X", 2)], {}, [])
    with pytest.raises(DimensionError):
        SdpProblem.build([SdpBlock("X", 2)], {"X": np.eye(3)}, [])
    with pytest.raises(DimensionError):
        SdpProblem.build([SdpBlock("X", 2, "banded")], {}, [])


def test_build_rejects_non_hermitian_coefficients():
    with pytest.raises(NotHermitianError):
        SdpProblem.build([SdpBlock("X", 2, HERMITIAN)], {"X": np.array([[0, 1], [0, 0]])}, [])


def test_dump_problem_writes_sparse_text(tmp_path):
    path = dump_problem(_min_eig_problem(np.diag([1.0, 2.0])), tmp_path / "p.sdp.txt")
    text = path.read_text()
    assert "# block 1 X hermitian 2" in text
    assert "# rhs 1" in text


def test_unknown_backend():
    with pytest.raises(SolverError):
        get_backend("mosek-by-hand")


# ── LMI layer ───────────────────────────────────────────────────────────
def test_lmi_largest_eigenvalue_by_both_sides(rng):
    C = random_hermitian(3, rng)
    prog = LmiProgram("max_eig")
    t = prog.real("t")
    prog.add_psd("t-C", t * np.eye(3) - C)
    prog.minimize(t)
    res = prog.solve()
    assert res.status == OPTIMAL
    assert res.value == pytest.approx(np.linalg.eigvalsh(C)[-1], abs=1e-6)
    assert res.gap <= 1e-6


def test_lmi_partial_trace_constraint():
    # max ⟨Φ, X⟩ over states X on 2⊗2 with tr_B X = 1/2; Φ is unnormalized, so the value is 2
    phi = np.zeros(4)
    phi[[0, 3]] = 1.0
    Phi = np.outer(phi, phi)
    prog = LmiProgram("steering")
    X = prog.hermitian("X", 4)
    prog.add_psd("X", X)
    prog.add_equal("trB", partial_trace(X, [2, 2], [0]), np.eye(2) / 2)
    prog.maximize(inner(Phi, X).real)
    res = prog.solve()
    assert res.value == pytest.approx(2.0, abs=1e-6)
    np.testing.assert_allclose(res["X"].entries, Phi / 2, atol=1e-4)


def test_lmi_inconsistent_equalities_are_infeasible_without_solving():
    prog = LmiProgram("clash")
    x = prog.real("x")
    prog.add_equal("one", x, 1.0)
    prog.add_equal("two", x, 2.0)
    prog.minimize(x)
    res = prog.solve()
    assert res.status == INFEASIBLE
    assert res.solution is None


def test_lmi_unbounded_direction():
    prog = LmiProgram("free")
    x = prog.real("x", 2)
    prog.add_nonneg("x0", x[0])
    prog.minimize(x[1])
    assert prog.solve().status == UNBOUNDED


def test_solve_options_from_settings_drops_none():
    opts = SolveOptions.from_settings(gap_tol=1e-5, feas_tol=None)
    assert opts.gap_tol == 1e-5
    assert opts.feas_tol == SolveOptions().feas_tol


def test_cvxpy_backend_agrees_with_embedded(rng):
    pytest.importorskip("cvxpy")
    C = random_hermitian(3, rng)
    sol = get_backend("cvxpy").solve(_min_eig_problem(C))
    assert sol.primal_value == pytest.approx(np.linalg.eigvalsh(C)[0], abs=1e-5)
    assert sol.residuals.primal <= 1e-5
    assert sol.residuals.dual <= 1e-5


# ── Residuals, dumps, logging, settings ─────────────────────────────────
def test_measured_residuals_vanish_at_the_exact_optimum(rng):
    C = random_hermitian(4, rng)
    lam, vecs = np.linalg.eigh(C)
    v = vecs[:, :1]
    prob = _min_eig_problem(C)
    res = measure_residuals(prob, {"X": v @ v.conj().T}, {"X": C - lam[0] * np.eye(4)}, lam[0], lam[0])
    assert res.primal <= 1e-12
    assert res.dual <= 1e-12
    assert res.gap == 0.0


def test_measured_residuals_see_a_violated_equality(rng):
    C = random_hermitian(3, rng)
    prob = _min_eig_problem(C)
    res = measure_residuals(prob, {"X": np.zeros((3, 3))}, {"X": -np.eye(3)}, 0.0, np.nan)
    # ‖tr X − 1‖ / (1 + ‖b‖) with b = [1]
    assert res.primal == pytest.approx(0.5)
    assert res.dual > 0.0
    assert res.gap == np.inf


def test_dump_dir_setting_writes_every_solve(monkeypatch, tmp_path):
    monkeypatch.setattr(settings, "DUMP_DIR", str(tmp_path))
    assert SolveOptions().dump
    solve(_min_eig_problem(np.diag([1.0, 2.0])))
    solve(_min_eig_problem(np.diag([3.0, 2.0])))
    dumps = sorted(tmp_path.glob("min_eig-*.sdp.txt"))
    assert len(dumps) == 2
    assert dumps[0].read_text().startswith("# problem min_eig")


def test_no_dump_without_dump_dir(monkeypatch, tmp_path):
    monkeypatch.setattr(settings, "DUMP_DIR", None)
    monkeypatch.chdir(tmp_path)
    solve(_min_eig_problem(np.diag([1.0, 2.0])))
    assert list(tmp_path.glob("*.sdp.txt")) == []


def test_solve_outcome_is_logged_at_info(caplog):
    caplog.set_level(logging.INFO, logger="zerocap")
    solve(_min_eig_problem(np.diag([1.0, 2.0])))
    records = [r for r in caplog.records if r.name.startswith("zerocap.") and "iterations" in r.getMessage()]
    assert records
    assert records[-1].levelno == logging.INFO
    assert records[-1].getMessage().startswith(f"min_eig: {OPTIMAL}")


def test_lmi_outcome_is_logged_at_info(caplog, rng):
    caplog.set_level(logging.INFO, logger="zerocap")
    C = random_hermitian(2, rng)
    prog = LmiProgram("max_eig_logged")
    t = prog.real("t")
    prog.add_psd("t-C", t * np.eye(2) - C)
    prog.minimize(t)
    prog.solve()
    messages = [r.getMessage() for r in caplog.records if r.levelno == logging.INFO]
    assert any(m.startswith("max_eig_logged") and "value=" in m and "gap=" in m for m in messages)


def test_repeated_solves_are_identical(rng):
    C = random_hermitian(4, rng)
    first = solve(_min_eig_problem(C))
    second = solve(_min_eig_problem(C))
    assert first.primal_value == second.primal_value
    assert first.dual_value == second.dual_value
    assert first.iterations == second.iterations
    np.testing.assert_array_equal(first.X["X"], second.X["X"])


@pytest.fixture
def reloaded_settings(monkeypatch):
    """Settings re-read from the environment; the original module state is restored afterwards."""
    original_settings, original_cls = config_module.settings, config_module.Settings
    monkeypatch.setenv("ZEROCAP_GAP_TOL", "1e-4")
    fresh = importlib.reload(config_module).settings
    yield fresh
    config_module.settings, config_module.Settings = original_settings, original_cls


def test_gap_tol_environment_override(monkeypatch, reloaded_settings):
    assert reloaded_settings.GAP_TOL == 1e-4
    monkeypatch.setattr(solver_module, "settings", reloaded_settings)
    assert SolveOptions().gap_tol == 1e-4
    assert SolveOptions.from_settings(gap_tol=None).gap_tol == 1e-4
    assert SolveOptions.from_settings(gap_tol=1e-9).gap_tol == 1e-9
