import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from rvac.boundary import (
    det_b1hat_closed_form,
    normal_recovery,
    vacuum_boundary_eigen,
    vacuum_boundary_matrix,
    w_transform,
)
from rvac.errors import SingularBoundaryMatrix, SuperluminalInterface
from rvac.state import make_base_state
from rvac.symbols import assemble_plasma_symbols, boundary_symbols, maxwell_symbols

from conftest import family_base, random_base


def test_spectrum_flat_front_at_rest():
    s = vacuum_boundary_eigen(0.0)
    assert sorted(s.lambdas) == [-1, -1, 0, 0, 1, 1]
    assert s.mismatch < 1e-12


def test_spectrum_expansion():
    s = vacuum_boundary_eigen(-0.5)
    assert s.lambdas == (0.5, 0.5, -1.5, -1.5, -0.5, -0.5)
    assert s.regime == "expansion" and s.n_incoming_vacuum == 2 and s.n_incoming_plasma == 1
    assert s.mismatch < 1e-12


def test_spectrum_shrinkage():
    s = vacuum_boundary_eigen(0.5)
    assert s.regime == "shrinkage" and s.n_incoming_vacuum == 4


def test_superluminal_front_rejected():
    with pytest.raises(SuperluminalInterface):
        vacuum_boundary_eigen(1.5, 0.3, 0.2)


def test_boundary_matrix_is_symmetric_printed_form():
    k, a, b = -0.2, 0.4, -0.9
    printed = np.array(
        [
            [-k, 0, 0, 0, b, -a],
            [0, -k, 0, -b, 0, -1],
            [0, 0, -k, a, 1, 0],
            [0, -b, a, -k, 0, 0],
            [b, 0, 1, 0, -k, 0],
            [-a, -1, 0, 0, 0, -k],
        ]
    )
    M = vacuum_boundary_matrix(k, a, b)
    assert np.array_equal(M, M.T)
    assert np.array_equal(M, printed)


@settings(max_examples=300, deadline=None)
@given(
    dt=st.floats(-0.999, 0.999),
    d2=st.floats(-3, 3),
    d3=st.floats(-3, 3),
)
def test_closed_form_spectrum_property(dt, d2, d3):
    norm = np.sqrt(1 + d2 * d2 + d3 * d3)
    s = vacuum_boundary_eigen(dt * norm, d2, d3)
    assert s.mismatch < 1e-10 * max(1.0, norm)


def test_det_b1hat_closed_form():
    for kappa in np.linspace(-0.99, -0.01, 100):
        num = np.linalg.det(maxwell_symbols().B1 - kappa * np.eye(6))
        assert num == pytest.approx(det_b1hat_closed_form(kappa), rel=1e-12)
    assert det_b1hat_closed_form(-0.5) == pytest.approx(0.140625)


def test_w_transform_rest_frame_zero_field():
    b = make_base_state(p=1, u2=0, u3=0, H2=0, H3=0, Hc2=1, Hc3=0, E1=0, kappa=-0.3)
    wt = w_transform(b)
    # K maps (p, u, H, S) to (q, Gamma v1, u2, u3, H, S): only the u1 entry is rescaled
    assert np.allclose(np.delete(np.delete(wt.K, 1, 0), 1, 1), np.eye(7), atol=1e-15)
    assert wt.K[1, 1] == pytest.approx(1 - 0.09)
    assert np.allclose(wt.K[1, 2:4], 0)


def test_w_transform_structure(rng):
    for _ in range(50):
        b = random_base(rng)
        wt = w_transform(b)
        A = boundary_symbols(b).A1hat
        scale = np.max(np.abs(A))
        M = wt.J.T @ A @ wt.J
        assert abs(M[0, 1] - 1) < 1e-10 * scale and abs(M[1, 0] - 1) < 1e-10 * scale
        M[0, 1] = M[1, 0] = 0
        assert np.max(np.abs(M)) < 1e-10 * scale
        assert np.max(np.abs(wt.J @ wt.K - np.eye(8))) < 1e-12


def test_recovery_requires_nonzero_kappa():
    b = family_base(E1=0.1, Hc2=0.5, Hc3=0)
    with pytest.raises(SingularBoundaryMatrix):
        normal_recovery(b)


def _vacuum_plane_wave(rng, kappa):
    """Random superposition of vacuum plane waves: returns (dtV, d1V, d2V, d3V)."""
    vs = maxwell_symbols()
    jets = np.zeros((4, 6))
    for _ in range(3):
        xi, g2, g3 = rng.normal(size=3)
        w, modes = np.linalg.eigh(xi * (vs.B1 - kappa * np.eye(6)) - g2 * vs.B2 - g3 * vs.B3)
        for k in range(6):
            a = rng.normal() * modes[:, k]
            jets += np.outer((w[k], xi, g2, g3), a)
    return jets


def test_vacuum_recovery_constant_and_plane_waves(rng):
    b = random_base(rng)
    nr = normal_recovery(b)
    assert not np.any(nr.vacuum_map @ np.zeros(18))
    for _ in range(20):
        b = random_base(rng)
        nr = normal_recovery(b)
        dt, d1, d2, d3 = _vacuum_plane_wave(rng, b.kappa)
        got = nr.vacuum_map @ np.concatenate((dt, d2, d3))
        assert np.max(np.abs(got - d1)) <= 1e-10 * max(1.0, np.max(np.abs(d1)))


def _plasma_plane_wave(rng, base):
    """Superposition of divergence-free plasma plane waves with F = 0."""
    ps = assemble_plasma_symbols(base.plasma, base.eos)
    A1h = boundary_symbols(base).A1hat
    jets = np.zeros((4, 8))
    for _ in range(3):
        xi, g2, g3 = rng.normal(size=3)
        w, modes = sla.eigh(xi * A1h + g2 * ps.A2 + g3 * ps.A3, ps.A0)
        for k in range(8):
            u = modes[:, k]
            if abs(xi * u[4] + g2 * u[5] + g3 * u[6]) > 1e-9:
                continue
            jets += np.outer((-w[k], xi, g2, g3), rng.normal() * u)
    return jets


def test_plasma_recovery_plane_waves(rng):
    for _ in range(20):
        b = random_base(rng)
        nr = normal_recovery(b)
        dt, d1, d2, d3 = _plasma_plane_wave(rng, b)
        got = nr.plasma_map @ np.concatenate((dt, d2, d3, np.zeros(8)))
        truth = np.array([nr.v1_row @ d1, nr.q_row @ d1])
        assert np.max(np.abs(got - truth)) <= 1e-9 * max(1.0, np.max(np.abs(truth)))
        h = nr.h_map @ np.concatenate((dt, d2, d3))
        assert h[0] == pytest.approx(d1[4], abs=1e-10 * max(1.0, abs(d1[4])))


def test_plasma_recovery_with_source(rng):
    # arbitrary jets define the source exactly; recovery must account for it
    for _ in range(20):
        b = random_base(rng)
        nr = normal_recovery(b)
        ps = assemble_plasma_symbols(b.plasma, b.eos)
        A1h = boundary_symbols(b).A1hat
        dt, d1, d2, d3 = rng.normal(size=(4, 8))
        F = ps.A0 @ dt + A1h @ d1 + ps.A2 @ d2 + ps.A3 @ d3
        got = nr.plasma_map @ np.concatenate((dt, d2, d3, F))
        truth = np.array([nr.v1_row @ d1, nr.q_row @ d1])
        assert np.max(np.abs(got - truth)) <= 1e-9 * max(1.0, np.max(np.abs(truth)))
