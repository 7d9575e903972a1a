"""Tests for the reduced pendulum model."""

import math

import numpy as np
import pytest

from cpwalk.model import (
    AxisState,
    Side,
    VlipParams,
    capture_point,
    desired_capture_point,
    effective_gravity,
    integrate_axis,
    natural_frequency,
    orbital_energy,
    vlip_accel,
)

from oracles import series_cosh, series_sinh

PARAMS = VlipParams()  # mass 4.5, z0 0.5, g 9.81, no thrust
HALF_G = VlipParams(thrust_n=22.0725)  # vertical thrust worth g/2


def test_params_validation():
    with pytest.raises(ValueError):
        VlipParams(mass_kg=0.0)
    with pytest.raises(ValueError):
        VlipParams(z0_m=-0.1)
    with pytest.raises(ValueError):
        VlipParams(thrust_n=-1.0)
    # thrust equal to weight is the forced singularity: rejected
    with pytest.raises(ValueError, match="virtual buoyancy"):
        VlipParams(thrust_n=4.5 * 9.81)
    # tilted thrust with small vertical component is fine even above weight
    VlipParams(thrust_n=100.0, thrust_pitch_rad=math.pi / 2)


def test_effective_gravity_values():
    assert effective_gravity(PARAMS) == 9.81
    assert effective_gravity(HALF_G) == pytest.approx(9.81 - 22.0725 / 4.5, abs=1e-15)
    assert effective_gravity(HALF_G) == pytest.approx(4.905, abs=1e-12)
    # quarter-turn pitch removes the vertical component entirely
    sideways = VlipParams(thrust_n=10.0, thrust_pitch_rad=math.pi / 2)
    assert effective_gravity(sideways) == pytest.approx(9.81, abs=1e-14)


def test_natural_frequency_values():
    assert natural_frequency(PARAMS) == pytest.approx(math.sqrt(9.81 / 0.5), rel=1e-15)
    assert natural_frequency(PARAMS) == pytest.approx(4.42945, abs=1e-5)
    assert natural_frequency(HALF_G) == pytest.approx(math.sqrt(4.905 / 0.5), rel=1e-15)
    assert natural_frequency(HALF_G) == pytest.approx(3.13209, abs=1e-5)


def test_vlip_accel_values():
    assert vlip_accel(AxisState(0.0, 0.3), PARAMS) == 0.0
    assert vlip_accel(AxisState(0.1, 0.0), PARAMS) == pytest.approx(
        0.1 / 0.5 * 9.81, rel=1e-15)
    assert vlip_accel(AxisState(0.1, 0.0), PARAMS) == pytest.approx(1.962, abs=1e-12)
    tilted = VlipParams(thrust_n=10.0, thrust_pitch_rad=0.1)
    assert vlip_accel(AxisState(0.0, 0.0), tilted) == pytest.approx(
        10.0 * math.sin(0.1) / 4.5, rel=1e-15)
    assert vlip_accel(AxisState(0.0, 0.0), tilted) == pytest.approx(0.22185, abs=1e-5)


def test_orbital_energy_values():
    assert orbital_energy(AxisState(0.0, 1.0), PARAMS) == pytest.approx(0.5, abs=1e-15)
    omega = natural_frequency(PARAMS)
    # states on either eigenvector have exactly zero energy
    assert orbital_energy(AxisState(0.13, 0.13 * omega), PARAMS) == pytest.approx(0.0, abs=1e-15)
    assert orbital_energy(AxisState(0.2, 0.0), PARAMS) == pytest.approx(
        -0.5 * 9.81 * 0.04 / 0.5, rel=1e-15)
    assert orbital_energy(AxisState(0.2, 0.0), PARAMS) == pytest.approx(-0.3924, abs=1e-12)


def test_capture_point_values():
    assert capture_point(AxisState(0.4, 0.0), PARAMS) == 0.0
    assert capture_point(AxisState(0.0, 0.5), PARAMS) == pytest.approx(
        0.5 * math.sqrt(0.5 / 9.81), rel=1e-15)
    assert capture_point(AxisState(0.0, 0.5), PARAMS) == pytest.approx(0.112881, abs=1e-6)
    # halved effective gravity stretches the capture point
    assert capture_point(AxisState(0.0, 0.5), HALF_G) == pytest.approx(
        0.5 * math.sqrt(0.5 / 4.905), rel=1e-15)
    assert capture_point(AxisState(0.0, 0.5), HALF_G) == pytest.approx(0.159637, abs=1e-6)


def test_desired_capture_point_values():
    st = AxisState(0.0, 0.5)
    assert desired_capture_point(AxisState(0.2, 0.5), 0.5, 1.0, PARAMS) == 0.0
    assert desired_capture_point(st, 0.0, 1.0, PARAMS) == pytest.approx(
        capture_point(st, PARAMS), rel=1e-15)
    assert desired_capture_point(st, 0.1, 0.5, PARAMS) == pytest.approx(
        0.5 * 0.4 * math.sqrt(0.5 / 9.81), rel=1e-15)
    assert desired_capture_point(st, 0.1, 0.5, PARAMS) == pytest.approx(
        0.0451526, abs=1e-6)


def test_integrate_axis_examples():
    assert integrate_axis(AxisState(0.0, 0.0), PARAMS, 0.7) == AxisState(0.0, 0.0)
    st = AxisState(0.04, -0.3)
    assert integrate_axis(st, PARAMS, 0.0) == st
    omega = natural_frequency(PARAMS)
    out = integrate_axis(AxisState(0.1, 0.0), PARAMS, 0.05)
    assert out.p_m == pytest.approx(0.1 * series_cosh(omega * 0.05), rel=1e-13)
    assert out.v_mps == pytest.approx(0.1 * omega * series_sinh(omega * 0.05), rel=1e-13)


def test_integrate_axis_rejects_negative_dt_and_blowup():
    with pytest.raises(ValueError):
        integrate_axis(AxisState(0.1, 0.0), PARAMS, -0.01)
    with pytest.raises(OverflowError):
        integrate_axis(AxisState(1.0, 1.0), PARAMS, 1000.0)


def test_integrate_axis_tilted_thrust_matches_accel():
    # finite-difference velocity slope against the closed form
    tilted = VlipParams(thrust_n=8.0, thrust_pitch_rad=0.2)
    st = AxisState(0.03, -0.1)
    h = 1e-6
    out = integrate_axis(st, tilted, h)
    accel_fd = (out.v_mps - st.v_mps) / h
    assert accel_fd == pytest.approx(vlip_accel(st, tilted), rel=1e-6)


def test_thrust_monotonicity():
    mg = PARAMS.mass_kg * PARAMS.gravity_mps2
    thrusts = np.linspace(0.0, 0.95 * mg, 25)
    geffs, gains, omegas = [], [], []
    for th in thrusts:
        p = VlipParams(thrust_n=float(th))
        geffs.append(effective_gravity(p))
        gains.append(math.sqrt(p.z0_m / effective_gravity(p)))
        omegas.append(natural_frequency(p))
    assert all(b < a for a, b in zip(geffs, geffs[1:]))
    assert all(b > a for a, b in zip(gains, gains[1:]))
    assert all(b < a for a, b in zip(omegas, omegas[1:]))


def test_energy_conserved_by_exact_flow():
    rng = np.random.default_rng(11)
    for _ in range(100):
        mass = float(rng.uniform(1.0, 10.0))
        params = VlipParams(
            mass_kg=mass,
            z0_m=float(rng.uniform(0.2, 1.2)),
            thrust_n=float(rng.uniform(0.0, 0.9)) * mass * 9.81,
        )
        st = AxisState(float(rng.uniform(-0.3, 0.3)), float(rng.uniform(-1.0, 1.0)))
        e0 = orbital_energy(st, params)
        scale = 0.5 * st.v_mps**2 + 0.5 * effective_gravity(params) * st.p_m**2 / params.z0_m
        scale = max(scale, 1e-6)
        # split a moderate horizon into uneven pieces; energy must ride along.
        # The energy residual floats at eps * e^{2 omega t} relative, so cap
        # the unstable growth at omega*t = 6 to keep 1e-10 representable.
        t_total = min(3.0, 6.0 / natural_frequency(params))
        pieces = rng.uniform(0.001, 0.4, size=8)
        pieces = pieces / pieces.sum() * t_total
        cur = st
        for dt in pieces:
            cur = integrate_axis(cur, params, float(dt))
            assert abs(orbital_energy(cur, params) - e0) / scale < 1e-10


def test_capture_property_zeroes_energy():
    rng = np.random.default_rng(12)
    for _ in range(500):
        params = VlipParams(thrust_n=float(rng.uniform(0.0, 0.9) * 4.5 * 9.81))
        st = AxisState(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-2.0, 2.0)))
        relocated = AxisState(-capture_point(st, params), st.v_mps)
        assert abs(orbital_energy(relocated, params)) < 1e-12


def test_saddle_structure():
    omega = natural_frequency(PARAMS)
    stable = AxisState(0.1, -0.1 * omega)
    unstable = AxisState(0.1, 0.1 * omega)
    out_s = integrate_axis(stable, PARAMS, 1.0)
    out_u = integrate_axis(unstable, PARAMS, 1.0)
    assert abs(out_s.p_m) < 0.1 * math.exp(-omega * 0.99)
    assert abs(out_u.p_m) > 0.1 * math.exp(omega * 0.99)
    # stable ray keeps contracting toward the origin
    cur = stable
    prev = abs(stable.p_m)
    for _ in range(10):
        cur = integrate_axis(cur, PARAMS, 0.2)
        assert abs(cur.p_m) < prev
        prev = abs(cur.p_m)


def test_flow_composition():
    rng = np.random.default_rng(13)
    for _ in range(200):
        params = VlipParams(thrust_n=float(rng.uniform(0.0, 30.0)),
                            thrust_pitch_rad=float(rng.uniform(-0.3, 0.3)))
        st = AxisState(float(rng.uniform(-0.3, 0.3)), float(rng.uniform(-1.0, 1.0)))
        dt = float(rng.uniform(0.01, 0.5))
        once = integrate_axis(st, params, dt)
        twice = integrate_axis(integrate_axis(st, params, dt / 2), params, dt / 2)
        assert twice.p_m == pytest.approx(once.p_m, rel=1e-12, abs=1e-15)
        assert twice.v_mps == pytest.approx(once.v_mps, rel=1e-12, abs=1e-15)


def test_side_enum():
    assert Side.LEFT.other() is Side.RIGHT
    assert Side.RIGHT.other() is Side.LEFT
