from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rezqu.basis import DeviceParams, block_labels
from rezqu.dynamics import comoving_phases, final_state
from rezqu.move import (
    MEMORY_TO_QUBIT,
    ErfFamily,
    InvalidPulse,
    MoveDesign,
    PiecewiseFamily,
    analytic_design,
    bus_tail_residual,
    design_front_ramp,
    move_error,
    move_populations,
    optimize_move,
    transfer_error,
)
from rezqu.spectra import eigensystem

P = DeviceParams()


@pytest.fixture(scope="module")
def piecewise():
    return analytic_design(P, PiecewiseFamily())


@pytest.fixture(scope="module")
def piecewise_opt(piecewise):
    return optimize_move(P, start=piecewise, n_starts=2)


def _endpoint_state(design):
    pulse = design.pulse(P)
    e0 = eigensystem(P, pulse.omega(0.0), 1)
    e1 = eigensystem(P, pulse.omega(pulse.duration), 1)
    return pulse, final_state(P, pulse, e0.vector("010")), e1


@given(st.floats(0, 2 * np.pi))
def test_phase_freedom(piecewise, phi):
    _, psi, e1 = _endpoint_state(piecewise)
    target = e1.vector("100")
    base, _ = transfer_error(psi, target)
    turned, _ = transfer_error(psi, np.exp(1j * phi) * target)
    assert abs(turned - base) < 1e-14


def test_frame_covariance(piecewise):
    """Bare-frame error equals the co-moving one: the frame change is a common diagonal phase."""
    pulse, psi, e1 = _endpoint_state(piecewise)
    ph = np.exp(1j * comoving_phases(P, pulse, pulse.duration, tuple(block_labels(1)))[0])
    target = e1.vector("100")
    assert abs(transfer_error(psi * ph, target * ph)[0] - transfer_error(psi, target)[0]) < 1e-10


def test_analytic_design_meets_front_condition(piecewise):
    assert abs(bus_tail_residual(P, piecewise.pulse(P))) < 1e-8
    assert 0 < piecewise.achieved_error <= 1e-3
    assert piecewise.validity_flags(P) == {"small_overshoot": True, "small_tau": True}


def test_zero_flat_part_fails_to_transfer(piecewise):
    assert move_error(P, replace(piecewise, flat_duration=0.0).pulse(P)).err > 0.9


def test_time_reversal_symmetry(piecewise):
    """The Hamiltonian is real, so the reversed pulse moves memory to qubit with the same error."""
    rev = replace(piecewise, direction=MEMORY_TO_QUBIT)
    assert abs(move_error(P, rev.pulse(P), MEMORY_TO_QUBIT).err - piecewise.achieved_error) < 1e-12


def test_uncoupled_bus_leaves_front_free():
    d = analytic_design(P.replace(g_b=0.0), PiecewiseFamily())
    assert "bus decoupled: front ramp unconstrained" in d.notes
    assert d.front == PiecewiseFamily().default_front(P, d.D)
    assert design_front_ramp(P.replace(g_b=0.0), ErfFamily(), 0.0) == ((0.0, 1.0), False)


def test_fixed_front_is_kept():
    d = analytic_design(P, ErfFamily(f_start=6.5), front=(0.0, 1.0))
    assert d.front == (0.0, 1.0)
    assert "front ramp fixed by caller" in d.notes


@pytest.mark.parametrize(
    "family,front,flat,D",
    [
        (PiecewiseFamily(), (0.5, 6.8), -1.0, 0.0),
        (PiecewiseFamily(), (5.0, 6.8), 5.0, 0.0),
        (PiecewiseFamily(), (1e-6, 6.8), 5.0, 0.0),
        (ErfFamily(), (50.0, 1.0), 5.0, 0.0),
    ],
)
def test_invalid_pulses(family, front, flat, D):
    with pytest.raises(InvalidPulse):
        family.build(P, front, flat, D)


def test_design_record_roundtrip(piecewise):
    back = MoveDesign.loads(piecewise.dumps())
    assert back == piecewise
    assert back.pulse(P).duration == piecewise.pulse(P).duration


@pytest.mark.slow
def test_analytic_neighbourhood():
    worst = 0.0
    for g in (0.0225, 0.0275):
        for df in (-0.1, 0.1):
            p = P.replace(g_m=g, g_b=g)
            fam = PiecewiseFamily(f_start=6.7 + df, f_end=6.5 + df)
            worst = max(worst, analytic_design(p, fam).achieved_error)
    assert worst <= 1e-3


@pytest.mark.slow
def test_four_param_optimum_conditions(piecewise_opt):
    rep = move_error(P, piecewise_opt.pulse(P))
    assert rep.err < 1e-10
    assert np.sqrt(rep.residual_start) < 1e-5
    assert np.sqrt(rep.tail_gamma) < 1e-5
    assert piecewise_opt.converged and piecewise_opt.mode == "four_param"


@pytest.mark.slow
def test_occupied_bus_error(piecewise_opt):
    from rezqu.move import move_with_occupied_bus

    assert 2e-5 <= move_with_occupied_bus(P, piecewise_opt) <= 5e-4


@pytest.mark.slow
@settings(max_examples=1, deadline=None)
@given(st.just(None))
def test_optimizer_independent_of_workers(_):
    start = analytic_design(P, PiecewiseFamily())
    a = optimize_move(P, start=start, mode="two_param", n_starts=2, max_evals=150, restarts=0, workers=1)
    b = optimize_move(P, start=start, mode="two_param", n_starts=2, max_evals=150, restarts=0, workers=2)
    assert a == b


def test_stagnation_warning(piecewise):
    from rezqu.move import OptimizerStagnation

    with pytest.warns(OptimizerStagnation):
        d = optimize_move(P, start=piecewise, mode="two_param", n_starts=1, max_evals=5, restarts=0, target=1e-12)
    assert not d.converged and d.achieved_error <= piecewise.achieved_error


def test_populations_export(piecewise):
    traj = move_populations(P, piecewise.pulse(P), sample_every=0.1)
    assert set(traj) >= {"t_ns", "f_q_ghz", "pop_100", "pop_010", "pop_001", "pop_eigen_100"}
    total = traj["pop_100"] + traj["pop_010"] + traj["pop_001"]
    assert np.allclose(total, 1.0, atol=1e-10)
    assert traj["pop_eigen_100"][-1] == pytest.approx(1 - piecewise.achieved_error, abs=1e-9)
