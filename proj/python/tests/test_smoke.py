import math

import numpy as np
import pytest

import qclock


def test_d2_optimum():
    psi = qclock.time_state(2, 1)
    r = qclock.precision([1 / math.sqrt(2), 0.0], psi)
    assert abs(r["R"] - 4.0) < 1e-9
    assert abs(qclock.precision_ode([1 / math.sqrt(2), 0.0], psi)["R"] - 4.0) < 1e-6


def test_erlang():
    for d in range(1, 6):
        assert abs(qclock.erlang_precision(d)["R"] - d) < 1e-9


def test_delay_density_matches_closed_form():
    t, p = qclock.delay_density([0.0, 0.3], qclock.time_state(2, 0), 10.0, 20)
    ref = [qclock.two_level_density(0.3, x) for x in t]
    assert np.max(np.abs(np.array(p) - ref)) < 1e-9


def test_optimizer_and_robustness():
    opt = qclock.optimize_precision(3, restarts=4, seed=3, threads=1)
    assert opt["R"] > 3.0
    assert abs(np.linalg.norm(opt["psi"]) - 1.0) < 1e-12
    worst, n = qclock.robustness_worst_case(opt["V"], opt["psi"], 0.0, 0.0)
    assert worst == opt["R"]
    sweep = qclock.temperature_sweep(opt["V"], opt["psi"], [0.0, 1e-3])
    assert sweep[1][1] <= sweep[0][1] + 1e-9


def test_entropy():
    e = qclock.entropy_per_tick([0.0, 0.5], qclock.time_state(2, 0), beta=1.0, gap=30.0)
    assert abs(e["deltaS"] - qclock.entropy_d2_closed_form(0.5, 1.0, 1.0, 0.0, 30.0)) < 1e-6
    lad = qclock.ladder_entropy_comparison(5, beta_c=0.4)
    assert abs(lad["deltaS"] - lad["reference"]) < 1e-6 * abs(lad["reference"])


def test_ring():
    r = qclock.ring_check(2, 3000.0, 2048)
    assert max(r["shift_errors"]) < 3e-3


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        qclock.precision([1.0], qclock.time_state(2, 0))
    with pytest.raises(qclock.NonTickingClock):
        qclock.precision([0.0, 0.0], qclock.time_state(2, 0))
