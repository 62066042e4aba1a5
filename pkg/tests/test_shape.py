import csv
import io
import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from qtherm.equilibrium import canonical_state
from qtherm.fundamental import quantum_box_entropy
from qtherm.hamiltonians import BoxShape, box_spectrum_for_beta
from qtherm.output import csv_text
from qtherm.shape import (
    ShapeTrajectory,
    entropy_gap,
    isochoric_family,
    load_trajectory,
    semiclassical_scan,
    sinuous_trajectory,
    total_variation,
    trajectory_run,
    two_phase_gibbs_ratio,
)

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "sinuous_trace.csv"
CUBE = BoxShape(1, 1, 1)
PRISM = BoxShape(2, 1, 0.5)


def test_isochoric_cube():
    s = isochoric_family(1.0, (1, 1))
    assert s.sides == pytest.approx((1, 1, 1), abs=1e-15)


@pytest.mark.parametrize("aspect", [(2, 2), (0.5, 3.0), (1.3, 0.7)])
def test_isochoric_volume_and_ratios(aspect):
    s = isochoric_family(2.5, aspect)
    assert s.volume() == pytest.approx(2.5, rel=1e-14)
    assert s.b / s.c == pytest.approx(aspect[0], rel=1e-14)
    assert s.c / s.d == pytest.approx(aspect[1], rel=1e-14)


def test_isochoric_rejects_bad_ratio():
    with pytest.raises(ValueError, match="r_b"):
        isochoric_family(1.0, (0.0, 1.0))


def test_gap_identical_shapes_zero():
    assert entropy_gap(CUBE, CUBE, 20.0) == 0.0


def test_gap_small_energy_positive():
    assert entropy_gap(CUBE, PRISM, 8.0) > 0.01


def test_gap_unequal_volume_rejected():
    with pytest.raises(ValueError, match="unequal volumes"):
        entropy_gap(CUBE, BoxShape(1, 1, 2), 10.0)


def test_gap_rejects_energy_below_ground():
    with pytest.raises(ValueError, match="ground level"):
        entropy_gap(CUBE, PRISM, 4.0)  # prism ground level is 5.25


def test_quantum_box_entropy_meets_tail_bound():
    for E in (6.0, 40.0, 300.0):
        S, beta, spec = quantum_box_entropy(E, PRISM)
        assert spec.tail_weight(beta) < 1e-8
        assert canonical_state(spec, beta).energy == pytest.approx(E, rel=1e-10)


def test_scan_single_point_matches_gap():
    rows = semiclassical_scan(CUBE, PRISM, [30.0])
    assert rows[0].gap == pytest.approx(entropy_gap(CUBE, PRISM, 30.0), abs=1e-15)


def test_scan_identity_pair_zero():
    rows = semiclassical_scan(CUBE, CUBE, [10.0, 50.0, 200.0])
    assert all(r.gap == 0.0 for r in rows)


def test_scan_sorted_and_relative_gap_trend():
    rows = semiclassical_scan(CUBE, PRISM, [100.0, 10.0, 30.0])
    assert [r.energy for r in rows] == [10.0, 30.0, 100.0]
    rel = [r.relative_gap for r in rows]
    assert rel[0] > rel[1] > rel[2]


def _run(samples, mode="constant_temperature", value=20.0, retained=16):
    traj = ShapeTrajectory.from_aspects(range(len(samples)), samples, 1.0, mode, value)
    return trajectory_run(traj, retained_levels=retained)


def test_constant_shape_zero_steps():
    tr = _run([(1.4, 0.8)] * 5)
    assert np.all(tr.reallocation_step == 0.0)
    assert np.all(tr.entropy == tr.entropy[0])
    assert np.all(tr.occupations == tr.occupations[0])


@pytest.mark.parametrize("mode,value", [("constant_temperature", 20.0), ("constant_energy", 100.0)])
def test_closed_loop_returns(mode, value):
    tr = _run([(1, 1), (1.5, 1.2), (2, 2), (1.5, 1.2), (1, 1)], mode, value)
    assert np.max(np.abs(tr.occupations[-1] - tr.occupations[0])) < 1e-10
    assert np.all(tr.reallocation_step[1:] > 0)
    if mode == "constant_energy":
        assert np.allclose(tr.energy, value, rtol=1e-10)


def test_trace_occupations_normalized():
    tr = _run([(1, 1), (2, 2)])
    assert np.allclose(tr.full_occupation_sums, 1.0, atol=1e-12)


def test_reallocation_step_matches_direct_tv():
    # oracle: recompute both states and the distance over matched quantum numbers
    tr = _run([(1, 1), (1.2, 0.9)])
    beta = 1 / 20.0
    states = []
    for s in tr.shapes:
        spec = box_spectrum_for_beta(s, beta)
        p = canonical_state(spec, beta).occupations
        states.append({tuple(q): float(x) for q, x in zip(spec.quantum_numbers.tolist(), p)})
    keys = set(states[0]) | set(states[1])
    tv = 0.5 * sum(abs(states[0].get(q, 0.0) - states[1].get(q, 0.0)) for q in keys)
    assert tr.reallocation_step[1] == pytest.approx(tv, rel=1e-12)


def test_total_variation_union():
    assert total_variation(np.array([1, 2]), [0.5, 0.5], np.array([2, 3]), [0.5, 0.5]) == pytest.approx(0.5)


def test_constant_energy_infeasible_names_sample():
    with pytest.raises(ValueError, match="sample 1"):
        _run([(1, 1), (6, 6)], "constant_energy", 10.0)


def test_trajectory_validation():
    with pytest.raises(ValueError, match="strictly increasing"):
        ShapeTrajectory((0.0, 0.0), (CUBE, CUBE), "constant_temperature", 1.0)
    with pytest.raises(ValueError, match="volume"):
        ShapeTrajectory((0.0, 1.0), (CUBE, BoxShape(1, 1, 1.1)), "constant_temperature", 1.0)
    with pytest.raises(ValueError, match="mode"):
        ShapeTrajectory((0.0,), (CUBE,), "adiabatic", 1.0)


def test_load_trajectory_from_file_and_errors(tmp_path):
    traj, opts = load_trajectory(DATA / "loop.json")
    assert traj.shapes[0] == traj.shapes[-1] and opts["retained_levels"] == 16
    bad = json.loads((DATA / "loop.json").read_text())
    bad["samples"][0]["r_b"] = -1
    with pytest.raises(ValueError, match="schema"):
        load_trajectory(bad)
    del bad["T"]
    bad["samples"][0]["r_b"] = 1
    with pytest.raises(ValueError, match="requires field 'T'"):
        load_trajectory(bad)
    with pytest.raises(ValueError, match="not valid JSON"):
        load_trajectory("{not json")


def test_two_phase_common_temperature():
    s = ShapeTrajectory.from_aspects([0, 1, 2], [(1, 1), (1.3, 1.1), (1, 1)], 1.0, "constant_temperature", 10.0)
    c = ShapeTrajectory.from_aspects([0, 1, 2], [(1, 1), (0.8, 1.4), (1, 1)], 0.5, "constant_temperature", 10.0)
    assert np.all(two_phase_gibbs_ratio(s, c) < 1e-10)


def _golden_text(tr):
    return csv_text(tr.header(), tr.rows())


@pytest.fixture(scope="module")
def sinuous():
    return trajectory_run(sinuous_trajectory(), retained_levels=16)


def test_sinuous_steps_positive(sinuous):
    assert np.all(sinuous.reallocation_step[1:] > 0)
    assert np.ptp(sinuous.entropy) > 1e-3
    assert np.ptp([s.volume() for s in sinuous.shapes]) < 1e-12


def test_sinuous_matches_config_file(sinuous):
    traj, opts = load_trajectory(DATA / "sinuous.json")
    tr = trajectory_run(traj, opts["retained_levels"], opts["tail_tol"])
    assert np.allclose(tr.occupations, sinuous.occupations, rtol=1e-12, atol=1e-15)


def test_sinuous_golden(sinuous):
    text = _golden_text(sinuous)
    if os.environ.get("QTHERM_REGEN_GOLDEN"):
        GOLDEN.write_text(text)
    golden = list(csv.reader(io.StringIO(GOLDEN.read_text())))
    fresh = list(csv.reader(io.StringIO(text)))
    assert golden[0] == fresh[0]
    g = np.array(golden[1:], dtype=float)
    f = np.array(fresh[1:], dtype=float)
    assert g.shape == f.shape == (200, 8 + 16)
    assert np.allclose(f, g, rtol=1e-9, atol=1e-14)
