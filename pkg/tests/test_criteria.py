import json
import math
from pathlib import Path

import jsonschema
import numpy as np
import pytest

import qtherm
from qtherm.criteria import CRITERIA_NAMES, dephase, run_criteria_suite
from qtherm.ensembles import random_density, random_hermitian
from qtherm.equilibrium import DensityOperator, entropy
from qtherm.spectral import eigh

SCHEMAS = Path(qtherm.__file__).parent / "schemas"


def majorizes(x, y, tol=1e-12):
    """True when x majorizes y (sorted partial sums of x dominate those of y)."""
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    return bool(np.all(cx >= cy - tol))


def test_dephase_diagonal_fixed_point():
    rho = np.diag([0.6, 0.3, 0.1])
    assert np.allclose(dephase(rho, np.eye(3)).matrix, rho, atol=0)


def test_dephase_superposition():
    plus = DensityOperator.pure([1, 1])
    out = dephase(plus, np.eye(2))
    assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-15)
    assert entropy(plus) < 1e-15
    assert entropy(out) == pytest.approx(math.log(2), abs=1e-15)


def test_dephase_random_states_majorization(rng):
    for _ in range(50):
        rho = random_density(4, rng)
        basis = eigh(random_hermitian(4, rng)).eigenvectors
        out = dephase(rho, basis)
        assert majorizes(rho.eigenvalues, out.eigenvalues)
        assert entropy(out) >= entropy(rho) - 1e-12


def test_dephase_in_own_eigenbasis_unchanged(rng):
    rho = random_density(4, rng)
    v = eigh(rho.matrix).eigenvectors
    assert entropy(dephase(rho, v)) == pytest.approx(entropy(rho), abs=1e-12)


def test_dephase_rejects_non_orthonormal():
    with pytest.raises(ValueError, match="not orthonormal"):
        dephase(np.eye(2) / 2, np.array([[1, 1], [0, 1]]))


@pytest.fixture(scope="module")
def report():
    return run_criteria_suite()


def test_suite_all_pass(report):
    assert [r.number for r in report.results] == list(range(1, 10))
    failing = {r.number: r.witness for r in report.results if r.status != "pass"}
    assert not failing
    assert report.all_pass


def test_suite_names(report):
    assert tuple(r.name for r in report.results) == CRITERIA_NAMES


def test_projector_witness(report):
    assert report[5].witness["max_pure_entropy"] < 1e-12


def test_gas_deviation_below_threshold(report):
    assert report[9].witness["relative_deviation"] < 0.05
    assert report[9].witness["thermal_levels"] >= 1000


def test_report_schema(report):
    schema = json.loads((SCHEMAS / "criteria.schema.json").read_text())
    jsonschema.validate(json.loads(json.dumps(report.to_dict())), schema)
    assert "ALL PASS" in report.to_text()


def test_suite_deterministic():
    a = run_criteria_suite(dims=(2, 3), trials=3, seed=9).to_dict()
    b = run_criteria_suite(dims=(2, 3), trials=3, seed=9).to_dict()
    assert a == b


@pytest.mark.parametrize("kw", [{"dims": (1,)}, {"dims": (65,)}, {"dims": ()}, {"trials": 0}])
def test_suite_rejects_bad_config(kw):
    with pytest.raises(ValueError):
        run_criteria_suite(**kw)
